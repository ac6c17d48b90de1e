use std::io;

fn main() {
    let stdin = io::stdin();
    let code = editdict_cli::run_cli(
        std::env::args_os(),
        &mut stdin.lock(),
        &mut io::BufWriter::new(io::stdout().lock()),
        &mut io::stderr(),
    );
    std::process::exit(code);
}
