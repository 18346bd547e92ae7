use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let outcome = fdim_cli::run(&argv);
    match &outcome.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.stdout) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(fdim_cli::EXIT_ERROR as u8);
            }
        }
        None => {
            let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
        }
    }
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.exit as u8)
}
