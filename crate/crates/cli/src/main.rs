use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(dyad_cli::run(std::env::args()) as u8)
}
