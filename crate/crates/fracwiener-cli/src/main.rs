use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(fracwiener_cli::run(std::env::args_os()) as u8)
}
