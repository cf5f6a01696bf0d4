use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(qmorse::cli::run(std::env::args_os()))
}
