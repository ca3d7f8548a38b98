use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(fermicorr::cli::run(std::env::args_os()))
}
