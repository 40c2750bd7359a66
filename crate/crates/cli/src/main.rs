use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(landscape_lab::run(std::env::args_os()))
}
