use std::process::ExitCode;

fn main() -> ExitCode {
    forecast_select::cli::run(std::env::args_os())
}
