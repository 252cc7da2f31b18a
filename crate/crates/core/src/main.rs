use std::process::ExitCode;

fn main() -> ExitCode {
    zgrade::cli::run()
}
