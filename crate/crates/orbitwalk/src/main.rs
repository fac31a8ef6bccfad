use std::process::ExitCode;

fn main() -> ExitCode {
    orbitwalk::cli::run()
}
