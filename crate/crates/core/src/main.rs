use std::process::ExitCode;

fn main() -> ExitCode {
    porous_platform::cli::main()
}
