use std::process::ExitCode;

fn main() -> ExitCode {
    dynamical_casimir::cli::main()
}
