use std::process::ExitCode;

fn main() -> ExitCode {
    nodal_radius::cli::main_with_args(std::env::args_os())
}
