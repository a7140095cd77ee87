use std::process::ExitCode;

fn main() -> ExitCode {
    kerr_topology::cli::main()
}
