use std::process::ExitCode;

fn main() -> ExitCode {
    bun2::app::main_entry()
}
