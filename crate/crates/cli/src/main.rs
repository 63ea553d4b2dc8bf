fn main() {
    let outcome = polcyl_cli::run_command(std::env::args_os());
    print!("{}", outcome.report);
    std::process::exit(outcome.code);
}
