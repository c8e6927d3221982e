fn main() {
    std::process::exit(ineq_cli::run(std::env::args_os()));
}
