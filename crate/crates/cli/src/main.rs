fn main() {
    std::process::exit(biloc_cli::main_with_args(std::env::args().collect()));
}
