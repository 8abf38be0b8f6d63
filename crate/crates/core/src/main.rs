fn main() {
    std::process::exit(blm::cli::run_cli(std::env::args_os()));
}
