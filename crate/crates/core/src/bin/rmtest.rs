fn main() {
    std::process::exit(rmtest::cli::run(std::env::args_os()));
}
