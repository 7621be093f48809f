fn main() {
    std::process::exit(badapprox::cli::run(std::env::args_os()));
}
