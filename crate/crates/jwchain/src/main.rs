fn main() {
    std::process::exit(jwchain::cli::run(std::env::args_os()));
}
