fn main() {
    std::process::exit(repct::cli::run());
}
