fn main() {
    std::process::exit(kgaps::cli::run());
}
