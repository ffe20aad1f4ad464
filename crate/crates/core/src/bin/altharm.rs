fn main() {
    std::process::exit(altharm::cli::run());
}
