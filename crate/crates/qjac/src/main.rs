fn main() {
    std::process::exit(qjac::cli::run());
}
