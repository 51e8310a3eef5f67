fn main() {
    std::process::exit(magnon_sagnac::cli::run(std::env::args().collect()));
}
