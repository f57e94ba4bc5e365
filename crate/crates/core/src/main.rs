fn main() {
    std::process::exit(qzeta::cli::main());
}
