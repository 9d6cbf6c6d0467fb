fn main() {
    std::process::exit(quantcrb::cli::main_with_std());
}
