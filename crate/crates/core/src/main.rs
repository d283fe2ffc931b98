fn main() {
    std::process::exit(padic_potts::cli::run());
}
