fn main() {
    std::process::exit(ufolab::cli::main());
}
