fn main() {
    std::process::exit(isoprofile::cli::main());
}
