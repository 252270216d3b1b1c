fn main() {
    std::process::exit(affsq::cli::main_from_env());
}
