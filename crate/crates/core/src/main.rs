fn main() {
    std::process::exit(gapforge::cli::main_with_env());
}
