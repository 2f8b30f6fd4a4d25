fn main() {
    std::process::exit(bergman_lab::cli::main_from_env());
}
