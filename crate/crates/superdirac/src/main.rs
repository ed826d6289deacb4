fn main() {
    std::process::exit(superdirac::cli::main_with_args(std::env::args_os()));
}
