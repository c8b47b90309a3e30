fn main() {
    std::process::exit(holobench::cli::main_with_args(std::env::args_os()));
}
