fn main() {
    std::process::exit(klq::cli::main_with_args(std::env::args_os()));
}
