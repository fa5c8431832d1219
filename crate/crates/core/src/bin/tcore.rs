fn main() {
    std::process::exit(tcore::cli::main_with_args(std::env::args_os()));
}
