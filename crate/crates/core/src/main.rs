fn main() {
    std::process::exit(hetpack::cli::main_with(std::env::args_os()));
}
