fn main() {
    std::process::exit(nmdiff::cli::main_with(std::env::args_os()));
}
