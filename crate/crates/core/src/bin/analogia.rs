fn main() {
    std::process::exit(analogia::cli::main_with_args(std::env::args_os()));
}
