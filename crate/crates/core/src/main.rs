fn main() {
    std::process::exit(hsdist::cli::main_with_args(std::env::args_os()));
}
