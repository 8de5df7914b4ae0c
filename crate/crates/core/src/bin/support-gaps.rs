fn main() {
    std::process::exit(support_gaps::cli::main_with_args(std::env::args_os()));
}
