fn main() {
    std::process::exit(heegner::cli::main_with_args(std::env::args_os()));
}
