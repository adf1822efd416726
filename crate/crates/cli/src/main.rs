fn main() {
    std::process::exit(normcone_cli::main_with_args(std::env::args_os()));
}
