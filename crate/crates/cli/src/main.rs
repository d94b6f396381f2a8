fn main() {
    std::process::exit(cvbell_cli::main_with_args(std::env::args_os()));
}
