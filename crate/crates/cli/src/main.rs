fn main() {
    std::process::exit(nestpol_cli::main_with_args(std::env::args_os()));
}
