fn main() {
    std::process::exit(cartier_lab::cli::main_with_args(std::env::args_os()));
}
