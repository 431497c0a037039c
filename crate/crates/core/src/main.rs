fn main() {
    std::process::exit(tikhonov_core::cli::main_with_args(std::env::args_os()));
}
