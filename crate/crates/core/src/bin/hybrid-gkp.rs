fn main() {
    std::process::exit(hybrid_gkp::cli::main_with_args(std::env::args_os()));
}
