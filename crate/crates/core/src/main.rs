fn main() {
    std::process::exit(densitylab::cli::main_with_args(std::env::args_os()));
}
