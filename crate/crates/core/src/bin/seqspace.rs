fn main() {
    std::process::exit(seqspace::cli::main_with_args(std::env::args_os()));
}
