fn main() {
    std::process::exit(seqex::cli::run_from_args(std::env::args_os()));
}
