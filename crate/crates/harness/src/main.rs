fn main() {
    std::process::exit(contraharmonic_harness::cli::run(std::env::args_os()));
}
