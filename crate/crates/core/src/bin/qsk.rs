fn main() {
    std::process::exit(qsk::cli::run(std::env::args_os()));
}
