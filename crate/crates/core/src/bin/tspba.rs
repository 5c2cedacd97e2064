fn main() {
    std::process::exit(tspba::cli::run(std::env::args_os()));
}
