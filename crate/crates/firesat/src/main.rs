fn main() {
    std::process::exit(firesat::cli::run(std::env::args_os()));
}
