fn main() {
    std::process::exit(hyperplap::cli::run(std::env::args_os()));
}
