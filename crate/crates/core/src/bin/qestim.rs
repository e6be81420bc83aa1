fn main() {
    std::process::exit(qestim::cli::run(std::env::args_os()));
}
