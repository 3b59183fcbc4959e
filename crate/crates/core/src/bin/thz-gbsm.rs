fn main() {
    std::process::exit(thz_gbsm::cli::run(std::env::args_os()));
}
