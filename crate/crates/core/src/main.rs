fn main() {
    std::process::exit(schedlab::cli::run(std::env::args_os()));
}
