fn main() {
    std::process::exit(zolo::cli::run(std::env::args_os()));
}
