fn main() {
    std::process::exit(majority::cli::run(std::env::args_os()));
}
