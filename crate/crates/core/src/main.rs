fn main() {
    std::process::exit(fieldcover::cli::run(std::env::args_os()));
}
