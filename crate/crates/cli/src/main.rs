fn main() {
    std::process::exit(relmetric_cli::run(std::env::args_os()));
}
