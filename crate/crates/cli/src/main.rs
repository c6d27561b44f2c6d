fn main() {
    std::process::exit(shapeq_cli::run(std::env::args_os()));
}
