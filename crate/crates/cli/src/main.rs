fn main() {
    kgstroll_cli::init_logging();
    std::process::exit(kgstroll_cli::run(std::env::args_os()));
}
