fn main() {
    std::process::exit(ddfrot_cli::run(std::env::args_os()));
}
