fn main() {
    std::process::exit(elasticbit_cli::run(std::env::args_os()));
}
