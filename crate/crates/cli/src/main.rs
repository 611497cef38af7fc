fn main() {
    std::process::exit(anomaly_cli::run_cli(std::env::args_os()));
}
