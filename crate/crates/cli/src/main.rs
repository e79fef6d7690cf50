fn main() -> std::process::ExitCode {
    flipcut_cli::run(std::env::args().collect())
}
