fn main() {
    std::process::exit(riskdyn::cli::run(std::env::args_os()));
}
