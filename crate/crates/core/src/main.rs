fn main() {
    std::process::exit(nervecalc::cli::run(std::env::args_os()));
}
