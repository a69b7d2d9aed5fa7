fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(bellkit::cli::run(&argv));
}
