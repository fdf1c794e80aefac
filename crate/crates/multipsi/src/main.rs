fn main() {
    let code = multipsi::cli::run(std::env::args_os(), &mut std::io::stdout());
    std::process::exit(code);
}
