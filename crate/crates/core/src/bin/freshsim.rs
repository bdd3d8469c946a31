fn main() {
    let code = freshsim::cli::cli(std::env::args_os());
    std::process::exit(code);
}
