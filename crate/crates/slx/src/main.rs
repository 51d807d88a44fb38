fn main() {
    slx::configure_threads();
    let code = slx::cli::run(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr());
    std::process::exit(code);
}
