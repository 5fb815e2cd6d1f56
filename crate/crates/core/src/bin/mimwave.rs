fn main() {
    let _ = env_logger::try_init();
    let args: Vec<String> = std::env::args().collect();
    let code = mimwave::cli::run(&args, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
