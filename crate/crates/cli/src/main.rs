fn main() {
    env_logger::init();
    let code = monocount_cli::run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
