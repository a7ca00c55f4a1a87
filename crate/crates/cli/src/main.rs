fn main() { std::process::exit(essc_cli::run(std::env::args_os())); }
