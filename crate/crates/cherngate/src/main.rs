fn main() { std::process::exit(cherngate::cli::run(std::env::args().collect())); }
