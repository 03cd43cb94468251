fn main() { std::process::exit(arthurtype::cli::main_entry()); }
