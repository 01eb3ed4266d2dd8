fn main() { std::process::exit(g2braid::cli::main()) }
