fn main() {
    std::process::exit(fracgreen::cli::main_entry());
}
