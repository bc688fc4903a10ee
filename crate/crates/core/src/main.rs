fn main() {
    std::process::exit(polyps::cli::main_entry());
}
