fn main() {
    std::process::exit(witt_descent::cli::main_entry());
}
