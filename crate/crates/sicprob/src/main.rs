fn main() {
    std::process::exit(sicprob::cli::main_entry());
}
