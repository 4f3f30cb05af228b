fn main() {
    std::process::exit(eapcluster::cli::main_with_args(std::env::args_os()));
}
