fn main() {
    std::process::exit(spin_witness::cli::run(std::env::args_os()));
}
