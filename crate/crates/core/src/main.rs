fn main() {
    std::process::exit(cantor_spectra::cli::main_with_args(std::env::args_os()));
}
