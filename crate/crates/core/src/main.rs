fn main() {
    std::process::exit(etalon_spdc::cli::main_with_args(std::env::args_os()));
}
