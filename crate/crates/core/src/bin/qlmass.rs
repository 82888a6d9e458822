fn main() {
    std::process::exit(qlmass_core::cli::main_with_args(std::env::args_os()));
}
