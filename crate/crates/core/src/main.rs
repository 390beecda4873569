fn main() {
    std::process::exit(ldc_core::cli::main_with(std::env::args_os()));
}
