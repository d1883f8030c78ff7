fn main() {
    std::process::exit(gncg::cli::main_with(std::env::args_os()));
}
