fn main() {
    std::process::exit(nodal_mirror::cli::main_with(std::env::args_os()));
}
