fn main() {
    std::process::exit(pin3::cli::main_with(std::env::args_os()));
}
