fn main() {
    std::process::exit(suq2::cli::run(std::env::args_os()));
}
