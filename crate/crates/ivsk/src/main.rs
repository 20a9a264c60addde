fn main() {
    std::process::exit(ivsk::cli::run(std::env::args_os()));
}
