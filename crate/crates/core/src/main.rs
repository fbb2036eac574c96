fn main() {
    std::process::exit(cavityspec::cli::run(std::env::args_os()));
}
