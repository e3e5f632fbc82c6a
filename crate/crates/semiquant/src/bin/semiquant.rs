fn main() {
    std::process::exit(semiquant::cli::run(std::env::args_os()));
}
