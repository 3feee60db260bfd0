fn main() {
    std::process::exit(snakedna::cli::run(std::env::args_os()));
}
