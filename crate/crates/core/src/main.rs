fn main() {
    std::process::exit(chainpair::cli::run(std::env::args_os()));
}
