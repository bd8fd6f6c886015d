fn main() {
    std::process::exit(linkbench::cli::run(std::env::args_os()));
}
