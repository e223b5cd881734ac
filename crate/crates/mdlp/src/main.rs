fn main() {
    std::process::exit(mdlp::cli::run(std::env::args_os()));
}
