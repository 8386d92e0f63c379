fn main() {
    std::process::exit(cis_classify::cli::run(std::env::args_os()));
}
