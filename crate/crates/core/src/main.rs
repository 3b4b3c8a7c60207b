fn main() {
    std::process::exit(tabletop_amodal::cli::run(std::env::args_os()));
}
