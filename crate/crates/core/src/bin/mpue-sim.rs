fn main() {
    std::process::exit(mpue_sim::cli::cli_main(std::env::args_os()));
}
