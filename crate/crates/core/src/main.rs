fn main() {
    std::process::exit(bdcsvd::harness::cli::cli_main(std::env::args_os()));
}
