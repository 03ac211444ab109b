fn main() {
    std::process::exit(flagcap::cli::run());
}
