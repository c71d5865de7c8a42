fn main() {
    std::process::exit(clusterweyl::interface::cli::run(std::env::args_os()));
}
