fn main() {
    std::process::exit(cyclic_density::cli::run(std::env::args_os()));
}
