fn main() {
    std::process::exit(large_sieve::cli::run(std::env::args_os()));
}
