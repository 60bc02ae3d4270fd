fn main() {
    std::process::exit(convex_growth::cli::run(std::env::args_os()));
}
