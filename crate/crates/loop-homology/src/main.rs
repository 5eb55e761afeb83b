fn main() {
    std::process::exit(loop_homology::cli::main_with_args(std::env::args()));
}
