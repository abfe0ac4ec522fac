fn main() {
    std::process::exit(taylor_l2::cli::main_with(std::env::args()));
}
