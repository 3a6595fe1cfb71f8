fn main() {
    std::process::exit(twolevel::cli::main());
}
