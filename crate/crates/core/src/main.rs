fn main() {
    std::process::exit(bertrand_kit::cli::main())
}
