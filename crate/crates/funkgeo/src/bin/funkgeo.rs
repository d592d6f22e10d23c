fn main() {
    std::process::exit(funkgeo::cli::main());
}
