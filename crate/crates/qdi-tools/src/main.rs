fn main() {
    std::process::exit(qdi_tools::run());
}
