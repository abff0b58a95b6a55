fn main() {
    std::process::exit(archinf::run::main_entry());
}
