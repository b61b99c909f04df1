fn main() {
    std::process::exit(dob::cli::run());
}
