fn main() {
    std::process::exit(gleason_lab::cli::main());
}
