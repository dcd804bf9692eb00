fn main() {
    std::process::exit(dlfold::cli::run(std::env::args_os()));
}
