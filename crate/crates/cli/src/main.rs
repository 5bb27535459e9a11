fn main() {
    std::process::exit(quadlat_cli::run(std::env::args_os()));
}
