fn main() {
    std::process::exit(fanomode_cli::run(std::env::args_os()));
}
