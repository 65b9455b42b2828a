fn main() {
    std::process::exit(infmln::run(std::env::args_os()));
}
