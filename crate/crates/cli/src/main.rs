fn main() {
    std::process::exit(crmorse::run(std::env::args_os()));
}
