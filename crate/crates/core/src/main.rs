use subdc::cli;

fn main() {
    std::process::exit(cli::run());
}
