use clap::Parser;

fn main() {
    let command_line: Vec<String> = std::env::args().collect();
    let cli = fracou::cli::Cli::parse();
    if let Err(err) = fracou::cli::run(cli, command_line.join(" ")) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
