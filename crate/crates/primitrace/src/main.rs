use clap::Parser;
use primitrace::cli;

fn main() {
    let args = cli::Cli::parse();
    let json = args.json;
    let report = cli::run(args);
    print!("{}", report.render(json));
    std::process::exit(report.exit_code);
}
