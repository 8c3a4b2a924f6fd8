use std::process::ExitCode;

use clap::Parser;
use cone_cli::config::{self, Cli, Command};

fn main() -> ExitCode {
    let Cli {
        command: Command::Sim(args),
    } = Cli::parse();
    let print_config = args.print_config;
    let result = config::parse(args).and_then(|cfg| {
        let mut stdout = std::io::stdout().lock();
        if print_config {
            print!("{}", cfg.to_toml());
            Ok(())
        } else {
            cone_cli::execute(&cfg, &mut stdout)
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cone: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
