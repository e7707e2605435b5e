use clap::Parser;

use skyveil_cli::args::{Cli, Command};

fn run(cli: Cli) -> skyveil_cli::Result<i32> {
    match &cli.command {
        Command::Fleetgen(args) => skyveil_cli::fleetgen::run(args).map(|()| 0),
        Command::Authority(args) => skyveil_cli::query::run_authority(args).map(|()| 0),
        Command::Citizen(args) => skyveil_cli::query::run_citizen(args).map(|()| 0),
        Command::Bench(args) => skyveil_cli::bench::run(args).map(|()| 0),
        Command::Oracle(args) => skyveil_cli::oracle::run(args).map(|()| 0),
        Command::AuditSign(args) => skyveil_cli::audit_cmd::run_sign(args).map(|()| 0),
        Command::AuditVerify(args) => skyveil_cli::audit_cmd::run_verify(args),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
