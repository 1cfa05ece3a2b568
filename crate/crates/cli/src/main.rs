mod args;
mod commands;
mod pool;

use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;
use commands::{run, Failure};

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(f) => {
            eprintln!("maslov: {f}");
            return f.exit_code();
        }
    };
    let mut text = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
    text.push('\n');
    let written = match &cli.common.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| format!("stdout: {e}")),
    };
    let written = written.and_then(|_| {
        outcome
            .files
            .iter()
            .try_for_each(|(path, body)| std::fs::write(path, body).map_err(|e| format!("{}: {e}", path.display())))
    });
    if let Err(m) = written {
        let f = Failure::Io(m);
        eprintln!("maslov: {f}");
        return f.exit_code();
    }
    if outcome.claims_ok {
        0
    } else {
        2
    }
}
