use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use ifs_codings_cli::app::{run, Cli, EXIT_INPUT, EXIT_OK};

fn write(path: &Path, contents: &str) -> Result<(), String> {
    fs::write(path, contents).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            return ExitCode::from(code as u8);
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };

    let json = outcome.report.to_json();
    let result = (|| -> Result<(), String> {
        match cli.json.as_deref() {
            Some(p) if p == Path::new("-") => print!("{json}"),
            Some(p) => {
                write(p, &json)?;
                print!("{}", outcome.report.to_text());
            }
            None => print!("{}", outcome.report.to_text()),
        }
        if let Some(p) = &cli.dot {
            match &outcome.dot {
                Some(d) => write(p, d)?,
                None => eprintln!("warning: `{}` produces no graph, {} not written", outcome.report.command, p.display()),
            }
        }
        Ok(())
    })();
    if let Err(e) = result {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_INPUT as u8);
    }
    ExitCode::from(outcome.exit_code() as u8)
}
