use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

mod commands;
mod error;

use commands::{Cli, Output};
use error::InputError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match commands::run(cli) {
        Ok(Output::Report(report)) => {
            if json {
                emit(&format!("{}\n", report.to_json()));
            } else {
                emit(&report.to_text());
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Ok(Output::File(text)) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Err(e) => {
            report_error(&e, json);
            ExitCode::from(2)
        }
    }
}

fn report_error(e: &InputError, json: bool) {
    if json {
        let body = serde_json::json!({ "error": { "code": e.code, "message": e.message } });
        emit(&format!("{}\n", serde_json::to_string_pretty(&body).expect("json")));
    }
    eprintln!("error[{}]: {}", e.code, e.message);
}

// a closed pipe (e.g. `| head`) is not worth a panic
fn emit(text: &str) {
    let mut out = io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}
