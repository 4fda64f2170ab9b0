//! `ccw`: generate, check and convert finite cover documents.

mod check;
mod convert;
mod docs;
mod generate;

use std::path::PathBuf;
use std::process::ExitCode;

use ccw_core::report::{error_exit_code, Certificate, EXIT_DOCUMENT};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "ccw", version, about = "Certified covers on finite window models")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build window, space, cover and homotopy documents.
    Generate(generate::GenerateArgs),
    /// Run a checker and write a certificate.
    Check(check::CheckArgs),
    /// Transform documents and write the result with a certificate.
    Convert(convert::ConvertArgs),
    /// Print a plain-text summary of a certificate.
    Report {
        certificate: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Generate(a) => generate::run(&a),
        Cmd::Check(a) => check::run(&a),
        Cmd::Convert(a) => convert::run(&a),
        Cmd::Report { certificate } => report(&certificate),
    };
    ExitCode::from(code as u8)
}

fn report(path: &PathBuf) -> i32 {
    let cert = docs::read_document(path).and_then(|v| Certificate::from_value(&v));
    match cert {
        Ok(c) => {
            print!("{}", c.summary());
            c.verdict.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            error_exit_code(&e).max(EXIT_DOCUMENT)
        }
    }
}
