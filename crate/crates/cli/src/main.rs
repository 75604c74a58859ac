//! `nodal`: runs the verifications and computations of nodal-core from the
//! command line and prints text, Markdown or JSON reports.

mod commands;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nodal_core::exactnum::QuadraticNumber as QN;

use commands::{Model, Outcome, UsageError};
use report::{Format, Report};

#[derive(Parser, Debug)]
#[command(name = "nodal", version, about = "Exact checks for foliations with an invariant nodal curve")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true, conflicts_with = "md")]
    json: bool,
    /// Print the report as Markdown.
    #[arg(long, global = true)]
    md: bool,
    /// Leave out the timestamp so identical runs give identical output.
    #[arg(long, global = true)]
    deterministic: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a model foliation and check all of its claims.
    Verify {
        #[arg(value_enum)]
        model: Model,
    },
    /// Roots of λ² + (2 - n)λ + 1 = 0 and their type.
    ClassifyLambda {
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
    },
    /// Decide whether a cycle of k curves of self-intersection l can occur.
    CycleFeasible {
        #[arg(value_parser = clap::value_parser!(u32).range(2..))]
        k: u32,
        #[arg(allow_hyphen_values = true)]
        l: i64,
    },
    /// Feasibility table for 2 <= k <= kmax and lmin <= l <= lmax.
    Enumerate {
        #[arg(value_parser = clap::value_parser!(u32).range(2..))]
        kmax: u32,
        #[arg(allow_hyphen_values = true)]
        lmin: i64,
        #[arg(allow_hyphen_values = true)]
        lmax: i64,
    },
    /// Blow up a 1-form at a point.
    Blowup {
        /// The form, e.g. "L*y*dx - x*dy".
        #[arg(long)]
        form: String,
        /// The centre as x,y.
        #[arg(long, value_parser = commands::parse_point, allow_hyphen_values = true)]
        point: (QN, QN),
        /// A named constant, NAME=VALUE; L = (1+sqrt(-3))/2 is predefined.
        #[arg(long = "const", value_parser = commands::parse_const)]
        consts: Vec<(String, QN)>,
    },
    /// Contractibility test for a symmetric intersection matrix.
    Grauert {
        /// Rows separated by ';', entries by ',', e.g. "[-1,1;1,-2]".
        #[arg(long, value_parser = parse_matrix, allow_hyphen_values = true)]
        matrix: Matrix,
    },
}

#[derive(Debug, Clone)]
struct Matrix(Vec<Vec<i64>>);

fn parse_matrix(text: &str) -> Result<Matrix, String> {
    commands::parse_matrix(text).map(Matrix)
}

fn run(command: &Command) -> Result<Outcome, UsageError> {
    match command {
        Command::Verify { model } => commands::verify(*model),
        Command::ClassifyLambda { n } => commands::classify(*n),
        Command::CycleFeasible { k, l } => commands::cycle_feasible(*k, *l),
        Command::Enumerate { kmax, lmin, lmax } => commands::enumerate(*kmax, *lmin, *lmax),
        Command::Blowup { form, point, consts } => commands::blowup(form, point, consts),
        Command::Grauert { matrix } => commands::grauert(&matrix.0),
    }
}

fn echo() -> String {
    let mut words = vec!["nodal".to_string()];
    words.extend(std::env::args().skip(1).map(|a| {
        if a.is_empty() || a.contains(char::is_whitespace) {
            format!("{a:?}")
        } else {
            a
        }
    }));
    words.join(" ")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = if cli.json {
        Format::Json
    } else if cli.md {
        Format::Markdown
    } else {
        Format::Text
    };
    let outcome = match run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut report = Report::new(echo(), outcome.notes, outcome.claims, outcome.data);
    if !cli.deterministic {
        report.stamp();
    }
    print!("{}", report.render(format));
    if let Err(e) = report.save(format) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(report.exit_status as u8)
}
