mod report;
mod table;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fracmirror::json::NefJson;
use fracmirror::rational::parse_q;
use fracmirror::topology::euler_double_cover;
use fracmirror::{Error, NefPartitionData};
use num_rational::BigRational;
use serde_json::Value;

use report::Quantum;

#[derive(Parser)]
#[command(
    name = "fracmirror",
    version,
    about = "Mirror pipeline for Calabi–Yau double covers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(clap::Args)]
struct Common {
    /// Nef-partition JSON file
    input: PathBuf,
    /// Truncation order
    #[arg(short = 'N', default_value_t = 10)]
    n: usize,
    /// Classical normalization C of the Yukawa coupling, as "p/q"
    #[arg(long)]
    normalization: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Dual nef-partition and duality checks
    DualNef(Common),
    /// Euler characteristics of the double cover and its mirror
    Euler(Common),
    /// Hodge numbers of the double cover and its mirror
    Hodge(Common),
    /// GKZ matrix, exponent and lattice relations
    Gkz(Common),
    /// Picard–Fuchs operator
    Pf(Common),
    /// Frobenius solutions and the mirror map
    MirrorMap(Common),
    /// Yukawa coupling and A-model correlation series
    Yukawa(Common),
    /// Untwisted I-function and its mirror map
    Ifunction(Common),
    /// Cohomology-valued B-series
    Bseries(Common),
    /// Every report above
    All(Common),
    /// Polytope checks for the geometric transition
    Transition(Common),
}

enum Failure {
    Validation(String),
    Assertion(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_assertion() {
            Failure::Assertion(e.to_string())
        } else {
            Failure::Validation(e.to_string())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn max_n() -> Result<usize, Failure> {
    match std::env::var("FRACMIRROR_MAX_N") {
        Ok(s) => s
            .parse()
            .map_err(|_| Failure::Validation(format!("FRACMIRROR_MAX_N is not a number: {s}"))),
        Err(_) => Ok(64),
    }
}

fn load_nef(path: &Path) -> Result<NefPartitionData, Failure> {
    let text = read(path)?;
    let parsed: NefJson = serde_json::from_str(&text).map_err(Error::from)?;
    Ok(parsed.to_data()?)
}

fn warn_smoothness() {
    eprintln!("warning: Euler characteristics assume both X and X∨ admit smooth MPCP resolutions");
}

fn run(cmd: Command) -> Result<(Value, Format), Failure> {
    let (common, tag) = match &cmd {
        Command::DualNef(c) => (c, "dual-nef"),
        Command::Euler(c) => (c, "euler"),
        Command::Hodge(c) => (c, "hodge"),
        Command::Gkz(c) => (c, "gkz"),
        Command::Pf(c) => (c, "pf"),
        Command::MirrorMap(c) => (c, "mirror-map"),
        Command::Yukawa(c) => (c, "yukawa"),
        Command::Ifunction(c) => (c, "ifunction"),
        Command::Bseries(c) => (c, "bseries"),
        Command::All(c) => (c, "all"),
        Command::Transition(c) => (c, "transition"),
    };
    let n = common.n;
    if n < 1 {
        return Err(Failure::Validation("-N must be at least 1".into()));
    }
    let cap = max_n()?;
    if n > cap {
        return Err(Failure::Validation(format!(
            "-N {n} exceeds FRACMIRROR_MAX_N = {cap}"
        )));
    }
    let normalization: Option<BigRational> =
        common.normalization.as_deref().map(parse_q).transpose()?;
    if tag == "transition" {
        let text = read(&common.input)?;
        let t: report::TransitionJson = serde_json::from_str(&text).map_err(Error::from)?;
        return Ok((report::transition(&t)?, common.format));
    }
    let data = load_nef(&common.input)?;
    if matches!(tag, "euler" | "hodge" | "all") {
        warn_smoothness();
    }
    let c = |q: &Quantum| -> Result<BigRational, Failure> {
        Ok(match &normalization {
            Some(c) => c.clone(),
            None => report::default_normalization(&data, q)?,
        })
    };
    let value = match tag {
        "dual-nef" => report::dual_nef(&data)?,
        "euler" => report::euler(&euler_double_cover(&data)?),
        "hodge" => report::hodge(&euler_double_cover(&data)?)?,
        "all" => report::all(&data, n, normalization.as_ref())?,
        _ => {
            let q = Quantum::new(&data)?;
            match tag {
                "gkz" => report::gkz(&q)?,
                "pf" => report::pf(&q, n)?,
                "mirror-map" => report::mirror(&q, n)?,
                "yukawa" => report::yukawa(&q, n, &c(&q)?)?,
                "ifunction" => report::ifunction(&q, n)?,
                "bseries" => report::bseries(&q, n, &c(&q)?)?,
                _ => unreachable!("every subcommand is dispatched"),
            }
        }
    };
    Ok((value, common.format))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((value, Format::Json)) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&value).expect("reports serialize")
            );
            ExitCode::SUCCESS
        }
        Ok((value, Format::Table)) => {
            print!("{}", table::render(&value));
            ExitCode::SUCCESS
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Assertion(msg)) => {
            eprintln!("assertion failed: {msg}");
            ExitCode::from(3)
        }
    }
}
