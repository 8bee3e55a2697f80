//! Command-line front end: argument parsing, rendering and golden files.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::admissibility::{admissible_primes, is_prime, max_admissible_prime, Prime};
use crate::classify::{classify, classify_all, Classification, ClassifyConfig, FamilyRecord, StrategyChoice};
use crate::error::Error;
use crate::forms::CubicForm;
use crate::hodge::{is_stable_under, klein_tangent_spectrum};
use crate::signatures::DEFAULT_BUDGET;
use crate::smoothness::{certify_smooth_over_q, default_moduli, singular_point_from_lemma_base};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARTIAL: i32 = 3;
pub const EXIT_SINGULAR: i32 = 4;
pub const EXIT_INCONCLUSIVE: i32 = 5;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "CUBICLASS_THREADS";

/// Multiplier whose action on the five-fold Klein spectrum is reported.
const SPECTRUM_MULTIPLIER: i64 = 11;

#[derive(Debug, Parser)]
#[command(name = "cubiclass", version, about = "Prime-order automorphisms of smooth cubic hypersurfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Auto,
    Exhaustive,
    #[value(name = "chain_pruned", alias = "chain-pruned")]
    ChainPruned,
}

impl From<StrategyArg> for StrategyChoice {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Auto => StrategyChoice::Auto,
            StrategyArg::Exhaustive => StrategyChoice::Exhaustive,
            StrategyArg::ChainPruned => StrategyChoice::ChainPruned,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List admissible primes.
    Admissible {
        /// Dimension of the hypersurface.
        #[arg(long, conflicts_with = "range", required_unless_present = "range")]
        n: Option<usize>,
        /// Inclusive range of dimensions, e.g. 11..20.
        #[arg(long, value_parser = parse_range)]
        range: Option<(usize, usize)>,
        /// Only the largest admissible prime per dimension.
        #[arg(long)]
        max_only: bool,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
    /// Classify families with an automorphism of prime order.
    Classify {
        #[arg(long)]
        n: usize,
        /// A single prime; all admissible primes when omitted.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: StrategyArg,
        /// Coefficient draws per candidate.
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated working primes.
        #[arg(long, value_delimiter = ',', value_parser = parse_modulus)]
        moduli: Option<Vec<Prime>>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Largest raw signature space enumerated exhaustively.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        /// Also list rejected candidates (json always includes them).
        #[arg(long)]
        rejected: bool,
    },
    /// Certify smoothness of a cubic form read from a JSON file.
    Smooth {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', value_parser = parse_modulus)]
        moduli: Option<Vec<Prime>>,
    },
    /// Character of the Klein automorphism on its intermediate-jacobian
    /// tangent space.
    Spectrum {
        #[arg(long)]
        klein: usize,
    },
    /// Compare against, or rewrite, the golden files.
    Golden {
        #[arg(long)]
        dir: Option<PathBuf>,
        #[arg(long)]
        regen_golden: bool,
    },
}

fn parse_range(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let a: usize = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: usize = b.trim().trim_start_matches('=').parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {s}"));
    }
    Ok((a, b))
}

fn parse_modulus(s: &str) -> std::result::Result<Prime, String> {
    let q: u64 = s.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
    if q <= 3 || !is_prime(q) {
        return Err(format!("{q} is not a prime greater than 3"));
    }
    Prime::new(q).map_err(|e| e.to_string())
}

fn default_golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("golden")
}

/// Sets the global rayon pool from [`THREADS_ENV`], if present.
pub fn configure_threads() -> std::result::Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let k: usize = raw.trim().parse().map_err(|_| format!("{THREADS_ENV}={raw:?} is not a thread count"))?;
    if k == 0 {
        return Err(format!("{THREADS_ENV} must be positive"));
    }
    rayon::ThreadPoolBuilder::new().num_threads(k).build_global().map_err(|e| e.to_string())
}

/// Parses `args` and runs the command, writing to `out` and `err`.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

enum CliError {
    Usage(String),
    Failure(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ModuliDisagree(..) | Error::Overflow => CliError::Failure(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

fn execute(command: Command, out: &mut dyn Write) -> std::result::Result<i32, CliError> {
    match command {
        Command::Admissible { n, range, max_only, format } => {
            let (lo, hi) = range.unwrap_or_else(|| {
                let n = n.expect("clap requires n or range");
                (n, n)
            });
            out.write_all(render_admissible(lo, hi, max_only, format)?.as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Classify { n, p, strategy, trials, seed, moduli, format, budget, rejected } => {
            let config = ClassifyConfig {
                strategy: strategy.into(),
                trials: trials as usize,
                seed,
                moduli: moduli.unwrap_or_else(default_moduli),
                budget,
            };
            let results = match p {
                Some(p) => vec![classify(n, Prime::new(p)?, &config)?],
                None => classify_all(n, &config)?,
            };
            out.write_all(render_classification(n, &results, format, rejected).as_bytes())?;
            Ok(if results.iter().all(|c| c.complete) { EXIT_OK } else { EXIT_PARTIAL })
        }
        Command::Smooth { file, moduli } => {
            let text = std::fs::read_to_string(&file).map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
            let form = CubicForm::from_json(&text)?;
            if form.is_zero() {
                return Err(CliError::Usage("the zero form defines no hypersurface".into()));
            }
            let moduli = moduli.unwrap_or_else(default_moduli);
            let (doc, code) = smooth_report(&form, &moduli)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
            Ok(code)
        }
        Command::Spectrum { klein } => {
            if klein != 3 && klein != 5 {
                return Err(CliError::Usage(format!("spectrum is available for n = 3 and n = 5, not {klein}")));
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&spectrum_report(klein)?).expect("json"))?;
            Ok(EXIT_OK)
        }
        Command::Golden { dir, regen_golden } => {
            let dir = dir.unwrap_or_else(default_golden_dir);
            let files = golden_files()?;
            if regen_golden {
                std::fs::create_dir_all(&dir)?;
                for (name, content) in &files {
                    std::fs::write(dir.join(name), content)?;
                    writeln!(out, "wrote {}", dir.join(name).display())?;
                }
                return Ok(EXIT_OK);
            }
            let mut mismatched = 0;
            for (name, content) in &files {
                let path = dir.join(name);
                let status = match std::fs::read_to_string(&path) {
                    Ok(existing) if existing == *content => "ok",
                    Ok(_) => "differs",
                    Err(_) => "missing",
                };
                if status != "ok" {
                    mismatched += 1;
                }
                writeln!(out, "{status}\t{}", path.display())?;
            }
            Ok(if mismatched == 0 { EXIT_OK } else { EXIT_FAILURE })
        }
    }
}

/// Certificate, coordinate-point witness, or inconclusive, with exit code.
pub fn smooth_report(form: &CubicForm, moduli: &[Prime]) -> crate::Result<(serde_json::Value, i32)> {
    if let Some(w) = singular_point_from_lemma_base(form) {
        return Ok((json!({ "status": "singular", "witness": w }), EXIT_SINGULAR));
    }
    match certify_smooth_over_q(form, moduli)? {
        Some(cert) => Ok((json!({ "status": "smooth", "certificate": cert }), EXIT_OK)),
        None => {
            let tried: Vec<u64> = moduli.iter().map(|q| q.get()).collect();
            Ok((json!({ "status": "inconclusive", "moduli": tried }), EXIT_INCONCLUSIVE))
        }
    }
}

/// The matched Klein spectrum with its negation and the stability verdict.
pub fn spectrum_report(n: usize) -> crate::Result<serde_json::Value> {
    let s = klein_tangent_spectrum(n)?;
    let matched = s.matched();
    let stable = is_stable_under(&matched, SPECTRUM_MULTIPLIER).ok();
    Ok(json!({
        "p": matched.p,
        "exponents": matched.exponents,
        "matched_convention": matched.matched_convention,
        "negation": if s.matched_convention == Some(crate::hodge::Convention::Negated) { &s.raw.exponents } else { &s.negated.exponents },
        "stable_under_11": stable,
    }))
}

fn join(values: impl IntoIterator<Item = impl ToString>) -> String {
    values.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

fn csv_string(rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for row in rows {
        w.write_record(row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}

fn md_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "| {} |", header.join(" | "));
    let _ = writeln!(s, "|{}", "---|".repeat(header.len()));
    for row in rows {
        let _ = writeln!(s, "| {} |", row.join(" | "));
    }
    s
}

/// Admissible primes for `lo..=hi`.
pub fn render_admissible(lo: usize, hi: usize, max_only: bool, format: Format) -> crate::Result<String> {
    #[derive(Serialize)]
    struct Row {
        n: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        primes: Option<Vec<Prime>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        max_prime: Option<Prime>,
    }
    let mut rows = Vec::new();
    for n in lo..=hi {
        rows.push(if max_only {
            Row { n, primes: None, max_prime: Some(max_admissible_prime(n)?) }
        } else {
            Row { n, primes: Some(admissible_primes(n)?), max_prime: None }
        });
    }
    let cell = |r: &Row| match (&r.primes, r.max_prime) {
        (Some(ps), _) => join(ps),
        (None, Some(m)) => m.to_string(),
        _ => String::new(),
    };
    let header = if max_only { ["n", "max_prime"] } else { ["n", "primes"] };
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&rows).expect("json") + "\n",
        Format::Csv => {
            let mut table = vec![header.iter().map(|h| h.to_string()).collect()];
            table.extend(rows.iter().map(|r| vec![r.n.to_string(), cell(r)]));
            csv_string(&table)
        }
        Format::Md => md_table(&header, &rows.iter().map(|r| vec![r.n.to_string(), cell(r)]).collect::<Vec<_>>()),
    })
}

const FAMILY_COLUMNS: [&str; 7] = ["label", "p", "σ", "weight", "dim_E", "dim_norm", "D"];

fn family_row(r: &FamilyRecord) -> Vec<String> {
    vec![
        r.label.unwrap_or("").to_string(),
        r.p.to_string(),
        r.sigma.to_string(),
        r.weight.to_string(),
        r.dim_e.to_string(),
        r.dim_norm.to_string(),
        r.d.to_string(),
    ]
}

fn notes(results: &[Classification]) -> Vec<String> {
    results.iter().filter_map(|c| c.note.as_ref().map(|note| format!("p = {}: {note}", c.p))).collect()
}

/// Accepted families sorted by `(p, sigma, weight)`; JSON also carries the
/// rejected candidates and any notes.
pub fn render_classification(n: usize, results: &[Classification], format: Format, with_rejected: bool) -> String {
    let accepted: Vec<&FamilyRecord> = results.iter().flat_map(|c| &c.accepted).collect();
    let rejected: Vec<&FamilyRecord> = results.iter().flat_map(|c| &c.rejected).collect();
    let complete = results.iter().all(|c| c.complete);
    match format {
        Format::Json => {
            let doc = json!({
                "n": n,
                "complete": complete,
                "notes": notes(results),
                "families": accepted,
                "rejected": rejected,
            });
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
        Format::Csv => {
            let mut header: Vec<String> = FAMILY_COLUMNS.iter().map(|s| s.replace('σ', "sigma")).collect();
            if with_rejected {
                header.push("rejected_reason".into());
            }
            let mut table = vec![header];
            for r in accepted.iter().chain(if with_rejected { rejected.iter() } else { [].iter() }) {
                let mut row = family_row(r);
                if with_rejected {
                    row.push(r.rejected_reason.clone().unwrap_or_default());
                }
                table.push(row);
            }
            csv_string(&table)
        }
        Format::Md => {
            let mut s = md_table(&FAMILY_COLUMNS, &accepted.iter().map(|r| family_row(r)).collect::<Vec<_>>());
            if with_rejected && !rejected.is_empty() {
                let mut header = FAMILY_COLUMNS.to_vec();
                header.push("rejected_reason");
                let rows: Vec<Vec<String>> = rejected
                    .iter()
                    .map(|r| {
                        let mut row = family_row(r);
                        row.push(r.rejected_reason.clone().unwrap_or_default());
                        row
                    })
                    .collect();
                s.push('\n');
                s.push_str(&md_table(&header, &rows));
            }
            for note in notes(results) {
                let _ = writeln!(s, "\nnote: {note}");
            }
            if !complete {
                let _ = writeln!(s, "\nincomplete: true");
            }
            s
        }
    }
}

/// `(file name, content)` for every golden file, computed with defaults.
pub fn golden_files() -> crate::Result<Vec<(String, String)>> {
    let config = ClassifyConfig::default();
    let mut files = vec![
        ("admissible_2_10.json".to_string(), render_admissible(2, 10, false, Format::Json)?),
        ("admissible_2_10.md".to_string(), render_admissible(2, 10, false, Format::Md)?),
        ("max_admissible_11_20.json".to_string(), render_admissible(11, 20, true, Format::Json)?),
        ("max_admissible_11_20.md".to_string(), render_admissible(11, 20, true, Format::Md)?),
    ];
    for n in [2, 3, 4] {
        let results = classify_all(n, &config)?;
        files.push((format!("classify_n{n}.json"), render_classification(n, &results, Format::Json, true)));
        files.push((format!("classify_n{n}.md"), render_classification(n, &results, Format::Md, false)));
    }
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("cubiclass").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("11..20"), Ok((11, 20)));
        assert_eq!(parse_range("3..=4"), Ok((3, 4)));
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("5").is_err());
    }

    #[test]
    fn modulus_parsing() {
        assert!(parse_modulus("10007").is_ok());
        assert!(parse_modulus("3").is_err());
        assert!(parse_modulus("10").is_err());
    }

    #[test]
    fn admissible_text() {
        let (code, out, _) = run_str(&["admissible", "--n", "3"]);
        assert_eq!(code, 0);
        assert!(out.contains("| 3 | 2, 3, 5, 11 |"));
        let (code, out, _) = run_str(&["admissible", "--range", "11..20", "--max-only", "--format", "csv"]);
        assert_eq!(code, 0);
        assert!(out.lines().any(|l| l == "11,2731"));
        let (code, _, err) = run_str(&["admissible", "--n", "1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("dimension"));
    }

    #[test]
    fn classify_inadmissible() {
        let (code, out, _) = run_str(&["classify", "--n", "4", "--p", "13"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["families"].as_array().unwrap().len(), 0);
        assert_eq!(v["notes"][0], "p = 13: 13 not admissible in dimension 4");
    }

    #[test]
    fn classify_partial_exit() {
        let (code, out, _) = run_str(&["classify", "--n", "2", "--p", "5", "--strategy", "exhaustive", "--budget", "5"]);
        assert_eq!(code, EXIT_PARTIAL);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["complete"], false);
    }

    #[test]
    fn bad_arguments() {
        assert_eq!(run_str(&["classify", "--n", "3", "--trials", "0"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["classify", "--n", "3", "--moduli", "3"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["classify", "--n", "3", "--p", "12"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["spectrum", "--klein", "4"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["bogus"]).0, EXIT_USAGE);
    }
}
