//! Command-line front end.
//!
//! Every subcommand prints one pretty-printed JSON report to stdout and
//! exits 0 on a clean decision, 1 when a range verification found a
//! modulus that fails to be a witness, 2 on parse or usage errors, and 3
//! when resource caps prevented a decision. Progress and error text go to
//! stderr, never into the JSON.

use clap::{Args, Parser, Subcommand};
use exposk_core::congruence::{has_solution_mod_with, DeciderConfig, Solvability, SolveError};
use exposk_core::equation::{family_equation, Equation, FamilyPattern, SignPattern};
use exposk_core::lemmas::{classify, deduction_trace, VerdictStatus};
use exposk_core::parser::{family_display, format_equation, parse_equation};
use exposk_core::report::RunReport;
use exposk_core::search::{brute_force_solutions, SearchBound};
use exposk_core::witness::{
    search_modulus, search_modulus_for_family, verify_family_range, VerifyOptions,
    WitnessError, WitnessOutcome, WitnessSearchConfig, DEFAULT_MAX_WITNESS_MODULUS,
    DEFAULT_PRIME_BOUND,
};
use serde_json::json;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "exposk",
    version,
    about = "Solvability certificates, witness moduli and bounded integer search \
             for purely exponential Diophantine equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the equation has solutions modulo M, either way with
    /// a certificate
    Check(CheckArgs),
    /// Check the modulus 12(n+1)(n+2) against every family member in a
    /// range of n
    VerifyRange(VerifyRangeArgs),
    /// Enumerate all integer solutions with every term below a bound
    Search(SearchArgs),
    /// Look for a modulus that proves the equation has no integer
    /// solutions
    FindModulus(FindModulusArgs),
    /// Report the proved verdict for a family member
    Classify(ClassifyArgs),
    /// Parse an equation and echo its normalized form
    Parse(ParseArgs),
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    input: EquationInput,
    /// Modulus to decide at (2 <= M <= 2^62)
    #[arg(long, value_name = "M")]
    modulus: u64,
    /// Record wall-clock time in the report
    #[arg(long)]
    timings: bool,
    /// Also write the report to this file
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyRangeArgs {
    /// Family sign pattern, three characters over {+,-}
    #[arg(long, value_name = "SIGNS", default_value = "---", allow_hyphen_values = true)]
    pattern: String,
    /// First base n (>= 4)
    #[arg(long, value_name = "N")]
    from: u64,
    /// Last base n (inclusive)
    #[arg(long, value_name = "N")]
    to: u64,
    /// Worker threads for the per-n fan-out
    #[arg(long, value_name = "K", default_value_t = 1)]
    parallel: usize,
    /// Record wall-clock times per entry and for the whole run
    #[arg(long)]
    timings: bool,
    /// Print progress counts to stderr
    #[arg(long)]
    progress: bool,
    /// Also write the report to this file
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    input: EquationInput,
    /// Largest term magnitude explored; integer or scientific like 1e12
    #[arg(long, value_name = "B", default_value = "1e12")]
    bound: String,
    /// Record wall-clock time in the report
    #[arg(long)]
    timings: bool,
    /// Also write the report to this file
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FindModulusArgs {
    /// Equation text, e.g. "2^x - 3^y - 4^z - 5^w = 0"
    #[arg(long, value_name = "TEXT")]
    eq: Option<String>,
    /// Family base n >= 2 (with --pattern)
    #[arg(long, value_name = "N")]
    family: Option<u64>,
    /// Family sign pattern, three characters over {+,-}
    #[arg(long, value_name = "SIGNS", allow_hyphen_values = true)]
    pattern: Option<String>,
    /// Largest odd prime folded into ladder moduli
    #[arg(long, value_name = "P", default_value_t = DEFAULT_PRIME_BOUND)]
    prime_bound: u64,
    /// Cap on candidate moduli
    #[arg(long, value_name = "M", default_value_t = DEFAULT_MAX_WITNESS_MODULUS)]
    max_modulus: u64,
    /// Record wall-clock time in the report
    #[arg(long)]
    timings: bool,
    /// Also write the report to this file
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Family base n >= 2
    #[arg(long, value_name = "N")]
    n: u64,
    /// Family sign pattern, three characters over {+,-}
    #[arg(long, value_name = "SIGNS", allow_hyphen_values = true)]
    pattern: String,
    /// Include the full per-modulus case lists
    #[arg(long)]
    trace: bool,
    /// Also write the report to this file
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ParseArgs {
    #[command(flatten)]
    input: EquationInput,
    /// Also write the report to this file
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

/// One of three equation sources; exactly one must be given.
#[derive(Args)]
struct EquationInput {
    /// Equation text, e.g. "2^x - 3^y - 4^z - 5^w = 0"
    #[arg(long, value_name = "TEXT")]
    eq: Option<String>,
    /// Family base n >= 2 (with --pattern)
    #[arg(long, value_name = "N")]
    family: Option<u64>,
    /// Family sign pattern, three characters over {+,-}
    #[arg(long, value_name = "SIGNS", allow_hyphen_values = true)]
    pattern: Option<String>,
    /// File with one equation per line; "#" starts a comment
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn resource(message: impl Into<String>) -> Failure {
    Failure {
        code: 3,
        message: message.into(),
    }
}

struct Loaded {
    label: String,
    eq: Equation,
}

fn parse_family(n: u64, pattern: &str) -> Result<FamilyPattern, Failure> {
    let delta: SignPattern = pattern.parse().map_err(|e| usage(format!("{e}")))?;
    FamilyPattern::new(n, delta).map_err(|e| usage(format!("{e}")))
}

impl EquationInput {
    fn resolve(&self) -> Result<Vec<Loaded>, Failure> {
        let picked = [
            self.eq.is_some(),
            self.family.is_some(),
            self.file.is_some(),
        ]
        .iter()
        .filter(|b| **b)
        .count();
        if picked != 1 {
            return Err(usage("give exactly one of --eq, --family, --file"));
        }
        if self.pattern.is_some() != self.family.is_some() {
            return Err(usage("--family and --pattern go together"));
        }
        if let Some(text) = &self.eq {
            let eq = parse_equation(text).map_err(|e| usage(format!("{e}")))?;
            return Ok(vec![Loaded {
                label: text.clone(),
                eq,
            }]);
        }
        if let Some(n) = self.family {
            let fp = parse_family(n, self.pattern.as_deref().unwrap())?;
            return Ok(vec![Loaded {
                label: family_display(fp),
                eq: family_equation(fp),
            }]);
        }
        let path = self.file.as_ref().unwrap();
        let text = fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        let mut out = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let eq = parse_equation(line)
                .map_err(|e| usage(format!("{} line {}: {e}", path.display(), i + 1)))?;
            out.push(Loaded {
                label: line.to_string(),
                eq,
            });
        }
        if out.is_empty() {
            return Err(usage(format!("{} contains no equations", path.display())));
        }
        Ok(out)
    }

    fn echo(&self, mut report: RunReport) -> RunReport {
        if let Some(v) = &self.eq {
            report = report.input("eq", v);
        }
        if let Some(v) = self.family {
            report = report.input("family", v);
        }
        if let Some(v) = &self.pattern {
            report = report.input("pattern", v);
        }
        if let Some(v) = &self.file {
            report = report.input("file", v.display().to_string());
        }
        report
    }
}

/// Accepts a plain integer or scientific notation denoting a whole number.
fn parse_bound(text: &str) -> Result<u64, Failure> {
    let t = text.trim();
    let bad = || usage(format!("bound {t:?} is not a whole number"));
    if t.is_empty() {
        return Err(bad());
    }
    if t.contains(['e', 'E', '.']) {
        let f: f64 = t.parse().map_err(|_| bad())?;
        if !f.is_finite() || f < 0.0 || f.fract() != 0.0 || f >= 1.9e19 {
            return Err(bad());
        }
        Ok(f as u64)
    } else {
        t.parse::<u64>().map_err(|_| bad())
    }
}

fn emit(report: &RunReport, out: &Option<PathBuf>) -> Result<(), Failure> {
    let text = report.to_json();
    let mut stdout = std::io::stdout();
    stdout
        .write_all(text.as_bytes())
        .and_then(|_| stdout.flush())
        .expect("stdout");
    if let Some(path) = out {
        fs::write(path, &text)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn elapsed_option(timings: bool, start: Instant) -> Option<u64> {
    timings.then(|| start.elapsed().as_millis() as u64)
}

fn cmd_check(args: CheckArgs) -> Result<u8, Failure> {
    let loaded = args.input.resolve()?;
    let decider = DeciderConfig::default();
    let start = Instant::now();
    let mut certificates = Vec::new();
    for l in &loaded {
        match has_solution_mod_with(&l.eq, args.modulus, &decider) {
            Ok(cert) => certificates.push(cert),
            Err(SolveError::ResourceExceeded(msg)) => return Err(resource(msg)),
            Err(e) => return Err(usage(format!("{e}"))),
        }
    }
    let solvable = certificates
        .iter()
        .filter(|c| c.status == Solvability::Solvable)
        .count();
    let outcome = if solvable == certificates.len() {
        "solvable"
    } else if solvable == 0 {
        "unsolvable"
    } else {
        "mixed"
    };
    let mut report = args
        .input
        .echo(RunReport::new("check"))
        .input("modulus", args.modulus)
        .outcome(outcome);
    report = if certificates.len() == 1 {
        report.payload("certificate", &certificates[0])
    } else {
        let entries: Vec<_> = loaded
            .iter()
            .zip(&certificates)
            .map(|(l, c)| json!({ "input": l.label, "certificate": c }))
            .collect();
        report.payload("certificates", &entries)
    };
    emit(&report.millis(elapsed_option(args.timings, start)), &args.out)?;
    Ok(0)
}

fn cmd_verify_range(args: VerifyRangeArgs) -> Result<u8, Failure> {
    let delta: SignPattern = args.pattern.parse().map_err(|e| usage(format!("{e}")))?;
    if args.parallel == 0 {
        return Err(usage("--parallel must be at least 1"));
    }
    let opts = VerifyOptions {
        parallel: args.parallel,
        timings: args.timings,
        progress: args.progress,
        decider: DeciderConfig::default(),
    };
    let start = Instant::now();
    let report = verify_family_range(delta, args.from, args.to, &opts)
        .map_err(|e| usage(format!("{e}")))?;
    let (outcome, code) = if report.not_witness > 0 {
        ("falsified", 1)
    } else if report.incomplete > 0 {
        ("incomplete", 3)
    } else {
        ("verified", 0)
    };
    let run = RunReport::new("verify-range")
        .input("pattern", &args.pattern)
        .input("from", args.from)
        .input("to", args.to)
        .input("parallel", args.parallel)
        .outcome(outcome)
        .payload("report", &report)
        .millis(elapsed_option(args.timings, start));
    emit(&run, &args.out)?;
    Ok(code)
}

fn cmd_search(args: SearchArgs) -> Result<u8, Failure> {
    let bound =
        SearchBound::new(parse_bound(&args.bound)?).map_err(|e| usage(format!("{e}")))?;
    let loaded = args.input.resolve()?;
    let start = Instant::now();
    let mut entries = Vec::new();
    for l in &loaded {
        let solutions = brute_force_solutions(&l.eq, &bound).map_err(|e| usage(format!("{e}")))?;
        let variables: Vec<String> = l.eq.variables().iter().map(|v| v.to_string()).collect();
        let rows: Vec<Vec<u64>> = solutions
            .iter()
            .map(|s| variables.iter().map(|v| s[v.as_str()]).collect())
            .collect();
        entries.push(json!({
            "input": l.label,
            "equation": format_equation(&l.eq),
            "variables": variables,
            "solutions": rows,
        }));
    }
    let mut report = args
        .input
        .echo(RunReport::new("search"))
        .input("bound", bound.max_value())
        .outcome("ok");
    report = if entries.len() == 1 {
        let only = entries.pop().unwrap();
        report
            .payload("equation", &only["equation"])
            .payload("variables", &only["variables"])
            .payload("solutions", &only["solutions"])
    } else {
        report.payload("results", &entries)
    };
    emit(&report.millis(elapsed_option(args.timings, start)), &args.out)?;
    Ok(0)
}

fn cmd_find_modulus(args: FindModulusArgs) -> Result<u8, Failure> {
    let config = WitnessSearchConfig {
        prime_bound: args.prime_bound,
        max_modulus: args.max_modulus,
        ..WitnessSearchConfig::default()
    };
    let decider = DeciderConfig::default();
    if args.pattern.is_some() != args.family.is_some() {
        return Err(usage("--family and --pattern go together"));
    }
    let start = Instant::now();
    let mut report = RunReport::new("find-modulus")
        .input("prime_bound", args.prime_bound)
        .input("max_modulus", args.max_modulus);
    let result = match (&args.eq, args.family) {
        (Some(_), Some(_)) | (None, None) => {
            return Err(usage("give exactly one of --eq, --family"));
        }
        (Some(text), None) => {
            let eq = parse_equation(text).map_err(|e| usage(format!("{e}")))?;
            report = report.input("eq", text);
            search_modulus(&eq, &config, &decider)
        }
        (None, Some(n)) => {
            let fp = parse_family(n, args.pattern.as_deref().unwrap())?;
            report = report
                .input("family", n)
                .input("pattern", args.pattern.as_deref().unwrap());
            search_modulus_for_family(fp, &config, &decider)
        }
    };
    let outcome = match result {
        Ok(o) => o,
        Err(WitnessError::Solve(SolveError::ResourceExceeded(msg))) => {
            return Err(resource(msg))
        }
        Err(e) => return Err(usage(format!("{e}"))),
    };
    let (report, code) = match outcome {
        WitnessOutcome::Found { certificate } => (
            report.outcome("found").payload("certificate", &certificate),
            0,
        ),
        WitnessOutcome::NotFound {
            tried,
            resource_limited,
            reason,
        } => {
            let code = if !tried.is_empty() && resource_limited.len() == tried.len() {
                3
            } else {
                0
            };
            (
                report
                    .outcome("not-found")
                    .payload("tried", &tried)
                    .payload("resource_limited", &resource_limited)
                    .payload("reason", &reason),
                code,
            )
        }
    };
    emit(&report.millis(elapsed_option(args.timings, start)), &args.out)?;
    Ok(code)
}

fn cmd_classify(args: ClassifyArgs) -> Result<u8, Failure> {
    let delta: SignPattern = args.pattern.parse().map_err(|e| usage(format!("{e}")))?;
    if args.n < 2 {
        return Err(usage(format!("family base must satisfy n >= 2, got {}", args.n)));
    }
    let verdict = classify(delta, args.n);
    let outcome = match &verdict.status {
        VerdictStatus::NoSolutionProved => "no-solution-proved",
        VerdictStatus::KnownSolutions { .. } => "known-solutions",
        VerdictStatus::NotCovered => "not-covered",
    };
    let mut report = RunReport::new("classify")
        .input("n", args.n)
        .input("pattern", &args.pattern)
        .outcome(outcome)
        .payload("verdict", &verdict);
    if args.trace {
        report = report.payload("trace", deduction_trace(delta, args.n));
    }
    emit(&report, &args.out)?;
    Ok(0)
}

fn cmd_parse(args: ParseArgs) -> Result<u8, Failure> {
    let loaded = args.input.resolve()?;
    let mut entries = Vec::new();
    for l in &loaded {
        entries.push(json!({
            "input": l.label,
            "equation": format_equation(&l.eq),
            "variables": l.eq.variables(),
            "terms": l.eq.terms().len(),
        }));
    }
    let mut report = args.input.echo(RunReport::new("parse")).outcome("ok");
    report = if entries.len() == 1 {
        let only = entries.pop().unwrap();
        report
            .payload("equation", &only["equation"])
            .payload("variables", &only["variables"])
            .payload("terms", &only["terms"])
    } else {
        report.payload("results", &entries)
    };
    emit(&report, &args.out)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(args) => cmd_check(args),
        Command::VerifyRange(args) => cmd_verify_range(args),
        Command::Search(args) => cmd_search(args),
        Command::FindModulus(args) => cmd_find_modulus(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Parse(args) => cmd_parse(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
