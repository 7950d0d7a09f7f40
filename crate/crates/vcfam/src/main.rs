//! Command-line driver: exact searches, closed-form bounds, family
//! construction and the verification suites, reported as stable JSON
//! documents.
//!
//! Exit codes: 0 success, 1 usage/parse/tool error, 2 search budget
//! exceeded, 3 a checked mathematical claim failed to hold.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use vcfam::family::{SetFamily, SetOp};
use vcfam::report::{Provenance, RunReport, RunStatus};
use vcfam::search::{SearchOptions, VcDeltaMode};
use vcfam::{construct, files, formula, search, verify, Error};

const BUDGET_ENV: &str = "VCFAM_NODE_BUDGET";

#[derive(Parser)]
#[command(
    name = "vcfam",
    version,
    about = "Exact VC-dimension and extremal set-family computations",
    after_help = "Exit codes: 0 ok, 1 error, 2 budget exceeded, 3 claim violated."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// VC dimension of a family file, optionally of its k-fold closure.
    Vc {
        /// Family file path, or '-' for stdin.
        file: String,
        /// Apply a k-fold operation before measuring.
        #[arg(long, value_enum)]
        op: Option<OpArg>,
        /// Fold count for --op.
        #[arg(long, default_value_t = 2)]
        k: u32,
    },
    /// Exact extremal searches.
    Search {
        #[command(subcommand)]
        kind: SearchCmd,
    },
    /// Closed-form bound evaluation.
    Formula {
        #[command(subcommand)]
        which: FormulaCmd,
    },
    /// Property verification suites.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        /// Trials for the fuzz suites.
        #[arg(long, default_value_t = verify::DEFAULT_TRIALS)]
        trials: u64,
        /// Seed for the fuzz suites (fixed default keeps runs reproducible).
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        /// Largest ground-set size exercised.
        #[arg(long = "max-n", default_value_t = 8)]
        max_n: u32,
    },
    /// Generate a named family as a family file.
    Construct {
        #[command(subcommand)]
        which: ConstructCmd,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OpArg {
    Inter,
    Union,
    Symdiff,
}

impl From<OpArg> for SetOp {
    fn from(op: OpArg) -> SetOp {
        match op {
            OpArg::Inter => SetOp::Intersection,
            OpArg::Union => SetOp::Union,
            OpArg::Symdiff => SetOp::SymmetricDifference,
        }
    }
}

#[derive(Args, Clone)]
struct Tuning {
    /// Maximum number of witness families kept.
    #[arg(long, default_value_t = 16)]
    witness_cap: usize,
    /// Node budget; VCFAM_NODE_BUDGET overrides the default.
    #[arg(long)]
    budget: Option<u64>,
    /// Worker threads (1 = deterministic traversal).
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

impl Tuning {
    fn options(&self, shifted: bool) -> SearchOptions {
        let default_budget = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or_else(|| SearchOptions::default().node_budget);
        SearchOptions {
            shifted_restriction: shifted,
            witness_cap: self.witness_cap,
            node_budget: self.budget.unwrap_or(default_budget),
            workers: self.workers,
        }
    }
}

#[derive(Subcommand, Clone)]
enum SearchCmd {
    /// Largest family whose k-fold unions have at most d elements.
    P {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        d: u32,
        /// Disable the shifted-family restriction (slower; enumerates every
        /// maximum family, enabling the uniqueness certificate).
        #[arg(long)]
        no_shift: bool,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Largest family whose k-fold symmetric-difference closure has VC
    /// dimension at most d.
    Pprime {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Largest family whose k-fold intersections have at least t elements.
    M {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        no_shift: bool,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Largest family with both pairwise closures VC-bounded by d.
    TwoSided {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[command(flatten)]
        tuning: Tuning,
    },
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum ModeArg {
    Exhaustive,
    Compressed,
}

#[derive(Subcommand, Clone)]
enum FormulaCmd {
    /// (n choose <= d).
    Sauer {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
    },
    /// 2^r ((n-r) choose <= ⌊d/2⌋), r = d mod 2.
    Katona {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
    },
    /// 2^r ((n-r) choose <= ⌊d/k⌋), r = d mod k.
    Main {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        d: u32,
    },
    /// max_i 2^{d-ki} ((n-d+ki) choose <= i) with all candidates.
    Conjecture {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        d: u32,
    },
    /// Threshold estimate for the half-split bound becoming exact.
    N0 {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        k: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    LemmaCompress,
    LemmaShift,
    LemmaWitness,
    Sauer,
    Equivalence,
    Katona,
    Conjecture,
    Counterexample,
}

#[derive(Subcommand, Clone)]
enum ConstructCmd {
    /// Product family: low sets over the first n-r elements times the full
    /// cube on the last r.
    Ari {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Monotone-mod-d family.
    Modd {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// All subsets with at most d elements.
    Lowsets {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// All subsets with at least n-d elements.
    Highsets {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// The complete chain of nested prefixes.
    Chain {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// The full cube minus {1} and [n].
    Cube2 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(cli.command) {
        Ok(mut report) => {
            report.elapsed_ms = start.elapsed().as_millis();
            println!("{}", report.to_json());
            match report.status {
                RunStatus::Ok => ExitCode::SUCCESS,
                RunStatus::ClaimViolated => ExitCode::from(3),
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err {
                Error::BudgetExceeded(_) => 2,
                _ => 1,
            })
        }
    }
}

fn run(command: Command) -> Result<RunReport, Error> {
    match command {
        Command::Vc { file, op, k } => cmd_vc(&file, op, k),
        Command::Search { kind } => cmd_search(kind),
        Command::Formula { which } => cmd_formula(which),
        Command::Verify {
            suite,
            trials,
            seed,
            max_n,
        } => cmd_verify(suite, trials, seed, max_n),
        Command::Construct { which } => cmd_construct(which),
    }
}

fn read_family(path: &str) -> Result<SetFamily, Error> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        files::parse(&text)
    } else {
        files::read_path(std::path::Path::new(path))
    }
}

fn cmd_vc(file: &str, op: Option<OpArg>, k: u32) -> Result<RunReport, Error> {
    let family = read_family(file)?;
    let mut report = RunReport::new("vc", Provenance::Search)
        .param("file", file)
        .param("n", family.n())
        .param("members", family.len());
    let measured = match op {
        None => family,
        Some(op) => {
            let set_op: SetOp = op.into();
            report = report.param("op", set_op.symbol()).param("k", k);
            family.kfold(set_op, k)?
        }
    };
    report.value = Some(measured.vc_dimension().to_string());
    Ok(report)
}

fn cmd_search(kind: SearchCmd) -> Result<RunReport, Error> {
    match kind {
        SearchCmd::P {
            n,
            k,
            d,
            no_shift,
            tuning,
        } => {
            let opts = tuning.options(!no_shift);
            let result = search::max_kwise_union(n, k, d, &opts)?;
            let mut report = RunReport::new("search p", Provenance::Search)
                .param("n", n)
                .param("k", k)
                .param("d", d)
                .param("shifted", !no_shift)
                .param("workers", opts.workers)
                .with_search(&result);
            check_conjecture_claim(&mut report, n, k, d, result.value)?;
            Ok(report)
        }
        SearchCmd::Pprime {
            n,
            k,
            d,
            mode,
            tuning,
        } => {
            let opts = tuning.options(true);
            let mode_val = match mode {
                ModeArg::Exhaustive => VcDeltaMode::Exhaustive,
                ModeArg::Compressed => VcDeltaMode::Compressed,
            };
            let result = search::max_vc_delta(n, k, d, mode_val, &opts)?;
            let mut report = RunReport::new("search pprime", Provenance::Search)
                .param("n", n)
                .param("k", k)
                .param("d", d)
                .param(
                    "mode",
                    if mode == ModeArg::Exhaustive {
                        "exhaustive"
                    } else {
                        "compressed"
                    },
                )
                .with_search(&result);
            check_conjecture_claim(&mut report, n, k, d, result.value)?;
            Ok(report)
        }
        SearchCmd::M {
            n,
            k,
            t,
            no_shift,
            tuning,
        } => {
            let opts = tuning.options(!no_shift);
            let result = search::max_kwise_intersecting(n, k, t, &opts)?;
            let mut report = RunReport::new("search m", Provenance::Search)
                .param("n", n)
                .param("k", k)
                .param("t", t)
                .param("shifted", !no_shift)
                .with_search(&result);
            check_conjecture_claim(&mut report, n, k, n - t, result.value)?;
            Ok(report)
        }
        SearchCmd::TwoSided { n, d, tuning } => {
            let opts = tuning.options(true);
            let result = search::max_two_sided_vc(n, d, &opts)?;
            let mut report = RunReport::new("search two-sided", Provenance::Search)
                .param("n", n)
                .param("d", d)
                .with_search(&result);
            if d == 1 && result.exact && result.value != (n + 1) as u64 {
                report.status = RunStatus::ClaimViolated;
                report.note(format!(
                    "two-sided maximum at d=1 expected n+1={}, searched {}",
                    n + 1,
                    result.value
                ));
            }
            Ok(report)
        }
    }
}

/// Compares an exact searched value against the conjectured closed form;
/// a mismatch is reported with the distinguished claim-violated status.
///
/// Both the conjectured maximum and its top candidate (the half-split
/// bound, i = ⌊d/k⌋) are recorded: at small n the two differ, and a
/// mismatch report should say which statement the data contradicts.
fn check_conjecture_claim(
    report: &mut RunReport,
    n: u32,
    k: u32,
    d: u32,
    searched: u64,
) -> Result<(), Error> {
    let conj = formula::conjecture_value(n, k, d)?;
    report
        .terms
        .insert("conjectured".into(), conj.value.to_string());
    let r = d % k;
    let top = (num_bigint::BigUint::from(1u32) << r) * formula::binom_leq(n - r, d / k);
    report
        .terms
        .insert("half_split_candidate".into(), top.to_string());
    if num_bigint::BigUint::from(searched) != conj.value {
        report.status = RunStatus::ClaimViolated;
        report.note(format!(
            "searched value {searched} differs from conjectured {}",
            conj.value
        ));
    }
    Ok(())
}

fn cmd_formula(which: FormulaCmd) -> Result<RunReport, Error> {
    let report = match which {
        FormulaCmd::Sauer { n, d } => {
            let value = formula::sauer_shelah_bound(n, d);
            let mut r = RunReport::new("formula sauer", Provenance::Formula)
                .param("n", n)
                .param("d", d);
            r.value = Some(value.to_string());
            r
        }
        FormulaCmd::Katona { n, d } => RunReport::new("formula katona", Provenance::Formula)
            .param("n", n)
            .param("d", d)
            .with_bound(&formula::katona_bound(n, d)?),
        FormulaCmd::Main { n, k, d } => RunReport::new("formula main", Provenance::Formula)
            .param("n", n)
            .param("k", k)
            .param("d", d)
            .with_bound(&formula::main_bound(n, k, d)?),
        FormulaCmd::Conjecture { n, k, d } => {
            RunReport::new("formula conjecture", Provenance::Formula)
                .param("n", n)
                .param("k", k)
                .param("d", d)
                .with_bound(&formula::conjecture_value(n, k, d)?)
        }
        FormulaCmd::N0 { d, k } => {
            if k == 0 || d == 0 || d > 24 {
                return Err(Error::Range("n0 requires k >= 1 and 1 <= d <= 24".into()));
            }
            let value = formula::n0_estimate(d, k);
            let mut r = RunReport::new("formula n0", Provenance::Formula)
                .param("d", d)
                .param("k", k);
            r.value = Some(value.to_string());
            r
        }
    };
    Ok(report)
}

fn cmd_verify(suite: SuiteArg, trials: u64, seed: u64, max_n: u32) -> Result<RunReport, Error> {
    let outcome = match suite {
        SuiteArg::LemmaCompress => verify::fuzz_lemma_compress(trials, seed, max_n)?,
        SuiteArg::LemmaShift => verify::fuzz_lemma_shift(trials, seed, max_n)?,
        SuiteArg::LemmaWitness => verify::fuzz_lemma_witness(trials, seed, max_n)?,
        SuiteArg::Sauer => verify::fuzz_sauer(trials, seed, max_n)?,
        SuiteArg::Equivalence => verify::grid_equivalence(max_n)?,
        SuiteArg::Katona => verify::grid_katona(max_n)?,
        SuiteArg::Conjecture => verify::grid_conjecture(max_n)?,
        SuiteArg::Counterexample => verify::suite_counterexample(max_n)?,
    };
    let mut report = RunReport::new(format!("verify {}", outcome.suite), Provenance::Verify)
        .param("trials", outcome.trials)
        .param("max_n", outcome.max_n);
    report.seed = Some(seed);
    report.value = Some(if outcome.passed() { "pass" } else { "fail" }.to_string());
    report.note(outcome.description.clone());
    if !outcome.passed() {
        report.status = RunStatus::ClaimViolated;
        for f in &outcome.failures {
            report.note(format!("violation: {f}"));
        }
        if let Some(ce) = &outcome.counterexample {
            report.note(format!("counterexample family file:\n{ce}"));
        }
    }
    Ok(report)
}

fn cmd_construct(which: ConstructCmd) -> Result<RunReport, Error> {
    let (name, family, output, params): (&str, SetFamily, Option<PathBuf>, Vec<(&str, u32)>) =
        match which {
            ConstructCmd::Ari { n, r, i, output } => (
                "ari",
                construct::family_a_ri(n, r, i)?,
                output,
                vec![("n", n), ("r", r), ("i", i)],
            ),
            ConstructCmd::Modd { n, d, output } => (
                "modd",
                construct::mod_d_family(n, d)?,
                output,
                vec![("n", n), ("d", d)],
            ),
            ConstructCmd::Lowsets { n, d, output } => (
                "lowsets",
                construct::lowsets(n, d)?,
                output,
                vec![("n", n), ("d", d)],
            ),
            ConstructCmd::Highsets { n, d, output } => (
                "highsets",
                construct::highsets(n, d)?,
                output,
                vec![("n", n), ("d", d)],
            ),
            ConstructCmd::Chain { n, output } => (
                "chain",
                construct::complete_chain(n)?,
                output,
                vec![("n", n)],
            ),
            ConstructCmd::Cube2 { n, output } => (
                "cube2",
                construct::cube_minus_two(n)?,
                output,
                vec![("n", n)],
            ),
        };

    let mut report = RunReport::new(format!("construct {name}"), Provenance::Construct);
    for (key, value) in params {
        report = report.param(key, value);
    }
    report.value = Some(family.len().to_string());
    report.terms.insert(
        "max_member_size".into(),
        family.max_member_size().to_string(),
    );
    // VC is exponential in the answer; only measure desk-scale outputs.
    if family.support().size() <= 24 || family.len() <= 512 {
        report
            .terms
            .insert("vc_dimension".into(), family.vc_dimension().to_string());
    }

    match output {
        Some(path) => {
            files::write_path(&path, &family)?;
            report = report.param("output", path.display().to_string());
            Ok(report)
        }
        None => {
            // Family file on stdout; the report goes to stderr so pipelines
            // stay clean.
            print!("{}", files::serialize(&family));
            eprintln!("{}", report.to_json());
            std::process::exit(0);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn claim_check_flags_mismatches() {
        // conjectured value at (4,2,2) is 5; a search reporting 6 must flip
        // the status to the distinguished claim-violated state.
        let mut report = RunReport::new("search p", Provenance::Search);
        check_conjecture_claim(&mut report, 4, 2, 2, 6).unwrap();
        assert_eq!(report.status, RunStatus::ClaimViolated);
        assert_eq!(report.terms["conjectured"], "5");
        assert_eq!(report.terms["half_split_candidate"], "5");

        let mut report = RunReport::new("search p", Provenance::Search);
        check_conjecture_claim(&mut report, 4, 2, 2, 5).unwrap();
        assert_eq!(report.status, RunStatus::Ok);
    }

    #[test]
    fn claim_check_separates_conjecture_from_half_split() {
        // At (4,3,3) the conjectured maximum is 8 while the half-split
        // candidate is only 5; the report carries both.
        let mut report = RunReport::new("search p", Provenance::Search);
        check_conjecture_claim(&mut report, 4, 3, 3, 8).unwrap();
        assert_eq!(report.status, RunStatus::Ok);
        assert_eq!(report.terms["conjectured"], "8");
        assert_eq!(report.terms["half_split_candidate"], "5");
    }
}
