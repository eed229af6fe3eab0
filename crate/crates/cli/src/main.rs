use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use egz::acceptance;
use egz::congruences::{
    dichotomy_suite, general_identities, lset_bound_check, run_suite, CongruenceReport, Identity,
    Sampling,
};
use egz::constants::{compute_constant, Certificate, LengthSpec};
use egz::constructions::{build_and_verify, CheckStatus, ConstructionKind};
use egz::count::count_table;
use egz::search::{SearchConfig, DEFAULT_ORBIT_BUDGET};
use egz::seq::{parse_entries, parse_group};
use egz::{Error, SymmetryMode};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "egz", version, about = "Zero-sum subsequence counting and EGZ constants for small abelian groups")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct RunConfig {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Seed for sampled runs.
    #[arg(long, default_value_t = acceptance::SEED, global = true)]
    seed: u64,
    /// Search nodes allowed per length before giving up.
    #[arg(long, default_value_t = DEFAULT_ORBIT_BUDGET, global = true)]
    orbit_budget: u64,
    /// Search threads; 0 picks the number of cores.
    #[arg(long, default_value_t = 1, global = true)]
    threads: usize,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Count zero-sum subsequences of a sequence.
    Count {
        #[arg(long)]
        group: String,
        #[arg(long)]
        seq: String,
        /// A single length.
        #[arg(long, conflicts_with = "kmax")]
        k: Option<usize>,
        /// Every length up to this one.
        #[arg(long)]
        kmax: Option<usize>,
        /// With --kmax, print counts for every group element, not only zero.
        #[arg(long, requires = "kmax")]
        table: bool,
    },
    /// Compute s_L(G), or s'_L(G) with --modified.
    Constant {
        #[arg(long)]
        group: String,
        /// Comma-separated length set L.
        #[arg(long, value_delimiter = ',', required = true)]
        lengths: Vec<usize>,
        #[arg(long)]
        modified: bool,
        /// Search ceiling; defaults to the tabulated proof-backed upper bound.
        #[arg(long)]
        ceiling: Option<u64>,
        #[arg(long, value_enum, default_value_t = Symmetry::Both)]
        symmetry: Symmetry,
    },
    /// Build an extremal sequence and verify its claimed properties.
    Construct {
        /// lower_gcd, p3, egz_lower or rect_lower.
        name: String,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        t: Option<u64>,
        #[arg(long)]
        n1: Option<u64>,
        #[arg(long)]
        n2: Option<u64>,
    },
    /// Check a counting congruence over (Z/p)^d.
    Congruence {
        /// reiher, cw_rank3_full, cw_rank3_shift, cw_general, dichotomy or lset.
        identity: String,
        #[arg(long)]
        p: u64,
        /// Rank, for cw_general and lset.
        #[arg(long)]
        d: Option<usize>,
        /// Enumerate every sequence instead of sampling.
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Only this criterion.
        #[arg(long)]
        criterion: Option<u8>,
    },
}

#[derive(ValueEnum, Clone, Copy)]
enum Symmetry {
    None,
    Translation,
    Automorphism,
    Both,
}

impl From<Symmetry> for SymmetryMode {
    fn from(s: Symmetry) -> Self {
        match s {
            Symmetry::None => SymmetryMode::NONE,
            Symmetry::Translation => SymmetryMode::TRANSLATION,
            Symmetry::Automorphism => SymmetryMode::AUTOMORPHISM,
            Symmetry::Both => SymmetryMode::BOTH,
        }
    }
}

/// What a command produced: the JSON body, plus text and CSV renderings.
struct Output {
    json: Value,
    text: String,
    csv: String,
    /// Set when the command ran but something it checked did not hold.
    verification_failed: bool,
}

const EXIT_PARSE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;
const EXIT_VERIFICATION: u8 = 4;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } | Error::MissingCeiling | Error::NoTheorem(_) => EXIT_INCONCLUSIVE,
        Error::CeilingUnsound { .. } => EXIT_VERIFICATION,
        _ => EXIT_PARSE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = cli.run;
    match execute(&cli.command, &run) {
        Ok(out) => {
            print!("{}", render(&out, &run));
            if out.verification_failed {
                ExitCode::from(EXIT_VERIFICATION)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn render(out: &Output, run: &RunConfig) -> String {
    match run.format {
        Format::Json => {
            let mut body = json!({ "schema": SCHEMA, "seed": run.seed, "orbit_budget": run.orbit_budget });
            if let (Value::Object(dst), Value::Object(src)) = (&mut body, &out.json) {
                dst.extend(src.clone());
            }
            serde_json::to_string_pretty(&body).expect("serializable") + "\n"
        }
        Format::Csv => out.csv.clone(),
        Format::Text => format!("{}seed {}, orbit budget {}\n", out.text, run.seed, run.orbit_budget),
    }
}

fn search_config(run: &RunConfig, symmetry: SymmetryMode) -> SearchConfig {
    SearchConfig { symmetry, orbit_budget: run.orbit_budget, threads: run.threads }
}

fn execute(cmd: &Command, run: &RunConfig) -> egz::Result<Output> {
    match cmd {
        Command::Count { group, seq, k, kmax, table } => cmd_count(group, seq, *k, *kmax, *table),
        Command::Constant { group, lengths, modified, ceiling, symmetry } => {
            cmd_constant(group, lengths, *modified, *ceiling, search_config(run, (*symmetry).into()))
        }
        Command::Construct { name, n, t, n1, n2 } => {
            let params: BTreeMap<String, u64> = [("n", n), ("t", t), ("n1", n1), ("n2", n2)]
                .into_iter()
                .filter_map(|(key, v)| v.map(|v| (key.to_string(), v)))
                .collect();
            cmd_construct(name, &params)
        }
        Command::Congruence { identity, p, d, exhaustive, samples } => {
            let sampling =
                if *exhaustive { Sampling::Exhaustive } else { Sampling::Random { samples: *samples, seed: run.seed } };
            cmd_congruence(identity, *p, *d, sampling)
        }
        Command::Selftest { criterion } => cmd_selftest(*criterion, &search_config(run, SymmetryMode::BOTH)),
    }
}

fn cmd_count(group: &str, seq: &str, k: Option<usize>, kmax: Option<usize>, full: bool) -> egz::Result<Output> {
    let g = parse_group(group)?;
    let j = parse_entries(&g, seq)?;
    let top = k.or(kmax).unwrap_or(j.len());
    let counts = count_table(&j, top)?;
    let ks: Vec<usize> = match k {
        Some(k) => vec![k],
        None => (0..=top).collect(),
    };
    let mut text = String::new();
    let mut csv = String::from("k,count\n");
    let mut rows = Vec::new();
    for &k in &ks {
        let c = counts.zero_sum(k).to_string();
        let _ = writeln!(text, "({k}|J) = {c}");
        let _ = writeln!(csv, "{k},{c}");
        let mut row = json!({ "k": k, "count": c });
        if full {
            let by_element: BTreeMap<String, String> = g
                .elements()
                .zip(counts.row(k))
                .map(|(e, c)| (e.to_string(), c.to_string()))
                .collect();
            for (e, c) in &by_element {
                let _ = writeln!(text, "  sum {e}: {c}");
            }
            row["by_sum"] = json!(by_element);
        }
        rows.push(row);
    }
    Ok(Output {
        json: json!({ "command": "count", "group": g.to_string(), "seq": j, "counts": rows }),
        text,
        csv,
        verification_failed: false,
    })
}

fn cmd_constant(
    group: &str,
    lengths: &[usize],
    modified: bool,
    ceiling: Option<u64>,
    cfg: SearchConfig,
) -> egz::Result<Output> {
    let g = parse_group(group)?;
    let spec = LengthSpec::fixed(lengths.iter().copied())?;
    let r = compute_constant(&g, &spec, modified, ceiling, &cfg)?;
    let name = if modified { "s'" } else { "s" };
    let mut text = format!("{name}_{spec}({g}) = {}\nceiling: {}\nsymmetry: {}\n", r.value, r.ceiling, r.symmetry.label());
    let mut csv = String::from("length,outcome,detail\n");
    for c in &r.certificates {
        match &c.result {
            Certificate::Counterexample { seq, .. } => {
                let _ = writeln!(text, "length {}: counterexample {}", seq.len(), seq.entries_text());
                let _ = writeln!(csv, "{},counterexample,{}", seq.len(), seq.entries_text());
            }
            Certificate::Exhausted { length, orbits_visited, .. } => {
                let _ = writeln!(text, "length {length}: none ({orbits_visited} nodes)");
                let _ = writeln!(csv, "{length},exhausted,{orbits_visited}");
            }
        }
    }
    let comparison = r.bounds.as_ref().map(|b| {
        let _ = writeln!(
            text,
            "table: lower {:?}, upper {:?}, proof-backed upper {:?}, exact {:?}",
            b.lower, b.upper, b.proof_backed_upper, b.exact
        );
        json!({
            "within_all_bounds": b.admits(r.value),
            "within_proof_backed_bounds": b.admits_proof_backed(r.value),
            "matches_exact": b.exact.map(|x| x == r.value),
        })
    });
    let verified = r.certificates.iter().all(|c| c.verify());
    Ok(Output {
        json: json!({
            "command": "constant",
            "group": g.to_string(),
            "lengths": spec.lengths,
            "result": r,
            "comparison": comparison,
            "certificates_verified": verified,
        }),
        text,
        csv,
        verification_failed: !verified,
    })
}

fn cmd_construct(name: &str, params: &BTreeMap<String, u64>) -> egz::Result<Output> {
    let kind = ConstructionKind::from_name(name, params)?;
    let (c, report) = build_and_verify(kind)?;
    let mut text = format!("{}\n", c.seq);
    let mut csv = String::from("check,status,detail\n");
    for check in &report.checks {
        let status = match check.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
        };
        let _ = writeln!(text, "{status:>7} {}: {}", check.name, check.detail);
        let _ = writeln!(csv, "{},{status},{}", check.name, check.detail.replace(',', ";"));
    }
    for note in &report.hypothesis_notes {
        let _ = writeln!(text, "note: {note}");
    }
    Ok(Output {
        json: json!({ "command": "construct", "seq": c.seq, "base": c.base, "shift": c.shift.to_string(), "report": report }),
        text,
        csv,
        verification_failed: !report.passed(),
    })
}

fn cmd_congruence(identity: &str, p: u64, d: Option<usize>, sampling: Sampling) -> egz::Result<Output> {
    let need_d = || d.ok_or_else(|| Error::InvalidArgument(format!("`{identity}` needs --d")));
    let reports: Vec<CongruenceReport> = match identity {
        "reiher" | "reiher_2d" => run_suite(Identity::Reiher2d, p, sampling)?,
        "cw_rank3_full" => run_suite(Identity::CwRank3Full, p, sampling)?,
        "cw_rank3_shift" => run_suite(Identity::CwRank3Shift, p, sampling)?,
        "cw_general" => {
            let d = need_d()?;
            let mut all = Vec::new();
            for id in general_identities(d) {
                all.extend(run_suite(id, p, sampling)?);
            }
            all
        }
        "dichotomy" | "dichotomy_4p" => vec![dichotomy_suite(p, sampling)?],
        "lset" | "lset_bound" => vec![lset_bound_check(p, need_d()?, sampling)?],
        other => return Err(Error::UnknownName(other.to_string())),
    };
    let mut text = String::new();
    let mut csv = String::from("identity_id,p,d,length,sequences_checked,failures,seed\n");
    for r in &reports {
        let seed = r.seed.map_or(String::new(), |s| s.to_string());
        let _ = writeln!(
            text,
            "{} p={} d={} length {}: {} checked, {} failures{}",
            r.identity_id,
            r.p,
            r.d,
            r.length,
            r.sequences_checked,
            r.failures,
            if r.claimed { "" } else { " (outside the stated hypothesis; observation only)" }
        );
        let _ = writeln!(csv, "{},{},{},{},{},{},{seed}", r.identity_id, r.p, r.d, r.length, r.sequences_checked, r.failures);
    }
    let failed = reports.iter().any(|r| r.claimed && !r.passed());
    Ok(Output { json: json!({ "command": "congruence", "reports": reports }), text, csv, verification_failed: failed })
}

fn cmd_selftest(only: Option<u8>, cfg: &SearchConfig) -> egz::Result<Output> {
    let results = match only {
        Some(n) => vec![acceptance::run(n, cfg)
            .ok_or_else(|| Error::InvalidArgument(format!("no criterion {n}; there are {}", acceptance::count())))?],
        None => acceptance::run_all(cfg),
    };
    let mut text = String::new();
    let mut csv = String::from("criterion,passed,detail\n");
    for r in &results {
        let _ = writeln!(text, "{r}");
        let _ = writeln!(csv, "{},{},{}", r.number, r.passed, r.detail.replace(',', ";"));
    }
    let failed = results.iter().any(|r| !r.passed);
    Ok(Output { json: json!({ "command": "selftest", "criteria": results }), text, csv, verification_failed: failed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_error_kind() {
        assert_eq!(exit_code(&Error::BudgetExceeded { budget: 1 }), EXIT_INCONCLUSIVE);
        assert_eq!(exit_code(&Error::MissingCeiling), EXIT_INCONCLUSIVE);
        assert_eq!(exit_code(&Error::CeilingUnsound { ceiling: 3 }), EXIT_VERIFICATION);
        assert_eq!(exit_code(&Error::Parse { line: 1, column: 2, message: "x".into() }), EXIT_PARSE);
    }
}
