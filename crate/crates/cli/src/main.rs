//! `bsgroups`: experiments on Baumslag–Solitar groups in the space of marked groups.

mod range;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use bsgroups::bs::SearchMode;
use bsgroups::congruence::CongruenceModulus;
use bsgroups::*;
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use range::IntRange;
use report::{Format, Report};

/// Searches beyond this length are refused outright.
const HARD_CAP: u64 = 16;
/// Searches beyond this length are allowed but slow.
const SOFT_CAP: u64 = 14;

#[derive(Parser)]
#[command(name = "bsgroups", version, about = "Word problems, girths and marked-group distances for BS(m,n)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MaxLen {
    /// Longest word length to search.
    #[arg(long, default_value_t = 12)]
    max_len: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a word in a group and decide whether it is trivial.
    Reduce {
        /// `free`, `wreath` or `bs:M,N`.
        #[arg(long, allow_hyphen_values = true)]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Compare the girth formula with exhaustive search over a grid of (m, n).
    Girth {
        #[arg(long, allow_hyphen_values = true)]
        m: IntRange,
        #[arg(long, allow_hyphen_values = true)]
        n: IntRange,
        #[command(flatten)]
        max_len: MaxLen,
    },
    /// First word trivial in exactly one of two groups.
    Compare {
        #[arg(long, allow_hyphen_values = true)]
        g1: String,
        #[arg(long, allow_hyphen_values = true)]
        g2: String,
        #[command(flatten)]
        max_len: MaxLen,
    },
    /// All cyclically reduced relations up to a length.
    Relations {
        #[arg(long, allow_hyphen_values = true)]
        group: String,
        #[command(flatten)]
        max_len: MaxLen,
    },
    /// Agreement radius of BS(1,n) and the wreath product over a range of n.
    WreathLimit {
        #[arg(long, allow_hyphen_values = true)]
        n: IntRange,
        #[command(flatten)]
        max_len: MaxLen,
    },
    /// Girth growth along the diagonal family BS(j, j+offset).
    FreeLimit {
        #[arg(long, allow_hyphen_values = true)]
        j: IntRange,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        offset: i64,
        #[command(flatten)]
        max_len: MaxLen,
    },
    /// Check the congruence test words against the congruence predicate.
    Congruence {
        #[arg(long, allow_hyphen_values = true)]
        m: IntRange,
        #[arg(long, allow_hyphen_values = true)]
        n: IntRange,
        #[arg(long, default_value = "1")]
        h: IntRange,
        /// Shifts to test; defaults to 0..|m|^h-1, which covers every residue.
        #[arg(long, allow_hyphen_values = true)]
        k: Option<IntRange>,
    },
    /// Agreement radii between consecutive members of BS(m, n_j) and the m-adic limit of n_j.
    Cauchy {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        /// `C+S*M^j` or `list:[v0,v1,...]`.
        #[arg(long, allow_hyphen_values = true)]
        seq: String,
        #[arg(long, default_value = "0..5")]
        j: IntRange,
        #[arg(long, default_value_t = 6)]
        precision: u32,
        #[arg(long, default_value_t = 64)]
        budget: u64,
        #[command(flatten)]
        max_len: MaxLen,
    },
    /// A relation of BS(m, 1+m) failing in every BS(m, 1+m+m^j).
    Noninjective {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, default_value = "1..6")]
        j: IntRange,
        #[arg(long, default_value_t = 8)]
        precision: u32,
    },
    /// m-adic limit of an integer sequence.
    Limit {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        seq: String,
        #[arg(long, default_value_t = 8)]
        precision: u32,
        #[arg(long, default_value_t = 64)]
        budget: u64,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cap exceeded: {0}")]
    Cap(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Cap(_) => 3,
        }
    }
}

/// A report plus the cross-checks that failed while producing it.
struct Outcome {
    report: Report,
    failures: Vec<String>,
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn check_len(max_len: u64) -> Result<u64, CliError> {
    if max_len == 0 {
        return Err(usage("--max-len must be at least 1"));
    }
    if max_len > HARD_CAP {
        return Err(CliError::Cap(format!("--max-len {max_len} exceeds {HARD_CAP}")));
    }
    if max_len > SOFT_CAP {
        eprintln!("warning: --max-len {max_len} enumerates about 3^{max_len} words per length");
    }
    Ok(max_len)
}

fn oracle(spec: &str) -> Result<MarkedGroupOracle, CliError> {
    make_oracle(spec).map_err(usage)
}

fn bs(m: i64, n: i64) -> Result<BsGroup, CliError> {
    BsGroup::new(m, n).map_err(usage)
}

fn result_row(d: &DisagreementResult) -> [String; 3] {
    match d {
        DisagreementResult::Found { lambda, witness } => ["found".into(), lambda.to_string(), witness.to_string()],
        DisagreementResult::AgreeUpTo { searched_up_to } => ["agree_up_to".into(), searched_up_to.to_string(), String::new()],
    }
}

/// A reported witness must be trivial in exactly one of the groups.
fn check_witness<G1: MarkedGroup, G2: MarkedGroup>(g1: &G1, g2: &G2, d: &DisagreementResult, failures: &mut Vec<String>) {
    if let DisagreementResult::Found { lambda, witness } = d {
        if g1.decide(witness) == g2.decide(witness) || witness.len() as u64 != *lambda {
            failures.push(format!("witness {witness} does not separate {} and {}", g1.name(), g2.name()));
        }
    }
}

fn reduce(group: &str, word: &str) -> Result<Outcome, CliError> {
    let g = oracle(group)?;
    let w: Word = word.parse().map_err(usage)?;
    let trivial = g.decide(&w);
    let mut failures = Vec::new();
    let (normal_form, extra) = match &g {
        MarkedGroupOracle::Free => (w.to_string(), json!({})),
        MarkedGroupOracle::Wreath => {
            let e = eval_wreath(&w);
            (w.to_string(), json!({ "element": e }))
        }
        MarkedGroupOracle::Bs(b) => {
            let form = b.britton_reduce(&w);
            if b.is_identity_affine_criterion(&w) != trivial {
                failures.push(format!("affine image of {w} disagrees with Britton reduction"));
            }
            let b_exp = b.b_exponent(&w).map(|e| e.to_string());
            (form.to_string(), json!({ "a_letters": form.a_count(), "b_exponent": b_exp }))
        }
    };
    let mut doc = json!({
        "group": g.to_string(),
        "word": w,
        "normal_form": normal_form,
        "trivial": trivial,
    });
    if let (Value::Object(d), Value::Object(e)) = (&mut doc, extra) {
        d.extend(e);
    }
    Ok(Outcome {
        report: Report {
            json: doc,
            header: vec!["group", "word", "trivial"],
            rows: vec![vec![g.to_string(), w.to_string(), trivial.to_string()]],
        },
        failures,
    })
}

fn girth(m: IntRange, n: IntRange, max_len: u64) -> Result<Outcome, CliError> {
    let max_len = check_len(max_len)?;
    let (ms, ns) = (m.nonzero("m"), n.nonzero("n"));
    let mut rows = Vec::new();
    let mut docs = Vec::new();
    let mut failures = Vec::new();
    for &m in &ms {
        for &n in &ns {
            let g = bs(m, n)?;
            let formula = girth_formula(m, n);
            let cap = formula.min(max_len);
            let found = girth_bruteforce(&g, cap, SearchMode::Pruned).map_err(usage)?;
            let ok = match found.girth {
                Girth::Finite(l) => l == formula,
                Girth::NoneUpTo(_) => formula > max_len,
            };
            let shown = match found.girth {
                Girth::Finite(l) => l.to_string(),
                Girth::NoneUpTo(c) => format!(">{c}"),
            };
            if !ok {
                failures.push(format!("BS({m},{n}): formula {formula}, search {shown}"));
            }
            rows.push(vec![m.to_string(), n.to_string(), formula.to_string(), shown.clone(), ok.to_string()]);
            docs.push(json!({
                "m": m, "n": n, "formula": formula, "bruteforce": shown, "match": ok, "witness": found.witness,
            }));
        }
    }
    Ok(Outcome {
        report: Report {
            json: Value::Array(docs),
            header: vec!["m", "n", "formula", "bruteforce", "match"],
            rows,
        },
        failures,
    })
}

fn compare(g1: &str, g2: &str, max_len: u64) -> Result<Outcome, CliError> {
    let max_len = check_len(max_len)?;
    let (g1, g2) = (oracle(g1)?, oracle(g2)?);
    let d = first_disagreement(&g1, &g2, max_len);
    let mut failures = Vec::new();
    check_witness(&g1, &g2, &d, &mut failures);
    let [kind, lambda, witness] = result_row(&d);
    Ok(Outcome {
        report: Report {
            json: serde_json::to_value(&d).expect("serializable"),
            header: vec!["g1", "g2", "kind", "lambda", "witness"],
            rows: vec![vec![g1.to_string(), g2.to_string(), kind, lambda, witness]],
        },
        failures,
    })
}

fn relations(group: &str, max_len: u64) -> Result<Outcome, CliError> {
    let max_len = check_len(max_len)?;
    let g = oracle(group)?;
    let rels = relations_up_to(&g, max_len);
    let failures = rels
        .iter()
        .filter(|r| !g.decide(&r.inverse()))
        .map(|r| format!("inverse of relation {r} is not a relation"))
        .collect();
    Ok(Outcome {
        report: Report {
            json: json!({ "group": g.to_string(), "max_len": max_len, "count": rels.len(), "relations": rels }),
            header: vec!["length", "word"],
            rows: rels.iter().map(|r| vec![r.len().to_string(), r.to_string()]).collect(),
        },
        failures,
    })
}

fn wreath_limit(n: IntRange, max_len: u64) -> Result<Outcome, CliError> {
    let max_len = check_len(max_len)?;
    let mut rows = Vec::new();
    let mut docs = Vec::new();
    let mut failures = Vec::new();
    for n in n.nonzero("n") {
        let g = bs(1, n)?;
        let d = first_disagreement(&g, &Wreath, max_len);
        check_witness(&g, &Wreath, &d, &mut failures);
        // For n ≥ 2 the shortest separating relation is a b a⁻¹ b^{-n}.
        if n >= 2 {
            let expected = n as u64 + 3;
            let ok = match &d {
                DisagreementResult::Found { lambda, .. } => *lambda == expected,
                DisagreementResult::AgreeUpTo { searched_up_to } => *searched_up_to < expected,
            };
            if !ok {
                failures.push(format!("BS(1,{n}) vs wreath: expected radius {expected}, got {d:?}"));
            }
        }
        let [kind, lambda, witness] = result_row(&d);
        rows.push(vec![n.to_string(), kind, lambda, witness]);
        docs.push(json!({ "n": n, "result": d }));
    }
    Ok(Outcome {
        report: Report {
            json: json!({ "max_len": max_len, "rows": docs }),
            header: vec!["n", "kind", "lambda", "witness"],
            rows,
        },
        failures,
    })
}

fn free_limit(j: IntRange, offset: i64, max_len: u64) -> Result<Outcome, CliError> {
    let max_len = check_len(max_len)?;
    let mut rows = Vec::new();
    let mut docs = Vec::new();
    let mut failures = Vec::new();
    for j in j.values() {
        let (m, n) = (j, j + offset);
        if m == 0 || n == 0 {
            eprintln!("note: skipping j={j}: BS({m},{n}) needs nonzero parameters");
            continue;
        }
        let g = bs(m, n)?;
        let formula = girth_formula(m, n);
        let d = first_disagreement(&g, &Free, max_len);
        check_witness(&g, &Free, &d, &mut failures);
        let ok = match &d {
            DisagreementResult::Found { lambda, .. } => *lambda == formula,
            DisagreementResult::AgreeUpTo { .. } => formula > max_len,
        };
        if !ok {
            failures.push(format!("BS({m},{n}) vs free: girth {formula}, got {d:?}"));
        }
        let [kind, lambda, witness] = result_row(&d);
        rows.push(vec![j.to_string(), m.to_string(), n.to_string(), formula.to_string(), kind, lambda, witness]);
        docs.push(json!({ "j": j, "m": m, "n": n, "girth": formula, "result": d }));
    }
    Ok(Outcome {
        report: Report {
            json: json!({ "max_len": max_len, "offset": offset, "rows": docs }),
            header: vec!["j", "m", "n", "girth", "kind", "lambda", "witness"],
            rows,
        },
        failures,
    })
}

fn congruence(m: IntRange, n: IntRange, h: IntRange, k: Option<IntRange>) -> Result<Outcome, CliError> {
    if h.lo < 1 {
        return Err(usage("--h must be at least 1"));
    }
    let mut rows = Vec::new();
    let mut docs = Vec::new();
    let mut failures = Vec::new();
    let ns: Vec<i64> = n
        .values()
        .filter(|&n| {
            let keep = n.abs() >= 2;
            if !keep {
                eprintln!("note: excluding n={n}: the test words need |n| >= 2");
            }
            keep
        })
        .collect();
    for m in m.nonzero("m") {
        for h in h.values() {
            let h = u32::try_from(h).map_err(usage)?;
            let ks: Vec<i64> = match k {
                Some(k) => k.values().collect(),
                None => {
                    let top = m.unsigned_abs().checked_pow(h).filter(|&t| t <= 1 << 12);
                    let top = top.ok_or_else(|| CliError::Cap(format!("|{m}|^{h} shifts")))?;
                    (0..top as i64).collect()
                }
            };
            for &n in &ns {
                let g = bs(m, n)?;
                let modulus = CongruenceModulus::new(m, n).map_err(usage)?.modulus(h);
                for &k in &ks {
                    let w = congruence_witness_word(m, k, h);
                    let oracle = g.is_identity(&w);
                    let predicate = congruence_predicate(m, n, h, k).map_err(usage)?;
                    let ok = oracle == predicate;
                    if !ok {
                        failures.push(format!("BS({m},{n}) h={h} k={k}: oracle {oracle}, predicate {predicate}"));
                    }
                    rows.push(vec![
                        m.to_string(),
                        n.to_string(),
                        h.to_string(),
                        k.to_string(),
                        modulus.to_string(),
                        oracle.to_string(),
                        predicate.to_string(),
                        ok.to_string(),
                    ]);
                    docs.push(json!({
                        "m": m, "n": n, "h": h, "k": k, "modulus": modulus.to_string(),
                        "oracle": oracle, "predicate": predicate, "match": ok,
                    }));
                }
            }
        }
    }
    Ok(Outcome {
        report: Report {
            json: Value::Array(docs),
            header: vec!["m", "n", "h", "k", "modulus", "oracle", "predicate", "match"],
            rows,
        },
        failures,
    })
}

fn sequence(m: i64, seq: &str) -> Result<SequenceSpec, CliError> {
    let spec: SequenceSpec = seq.parse().map_err(usage)?;
    spec.check_base(m).map_err(usage)?;
    Ok(spec)
}

fn madic_limit(m: i64, spec: &SequenceSpec, precision: u32, budget: u64) -> Result<MadicInt, CliError> {
    limit_of_sequence(m, precision, |j| spec.term(j), budget).map_err(|e| match e {
        MadicError::Divergence { .. } => CliError::Cap(e.to_string()),
        e => usage(e),
    })
}

fn cauchy(m: i64, seq: &str, j: IntRange, precision: u32, budget: u64, max_len: u64) -> Result<Outcome, CliError> {
    let max_len = check_len(max_len)?;
    if j.lo < 0 {
        return Err(usage("--j indexes start at 0"));
    }
    let spec = sequence(m, seq)?;
    let limit = madic_limit(m, &spec, precision, budget)?;
    let mut terms = Vec::new();
    for idx in j.values() {
        let Some(t) = spec.term(idx as u64) else { break };
        let n = i64::try_from(&t).map_err(|_| CliError::Cap(format!("term n_{idx} = {t} exceeds 64 bits")))?;
        if n == 0 {
            eprintln!("note: skipping n_{idx} = 0");
            continue;
        }
        terms.push((idx, n));
    }
    let mut rows = Vec::new();
    let mut docs = Vec::new();
    let mut failures = Vec::new();
    for pair in terms.windows(2) {
        let ((j0, n0), (_, n1)) = (pair[0], pair[1]);
        let (g0, g1) = (bs(m, n0)?, bs(m, n1)?);
        let d = first_disagreement(&g0, &g1, max_len);
        check_witness(&g0, &g1, &d, &mut failures);
        let dist = madic_distance(
            &MadicInt::from_integer(m, precision, n0).map_err(usage)?,
            &MadicInt::from_integer(m, precision, n1).map_err(usage)?,
        )
        .map_err(usage)?;
        let [kind, lambda, witness] = result_row(&d);
        rows.push(vec![j0.to_string(), n0.to_string(), n1.to_string(), dist.to_string(), kind, lambda, witness]);
        docs.push(json!({ "j": j0, "n": n0, "n_next": n1, "madic_distance": dist, "result": d }));
    }
    Ok(Outcome {
        report: Report {
            json: json!({ "m": m, "seq": spec.to_string(), "max_len": max_len, "radii": docs, "limit": limit }),
            header: vec!["j", "n", "n_next", "madic_distance", "kind", "lambda", "witness"],
            rows,
        },
        failures,
    })
}

fn noninjective(m: i64, j: IntRange, precision: u32) -> Result<Outcome, CliError> {
    if m.abs() < 2 {
        return Err(usage("--m must satisfy |m| >= 2"));
    }
    if j.lo < 1 {
        return Err(usage("--j must start at 1 or later"));
    }
    let relator = Word::from_powers(&[
        (Generator::A, 1),
        (Generator::B, m),
        (Generator::A, -1),
        (Generator::B, -(m + 1)),
    ]);
    let base_n = 1 + m;
    let base_trivial = bs(m, base_n)?.is_identity(&relator);
    let mut failures = Vec::new();
    if !base_trivial {
        failures.push(format!("{relator} is not trivial in BS({m},{base_n})"));
    }
    let mut rows = vec![vec!["base".to_string(), base_n.to_string(), base_trivial.to_string()]];
    let mut family = Vec::new();
    for jj in j.values() {
        let exp = u32::try_from(jj).map_err(usage)?;
        let n = m
            .checked_pow(exp)
            .and_then(|p| p.checked_add(base_n))
            .ok_or_else(|| CliError::Cap(format!("1+m+m^{jj} exceeds 64 bits")))?;
        let trivial = bs(m, n)?.is_identity(&relator);
        if trivial {
            failures.push(format!("{relator} is trivial in BS({m},{n})"));
        }
        rows.push(vec![jj.to_string(), n.to_string(), trivial.to_string()]);
        family.push(json!({ "j": jj, "n": n, "trivial": trivial }));
    }
    let spec = SequenceSpec::Geometric { c: BigInt::from(base_n), s: BigInt::from(1), base: m };
    let limit = madic_limit(m, &spec, precision, 64)?;
    let expected = MadicInt::from_integer(m, precision, base_n).map_err(usage)?;
    if limit != expected {
        failures.push(format!("limit of 1+m+m^j is not 1+m modulo |m|^{precision}"));
    }
    Ok(Outcome {
        report: Report {
            json: json!({
                "m": m,
                "relator": relator,
                "base": { "n": base_n, "trivial": base_trivial },
                "family": family,
                "limit": limit,
            }),
            header: vec!["j", "n", "trivial"],
            rows,
        },
        failures,
    })
}

fn limit(m: i64, seq: &str, precision: u32, budget: u64) -> Result<Outcome, CliError> {
    let spec = sequence(m, seq)?;
    let x = madic_limit(m, &spec, precision, budget)?;
    Ok(Outcome {
        report: Report {
            json: serde_json::to_value(&x).expect("serializable"),
            header: vec!["m", "H", "residue"],
            rows: vec![vec![m.to_string(), precision.to_string(), x.residue().to_string()]],
        },
        failures: Vec::new(),
    })
}

fn dispatch(command: Command) -> Result<(Outcome, Format), CliError> {
    use Format::{Csv, Json};
    Ok(match command {
        Command::Reduce { group, word } => (reduce(&group, &word)?, Json),
        Command::Girth { m, n, max_len } => (girth(m, n, max_len.max_len)?, Csv),
        Command::Compare { g1, g2, max_len } => (compare(&g1, &g2, max_len.max_len)?, Json),
        Command::Relations { group, max_len } => (relations(&group, max_len.max_len)?, Csv),
        Command::WreathLimit { n, max_len } => (wreath_limit(n, max_len.max_len)?, Csv),
        Command::FreeLimit { j, offset, max_len } => (free_limit(j, offset, max_len.max_len)?, Csv),
        Command::Congruence { m, n, h, k } => (congruence(m, n, h, k)?, Csv),
        Command::Cauchy { m, seq, j, precision, budget, max_len } => {
            (cauchy(m, &seq, j, precision, budget, max_len.max_len)?, Json)
        }
        Command::Noninjective { m, j, precision } => (noninjective(m, j, precision)?, Json),
        Command::Limit { m, seq, precision, budget } => (limit(m, &seq, precision, budget)?, Json),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let run = || -> Result<Vec<String>, CliError> {
        let (outcome, default_format) = dispatch(cli.command)?;
        outcome.report.write_to(cli.format.unwrap_or(default_format), cli.output.as_deref())?;
        Ok(outcome.failures)
    };
    match run() {
        Ok(failures) if failures.is_empty() => ExitCode::SUCCESS,
        Ok(failures) => {
            for f in &failures {
                eprintln!("cross-check failed: {f}");
            }
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
