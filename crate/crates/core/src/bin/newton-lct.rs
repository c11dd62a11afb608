//! Command-line front end: exact thresholds, sequences, witnesses,
//! Kiselman numbers, and the volume experiment over JSON problem
//! documents.
//!
//! Exit codes: 0 success, 2 validation error, 3 refused computation
//! (inexact limit / unsupported), 4 property-check failure.

use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use newton_lct::cache::TermCache;
use newton_lct::corpus::corpus;
use newton_lct::doc::{MethodDoc, ProblemDocument, ResultDocument};
use newton_lct::error::{CoreError, CoreResult};
use newton_lct::exponent::ExponentVector;
use newton_lct::kiselman::{
    kiselman_number, kiselman_number_at, p102_battery, singularity_exponent,
};
use newton_lct::lct::{jumping, lct, multiplier_ideal};
use newton_lct::rational::Rational;
use newton_lct::sequences::{check_graded, check_subadditive, LimitPolyhedron};
use newton_lct::valuation::MonomialValuation;
use newton_lct::volume::{default_r_grid, slope_fit, VolumeMethod};
use newton_lct::witness::{compute_lct_witness, self_computation_test, verify_witness};
use newton_lct::MonomialIdeal;

#[derive(Parser)]
#[command(
    name = "newton-lct",
    version,
    about = "Exact singularity invariants of monomial ideals and toric psh functions"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// problem document (JSON); stdin when omitted
    #[arg(long)]
    input: Option<PathBuf>,
    /// finite-level horizon J for sequences and checkers
    #[arg(long, default_value_t = 12)]
    max_index: u64,
    /// sample count for randomized verification / Monte Carlo
    #[arg(long, default_value_t = 200)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// polydisc parameter for Kiselman evaluations
    #[arg(long)]
    epsilon: Option<f64>,
    /// polydisc radius for the volume experiment
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// human-readable table on stderr
    #[arg(long)]
    pretty: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// cache directory for sequence terms (or env NEWTON_LCT_CACHE)
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// log canonical threshold of a monomial ideal
    Lct(Common),
    /// jumping number lct^q(a)
    Jump(Common),
    /// multiplier ideal J(a^c)
    Multiplier(Common),
    /// evaluate a monomial valuation; valuation ideals
    Valuate(Common),
    /// terms, containment checks and limit of an ideal sequence
    Sequence(Common),
    /// compute and verify a threshold witness for a graded sequence
    Witness(Common),
    /// singularity exponent and Kiselman numbers of a toric psh function
    Kiselman(Common),
    /// exact identity battery linking a toric psh function to its
    /// multiplier-ideal sequence
    P102(Common),
    /// sublevel-volume slope experiment
    Volume(Common),
    /// reproducible corpus self-test
    Selftest(Common),
}

fn main() {
    let cli = Cli::parse();
    let (op, common) = match &cli.cmd {
        Cmd::Lct(c) => ("lct", c),
        Cmd::Jump(c) => ("jump", c),
        Cmd::Multiplier(c) => ("multiplier", c),
        Cmd::Valuate(c) => ("valuate", c),
        Cmd::Sequence(c) => ("sequence", c),
        Cmd::Witness(c) => ("witness", c),
        Cmd::Kiselman(c) => ("kiselman", c),
        Cmd::P102(c) => ("p102", c),
        Cmd::Volume(c) => ("volume", c),
        Cmd::Selftest(c) => ("selftest", c),
    };
    std::process::exit(run(op, common));
}

fn exit_code(e: &CoreError) -> i32 {
    match e {
        CoreError::InexactLimit | CoreError::Unsupported(_) => 3,
        _ => 2,
    }
}

fn run(op: &str, c: &Common) -> i32 {
    let start = Instant::now();
    let input_bytes = if op == "selftest" {
        Vec::new()
    } else {
        match read_input(c) {
            Ok(b) => b,
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        }
    };
    let doc = if op == "selftest" {
        None
    } else {
        match std::str::from_utf8(&input_bytes)
            .map_err(|e| CoreError::InvalidInput(format!("input is not UTF-8: {e}")))
            .and_then(ProblemDocument::from_json)
        {
            Ok(d) => Some(d),
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        }
    };

    match dispatch(op, doc.as_ref(), c) {
        Ok(Outcome { result, checks_passed, csv }) => {
            match (c.format, csv) {
                (Format::Csv, Some(text)) => print!("{text}"),
                (Format::Csv, None) => {
                    eprintln!("error: --format csv is only available for volume profiles");
                    return 2;
                }
                (Format::Json, _) => {
                    let rd = ResultDocument::new(op, &input_bytes, c.seed, result.clone());
                    println!("{}", rd.to_json());
                }
            }
            if c.pretty {
                pretty_table(op, &result);
            }
            eprintln!("timing: {op} finished in {:.3?}", start.elapsed());
            if checks_passed {
                0
            } else {
                eprintln!("error: property check failed; see the report in the result");
                4
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn read_input(c: &Common) -> CoreResult<Vec<u8>> {
    match &c.input {
        Some(path) => std::fs::read(path)
            .map_err(|e| CoreError::InvalidInput(format!("cannot read {}: {e}", path.display()))),
        None => {
            let mut buf = Vec::new();
            std::io::stdin()
                .read_to_end(&mut buf)
                .map_err(|e| CoreError::InvalidInput(format!("cannot read stdin: {e}")))?;
            Ok(buf)
        }
    }
}

struct Outcome {
    result: Value,
    checks_passed: bool,
    csv: Option<String>,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome { result, checks_passed: true, csv: None }
    }
}

fn wrong_kind(op: &str) -> CoreError {
    CoreError::InvalidInput(format!("document kind not valid for `{op}`"))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("result types always serialize")
}

fn dispatch(op: &str, doc: Option<&ProblemDocument>, c: &Common) -> CoreResult<Outcome> {
    match op {
        "lct" => {
            let Some(ProblemDocument::Ideal(p)) = doc else { return Err(wrong_kind(op)) };
            let a = p.ideal()?;
            let res = lct(&a)?;
            // witness normalized to log discrepancy 1 (entries sum to 1);
            // alpha is the raw LP minimizer
            let witness = res.minimizer.as_ref().map(|m| {
                let s = m.sum_entries();
                if s.is_positive() {
                    m.scale(&s.recip())
                } else {
                    m.clone()
                }
            });
            Ok(Outcome::ok(json!({
                "value": to_value(&res.value),
                "witness": to_value(&witness),
                "alpha": to_value(&res.minimizer),
            })))
        }
        "jump" => {
            let Some(ProblemDocument::Ideal(p)) = doc else { return Err(wrong_kind(op)) };
            let res = jumping(&p.ideal()?, &p.q()?)?;
            Ok(Outcome::ok(json!({
                "value": to_value(&res.value),
                "alpha": to_value(&res.minimizer),
                "witness_generator": to_value(&res.witness_generator),
            })))
        }
        "multiplier" => {
            let Some(ProblemDocument::Ideal(p)) = doc else { return Err(wrong_kind(op)) };
            let cexp = p
                .c
                .clone()
                .ok_or_else(|| CoreError::InvalidInput("multiplier requires field `c`".into()))?;
            let j = multiplier_ideal(&p.ideal()?, &cexp)?;
            Ok(Outcome::ok(json!({
                "c": to_value(&cexp),
                "generators": to_value(&j.generators()),
            })))
        }
        "valuate" => {
            let Some(ProblemDocument::Valuation(p)) = doc else { return Err(wrong_kind(op)) };
            let v = p.valuation()?;
            let mut out = serde_json::Map::new();
            out.insert("log_discrepancy".into(), to_value(&v.log_discrepancy()));
            if let Some(rows) = &p.ideal {
                let a = MonomialIdeal::new(
                    p.dim,
                    rows.iter()
                        .map(|r| ExponentVector::new(r.clone()))
                        .collect::<CoreResult<Vec<_>>>()?,
                )?;
                out.insert("value".into(), to_value(&v.eval_ideal(&a)?));
            }
            if let Some(s) = &p.s {
                out.insert(
                    "valuation_ideal".into(),
                    to_value(&v.valuation_ideal(s).generators()),
                );
            }
            Ok(Outcome::ok(Value::Object(out)))
        }
        "sequence" => sequence_op(doc, c),
        "witness" => {
            let Some(ProblemDocument::GradedSequence(p)) = doc else {
                return Err(wrong_kind(op));
            };
            let seq = p.sequence()?;
            let q = p.q()?;
            let limit = match seq.limit_polyhedron(c.max_index)? {
                LimitPolyhedron::Exact(poly) => poly,
                LimitPolyhedron::Approx { .. } => return Err(CoreError::InexactLimit),
            };
            let cert = compute_lct_witness(&limit, &q)?;
            let report =
                verify_witness(&cert, &seq, &q, c.max_index, c.samples as usize, c.seed)?;
            let passed = report.passed();
            Ok(Outcome {
                result: json!({
                    "certificate": to_value(&cert),
                    "report": to_value(&report),
                }),
                checks_passed: passed,
                csv: None,
            })
        }
        "kiselman" => {
            let Some(ProblemDocument::ToricPsh(p)) = doc else { return Err(wrong_kind(op)) };
            let phi = p.psh()?;
            let tau = singularity_exponent(&phi, &p.q()?)?;
            let mut out = serde_json::Map::new();
            out.insert("singularity_exponent".into(), to_value(&tau));
            if let Some(alpha) = p.alpha()? {
                let eval = match c.epsilon {
                    Some(eps) => kiselman_number_at(&phi, &alpha, eps, -10_000)?,
                    None => kiselman_number(&phi, &alpha)?,
                };
                out.insert("kiselman".into(), to_value(&eval));
            }
            Ok(Outcome::ok(Value::Object(out)))
        }
        "p102" => {
            let Some(ProblemDocument::ToricPsh(p)) = doc else { return Err(wrong_kind(op)) };
            let phi = p.psh()?;
            let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
            let vals = sample_valuations(phi.dim(), 20, &mut rng);
            let report = p102_battery(&phi, &p.q()?, &vals, c.max_index)?;
            let passed = report.passed();
            Ok(Outcome { result: to_value(&report), checks_passed: passed, csv: None })
        }
        "volume" => {
            let Some(ProblemDocument::Experiment(p)) = doc else { return Err(wrong_kind(op)) };
            let phi = p.phi.psh()?;
            let q = p.phi.q()?;
            let method = match p.method {
                MethodDoc::Quadrature => VolumeMethod::Quadrature,
                MethodDoc::MonteCarlo => {
                    VolumeMethod::MonteCarlo { samples: c.samples, seed: c.seed }
                }
            };
            let delta = c.delta.unwrap_or(0.5);
            let rs = p.radii.clone().unwrap_or_else(default_r_grid);
            let profile =
                slope_fit(&phi, &q, delta, &rs, &method, p.lambda.clone(), c.threads)?;
            let csv = Some(profile.to_csv());
            Ok(Outcome { result: to_value(&profile), checks_passed: true, csv })
        }
        "selftest" => selftest_op(c),
        _ => unreachable!("clap restricts subcommands"),
    }
}

fn sequence_op(doc: Option<&ProblemDocument>, c: &Common) -> CoreResult<Outcome> {
    let cache = TermCache::new(c.cache_dir.clone());
    let (terms, check, limit, presentation_json): (Vec<MonomialIdeal>, _, Value, String) =
        match doc {
            Some(ProblemDocument::GradedSequence(p)) => {
                let seq = p.sequence()?;
                let pj = serde_json::to_string(&p.presentation)
                    .expect("presentations always serialize");
                let terms = cached_terms(&cache, &pj, c.max_index, |j| seq.term(j))?;
                let check = check_graded(&seq, c.max_index)?;
                let limit = limit_value(&seq.limit_polyhedron(c.max_index)?);
                (terms, check, limit, pj)
            }
            Some(ProblemDocument::SubadditiveSequence(p)) => {
                let seq = p.sequence()?;
                let pj = serde_json::to_string(&p.presentation)
                    .expect("presentations always serialize");
                let terms = cached_terms(&cache, &pj, c.max_index, |j| seq.term(j))?;
                let check = check_subadditive(&seq, c.max_index)?;
                let limit = match seq.exact_limit() {
                    Some(poly) => json!({"exact": to_value(&poly.points())}),
                    None => json!({"exact": Value::Null}),
                };
                (terms, check, limit, pj)
            }
            _ => return Err(wrong_kind("sequence")),
        };
    let _ = presentation_json;
    let passed = check.passed();
    Ok(Outcome {
        result: json!({
            "terms": terms.iter().map(|t| to_value(&t.generators())).collect::<Vec<_>>(),
            "check": to_value(&check),
            "limit": limit,
        }),
        checks_passed: passed,
        csv: None,
    })
}

fn cached_terms(
    cache: &TermCache,
    presentation_json: &str,
    max_index: u64,
    compute: impl Fn(u64) -> CoreResult<MonomialIdeal>,
) -> CoreResult<Vec<MonomialIdeal>> {
    let mut terms = Vec::new();
    let (mut hits, mut misses) = (0u64, 0u64);
    for j in 1..=max_index {
        let key = TermCache::key(presentation_json, j);
        let term = match cache.get(&key) {
            Some(t) => {
                hits += 1;
                t
            }
            None => {
                let t = compute(j)?;
                cache.put(&key, &t);
                misses += 1;
                t
            }
        };
        terms.push(term);
    }
    if cache.enabled() {
        eprintln!("timing: cache reused {hits} terms, computed {misses}");
    }
    Ok(terms)
}

fn limit_value(limit: &LimitPolyhedron) -> Value {
    match limit {
        LimitPolyhedron::Exact(poly) => json!({"exact": to_value(&poly.points())}),
        LimitPolyhedron::Approx { poly, index } => json!({
            "approx_index": index,
            "points": to_value(&poly.points()),
        }),
    }
}

fn sample_valuations(dim: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<MonomialValuation> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let w: Vec<Rational> = (0..dim)
            .map(|_| Rational::from_integer(rng.gen_range(0..4)))
            .collect();
        if let Ok(v) = ExponentVector::new(w).and_then(MonomialValuation::new) {
            out.push(v);
        }
    }
    out
}

/// Deterministic corpus run: singularity exponents, the full identity
/// battery per entry, and witness self-computation on fixed weights.
fn selftest_op(c: &Common) -> CoreResult<Outcome> {
    let mut entries = Vec::new();
    let mut all = true;
    for (i, entry) in corpus().iter().enumerate() {
        let dim = entry.phi.dim();
        let unit = MonomialIdeal::unit(dim);
        let tau = singularity_exponent(&entry.phi, &unit)?;
        let mut rng = ChaCha8Rng::seed_from_u64(c.seed.wrapping_add(i as u64));
        let vals = sample_valuations(dim, 6, &mut rng);
        let battery = p102_battery(&entry.phi, &unit, &vals, 8)?;
        let passed = battery.passed();
        all &= passed;
        entries.push(json!({
            "name": entry.name,
            "tau": to_value(&tau.value),
            "battery_passed": passed,
        }));
    }
    let mut witness_ok = true;
    for beta in [&[1i64, 2][..], &[3, 4], &[1, 1, 1], &[2, 0, 5], &[1, 2, 3, 4]] {
        let v = MonomialValuation::from_integers(beta)?;
        witness_ok &= self_computation_test(&v)?.passed();
    }
    all &= witness_ok;
    Ok(Outcome {
        result: json!({
            "entries": entries,
            "witness_self_computation": witness_ok,
            "passed": all,
        }),
        checks_passed: all,
        csv: None,
    })
}

fn pretty_table(op: &str, result: &Value) {
    eprintln!("== {op} ==");
    match result {
        Value::Object(map) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            for (k, v) in map {
                let mut text = v.to_string();
                if text.len() > 72 {
                    text.truncate(69);
                    text.push_str("...");
                }
                eprintln!("  {k:width$}  {text}");
            }
        }
        other => eprintln!("  {other}"),
    }
}
