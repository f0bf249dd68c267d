//! Command-line front end.
//!
//! Subcommands: `invariants | points | heights | casebook`.  Flags:
//! `--preset`, `--input`, `--d`, `--p`, `--n`, `--oracle`, `--iters`,
//! `--hom-rank`, `--format {json,tsv}`, `--out`.  The environment variable
//! `MWFORGE_THREADS` caps oracle parallelism.
//!
//! Output is byte-identical for identical configuration: JSON keys are
//! sorted, fractions render as `num/den`, and nothing time-dependent is
//! ever emitted.  Exit codes: 0 success, 2 usage or validation error, 3
//! verification failure.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::berger::{self, BergerData};
use crate::casebook;
use crate::explicit_points::ExplicitFamily;
use crate::heights::{self, GramMatrix};
use crate::report::{decimal6, fraction_json, fraction_str, int_json, tsv_row};

/// Output format for reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Tsv,
}

/// Where the Berger data comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DataSource {
    Preset(String),
    Input(PathBuf),
}

/// Parsed subcommand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Invariants {
        source: DataSource,
        d_lo: u64,
        d_hi: u64,
        hom_rank: Option<i64>,
    },
    Points {
        p: u64,
        n: u32,
    },
    Heights {
        p: u64,
        n: u32,
        oracle: bool,
        iters: u32,
    },
    Casebook {
        scenario: String,
        d_range: Option<(u64, u64)>,
        p: Option<u64>,
        n: Option<u32>,
    },
}

/// Full run configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub out: Option<PathBuf>,
}

/// Usage and validation problems (exit code 2).
#[derive(Debug)]
pub struct UsageError(pub String);

const USAGE: &str = "usage: mwforge <invariants|points|heights|casebook> [options]
  invariants  --preset NAME | --input FILE   --d LO..HI  [--hom-rank R]
  points      --p P --n N
  heights     --p P --n N  [--oracle] [--iters K]
  casebook    <ex1|ex2-identities|ex2-ranks|berger-square>  [--d LO..HI] [--p P --n N]
common:       [--format json|tsv] [--out FILE]
environment:  MWFORGE_THREADS caps parallelism";

fn parse_d_range(text: &str) -> Result<(u64, u64), UsageError> {
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => {
            let lo = a.parse::<u64>().map_err(|_| bad_d(text))?;
            let hi = b.parse::<u64>().map_err(|_| bad_d(text))?;
            (lo, hi)
        }
        None => {
            let d = text.parse::<u64>().map_err(|_| bad_d(text))?;
            (d, d)
        }
    };
    if lo == 0 || hi < lo || hi > 10_000 {
        return Err(UsageError(format!(
            "d range {text} must satisfy 1 <= lo <= hi <= 10000"
        )));
    }
    Ok((lo, hi))
}

fn bad_d(text: &str) -> UsageError {
    UsageError(format!("cannot parse d range: {text} (expected N or LO..HI)"))
}

/// Parse raw arguments (without the program name).
pub fn parse_args(args: &[String]) -> Result<RunConfig, UsageError> {
    let Some(sub) = args.first() else {
        return Err(UsageError(USAGE.to_string()));
    };
    let mut preset: Option<String> = None;
    let mut input: Option<PathBuf> = None;
    let mut d_range: Option<(u64, u64)> = None;
    let mut p: Option<u64> = None;
    let mut n: Option<u32> = None;
    let mut oracle = false;
    let mut iters: u32 = 4;
    let mut hom_rank: Option<i64> = None;
    let mut format = Format::Json;
    let mut out: Option<PathBuf> = None;
    let mut positionals: Vec<String> = Vec::new();

    let mut it = args[1..].iter();
    while let Some(arg) = it.next() {
        let mut value_of = |flag: &str| -> Result<String, UsageError> {
            it.next()
                .cloned()
                .ok_or_else(|| UsageError(format!("{flag} requires a value")))
        };
        match arg.as_str() {
            "--preset" => preset = Some(value_of("--preset")?),
            "--input" => input = Some(PathBuf::from(value_of("--input")?)),
            "--d" => d_range = Some(parse_d_range(&value_of("--d")?)?),
            "--p" => {
                p = Some(
                    value_of("--p")?
                        .parse()
                        .map_err(|_| UsageError("--p expects an integer".into()))?,
                )
            }
            "--n" => {
                n = Some(
                    value_of("--n")?
                        .parse()
                        .map_err(|_| UsageError("--n expects an integer".into()))?,
                )
            }
            "--oracle" => oracle = true,
            "--iters" => {
                iters = value_of("--iters")?
                    .parse()
                    .map_err(|_| UsageError("--iters expects an integer".into()))?
            }
            "--hom-rank" => {
                hom_rank = Some(
                    value_of("--hom-rank")?
                        .parse()
                        .map_err(|_| UsageError("--hom-rank expects an integer".into()))?,
                )
            }
            "--format" => {
                format = match value_of("--format")?.as_str() {
                    "json" => Format::Json,
                    "tsv" => Format::Tsv,
                    other => {
                        return Err(UsageError(format!(
                            "unknown format {other} (expected json or tsv)"
                        )))
                    }
                }
            }
            "--out" => out = Some(PathBuf::from(value_of("--out")?)),
            other if other.starts_with("--") => {
                return Err(UsageError(format!("unknown flag {other}\n{USAGE}")));
            }
            other => positionals.push(other.to_string()),
        }
    }

    let command = match sub.as_str() {
        "invariants" => {
            let source = match (preset, input) {
                (Some(name), None) => DataSource::Preset(name),
                (None, Some(path)) => DataSource::Input(path),
                _ => {
                    return Err(UsageError(
                        "invariants requires exactly one of --preset or --input".into(),
                    ))
                }
            };
            let (d_lo, d_hi) =
                d_range.ok_or_else(|| UsageError("invariants requires --d".into()))?;
            Command::Invariants { source, d_lo, d_hi, hom_rank }
        }
        "points" => Command::Points {
            p: p.ok_or_else(|| UsageError("points requires --p".into()))?,
            n: n.ok_or_else(|| UsageError("points requires --n".into()))?,
        },
        "heights" => Command::Heights {
            p: p.ok_or_else(|| UsageError("heights requires --p".into()))?,
            n: n.ok_or_else(|| UsageError("heights requires --n".into()))?,
            oracle,
            iters,
        },
        "casebook" => {
            let scenario = positionals
                .first()
                .cloned()
                .ok_or_else(|| UsageError("casebook requires a scenario name".into()))?;
            Command::Casebook { scenario, d_range, p, n }
        }
        other => {
            return Err(UsageError(format!("unknown subcommand {other}\n{USAGE}")));
        }
    };
    Ok(RunConfig { command, format, out })
}

/// A rendered report plus the list of failed verification checks.
struct Payload {
    json: Value,
    tsv: String,
    failures: Vec<String>,
}

enum CmdError {
    Validation(String),
}

impl From<crate::Error> for CmdError {
    fn from(e: crate::Error) -> Self {
        CmdError::Validation(e.to_string())
    }
}

fn thread_pool() -> Option<rayon::ThreadPool> {
    let n = std::env::var("MWFORGE_THREADS").ok()?.parse::<usize>().ok()?;
    if n == 0 {
        return None;
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()
}

fn run_in_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    match thread_pool() {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

fn cmd_invariants(
    source: &DataSource,
    d_lo: u64,
    d_hi: u64,
    hom_rank: Option<i64>,
) -> Result<Payload, CmdError> {
    let data = match source {
        DataSource::Preset(name) => BergerData::preset(name)
            .ok_or_else(|| CmdError::Validation(format!("unknown preset {name}")))?,
        DataSource::Input(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CmdError::Validation(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<BergerData>(&text)
                .map_err(|e| CmdError::Validation(format!("invalid Berger data JSON: {e}")))?
        }
    };
    data.validate()?;
    let genus = berger::genus_x(&data)?;

    let mut rows_json = Vec::new();
    let mut tsv = String::new();
    let _ = writeln!(
        tsv,
        "{}",
        tsv_row(&[
            "d".into(),
            "e_f".into(),
            "e_g".into(),
            "genus".into(),
            "c1".into(),
            "c2".into(),
            "trace_dim".into(),
            "rank".into(),
            "note".into(),
        ])
    );
    for d in d_lo..=d_hi {
        if data.p != 0 && d % data.p == 0 {
            rows_json.push(json!({
                "d": d,
                "note": "skipped: d divisible by the characteristic",
            }));
            let _ = writeln!(
                tsv,
                "{}",
                tsv_row(&[
                    d.to_string(),
                    "-".into(), "-".into(), "-".into(), "-".into(),
                    "-".into(), "-".into(), "-".into(),
                    "skipped: d divisible by the characteristic".into(),
                ])
            );
            continue;
        }
        let rep = berger::invariant_report(d, &data, hom_rank)?;
        rows_json.push(json!({
            "d": rep.d,
            "e_f": rep.e_f,
            "e_g": rep.e_g,
            "genus": rep.genus,
            "c1": rep.c1,
            "c2": rep.c2,
            "trace_dim": rep.trace_dim,
            "rank": rep.rank,
            "r": rep.r,
            "rp": rep.rp,
            "s": rep.s,
            "sp": rep.sp,
            "t": rep.t,
            "tp": rep.tp,
        }));
        let _ = writeln!(
            tsv,
            "{}",
            tsv_row(&[
                rep.d.to_string(),
                rep.e_f.to_string(),
                rep.e_g.to_string(),
                rep.genus.to_string(),
                rep.c1.to_string(),
                rep.c2.to_string(),
                rep.trace_dim.to_string(),
                rep.rank.map_or("-".into(), |r| r.to_string()),
                String::new(),
            ])
        );
    }

    let source_json = match source {
        DataSource::Preset(name) => json!({ "preset": name }),
        DataSource::Input(path) => json!({ "input": path.display().to_string() }),
    };
    Ok(Payload {
        json: json!({
            "command": "invariants",
            "source": source_json,
            "data": serde_json::to_value(&data).expect("serializable"),
            "genus": genus,
            "rows": rows_json,
        }),
        tsv,
        failures: Vec::new(),
    })
}

fn cmd_points(p: u64, n: u32) -> Result<Payload, CmdError> {
    let family = ExplicitFamily::build(p, n)?;
    let report = family.verify_all()?;

    let mut checks_json = Vec::new();
    let mut tsv = String::new();
    let _ = writeln!(tsv, "{}", tsv_row(&["check".into(), "pass".into()]));
    let mut failures = Vec::new();
    for check in &report.checks {
        checks_json.push(json!({ "name": check.name, "pass": check.pass }));
        let _ = writeln!(tsv, "{}", tsv_row(&[check.name.clone(), check.pass.to_string()]));
        if !check.pass {
            failures.push(check.name.clone());
        }
    }
    let points_json: Vec<Value> = family
        .points
        .iter()
        .enumerate()
        .map(|(i, pt)| {
            let (x, y) = pt.xy().expect("affine family point");
            json!({
                "i": i,
                "x": x.ratfunc().expect("function-field element").render("u"),
                "y": y.ratfunc().expect("function-field element").render("u"),
            })
        })
        .collect();
    Ok(Payload {
        json: json!({
            "command": "points",
            "p": p,
            "n": n,
            "q": family.q,
            "d": family.d,
            "zeta": family.zeta.to_string(),
            "points": points_json,
            "checks": checks_json,
        }),
        tsv,
        failures,
    })
}

fn gram_json(g: &GramMatrix) -> Value {
    let rows: Vec<Value> = (0..g.dim())
        .map(|i| {
            Value::Array(
                (0..g.dim())
                    .map(|j| fraction_json(g.entry(i, j)))
                    .collect(),
            )
        })
        .collect();
    Value::Array(rows)
}

fn cmd_heights(p: u64, n: u32, oracle: bool, iters: u32) -> Result<Payload, CmdError> {
    if !crate::fields::is_prime(p) {
        return Err(CmdError::Validation(crate::Error::NotPrime(p).to_string()));
    }
    let q = p
        .checked_pow(n)
        .ok_or_else(|| CmdError::Validation(format!("{p}^{n} overflows")))?;
    let d = q + 1;
    let gram = GramMatrix::closed_form(p, d)?;
    let lattice = gram.rank_report()?;

    let expected_rank = if p == 2 { d - 1 } else { d - 2 } as usize;
    let rank_matches = lattice.rank == expected_rank;

    // The relation vectors: all ones, plus the alternating vector for odd p.
    let ones: Vec<BigInt> = vec![BigInt::from(1); d as usize];
    let mut relations = vec![ones];
    if p != 2 {
        relations.push(
            (0..d)
                .map(|i| if i % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) })
                .collect(),
        );
    }
    let kernel_matches = relations.iter().all(|v| gram.annihilates(v))
        && lattice.kernel.len() == relations.len();
    let dual_a_match = gram.matches_scaled_dual_a(p)?;

    let mut failures = Vec::new();
    if !rank_matches {
        failures.push(format!("rank {} != expected {expected_rank}", lattice.rank));
    }
    if !kernel_matches {
        failures.push("kernel does not match the relation vectors".into());
    }
    if !dual_a_match {
        failures.push("Gram is not the expected scaled dual-A lattice".into());
    }

    let mut tsv = String::new();
    let _ = writeln!(tsv, "{}", tsv_row(&["key".into(), "value".into()]));
    for (k, v) in [
        ("p", p.to_string()),
        ("n", n.to_string()),
        ("d", d.to_string()),
        ("rank", lattice.rank.to_string()),
        ("expected_rank", expected_rank.to_string()),
        ("rank_matches", rank_matches.to_string()),
        ("kernel_matches", kernel_matches.to_string()),
        ("dual_a_match", dual_a_match.to_string()),
        ("dual_a_scale", (d - 1).to_string()),
    ] {
        let _ = writeln!(tsv, "{}", tsv_row(&[k.to_string(), v]));
    }
    for i in 0..gram.dim() {
        let mut fields = vec![format!("gram_{i}")];
        fields.extend((0..gram.dim()).map(|j| fraction_str(gram.entry(i, j))));
        let _ = writeln!(tsv, "{}", tsv_row(&fields));
    }
    for (k, v) in lattice.kernel.iter().enumerate() {
        let mut fields = vec![format!("kernel_{k}")];
        fields.extend(v.iter().map(|c| c.to_string()));
        let _ = writeln!(tsv, "{}", tsv_row(&fields));
    }

    let mut json_out = json!({
        "command": "heights",
        "p": p,
        "n": n,
        "d": d,
        "gram": gram_json(&gram),
        "rank": lattice.rank,
        "expected_rank": expected_rank,
        "rank_matches": rank_matches,
        "kernel": lattice.kernel.iter()
            .map(|v| Value::Array(v.iter().map(int_json).collect()))
            .collect::<Vec<_>>(),
        "kernel_matches": kernel_matches,
        "dual_a_match": dual_a_match,
        "dual_a_scale": d - 1,
    });

    if oracle {
        let (report, family_note) = run_in_pool(|| -> Result<_, CmdError> {
            let reference = ExplicitFamily::build(2, 1)?;
            let kappa = heights::calibrate_kappa(&reference, iters)?;
            let family = ExplicitFamily::build(p, n)?;
            let report = heights::oracle_report(&family, iters, &kappa)?;
            Ok((report, format!("calibrated on p=2, n=1 at iters={iters}")))
        })?;
        if !report.within_tolerance {
            failures.push(format!(
                "oracle deviation {} exceeds 1/10",
                decimal6(&report.max_deviation)
            ));
        }
        if !report.rounding_matches {
            failures.push("oracle rounding does not reproduce the scaled Gram".into());
        }
        if !report.kappa_consistent {
            failures.push("family kappa differs from the calibration by more than 1/100".into());
        }
        let _ = writeln!(tsv, "{}", tsv_row(&["kappa".into(), fraction_str(&report.kappa)]));
        let _ = writeln!(
            tsv,
            "{}",
            tsv_row(&["family_kappa".into(), fraction_str(&report.family_kappa)])
        );
        let _ = writeln!(
            tsv,
            "{}",
            tsv_row(&["max_deviation".into(), decimal6(&report.max_deviation)])
        );
        let _ = writeln!(
            tsv,
            "{}",
            tsv_row(&["rounding_matches".into(), report.rounding_matches.to_string()])
        );
        let d_us = d as usize;
        let estimates_json: Vec<Value> = (0..d_us)
            .map(|i| {
                Value::Array(
                    (0..d_us)
                        .map(|j| fraction_json(&report.estimates[i * d_us + j]))
                        .collect(),
                )
            })
            .collect();
        json_out["oracle"] = json!({
            "iters": report.iters,
            "kappa": fraction_json(&report.kappa),
            "family_kappa": fraction_json(&report.family_kappa),
            "kappa_consistent": report.kappa_consistent,
            "estimates": estimates_json,
            "max_deviation": decimal6(&report.max_deviation),
            "within_tolerance": report.within_tolerance,
            "rounding_matches": report.rounding_matches,
            "note": family_note,
        });
    }

    Ok(Payload { json: json_out, tsv, failures })
}

fn rational_json_pair(b: &berger::RankBound) -> (Value, Value) {
    (fraction_json(&b.divisor_sum), fraction_json(&b.floor_bound))
}

fn cmd_casebook(
    scenario: &str,
    d_range: Option<(u64, u64)>,
    p: Option<u64>,
    n: Option<u32>,
) -> Result<Payload, CmdError> {
    match scenario {
        "ex1" | "example1" => {
            let grid: Vec<(u64, u32)> = match (p, n) {
                (Some(p), Some(n)) => vec![(p, n)],
                (None, None) => vec![(2, 1), (2, 2), (3, 1), (5, 1)],
                _ => {
                    return Err(CmdError::Validation(
                        "ex1 needs both --p and --n, or neither".into(),
                    ))
                }
            };
            for &(p, _) in &grid {
                if !crate::fields::is_prime(p) {
                    return Err(CmdError::Validation(crate::Error::NotPrime(p).to_string()));
                }
            }
            let report = casebook::example1_report(&grid)?;
            let mut failures = Vec::new();
            for (ok, name) in [
                (report.corrections_vanish, "c1 and c2 vanish"),
                (report.trace_dims_vanish, "trace dimensions vanish"),
                (report.disc_matches, "discriminant matches"),
                (report.j_matches, "j-invariant matches"),
                (report.char_zero_rank == 0, "characteristic-zero rank is 0"),
            ] {
                if !ok {
                    failures.push(name.to_string());
                }
            }
            let rows: Vec<Value> = report
                .rows
                .iter()
                .map(|r| {
                    let (sum, floor) = rational_json_pair(&r.bound);
                    json!({
                        "p": r.p,
                        "n": r.n,
                        "d": r.d,
                        "bound_sum": sum,
                        "bound_floor": floor,
                        "hom_rank_full": r.hom_rank_full,
                        "rank_full": r.rank_full,
                    })
                })
                .collect();
            let mut tsv = String::new();
            let _ = writeln!(
                tsv,
                "{}",
                tsv_row(&[
                    "p".into(), "n".into(), "d".into(),
                    "bound_sum".into(), "bound_floor".into(),
                    "hom_rank_full".into(), "rank_full".into(),
                ])
            );
            for r in &report.rows {
                let _ = writeln!(
                    tsv,
                    "{}",
                    tsv_row(&[
                        r.p.to_string(),
                        r.n.to_string(),
                        r.d.to_string(),
                        fraction_str(&r.bound.divisor_sum),
                        fraction_str(&r.bound.floor_bound),
                        r.hom_rank_full.to_string(),
                        r.rank_full.to_string(),
                    ])
                );
            }
            Ok(Payload {
                json: json!({
                    "command": "casebook",
                    "scenario": "example1",
                    "genus": report.genus,
                    "corrections_vanish": report.corrections_vanish,
                    "trace_dims_vanish": report.trace_dims_vanish,
                    "disc_matches": report.disc_matches,
                    "j_matches": report.j_matches,
                    "char_zero_rank": report.char_zero_rank,
                    "rows": rows,
                }),
                tsv,
                failures,
            })
        }
        "ex2-identities" => {
            let out = casebook::example2_identities()?;
            let mut failures = Vec::new();
            for (ok, name) in [
                (out.identity_1728, "1728*disc = c4^3 - c6^2"),
                (out.disc_q_matches, "disc(Q) closed form"),
                (out.specialization_ok, "specialization a=3, t=2"),
            ] {
                if !ok {
                    failures.push(name.to_string());
                }
            }
            let mut tsv = String::new();
            let _ = writeln!(tsv, "{}", tsv_row(&["check".into(), "pass".into()]));
            let _ = writeln!(tsv, "{}", tsv_row(&["identity_1728".into(), out.identity_1728.to_string()]));
            let _ = writeln!(tsv, "{}", tsv_row(&["disc_q_matches".into(), out.disc_q_matches.to_string()]));
            let _ = writeln!(tsv, "{}", tsv_row(&["specialization_ok".into(), out.specialization_ok.to_string()]));
            Ok(Payload {
                json: json!({
                    "command": "casebook",
                    "scenario": "ex2-identities",
                    "identity_1728": out.identity_1728,
                    "disc_q_matches": out.disc_q_matches,
                    "specialization_ok": out.specialization_ok,
                    "c4": out.c4_rendered,
                    "note": out.note,
                }),
                tsv,
                failures,
            })
        }
        "ex2-ranks" => {
            let layers: Vec<u64> = match d_range {
                Some((lo, hi)) => (lo..=hi).collect(),
                None => casebook::EXAMPLE2_THEOREM_LAYERS.to_vec(),
            };
            let rows = casebook::example2_rank_table(&layers)?;
            let rows_json: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "d": r.d,
                        "phi": r.phi,
                        "in_theorem_list": r.in_theorem_list,
                        "bound": r.bound,
                        "bound_note": if r.in_theorem_list { "" } else { "bound not asserted for this layer" },
                        "rank_cm": r.rank_cm,
                        "rank_generic": r.rank_generic,
                    })
                })
                .collect();
            let mut tsv = String::new();
            let _ = writeln!(
                tsv,
                "{}",
                tsv_row(&[
                    "d".into(), "phi".into(), "bound".into(),
                    "rank_cm".into(), "rank_generic".into(), "note".into(),
                ])
            );
            for r in &rows {
                let _ = writeln!(
                    tsv,
                    "{}",
                    tsv_row(&[
                        r.d.to_string(),
                        r.phi.to_string(),
                        r.bound.map_or("-".into(), |b| b.to_string()),
                        r.rank_cm.to_string(),
                        r.rank_generic.to_string(),
                        if r.in_theorem_list { String::new() } else { "bound not asserted for this layer".into() },
                    ])
                );
            }
            Ok(Payload {
                json: json!({
                    "command": "casebook",
                    "scenario": "ex2-ranks",
                    "rows": rows_json,
                }),
                tsv,
                failures: Vec::new(),
            })
        }
        "berger-square" => {
            let (lo, hi) = d_range.unwrap_or((1, 12));
            let dims = casebook::square_pencil_trace_dims(hi)?;
            let rows: Vec<(u64, u64)> =
                dims.into_iter().filter(|&(d, _)| d >= lo).collect();
            let mut failures = Vec::new();
            for &(d, dim) in &rows {
                let expected = if d % 2 == 0 { 1 } else { 0 };
                if dim != expected {
                    failures.push(format!("trace dimension at d={d} is {dim}, expected {expected}"));
                }
            }
            let mut tsv = String::new();
            let _ = writeln!(tsv, "{}", tsv_row(&["d".into(), "trace_dim".into()]));
            for &(d, dim) in &rows {
                let _ = writeln!(tsv, "{}", tsv_row(&[d.to_string(), dim.to_string()]));
            }
            Ok(Payload {
                json: json!({
                    "command": "casebook",
                    "scenario": "berger-square",
                    "rows": rows.iter().map(|&(d, dim)| json!({"d": d, "trace_dim": dim})).collect::<Vec<_>>(),
                }),
                tsv,
                failures,
            })
        }
        other => Err(CmdError::Validation(format!("unknown scenario {other}"))),
    }
}

/// Execute a parsed configuration, writing the report to `sink`.
/// Returns the process exit code.
pub fn run(config: &RunConfig, sink: &mut dyn Write) -> i32 {
    let result = match &config.command {
        Command::Invariants { source, d_lo, d_hi, hom_rank } => {
            cmd_invariants(source, *d_lo, *d_hi, *hom_rank)
        }
        Command::Points { p, n } => cmd_points(*p, *n),
        Command::Heights { p, n, oracle, iters } => cmd_heights(*p, *n, *oracle, *iters),
        Command::Casebook { scenario, d_range, p, n } => {
            cmd_casebook(scenario, *d_range, *p, *n)
        }
    };
    let payload = match result {
        Ok(payload) => payload,
        Err(CmdError::Validation(msg)) => {
            eprintln!("mwforge: {msg}");
            return 2;
        }
    };
    let rendered = match config.format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&payload.json).expect("serializable");
            text.push('\n');
            text
        }
        Format::Tsv => payload.tsv.clone(),
    };
    if sink.write_all(rendered.as_bytes()).is_err() {
        eprintln!("mwforge: cannot write output");
        return 2;
    }
    if !payload.failures.is_empty() {
        for f in &payload.failures {
            eprintln!("mwforge: verification failed: {f}");
        }
        return 3;
    }
    0
}

/// Full entry point used by the binary: parse, run, return the exit code.
pub fn main_with_args(args: &[String]) -> i32 {
    let config = match parse_args(args) {
        Ok(c) => c,
        Err(UsageError(msg)) => {
            eprintln!("mwforge: {msg}");
            return 2;
        }
    };
    match &config.out {
        Some(path) => {
            let mut file = match std::fs::File::create(path) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("mwforge: cannot create {}: {e}", path.display());
                    return 2;
                }
            };
            run(&config, &mut file)
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            run(&config, &mut lock)
        }
    }
}
