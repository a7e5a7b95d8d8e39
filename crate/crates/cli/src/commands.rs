use std::path::Path;
use std::time::Instant;

use capset_core::apsets::{
    cap_equivalence_check, greedy_progression_free, is_progression_free, max_progression_free,
    PointSet, SearchOptions,
};
use capset_core::bounds::{
    entropy_info, exponent_c, headline_base, main_bound_hp, power_bound_hp,
    verify_entropy_lemma_with,
};
use capset_core::gf::PrimeField;
use capset_core::monomials::dim_l;
use capset_core::proof::{run_theorem_main_with, verify_transcript, ProofOptions, ProofTranscript};
use capset_core::{Error, Precision};
use num_bigint::BigUint;
use serde_json::{json, Value};
use thiserror::Error;

use crate::output::{Report, Table};
use crate::{Mode, SearchArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

fn field(p: u32) -> Result<PrimeField, CliError> {
    Ok(PrimeField::new(p)?)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Short human form of a decimal real such as `6.8579...e+1`.
fn short(real: &str) -> String {
    real.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .map_or_else(|| real.to_string(), |x| format!("{x:.6e}"))
}

fn point_str(coords: &[u32]) -> String {
    coords
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn bound(p: u32, n_max: usize) -> Result<Report, CliError> {
    let field = field(p)?;
    let prec = Precision::from_env();
    let (c, base) = (exponent_c(field), headline_base(field));
    let mut table = Table::new(&["n", "c", "p^{cn}", "3p^{cn}"])
        .note(format!("p = {p}  c(p) = {c:.6}  base p^c = {base:.4}"));
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let power = power_bound_hp(field, n, prec).to_string();
        let main = main_bound_hp(field, n, prec).to_string();
        table.push(vec![
            n.to_string(),
            format!("{c:.6}"),
            short(&power),
            short(&main),
        ]);
        rows.push(json!({"n": n, "power_bound": power, "main_bound": main}));
    }
    Ok(Report {
        command: "bound",
        params: json!({"p": p, "n_max": n_max}),
        result: json!({"p": p, "c": c, "base": base, "rows": rows}),
        table,
        passed: true,
    })
}

pub fn dims(
    p: u32,
    n: usize,
    d_min: Option<usize>,
    d_max: Option<usize>,
) -> Result<Report, CliError> {
    let field = field(p)?;
    let top = (p as usize - 1) * n;
    let (lo, hi) = (d_min.unwrap_or(0), d_max.unwrap_or(top));
    if lo > hi || hi > top {
        return Err(CliError::Usage(format!(
            "degree range [{lo}, {hi}] must lie within [0, {top}]"
        )));
    }
    let ambient = BigUint::from(p).pow(n as u32);
    let mut table = Table::new(&["d", "dim", "dual_d", "dual_dim", "duality"]);
    let mut rows = Vec::new();
    let mut passed = true;
    for d in lo..=hi {
        let dim = dim_l(n, d, field)?;
        let (dual_d, dual_dim, ok) = if d < top {
            let dual = dim_l(n, top - d - 1, field)?;
            let ok = &dim + &dual == ambient;
            (Some(top - d - 1), dual.to_string(), ok)
        } else {
            (None, "0".to_string(), dim == ambient)
        };
        passed &= ok;
        let verdict = if ok { "ok" } else { "FAIL" };
        table.push(vec![
            d.to_string(),
            dim.to_string(),
            dual_d.map_or("-".into(), |x| x.to_string()),
            dual_dim.clone(),
            verdict.into(),
        ]);
        rows.push(json!({"d": d, "dim": dim.to_string(), "dual_d": dual_d, "dual_dim": dual_dim, "duality": verdict}));
    }
    Ok(Report {
        command: "dims",
        params: json!({"p": p, "n": n, "d_min": lo, "d_max": hi}),
        result: json!({"p": p, "n": n, "ambient": ambient.to_string(), "rows": rows}),
        table,
        passed,
    })
}

pub fn entropy_check(p: u32, ns: &[usize], info: bool) -> Result<Report, CliError> {
    let field = field(p)?;
    let params = json!({"p": p, "n": ns, "info": info});
    if info {
        let mut table = Table::new(&["n", "degree", "exact_dim", "p^{cn}"]);
        let mut rows = Vec::new();
        for &n in ns {
            let r = entropy_info(field, n)?;
            table.push(vec![
                n.to_string(),
                r.degree.to_string(),
                r.exact_dim.to_string(),
                format!("{:.6e}", r.bound_value),
            ]);
            rows.push(serde_json::to_value(&r).expect("report serializes"));
        }
        return Ok(Report {
            command: "entropy-check",
            params,
            result: json!({"p": p, "reports": rows}),
            table,
            passed: true,
        });
    }
    let prec = Precision::from_env();
    let mut table = Table::new(&["n", "degree", "exact_dim", "p^{cn}", "margin", "holds"]);
    let mut rows = Vec::new();
    let mut passed = true;
    for &n in ns {
        let r = verify_entropy_lemma_with(field, n, prec).map_err(|e| match e {
            Error::NotMultipleOfThree(_) => CliError::Usage(format!("{e}; use --info for other n")),
            other => other.into(),
        })?;
        passed &= r.holds;
        table.push(vec![
            n.to_string(),
            r.degree.to_string(),
            r.exact_dim.to_string(),
            format!("{:.6e}", r.bound_value),
            short(&r.margin),
            r.holds.to_string(),
        ]);
        rows.push(serde_json::to_value(&r).expect("report serializes"));
    }
    Ok(Report {
        command: "entropy-check",
        params,
        result: json!({"p": p, "precision_digits": prec.decimal_digits(), "reports": rows}),
        table,
        passed,
    })
}

struct Found {
    set: PointSet,
    optimal: bool,
}

fn find_set(args: &SearchArgs) -> Result<Found, CliError> {
    let field = field(args.p)?;
    match args.mode {
        Mode::Exact => {
            let mut options = SearchOptions {
                node_budget: args.budget,
                ..SearchOptions::default()
            };
            if let Some(t) = args.threads {
                options.threads = t;
            }
            let start = Instant::now();
            let r = max_progression_free(field, args.n, &options).map_err(|e| match e {
                Error::SizeCeiling { .. } => CliError::Usage(format!("{e}; try --mode greedy")),
                other => other.into(),
            })?;
            eprintln!(
                "capset: exact search explored {} nodes in {:.3}s",
                r.nodes_explored,
                start.elapsed().as_secs_f64()
            );
            Ok(Found {
                set: r.witness,
                optimal: r.optimal,
            })
        }
        Mode::Greedy => Ok(Found {
            set: greedy_progression_free(field, args.n, args.seed)?,
            optimal: false,
        }),
    }
}

fn search_params(args: &SearchArgs) -> Value {
    json!({
        "p": args.p,
        "n": args.n,
        "mode": match args.mode { Mode::Exact => "exact", Mode::Greedy => "greedy" },
        "budget": args.budget,
        "seed": args.seed,
    })
}

pub fn search(args: &SearchArgs) -> Result<Report, CliError> {
    let found = find_set(args)?;
    let set = &found.set;
    let check = is_progression_free(set);
    let mut table = Table::new(&["point"]).note(format!(
        "best size {} ({})",
        set.len(),
        if found.optimal {
            "optimal"
        } else {
            "not proven optimal"
        }
    ));
    for c in set.coords() {
        table.push(vec![point_str(&c)]);
    }
    Ok(Report {
        command: "search",
        params: search_params(args),
        result: json!({
            "best_size": set.len(),
            "optimal": found.optimal,
            "progression_free": check.progression_free,
            "witness": set,
        }),
        table,
        passed: check.progression_free,
    })
}

fn witness_report(command: &'static str, params: Value, set: &PointSet, extra: Value) -> Report {
    let check = is_progression_free(set);
    let mut table = Table::new(&["field", "value"]);
    table.push(vec!["size".into(), set.len().to_string()]);
    table.push(vec![
        "progression_free".into(),
        check.progression_free.to_string(),
    ]);
    if let Some(w) = &check.witness {
        table.push(vec!["a".into(), point_str(&w.a.coords)]);
        table.push(vec!["b".into(), point_str(&w.b.coords)]);
        table.push(vec!["c = (a+b)/2".into(), point_str(&w.c.coords)]);
    }
    let mut result = json!({
        "p": set.space().p(),
        "n": set.space().n(),
        "size": set.len(),
        "progression_free": check.progression_free,
        "witness": check.witness,
    });
    if let (Value::Object(map), Value::Object(more)) = (&mut result, extra) {
        for (k, v) in more {
            if let Value::Bool(b) = v {
                table.push(vec![k.clone(), b.to_string()]);
            }
            map.insert(k, v);
        }
    }
    Report {
        command,
        params,
        result,
        table,
        passed: check.progression_free,
    }
}

fn prove(set: &PointSet, params: Value) -> Result<Report, CliError> {
    let options = ProofOptions {
        precision: Precision::from_env(),
        ..ProofOptions::default()
    };
    let t = match run_theorem_main_with(set, &options) {
        Ok(t) => t,
        Err(Error::NotProgressionFree { .. }) => {
            return Ok(witness_report("prove", params, set, json!({})))
        }
        Err(e @ (Error::NotMultipleOfThree(_) | Error::SizeCeiling { .. })) => {
            return Err(CliError::Usage(e.to_string()))
        }
        Err(e) => return Err(e.into()),
    };
    let mut table = Table::new(&["check", "lhs", "rel", "rhs", "holds"]);
    table.notes.push(format!(
        "p = {}  n = {}  |A| = {}  branch = {}",
        t.p,
        t.n,
        t.input_size,
        serde_json::to_value(t.branch)
            .expect("branch serializes")
            .as_str()
            .unwrap_or_default()
    ));
    table.notes.push(format!(
        "dim K = {}  dim L = {}  dim V = {}  p^n = {}",
        t.dims.dim_k, t.dims.dim_l, t.dims.dim_v, t.dims.ambient
    ));
    table.notes.push(format!(
        "conclusion: {} <= {} <= 3p^cn = {}",
        t.conclusion.size,
        t.conclusion.exact_bound,
        short(&t.conclusion.asymptotic_bound)
    ));
    for c in &t.checks {
        table.push(vec![
            c.name.clone(),
            short_if_real(&c.lhs),
            c.relation.symbol().into(),
            short_if_real(&c.rhs),
            c.holds.to_string(),
        ]);
    }
    Ok(Report {
        command: "prove",
        params,
        passed: t.all_pass(),
        result: serde_json::to_value(&t).expect("transcript serializes"),
        table,
    })
}

fn short_if_real(s: &str) -> String {
    if s.contains(['e', '.']) {
        short(s)
    } else {
        s.to_string()
    }
}

pub fn prove_file(path: &Path) -> Result<Report, CliError> {
    let set = PointSet::parse(&read(path)?)?;
    prove(&set, json!({"file": path.display().to_string()}))
}

pub fn prove_search(args: &SearchArgs) -> Result<Report, CliError> {
    let found = find_set(args)?;
    prove(&found.set, search_params(args))
}

pub fn verify_set(path: &Path) -> Result<Report, CliError> {
    let set = PointSet::parse(&read(path)?)?;
    let extra = if set.space().p() == 3 {
        let eq = cap_equivalence_check(&set)?;
        json!({"cap": eq.cap, "cap_equivalence_agrees": eq.agree()})
    } else {
        json!({})
    };
    let mut report = witness_report(
        "verify-set",
        json!({"file": path.display().to_string()}),
        &set,
        extra,
    );
    if report.result.get("cap_equivalence_agrees") == Some(&Value::Bool(false)) {
        report.passed = false;
    }
    Ok(report)
}

/// Accepts either a bare transcript or a `prove` output envelope.
pub fn verify(path: &Path) -> Result<Report, CliError> {
    let value: Value =
        serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(e.to_string()))?;
    let inner = match value.get("result") {
        Some(result) if value.get("command").is_some() => result.clone(),
        _ => value,
    };
    let transcript: ProofTranscript =
        serde_json::from_value(inner).map_err(|e| Error::Parse(e.to_string()))?;
    let prec = Precision::from_env();
    let report = verify_transcript(&transcript, prec)?;
    let mut table = Table::new(&["mismatch"]).note(format!(
        "{} checks recomputed; all hold: {}; mismatches: {}",
        report.checks_recomputed,
        report.all_hold,
        report.mismatches.len()
    ));
    for m in &report.mismatches {
        table.push(vec![m.clone()]);
    }
    Ok(Report {
        command: "verify",
        params: json!({"file": path.display().to_string()}),
        passed: report.ok(),
        result: serde_json::to_value(&report).expect("report serializes"),
        table,
    })
}
