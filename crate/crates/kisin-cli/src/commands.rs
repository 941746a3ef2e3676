//! One function per subcommand: compute, render, emit.

use kisin_core::bounds::tables::table2_validity;
use kisin_core::bounds::{
    k_polytopes, k_prime_checked, table2_points, theorem_bounds, verify_witness_le_e, verify_witness_le_mu,
    witness_le_e, witness_le_mu, Target,
};
use kisin_core::kisin_model::{d2_lattice_invariants, mu_from_q};
use kisin_core::perm::{hasse_diagram, hasse_dot, maximal_elements};
use kisin_core::rational::{fmt_rat, fmt_vec};
use kisin_core::solver::{dim_exact_with, DimQuery, DimStatus, SolverConfig, SuiteConfig};
use kisin_core::{KisinInstance, Permutation};
use serde_json::json;

use crate::output::{csv_text, emit, json_text, pick, Format};
use crate::suites;
use crate::{D2Args, DimArgs, Failure, HasseArgs, Instance, TablesArgs, TargetArgs, TargetKind, VerifyArgs};

fn instance(i: &Instance) -> Result<KisinInstance, Failure> {
    Ok(KisinInstance::new(i.d as usize, i.b, i.h0)?)
}

/// Resolves `--mu`/`--e`/`--target`; `mu_default` is the kind used for a bare `--mu`.
fn target(a: &TargetArgs, mu_default: TargetKind) -> Result<Target, Failure> {
    let kind = a.target.unwrap_or(if a.e.is_some() { TargetKind::LeE } else { mu_default });
    let need_mu = || a.mu.clone().ok_or_else(|| Failure::Invalid("this target needs --mu".into()));
    match kind {
        TargetKind::LeE => a.e.map(Target::LeE).ok_or_else(|| Failure::Invalid("target le-e needs --e".into())),
        TargetKind::Mu => Ok(Target::Mu(need_mu()?)),
        TargetKind::LeMu => Ok(Target::LeMu(need_mu()?)),
    }
}

pub fn dim(a: &DimArgs) -> Result<(), Failure> {
    let t = &a.target;
    let format = pick(t.common.format, &[Format::Json, Format::Csv])?;
    let query = DimQuery::new(instance(&t.inst)?, target(t, TargetKind::Mu)?)?;
    let result = dim_exact_with(&query, &SolverConfig::with_budget(a.budget))?;
    let text = match format {
        Format::Json => json_text(&result.to_json()),
        _ => {
            let (status, lo, hi) = match result.status {
                DimStatus::Exact(n) => ("exact", n.to_string(), n.to_string()),
                DimStatus::Interval(lo, hi) => ("interval", lo.to_string(), hi.to_string()),
                DimStatus::Empty => ("empty", String::new(), String::new()),
            };
            let header = ["target", "params", "status", "lo", "hi"].map(String::from);
            let params = query.target.params_json(&query.inst).to_string();
            csv_text(&header, &[vec![query.target.name().into(), params, status.into(), lo, hi]])?
        }
    };
    emit(&text, t.common.out.as_deref())
}

pub fn bounds(a: &TargetArgs) -> Result<(), Failure> {
    let format = pick(a.common.format, &[Format::Json, Format::Csv])?;
    let inst = instance(&a.inst)?;
    let report = theorem_bounds(&inst, &target(a, TargetKind::Mu)?)?;
    let text = match format {
        Format::Json => json_text(&report.to_json()),
        _ => {
            let r = |x: &Option<kisin_core::Rational>| x.as_ref().map(fmt_rat).unwrap_or_default();
            let header = ["target", "params", "lower", "upper", "refined_upper", "empty", "residue"].map(String::from);
            let row = vec![
                report.target.name().into(),
                report.target.params_json(&inst).to_string(),
                r(&report.lower),
                r(&report.upper),
                r(&report.refined_upper),
                report.empty.to_string(),
                report.residue.map(|x| x.to_string()).unwrap_or_default(),
            ];
            csv_text(&header, &[row])?
        }
    };
    emit(&text, a.common.out.as_deref())
}

pub fn tables(a: &TablesArgs) -> Result<(), Failure> {
    let format = pick(a.common.format, &[Format::Csv, Format::Json])?;
    let text = match (a.dmax, a.d) {
        (Some(dmax), _) => {
            let rows: Vec<_> = (2..=dmax as usize)
                .map(|d| KisinInstance::new(d, a.b, false).map(|inst| k_polytopes(&inst).to_json()))
                .collect::<Result<_, _>>()?;
            match format {
                Format::Json => json_text(&json!(rows
                    .iter()
                    .map(|r| json!({ "d": r.d, "b": r.b, "k_count": r.k_count, "k_prime_count": r.k_prime_count }))
                    .collect::<Vec<_>>())),
                _ => {
                    let header = ["d", "b", "k_vertices", "k_plus_cstar_vertices"].map(String::from);
                    let body: Vec<Vec<String>> = rows
                        .iter()
                        .map(|r| vec![r.d.to_string(), r.b.to_string(), r.k_count.to_string(), r.k_prime_count.to_string()])
                        .collect();
                    csv_text(&header, &body)?
                }
            }
        }
        (None, Some(d)) => {
            let d = d as usize;
            let inst = KisinInstance::new(d, a.b, false)?;
            let k = k_prime_checked(&inst)?;
            // Where closed-form coordinates exist, the computed vertices must match them.
            let closed_form = table2_validity(d).is_some();
            if closed_form {
                let expected = table2_points(d, a.b)?;
                if expected != k.k_prime_vertices {
                    return Err(Failure::Failed(format!(
                        "computed vertices of K+C* for d = {d}, b = {} differ from the closed-form list",
                        a.b
                    )));
                }
            }
            match format {
                Format::Json => {
                    let mut v = serde_json::to_value(k.to_json()).expect("serializable");
                    v["closed_form_checked"] = json!(closed_form);
                    json_text(&v)
                }
                _ => {
                    let mut header = vec!["set".to_string(), "index".to_string()];
                    header.extend((1..=d).map(|i| format!("y{i}")));
                    let mut body = Vec::new();
                    for (set, verts) in [("K", &k.k_vertices), ("K+C*", &k.k_prime_vertices)] {
                        for (n, v) in verts.iter().enumerate() {
                            let mut row = vec![set.to_string(), (n + 1).to_string()];
                            row.extend(fmt_vec(v));
                            body.push(row);
                        }
                    }
                    csv_text(&header, &body)?
                }
            }
        }
        (None, None) => return Err(Failure::Invalid("tables needs --dmax or --d".into())),
    };
    emit(&text, a.common.out.as_deref())
}

pub fn witness(a: &TargetArgs) -> Result<(), Failure> {
    pick(a.common.format, &[Format::Json])?;
    let inst = instance(&a.inst)?;
    let t = target(a, TargetKind::LeMu)?;
    t.validate(&inst)?;
    let (q, checks) = match &t {
        Target::LeE(e) => {
            let q = witness_le_e(&inst, *e)?;
            let c = verify_witness_le_e(&inst, *e, &q)?;
            (q, c)
        }
        Target::LeMu(mu) => {
            let q = witness_le_mu(&inst, mu)?;
            let c = verify_witness_le_mu(&inst, mu, &q)?;
            (q, c)
        }
        Target::Mu(_) => {
            return Err(Failure::Invalid("witnesses exist for le-e and le-mu targets only".into()));
        }
    };
    let value = json!({
        "target": t.name(),
        "params": t.params_json(&inst),
        "q": q.to_json(),
        "mu": mu_from_q(&q).to_json(),
        "checks": checks,
        "ok": checks.ok(),
    });
    emit(&json_text(&value), a.common.out.as_deref())
}

pub fn hasse(a: &HasseArgs) -> Result<(), Failure> {
    let format = pick(a.common.format, &[Format::Dot, Format::Json])?;
    let d = a.d as usize;
    let text = match format {
        Format::Dot => hasse_dot(d),
        _ => {
            let labels = |ws: Vec<Permutation>| ws.iter().map(Permutation::label).collect::<Vec<_>>();
            let edges: Vec<_> = hasse_diagram(d).iter().map(|(lo, hi)| [lo.label(), hi.label()]).collect();
            json_text(&json!({
                "d": d,
                "nodes": labels(Permutation::all(d)),
                "edges": edges,
                "maximal": labels(maximal_elements(d)),
            }))
        }
    };
    emit(&text, a.common.out.as_deref())
}

pub fn verify(a: &VerifyArgs) -> Result<(), Failure> {
    pick(a.common.format, &[Format::Json])?;
    let inst = instance(&a.inst)?;
    let config = SuiteConfig { e_max: a.e, mu_spread: a.spread, solver: SolverConfig::with_budget(a.budget) };
    let report = suites::run_all(&inst, &config, a.seed)?;
    emit(&json_text(&report.to_json()), a.common.out.as_deref())?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Failed(format!("failing checks: {}", report.failing().join(", "))))
    }
}

pub fn d2_oracle(a: &D2Args) -> Result<(), Failure> {
    pick(a.common.format, &[Format::Json])?;
    let inv = d2_lattice_invariants(a.alpha, a.gamma, a.delta, a.b)?;
    emit(&json_text(&inv.to_json()), a.common.out.as_deref())
}
