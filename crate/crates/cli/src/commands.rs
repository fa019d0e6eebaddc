use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use zpgrowth::difflie::{
    boundary_growth, check_weight_inequalities, classes_independent, homology, is_cycle_mod_p, sigma, tau,
    DifferentialSpec,
};
use zpgrowth::freelie::{basic_products_upto, lie_component, witt, FreeNAElement, Generator, GeneratorSet};
use zpgrowth::growth::{analyze, GrowthSequence};
use zpgrowth::moore::{
    crt_split, growth_certificate, hilton_milnor_expansion, homology_poincare, poly_mul, smash, smash_power_binomial,
    GrowthCertificate, GrowthParams, MooreSummand, MooreWedge,
};
use zpgrowth::selftest::{run_selftest, SelftestConfig};
use zpgrowth::serde_util::biguint::Big;
use zpgrowth::zpmod::RingSpec;
use zpgrowth::{Error, Limits, Result};

use crate::table::{json as to_json, opt, Csv, Format};

/// A rendered table, and whether the self-checks behind it all held.
pub struct Output {
    pub text: String,
    pub violation: Option<String>,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, violation: None }
    }

    fn check(text: String, holds: bool, what: &str) -> Self {
        Output {
            text,
            violation: (!holds).then(|| what.to_string()),
        }
    }
}

pub struct Ctx {
    pub format: Format,
    pub limits: Limits,
}

fn need_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::invalid("K must be at least 1"));
    }
    Ok(())
}

fn pair_spec(p: u64, r: u32, deg_x: u32) -> Result<DifferentialSpec> {
    DifferentialSpec::acyclic_pair(RingSpec::new(p, r)?, deg_x)
}

pub fn witt_table(ctx: &Ctx, n: u64, max_k: u64) -> Result<Output> {
    need_k(max_k as usize)?;
    let rows: Vec<(u64, Big)> = (1..=max_k).map(|k| Ok((k, Big(witt(n, k)?)))).collect::<Result<_>>()?;
    Ok(Output::ok(match ctx.format {
        Format::Json => to_json(&rows.iter().map(|(k, w)| json!({"k": k, "witt": w})).collect::<Vec<_>>()),
        Format::Csv => {
            let mut c = Csv::new(&["k", "witt"]);
            for (k, w) in &rows {
                c.row(&[k, &w.0]);
            }
            c.finish()
        }
    }))
}

pub fn hall(ctx: &Ctx, n: usize, max_k: usize, list: bool) -> Result<Output> {
    need_k(max_k)?;
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    ctx.limits.check_words(n, max_k)?;
    let names = GeneratorSet::uniform(RingSpec::new(2, 1)?, n, 1)?;
    let levels = basic_products_upto(n, max_k);
    let mut agree = true;
    let mut rows = Vec::new();
    for (i, level) in levels.iter().enumerate() {
        let k = i + 1;
        let w = witt(n as u64, k as u64)?;
        let ok = w == level.len().into();
        agree &= ok;
        rows.push((k, level, Big(w), ok));
    }
    let text = match ctx.format {
        Format::Json => to_json(
            &rows
                .iter()
                .map(|(k, level, w, ok)| {
                    let mut v = json!({"k": k, "count": level.len(), "witt": w, "agrees": ok});
                    if list {
                        v["products"] = Value::Array(level.iter().map(|t| t.to_json(&names)).collect());
                    }
                    v
                })
                .collect::<Vec<_>>(),
        ),
        Format::Csv if list => {
            let mut c = Csv::new(&["k", "index", "product"]);
            for (k, level, _, _) in &rows {
                for (i, t) in level.iter().enumerate() {
                    // brackets without commas keep the cell unquoted
                    c.row(&[k, &i, &t.display(&names).replace(", ", ":").replace(',', ":")]);
                }
            }
            c.finish()
        }
        Format::Csv => {
            let mut c = Csv::new(&["k", "count", "witt", "agrees"]);
            for (k, level, w, ok) in &rows {
                c.row(&[k, &level.len(), &w.0, ok]);
            }
            c.finish()
        }
    };
    Ok(Output::check(text, agree, "basic product count differs from the Witt number"))
}

pub fn parse_degrees(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::invalid(format!("bad generator degree {t:?}")))
        })
        .collect()
}

pub fn lie_dims(ctx: &Ctx, p: u64, r: u32, u: Option<u32>, degrees: &[u32], max_weight: usize) -> Result<Output> {
    need_k(max_weight)?;
    let u = u.unwrap_or(r);
    if u == 0 || u > r {
        return Err(Error::invalid(format!("need 1 ≤ s ≤ r, got s = {u}, r = {r}")));
    }
    let gens = GeneratorSet::new(
        RingSpec::new(p, r)?,
        degrees
            .iter()
            .enumerate()
            .map(|(i, &degree)| Generator {
                name: format!("x{}", i + 1),
                degree,
            })
            .collect(),
    )?;
    ctx.limits.check_words(gens.len(), max_weight)?;
    let comps = (1..=max_weight)
        .map(|k| lie_component(&gens, k, u, &ctx.limits))
        .collect::<Result<Vec<_>>>()?;
    Ok(Output::ok(match ctx.format {
        Format::Json => to_json(
            &comps
                .iter()
                .map(|c| json!({"weight": c.weight, "total": c.total_dim(), "components": c.module.components()}))
                .collect::<Vec<_>>(),
        ),
        Format::Csv => {
            let mut c = Csv::new(&["weight", "degree", "exponent", "count"]);
            for comp in &comps {
                for (d, exps) in comp.module.components() {
                    let mut by_exp: BTreeMap<u32, usize> = BTreeMap::new();
                    for &e in exps {
                        *by_exp.entry(e).or_default() += 1;
                    }
                    for (e, n) in by_exp {
                        c.row(&[&comp.weight, d, &e, &n]);
                    }
                }
            }
            c.finish()
        }
    }))
}

#[derive(Serialize)]
struct HomologyRow {
    weight: usize,
    #[serde(rename = "Z")]
    z: BTreeMap<i64, usize>,
    #[serde(rename = "B")]
    b: BTreeMap<i64, usize>,
    #[serde(rename = "H")]
    h: BTreeMap<i64, usize>,
}

pub fn homology_table(ctx: &Ctx, p: u64, deg_x: u32, max_weight: usize) -> Result<Output> {
    need_k(max_weight)?;
    let spec = pair_spec(p, 1, deg_x)?;
    ctx.limits.check_words(spec.gens().len(), max_weight)?;
    let mut rows = Vec::new();
    for w in 1..=max_weight {
        let hw = homology(&spec, w, 1, &ctx.limits)?;
        let (z, b, h) = (hw.dims_z(), hw.dims_b(), hw.dims_h());
        // every degree of the weight-w component, zeros included
        let fill = |m: &BTreeMap<i64, usize>| -> BTreeMap<i64, usize> {
            hw.dims_l().keys().map(|d| (*d, m.get(d).copied().unwrap_or(0))).collect()
        };
        rows.push(HomologyRow {
            weight: w,
            z: fill(&z),
            b: fill(&b),
            h: fill(&h),
        });
    }
    Ok(Output::ok(match ctx.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut c = Csv::new(&["weight", "degree", "dimZ", "dimB", "dimH"]);
            for r in &rows {
                for (d, z) in &r.z {
                    c.row(&[&r.weight, d, z, &r.b[d], &r.h[d]]);
                }
            }
            c.finish()
        }
    }))
}

fn describe(spec: &DifferentialSpec, e: &FreeNAElement) -> Value {
    json!({
        "element": e.to_json(spec.gens()),
        "display": e.display(spec.gens()),
        "degree": e.degree(spec.gens()),
        "weight": e.weight(),
        "cycle": is_cycle_mod_p(spec, e),
    })
}

pub fn tau_sigma(ctx: &Ctx, p: u64, r: u32, deg_x: u32, k: u32) -> Result<Output> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let spec = pair_spec(p, r, deg_x)?;
    let x = FreeNAElement::generator(spec.gens(), 0);
    let t = tau(&spec, &x, k, &ctx.limits)?;
    let s = sigma(&spec, &x, k, &ctx.limits)?;
    let cycles = is_cycle_mod_p(&spec, &t) && is_cycle_mod_p(&spec, &s);
    let independent = if cycles {
        classes_independent(&spec, &[t.clone(), s.clone()], &ctx.limits)?
    } else {
        false
    };
    let (dt, ds) = (describe(&spec, &t), describe(&spec, &s));
    let text = match ctx.format {
        Format::Json => to_json(&json!({
            "p": p, "r": r, "k": k, "deg_x": deg_x,
            "tau": dt, "sigma": ds,
            "independent": independent,
        })),
        Format::Csv => {
            let mut c = Csv::new(&["name", "degree", "weight", "terms", "cycle"]);
            for (name, e, d) in [("tau", &t, &dt), ("sigma", &s, &ds)] {
                c.row(&[&name, &opt(e.degree(spec.gens())), &opt(e.weight()), &e.terms().len(), &d["cycle"]]);
            }
            c.finish()
        }
    };
    Ok(Output::check(
        text,
        cycles && independent,
        "τ/σ are not independent cycles mod p",
    ))
}

pub fn ineq(ctx: &Ctx, p: u64, deg_x: u32, max_k: usize) -> Result<Output> {
    need_k(max_k)?;
    let rep = check_weight_inequalities(&pair_spec(p, 1, deg_x)?, max_k, &ctx.limits)?;
    let text = match ctx.format {
        Format::Json => to_json(&rep),
        Format::Csv => {
            let mut c = Csv::new(&["k", "dim_l", "dim_h", "dim_b", "homology_small", "boundaries_large"]);
            for r in &rep.rows {
                c.row(&[&r.k, &r.dim_l, &r.dim_h, &r.dim_b, &r.homology_small, &r.boundaries_large]);
            }
            c.finish()
        }
    };
    Ok(Output::check(text, rep.all_hold(), "a weighted-dimension inequality fails"))
}

pub fn boundary(ctx: &Ctx, p: u64, deg_x: u32, max_k: usize) -> Result<Output> {
    need_k(max_k)?;
    let rep = boundary_growth(&pair_spec(p, 1, deg_x)?, max_k, &ctx.limits)?;
    let text = match ctx.format {
        Format::Json => to_json(&rep),
        Format::Csv => {
            let mut c = Csv::new(&["k", "degree", "boundaries", "bound", "holds"]);
            for r in &rep.rows {
                c.row(&[&r.k, &r.degree, &r.boundaries, &r.bound, &r.holds]);
            }
            c.finish()
        }
    };
    Ok(Output::check(text, rep.all_hold(), "the boundary growth bound fails"))
}

fn wedge_output(format: Format, w: &MooreWedge) -> String {
    match format {
        Format::Json => to_json(w),
        Format::Csv => {
            let mut c = Csv::new(&["dim", "p", "r", "mult"]);
            for (s, m) in w.summands() {
                c.row(&[&s.dim, &s.p, &s.r, m]);
            }
            c.finish()
        }
    }
}

pub fn moore_split(ctx: &Ctx, n: u32, ell: u64) -> Result<Output> {
    Ok(Output::ok(wedge_output(ctx.format, &crt_split(n, ell)?)))
}

pub fn moore_smash(ctx: &Ctx, n: u32, m: u32, k1: u32, k2: u32, p: u64, r: u32) -> Result<Output> {
    let closed = smash_power_binomial(n, m, k1, k2, p, r)?;
    let mut factors = vec![MooreWedge::single(MooreSummand::new(n, p, r)?); k1 as usize];
    factors.extend(vec![MooreWedge::single(MooreSummand::new(m, p, r)?); k2 as usize]);
    let mut iterated = factors[0].clone();
    for f in &factors[1..] {
        iterated = smash(&iterated, f)?;
    }
    let poincare = homology_poincare(&closed, p, 1)?;
    // (t^n + t^{n−1})^{k1}·(t^m + t^{m−1})^{k2}
    let cell = |d: u32| {
        let mut v = vec![0u32.into(); d as usize + 1];
        v[d as usize - 1] = 1u32.into();
        v[d as usize] = 1u32.into();
        v
    };
    let mut expected = vec![1u32.into()];
    for _ in 0..k1 {
        expected = poly_mul(&expected, &cell(n));
    }
    for _ in 0..k2 {
        expected = poly_mul(&expected, &cell(m));
    }
    let iterated_agrees = iterated == closed;
    let poincare_agrees = poincare == expected;
    let text = match ctx.format {
        Format::Json => to_json(&json!({
            "wedge": closed,
            "poincare": poincare.iter().map(|c| Big(c.clone())).collect::<Vec<_>>(),
            "iterated_agrees": iterated_agrees,
            "poincare_agrees": poincare_agrees,
        })),
        Format::Csv => wedge_output(Format::Csv, &closed),
    };
    Ok(Output::check(
        text,
        iterated_agrees && poincare_agrees,
        "binomial smash formula disagrees with the iterated smash",
    ))
}

pub fn moore_hm(ctx: &Ctx, n: u32, m: u32, p: u64, r: u32, max_k: u32) -> Result<Output> {
    let factors = hilton_milnor_expansion(n, m, p, r, max_k)?;
    Ok(Output::ok(match ctx.format {
        Format::Json => to_json(&factors),
        Format::Csv => {
            let mut c = Csv::new(&["weight", "k1", "k2", "count", "dim", "mult"]);
            for f in &factors {
                for (s, mult) in f.wedge.summands() {
                    c.row(&[&f.weight, &f.k1, &f.k2, &f.count, &s.dim, mult]);
                }
            }
            c.finish()
        }
    }))
}

#[derive(Serialize)]
struct CertificateOutput<'a> {
    #[serde(flatten)]
    certificate: &'a GrowthCertificate,
    analysis: Option<zpgrowth::growth::GrowthReport>,
}

pub fn moore_growth(ctx: &Ctx, params: &GrowthParams, eps: f64, window: f64) -> Result<Output> {
    let cert = growth_certificate(params)?;
    let analysis = if cert.cumulative.len() >= 2 {
        Some(analyze(&cert.cumulative, eps, window)?)
    } else {
        None
    };
    let text = match ctx.format {
        Format::Json => to_json(&CertificateOutput {
            certificate: &cert,
            analysis,
        }),
        Format::Csv => {
            let mut c = Csv::new(&["k", "count", "maxdim", "booked_at", "booked"]);
            for x in &cert.contributions {
                c.row(&[&x.k, &x.count, &x.maxdim, &x.booked_at, &x.booked]);
            }
            c.finish()
        }
    };
    Ok(Output::check(text, cert.cumulative.is_monotone(), "cumulative sequence is not monotone"))
}

pub fn parse_values(s: &str) -> Result<Vec<num_bigint::BigUint>> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::invalid(format!("bad sequence value {t:?}"))))
        .collect()
}

pub fn growth_analyze(ctx: &Ctx, values: &str, start: i64, eps: f64, window: f64) -> Result<Output> {
    let values = parse_values(values)?;
    if start < 1 {
        return Err(Error::invalid("start index must be positive"));
    }
    let seq = GrowthSequence::from_values(start, values);
    let rep = analyze(&seq, eps, window)?;
    Ok(Output::ok(match ctx.format {
        Format::Json => to_json(&rep),
        Format::Csv => {
            let mut c = Csv::new(&["m", "value", "ratio", "in_window", "verdict"]);
            let verdict = serde_json::to_value(rep.verdict).expect("verdict serializes");
            let verdict = verdict.as_str().unwrap_or_default();
            for ((m, v), (_, ratio)) in seq.points().iter().zip(&rep.ratios) {
                c.row(&[m, v, &opt(*ratio), &(*m >= rep.window_start), &verdict]);
            }
            c.finish()
        }
    }))
}

pub fn selftest(ctx: &Ctx, cfg: &SelftestConfig) -> Result<Output> {
    let rep = run_selftest(cfg)?;
    let text = match ctx.format {
        Format::Json => to_json(&rep),
        Format::Csv => {
            let mut c = Csv::new(&["suite", "cases", "nontrivial", "failures"]);
            for s in &rep.suites {
                c.row(&[&s.name, &s.cases, &s.nontrivial, &s.failures]);
            }
            c.finish()
        }
    };
    let first = rep
        .suites
        .iter()
        .find(|s| !s.passed())
        .map(|s| format!("suite {} failed: {}", s.name, s.first_failure.as_deref().unwrap_or("no cases ran")));
    Ok(Output {
        text,
        violation: first,
    })
}
