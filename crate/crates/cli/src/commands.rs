use std::path::Path;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use superq_core::catalog::{self, CatalogEntry};
use superq_core::graded::{koszul_sign, Parity, Sign};
use superq_core::lie_super::{apoints_group_report, LieJson, LieSuperAlgebra, Nilpotency};
use superq_core::linalg::{Matrix, SparseVec};
use superq_core::picard::{self, MAX_TABULATED};
use superq_core::quadratic::{
    ci_verdict, koszul_witness_from, lie_dims_from_dual, HilbertSeries, QuadraticSpace, QuadraticSpaceJson,
    SliceResult,
};
use superq_core::spinor::{build_spinor_model, random_null_vector, SpinorModel};
use superq_core::superpoly::{FreeSCAlgebra, SuperPolynomial};
use superq_core::wall_brauer::{brauer_catalog, brauer_table, WallType};
use superq_core::{theta, Scalar};

use crate::args::{Command, PicardCheck, QuadricCheck, SpinorCheck};
use crate::report::{pass_if, Recorder, Status};
use crate::{CliError, Context};

type Res<T> = Result<T, CliError>;

pub fn arguments(cmd: &Command) -> Value {
    match cmd {
        Command::Susy { spec } => json!({ "spec": spec }),
        Command::Quadric { spec, check } => json!({ "spec": spec, "check": check }),
        Command::Spinor { d, check } => json!({ "d": d, "check": check }),
        Command::Brauer { max } => json!({ "max": max }),
        Command::Picard { check, n } => json!({ "check": check, "n": n }),
        Command::Theta { sweep } => json!({ "sweep": sweep }),
        Command::Catalog { name } => json!({ "name": name }),
    }
}

pub fn dispatch(cmd: &Command, ctx: &Context, timing: bool) -> Res<Recorder> {
    let mut rec = Recorder::new(timing);
    match cmd {
        Command::Susy { spec } => susy(spec, ctx, &mut rec)?,
        Command::Quadric { spec, check } => quadric(spec, check, ctx, &mut rec)?,
        Command::Spinor { d, check } => spinor(d.parse().expect("restricted by the parser"), check, ctx, &mut rec)?,
        Command::Brauer { max } => brauer(max[0], max[1], max[2], &mut rec)?,
        Command::Picard { check, n } => picard_cmd(check, *n, ctx, &mut rec)?,
        Command::Theta { sweep } => theta_cmd(*sweep, &mut rec)?,
        Command::Catalog { name } => catalog_cmd(name.as_deref(), &mut rec)?,
    }
    Ok(rec)
}

enum SpecInput {
    Space(QuadraticSpace),
    Lie(LieJson),
}

fn read_spec(spec: &str) -> Res<SpecInput> {
    match catalog::lookup(spec) {
        Ok(CatalogEntry::Quadratic(q)) => return Ok(SpecInput::Space(q)),
        Ok(CatalogEntry::Associative(_)) => {
            return Err(CliError::Input(format!("'{spec}' is an associative algebra; expected a quadratic space")))
        }
        Err(_) if !Path::new(spec).exists() => {
            return Err(CliError::Input(format!("'{spec}' is neither a catalog entry nor a file")))
        }
        Err(_) => {}
    }
    let text = std::fs::read_to_string(spec).map_err(|e| CliError::Io(format!("{spec}: {e}")))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{spec}: {e}")))?;
    let parse_err = |e: serde_json::Error| CliError::Input(format!("{spec}: {e}"));
    if value.get("gamma").is_some() {
        let j: QuadraticSpaceJson = serde_json::from_value(value).map_err(parse_err)?;
        Ok(SpecInput::Space(QuadraticSpace::from_json(&j)?))
    } else if value.get("brackets").is_some() {
        Ok(SpecInput::Lie(serde_json::from_value(value).map_err(parse_err)?))
    } else {
        Err(CliError::Input(format!("{spec}: expected a 'gamma' or 'brackets' field")))
    }
}

fn read_space(spec: &str) -> Res<QuadraticSpace> {
    match read_spec(spec)? {
        SpecInput::Space(s) => Ok(s),
        SpecInput::Lie(_) => Err(CliError::Input(format!("{spec}: expected a quadratic space"))),
    }
}

/// `H+P`, `H-P`, `2*x1-1/2*x3`.
fn format_vector(v: &SparseVec<Scalar>, names: &[String]) -> String {
    let mut out = String::new();
    for (k, c) in v {
        let neg = c.is_negative();
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let a = c.abs();
        if !a.is_one() {
            out.push_str(&format!("{a}*"));
        }
        out.push_str(&names[*k]);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn scalars(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn nilpotency_value(n: Nilpotency) -> Value {
    serde_json::to_value(n).expect("serializes")
}

fn grassmann4() -> Arc<FreeSCAlgebra> {
    FreeSCAlgebra::new::<&str>(&[], &["eta1", "eta2", "eta3", "eta4"]).expect("distinct names")
}

const GROUP_TRIALS: usize = 20;

fn group_law(rec: &mut Recorder, g: &Arc<LieSuperAlgebra>, seed: u64) -> Res<()> {
    rec.run("group-law", || {
        let r = apoints_group_report(g, &grassmann4(), GROUP_TRIALS, seed)?;
        Ok::<_, CliError>((pass_if(r.passed), serde_json::to_value(&r).expect("serializes")))
    })
}

fn susy(spec: &str, ctx: &Context, rec: &mut Recorder) -> Res<()> {
    match read_spec(spec)? {
        SpecInput::Space(space) => susy_space(&space, ctx, rec),
        SpecInput::Lie(j) => susy_lie(&j, ctx, rec),
    }
}

fn susy_space(space: &QuadraticSpace, ctx: &Context, rec: &mut Recorder) -> Res<()> {
    rec.run("load", || {
        Ok::<_, CliError>((
            Status::Pass,
            json!({
                "name": space.name(),
                "dimB": space.dim_b(),
                "dimV": space.dim_v(),
                "B": space.b_names(),
                "V": space.v_names(),
            }),
        ))
    })?;
    rec.run("bracket-table", || {
        let mut rows = Vec::new();
        for i in 0..space.dim_b() {
            for j in i..space.dim_b() {
                let g = space.gamma(i, j);
                if !g.is_empty() {
                    rows.push(json!({
                        "bracket": format!("[{},{}]", space.b_names()[i], space.b_names()[j]),
                        "value": format_vector(g, space.v_names()),
                    }));
                }
            }
        }
        Ok::<_, CliError>((Status::Pass, Value::Array(rows)))
    })?;
    let t = Arc::new(space.susy_algebra());
    rec.run("jacobi", || {
        let r = t.validate();
        Ok::<_, CliError>((pass_if(r.passed), json!({ "dim": r.dim, "violations": r.violation_count })))
    })?;
    rec.run("nilpotency", || {
        let n = t.nilpotency_class(4);
        Ok::<_, CliError>((pass_if(n == Nilpotency::Class(2)), nilpotency_value(n)))
    })?;
    rec.run("supercharges", || {
        let r = space.susy_vector_fields().check_homomorphism(space);
        let failures: Vec<_> = r.failures.iter().take(10).collect();
        Ok::<_, CliError>((pass_if(r.passed), json!({ "pairs": r.pairs_checked, "failures": failures })))
    })?;
    group_law(rec, &t, ctx.seed)
}

fn susy_lie(j: &LieJson, ctx: &Context, rec: &mut Recorder) -> Res<()> {
    let (g, report) = LieSuperAlgebra::load(j, ctx.force_unvalidated)?;
    let g = Arc::new(g);
    rec.run("jacobi", || {
        let status = if report.passed { Status::Pass } else { Status::Forced };
        let first: Vec<_> = report.violations.iter().take(10).collect();
        Ok::<_, CliError>((status, json!({ "dim": report.dim, "violations": report.violation_count, "first": first })))
    })?;
    let n = g.nilpotency_class(8);
    rec.run("nilpotency", || Ok::<_, CliError>((Status::Pass, nilpotency_value(n))))?;
    if report.passed && matches!(n, Nilpotency::Class(_)) {
        group_law(rec, &g, ctx.seed)?;
    }
    Ok(())
}

fn hilbert_cached(space: &QuadraticSpace, ctx: &Context) -> Res<(Vec<u64>, Value)> {
    let key = format!("hilbert|{}|{}", ctx.degree, space.canonical_key());
    let (v, state) =
        ctx.cache.get_or_compute(&key, || Ok(space.hilbert_series(ctx.degree, &ctx.limits)?.coefficients))?;
    Ok((v, serde_json::to_value(state).expect("serializes")))
}

fn dual_cached(space: &QuadraticSpace, ctx: &Context) -> Res<(Vec<u64>, Value)> {
    let key = format!("dual|{}|{}", ctx.degree, space.canonical_key());
    let (v, state) =
        ctx.cache.get_or_compute(&key, || Ok(space.dual_hilbert_series(ctx.degree, &ctx.limits)?.coefficients))?;
    Ok((v, serde_json::to_value(state).expect("serializes")))
}

fn quadric(spec: &str, checks: &[QuadricCheck], ctx: &Context, rec: &mut Recorder) -> Res<()> {
    let space = read_space(spec)?;
    let all = [QuadricCheck::Hilbert, QuadricCheck::Ci, QuadricCheck::Koszul, QuadricCheck::LieDims];
    let checks = if checks.is_empty() { &all[..] } else { checks };
    rec.run("quadrics", || {
        let ideal = space.quadric_equations();
        let names = space.b_names();
        Ok::<_, CliError>((
            Status::Pass,
            json!({ "count": ideal.generators.len(), "equations": ideal.to_polynomials(names) }),
        ))
    })?;
    for check in checks {
        match check {
            QuadricCheck::Hilbert => rec.run("hilbert", || {
                let (h, cache) = hilbert_cached(&space, ctx)?;
                Ok::<_, CliError>((Status::Pass, json!({ "series": h, "cache": cache })))
            })?,
            QuadricCheck::Ci => rec.run("ci", || {
                let (h, cache) = hilbert_cached(&space, ctx)?;
                let v = ci_verdict(&HilbertSeries { coefficients: h }, space.dim_b(), space.dim_v());
                let first = v.first_failure.map(|(d, a, e)| json!({ "degree": d, "actual": a, "expected": e }));
                Ok::<_, CliError>((
                    Status::Pass,
                    json!({
                        "complete_intersection": v.is_ci,
                        "through_degree": v.through_degree,
                        "series": v.series,
                        "expected": v.expected,
                        "first_failure": first,
                        "cache": cache,
                    }),
                ))
            })?,
            QuadricCheck::Koszul => rec.run("koszul", || {
                let (h, c1) = hilbert_cached(&space, ctx)?;
                let (hd, c2) = dual_cached(&space, ctx)?;
                let k = koszul_witness_from(&h, &hd);
                Ok::<_, CliError>((
                    pass_if(k.passed),
                    json!({
                        "hilbert": k.hilbert,
                        "dual": k.dual,
                        "sums": k.sums,
                        "first_failure": k.first_failure,
                        "cache": [c1, c2],
                    }),
                ))
            })?,
            QuadricCheck::LieDims => rec.run("lie-dims", || {
                let (hd, cache) = dual_cached(&space, ctx)?;
                let l = lie_dims_from_dual(&hd)?;
                Ok::<_, CliError>((Status::Pass, json!({ "dual": hd, "dims": l.dims, "cache": cache })))
            })?,
        }
    }
    Ok(())
}

fn spinor(d: usize, checks: &[SpinorCheck], ctx: &Context, rec: &mut Recorder) -> Res<()> {
    let m = build_spinor_model(d)?;
    let mut all = vec![SpinorCheck::Clifford, SpinorCheck::Equivariance];
    if d == 10 {
        all.extend([SpinorCheck::NullSlice, SpinorCheck::Pure]);
    }
    let checks = if checks.is_empty() { &all[..] } else { checks };
    if d != 10 && checks.iter().any(|c| matches!(c, SpinorCheck::NullSlice | SpinorCheck::Pure)) {
        return Err(CliError::Input("null slices and pure spinors are checked for d = 10 only".into()));
    }
    for check in checks {
        match check {
            SpinorCheck::Clifford => rec.run("clifford", || {
                let r = m.clifford_check(200, ctx.seed);
                Ok::<_, CliError>((pass_if(r.passed), serde_json::to_value(&r).expect("serializes")))
            })?,
            SpinorCheck::Equivariance => rec.run("equivariance", || {
                let r = m.equivariance_check();
                Ok::<_, CliError>((pass_if(r.passed), serde_json::to_value(&r).expect("serializes")))
            })?,
            SpinorCheck::NullSlice => rec.run("null-slice", || null_slice(&m, ctx))?,
            SpinorCheck::Pure => rec.run("pure", || pure(&m))?,
        }
    }
    Ok(())
}

fn null_slice(m: &SpinorModel, ctx: &Context) -> Res<(Status, Value)> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let v = random_null_vector(m.k(), &mut rng);
    let ns = m.null_slice(&v)?;
    let (slice, slice_ci) = match &ns.slice {
        SliceResult::Space(s) => {
            let ci = s.is_complete_intersection(ctx.degree.max(3), &ctx.limits)?.is_ci;
            (json!({ "dimB": s.dim_b(), "dimV": s.dim_v(), "complete_intersection": ci }), ci && s.dim_v() == 1)
        }
        SliceResult::Abelian { dim_b } => (json!({ "dimB": dim_b, "abelian": true }), false),
    };
    let ok = ns.dim == 8 && ns.kernel_equals_image && ns.image_is_line && slice_ci;
    let basis: Vec<Value> = ns.l_basis.iter().map(|b| scalars(b)).collect();
    Ok((
        pass_if(ok),
        json!({
            "v": scalars(&v),
            "dim": ns.dim,
            "kernel_equals_image": ns.kernel_equals_image,
            "image_is_line": ns.image_is_line,
            "null_algebra": ns.null_algebra.superdim(),
            "slice": slice,
            "l_basis": basis,
        }),
    ))
}

/// The vacuum is pure, and the pure cone is 11-dimensional there: the kernel
/// of `s ↦ Γ(1, s)` on `S₊` is its tangent space.
fn pure(m: &SpinorModel) -> Res<(Status, Value)> {
    let n = m.plus_basis().len();
    let unit = |i: usize| -> Vec<Scalar> { (0..n).map(|j| Scalar::from_int(i64::from(i == j))).collect() };
    let vacuum = unit(0);
    let vacuum_pure = m.pure_spinor_check(&vacuum)?;
    let full = m.embed_plus(&vacuum)?;
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        cols.push(m.gamma(&full, &m.embed_plus(&unit(i))?));
    }
    let tangent = n - Matrix::from_rows(cols).rank();
    Ok((pass_if(vacuum_pure && tangent == 11), json!({ "vacuum_pure": vacuum_pure, "tangent_dim": tangent })))
}

fn brauer(p: usize, q: usize, n: usize, rec: &mut Recorder) -> Res<()> {
    let table = brauer_table(p, q, n)?;
    rec.run("supercenters", || {
        let mut rows = Vec::new();
        let mut ok = true;
        for kind in brauer_catalog(p, q, n) {
            let c = kind.build().supercenter();
            let expected = match kind.expected_type() {
                WallType::M => (1, 0),
                WallType::Q => (1, 1),
                WallType::Indeterminate => (0, 0),
            };
            ok &= c.verified && (c.superdim.even, c.superdim.odd) == expected;
            rows.push(json!({ "algebra": kind.label(), "supercenter": c.superdim }));
        }
        Ok::<_, CliError>((pass_if(ok), Value::Array(rows)))
    })?;
    rec.run("tensor-rules", || {
        let failing: Vec<_> = table.cells.iter().filter(|c| !c.ok).collect();
        Ok::<_, CliError>((
            pass_if(table.all_ok),
            json!({ "cells": table.cells.len(), "failing": failing, "algebras": table.algebras }),
        ))
    })?;
    rec.run("type-law", || Ok::<_, CliError>((pass_if(table.type_law_is_z2), json!({ "group": "Z/2" }))))?;
    rec.table("brauer", table.to_tsv());
    Ok(())
}

fn picard_cmd(checks: &[PicardCheck], n: usize, ctx: &Context, rec: &mut Recorder) -> Res<()> {
    let all = [PicardCheck::Hsst, PicardCheck::Cocycle, PicardCheck::Braiding];
    let checks = if checks.is_empty() { &all[..] } else { checks };
    for check in checks {
        match check {
            PicardCheck::Hsst => rec.run("hsst", || {
                let a = picard::picard_by_name("omega-tau12")?;
                let b = picard::picard_by_name("tau01-mod2")?;
                let control = picard::picard_by_name("z2-z2-zero")?;
                let eq = picard::equivalent(&a, &b)?;
                let neq = picard::equivalent(&control, &b)?;
                Ok::<_, CliError>((
                    pass_if(eq && !neq),
                    json!({ "pair": [a.name, b.name], "equivalent": eq, "control": control.name, "control_equivalent": neq }),
                ))
            })?,
            PicardCheck::Cocycle => cocycle(n, ctx, rec)?,
            PicardCheck::Braiding => rec.run("braiding", || {
                let f = picard::free_picard();
                let parity = |k: i64| if k.rem_euclid(2) == 0 { Parity::Even } else { Parity::Odd };
                let mut pairs = 0;
                let mut mismatch = None;
                for a in -10i64..=10 {
                    for b in -10i64..=10 {
                        pairs += 1;
                        let s = picard::as_sign(&f, &picard::braiding_sign(&f, a, b)?);
                        if s != Some(koszul_sign(parity(a), parity(b))) && mismatch.is_none() {
                            mismatch = Some([a, b]);
                        }
                    }
                }
                Ok::<_, CliError>((pass_if(mismatch.is_none()), json!({ "pairs": pairs, "first_mismatch": mismatch })))
            })?,
        }
    }
    Ok(())
}

fn cocycle(n: usize, ctx: &Context, rec: &mut Recorder) -> Res<()> {
    if n > MAX_TABULATED && n <= 8 {
        return Err(CliError::Resource(format!("the triple check for n = {n} is beyond the tabulated range n ≤ {MAX_TABULATED}")));
    }
    let t = picard::spin_cocycle(n)?;
    rec.run("cocycle", || {
        let c = t.verify();
        Ok::<_, CliError>((pass_if(c.passed), serde_json::to_value(&c).expect("serializes")))
    })?;
    if n >= 4 {
        rec.run("commutator", || {
            let mut g: Vec<u8> = (0..n as u8).collect();
            let mut h = g.clone();
            g.swap(0, 1);
            h.swap(2, 3);
            let (gi, hi) = (t.index_of(&g).expect("a permutation"), t.index_of(&h).expect("a permutation"));
            let sign = t.commutator_sign(gi, hi)?;
            let rechosen = picard::commutator_under_rechoice(n, &g, &h, 10, ctx.seed)?;
            let stable = rechosen.iter().all(|s| *s == sign);
            Ok::<_, CliError>((
                pass_if(sign == Sign::Minus && stable),
                json!({ "g": picard::one_line(&g), "h": picard::one_line(&h), "sign": sign, "rechoices": rechosen.len() }),
            ))
        })?;
    } else {
        rec.run("splitting", || {
            let s = picard::find_splitting(&t)?;
            Ok::<_, CliError>((pass_if(s.is_some()), json!({ "splitting": s })))
        })?;
    }
    if n <= 4 {
        if let Some(tsv) = picard::sign_character_data(n)?.to_tsv() {
            rec.table("cocycle", tsv);
        }
    }
    Ok(())
}

fn theta_cmd(sweep: i64, rec: &mut Recorder) -> Res<()> {
    rec.run("q-squared", || {
        let c = theta::check_q_squared(10);
        Ok::<_, CliError>((pass_if(c.passed), serde_json::to_value(&c).expect("serializes")))
    })?;
    rec.run("exp-q", || {
        let alg = theta::line_algebra();
        let t = SuperPolynomial::var(&alg, "t")?;
        let e = theta::exp_q(&t);
        let expected = SuperPolynomial::parse(&alg, "t + xi + 1/2")?;
        Ok::<_, CliError>((pass_if(e.value == expected), json!({ "input": "t", "value": e.value.to_text(), "terms": e.terms })))
    })?;
    rec.run("non-homomorphism", || {
        let w = theta::non_homomorphism_witness();
        let v = w.as_ref().map(|(f, g)| json!({ "f": f.to_text(), "g": g.to_text() }));
        Ok::<_, CliError>((pass_if(w.is_some()), json!({ "witness": v })))
    })?;
    rec.run("sweep", || {
        let s = theta::theta_sweep(sweep)?;
        let terms: Vec<Value> = s
            .terms
            .iter()
            .map(|t| json!({ "n": t.n, "eigen_ok": t.eigen_ok, "heat_ok": t.heat_ok, "periodicity_ok": t.periodicity_ok }))
            .collect();
        Ok::<_, CliError>((pass_if(s.passed), json!({ "count": s.count, "terms": terms })))
    })
}

fn catalog_cmd(name: Option<&str>, rec: &mut Recorder) -> Res<()> {
    match name {
        None => {
            let list = catalog::listing();
            let mut tsv = String::from("name\tkind\tdescription\n");
            for e in &list {
                tsv.push_str(&format!("{}\t{}\t{}\n", e.name, e.kind, e.description));
            }
            rec.run("catalog", || Ok::<_, CliError>((Status::Pass, serde_json::to_value(&list).expect("serializes"))))?;
            rec.table("catalog", tsv);
        }
        Some(name) => {
            let entry = catalog::lookup(name)?;
            rec.run("entry", || {
                let v = match &entry {
                    CatalogEntry::Quadratic(q) => serde_json::to_value(q.to_json()),
                    CatalogEntry::Associative(a) => serde_json::to_value(a.to_json()),
                };
                Ok::<_, CliError>((Status::Pass, v.expect("serializes")))
            })?;
        }
    }
    Ok(())
}
