use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::charts::{transition, MonomialMap};
use super::models::{automorphism_order, FoliationModel, ModelAutomorphism, Pencil};
use super::ConstructionError;
use crate::blowup::blow_down_config;
use crate::exactnum::QuadraticNumber as QN;
use crate::localfol::{analyze_singularity, cs_corner_index};
use crate::riccati::cycle_order;
use crate::symalg::{curve_invariant, pullback_coefficients, pullback_form, wedge, Poly2, RationalFn2, RationalMap2};

pub const ORDER_BOUND: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub evidence: BTreeMap<String, String>,
}

impl Claim {
    pub fn new(id: impl Into<String>, anchor: &str, pass: bool, evidence: BTreeMap<String, String>) -> Self {
        let status = if pass { Status::Pass } else { Status::Fail };
        Self { id: id.into(), anchor: anchor.into(), status, evidence }
    }

    fn error(id: impl Into<String>, anchor: &str, e: &ConstructionError) -> Self {
        Self::new(id, anchor, false, BTreeMap::from([("error".into(), e.to_string())]))
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub model: String,
    pub claims: Vec<Claim>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(Claim::passed)
    }

    pub fn claim(&self, id: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.id == id)
    }
}

type Evidence = BTreeMap<String, String>;

fn run(
    claims: &mut Vec<Claim>,
    id: impl Into<String>,
    anchor: &str,
    check: impl FnOnce() -> Result<(bool, Evidence), ConstructionError>,
) {
    let id = id.into();
    claims.push(match check() {
        Ok((pass, ev)) => Claim::new(id, anchor, pass, ev),
        Err(e) => Claim::error(id, anchor, &e),
    });
}

fn origin() -> (QN, QN) {
    (QN::zero(), QN::zero())
}

/// Runs every check that applies to the model, in a fixed order.
pub fn verify_model(m: &FoliationModel) -> VerificationReport {
    let mut claims = Vec::new();
    run(&mut claims, "forms.overlap", "the chart forms glue", || check_overlaps(m));
    run(&mut claims, "cycle.config", "cycle of smooth rational curves", || check_config(m));
    run(&mut claims, "cycle.invariant", "every cycle curve is invariant", || check_invariance(m));
    run(&mut claims, "corners.reduced", "crossings are reduced nondegenerate", || check_corners(m));
    run(&mut claims, "cs.sums", "index sums equal self-intersections", || check_cs_sums(m));
    for a in &m.automorphisms {
        let n = &a.name;
        run(&mut claims, format!("aut.{n}.invariant"), "the automorphism preserves the foliation", || {
            check_aut_invariance(m, &a.map)
        });
        run(&mut claims, format!("aut.{n}.order"), "order of the automorphism", || check_order(m, a));
        run(&mut claims, format!("aut.{n}.permutation"), "the cycle is permuted cyclically", || {
            check_permutation(m, &a.map)
        });
        run(&mut claims, format!("aut.{n}.regular"), "regular and invertible along the cycle", || {
            check_regularity(m, &a.map)
        });
        if m.pencil.is_some() {
            run(&mut claims, format!("aut.{n}.lambda"), "invariance forces the value of lambda", || {
                check_lambda_condition(m, &a.map)
            });
        }
    }
    if m.swap.is_some() {
        run(&mut claims, "sign.swap", "the two sign choices are conjugate", || check_swap(m));
    }
    for set in &m.contractions {
        let id = format!("contract.{}", set.iter().map(u32::to_string).collect::<Vec<_>>().join("-"));
        run(&mut claims, id, "contraction to a cycle of three (+1)-curves", || check_contraction(m, set));
    }
    VerificationReport { model: m.name.clone(), claims }
}

fn check_overlaps(m: &FoliationModel) -> Result<(bool, Evidence), ConstructionError> {
    let mut pairs = 0;
    let mut bad = Vec::new();
    for a in &m.charts {
        for b in &m.charts {
            if a == b {
                continue;
            }
            let Some(t) = transition(a, b) else { continue };
            pairs += 1;
            if !wedge(m.form(&a.label)?, &pullback_form(&t, m.form(&b.label)?)?)?.is_zero() {
                bad.push(format!("{} -> {}", a.label, b.label));
            }
        }
    }
    let ev = Evidence::from([("pairs".into(), pairs.to_string()), ("failures".into(), format!("{bad:?}"))]);
    Ok((bad.is_empty() && pairs > 0, ev))
}

fn check_config(m: &FoliationModel) -> Result<(bool, Evidence), ConstructionError> {
    let order = cycle_order(&m.cycle);
    let selfs: Vec<i64> = m.cycle.curves.iter().map(|c| c.self_intersection).collect();
    let ids: BTreeSet<u32> = m.curves.iter().map(|c| c.id).collect();
    let ok = order.as_ref().is_some_and(|o| o.len() == m.curves.len() && o.iter().all(|i| ids.contains(i)))
        && m.cycle.curves.iter().all(|c| c.rational);
    let ev = Evidence::from([
        ("order".into(), format!("{order:?}")),
        ("self_intersections".into(), format!("{selfs:?}")),
    ]);
    Ok((ok, ev))
}

fn check_invariance(m: &FoliationModel) -> Result<(bool, Evidence), ConstructionError> {
    let mut ok = true;
    let mut ev = Evidence::new();
    for c in &m.curves {
        let mut seen = Vec::new();
        for ch in &m.charts {
            if let Some(eq) = c.equation(ch) {
                ok &= curve_invariant(m.form(&ch.label)?, &eq);
                seen.push(format!("{}: {eq}", ch.label));
            }
        }
        ok &= !seen.is_empty();
        ev.insert(format!("curve {}", c.id), seen.join("; "));
    }
    Ok((ok, ev))
}

fn check_corners(m: &FoliationModel) -> Result<(bool, Evidence), ConstructionError> {
    let mut ok = true;
    let mut ev = Evidence::new();
    for (x, corner) in m.cycle.crossings.iter().zip(m.corners()) {
        let key = format!("{}-{}", x.a, x.b);
        let Some(c) = corner else {
            ok = false;
            ev.insert(key, "no chart".into());
            continue;
        };
        let sa = analyze_singularity(m.form(&c.chart)?, &origin())?;
        ok &= sa.is_reduced_nondegenerate();
        let q = sa.eigenvalue_quotients.map(|(p, q)| format!("{p}, {q}")).unwrap_or_default();
        ev.insert(key, format!("{}: {:?} [{q}]", c.chart, sa.classification));
    }
    Ok((ok, ev))
}

/// Sum of the indices of each curve over its crossings.
pub fn cs_sums(m: &FoliationModel) -> Result<BTreeMap<u32, QN>, ConstructionError> {
    let mut sums: BTreeMap<u32, QN> = m.curves.iter().map(|c| (c.id, QN::zero())).collect();
    for corner in m.corners() {
        let c = corner.ok_or_else(|| ConstructionError::WrongShape("crossing outside every chart".into()))?;
        let w = m.form(&c.chart)?;
        for (id, axis) in [(c.a, c.axis_a), (c.b, c.axis_b())] {
            let idx = cs_corner_index(w, &origin(), axis)?;
            let s = sums.get_mut(&id).expect("cycle curve");
            *s = s.try_add(&idx)?;
        }
    }
    Ok(sums)
}

fn check_cs_sums(m: &FoliationModel) -> Result<(bool, Evidence), ConstructionError> {
    let sums = cs_sums(m)?;
    let ok = sums
        .iter()
        .all(|(id, s)| m.cycle.curve(*id).is_some_and(|c| *s == QN::int(c.self_intersection)));
    Ok((ok, sums.iter().map(|(id, s)| (format!("curve {id}"), s.to_string())).collect()))
}

fn check_aut_invariance(m: &FoliationModel, map: &MonomialMap) -> Result<(bool, Evidence), ConstructionError> {
    let mut pairs = 0;
    let mut bad = Vec::new();
    for a in &m.charts {
        for b in &m.charts {
            let Some(phi) = map.in_charts(a, b) else { continue };
            pairs += 1;
            if !wedge(m.form(&a.label)?, &pullback_form(&phi, m.form(&b.label)?)?)?.is_zero() {
                bad.push(format!("{} -> {}", a.label, b.label));
            }
        }
    }
    let ev = Evidence::from([("pairs".into(), pairs.to_string()), ("failures".into(), format!("{bad:?}"))]);
    Ok((bad.is_empty() && pairs > 0, ev))
}

fn check_order(m: &FoliationModel, a: &ModelAutomorphism) -> Result<(bool, Evidence), ConstructionError> {
    let order = automorphism_order(&a.map, m.base_chart(), ORDER_BOUND);
    let ev = Evidence::from([
        ("order".into(), order.map_or("none".into(), |o| o.to_string())),
        ("expected".into(), a.order.to_string()),
        ("bound".into(), ORDER_BOUND.to_string()),
    ]);
    Ok((order == Some(a.order), ev))
}

/// Image of each cycle curve under `map`, read off from the defining
/// polynomials: `C_i` maps onto `C_j` when the equation of `C_j` pulled
/// back by the map vanishes along `C_i`, using chart pairs in which the
/// map is defined at generic points of `C_i`.
pub fn curve_permutation(m: &FoliationModel, map: &MonomialMap) -> BTreeMap<u32, Option<u32>> {
    let mut out = BTreeMap::new();
    for ci in &m.curves {
        let Some((a, fi)) = m.charts.iter().find_map(|ch| Some((ch, ci.equation(ch)?))) else {
            out.insert(ci.id, None);
            continue;
        };
        let images: Vec<u32> = m
            .curves
            .iter()
            .filter(|cj| {
                m.charts.iter().any(|b| {
                    let (Some(fj), Some(phi)) = (cj.equation(b), map.in_charts(a, b)) else { return false };
                    let defined = !fi.divides(phi.fx.den()) && !fi.divides(phi.fy.den());
                    let r = phi.pull_poly(&fj);
                    defined && !r.is_zero() && fi.divides(r.num())
                })
            })
            .map(|cj| cj.id)
            .collect();
        out.insert(ci.id, (images.len() == 1).then(|| images[0]));
    }
    out
}

fn check_permutation(m: &FoliationModel, map: &MonomialMap) -> Result<(bool, Evidence), ConstructionError> {
    let perm = curve_permutation(m, map);
    let sigma: Option<BTreeMap<u32, u32>> = perm.iter().map(|(&k, v)| v.map(|j| (k, j))).collect();
    let text = perm
        .iter()
        .map(|(k, v)| format!("{k}->{}", v.map_or("?".into(), |j| j.to_string())))
        .collect::<Vec<_>>()
        .join(", ");
    let ev = Evidence::from([("images".into(), text)]);
    let Some(sigma) = sigma else { return Ok((false, ev)) };
    // one orbit through every curve, and crossings go to crossings
    let start = *sigma.keys().next().expect("nonempty cycle");
    let mut orbit = 1;
    let mut cur = sigma[&start];
    while cur != start && orbit <= sigma.len() {
        cur = sigma[&cur];
        orbit += 1;
    }
    let adjacency = m.cycle.crossings.iter().all(|x| m.cycle.meets(sigma[&x.a], sigma[&x.b]) > 0);
    Ok((orbit == sigma.len() && adjacency, ev))
}

fn defined_at(f: &RationalFn2, p: &(QN, QN)) -> Result<Option<QN>, ConstructionError> {
    Ok(f.eval(&p.0, &p.1)?)
}

fn check_regularity(m: &FoliationModel, map: &MonomialMap) -> Result<(bool, Evidence), ConstructionError> {
    let mut ok = true;
    let mut ev = Evidence::new();
    // generic points of each curve
    for c in &m.curves {
        let found = m.charts.iter().find_map(|a| {
            let f = c.equation(a)?;
            m.charts.iter().find_map(|b| {
                let phi = map.in_charts(a, b)?;
                let j = phi.jacobian_det();
                let regular = [phi.fx.den(), phi.fy.den(), j.num(), j.den()].iter().all(|p| !f.divides(p));
                regular.then(|| format!("{} -> {}", a.label, b.label))
            })
        });
        ok &= found.is_some();
        ev.insert(format!("curve {}", c.id), found.unwrap_or_else(|| "singular".into()));
    }
    // the crossings themselves
    for corner in m.corners().into_iter().flatten() {
        let a = m.chart(&corner.chart)?;
        let mut found = None;
        for b in &m.charts {
            let Some(phi) = map.in_charts(a, b) else { continue };
            let p = origin();
            let (Some(_), Some(_)) = (defined_at(&phi.fx, &p)?, defined_at(&phi.fy, &p)?) else { continue };
            if defined_at(&phi.jacobian_det(), &p)?.is_some_and(|d| !d.is_zero()) {
                found = Some(format!("{} -> {}", a.label, b.label));
                break;
            }
        }
        ok &= found.is_some();
        ev.insert(format!("crossing {}-{}", corner.a, corner.b), found.unwrap_or_else(|| "singular".into()));
    }
    Ok((ok, ev))
}

/// `ω ∧ φ*ω` for `ω = λ·p + q`, as a polynomial in `λ`:
/// `factor · (c2 λ² + c1 λ + c0)` with the leading nonzero `c` equal to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaCondition {
    pub factor: RationalFn2,
    pub coeffs: [QN; 3],
}

impl LambdaCondition {
    pub fn holds_at(&self, lambda: &QN) -> Result<bool, ConstructionError> {
        let [c2, c1, c0] = &self.coeffs;
        let v = c2.try_mul(&lambda.pow(2))?.try_add(&c1.try_mul(lambda)?)?.try_add(c0)?;
        Ok(v.is_zero())
    }
}

fn pulled(phi: &RationalMap2, [a, b]: &[Poly2; 2]) -> (RationalFn2, RationalFn2) {
    pullback_coefficients(phi, &RationalFn2::from_poly(a.clone()), &RationalFn2::from_poly(b.clone()))
}

fn wedge_coeff([a, b]: &[Poly2; 2], (c, d): &(RationalFn2, RationalFn2)) -> RationalFn2 {
    &(&RationalFn2::from_poly(a.clone()) * d) - &(&RationalFn2::from_poly(b.clone()) * c)
}

/// `None` when the wedge vanishes for every `λ` or is not a constant
/// multiple of a single rational function in each degree.
pub fn lambda_condition(pencil: &Pencil, phi: &RationalMap2) -> Option<LambdaCondition> {
    let Pencil { p, q } = pencil;
    let (pp, pq) = (pulled(phi, p), pulled(phi, q));
    let w2 = wedge_coeff(p, &pp);
    let w1 = &wedge_coeff(p, &pq) + &wedge_coeff(q, &pp);
    let w0 = wedge_coeff(q, &pq);
    let lead = [&w2, &w1, &w0].into_iter().find(|w| !w.is_zero())?.clone();
    let c = |w: &RationalFn2| -> Option<QN> {
        let r = w / &lead;
        r.is_constant().then(|| r.num().constant_term())
    };
    Some(LambdaCondition { coeffs: [c(&w2)?, c(&w1)?, c(&w0)?], factor: lead })
}

fn check_lambda_condition(m: &FoliationModel, map: &MonomialMap) -> Result<(bool, Evidence), ConstructionError> {
    let pencil = m.pencil.as_ref().expect("checked by caller");
    let base = m.base_chart();
    let phi = map.in_charts(base, base).ok_or_else(|| ConstructionError::UnknownChart(base.label.clone()))?;
    let Some(cond) = lambda_condition(pencil, &phi) else {
        return Ok((false, Evidence::from([("condition".into(), "none".into())])));
    };
    let holds = cond.holds_at(&m.lambda)?;
    let [c2, c1, c0] = &cond.coeffs;
    let ev = Evidence::from([
        ("coefficients".into(), format!("[{c2}, {c1}, {c0}]")),
        ("factor".into(), cond.factor.to_string()),
        ("lambda".into(), m.lambda.to_string()),
    ]);
    Ok((holds, ev))
}

fn check_swap(m: &FoliationModel) -> Result<(bool, Evidence), ConstructionError> {
    let pencil = m.pencil.as_ref().ok_or_else(|| ConstructionError::WrongShape("no pencil".into()))?;
    let swap = m.swap.as_ref().expect("checked by caller");
    let base = m.base_chart();
    let phi = swap.in_charts(base, base).ok_or_else(|| ConstructionError::UnknownChart(base.label.clone()))?;
    let other_lambda = m.lambda.conjugate();
    let other = pencil.at(&other_lambda, &base.label)?;
    let ours = m.form(&base.label)?;
    let ok = wedge(ours, &pullback_form(&phi, &other)?)?.is_zero() && !ours.is_proportional(&other);
    let ev = Evidence::from([
        ("swap".into(), phi.to_string()),
        ("other".into(), other.to_string()),
    ]);
    Ok((ok, ev))
}

fn check_contraction(m: &FoliationModel, set: &[u32]) -> Result<(bool, Evidence), ConstructionError> {
    let mut cfg = m.cycle.clone();
    for &c in set {
        cfg = blow_down_config(&cfg, c)?;
    }
    let selfs: Vec<i64> = cfg.curves.iter().map(|c| c.self_intersection).collect();
    let ok = cycle_order(&cfg).is_some_and(|o| o.len() == 3) && selfs.iter().all(|&s| s == 1);
    let ev = Evidence::from([
        ("self_intersections".into(), format!("{selfs:?}")),
        ("config".into(), cfg.to_string().trim_end().replace('\n', "; ")),
    ]);
    Ok((ok, ev))
}
