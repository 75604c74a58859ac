use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::config::{Crossing, Curve, CurveConfig, Mark};
use super::BlowupError;
use crate::exactnum::QuadraticNumber as QN;
use crate::localfol::classify_lambda;

/// Blows up a crossing point or a marked smooth point. The exceptional curve
/// gets id `config.next_curve_id()`; it is recorded invariant unless the
/// point carries the index 1 (a dicritical corner).
pub fn blow_up_config(config: &CurveConfig, point: u32) -> Result<CurveConfig, BlowupError> {
    let here: Vec<&Crossing> = config.crossings_at(point).collect();
    let marks: Vec<&Mark> = config.marks.iter().filter(|m| m.point == point).collect();
    if here.is_empty() && marks.is_empty() {
        return Err(BlowupError::UnknownPoint(point));
    }

    // (curve, index of its branch) for every branch through the point
    let mut branches: Vec<(u32, Option<QN>)> = Vec::new();
    for x in &here {
        branches.push((x.a, x.lambda.clone()));
        branches.push((x.b, x.lambda.as_ref().and_then(|l| l.inv().ok())));
    }
    for m in &marks {
        if !branches.iter().any(|b| b.0 == m.curve) {
            branches.push((m.curve, None));
        }
    }
    let single_annotated = here.len() == 1 && here[0].lambda.is_some();
    let dicritical = single_annotated && here[0].lambda.as_ref().is_some_and(QN::is_one);

    let mut out = config.clone();
    out.crossings.retain(|x| x.point != point);
    out.marks.retain(|m| m.point != point);
    let mut mult: BTreeMap<u32, i64> = BTreeMap::new();
    for (c, _) in &branches {
        *mult.entry(*c).or_default() += 1;
    }
    for (c, m) in &mult {
        out.curve_mut(*c).ok_or(BlowupError::UnknownCurve(*c))?.self_intersection -= m * m;
    }

    let e = config.next_curve_id();
    out.curves.push(Curve { id: e, self_intersection: -1, rational: true, invariant: !dicritical });
    for (c, index) in branches {
        // index μ of a branch at a reduced corner becomes μ - 1 on its strict transform
        let lambda = if single_annotated && !dicritical { index.map(|l| &l - &QN::one()) } else { None };
        let lambda = lambda.filter(|l| !l.is_zero());
        out.add_crossing(c, e, lambda);
    }
    Ok(out)
}

/// Contracts a smooth rational `(-1)`-curve.
pub fn blow_down_config(config: &CurveConfig, curve: u32) -> Result<CurveConfig, BlowupError> {
    let c = config.curve(curve).ok_or(BlowupError::UnknownCurve(curve))?;
    let not = |reason: &str| BlowupError::NotContractible { curve, reason: reason.into() };
    if !c.rational {
        return Err(not("curve is not rational"));
    }
    if c.self_intersection != -1 {
        return Err(not("self-intersection is not -1"));
    }
    if config.self_crossings(curve) > 0 {
        return Err(not("curve has a node"));
    }

    let branches: Vec<(u32, Option<QN>)> = config
        .crossings_of(curve)
        .map(|x| {
            let o = x.other(curve).expect("involves");
            (o, x.index_of(o))
        })
        .collect();
    let mut out = config.clone();
    out.curves.retain(|k| k.id != curve);
    out.crossings.retain(|x| !x.involves(curve));
    out.marks.retain(|m| m.curve != curve);
    let mut meet: BTreeMap<u32, i64> = BTreeMap::new();
    for (o, _) in &branches {
        *meet.entry(*o).or_default() += 1;
    }
    for (o, j) in &meet {
        out.curve_mut(*o).expect("neighbour exists").self_intersection += j * j;
    }

    let p = out.next_point_id().max(config.next_point_id());
    match branches.as_slice() {
        [] => {}
        [(o, _)] => out.marks.push(Mark { curve: *o, point: p }),
        [(o1, m1), (o2, m2)] => {
            let lambda = match (m1, m2) {
                (Some(m1), Some(m2)) => {
                    let l1 = m1 + &QN::one();
                    let l2 = m2 + &QN::one();
                    (!l1.is_zero() && (&l1 * &l2).is_one()).then_some(l1)
                }
                _ => None,
            };
            out.crossings.push(Crossing { a: *o1, b: *o2, point: p, lambda });
        }
        _ => {
            for i in 0..branches.len() {
                for j in i + 1..branches.len() {
                    out.crossings.push(Crossing { a: branches[i].0, b: branches[j].0, point: p, lambda: None });
                }
            }
        }
    }
    let fixed: Vec<Crossing> = out.crossings.drain(..).map(orient).collect();
    out.crossings = fixed;
    Ok(out)
}

fn orient(x: Crossing) -> Crossing {
    if x.a > x.b {
        Crossing { a: x.b, b: x.a, point: x.point, lambda: x.lambda.and_then(|l| l.inv().ok()) }
    } else {
        x
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionMatrix {
    /// Curve ids labelling rows and columns.
    pub ids: Vec<u32>,
    pub entries: Vec<Vec<i64>>,
}

/// Diagonal is the stored self-intersection; nodes are not added to it.
pub fn intersection_matrix(config: &CurveConfig) -> IntersectionMatrix {
    let ids = config.ids();
    let entries = ids
        .iter()
        .map(|&i| {
            ids.iter()
                .map(|&j| {
                    if i == j {
                        config.curve(i).expect("listed").self_intersection
                    } else {
                        config.meets(i, j) as i64
                    }
                })
                .collect()
        })
        .collect();
    IntersectionMatrix { ids, entries }
}

fn check_symmetric(m: &[Vec<i64>]) -> Result<(), BlowupError> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(BlowupError::NotSymmetric);
    }
    for i in 0..n {
        for j in 0..i {
            if m[i][j] != m[j][i] {
                return Err(BlowupError::NotSymmetric);
            }
        }
    }
    Ok(())
}

/// Exact determinant by fraction-free elimination.
pub fn determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

/// Determinants of the leading `k × k` blocks, `k = 1..=n`.
pub fn leading_principal_minors(m: &[Vec<i64>]) -> Result<Vec<BigInt>, BlowupError> {
    check_symmetric(m)?;
    Ok((1..=m.len())
        .map(|k| determinant(&m[..k].iter().map(|r| r[..k].to_vec()).collect::<Vec<_>>()))
        .collect())
}

/// Negative definiteness: `(-1)^k det(M_k) > 0` for every leading block.
pub fn grauert_is_contractible(m: &[Vec<i64>]) -> Result<bool, BlowupError> {
    let minors = leading_principal_minors(m)?;
    Ok(minors.iter().enumerate().all(|(i, d)| if i % 2 == 0 { d.is_negative() } else { d.is_positive() }))
}

/// Where the next blow-up of an exceptional sequence is centred.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ChainChoice {
    /// The point where the strict transform meets the newest exceptional curve.
    Newest,
    /// The other point of the strict transform on the exceptional locus.
    Other,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExceptionalSequence {
    pub config: CurveConfig,
    /// Id of the strict transform of the nodal curve.
    pub strict_transform: u32,
    /// Exceptional curves, newest first.
    pub exceptional: Vec<u32>,
}

/// Blows up the node of a link with `C² = n`, then blows up once per choice
/// at a point of the strict transform on the exceptional locus.
pub fn exceptional_sequence(n: i64, choices: &[ChainChoice]) -> Result<ExceptionalSequence, BlowupError> {
    if n < 1 {
        return Err(BlowupError::InvalidN(n));
    }
    let lambda = classify_lambda(n as u32).map_err(|_| BlowupError::InvalidN(n))?.roots.0;
    let mut cfg = CurveConfig::link(n, Some(lambda));
    let node = cfg.crossings[0].point;
    let mut newest = cfg.next_curve_id();
    cfg = blow_up_config(&cfg, node)?;
    let mut exceptional = vec![newest];
    for choice in choices {
        let on_c: Vec<&Crossing> = cfg.crossings_of(1).collect();
        let pick = match choice {
            ChainChoice::Newest => on_c.iter().find(|x| x.involves(newest)),
            ChainChoice::Other => on_c.iter().find(|x| !x.involves(newest)).or_else(|| on_c.get(1)),
        };
        let point = pick.ok_or(BlowupError::UnknownPoint(0))?.point;
        newest = cfg.next_curve_id();
        cfg = blow_up_config(&cfg, point)?;
        exceptional.insert(0, newest);
    }
    Ok(ExceptionalSequence { config: cfg, strict_transform: 1, exceptional })
}

/// The exceptional chain over a link with `C² = n > 4`: `n - 3` curves
/// numbered `1..=n-3` with self-intersections `-1, -2, …, -2`, and the strict
/// transform `n - 2` with self-intersection 0.
pub fn build_exceptional_chain(n: i64) -> Result<CurveConfig, BlowupError> {
    if n <= 4 {
        return Err(BlowupError::InvalidN(n));
    }
    let seq = exceptional_sequence(n, &vec![ChainChoice::Newest; (n - 4) as usize])?;
    let mut map = BTreeMap::new();
    for (i, &e) in seq.exceptional.iter().enumerate() {
        map.insert(e, i as u32 + 1);
    }
    map.insert(seq.strict_transform, n as u32 - 2);
    let mut order: Vec<u32> = seq.exceptional.clone();
    order.push(seq.strict_transform);
    Ok(seq.config.restrict(&order)?.relabel(&map))
}
