use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::fibre::{contracts_to_fibre, cycle_order, fibre_cover, fibre_support_check, FibreCover};
use super::RiccatiError;
use crate::blowup::{blow_down_config, blow_up_config, CurveConfig};
use crate::localfol::classify_lambda;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleSpec {
    pub k: u32,
    pub l: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Move {
    BlowUp { point: u32 },
    BlowDown { curve: u32 },
}

impl Move {
    fn apply(&self, c: &CurveConfig) -> Result<CurveConfig, RiccatiError> {
        Ok(match *self {
            Move::BlowUp { point } => blow_up_config(c, point)?,
            Move::BlowDown { curve } => blow_down_config(c, curve)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    #[serde(flatten)]
    pub step: Move,
    pub before: String,
    pub after: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Conclusion {
    /// Witness: a 0-curve of the final cycle with fibres through every crossing.
    FibreCover { cover: FibreCover },
    /// Witness: the final configuration is a link with `C² = n ∈ {1, 2, 3}`,
    /// realized by the model foliations.
    KnownLink { n: i64 },
    /// Obstruction: no fibres through the crossings are compatible with the
    /// regular fibre `regular`.
    NoFibreCover { regular: u32 },
    /// Obstruction: no move applies and no curve has self-intersection 0.
    NoZeroCurve,
    /// Obstruction: no sub-curve of the cycle can be a fibre.
    NoFibreCandidate { candidates: Vec<Vec<u32>> },
    /// Neither: the depth bound was reached without a witness.
    SearchExhausted,
}

impl Conclusion {
    pub fn is_witness(&self) -> bool {
        matches!(self, Conclusion::FibreCover { .. } | Conclusion::KnownLink { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<CycleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link: Option<i64>,
    pub feasible: bool,
    /// Text form of the starting configuration.
    #[serde(serialize_with = "display", deserialize_with = "parsed")]
    pub start: CurveConfig,
    pub trace: Vec<TraceStep>,
    pub conclusion: Conclusion,
    pub depth_bound: usize,
    pub explored: usize,
}

fn parsed<'de, D: serde::Deserializer<'de>>(d: D) -> Result<CurveConfig, D::Error> {
    let text = String::deserialize(d)?;
    text.parse().map_err(serde::de::Error::custom)
}

fn display<S: serde::Serializer, T: std::fmt::Display>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// `(k, l) ∈ {(2,−1), (3,−1), (3,1), (6,−1)} ∪ {(2m, 0)}`.
pub fn corollary_set_contains(k: u32, l: i64) -> bool {
    matches!((k, l), (2, -1) | (3, -1) | (3, 1) | (6, -1)) || (l == 0 && k >= 2 && k % 2 == 0)
}

pub fn search_depth_bound(spec: CycleSpec) -> usize {
    2 * (spec.k as usize + spec.l.unsigned_abs() as usize + 4)
}

fn state_key(c: &CurveConfig) -> String {
    if c.is_link() {
        return format!("L{}", c.curves[0].self_intersection);
    }
    let Some(order) = cycle_order(c) else { return format!("X{}", c.canonical()) };
    let selfs: Vec<i64> = order.iter().map(|&id| c.curve(id).expect("listed").self_intersection).collect();
    let m = selfs.len();
    let mut best: Option<Vec<i64>> = None;
    for r in 0..m {
        for dir in [1isize, -1] {
            let s: Vec<i64> = (0..m as isize).map(|i| selfs[(r as isize + dir * i).rem_euclid(m as isize) as usize]).collect();
            if best.as_ref().is_none_or(|b| s < *b) {
                best = Some(s);
            }
        }
    }
    format!("C{:?}", best.expect("nonempty"))
}

/// Blow-downs of `(-1)`-curves, then blow-ups of crossings with a positive
/// side, in a fixed order.
fn moves(c: &CurveConfig, order: &[u32]) -> Vec<Move> {
    let mut out: Vec<Move> = order
        .iter()
        .filter(|&&id| c.curve(id).is_some_and(|k| k.self_intersection == -1))
        .map(|&curve| Move::BlowDown { curve })
        .collect();
    let mut points: Vec<u32> = c
        .crossings
        .iter()
        .filter(|x| {
            [x.a, x.b].iter().any(|&id| c.curve(id).is_some_and(|k| k.self_intersection > 0))
        })
        .map(|x| x.point)
        .collect();
    points.sort();
    points.dedup();
    out.extend(points.into_iter().map(|point| Move::BlowUp { point }));
    out
}

fn build_trace(start: &CurveConfig, path: &[Move]) -> Result<(Vec<TraceStep>, CurveConfig), RiccatiError> {
    let mut cur = start.clone();
    let mut trace = Vec::with_capacity(path.len());
    for mv in path {
        let next = mv.apply(&cur)?;
        trace.push(TraceStep { step: *mv, before: cur.hash(), after: next.hash() });
        cur = next;
    }
    Ok((trace, cur))
}

/// Breadth-first surgery search from a `(k, l)`-cycle. Every configuration
/// reached is tested: a 0-curve with no fibre cover refutes the cycle; a
/// 0-curve with a cover, or a link with `C² ∈ {1, 2, 3}`, is a witness. The
/// cycle is feasible when a witness is found and nothing is refuted within
/// the depth bound.
pub fn kl_cycle_feasible(spec: CycleSpec) -> Result<FeasibilityReport, RiccatiError> {
    if spec.k < 2 {
        return Err(RiccatiError::InvalidSpec(spec.k));
    }
    let start = CurveConfig::cycle(spec.k, spec.l);
    let bound = search_depth_bound(spec);
    let mut queue: VecDeque<(CurveConfig, Vec<Move>)> = VecDeque::from([(start.clone(), Vec::new())]);
    let mut seen: HashSet<String> = HashSet::from([state_key(&start)]);
    let mut witness: Option<(Vec<Move>, Conclusion)> = None;
    let mut explored = 0;
    let mut any_move = false;

    let finish = |path: &[Move], conclusion: Conclusion, explored: usize| -> Result<FeasibilityReport, RiccatiError> {
        let (trace, _) = build_trace(&start, path)?;
        Ok(FeasibilityReport {
            spec: Some(spec),
            link: None,
            feasible: conclusion.is_witness(),
            start: start.clone(),
            trace,
            conclusion,
            depth_bound: bound,
            explored,
        })
    };

    while let Some((cfg, path)) = queue.pop_front() {
        explored += 1;
        if cfg.is_link() {
            let n = cfg.curves[0].self_intersection;
            if (1..=3).contains(&n) && witness.is_none() {
                witness = Some((path.clone(), Conclusion::KnownLink { n }));
            }
            continue;
        }
        let Some(order) = cycle_order(&cfg) else { continue };
        for &d in &order {
            if cfg.curve(d).expect("listed").self_intersection != 0 {
                continue;
            }
            match fibre_cover(&cfg, d)? {
                Some(cover) => {
                    if witness.is_none() {
                        witness = Some((path.clone(), Conclusion::FibreCover { cover }));
                    }
                }
                None => return finish(&path, Conclusion::NoFibreCover { regular: d }, explored),
            }
        }
        if path.len() >= bound {
            continue;
        }
        for mv in moves(&cfg, &order) {
            any_move = true;
            let next = mv.apply(&cfg)?;
            if seen.insert(state_key(&next)) {
                let mut p = path.clone();
                p.push(mv);
                queue.push_back((next, p));
            }
        }
    }
    match witness {
        Some((path, c)) => finish(&path, c, explored),
        None if !any_move => finish(&[], Conclusion::NoZeroCurve, explored),
        None => finish(&[], Conclusion::SearchExhausted, explored),
    }
}

fn connected_proper_subsets(config: &CurveConfig, order: &[u32]) -> Vec<Vec<u32>> {
    let m = order.len();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << m) - 1 {
        let ids: Vec<u32> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| order[i]).collect();
        let set: BTreeSet<u32> = ids.iter().copied().collect();
        let mut seen = BTreeSet::from([ids[0]]);
        let mut stack = vec![ids[0]];
        while let Some(v) = stack.pop() {
            for n in config.neighbours(v) {
                if set.contains(&n) && seen.insert(n) {
                    stack.push(n);
                }
            }
        }
        if seen.len() == ids.len() {
            out.push(ids);
        }
    }
    out
}

/// For the link with `C² = n ∈ {1, 2, 3}`: blow up the node and show that
/// no sub-curve of the resulting cycle can be a fibre.
pub fn not_riccati_witness(n: i64) -> Result<FeasibilityReport, RiccatiError> {
    if !(1..=3).contains(&n) {
        return Err(RiccatiError::InvalidLink(n));
    }
    let lambda = classify_lambda(n as u32).map_err(|_| RiccatiError::InvalidLink(n))?.roots.0;
    let start = CurveConfig::link(n, Some(lambda));
    let path = [Move::BlowUp { point: start.crossings[0].point }];
    let (trace, cfg) = build_trace(&start, &path)?;
    let order = cycle_order(&cfg).ok_or_else(|| RiccatiError::NotACycle(cfg.ids()))?;
    let candidates = connected_proper_subsets(&cfg, &order);
    for cand in &candidates {
        if fibre_support_check(&cfg, &order, cand, None)? {
            return Err(RiccatiError::PreconditionFailed(format!("{cand:?} could be a fibre")));
        }
    }
    Ok(FeasibilityReport {
        spec: None,
        link: Some(n),
        feasible: false,
        start,
        trace,
        conclusion: Conclusion::NoFibreCandidate { candidates },
        depth_bound: 1,
        explored: 1,
    })
}

/// Brute force over all sets of curves: can the crossings be covered by
/// disjoint fibres away from `regular`?
fn cover_exists_brute(config: &CurveConfig, order: &[u32], regular: u32) -> Result<bool, RiccatiError> {
    let others: Vec<u32> = order.iter().copied().filter(|&c| c != regular && config.meets(c, regular) == 0).collect();
    for mask in 0u64..(1u64 << others.len()) {
        let chosen: BTreeSet<u32> = (0..others.len()).filter(|i| mask >> i & 1 == 1).map(|i| others[i]).collect();
        let covered = config
            .crossings
            .iter()
            .all(|x| x.involves(regular) || chosen.contains(&x.a) || chosen.contains(&x.b));
        if !covered {
            continue;
        }
        // components of the chosen set are the fibres
        let mut left = chosen.clone();
        let mut ok = true;
        while let Some(&first) = left.iter().next() {
            let mut comp = BTreeSet::from([first]);
            let mut stack = vec![first];
            while let Some(v) = stack.pop() {
                for n in config.neighbours(v) {
                    if chosen.contains(&n) && comp.insert(n) {
                        stack.push(n);
                    }
                }
            }
            left.retain(|c| !comp.contains(c));
            let ids: Vec<u32> = comp.into_iter().collect();
            if !contracts_to_fibre(config, &ids)? {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Re-executes a report: every step through the blow-up operations with
/// matching hashes, then an independent check of the conclusion.
pub fn replay(report: &FeasibilityReport) -> Result<(), RiccatiError> {
    let err = |step: usize, msg: String| RiccatiError::Replay { step, msg };
    let expected_start = match (report.spec, report.link) {
        (Some(s), None) => CurveConfig::cycle(s.k, s.l),
        (None, Some(n)) => {
            let lambda = classify_lambda(n as u32).map_err(|_| RiccatiError::InvalidLink(n))?.roots.0;
            CurveConfig::link(n, Some(lambda))
        }
        _ => return Err(err(0, "report names neither a cycle nor a link".into())),
    };
    if expected_start != report.start {
        return Err(err(0, "unexpected starting configuration".into()));
    }
    let mut cur = report.start.clone();
    for (i, s) in report.trace.iter().enumerate() {
        if cur.hash() != s.before {
            return Err(err(i + 1, "hash mismatch before step".into()));
        }
        cur = s.step.apply(&cur)?;
        if cur.hash() != s.after {
            return Err(err(i + 1, "hash mismatch after step".into()));
        }
    }
    let end = report.trace.len() + 1;
    let fail = |msg: &str| Err(err(end, msg.into()));
    match &report.conclusion {
        Conclusion::KnownLink { n } => {
            if !(cur.is_link() && cur.curves[0].self_intersection == *n && (1..=3).contains(n)) {
                return fail("final configuration is not a known link");
            }
        }
        Conclusion::FibreCover { cover } => {
            let order = cycle_order(&cur).ok_or_else(|| err(end, "final configuration is not a cycle".into()))?;
            if cur.curve(cover.regular).is_none_or(|c| c.self_intersection != 0) {
                return fail("regular fibre is not a 0-curve");
            }
            let mut used = BTreeSet::from([cover.regular]);
            for f in &cover.fibres {
                if !fibre_support_check(&cur, &order, f, Some(&[cover.regular]))? {
                    return fail("a listed fibre fails the support check");
                }
                for &c in f {
                    if used.iter().any(|&u| u == c || (!f.contains(&u) && cur.meets(u, c) > 0)) {
                        return fail("fibres are not disjoint");
                    }
                }
                used.extend(f.iter().copied());
            }
            if !cur.crossings.iter().all(|x| used.contains(&x.a) || used.contains(&x.b)) {
                return fail("a crossing lies on no fibre");
            }
        }
        Conclusion::NoFibreCover { regular } => {
            let order = cycle_order(&cur).ok_or_else(|| err(end, "final configuration is not a cycle".into()))?;
            if cur.curve(*regular).is_none_or(|c| c.self_intersection != 0) {
                return fail("regular fibre is not a 0-curve");
            }
            if cover_exists_brute(&cur, &order, *regular)? {
                return fail("a fibre cover exists");
            }
        }
        Conclusion::NoZeroCurve => {
            let order = cycle_order(&cur).ok_or_else(|| err(end, "final configuration is not a cycle".into()))?;
            if cur.curves.iter().any(|c| c.self_intersection == 0) || !moves(&cur, &order).is_empty() {
                return fail("a 0-curve or a move is available");
            }
        }
        Conclusion::NoFibreCandidate { candidates } => {
            let order = cycle_order(&cur).ok_or_else(|| err(end, "final configuration is not a cycle".into()))?;
            if *candidates != connected_proper_subsets(&cur, &order) {
                return fail("candidate list is not exhaustive");
            }
            for c in candidates {
                if fibre_support_check(&cur, &order, c, None)? {
                    return fail("a candidate can be a fibre");
                }
            }
        }
        Conclusion::SearchExhausted => {}
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(k: u32, l: i64) -> FeasibilityReport {
        kl_cycle_feasible(CycleSpec { k, l }).unwrap()
    }

    #[test]
    fn two_one_is_obstructed() {
        let r = run(2, 1);
        assert!(!r.feasible);
        assert!(matches!(r.conclusion, Conclusion::NoFibreCover { .. }));
        assert_eq!(r.trace.len(), 1);
        replay(&r).unwrap();
    }

    #[test]
    fn odd_zero_cycles_fail_by_parity() {
        let r = run(3, 0);
        assert!(!r.feasible);
        assert!(r.trace.is_empty());
        assert_eq!(r.conclusion, Conclusion::NoFibreCover { regular: 1 });
        replay(&r).unwrap();
    }

    #[test]
    fn six_minus_one_has_a_witness() {
        let r = run(6, -1);
        assert!(r.feasible);
        assert!(r.conclusion.is_witness());
        replay(&r).unwrap();
    }

    #[test]
    fn very_negative_cycles_have_no_moves() {
        let r = run(4, -2);
        assert!(!r.feasible);
        assert_eq!(r.conclusion, Conclusion::NoZeroCurve);
        replay(&r).unwrap();
    }

    #[test]
    fn small_grid_matches_the_closed_form() {
        for k in 2..=7 {
            for l in -2..=2 {
                let r = run(k, l);
                assert_eq!(r.feasible, corollary_set_contains(k, l), "({k},{l})");
                replay(&r).unwrap();
            }
        }
    }

    #[test]
    fn tampered_traces_are_rejected() {
        let mut r = run(2, 1);
        r.trace[0].after = "0".repeat(64);
        assert!(matches!(replay(&r), Err(RiccatiError::Replay { step: 1, .. })));
        let mut r = run(3, 0);
        r.conclusion = Conclusion::NoFibreCover { regular: 2 };
        replay(&r).unwrap();
        let mut r = run(4, 0);
        r.conclusion = Conclusion::NoFibreCover { regular: 1 };
        assert!(replay(&r).is_err());
    }

    #[test]
    fn links_are_not_riccati() {
        for n in 1..=3 {
            let r = not_riccati_witness(n).unwrap();
            assert!(!r.feasible);
            assert_eq!(r.conclusion, Conclusion::NoFibreCandidate { candidates: vec![vec![1], vec![2]] });
            replay(&r).unwrap();
        }
        assert_eq!(not_riccati_witness(4).unwrap_err(), RiccatiError::InvalidLink(4));
    }
}
