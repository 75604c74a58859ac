use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::RiccatiError;
use crate::blowup::{blow_down_config, CurveConfig};

/// Curve ids of a cycle in cyclic order, starting from the smallest id and
/// continuing to its smaller neighbour. `None` unless every curve is smooth
/// and meets exactly two others once each (or, for two curves, each other
/// twice).
pub fn cycle_order(config: &CurveConfig) -> Option<Vec<u32>> {
    let ids = config.ids();
    if ids.len() < 2 || config.crossings.iter().any(|x| x.is_node()) {
        return None;
    }
    if ids.len() == 2 {
        let ok = config.crossings.len() == 2 && config.meets(ids[0], ids[1]) == 2;
        let mut ids = ids;
        ids.sort();
        return ok.then_some(ids);
    }
    if config.crossings.len() != ids.len() {
        return None;
    }
    for &id in &ids {
        let n = config.neighbours(id);
        if n.len() != 2 || n.iter().any(|&o| config.meets(id, o) != 1) {
            return None;
        }
    }
    let start = *ids.iter().min()?;
    let mut order = vec![start];
    let mut prev = start;
    let mut cur = config.neighbours(start)[0];
    while cur != start {
        order.push(cur);
        let n = config.neighbours(cur);
        let next = if n[0] == prev { n[1] } else { n[0] };
        prev = cur;
        cur = next;
        if order.len() > ids.len() {
            return None;
        }
    }
    (order.len() == ids.len()).then_some(order)
}

/// Whether the curves contract, by successive blow-downs of smooth rational
/// `(-1)`-curves, to one smooth rational curve of self-intersection 0.
pub fn contracts_to_fibre(config: &CurveConfig, ids: &[u32]) -> Result<bool, RiccatiError> {
    let sub = config.restrict(ids)?;
    let mut memo = HashMap::new();
    Ok(contract_search(&sub, &mut memo))
}

fn contract_search(c: &CurveConfig, memo: &mut HashMap<String, bool>) -> bool {
    let key = c.canonical().to_string();
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let done = match c.curves.as_slice() {
        [one] => one.rational && one.self_intersection == 0 && c.self_crossings(one.id) == 0,
        _ => false,
    };
    let ok = done
        || c.curves
            .iter()
            .filter(|k| k.self_intersection == -1)
            .any(|k| blow_down_config(c, k.id).is_ok_and(|d| contract_search(&d, memo)));
    memo.insert(key, ok);
    ok
}

fn is_connected(config: &CurveConfig, ids: &BTreeSet<u32>) -> bool {
    let Some(&first) = ids.iter().next() else { return false };
    let mut seen = BTreeSet::from([first]);
    let mut stack = vec![first];
    while let Some(v) = stack.pop() {
        for n in config.neighbours(v) {
            if ids.contains(&n) && seen.insert(n) {
                stack.push(n);
            }
        }
    }
    seen.len() == ids.len()
}

/// Whether `candidate` can be a fibre of a rational fibration for which the
/// cycle is made of invariant curves: contained in the cycle, connected,
/// disjoint from the regular fibre (if one is designated) and contractible
/// to a smooth rational 0-curve.
pub fn fibre_support_check(
    config: &CurveConfig,
    cycle: &[u32],
    candidate: &[u32],
    regular_fibre: Option<&[u32]>,
) -> Result<bool, RiccatiError> {
    let unknown: Vec<u32> = cycle
        .iter()
        .chain(candidate)
        .chain(regular_fibre.unwrap_or(&[]))
        .copied()
        .filter(|&id| config.curve(id).is_none())
        .collect();
    if !unknown.is_empty() {
        return Err(RiccatiError::UnknownIds(unknown));
    }
    let sub = config.restrict(cycle)?;
    if cycle_order(&sub).is_none() {
        return Err(RiccatiError::NotACycle(cycle.to_vec()));
    }
    let cand: BTreeSet<u32> = candidate.iter().copied().collect();
    let in_cycle: BTreeSet<u32> = cycle.iter().copied().collect();
    if cand.is_empty() || !cand.is_subset(&in_cycle) || cand.len() == in_cycle.len() || !is_connected(&sub, &cand) {
        return Ok(false);
    }
    if let Some(reg) = regular_fibre {
        let reg: BTreeSet<u32> = reg.iter().copied().collect();
        if reg != cand {
            let touches = cand.iter().any(|&c| reg.contains(&c) || reg.iter().any(|&r| config.meets(c, r) > 0));
            if touches {
                return Ok(false);
            }
        }
    }
    let ids: Vec<u32> = cand.into_iter().collect();
    contracts_to_fibre(config, &ids)
}

/// A choice of fibres through every crossing of a cycle, given one curve
/// of self-intersection 0 as a regular fibre.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibreCover {
    pub regular: u32,
    /// Further fibres, each an arc of the cycle.
    pub fibres: Vec<Vec<u32>>,
}

/// Looks for pairwise disjoint fibres, disjoint from `regular`, such that
/// every crossing of the cycle lies on `regular` or on one of them.
/// Fibres are arcs of the cycle; two arcs are disjoint only if at least one
/// curve separates them.
pub fn fibre_cover(config: &CurveConfig, regular: u32) -> Result<Option<FibreCover>, RiccatiError> {
    let order = cycle_order(config).ok_or_else(|| RiccatiError::NotACycle(config.ids()))?;
    let d = config.curve(regular).ok_or(RiccatiError::UnknownIds(vec![regular]))?;
    if d.self_intersection != 0 || !d.rational {
        return Ok(None);
    }
    let m = order.len();
    let pos = order.iter().position(|&c| c == regular).expect("in cycle");
    if m == 2 {
        return Ok(Some(FibreCover { regular, fibres: Vec::new() }));
    }
    if m == 3 {
        // the two other curves meet each other and both meet the regular fibre
        return Ok(None);
    }
    // curves not touching the regular fibre, in cyclic order; both ends must
    // be covered because their outer neighbours touch the regular fibre
    let path: Vec<u32> = (2..m - 1).map(|i| order[(pos + i) % m]).collect();
    let mut memo = HashMap::new();
    let mut arc_ok = HashMap::new();
    Ok(cover_from(config, &path, 0, &mut memo, &mut arc_ok)?.map(|fibres| FibreCover { regular, fibres }))
}

type Arcs = Option<Vec<Vec<u32>>>;

fn cover_from(
    config: &CurveConfig,
    path: &[u32],
    i: usize,
    memo: &mut HashMap<usize, Arcs>,
    arc_ok: &mut HashMap<(usize, usize), bool>,
) -> Result<Arcs, RiccatiError> {
    if i == path.len() {
        return Ok(Some(Vec::new()));
    }
    if let Some(v) = memo.get(&i) {
        return Ok(v.clone());
    }
    let mut found = None;
    for j in i..path.len() {
        // after an arc [i..=j], exactly one curve is skipped, unless it ends the path
        let next = if j + 1 == path.len() {
            path.len()
        } else if j + 2 < path.len() {
            j + 2
        } else {
            continue;
        };
        let ok = match arc_ok.get(&(i, j)) {
            Some(&v) => v,
            None => {
                let v = contracts_to_fibre(config, &path[i..=j])?;
                arc_ok.insert((i, j), v);
                v
            }
        };
        if !ok {
            continue;
        }
        if let Some(mut rest) = cover_from(config, path, next, memo, arc_ok)? {
            rest.insert(0, path[i..=j].to_vec());
            found = Some(rest);
            break;
        }
    }
    memo.insert(i, found.clone());
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_orders() {
        assert_eq!(cycle_order(&CurveConfig::cycle(4, 0)), Some(vec![1, 2, 3, 4]));
        assert_eq!(cycle_order(&CurveConfig::cycle(2, -1)), Some(vec![1, 2]));
        assert_eq!(cycle_order(&CurveConfig::chain(&[0, 0, 0])), None);
        assert_eq!(cycle_order(&CurveConfig::link(3, None)), None);
    }

    #[test]
    fn opposite_curve_of_a_square_is_a_fibre() {
        let c = CurveConfig::cycle(4, 0);
        let cyc = [1, 2, 3, 4];
        assert!(fibre_support_check(&c, &cyc, &[3], Some(&[1])).unwrap());
        assert!(!fibre_support_check(&c, &cyc, &[2], Some(&[1])).unwrap());
        assert!(!fibre_support_check(&c, &cyc, &[], Some(&[1])).unwrap());
        assert!(fibre_support_check(&c, &cyc, &[1], Some(&[1])).unwrap());
    }

    #[test]
    fn candidates_outside_the_cycle_fail() {
        let mut c = CurveConfig::cycle(4, 0);
        c.add_curve(5, 0, true);
        c.add_crossing(5, 3, None);
        assert!(!fibre_support_check(&c, &[1, 2, 3, 4], &[5], Some(&[1])).unwrap());
        assert!(!fibre_support_check(&c, &[1, 2, 3, 4], &[3, 5], Some(&[1])).unwrap());
        assert_eq!(
            fibre_support_check(&c, &[1, 2, 3, 4], &[9], None),
            Err(RiccatiError::UnknownIds(vec![9]))
        );
        assert!(matches!(fibre_support_check(&c, &[1, 2, 3], &[1], None), Err(RiccatiError::NotACycle(_))));
    }

    #[test]
    fn blown_up_fibres_contract() {
        let c = CurveConfig::cycle_with(&[-1, -1, 0, 5, 0]);
        assert!(contracts_to_fibre(&c, &[1, 2]).unwrap());
        assert!(!contracts_to_fibre(&c, &[1]).unwrap());
        assert!(!contracts_to_fibre(&c, &[3, 4]).unwrap());
        let chain = CurveConfig::chain(&[-2, -1, -2]);
        assert!(contracts_to_fibre(&chain, &[1, 2, 3]).unwrap());
    }

    #[test]
    fn covers_follow_parity() {
        for k in 2..=9u32 {
            let found = fibre_cover(&CurveConfig::cycle(k, 0), 1).unwrap();
            assert_eq!(found.is_some(), k % 2 == 0, "k = {k}");
        }
        let cover = fibre_cover(&CurveConfig::cycle(6, 0), 1).unwrap().unwrap();
        assert_eq!(cover.fibres, vec![vec![3], vec![5]]);
        // a blown-up square: the fibre through the far corners is the (-1, -1) pair
        let c = CurveConfig::cycle_with(&[-1, -1, -1, 0, 0]);
        assert_eq!(fibre_cover(&c, 4).unwrap().unwrap().fibres, vec![vec![1, 2]]);
    }
}
