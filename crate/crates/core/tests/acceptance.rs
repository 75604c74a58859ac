//! Acceptance run: one line per criterion, non-zero exit if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;

use nodal_core::blowup::{
    blow_down_config, blow_up_config, build_exceptional_chain, grauert_is_contractible, intersection_matrix, CurveConfig,
};
use nodal_core::constructions::{
    alpha, automorphism_order, beta, build_l, build_m, build_n, cs_sums, curve_permutation, gamma, lambda_condition,
    verify_model, FoliationModel, MonomialMap, Sign, ORDER_BOUND,
};
use nodal_core::exactnum::QuadraticNumber as QN;
use nodal_core::localfol::{classify_lambda, cs_node_index, LambdaKind};
use nodal_core::riccati::{
    corollary_set_contains, cycle_order, kl_cycle_feasible, not_riccati_witness, replay, Conclusion, CycleSpec,
};
use nodal_core::symalg::{pullback_form, wedge};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn q(text: &str) -> QN {
    text.parse().unwrap_or_else(|e| panic!("{text}: {e:?}"))
}

/// Smallest `k ≤ 12` with `z^k = 1`, by repeated multiplication.
fn order_by_powers(z: &QN) -> Option<u32> {
    let mut p = z.clone();
    for k in 1..=12 {
        if p.is_one() {
            return Some(k);
        }
        p = &p * z;
    }
    None
}

fn lambda_dictionary() -> Outcome {
    let expected: [(u32, [&str; 2], Option<u32>); 5] = [
        (1, ["(-1+sqrt(-3))/2", "(-1-sqrt(-3))/2"], Some(6)),
        (2, ["(0+sqrt(-1))/1", "(0-sqrt(-1))/1"], Some(4)),
        (3, ["(1+sqrt(-3))/2", "(1-sqrt(-3))/2"], Some(3)),
        (4, ["1", "1"], None),
        (5, ["(3+sqrt(5))/2", "(3-sqrt(5))/2"], None),
    ];
    for (n, roots, order) in expected {
        let c = classify_lambda(n).map_err(|e| format!("n={n}: {e:?}"))?;
        let got: BTreeSet<String> = [c.roots.0.to_string(), c.roots.1.to_string()].into();
        let want: BTreeSet<String> = roots.iter().map(|r| q(r).to_string()).collect();
        ensure(got == want, format!("n={n}: roots {got:?}"))?;
        for r in [&c.roots.0, &c.roots.1] {
            let quadratic = &(&(r * r) + &(r * &QN::int(2 - n as i64))) + &QN::one();
            ensure(quadratic.is_zero(), format!("n={n}: {r} is not a root"))?;
        }
        match (order, &c.kind) {
            (Some(k), LambdaKind::PrimitiveRoot { order }) => {
                ensure(*order == k, format!("n={n}: order {order}"))?;
                for r in [&c.roots.0, &c.roots.1] {
                    ensure(order_by_powers(&-r) == Some(k), format!("n={n}: -({r}) has another order"))?;
                }
            }
            (None, LambdaKind::Unit) if n == 4 => {}
            (None, LambdaKind::PositiveIrrational) if n == 5 => {
                let r = &c.roots.0;
                ensure(!r.is_rational() && r.radicand().is_some_and(|d| d > 0), "n=5: roots not real irrational")?;
                ensure(QN::rational(r.norm()).is_positive_rational() && QN::rational(r.trace()).is_positive_rational(), "n=5: roots not positive")?;
            }
            (_, k) => return Err(format!("n={n}: kind {k:?}")),
        }
    }
    Ok("n = 1..5 roots and kinds".into())
}

fn node_index() -> Outcome {
    for n in 1..=20u32 {
        let c = classify_lambda(n).map_err(|e| format!("{e:?}"))?;
        for r in [&c.roots.0, &c.roots.1] {
            let idx = cs_node_index(r).map_err(|e| format!("{e:?}"))?;
            ensure(idx == QN::int(n as i64), format!("n={n}: index {idx} at {r}"))?;
        }
    }
    Ok("index n at both roots for n = 1..20".into())
}

fn failing_claims(m: &FoliationModel) -> Vec<String> {
    let r = verify_model(m);
    r.claims.iter().filter(|c| !c.passed()).map(|c| format!("{}: {:?}", c.id, c.evidence)).collect()
}

/// `ω ∧ φ*ω = 0` in the base chart, computed without the verifier.
fn preserves_base_form(m: &FoliationModel, map: &MonomialMap) -> Result<(), String> {
    let base = m.base_chart();
    let phi = map.in_charts(base, base).ok_or("map undefined in base chart")?;
    let omega = &m.forms[&base.label];
    let pulled = pullback_form(&phi, omega).map_err(|e| format!("{e:?}"))?;
    ensure(wedge(omega, &pulled).map_err(|e| format!("{e:?}"))?.is_zero(), "wedge with pullback is nonzero")
}

fn sums_all(m: &FoliationModel, value: i64) -> Result<(), String> {
    let sums = cs_sums(m).map_err(|e| format!("{e:?}"))?;
    ensure(sums.len() == m.curves.len(), "missing sums")?;
    ensure(sums.values().all(|s| *s == QN::int(value)), format!("sums {sums:?}"))
}

fn is_single_cycle(perm: &std::collections::BTreeMap<u32, Option<u32>>) -> bool {
    let Some(&start) = perm.keys().next() else { return false };
    let mut seen = BTreeSet::new();
    let mut cur = start;
    while seen.insert(cur) {
        match perm.get(&cur) {
            Some(Some(next)) => cur = *next,
            _ => return false,
        }
    }
    cur == start && seen.len() == perm.len()
}

fn automorphism_checks(m: &FoliationModel, map: &MonomialMap, order: u32) -> Result<(), String> {
    let found = automorphism_order(map, m.base_chart(), ORDER_BOUND);
    ensure(found == Some(order), format!("order {found:?}"))?;
    preserves_base_form(m, map)?;
    ensure(is_single_cycle(&curve_permutation(m, map)), "curves not permuted cyclically")
}

fn model_l() -> Outcome {
    for sign in [Sign::Plus, Sign::Minus] {
        let m = build_l(sign).map_err(|e| format!("{e:?}"))?;
        let bad = failing_claims(&m);
        ensure(bad.is_empty(), format!("{sign:?}: {bad:?}"))?;
        let selfs: Vec<i64> = m.cycle.curves.iter().map(|c| c.self_intersection).collect();
        ensure(selfs == [1, 1, 1], format!("self-intersections {selfs:?}"))?;
        ensure(cycle_order(&m.cycle).is_some_and(|o| o.len() == 3), "not a 3-cycle")?;
        sums_all(&m, 1)?;
        automorphism_checks(&m, &gamma(), 3)?;
    }
    Ok("both signs: claims pass, sums 1, gamma of order 3".into())
}

fn model_m() -> Outcome {
    let m = build_m(Sign::Plus).map_err(|e| format!("{e:?}"))?;
    let bad = failing_claims(&m);
    ensure(bad.is_empty(), format!("{bad:?}"))?;
    let base = m.base_chart();
    let phi = beta().in_charts(base, base).ok_or("beta undefined")?;
    let pencil = m.pencil.as_ref().ok_or("no pencil")?;
    let cond = lambda_condition(pencil, &phi).ok_or("no condition")?;
    ensure(cond.coeffs == [QN::one(), QN::zero(), QN::one()], format!("coefficients {:?}", cond.coeffs))?;
    for l in [QN::i(), -&QN::i()] {
        ensure(cond.holds_at(&l).map_err(|e| format!("{e:?}"))?, format!("fails at {l}"))?;
    }
    for l in [QN::int(2), q("(1+sqrt(-3))/2"), QN::one(), QN::int(-1)] {
        ensure(!cond.holds_at(&l).map_err(|e| format!("{e:?}"))?, format!("holds at {l}"))?;
        let w = pencil.at(&l, &base.label).map_err(|e| format!("{e:?}"))?;
        let pulled = pullback_form(&phi, &w).map_err(|e| format!("{e:?}"))?;
        ensure(!wedge(&w, &pulled).map_err(|e| format!("{e:?}"))?.is_zero(), format!("beta preserves lambda = {l}"))?;
    }
    ensure(m.lambda == QN::i() || m.lambda == -&QN::i(), format!("lambda {}", m.lambda))?;
    automorphism_checks(&m, &beta(), 4)?;
    sums_all(&m, 0)?;
    Ok("claims pass, lambda^2 + 1 = 0, beta of order 4, sums 0".into())
}

fn contract(cfg: &CurveConfig, set: &[u32]) -> Result<(), String> {
    let mut c = cfg.clone();
    for &id in set {
        c = blow_down_config(&c, id).map_err(|e| format!("{id}: {e:?}"))?;
    }
    ensure(cycle_order(&c).is_some_and(|o| o.len() == 3), format!("{set:?}: not a 3-cycle"))?;
    ensure(c.curves.iter().all(|k| k.self_intersection == 1), format!("{set:?} leaves {c}"))
}

fn model_n() -> Outcome {
    let m = build_n().map_err(|e| format!("{e:?}"))?;
    let bad = failing_claims(&m);
    ensure(bad.is_empty(), format!("{bad:?}"))?;
    ensure(m.cycle.curves.len() == 6 && cycle_order(&m.cycle).is_some(), "not a 6-cycle")?;
    automorphism_checks(&m, &alpha(), 6)?;
    sums_all(&m, -1)?;
    contract(&m.cycle, &[1, 3, 5])?;
    contract(&m.cycle, &[2, 4, 6])?;
    Ok("claims pass, alpha of order 6, sums -1, both contractions give (+1)-triangles".into())
}

fn enumeration() -> Outcome {
    let mut feasible = BTreeSet::new();
    let mut checked = 0;
    for k in 2..=12u32 {
        for l in -3..=3i64 {
            let r = kl_cycle_feasible(CycleSpec { k, l }).map_err(|e| format!("({k},{l}): {e:?}"))?;
            replay(&r).map_err(|e| format!("({k},{l}) replay: {e:?}"))?;
            ensure(r.feasible == corollary_set_contains(k, l), format!("({k},{l}) disagrees with closed form"))?;
            if r.feasible {
                feasible.insert((k, l));
            }
            checked += 1;
        }
    }
    let mut expected: BTreeSet<(u32, i64)> = [(2, -1), (3, -1), (3, 1), (6, -1)].into();
    expected.extend((2..=12).step_by(2).map(|k| (k, 0)));
    ensure(feasible == expected, format!("feasible {feasible:?}"))?;
    Ok(format!("{checked} cycles replayed, {} feasible", feasible.len()))
}

fn not_riccati() -> Outcome {
    for n in 1..=3 {
        let r = not_riccati_witness(n).map_err(|e| format!("n={n}: {e:?}"))?;
        ensure(!r.feasible, format!("n={n}: feasible"))?;
        ensure(matches!(r.conclusion, Conclusion::NoFibreCandidate { .. }), format!("n={n}: {:?}", r.conclusion))?;
        replay(&r).map_err(|e| format!("n={n} replay: {e:?}"))?;
    }
    Ok("links n = 1..3 obstructed and replayed".into())
}

fn exceptional_chain() -> Outcome {
    for n in 1..=10i64 {
        let link = CurveConfig::link(n, None);
        let node = link.crossings[0].point;
        let e = link.next_curve_id();
        let up = blow_up_config(&link, node).map_err(|e| format!("{e:?}"))?;
        ensure(up.curve(1).map(|c| c.self_intersection) == Some(n - 4), format!("n={n}: strict transform"))?;
        ensure(up.curve(e).map(|c| c.self_intersection) == Some(-1), format!("n={n}: exceptional curve"))?;
    }
    for n in 5..=10i64 {
        let chain = build_exceptional_chain(n).map_err(|e| format!("{e:?}"))?;
        let ids: Vec<u32> = (1..=(n - 3) as u32).collect();
        let m = intersection_matrix(&chain.restrict(&ids).map_err(|e| format!("{e:?}"))?);
        ensure(m.ids == ids, format!("n={n}: ids {:?}", m.ids))?;
        let len = ids.len();
        let want: Vec<Vec<i64>> = (0..len)
            .map(|i| {
                (0..len)
                    .map(|j| match (i, j) {
                        (0, 0) => -1,
                        _ if i == j => -2,
                        _ if i.abs_diff(j) == 1 => 1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        ensure(m.entries == want, format!("n={n}: {:?}", m.entries))?;
        let strict = chain.curve(n as u32 - 2).map(|c| c.self_intersection);
        ensure(strict == Some(0), format!("n={n}: strict transform {strict:?}"))?;
        ensure(grauert_is_contractible(&m.entries).map_err(|e| format!("{e:?}"))?, format!("n={n}: not contractible"))?;
    }
    Ok("node blow-ups for n = 1..10, chains for n = 5..10".into())
}

fn grauert() -> Outcome {
    let mut exhaustive = 0;
    for n in 1..=3 {
        for m in common::all_symmetric(n) {
            let got = grauert_is_contractible(&m).map_err(|e| format!("{e:?}"))?;
            ensure(got == common::negative_definite_by_charpoly(&m), format!("{m:?}"))?;
            exhaustive += 1;
        }
    }
    common::run_seeded(600, common::symmetric4(), |m| {
        proptest::prop_assert_eq!(grauert_is_contractible(&m).unwrap(), common::negative_definite_by_charpoly(&m), "{:?}", m);
        Ok(())
    })?;
    Ok(format!("{exhaustive} matrices of size 1..3, 600 random of size 4"))
}

fn properties() -> Outcome {
    use common::*;
    use proptest::strategy::Strategy;
    let runs: [(&str, u32, Box<dyn Fn(u32) -> Result<(), String>>); 7] = [
        ("functoriality", 200, Box::new(|c| run_seeded(c, (map(), map(), form()), check_functoriality))),
        ("wedge", 200, Box::new(|c| run_seeded(c, (form(), form()), check_wedge_antisymmetry))),
        ("normalization", 200, Box::new(|c| run_seeded(c, (form(), poly(2, 3)), check_normalization))),
        ("blow-up round trip", 100, Box::new(|c| run_seeded(c, config_and_point(), check_blowup_round_trip))),
        ("flips", 50, Box::new(|c| run_seeded(c, riccati_form(), check_flip_decreases))),
        ("cremona", 100, Box::new(|c| run_seeded(c, (small_rational(), small_rational()).boxed(), check_cremona_involution))),
        ("gamma conjugation", 50, Box::new(|c| run_seeded(c, cyclic_entries(), check_gamma_conjugation))),
    ];
    let mut done = Vec::new();
    for (name, cases, run) in runs {
        run(cases).map_err(|e| format!("{name}: {e}"))?;
        done.push(format!("{name} {cases}"));
    }
    Ok(done.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("lambda dictionary", lambda_dictionary),
        ("node index", node_index),
        ("model L", model_l),
        ("model M", model_m),
        ("model N", model_n),
        ("cycle enumeration", enumeration),
        ("links are not Riccati", not_riccati),
        ("exceptional chain", exceptional_chain),
        ("Grauert criterion", grauert),
        ("properties", properties),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("[pass] {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
