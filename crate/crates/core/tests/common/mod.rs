//! Generators and checks shared by the property tests and the acceptance run.
#![allow(dead_code)]

use nodal_core::blowup::{blow_down_config, blow_up_config, CurveConfig};
use nodal_core::constructions::{conjugate_to_gamma, cremona, cyclic_matrix, det3, gamma_matrix, mat_mul, plane_charts};
use nodal_core::exactnum::QuadraticNumber as QN;
use nodal_core::riccati::{fibre_multiplicity, flip_fibre, RiccatiForm};
use nodal_core::symalg::{pullback_form, wedge, OneForm, Poly2, RationalFn2, RationalMap2, SymError, UniPoly};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub fn small_rational() -> impl Strategy<Value = QN> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| QN::frac(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = QN> {
    small_rational().prop_filter("nonzero", |q| !q.is_zero())
}

/// Up to `terms` monomials of total degree at most `deg`.
pub fn poly(deg: u32, terms: usize) -> impl Strategy<Value = Poly2> {
    prop::collection::vec(((0..=deg), (0..=deg), -3i64..=3), 0..=terms).prop_map(move |ts| {
        ts.into_iter()
            .filter(|(i, j, _)| i + j <= deg)
            .fold(Poly2::zero(), |acc, (i, j, c)| &acc + &Poly2::monomial(QN::int(c), i, j))
    })
}

pub fn form() -> impl Strategy<Value = OneForm> {
    (poly(2, 3), poly(2, 3)).prop_filter_map("nonzero form", |(a, b)| OneForm::new(a, b, "U").ok())
}

/// Dominant maps with numerators of degree at most 2 over a shared linear
/// or monomial denominator.
pub fn map() -> impl Strategy<Value = RationalMap2> {
    let den = prop_oneof![poly(1, 2), (0u32..=1, 0u32..=1).prop_map(|(i, j)| Poly2::monomial(QN::one(), i, j))];
    (poly(2, 3), poly(2, 3), den).prop_filter_map("dominant map", |(p, q, d)| {
        let d = if d.is_zero() { Poly2::one() } else { d };
        let phi = RationalMap2::new(RationalFn2::new(p, d.clone()), RationalFn2::new(q, d), "U", "U").ok()?;
        (!phi.jacobian_det().is_zero()).then_some(phi)
    })
}

pub fn check_functoriality((phi, psi, omega): (RationalMap2, RationalMap2, OneForm)) -> Result<(), TestCaseError> {
    let composite = phi.after(&psi).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let direct = pullback_form(&composite, &omega);
    let stepwise = pullback_form(&phi, &omega).and_then(|w| pullback_form(&psi, &w));
    match (direct, stepwise) {
        (Ok(a), Ok(b)) => prop_assert_eq!(a.normalized(), b.normalized()),
        (Err(SymError::IndeterminateForm), Err(SymError::IndeterminateForm)) => {}
        (a, b) => return Err(TestCaseError::fail(format!("{a:?} vs {b:?}"))),
    }
    Ok(())
}

pub fn check_wedge_antisymmetry((w1, w2): (OneForm, OneForm)) -> Result<(), TestCaseError> {
    let ab = wedge(&w1, &w2).unwrap();
    let ba = wedge(&w2, &w1).unwrap();
    prop_assert_eq!(&ab.coeff, &-&ba.coeff);
    prop_assert!(wedge(&w1, &w1).unwrap().is_zero());
    Ok(())
}

pub fn check_normalization((w, u): (OneForm, Poly2)) -> Result<(), TestCaseError> {
    let n = w.normalized();
    prop_assert_eq!(&n.normalized(), &n);
    if !u.is_zero() {
        prop_assert_eq!(&w.scale_by(&u).unwrap().normalized(), &n);
    }
    Ok(())
}

/// Cycles, chains and links with small self-intersections, some crossings
/// annotated, some marked smooth points, and a chosen point to blow up.
pub fn config_and_point() -> impl Strategy<Value = (CurveConfig, u32)> {
    let shape = prop_oneof![
        prop::collection::vec(-3i64..=3, 2..=6).prop_map(|s| CurveConfig::cycle_with(&s)),
        prop::collection::vec(-3i64..=3, 1..=5).prop_map(|s| CurveConfig::chain(&s)),
        (1i64..=6).prop_map(|n| CurveConfig::link(n, None)),
    ];
    let lambda = prop::option::of(nonzero_rational().prop_filter("not one", |q| !q.is_one()));
    (shape, prop::collection::vec(lambda, 6), prop::collection::vec(any::<prop::sample::Index>(), 0..=2), any::<prop::sample::Index>())
        .prop_map(|(mut cfg, lambdas, marks, pick)| {
            for (x, l) in cfg.crossings.iter_mut().zip(lambdas) {
                x.lambda = l;
            }
            let ids = cfg.ids();
            for m in &marks {
                cfg.add_mark(ids[m.index(ids.len())]);
            }
            if cfg.points().is_empty() {
                cfg.add_mark(ids[0]);
            }
            let points = cfg.points();
            let p = points[pick.index(points.len())];
            (cfg, p)
        })
}

pub fn check_blowup_round_trip((cfg, point): (CurveConfig, u32)) -> Result<(), TestCaseError> {
    let e = cfg.next_curve_id();
    let up = blow_up_config(&cfg, point).unwrap();
    prop_assert_eq!(up.curve(e).unwrap().self_intersection, -1);
    let down = blow_down_config(&up, e).unwrap();
    prop_assert!(down.same_up_to_points(&cfg), "{} became {}", cfg, down);
    Ok(())
}

fn unipoly(deg: usize) -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(small_rational(), deg + 1).prop_map(UniPoly::from_coeffs)
}

/// `(a y² + b y + c) dx + h dy` meeting the flip preconditions at a fibre of
/// multiplicity `k ≥ 2`.
pub fn riccati_form() -> impl Strategy<Value = (RiccatiForm, u32)> {
    (2usize..=5, nonzero_rational(), unipoly(2), unipoly(2), unipoly(2), nonzero_rational(), unipoly(2)).prop_map(
        |(k, a0, a_rest, b_rest, c_rest, u0, u_rest)| {
            let with_const = |c: QN, rest: &UniPoly| UniPoly::from_coeffs(vec![c]).add(&rest.mul(&UniPoly::x()));
            let a = with_const(a0, &a_rest);
            let b = b_rest.mul(&UniPoly::x());
            let c = c_rest.mul(&UniPoly::monomial(QN::one(), 2));
            let h = with_const(u0, &u_rest).mul(&UniPoly::monomial(QN::one(), k));
            (RiccatiForm::new(a, b, c, h).unwrap(), k as u32)
        },
    )
}

pub fn check_flip_decreases((r, k): (RiccatiForm, u32)) -> Result<(), TestCaseError> {
    prop_assert_eq!(fibre_multiplicity(&r).unwrap(), k);
    let flipped = flip_fibre(&r).unwrap();
    let after = fibre_multiplicity(&flipped).unwrap_or(0);
    prop_assert!(after < k, "{} -> {}", k, after);
    Ok(())
}

pub fn check_cremona_involution((s, t): (QN, QN)) -> Result<(), TestCaseError> {
    let f = cremona();
    for chart in plane_charts() {
        prop_assert!(f.after(&f).in_charts(&chart, &chart).unwrap().is_identity());
        let g = f.in_charts(&chart, &chart).unwrap();
        let step = |x: &QN, y: &QN| -> Option<(QN, QN)> {
            Some((g.fx.eval(x, y).ok()??, g.fy.eval(x, y).ok()??))
        };
        if let Some((u, v)) = step(&s, &t) {
            if let Some(back) = step(&u, &v) {
                prop_assert_eq!(back, (s.clone(), t.clone()));
            }
        }
    }
    Ok(())
}

/// `(x, y, c)` for `J = cyclic(x, y, c³/(x y))`.
pub fn cyclic_entries() -> impl Strategy<Value = (QN, QN, QN)> {
    (nonzero_rational(), nonzero_rational(), nonzero_rational())
}

pub fn check_gamma_conjugation((x, y, c): (QN, QN, QN)) -> Result<(), TestCaseError> {
    let z = &c.pow(3) / &(&x * &y);
    let j = cyclic_matrix(&x, &y, &z);
    let a = conjugate_to_gamma(&j).unwrap();
    prop_assert!(!det3(&a).unwrap().is_zero());
    let lhs = mat_mul(&a, &j).unwrap();
    let rhs = mat_mul(&gamma_matrix(), &a).unwrap();
    for r in 0..3 {
        for s in 0..3 {
            prop_assert_eq!(&lhs[r][s], &(&c * &rhs[r][s]));
        }
    }
    Ok(())
}

/// Runs `check` on `cases` inputs from a fixed seed.
pub fn run_seeded<S: Strategy>(
    cases: u32,
    strategy: S,
    check: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, check).map_err(|e| e.to_string())
}

/// Negative definiteness read off the characteristic polynomial: all
/// coefficients of `det(tI - M)` are positive. Coefficient `k` is `(-1)^k`
/// times the sum of the `k × k` principal minors.
pub fn negative_definite_by_charpoly(m: &[Vec<i64>]) -> bool {
    let n = m.len();
    let mut sums = vec![0i128; n + 1];
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sub: Vec<Vec<i128>> = idx.iter().map(|&i| idx.iter().map(|&j| m[i][j] as i128).collect()).collect();
        sums[idx.len()] += laplace(&sub);
    }
    (1..=n).all(|k| if k % 2 == 0 { sums[k] > 0 } else { sums[k] < 0 })
}

fn laplace(m: &[Vec<i128>]) -> i128 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..].iter().map(|r| [&r[..j], &r[j + 1..]].concat()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * laplace(&minor)
        })
        .sum()
}

/// Every symmetric matrix of the given size with entries in `[-3, 3]`.
pub fn all_symmetric(n: usize) -> Vec<Vec<Vec<i64>>> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let total = 7usize.pow(slots.len() as u32);
    (0..total)
        .map(|mut code| {
            let mut m = vec![vec![0; n]; n];
            for &(i, j) in &slots {
                let v = (code % 7) as i64 - 3;
                code /= 7;
                m[i][j] = v;
                m[j][i] = v;
            }
            m
        })
        .collect()
}

/// Symmetric 4 × 4 matrices with entries in `[-3, 3]`; half of them have a
/// negative diagonal so both verdicts occur.
pub fn symmetric4() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (prop::collection::vec(-3i64..=3, 10), any::<bool>()).prop_map(|(v, negative_diagonal)| {
        let mut m = vec![vec![0; 4]; 4];
        let mut it = v.into_iter();
        for i in 0..4 {
            for j in i..4 {
                let mut e = it.next().unwrap();
                if i == j && negative_diagonal {
                    e = -e.abs().max(1);
                }
                m[i][j] = e;
                m[j][i] = e;
            }
        }
        m
    })
}
