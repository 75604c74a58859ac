use super::charts::{quadric_charts, MonomialMap};
use super::models::beta;
use super::ConstructionError;
use crate::exactnum::{rational_cbrt, NumError, QuadraticNumber as QN};

/// Square matrix acting on column vectors of homogeneous coordinates.
pub type Matrix3 = [[QN; 3]; 3];

pub fn identity3() -> Matrix3 {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { QN::one() } else { QN::zero() }))
}

/// `(s:t:u) ↦ (u:s:t)`.
pub fn gamma_matrix() -> Matrix3 {
    cyclic_matrix(&QN::one(), &QN::one(), &QN::one())
}

/// `(s:t:u) ↦ (x u : y s : z t)`, which sends `p1 ↦ p2 ↦ p3 ↦ p1`.
pub fn cyclic_matrix(x: &QN, y: &QN, z: &QN) -> Matrix3 {
    let o = QN::zero;
    [[o(), o(), x.clone()], [y.clone(), o(), o()], [o(), z.clone(), o()]]
}

pub fn mat_mul(a: &Matrix3, b: &Matrix3) -> Result<Matrix3, NumError> {
    let mut out = identity3();
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut s = QN::zero();
            for k in 0..3 {
                s = s.try_add(&a[i][k].try_mul(&b[k][j])?)?;
            }
            *cell = s;
        }
    }
    Ok(out)
}

pub fn det3(a: &Matrix3) -> Result<QN, NumError> {
    let minor = |i: usize, j: usize, k: usize, l: usize| a[1][i].try_mul(&a[2][j])?.try_sub(&a[1][k].try_mul(&a[2][l])?);
    a[0][0]
        .try_mul(&minor(1, 2, 2, 1)?)?
        .try_sub(&a[0][1].try_mul(&minor(0, 2, 2, 0)?)?)?
        .try_add(&a[0][2].try_mul(&minor(0, 1, 1, 0)?)?)
}

/// `Some(c)` with `a = c·b` and `c ≠ 0`.
pub fn proportionality(a: &Matrix3, b: &Matrix3) -> Result<Option<QN>, NumError> {
    let pivot = (0..9).map(|k| (k / 3, k % 3)).find(|&(i, j)| !b[i][j].is_zero());
    let Some((i, j)) = pivot else { return Ok(None) };
    let c = a[i][j].try_div(&b[i][j])?;
    if c.is_zero() {
        return Ok(None);
    }
    for r in 0..3 {
        for s in 0..3 {
            if a[r][s] != c.try_mul(&b[r][s])? {
                return Ok(None);
            }
        }
    }
    Ok(Some(c))
}

fn row_times(v: &[QN; 3], m: &Matrix3) -> Result<[QN; 3], NumError> {
    let mut out: [QN; 3] = std::array::from_fn(|_| QN::zero());
    for (j, o) in out.iter_mut().enumerate() {
        for k in 0..3 {
            *o = o.try_add(&v[k].try_mul(&m[k][j])?)?;
        }
    }
    Ok(out)
}

fn cyclic_entries(j: &Matrix3) -> Result<(QN, QN, QN), ConstructionError> {
    let support = [(0, 2), (1, 0), (2, 1)];
    for r in 0..3 {
        for s in 0..3 {
            let on = support.contains(&(r, s));
            if on == j[r][s].is_zero() {
                return Err(ConstructionError::WrongShape(format!(
                    "entry ({r}, {s}) must be {}",
                    if on { "nonzero" } else { "zero" }
                )));
            }
        }
    }
    Ok((j[0][2].clone(), j[1][0].clone(), j[2][1].clone()))
}

/// Whether `A·J` is a nonzero multiple of `γ·A` with `A` invertible.
pub fn conjugates_to_gamma(a: &Matrix3, j: &Matrix3) -> Result<bool, NumError> {
    Ok(!det3(a)?.is_zero() && proportionality(&mat_mul(a, j)?, &mat_mul(&gamma_matrix(), a)?)?.is_some())
}

/// An invertible `A` with `A·J ∝ γ·A`, for `J` permuting the coordinate
/// points cyclically. Uses the first coordinate row as starting vector.
pub fn conjugate_to_gamma(j: &Matrix3) -> Result<Matrix3, ConstructionError> {
    conjugate_to_gamma_with(j, &[QN::one(), QN::zero(), QN::zero()])
}

/// Rescales `J` so that `J³ = 1` (this needs a cube root of `xyz`) and
/// takes the rows `a, a·J², a·J`.
pub fn conjugate_to_gamma_with(j: &Matrix3, a: &[QN; 3]) -> Result<Matrix3, ConstructionError> {
    let (x, y, z) = cyclic_entries(j)?;
    let product = x.try_mul(&y)?.try_mul(&z)?;
    let c = product
        .as_rational()
        .and_then(rational_cbrt)
        .map(QN::rational)
        .ok_or_else(|| ConstructionError::NoCubeRoot(product.clone()))?;
    let c_inv = c.inv()?;
    let mut unit = j.clone();
    for row in unit.iter_mut() {
        for e in row.iter_mut() {
            *e = e.try_mul(&c_inv)?;
        }
    }
    let a_j = row_times(a, &unit)?;
    let a_j2 = row_times(&a_j, &unit)?;
    let m = [a.clone(), a_j2, a_j];
    if det3(&m)?.is_zero() {
        return Err(ConstructionError::Singular);
    }
    if !conjugates_to_gamma(&m, j)? {
        return Err(ConstructionError::WrongShape("construction did not conjugate".into()));
    }
    Ok(m)
}

/// `(x, y) ↦ (A y, B / x)` with `A, B ≠ 0`.
pub fn beta_like(a: &QN, b: &QN) -> MonomialMap {
    MonomialMap { coeffs: vec![a.clone(), QN::one(), b.clone(), QN::one()], exponents: beta().exponents }
}

/// The scaling `(x, y) ↦ (p x, q y)`.
pub fn scaling(p: &QN, q: &QN) -> MonomialMap {
    MonomialMap { coeffs: vec![p.clone(), QN::one(), q.clone(), QN::one()], exponents: MonomialMap::identity(4).exponents }
}

/// Whether `g ∘ J ∘ g⁻¹ = β`, compared on the chart `00`.
pub fn conjugates_to_beta(g: &MonomialMap, g_inv: &MonomialMap, j: &MonomialMap) -> bool {
    let c = &quadric_charts()[0];
    let lhs = g.after(j).after(g_inv).in_charts(c, c);
    lhs.is_some() && lhs == beta().in_charts(c, c)
}

/// A scaling `g` with `g ∘ J ∘ g⁻¹ = β`, for `J` of the shape of `β`
/// (it sends the corners `(0,0) ↦ (0,∞) ↦ (∞,∞) ↦ (∞,0)` and swaps the
/// factors). Applies the plane recipe to each factor, which needs a square
/// root of `AB`.
pub fn conjugate_to_beta(j: &MonomialMap) -> Result<MonomialMap, ConstructionError> {
    if j.dim() != 4 || j.exponents != beta().exponents || j.coeffs.iter().any(QN::is_zero) {
        return Err(ConstructionError::WrongShape("expected (x, y) -> (A y, B / x)".into()));
    }
    let a = j.coeffs[0].try_div(&j.coeffs[1])?;
    let b = j.coeffs[2].try_div(&j.coeffs[3])?;
    let ab = a.try_mul(&b)?;
    let p = ab.inv()?.sqrt().ok_or_else(|| ConstructionError::NoSquareRoot(ab.clone()))?;
    let q = p.try_mul(&a)?;
    let g = scaling(&p, &q);
    let g_inv = scaling(&p.inv()?, &q.inv()?);
    if !conjugates_to_beta(&g, &g_inv, j) {
        return Err(ConstructionError::WrongShape("construction did not conjugate".into()));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> QN {
        QN::int(n)
    }

    #[test]
    fn gamma_conjugates_to_itself() {
        let a = conjugate_to_gamma(&gamma_matrix()).unwrap();
        assert_eq!(a, identity3());
    }

    #[test]
    fn scaled_cyclic_matrices() {
        let j = cyclic_matrix(&q(2), &q(3), &QN::frac(9, 2));
        let a = conjugate_to_gamma(&j).unwrap();
        assert!(conjugates_to_gamma(&a, &j).unwrap());
        let j = cyclic_matrix(&q(5), &q(5), &q(5));
        assert!(conjugates_to_gamma(&conjugate_to_gamma(&j).unwrap(), &j).unwrap());
        let free = [q(1), q(2), q(-1)];
        let a = conjugate_to_gamma_with(&j, &free).unwrap();
        assert_eq!(a[0], free);
    }

    #[test]
    fn bad_shapes() {
        let mut j = gamma_matrix();
        j[1][1] = q(1);
        assert!(matches!(conjugate_to_gamma(&j), Err(ConstructionError::WrongShape(_))));
        assert!(matches!(conjugate_to_gamma(&identity3()), Err(ConstructionError::WrongShape(_))));
        let j = cyclic_matrix(&q(2), &q(1), &q(1));
        assert_eq!(conjugate_to_gamma(&j), Err(ConstructionError::NoCubeRoot(q(2))));
        // a starting vector on an invariant line
        let ones = [q(1), q(1), q(1)];
        assert_eq!(conjugate_to_gamma_with(&gamma_matrix(), &ones), Err(ConstructionError::Singular));
    }

    #[test]
    fn beta_normal_form() {
        let g = conjugate_to_beta(&beta()).unwrap();
        assert_eq!(g, scaling(&q(1), &q(1)));
        let j = beta_like(&q(2), &q(8));
        let g = conjugate_to_beta(&j).unwrap();
        assert_eq!(g, scaling(&QN::frac(1, 4), &QN::frac(1, 2)));
        // leaving the rationals is fine, leaving a quadratic field is not
        let g = conjugate_to_beta(&beta_like(&q(2), &q(1))).unwrap();
        assert!(conjugates_to_beta(&g, &scaling(&g.coeffs[0].inv().unwrap(), &g.coeffs[2].inv().unwrap()), &beta_like(&q(2), &q(1))));
        let r3 = QN::sqrt_of(-3).unwrap();
        assert_eq!(conjugate_to_beta(&beta_like(&r3, &q(1))), Err(ConstructionError::NoSquareRoot(r3)));
        // an involution swapping the factors
        let swap = MonomialMap::permutation(&[2, 3, 0, 1]);
        assert!(matches!(conjugate_to_beta(&swap), Err(ConstructionError::WrongShape(_))));
    }
}
