use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exactnum::QuadraticNumber as QN;
use crate::symalg::{Poly2, RationalFn2, RationalMap2};

/// An affine chart of a toric surface, described through homogeneous
/// coordinates `z1, z2, ...` (indices are 0-based in code).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chart {
    pub label: String,
    pub kind: ChartKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChartKind {
    /// `x = z[num[0]] / z[den[0]]`, `y = z[num[1]] / z[den[1]]`.
    Affine { dim: usize, num: [usize; 2], den: [usize; 2] },
    /// Chart 1 `(x, y) = (u, uv)` or chart 2 `(x, y) = (st, t)` of the
    /// blow-up of the origin of `base`.
    Blowup { base: Box<Chart>, second: bool },
}

impl Chart {
    pub fn affine(label: &str, dim: usize, num: [usize; 2], den: [usize; 2]) -> Self {
        Self { label: label.into(), kind: ChartKind::Affine { dim, num, den } }
    }

    pub fn blowup(base: &Chart, second: bool) -> Self {
        let label = format!("{}.{}", base.label, if second { 2 } else { 1 });
        Self { label, kind: ChartKind::Blowup { base: Box::new(base.clone()), second } }
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            ChartKind::Affine { dim, .. } => *dim,
            ChartKind::Blowup { base, .. } => base.dim(),
        }
    }

    /// Underlying affine chart of the toric surface.
    pub fn root(&self) -> &Chart {
        match &self.kind {
            ChartKind::Affine { .. } => self,
            ChartKind::Blowup { base, .. } => base.root(),
        }
    }

    /// The chart's own coordinates in terms of those of its base, if any.
    fn blowup_map(second: bool) -> (RationalFn2, RationalFn2) {
        let (x, y) = (RationalFn2::x(), RationalFn2::y());
        if second {
            (&x * &y, y)
        } else {
            (x.clone(), &x * &y)
        }
    }

    /// Homogeneous coordinates of the point with chart coordinates `(x, y)`.
    pub fn to_homog(&self) -> Vec<RationalFn2> {
        match &self.kind {
            ChartKind::Affine { dim, num, .. } => {
                let mut z = vec![RationalFn2::one(); *dim];
                z[num[0]] = RationalFn2::x();
                z[num[1]] = RationalFn2::y();
                z
            }
            ChartKind::Blowup { base, second } => {
                let (fx, fy) = Self::blowup_map(*second);
                base.to_homog().iter().map(|c| c.compose(&fx, &fy)).collect()
            }
        }
    }

    /// Chart coordinates of a generic point given homogeneously; `None`
    /// when the point lies off the chart.
    pub fn from_homog(&self, z: &[RationalFn2]) -> Option<(RationalFn2, RationalFn2)> {
        match &self.kind {
            ChartKind::Affine { num, den, .. } => {
                if z[den[0]].is_zero() || z[den[1]].is_zero() {
                    return None;
                }
                Some((&z[num[0]] / &z[den[0]], &z[num[1]] / &z[den[1]]))
            }
            ChartKind::Blowup { base, second } => {
                let (x, y) = base.from_homog(z)?;
                if *second {
                    (!y.is_zero()).then(|| (&x / &y, y))
                } else {
                    (!x.is_zero()).then(|| (x.clone(), &y / &x))
                }
            }
        }
    }

    /// Strict transform of the hyperplane `z[i] = 0` in this chart.
    pub fn hyperplane(&self, i: usize) -> Option<Poly2> {
        let eq = match &self.kind {
            ChartKind::Affine { .. } => self.to_homog()[i].as_poly()?.clone(),
            ChartKind::Blowup { base, second } => {
                let e = base.hyperplane(i)?;
                let (fx, fy) = Self::blowup_map(*second);
                let total = e.compose(fx.as_poly()?, fy.as_poly()?);
                if *second {
                    total.unshift(0, total.y_adic_order())
                } else {
                    total.unshift(total.x_adic_order(), 0)
                }
            }
        };
        (!eq.is_constant()).then(|| eq.monic())
    }

    /// The exceptional curve over the origin of the chart labelled `base`.
    pub fn exceptional(&self, base: &str) -> Option<Poly2> {
        match &self.kind {
            ChartKind::Blowup { base: b, second } if b.label == base => {
                Some(if *second { Poly2::y() } else { Poly2::x() })
            }
            _ => None,
        }
    }
}

/// Coordinate change from chart `a` to chart `b`, if they overlap.
pub fn transition(a: &Chart, b: &Chart) -> Option<RationalMap2> {
    let (fx, fy) = b.from_homog(&a.to_homog())?;
    RationalMap2::new(fx, fy, a.label.clone(), b.label.clone()).ok()
}

/// The three standard charts of the projective plane: `U3 = (z1/z3, z2/z3)`,
/// `U1 = (z2/z1, z3/z1)`, `U2 = (z1/z2, z3/z2)`.
pub fn plane_charts() -> Vec<Chart> {
    vec![
        Chart::affine("U3", 3, [0, 1], [2, 2]),
        Chart::affine("U1", 3, [1, 2], [0, 0]),
        Chart::affine("U2", 3, [0, 2], [1, 1]),
    ]
}

/// The four charts of `P1 x P1` with coordinates `(u:v, z:w)` stored as
/// `z1..z4`; `00` is `(u/v, z/w)` and `inf` marks an inverted factor.
pub fn quadric_charts() -> Vec<Chart> {
    vec![
        Chart::affine("00", 4, [0, 2], [1, 3]),
        Chart::affine("inf0", 4, [1, 2], [0, 3]),
        Chart::affine("0inf", 4, [0, 3], [1, 2]),
        Chart::affine("infinf", 4, [1, 3], [0, 2]),
    ]
}

/// The plane blown up at its three coordinate points, covered by the two
/// blow-up charts over each standard chart.
pub fn blown_up_plane_charts() -> Vec<Chart> {
    plane_charts().iter().flat_map(|c| [Chart::blowup(c, false), Chart::blowup(c, true)]).collect()
}

/// Map of homogeneous coordinates `z_i ↦ c_i · z^{e_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialMap {
    pub coeffs: Vec<QN>,
    pub exponents: Vec<Vec<u32>>,
}

impl MonomialMap {
    pub fn new(coeffs: Vec<QN>, exponents: Vec<Vec<u32>>) -> Self {
        assert_eq!(coeffs.len(), exponents.len());
        assert!(exponents.iter().all(|e| e.len() == coeffs.len()));
        Self { coeffs, exponents }
    }

    /// `z_i ↦ z_{perm[i]}`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let exponents = perm
            .iter()
            .map(|&j| (0..n).map(|k| u32::from(k == j)).collect())
            .collect();
        Self::new(vec![QN::one(); n], exponents)
    }

    pub fn identity(dim: usize) -> Self {
        Self::permutation(&(0..dim).collect::<Vec<_>>())
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn apply(&self, z: &[RationalFn2]) -> Vec<RationalFn2> {
        self.coeffs
            .iter()
            .zip(&self.exponents)
            .map(|(c, e)| {
                e.iter()
                    .zip(z)
                    .fold(RationalFn2::constant(c.clone()), |acc, (&k, zi)| &acc * &zi.pow(k))
            })
            .collect()
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &MonomialMap) -> MonomialMap {
        let n = self.dim();
        let mut coeffs = Vec::with_capacity(n);
        let mut exponents = Vec::with_capacity(n);
        for (c, e) in self.coeffs.iter().zip(&self.exponents) {
            let mut coeff = c.clone();
            let mut exp = vec![0u32; n];
            for (j, &k) in e.iter().enumerate() {
                coeff = coeff.try_mul(&inner.coeffs[j].pow(k)).expect("one field");
                for (slot, &g) in exp.iter_mut().zip(&inner.exponents[j]) {
                    *slot += k * g;
                }
            }
            coeffs.push(coeff);
            exponents.push(exp);
        }
        Self { coeffs, exponents }
    }

    /// Expression of the map from chart `a` to chart `b`.
    pub fn in_charts(&self, a: &Chart, b: &Chart) -> Option<RationalMap2> {
        let (fx, fy) = b.from_homog(&self.apply(&a.to_homog()))?;
        RationalMap2::new(fx, fy, a.label.clone(), b.label.clone()).ok()
    }
}

impl fmt::Display for MonomialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = |i: usize, n: usize| if n == 4 && i == 2 { ", " } else if i > 0 { ":" } else { "" };
        let n = self.dim();
        write!(f, "(")?;
        for i in 0..n {
            write!(f, "{}z{}", sep(i, n), i + 1)?;
        }
        write!(f, ") -> (")?;
        for (i, (c, e)) in self.coeffs.iter().zip(&self.exponents).enumerate() {
            let mut parts = Vec::new();
            if !c.is_one() {
                parts.push(format!("({c})"));
            }
            for (j, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => parts.push(format!("z{}", j + 1)),
                    _ => parts.push(format!("z{}^{k}", j + 1)),
                }
            }
            if parts.is_empty() {
                parts.push("1".into());
            }
            write!(f, "{}{}", sep(i, n), parts.join("*"))?;
        }
        write!(f, ")")
    }
}
