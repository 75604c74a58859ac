use std::fmt;

use super::poly::Poly2;
use super::ratfn::{compose_poly, RationalFn2};
use super::SymError;
use crate::exactnum::QuadraticNumber as QN;

/// Polynomial 1-form `A dx + B dy` on a labeled affine chart, kept
/// primitive: when both are nonzero, `A` and `B` share no factor of
/// positive degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OneForm {
    a: Poly2,
    b: Poly2,
    chart: String,
}

impl OneForm {
    pub fn new(a: Poly2, b: Poly2, chart: impl Into<String>) -> Result<Self, SymError> {
        if a.is_zero() && b.is_zero() {
            return Err(SymError::ZeroForm);
        }
        a.check_compatible(&b)?;
        let g = a.gcd(&b);
        let (a, b) = if g.is_constant() {
            (a, b)
        } else {
            (a.div_exact(&g).expect("gcd divides"), b.div_exact(&g).expect("gcd divides"))
        };
        Ok(Self { a, b, chart: chart.into() })
    }

    /// `dx` or `dy` style constant forms are handy in tests.
    pub fn dx(chart: impl Into<String>) -> Self {
        Self { a: Poly2::one(), b: Poly2::zero(), chart: chart.into() }
    }

    pub fn dy(chart: impl Into<String>) -> Self {
        Self { a: Poly2::zero(), b: Poly2::one(), chart: chart.into() }
    }

    pub fn a(&self) -> &Poly2 {
        &self.a
    }

    pub fn b(&self) -> &Poly2 {
        &self.b
    }

    pub fn chart(&self) -> &str {
        &self.chart
    }

    pub fn with_chart(&self, chart: impl Into<String>) -> Self {
        Self { chart: chart.into(), ..self.clone() }
    }

    /// Canonical representative: primitive and scaled so that the
    /// lex-leading coefficient of `A` (or of `B` when `A = 0`) is 1.
    pub fn normalized(&self) -> Self {
        let lead = match self.a.leading() {
            Some((_, c)) => c.clone(),
            None => self.b.leading().expect("nonzero form").1.clone(),
        };
        let inv = lead.inv().expect("nonzero");
        Self { a: self.a.scale(&inv), b: self.b.scale(&inv), chart: self.chart.clone() }
    }

    pub fn scale_by(&self, u: &Poly2) -> Result<Self, SymError> {
        Self::new(&self.a * u, &self.b * u, self.chart.clone())
    }

    /// Same foliation: the wedge vanishes identically.
    pub fn is_proportional(&self, other: &OneForm) -> bool {
        (&(&self.a * &other.b) - &(&other.a * &self.b)).is_zero()
    }
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (false, true) => write!(f, "({})*dx", self.a),
            (true, false) => write!(f, "({})*dy", self.b),
            _ => write!(f, "({})*dx + ({})*dy", self.a, self.b),
        }
    }
}

impl fmt::Debug for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [{}]", self.chart)
    }
}

/// Coefficient of `dx ^ dy`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TwoForm {
    pub coeff: RationalFn2,
    pub chart: String,
}

impl TwoForm {
    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }
}

/// Rational map between labeled charts, `(x, y) -> (fx, fy)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMap2 {
    pub fx: RationalFn2,
    pub fy: RationalFn2,
    pub source: String,
    pub target: String,
}

impl RationalMap2 {
    pub fn new(
        fx: RationalFn2,
        fy: RationalFn2,
        source: impl Into<String>,
        target: impl Into<String>,
    ) -> Result<Self, SymError> {
        if fx.is_constant() && fy.is_constant() {
            return Err(SymError::ConstantMap);
        }
        Ok(Self { fx, fy, source: source.into(), target: target.into() })
    }

    pub fn identity(chart: impl Into<String>) -> Self {
        let c = chart.into();
        Self { fx: RationalFn2::x(), fy: RationalFn2::y(), source: c.clone(), target: c }
    }

    pub fn is_identity(&self) -> bool {
        self.fx == RationalFn2::x() && self.fy == RationalFn2::y()
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn after(&self, inner: &RationalMap2) -> Result<RationalMap2, SymError> {
        if inner.target != self.source {
            return Err(SymError::ChartMismatch {
                expected: self.source.clone(),
                found: inner.target.clone(),
            });
        }
        Ok(RationalMap2 {
            fx: self.fx.compose(&inner.fx, &inner.fy),
            fy: self.fy.compose(&inner.fx, &inner.fy),
            source: inner.source.clone(),
            target: self.target.clone(),
        })
    }

    /// Jacobian determinant as a rational function.
    pub fn jacobian_det(&self) -> RationalFn2 {
        &(&self.fx.partial_x() * &self.fy.partial_y()) - &(&self.fx.partial_y() * &self.fy.partial_x())
    }

    /// Pulls back a polynomial: `p ∘ self`.
    pub fn pull_poly(&self, p: &Poly2) -> RationalFn2 {
        compose_poly(p, &self.fx, &self.fy)
    }
}

impl fmt::Display for RationalMap2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.fx, self.fy)
    }
}

impl fmt::Debug for RationalMap2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [{} -> {}]", self.source, self.target)
    }
}

/// Chain-rule pullback of `a dx + b dy` without clearing denominators.
pub fn pullback_coefficients(
    phi: &RationalMap2,
    a: &RationalFn2,
    b: &RationalFn2,
) -> (RationalFn2, RationalFn2) {
    let a_phi = a.compose(&phi.fx, &phi.fy);
    let b_phi = b.compose(&phi.fx, &phi.fy);
    let (f1x, f1y) = (phi.fx.partial_x(), phi.fx.partial_y());
    let (f2x, f2y) = (phi.fy.partial_x(), phi.fy.partial_y());
    let cx = &(&a_phi * &f1x) + &(&b_phi * &f2x);
    let cy = &(&a_phi * &f1y) + &(&b_phi * &f2y);
    (cx, cy)
}

pub fn pullback_form(phi: &RationalMap2, omega: &OneForm) -> Result<OneForm, SymError> {
    if phi.target != omega.chart {
        return Err(SymError::ChartMismatch { expected: phi.target.clone(), found: omega.chart.clone() });
    }
    check_map_field(phi, omega)?;
    let (cx, cy) = pullback_coefficients(
        phi,
        &RationalFn2::from_poly(omega.a.clone()),
        &RationalFn2::from_poly(omega.b.clone()),
    );
    if cx.is_zero() && cy.is_zero() {
        return Err(SymError::IndeterminateForm);
    }
    // clear denominators: multiply through by den_x * den_y
    let a = cx.num() * cy.den();
    let b = cy.num() * cx.den();
    OneForm::new(a, b, phi.source.clone())
}

fn check_map_field(phi: &RationalMap2, omega: &OneForm) -> Result<(), SymError> {
    let fields = [phi.fx.field()?, phi.fy.field()?, omega.a.field()?, omega.b.field()?];
    let mut seen: Option<i64> = None;
    for d in fields.into_iter().flatten() {
        match seen {
            Some(s) if s != d => return Err(crate::exactnum::NumError::FieldMismatch(s, d).into()),
            _ => seen = Some(d),
        }
    }
    Ok(())
}

pub fn wedge(w1: &OneForm, w2: &OneForm) -> Result<TwoForm, SymError> {
    if w1.chart != w2.chart {
        return Err(SymError::ChartMismatch { expected: w1.chart.clone(), found: w2.chart.clone() });
    }
    w1.a.check_compatible(&w2.b)?;
    let c = &(&w1.a * &w2.b) - &(&w2.a * &w1.b);
    Ok(TwoForm { coeff: RationalFn2::from_poly(c), chart: w1.chart.clone() })
}

/// `f = 0` is invariant iff `f` divides `omega ^ df`.
pub fn curve_invariant(omega: &OneForm, f: &Poly2) -> bool {
    assert!(!f.is_zero(), "curve polynomial must be nonzero");
    let w = &(&omega.a * &f.partial_y()) - &(&omega.b * &f.partial_x());
    f.divides(&w)
}

/// Evaluates a polynomial form's coefficients at a point.
pub fn form_at(omega: &OneForm, x: &QN, y: &QN) -> Result<(QN, QN), SymError> {
    Ok((omega.a.eval(x, y)?, omega.b.eval(x, y)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lambda() -> QN {
        "(1+sqrt(-3))/2".parse().unwrap()
    }

    fn linear(l: &QN) -> OneForm {
        OneForm::new(Poly2::y().scale(l), -&Poly2::x(), "U").unwrap()
    }

    fn map(fx: RationalFn2, fy: RationalFn2) -> RationalMap2 {
        RationalMap2::new(fx, fy, "U", "U").unwrap()
    }

    #[test]
    fn cremona_pullback_preserves_linear_form() {
        let w = linear(&lambda());
        let f = map(RationalFn2::x().recip(), RationalFn2::y().recip());
        let pb = pullback_form(&f, &w).unwrap();
        assert!(pb.is_proportional(&w));
    }

    #[test]
    fn identity_pullback() {
        let w = linear(&lambda());
        assert_eq!(pullback_form(&RationalMap2::identity("U"), &w).unwrap(), w);
    }

    #[test]
    fn rotation_pullback_matches_hand_computation() {
        let l = lambda();
        let w = linear(&l);
        let gamma = map(RationalFn2::y().recip(), &RationalFn2::x() / &RationalFn2::y());
        let pb = pullback_form(&gamma, &w).unwrap();
        let expected = OneForm::new(
            -&Poly2::y(),
            Poly2::x().scale(&(&QN::one() - &l)),
            "U",
        )
        .unwrap();
        assert!(pb.is_proportional(&expected));
        // with lambda^2 - lambda + 1 = 0 this is again proportional to w
        assert!(pb.is_proportional(&w));
        let generic = linear(&QN::int(2));
        assert!(!pullback_form(&gamma, &generic).unwrap().is_proportional(&generic));
    }

    #[test]
    fn wedge_examples() {
        let w = linear(&lambda());
        assert!(wedge(&w, &w).unwrap().is_zero());
        let dxdy = wedge(&OneForm::dx("U"), &OneForm::dy("U")).unwrap();
        assert_eq!(dxdy.coeff, RationalFn2::one());
    }

    #[test]
    fn invariant_curves() {
        let l = lambda();
        let w = linear(&l);
        assert!(curve_invariant(&w, &Poly2::y()));
        assert!(curve_invariant(&w, &Poly2::x()));
        assert!(!curve_invariant(&w, &(&Poly2::x() + &Poly2::y())));
        assert!(curve_invariant(&linear(&QN::one()), &(&Poly2::x() + &Poly2::y())));
    }

    #[test]
    fn collapsing_map_is_indeterminate() {
        let c = map(RationalFn2::x(), RationalFn2::zero());
        let pb = pullback_form(&c, &OneForm::dy("U"));
        assert_eq!(pb, Err(SymError::IndeterminateForm));
        assert!(pullback_form(&c, &linear(&QN::int(3))).is_err());
        assert!(pullback_form(&c, &OneForm::dx("U")).is_ok());
    }

    #[test]
    fn chart_labels_are_checked() {
        let w = linear(&QN::int(3)).with_chart("V");
        assert!(matches!(
            pullback_form(&RationalMap2::identity("U"), &w),
            Err(SymError::ChartMismatch { .. })
        ));
    }
}
