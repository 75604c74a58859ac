//! Riccati normal forms, fibre multiplicity and flips, and the fibre-support
//! constraint used to decide which `(k, l)`-cycles can occur.

mod fibre;
mod search;

use serde::Serialize;
use thiserror::Error;

use crate::blowup::BlowupError;
use crate::exactnum::QuadraticNumber as QN;
use crate::symalg::{OneForm, Poly2, SymError, UniPoly};

pub use fibre::{contracts_to_fibre, cycle_order, fibre_cover, fibre_support_check, FibreCover};
pub use search::{
    corollary_set_contains, kl_cycle_feasible, not_riccati_witness, replay, search_depth_bound, Conclusion,
    CycleSpec, FeasibilityReport, Move, TraceStep,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RiccatiError {
    #[error(transparent)]
    Blowup(#[from] BlowupError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error("h vanishes identically")]
    DegenerateForm,
    #[error("the fibre x = 0 is not invariant (h(0) != 0)")]
    NotInvariantFibre,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("unknown curve ids {0:?}")]
    UnknownIds(Vec<u32>),
    #[error("curves {0:?} do not form a cycle")]
    NotACycle(Vec<u32>),
    #[error("a cycle needs k > 1 curves, got {0}")]
    InvalidSpec(u32),
    #[error("n must be 1, 2 or 3, got {0}")]
    InvalidLink(i64),
    #[error("replay failed at step {step}: {msg}")]
    Replay { step: usize, msg: String },
}

/// `(a y² + b y + c) dx + h dy` with coefficients in `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RiccatiForm {
    #[serde(serialize_with = "display")]
    pub a: UniPoly,
    #[serde(serialize_with = "display")]
    pub b: UniPoly,
    #[serde(serialize_with = "display")]
    pub c: UniPoly,
    #[serde(serialize_with = "display")]
    pub h: UniPoly,
}

fn display<S: serde::Serializer, T: std::fmt::Display>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl RiccatiForm {
    pub fn new(a: UniPoly, b: UniPoly, c: UniPoly, h: UniPoly) -> Result<Self, RiccatiError> {
        if h.is_zero() {
            return Err(RiccatiError::DegenerateForm);
        }
        Ok(Self { a, b, c, h })
    }

    pub fn to_form(&self, chart: &str) -> Result<OneForm, RiccatiError> {
        let y = Poly2::y();
        let lift = Poly2::from_univariate_x;
        let a = &(&lift(&self.a) * &(&y * &y)) + &(&(&lift(&self.b) * &y) + &lift(&self.c));
        Ok(OneForm::new(a, lift(&self.h), chart)?)
    }
}

/// Reads off `a, b, c, h` when `deg_y A ≤ 2` and `B` does not involve `y`.
pub fn recognize_riccati(omega: &OneForm) -> Option<RiccatiForm> {
    let (a, b) = (omega.a(), omega.b());
    if a.degree_y() > 2 || b.degree_y() > 0 || b.is_zero() {
        return None;
    }
    let coeff_y = |k: u32| {
        let n = a.degree_x() as usize + 1;
        UniPoly::from_coeffs((0..n).map(|i| a.coeff(i as u32, k)).collect())
    };
    RiccatiForm::new(coeff_y(2), coeff_y(1), coeff_y(0), b.as_univariate_x()?).ok()
}

/// Order of vanishing of `h` at `x = 0`.
pub fn fibre_multiplicity(r: &RiccatiForm) -> Result<u32, RiccatiError> {
    match r.h.order_at_zero() {
        Some(0) | None => Err(RiccatiError::NotInvariantFibre),
        Some(k) => Ok(k as u32),
    }
}

/// Blow-up at the origin followed by contraction of the old fibre, as the
/// substitution `y = x v` divided by `x²`.
pub fn flip_fibre(r: &RiccatiForm) -> Result<RiccatiForm, RiccatiError> {
    let k = fibre_multiplicity(r)?;
    let fail = |m: &str| Err(RiccatiError::PreconditionFailed(m.into()));
    if k < 2 {
        return fail("fibre multiplicity must exceed 1");
    }
    let zero = QN::zero();
    if r.b.coeff(0) != zero {
        return fail("b(0) != 0");
    }
    if r.c.coeff(0) != zero {
        return fail("c(0) != 0");
    }
    if r.c.coeff(1) != zero {
        return fail("c'(0) != 0");
    }
    if r.a.coeff(0) == zero {
        return fail("a(0) = 0");
    }
    let b = r.b.shift_down(1).add(&r.h.shift_down(2));
    let (a, c, h) = (r.a.clone(), r.c.shift_down(2), r.h.shift_down(1));
    // remove a common power of x, if any
    let common = [&a, &b, &c, &h].iter().filter_map(|p| p.order_at_zero()).min().unwrap_or(0);
    RiccatiForm::new(a.shift_down(common), b.shift_down(common), c.shift_down(common), h.shift_down(common))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::blow_up_form;
    use crate::symalg::parse_form;

    fn up(c: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(c.iter().map(|&v| QN::int(v)).collect())
    }

    #[test]
    fn recognition() {
        let lam: QN = "(1+sqrt(-3))/2".parse().unwrap();
        let w = OneForm::new(Poly2::y().scale(&lam), -&Poly2::x(), "U").unwrap();
        let r = recognize_riccati(&w).unwrap();
        assert!(r.a.is_zero());
        assert_eq!(r.b, UniPoly::from_coeffs(vec![lam]));
        assert!(r.c.is_zero());
        assert_eq!(r.h, up(&[0, -1]));

        assert!(recognize_riccati(&parse_form("y^3*dx + dy", "U").unwrap()).is_none());

        let r = recognize_riccati(&parse_form("(x*y^2 + 1)*dx + x^2*dy", "U").unwrap()).unwrap();
        assert_eq!((r.a, r.b, r.c, r.h), (up(&[0, 1]), UniPoly::zero(), up(&[1]), up(&[0, 0, 1])));
    }

    #[test]
    fn multiplicities() {
        let r = |h: &[i64]| RiccatiForm::new(UniPoly::zero(), UniPoly::zero(), UniPoly::one(), up(h)).unwrap();
        assert_eq!(fibre_multiplicity(&r(&[0, 1])), Ok(1));
        assert_eq!(fibre_multiplicity(&r(&[0, 0, 0, 1, 0, 1])), Ok(3));
        assert_eq!(fibre_multiplicity(&r(&[1])), Err(RiccatiError::NotInvariantFibre));
        assert_eq!(
            RiccatiForm::new(UniPoly::zero(), UniPoly::zero(), UniPoly::one(), UniPoly::zero()),
            Err(RiccatiError::DegenerateForm)
        );
    }

    #[test]
    fn flip_agrees_with_the_blowup_chart() {
        let r = RiccatiForm::new(up(&[1]), UniPoly::zero(), up(&[0, 0, 1]), up(&[0, 0, 1])).unwrap();
        let f = flip_fibre(&r).unwrap();
        assert!(fibre_multiplicity(&f).unwrap() < 2);
        let chart1 = blow_up_form(&r.to_form("U").unwrap()).unwrap().chart1_form;
        assert!(chart1.is_proportional(&f.to_form("U.1").unwrap()));
    }

    #[test]
    fn iterated_flips_terminate() {
        let mut r = RiccatiForm::new(up(&[2, 1]), up(&[0, 3]), up(&[0, 0, 0, 1]), up(&[0, 0, 0, 0, 1, 1])).unwrap();
        let mut k = fibre_multiplicity(&r).unwrap();
        assert_eq!(k, 4);
        while let Ok(next) = flip_fibre(&r) {
            let k2 = fibre_multiplicity(&next).unwrap();
            assert!(k2 < k);
            let chart1 = blow_up_form(&r.to_form("U").unwrap()).unwrap().chart1_form;
            assert!(chart1.is_proportional(&next.to_form("U.1").unwrap()));
            r = next;
            k = k2;
        }
        assert!(k >= 1);
    }

    #[test]
    fn flip_preconditions() {
        let one = RiccatiForm::new(up(&[1]), UniPoly::zero(), up(&[0, 0, 1]), up(&[0, 1])).unwrap();
        assert!(matches!(flip_fibre(&one), Err(RiccatiError::PreconditionFailed(_))));
        let b0 = RiccatiForm::new(up(&[1]), up(&[1]), up(&[0, 0, 1]), up(&[0, 0, 1])).unwrap();
        assert_eq!(flip_fibre(&b0), Err(RiccatiError::PreconditionFailed("b(0) != 0".into())));
        let a0 = RiccatiForm::new(up(&[0, 1]), UniPoly::zero(), up(&[0, 0, 1]), up(&[0, 0, 1])).unwrap();
        assert_eq!(flip_fibre(&a0), Err(RiccatiError::PreconditionFailed("a(0) = 0".into())));
    }
}
