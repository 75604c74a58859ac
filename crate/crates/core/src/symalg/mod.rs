//! Exact bivariate polynomial algebra, rational maps and differential forms.

mod forms;
mod parse;
mod poly;
mod ratfn;

use thiserror::Error;

use crate::exactnum::NumError;

pub use forms::{
    curve_invariant, form_at, pullback_coefficients, pullback_form, wedge, OneForm, RationalMap2,
    TwoForm,
};
pub use parse::{parse_form, parse_form_with, parse_poly, parse_poly_with};
pub use poly::{Monomial, Poly2, UniPoly};
pub use ratfn::{compose_poly, RationalFn2};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error(transparent)]
    Num(NumError),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("the zero 1-form does not define a foliation")]
    ZeroForm,
    #[error("chart mismatch: expected {expected}, found {found}")]
    ChartMismatch { expected: String, found: String },
    #[error("pullback vanishes identically")]
    IndeterminateForm,
    #[error("both components of the map are constant")]
    ConstantMap,
}
