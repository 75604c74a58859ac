//! Blow-ups of 1-forms at a chart origin, and surgery on configurations of
//! curves with exact intersection bookkeeping.

mod config;
mod form;
mod surgery;

use thiserror::Error;

use crate::symalg::SymError;

pub use config::{Crossing, Curve, CurveConfig, Mark};
pub use form::{
    blow_up_form, blow_up_form_at_any_point, chart1_label, chart2_label, chart_transition, gluing_consistent,
    BlowupResult,
};
pub use surgery::{
    blow_down_config, blow_up_config, build_exceptional_chain, determinant, exceptional_sequence,
    grauert_is_contractible, intersection_matrix, leading_principal_minors, ChainChoice, ExceptionalSequence,
    IntersectionMatrix,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlowupError {
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error("origin is not a singular point of the form")]
    NotSingular,
    #[error("chart '{0}' is not a blow-up chart")]
    BadChart(String),
    #[error("no crossing or mark at point {0}")]
    UnknownPoint(u32),
    #[error("no curve with id {0}")]
    UnknownCurve(u32),
    #[error("curve id {0} is used twice")]
    DuplicateCurve(u32),
    #[error("curve {curve} cannot be contracted: {reason}")]
    NotContractible { curve: u32, reason: String },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("invalid self-intersection {0}")]
    InvalidN(i64),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
