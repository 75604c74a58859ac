//! The three model foliations with their automorphisms, a verifier for
//! their checkable properties, and normal forms of cyclic automorphisms.

mod charts;
mod conjugate;
mod models;
mod verify;

use thiserror::Error;

use crate::blowup::BlowupError;
use crate::exactnum::{NumError, QuadraticNumber as QN};
use crate::localfol::LocalError;
use crate::symalg::SymError;

pub use charts::{blown_up_plane_charts, plane_charts, quadric_charts, transition, Chart, ChartKind, MonomialMap};
pub use conjugate::{
    beta_like, conjugate_to_beta, conjugate_to_gamma, conjugate_to_gamma_with, conjugates_to_beta, conjugates_to_gamma,
    cyclic_matrix, det3, gamma_matrix, identity3, mat_mul, proportionality, scaling, Matrix3,
};
pub use verify::{
    cs_sums, curve_permutation, lambda_condition, verify_model, Claim, LambdaCondition, Status, VerificationReport,
    ORDER_BOUND,
};
pub use models::{
    alpha, automorphism_order, beta, build_cremona, build_l, build_m, build_n, chart_expressions, cremona, gamma,
    l_lambda, m_lambda, AutomorphismDocument, ChartwiseMap, Corner, CurveDocument, CurveSource, CycleCurve,
    FoliationModel, ModelAutomorphism, ModelDocument, Pencil, Sign, Surface,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Blowup(#[from] BlowupError),
    #[error("wrong shape: {0}")]
    WrongShape(String),
    #[error("{0} has no cube root in its field")]
    NoCubeRoot(QN),
    #[error("{0} has no square root in its field")]
    NoSquareRoot(QN),
    #[error("conjugating map is singular")]
    Singular,
    #[error("unknown chart '{0}'")]
    UnknownChart(String),
}
