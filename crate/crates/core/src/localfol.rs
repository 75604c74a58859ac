//! Local analysis of foliation singularities: linear part, eigenvalue
//! quotients, reducedness, Camacho-Sad indices.

use serde::Serialize;
use thiserror::Error;

use crate::exactnum::{
    rat, root_of_unity_order, solve_monic_quadratic, solve_quadratic_in_field, NumError,
    QuadraticNumber as QN,
};
use crate::symalg::{curve_invariant, OneForm, Poly2};

pub type Point = (QN, QN);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("point is not a singularity of the form")]
    NotSingular,
    #[error("eigenvalue quotients need a second quadratic extension")]
    OutsideField,
    #[error("singularity is not reduced nondegenerate")]
    NotReduced,
    #[error("branch is not invariant")]
    NotSeparatrix,
    #[error("eigenvalue along the branch vanishes")]
    Degenerate,
    #[error("n must be a positive integer")]
    InvalidSelfIntersection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    ReducedNondegenerate,
    SaddleNode,
    NonReduced,
    DegenerateLinearPart,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularityAnalysis {
    pub point: Point,
    /// Jacobian of the dual vector field `(B, -A)` at the point.
    pub linearization: [[QN; 2]; 2],
    pub trace: QN,
    pub determinant: QN,
    /// `{λ, 1/λ}`, present iff the determinant is nonzero.
    pub eigenvalue_quotients: Option<(QN, QN)>,
    pub classification: Classification,
}

impl SingularityAnalysis {
    pub fn is_reduced_nondegenerate(&self) -> bool {
        self.classification == Classification::ReducedNondegenerate
    }

    /// True when `q` is one of the two quotients.
    pub fn has_quotient(&self, q: &QN) -> bool {
        self.eigenvalue_quotients.as_ref().is_some_and(|(a, b)| a == q || b == q)
    }
}

/// `X = (B, -A)` annihilates `A dx + B dy`.
pub fn dual_vector_field(omega: &OneForm) -> (Poly2, Poly2) {
    (omega.b().clone(), -omega.a())
}

pub fn analyze_singularity(omega: &OneForm, p: &Point) -> Result<SingularityAnalysis, LocalError> {
    let (vx, vy) = dual_vector_field(omega);
    let (px, py) = p;
    if !vx.eval(px, py)?.is_zero() || !vy.eval(px, py)?.is_zero() {
        return Err(LocalError::NotSingular);
    }
    let j = [
        [vx.partial_x().eval(px, py)?, vx.partial_y().eval(px, py)?],
        [vy.partial_x().eval(px, py)?, vy.partial_y().eval(px, py)?],
    ];
    let trace = j[0][0].try_add(&j[1][1])?;
    let determinant = j[0][0].try_mul(&j[1][1])?.try_sub(&j[0][1].try_mul(&j[1][0])?)?;
    let all_zero = j.iter().flatten().all(QN::is_zero);
    let (quotients, classification) = if all_zero {
        (None, Classification::DegenerateLinearPart)
    } else if determinant.is_zero() {
        (None, Classification::SaddleNode)
    } else {
        let q = eigenvalue_quotients(&trace, &determinant)?;
        let class = if q.0.is_positive_rational() {
            Classification::NonReduced
        } else {
            Classification::ReducedNondegenerate
        };
        (Some(q), class)
    };
    Ok(SingularityAnalysis {
        point: p.clone(),
        linearization: j,
        trace,
        determinant,
        eigenvalue_quotients: quotients,
        classification,
    })
}

fn eigenvalue_quotients(t: &QN, d: &QN) -> Result<(QN, QN), LocalError> {
    // λ + 1/λ = T²/D - 2
    let s = t.try_mul(t)?.try_div(d)?.try_sub(&QN::int(2))?;
    solve_quadratic_in_field(&-&s, &QN::one())?.ok_or(LocalError::OutsideField)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LambdaKind {
    /// `-λ` is a primitive root of unity of the given order.
    PrimitiveRoot { order: u32 },
    /// `λ = 1`.
    Unit,
    PositiveIrrational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaClassification {
    pub n: u32,
    pub roots: (QN, QN),
    pub kind: LambdaKind,
}

/// Roots of `λ² + (2 - n)λ + 1 = 0` and their case.
pub fn classify_lambda(n: u32) -> Result<LambdaClassification, LocalError> {
    if n == 0 {
        return Err(LocalError::InvalidSelfIntersection);
    }
    let roots = solve_monic_quadratic(&rat(2 - n as i64), &rat(1));
    let kind = if n == 4 {
        LambdaKind::Unit
    } else if n > 4 {
        LambdaKind::PositiveIrrational
    } else {
        let order = root_of_unity_order(&-&roots.0).expect("imaginary roots are roots of unity");
        LambdaKind::PrimitiveRoot { order }
    };
    Ok(LambdaClassification { n, roots, kind })
}

/// Camacho-Sad index at a node whose two branches lie on the same curve.
pub fn cs_node_index(lambda: &QN) -> Result<QN, LocalError> {
    Ok(lambda.try_add(&QN::int(2))?.try_add(&lambda.inv()?)?)
}

/// Selects the coordinate line through the point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Axis {
    /// The line `x = p.x`.
    Vertical,
    /// The line `y = p.y`.
    Horizontal,
}

/// Camacho-Sad index of the coordinate branch through a reduced corner:
/// transverse eigenvalue divided by the tangent one.
pub fn cs_corner_index(omega: &OneForm, p: &Point, branch: Axis) -> Result<QN, LocalError> {
    let sa = analyze_singularity(omega, p)?;
    if !sa.is_reduced_nondegenerate() {
        return Err(LocalError::NotReduced);
    }
    let curve = match branch {
        Axis::Vertical => &Poly2::x() - &Poly2::constant(p.0.clone()),
        Axis::Horizontal => &Poly2::y() - &Poly2::constant(p.1.clone()),
    };
    if !curve_invariant(omega, &curve) {
        return Err(LocalError::NotSeparatrix);
    }
    let j = &sa.linearization;
    let (tangent, transverse) = match branch {
        Axis::Horizontal => (&j[0][0], &j[1][1]),
        Axis::Vertical => (&j[1][1], &j[0][0]),
    };
    if tangent.is_zero() {
        return Err(LocalError::Degenerate);
    }
    Ok(transverse.try_div(tangent)?)
}
