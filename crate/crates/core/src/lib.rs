//! Exact symbolic toolkit for foliations on surfaces carrying an invariant
//! rational nodal curve of positive self-intersection.
//!
//! The crate is layered bottom-up: [`exactnum`] (rationals and quadratic
//! fields), [`symalg`] (polynomials, rational maps, forms), [`localfol`]
//! (singularities and Camacho-Sad indices), [`blowup`] (blow-ups and curve
//! configurations), [`riccati`] (Riccati normal forms and cycle
//! feasibility) and [`constructions`] (the three model foliations).

pub mod blowup;
pub mod constructions;
pub mod exactnum;
pub mod localfol;
pub mod riccati;
pub mod symalg;
