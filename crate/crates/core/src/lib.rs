//! Index computations for second-order hypoelliptic operators on closed
//! contact 3-manifolds.
//!
//! The operators in question are locally of the form
//! `P = -X^2 - Y^2 + i a X + i b Y + i g Z + d` where `X, Y` span a contact
//! plane field and `Z = [X, Y]`. Their Fredholm index depends only on the
//! Euler class of the plane field and the homotopy class of the
//! `Z`-coefficient `g`, and this crate computes it by two independent routes:
//!
//! * [`winding`] — winding numbers of the sampled `g` loops around odd
//!   integers, combined with odd-integer weights;
//! * [`chern`] — the Chern character of the symbol class paired with the
//!   Todd class, reduced to line integrals along the link dual to the
//!   Euler class.
//!
//! Supporting machinery: [`contact`] holds the instance data model,
//! [`fock`] the truncated Bargmann-Fock matrices of the model operator
//! and the Rockland test, [`frame`] a small calculus for local frames,
//! and [`nilmanifold`] an exact spectral oracle on the Heisenberg
//! nilmanifold.
//!
//! Core math is generic over the real scalar type through the [`Real`]
//! trait; the concrete aliases below fix the default `f64` instantiation
//! used by the CLI.

use std::fmt;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

pub mod chern;
pub mod contact;
pub mod fock;
pub mod frame;
pub mod nilmanifold;
pub mod winding;

/// Real scalar the library is generic over: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display + 'static
{
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display + 'static
{
}

/// Default scalar type.
pub type Scalar = f64;
/// Complex numbers over the default scalar.
pub type Complex64 = num_complex::Complex<f64>;
/// Single-precision complex numbers.
pub type Complex32 = num_complex::Complex<f32>;

pub use contact::{ContactInstance, GammaLoop, ValidationReport};
pub use winding::WindingTable;
