//! Local frame calculus: coefficient functions as expression trees,
//! numerical Lie brackets (central differences with one Richardson step),
//! the bracket span check for the frame condition, and the verification
//! that the `Z`-coefficient is invariant under pointwise rotations of the
//! frame.
//!
//! The default chart domain is the unit cube `[-1, 1]^3`; any chart is
//! equivalent for these identities. Default finite-difference step is
//! `h = 1e-3`, which balances truncation against rounding for fields of
//! order one in double precision.

pub mod parse;
pub mod polynomial;

use num_complex::Complex;
use thiserror::Error;

pub use parse::{parse_field, Axis, FieldParseError, ScalarField};

use crate::Real;

/// Default finite-difference step.
pub const DEFAULT_STEP: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("division by zero while evaluating a coefficient field")]
    DivisionByZero,
    #[error("frame matrix is singular at the sample point (|det| = {0})")]
    SingularFrame(f64),
}

/// Evaluate an expression tree at a chart point.
pub fn eval<T: Real>(field: &ScalarField, p: [T; 3]) -> Result<T, FrameError> {
    Ok(match field {
        ScalarField::Const(c) => T::from_f64(*c).unwrap(),
        ScalarField::Var(axis) => p[axis.index()],
        ScalarField::Neg(e) => -eval(e, p)?,
        ScalarField::Add(a, b) => eval(a, p)? + eval(b, p)?,
        ScalarField::Sub(a, b) => eval(a, p)? - eval(b, p)?,
        ScalarField::Mul(a, b) => eval(a, p)? * eval(b, p)?,
        ScalarField::Div(a, b) => {
            let den = eval(b, p)?;
            if den == T::zero() {
                return Err(FrameError::DivisionByZero);
            }
            eval(a, p)? / den
        }
        ScalarField::Pow(a, n) => eval(a, p)?.powi(*n as i32),
        ScalarField::Sin(e) => eval(e, p)?.sin(),
        ScalarField::Cos(e) => eval(e, p)?.cos(),
        ScalarField::Exp(e) => eval(e, p)?.exp(),
    })
}

/// Vector field given by three component expressions (in `dx, dy, dz`).
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFieldExpr {
    pub components: [ScalarField; 3],
}

impl VectorFieldExpr {
    /// The coordinate field along the given axis.
    pub fn coordinate(axis: Axis) -> Self {
        let components = std::array::from_fn(|i| {
            if i == axis.index() {
                ScalarField::Const(1.0)
            } else {
                ScalarField::Const(0.0)
            }
        });
        VectorFieldExpr { components }
    }

    pub fn eval<T: Real>(&self, p: [T; 3]) -> Result<[T; 3], FrameError> {
        Ok([
            eval(&self.components[0], p)?,
            eval(&self.components[1], p)?,
            eval(&self.components[2], p)?,
        ])
    }

    /// Pointwise linear combination `a * self + b * other` at the expression
    /// level, so the result can itself be bracketed.
    pub fn linear_combination(a: &ScalarField, v: &VectorFieldExpr, b: &ScalarField, w: &VectorFieldExpr) -> Self {
        let components = std::array::from_fn(|i| {
            ScalarField::Add(
                Box::new(ScalarField::Mul(
                    Box::new(a.clone()),
                    Box::new(v.components[i].clone()),
                )),
                Box::new(ScalarField::Mul(
                    Box::new(b.clone()),
                    Box::new(w.components[i].clone()),
                )),
            )
        });
        VectorFieldExpr { components }
    }
}

/// Pointwise SO(2) rotation of a frame, given by the angle field.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationField {
    pub theta: ScalarField,
}

/// Complex-valued coefficient function as a pair of real fields.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    pub re: ScalarField,
    pub im: ScalarField,
}

impl ComplexField {
    pub fn constant(re: f64, im: f64) -> Self {
        ComplexField {
            re: ScalarField::Const(re),
            im: ScalarField::Const(im),
        }
    }

    pub fn eval<T: Real>(&self, p: [T; 3]) -> Result<Complex<T>, FrameError> {
        Ok(Complex::new(eval(&self.re, p)?, eval(&self.im, p)?))
    }
}

/// Local presentation `P = -X^2 - Y^2 + i a X + i b Y + i g Z + d` with
/// `Z = [X, Y]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalPresentation {
    pub x: VectorFieldExpr,
    pub y: VectorFieldExpr,
    pub alpha: ComplexField,
    pub beta: ComplexField,
    pub gamma: ComplexField,
    pub delta: ComplexField,
}

/// First-order coefficients of the same operator in the rotated frame.
#[derive(Debug, Clone, PartialEq)]
pub struct RotatedCoefficients<T> {
    pub alpha: Complex<T>,
    pub beta: Complex<T>,
    pub gamma: Complex<T>,
    pub delta: Complex<T>,
}

/// Partial derivative of a scalar field along a coordinate axis by central
/// differences with one Richardson step; error `O(h^4)` on smooth fields.
fn partial<T: Real>(
    field: &ScalarField,
    p: [T; 3],
    axis: usize,
    h: T,
) -> Result<T, FrameError> {
    let two = T::from_f64(2.0).unwrap();
    let diff = |step: T| -> Result<T, FrameError> {
        let mut hi = p;
        let mut lo = p;
        hi[axis] = hi[axis] + step;
        lo[axis] = lo[axis] - step;
        Ok((eval(field, hi)? - eval(field, lo)?) / (two * step))
    };
    let coarse = diff(h)?;
    let fine = diff(h / two)?;
    let four = T::from_f64(4.0).unwrap();
    let three = T::from_f64(3.0).unwrap();
    Ok((four * fine - coarse) / three)
}

/// Directional derivative of a scalar field along a vector field at a point.
fn directional<T: Real>(
    v: &VectorFieldExpr,
    field: &ScalarField,
    p: [T; 3],
    h: T,
) -> Result<T, FrameError> {
    let vp = v.eval(p)?;
    let mut acc = T::zero();
    for axis in 0..3 {
        acc = acc + vp[axis] * partial(field, p, axis, h)?;
    }
    Ok(acc)
}

/// Components of `[V, W]` at `p` by finite differences:
/// `[V, W]_i = V(W_i) - W(V_i)`.
pub fn lie_bracket<T: Real>(
    v: &VectorFieldExpr,
    w: &VectorFieldExpr,
    p: [T; 3],
    h: T,
) -> Result<[T; 3], FrameError> {
    let mut out = [T::zero(); 3];
    for i in 0..3 {
        out[i] = directional(v, &w.components[i], p, h)?
            - directional(w, &v.components[i], p, h)?;
    }
    Ok(out)
}

/// True iff `X(p), Y(p), [X,Y](p)` span the tangent space (determinant above
/// `tol` in absolute value) at every sample point.
pub fn bracket_span_check<T: Real>(
    x: &VectorFieldExpr,
    y: &VectorFieldExpr,
    points: &[[T; 3]],
    tol: T,
    h: T,
) -> Result<bool, FrameError> {
    for &p in points {
        let xp = x.eval(p)?;
        let yp = y.eval(p)?;
        let zp = lie_bracket(x, y, p, h)?;
        if det3(xp, yp, zp).abs() <= tol {
            return Ok(false);
        }
    }
    Ok(true)
}

fn det3<T: Real>(a: [T; 3], b: [T; 3], c: [T; 3]) -> T {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// Solve a real 3x3 system by Cramer's rule; columns are the frame vectors.
fn solve3<T: Real>(cols: [[T; 3]; 3], rhs: [T; 3]) -> Result<[T; 3], FrameError> {
    let det = det3(cols[0], cols[1], cols[2]);
    if det.abs() < T::from_f64(1e-12).unwrap() {
        return Err(FrameError::SingularFrame(det.abs().to_f64().unwrap_or(0.0)));
    }
    let mut out = [T::zero(); 3];
    for i in 0..3 {
        let mut m = cols;
        m[i] = rhs;
        out[i] = det3(m[0], m[1], m[2]) / det;
    }
    Ok(out)
}

/// Re-express the first-order part of the operator in the frame rotated by
/// `rot` and read off the coefficients at `p`.
///
/// With `A = cos(theta) X + sin(theta) Y`, `B = -sin(theta) X + cos(theta) Y`
/// and `C = [A, B]`, the rewrite of `-A^2 - B^2` back to `-X^2 - Y^2` leaves
/// a first-order correction `W_i = A(A_i) + B(B_i) - X(X_i) - Y(Y_i)`; the
/// full first-order vector `W + i a X + i b Y + i g Z` is then solved
/// against the columns `A(p), B(p), C(p)`. The zeroth-order coefficient is
/// carried through unchanged. The rotated `Z`-coefficient must agree with
/// the original; the tests bound the residual.
pub fn rotate_presentation<T: Real>(
    pres: &LocalPresentation,
    rot: &RotationField,
    p: [T; 3],
    h: T,
) -> Result<RotatedCoefficients<T>, FrameError> {
    let cos_t = ScalarField::Cos(Box::new(rot.theta.clone()));
    let sin_t = ScalarField::Sin(Box::new(rot.theta.clone()));
    let neg_sin_t = ScalarField::Neg(Box::new(sin_t.clone()));

    let a_field = VectorFieldExpr::linear_combination(&cos_t, &pres.x, &sin_t, &pres.y);
    let b_field = VectorFieldExpr::linear_combination(&neg_sin_t, &pres.x, &cos_t, &pres.y);

    let ap = a_field.eval(p)?;
    let bp = b_field.eval(p)?;
    let cp = lie_bracket(&a_field, &b_field, p, h)?;
    let xp = pres.x.eval(p)?;
    let yp = pres.y.eval(p)?;
    let zp = lie_bracket(&pres.x, &pres.y, p, h)?;

    // First-order correction from rewriting the second-order part.
    let mut corr = [T::zero(); 3];
    for i in 0..3 {
        corr[i] = directional(&a_field, &a_field.components[i], p, h)?
            + directional(&b_field, &b_field.components[i], p, h)?
            - directional(&pres.x, &pres.x.components[i], p, h)?
            - directional(&pres.y, &pres.y.components[i], p, h)?;
    }

    let alpha = pres.alpha.eval(p)?;
    let beta = pres.beta.eval(p)?;
    let gamma = pres.gamma.eval(p)?;
    let i_unit = Complex::new(T::zero(), T::one());

    // Complex first-order vector i a X + i b Y + i g Z + W, solved component
    // by component against the rotated frame.
    let mut rhs_re = [T::zero(); 3];
    let mut rhs_im = [T::zero(); 3];
    for i in 0..3 {
        let v = i_unit
            * (alpha * Complex::new(xp[i], T::zero())
                + beta * Complex::new(yp[i], T::zero())
                + gamma * Complex::new(zp[i], T::zero()))
            + Complex::new(corr[i], T::zero());
        rhs_re[i] = v.re;
        rhs_im[i] = v.im;
    }
    let cols = [ap, bp, cp];
    let sol_re = solve3(cols, rhs_re)?;
    let sol_im = solve3(cols, rhs_im)?;

    // Coefficients come out multiplied by i.
    let unpack = |idx: usize| Complex::new(sol_re[idx], sol_im[idx]) / i_unit;
    Ok(RotatedCoefficients {
        alpha: unpack(0),
        beta: unpack(1),
        gamma: unpack(2),
        delta: pres.delta.eval(p)?,
    })
}

/// The model frame `X = dx - (y/2) dz`, `Y = dy + (x/2) dz`, whose bracket
/// is `dz`.
pub fn heisenberg_frame() -> (VectorFieldExpr, VectorFieldExpr) {
    let x = VectorFieldExpr {
        components: [
            ScalarField::Const(1.0),
            ScalarField::Const(0.0),
            ScalarField::Neg(Box::new(ScalarField::Div(
                Box::new(ScalarField::Var(Axis::Y)),
                Box::new(ScalarField::Const(2.0)),
            ))),
        ],
    };
    let y = VectorFieldExpr {
        components: [
            ScalarField::Const(0.0),
            ScalarField::Const(1.0),
            ScalarField::Div(
                Box::new(ScalarField::Var(Axis::X)),
                Box::new(ScalarField::Const(2.0)),
            ),
        ],
    };
    (x, y)
}

/// Regular grid over the default chart cube, `n` points per axis.
pub fn chart_grid(n: usize) -> Vec<[f64; 3]> {
    let coords: Vec<f64> = (0..n)
        .map(|i| {
            if n == 1 {
                0.0
            } else {
                -1.0 + 2.0 * i as f64 / (n - 1) as f64
            }
        })
        .collect();
    let mut points = Vec::with_capacity(n * n * n);
    for &x in &coords {
        for &y in &coords {
            for &z in &coords {
                points.push([x, y, z]);
            }
        }
    }
    points
}
