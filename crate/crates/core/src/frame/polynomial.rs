//! Exact polynomial vector fields with a symbolic Lie bracket. This is the
//! independent oracle for the finite-difference bracket: it covers only
//! polynomial coefficients, which is enough to pin down the numerics.

use std::collections::BTreeMap;

use super::parse::{Axis, ScalarField};

/// Polynomial in the chart coordinates, stored as monomial exponents to
/// coefficient.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly3 {
    terms: BTreeMap<(u32, u32, u32), f64>,
}

impl Poly3 {
    pub fn zero() -> Self {
        Poly3::default()
    }

    pub fn constant(c: f64) -> Self {
        let mut p = Poly3::zero();
        p.add_term((0, 0, 0), c);
        p
    }

    pub fn var(axis: Axis) -> Self {
        let mut p = Poly3::zero();
        let e = match axis {
            Axis::X => (1, 0, 0),
            Axis::Y => (0, 1, 0),
            Axis::Z => (0, 0, 1),
        };
        p.add_term(e, 1.0);
        p
    }

    pub fn add_term(&mut self, exps: (u32, u32, u32), coeff: f64) {
        if coeff == 0.0 {
            return;
        }
        let entry = self.terms.entry(exps).or_insert(0.0);
        *entry += coeff;
        if *entry == 0.0 {
            self.terms.remove(&exps);
        }
    }

    pub fn add(&self, other: &Poly3) -> Poly3 {
        let mut p = self.clone();
        for (&e, &c) in &other.terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn sub(&self, other: &Poly3) -> Poly3 {
        let mut p = self.clone();
        for (&e, &c) in &other.terms {
            p.add_term(e, -c);
        }
        p
    }

    pub fn mul(&self, other: &Poly3) -> Poly3 {
        let mut p = Poly3::zero();
        for (&(a1, b1, c1), &u) in &self.terms {
            for (&(a2, b2, c2), &v) in &other.terms {
                p.add_term((a1 + a2, b1 + b2, c1 + c2), u * v);
            }
        }
        p
    }

    pub fn scale(&self, s: f64) -> Poly3 {
        let mut p = Poly3::zero();
        for (&e, &c) in &self.terms {
            p.add_term(e, s * c);
        }
        p
    }

    /// Exact partial derivative along the given axis.
    pub fn partial(&self, axis: Axis) -> Poly3 {
        let mut p = Poly3::zero();
        for (&(a, b, c), &coeff) in &self.terms {
            match axis {
                Axis::X if a > 0 => p.add_term((a - 1, b, c), coeff * a as f64),
                Axis::Y if b > 0 => p.add_term((a, b - 1, c), coeff * b as f64),
                Axis::Z if c > 0 => p.add_term((a, b, c - 1), coeff * c as f64),
                _ => {}
            }
        }
        p
    }

    pub fn eval(&self, p: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(&(a, b, c), &coeff)| {
                coeff * p[0].powi(a as i32) * p[1].powi(b as i32) * p[2].powi(c as i32)
            })
            .sum()
    }

    /// Lower to an expression tree, for feeding the same field to the
    /// numerical path.
    pub fn to_field(&self) -> ScalarField {
        let mut acc: Option<ScalarField> = None;
        for (&(a, b, c), &coeff) in &self.terms {
            let mut term = ScalarField::Const(coeff);
            for (axis, exp) in [(Axis::X, a), (Axis::Y, b), (Axis::Z, c)] {
                if exp == 1 {
                    term = ScalarField::Mul(Box::new(term), Box::new(ScalarField::Var(axis)));
                } else if exp > 1 {
                    term = ScalarField::Mul(
                        Box::new(term),
                        Box::new(ScalarField::Pow(Box::new(ScalarField::Var(axis)), exp)),
                    );
                }
            }
            acc = Some(match acc {
                None => term,
                Some(prev) => ScalarField::Add(Box::new(prev), Box::new(term)),
            });
        }
        acc.unwrap_or(ScalarField::Const(0.0))
    }
}

/// Vector field with polynomial components.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyVectorField {
    pub components: [Poly3; 3],
}

impl PolyVectorField {
    /// Exact symbolic bracket `[V, W]_i = V_j d_j W_i - W_j d_j V_i`.
    pub fn bracket(&self, other: &PolyVectorField) -> PolyVectorField {
        let axes = [Axis::X, Axis::Y, Axis::Z];
        let components = std::array::from_fn(|i| {
            let mut acc = Poly3::zero();
            for (j, &axis) in axes.iter().enumerate() {
                acc = acc.add(&self.components[j].mul(&other.components[i].partial(axis)));
                acc = acc.sub(&other.components[j].mul(&self.components[i].partial(axis)));
            }
            acc
        });
        PolyVectorField { components }
    }

    pub fn eval(&self, p: [f64; 3]) -> [f64; 3] {
        std::array::from_fn(|i| self.components[i].eval(p))
    }

    pub fn to_expr(&self) -> super::VectorFieldExpr {
        super::VectorFieldExpr {
            components: std::array::from_fn(|i| self.components[i].to_field()),
        }
    }
}
