//! Truncated Bargmann-Fock matrices for the model operator
//! `P = -X^2 - Y^2 + i g Z` on the Heisenberg group, the closed-form
//! diagonal it must reproduce, the Rockland invertibility test, and the
//! odd K-theory cocycle terms built from the quotient of the operator by
//! its opposite.
//!
//! The representation with parameter `t > 0` acts by
//! `X -> i sqrt(t/2) (z + d/dz)`, `Y -> sqrt(t/2) (z - d/dz)`, `Z -> i t`,
//! under which the model operator is diagonal with entries `t (2q+1-g)`.
//! Negative parameters are reached through the opposite operator (`Z`
//! negated), which flips the sign of `g`. On the truncated basis we use the
//! normalization in which the creation and annihilation matrices are exact
//! mutual adjoints with entries `sqrt(q+1)`; the diagonal entries, the only
//! quantities consumed downstream, do not depend on this choice.
//!
//! Truncation corrupts the top two rows and columns of assembled
//! second-order matrices (creation squared couples `q` to `q+2`), so all
//! matrix identities are asserted on the interior block `0..N-3` only.

use num_complex::Complex;
use thiserror::Error;

use crate::contact::GammaLoop;
use crate::Real;

#[derive(Debug, Error)]
pub enum FockError {
    #[error("basis size must be at least {min}, got {got}")]
    BasisTooSmall { min: usize, got: usize },
    #[error("representation parameter t must be > 0, got {0}")]
    NonPositiveParameter(String),
    #[error("loop \"{loop_name}\": sample {index} makes 2q+1+gamma vanish at q={q}")]
    ZeroDenominator {
        loop_name: String,
        index: usize,
        q: u32,
    },
}

/// Dense square complex matrix, row-major. Sizes here are tiny (N <= a few
/// hundred), so the naive operations are plenty.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex::new(T::zero(), T::zero()); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                let a = self[(i, k)];
                if a.norm_sqr() == T::zero() {
                    continue;
                }
                for j in 0..self.n {
                    m[(i, j)] = m[(i, j)] + a * other[(k, j)];
                }
            }
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            *a = *a + *b;
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            *a = *a - *b;
        }
        m
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        let mut m = self.clone();
        for a in m.data.iter_mut() {
            *a = *a * c;
        }
        m
    }
}

impl<T> std::ops::Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.n + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.n + j]
    }
}

/// The model operator at a point: its `Z`-coefficient and whether to take
/// the opposite operator (`Z` negated, reaching the `t < 0` representations).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelOperatorSpec<T> {
    pub gamma: Complex<T>,
    pub opposite: bool,
}

/// Truncated matrix of the model operator at parameters `(t, N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockTruncation<T> {
    pub t: T,
    pub n: usize,
    pub matrix: CMatrix<T>,
}

impl<T: Real> FockTruncation<T> {
    /// Diagonal of the interior block `0..N-3`, the part untouched by
    /// truncation.
    pub fn interior_diagonal(&self) -> Vec<Complex<T>> {
        (0..self.n.saturating_sub(2))
            .map(|q| self.matrix[(q, q)])
            .collect()
    }
}

/// One term of the odd K-theory symbol class: the `q`-th tensor power of the
/// complex line bundle together with the automorphism
/// `(2q+1-gamma)/(2q+1+gamma)` sampled along the loop.
#[derive(Debug, Clone, PartialEq)]
pub struct KCocycleTerm<T> {
    pub q: u32,
    pub automorphism_samples: Vec<Complex<T>>,
}

/// Creation and annihilation matrices on the truncated basis.
///
/// Creation has entries `sqrt(q+1)` on the first subdiagonal, annihilation is
/// its exact conjugate transpose, and their commutator is the identity on
/// rows/columns `0..N-2`.
pub fn ladder_matrices<T: Real>(n: usize) -> Result<(CMatrix<T>, CMatrix<T>), FockError> {
    if n < 2 {
        return Err(FockError::BasisTooSmall { min: 2, got: n });
    }
    let mut creation = CMatrix::zeros(n);
    for q in 0..n - 1 {
        let v = T::from_usize(q + 1).unwrap().sqrt();
        creation[(q + 1, q)] = Complex::new(v, T::zero());
    }
    let annihilation = creation.dagger();
    Ok((creation, annihilation))
}

/// The scalar representations send the model operator to `x^2 + y^2`,
/// invertible away from the trivial representation at the origin.
pub fn scalar_symbol<T: Real>(x: T, y: T) -> T {
    x * x + y * y
}

/// Assemble the truncated matrix of the model operator from the ladder
/// matrices. The interior block `0..N-3` is diagonal with entries
/// `t (2q+1-gamma)` (`+gamma` for the opposite) up to floating roundoff.
pub fn model_rep_matrix<T: Real>(
    spec: &ModelOperatorSpec<T>,
    t: T,
    n: usize,
) -> Result<FockTruncation<T>, FockError> {
    if !(t > T::zero()) {
        return Err(FockError::NonPositiveParameter(format!("{}", t)));
    }
    if n < 4 {
        return Err(FockError::BasisTooSmall { min: 4, got: n });
    }
    let (creation, annihilation) = ladder_matrices::<T>(n)?;
    let half_t = t / T::from_f64(2.0).unwrap();
    let i = Complex::new(T::zero(), T::one());
    let sqrt_half_t = Complex::new(half_t.sqrt(), T::zero());

    // X = i sqrt(t/2) (z + d/dz), Y = sqrt(t/2) (z - d/dz), Z = i t.
    let x = creation.add(&annihilation).scale(i * sqrt_half_t);
    let y = creation.sub(&annihilation).scale(sqrt_half_t);
    // i gamma Z = i gamma (i t) = -gamma t; the opposite negates Z.
    let z_sign = if spec.opposite { T::one() } else { -T::one() };
    let z_term = CMatrix::identity(n).scale(spec.gamma * Complex::new(z_sign * t, T::zero()));

    let matrix = x
        .mul(&x)
        .scale(Complex::new(-T::one(), T::zero()))
        .sub(&y.mul(&y))
        .add(&z_term);
    Ok(FockTruncation { t, n, matrix })
}

/// Closed-form diagonal of the model operator: entry `q` is
/// `t (2q+1-gamma)` (`+gamma` for the opposite). Exact; this is the oracle
/// the assembled matrix is tested against.
pub fn model_diagonal<T: Real>(
    spec: &ModelOperatorSpec<T>,
    t: T,
    n: usize,
) -> Result<FockTruncation<T>, FockError> {
    if !(t > T::zero()) {
        return Err(FockError::NonPositiveParameter(format!("{}", t)));
    }
    if n < 2 {
        return Err(FockError::BasisTooSmall { min: 2, got: n });
    }
    let mut matrix = CMatrix::zeros(n);
    for q in 0..n {
        matrix[(q, q)] = diagonal_entry(spec, t, q as u32);
    }
    Ok(FockTruncation { t, n, matrix })
}

fn diagonal_entry<T: Real>(spec: &ModelOperatorSpec<T>, t: T, q: u32) -> Complex<T> {
    let level = T::from_u32(2 * q + 1).unwrap();
    let base = Complex::new(level, T::zero());
    let shifted = if spec.opposite {
        base + spec.gamma
    } else {
        base - spec.gamma
    };
    shifted * Complex::new(t, T::zero())
}

/// Rockland test: the model operator and its opposite are invertible in
/// every nontrivial irreducible representation iff `gamma` is not an odd
/// integer. The minimum of `|2q+1 -/+ gamma|` over all `q >= 0` is attained
/// at `q <= ceil(|gamma|/2) + 1`, so the scan is finite.
pub fn is_rockland<T: Real>(gamma: Complex<T>) -> bool {
    let q_hi = (gamma.norm() / T::from_f64(2.0).unwrap())
        .ceil()
        .to_u32()
        .unwrap_or(0)
        + 1;
    for q in 0..=q_hi {
        let level = Complex::new(T::from_u32(2 * q + 1).unwrap(), T::zero());
        if (level - gamma).norm() == T::zero() || (level + gamma).norm() == T::zero() {
            return false;
        }
    }
    true
}

/// Cutoff for the symbol-class terms: smallest `Q` with `2Q+1 > max|gamma|`.
/// Beyond it both numerator and denominator loops stay in the right half
/// plane, so the automorphism is homotopically trivial.
pub fn k1_cutoff<T: Real>(max_abs_gamma: T) -> u32 {
    let mut q = 0u32;
    while !(T::from_u32(2 * q + 1).unwrap() > max_abs_gamma) {
        q += 1;
    }
    q
}

/// Terms `[(line bundle)^q, (2q+1-gamma)/(2q+1+gamma)]` of the odd symbol
/// class for `q = 0..=Q`, each automorphism sampled along the loop.
pub fn k1_class_terms<T: Real>(lp: &GammaLoop<T>) -> Result<Vec<KCocycleTerm<T>>, FockError> {
    let q_max = k1_cutoff(lp.max_abs());
    let mut terms = Vec::with_capacity(q_max as usize + 1);
    for q in 0..=q_max {
        let level = Complex::new(T::from_u32(2 * q + 1).unwrap(), T::zero());
        let mut samples = Vec::with_capacity(lp.samples.len());
        for (index, g) in lp.samples.iter().enumerate() {
            let den = level + *g;
            if den.norm() == T::zero() {
                return Err(FockError::ZeroDenominator {
                    loop_name: lp.name.clone(),
                    index,
                    q,
                });
            }
            samples.push((level - *g) / den);
        }
        terms.push(KCocycleTerm {
            q,
            automorphism_samples: samples,
        });
    }
    Ok(terms)
}
