//! Discrete winding numbers of the sampled coefficient loops around odd
//! integers, and the Fredholm index as their odd-weighted integer linear
//! combination.
//!
//! Windings are computed as sums of principal arguments of consecutive
//! sample ratios, which under the sampling-adequacy admission rule is an
//! exact multiple of `2 pi`; the result is therefore an exact integer, not
//! a float. A trapezoid quadrature of the contour integral is kept as an
//! independent oracle for tests.

use std::collections::BTreeMap;

use num_complex::Complex;
use thiserror::Error;

use crate::contact::{relevant_odd_integers, ContactInstance, GammaLoop};
use crate::Real;

#[derive(Debug, Error)]
pub enum WindingError {
    #[error("loop \"{loop_name}\": sample {index} equals the target point")]
    SampleAtTarget { loop_name: String, index: usize },
    #[error("loop \"{loop_name}\": angular step at sample {index} is not < pi (winding around {target} is ambiguous)")]
    AdequacyViolated {
        loop_name: String,
        index: usize,
        target: String,
    },
}

/// Windings per odd integer (summed over link components) and the index
/// `sum_k k * w_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindingTable {
    pub entries: BTreeMap<i64, i64>,
    pub index: i64,
}

/// Sum of principal arguments of consecutive sample ratios around `target`,
/// in radians. An exact multiple of `2 pi` up to rounding when every step
/// is strictly below `pi`.
pub fn winding_angle_sum<T: Real>(
    samples: &[Complex<T>],
    target: Complex<T>,
    loop_name: &str,
) -> Result<T, WindingError> {
    let n = samples.len();
    let mut total = T::zero();
    for j in 0..n {
        let a = samples[j] - target;
        let b = samples[(j + 1) % n] - target;
        if a.norm() == T::zero() {
            return Err(WindingError::SampleAtTarget {
                loop_name: loop_name.into(),
                index: j,
            });
        }
        let step = (b / a).arg();
        if !(step.abs() < T::PI()) {
            return Err(WindingError::AdequacyViolated {
                loop_name: loop_name.into(),
                index: j,
                target: format!("{}", target),
            });
        }
        total = total + step;
    }
    Ok(total)
}

/// Discrete winding of a sample loop around an arbitrary complex target.
pub fn winding_around<T: Real>(
    samples: &[Complex<T>],
    target: Complex<T>,
    loop_name: &str,
) -> Result<i64, WindingError> {
    let total = winding_angle_sum(samples, target, loop_name)?;
    let turns = total / (T::PI() + T::PI());
    Ok(turns.round().to_i64().expect("winding fits in i64"))
}

/// Winding number of the loop around the integer `k`, counterclockwise
/// positive.
pub fn winding_number<T: Real>(lp: &GammaLoop<T>, k: i64) -> Result<i64, WindingError> {
    let target = Complex::new(T::from_i64(k).expect("integer target"), T::zero());
    winding_around(&lp.samples, target, &lp.name)
}

/// The index as the odd-weighted sum of windings over all components.
///
/// The table carries one entry per relevant odd integer; entries for odd
/// integers outside the sample hull are zero by construction.
pub fn fredholm_index<T: Real>(inst: &ContactInstance<T>) -> Result<WindingTable, WindingError> {
    let mut entries = BTreeMap::new();
    let mut index = 0i64;
    for k in relevant_odd_integers(inst) {
        let mut w = 0i64;
        for lp in &inst.loops {
            w += winding_number(lp, k)?;
        }
        entries.insert(k, w);
        index += k * w;
    }
    Ok(WindingTable { entries, index })
}

/// Trapezoid-rule value of `(1/2 pi i) \oint d gamma / (gamma - target)` on
/// the discrete loop. Test oracle only: accurate for densely sampled smooth
/// loops, and callers assert proximity to the nearest integer.
pub fn winding_quadrature_around<T: Real>(
    samples: &[Complex<T>],
    target: Complex<T>,
    loop_name: &str,
) -> Result<Complex<T>, WindingError> {
    let n = samples.len();
    let mut total = Complex::new(T::zero(), T::zero());
    let half = T::from_f64(0.5).unwrap();
    for j in 0..n {
        let a = samples[j] - target;
        let b = samples[(j + 1) % n] - target;
        if a.norm() == T::zero() {
            return Err(WindingError::SampleAtTarget {
                loop_name: loop_name.into(),
                index: j,
            });
        }
        let d = b - a;
        let avg = (a.inv() + b.inv()) * half;
        total = total + d * avg;
    }
    let two_pi_i = Complex::new(T::zero(), T::PI() + T::PI());
    Ok(total / two_pi_i)
}

/// Quadrature oracle for the winding around the integer `k`.
pub fn winding_quadrature_oracle<T: Real>(
    dense_loop: &GammaLoop<T>,
    k: i64,
) -> Result<Complex<T>, WindingError> {
    let target = Complex::new(T::from_i64(k).expect("integer target"), T::zero());
    winding_quadrature_around(&dense_loop.samples, target, &dense_loop.name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::OrientationConvention;
    use crate::Complex64;

    fn loop_from_fn(n: usize, f: impl Fn(f64) -> Complex64) -> GammaLoop<f64> {
        let samples = (0..n).map(|j| f(j as f64 / n as f64)).collect();
        GammaLoop {
            name: "test".into(),
            samples,
        }
    }

    fn circle(center: f64, radius: f64, n: usize) -> GammaLoop<f64> {
        loop_from_fn(n, |t| {
            let a = 2.0 * std::f64::consts::PI * t;
            Complex64::new(center + radius * a.cos(), radius * a.sin())
        })
    }

    #[test]
    fn counterclockwise_circle_winds_once() {
        let lp = circle(1.0, 0.5, 64);
        assert_eq!(winding_number(&lp, 1).unwrap(), 1);
    }

    #[test]
    fn constant_loop_has_zero_winding() {
        let lp = GammaLoop {
            name: "c".into(),
            samples: vec![Complex64::new(2.0, 0.0); 8],
        };
        assert_eq!(winding_number(&lp, 1).unwrap(), 0);
    }

    #[test]
    fn clockwise_circle_winds_minus_once() {
        let lp = loop_from_fn(32, |t| {
            let a = -2.0 * std::f64::consts::PI * t;
            Complex64::new(3.0 + a.cos(), a.sin())
        });
        assert_eq!(winding_number(&lp, 3).unwrap(), -1);
    }

    #[test]
    fn sample_at_target_is_an_error() {
        let mut lp = circle(1.0, 0.5, 16);
        lp.samples[3] = Complex64::new(1.0, 0.0);
        assert!(matches!(
            winding_number(&lp, 1),
            Err(WindingError::SampleAtTarget { index: 3, .. })
        ));
    }

    #[test]
    fn random_trig_loop_matches_quadrature_oracle() {
        // gamma(t) = 1 + 0.6 e^{2pi i t} + 0.2 e^{-4pi i t}
        let f = |t: f64| {
            let tau = 2.0 * std::f64::consts::PI * t;
            Complex64::new(1.0, 0.0)
                + 0.6 * Complex64::new(tau.cos(), tau.sin())
                + 0.2 * Complex64::new((2.0 * tau).cos(), -(2.0 * tau).sin())
        };
        let coarse = loop_from_fn(256, f);
        let dense = loop_from_fn(10_000, f);
        let w = winding_number(&coarse, 1).unwrap();
        let oracle = winding_quadrature_oracle(&dense, 1).unwrap();
        assert!((oracle.re - w as f64).abs() < 1e-3, "oracle {}", oracle);
        assert!(oracle.im.abs() < 1e-3);
    }

    #[test]
    fn oracle_is_self_consistent_across_resolutions() {
        let f = |t: f64| {
            let tau = 2.0 * std::f64::consts::PI * t;
            Complex64::new(1.0 + 2.0 * tau.cos(), 0.3 * tau.sin())
        };
        let lo = winding_quadrature_oracle(&loop_from_fn(1000, f), 1).unwrap();
        let hi = winding_quadrature_oracle(&loop_from_fn(10_000, f), 1).unwrap();
        assert!((lo.re - 1.0).abs() < 1e-3);
        assert!((hi.re - 1.0).abs() < 1e-3);
        assert!((lo - hi).norm() < 1e-3);
    }

    #[test]
    fn empty_link_has_zero_index() {
        let inst = ContactInstance::<f64> {
            manifold_label: "m".into(),
            loops: vec![],
            clearance: 0.1,
            orientation: OrientationConvention::CounterclockwisePositive,
        };
        let table = fredholm_index(&inst).unwrap();
        assert_eq!(table.index, 0);
        assert!(table.entries.is_empty());
    }

    #[test]
    fn calibration_loops_give_expected_indices() {
        for (center, expected) in [(1.0, 1i64), (3.0, 3)] {
            let inst = ContactInstance {
                manifold_label: "m".into(),
                loops: vec![circle(center, 0.5, 64)],
                clearance: 0.1,
                orientation: OrientationConvention::CounterclockwisePositive,
            };
            let table = fredholm_index(&inst).unwrap();
            assert_eq!(table.index, expected);
            assert_eq!(table.entries[&(center as i64)], 1);
        }
    }

    #[test]
    fn purely_imaginary_loop_has_zero_index() {
        let lp = loop_from_fn(64, |t| {
            let a = 2.0 * std::f64::consts::PI * t;
            Complex64::new(0.0, 2.0 * a.sin() + 0.5 * (2.0 * a).cos())
        });
        let inst = ContactInstance {
            manifold_label: "m".into(),
            loops: vec![lp],
            clearance: 0.1,
            orientation: OrientationConvention::CounterclockwisePositive,
        };
        let table = fredholm_index(&inst).unwrap();
        assert_eq!(table.index, 0);
        assert!(table.entries.values().all(|&w| w == 0));
    }

    #[test]
    fn reversal_negates_windings() {
        let mut lp = circle(3.0, 0.8, 128);
        let w = winding_number(&lp, 3).unwrap();
        lp.samples.reverse();
        assert_eq!(winding_number(&lp, 3).unwrap(), -w);
    }
}
