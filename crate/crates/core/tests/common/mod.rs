//! Shared generators for randomized instances: trigonometric-polynomial
//! coefficient loops with admission-rule rejection sampling.
#![allow(dead_code)] // each test binary uses its own subset

use contact_index::contact::{
    validate_instance, ContactInstance, GammaLoop, OrientationConvention,
};
use contact_index::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const SAMPLES_PER_LOOP: usize = 256;
pub const CLEARANCE: f64 = 0.1;

/// Trigonometric polynomial with complex coefficients for modes
/// `-degree ..= degree`.
#[derive(Clone, Debug)]
pub struct TrigPoly {
    pub center: Complex64,
    pub modes: Vec<(i32, Complex64)>,
}

impl TrigPoly {
    pub fn eval(&self, t: f64) -> Complex64 {
        let tau = 2.0 * std::f64::consts::PI * t;
        let mut v = self.center;
        for &(m, c) in &self.modes {
            let phase = m as f64 * tau;
            v += c * Complex64::new(phase.cos(), phase.sin());
        }
        v
    }

    pub fn sample_loop(&self, n: usize, name: &str) -> GammaLoop<f64> {
        GammaLoop {
            name: name.into(),
            samples: (0..n).map(|j| self.eval(j as f64 / n as f64)).collect(),
        }
    }
}

pub fn random_trig_poly(rng: &mut ChaCha8Rng) -> TrigPoly {
    let center = Complex64::new(rng.gen_range(-4.0..4.0), rng.gen_range(-3.0..3.0));
    let degree = rng.gen_range(1..=3);
    let modes = (1..=degree)
        .flat_map(|m| {
            let amp = 2.0 / m as f64;
            let pos = Complex64::new(rng.gen_range(-amp..amp), rng.gen_range(-amp..amp));
            let neg = Complex64::new(rng.gen_range(-amp..amp), rng.gen_range(-amp..amp));
            [(m, pos), (-m, neg)]
        })
        .collect();
    TrigPoly { center, modes }
}

pub fn instance_from_loops(loops: Vec<GammaLoop<f64>>) -> ContactInstance<f64> {
    ContactInstance {
        manifold_label: "randomized".into(),
        loops,
        clearance: CLEARANCE,
        orientation: OrientationConvention::CounterclockwisePositive,
    }
}

/// Random admissible instance with 1-3 loops, max |gamma| <= 9, clearance
/// >= 0.1, 256 samples per loop. Rejection-samples until validation passes.
pub fn random_instance(rng: &mut ChaCha8Rng) -> ContactInstance<f64> {
    loop {
        let n_loops = rng.gen_range(1..=3);
        let loops: Vec<GammaLoop<f64>> = (0..n_loops)
            .map(|i| random_trig_poly(rng).sample_loop(SAMPLES_PER_LOOP, &format!("loop{}", i)))
            .collect();
        let inst = instance_from_loops(loops);
        let report = validate_instance(&inst);
        if report.ok && report.max_abs_gamma <= 9.0 {
            return inst;
        }
    }
}

/// The smooth parametrizations behind an instance, for dense resampling in
/// oracle comparisons.
pub fn random_instance_with_polys(
    rng: &mut ChaCha8Rng,
) -> (ContactInstance<f64>, Vec<TrigPoly>) {
    loop {
        let n_loops = rng.gen_range(1..=3);
        let polys: Vec<TrigPoly> = (0..n_loops).map(|_| random_trig_poly(rng)).collect();
        let loops: Vec<GammaLoop<f64>> = polys
            .iter()
            .enumerate()
            .map(|(i, p)| p.sample_loop(SAMPLES_PER_LOOP, &format!("loop{}", i)))
            .collect();
        let inst = instance_from_loops(loops);
        let report = validate_instance(&inst);
        if report.ok && report.max_abs_gamma <= 9.0 {
            return (inst, polys);
        }
    }
}

/// Loop with purely imaginary samples (real trigonometric polynomial times i).
pub fn random_imaginary_loop(rng: &mut ChaCha8Rng, n: usize) -> GammaLoop<f64> {
    let a0: f64 = rng.gen_range(-3.0..3.0);
    let coeffs: Vec<(f64, f64)> = (1..=3)
        .map(|m| {
            let amp = 2.0 / m as f64;
            (rng.gen_range(-amp..amp), rng.gen_range(-amp..amp))
        })
        .collect();
    let samples = (0..n)
        .map(|j| {
            let tau = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            let mut v = a0;
            for (m, &(ac, asn)) in coeffs.iter().enumerate() {
                let phase = (m + 1) as f64 * tau;
                v += ac * phase.cos() + asn * phase.sin();
            }
            Complex64::new(0.0, v)
        })
        .collect();
    GammaLoop {
        name: "imaginary".into(),
        samples,
    }
}
