//! Property-based tests for the serialization round trips and the exact
//! integer/symmetry invariants.

mod common;

use num_complex::Complex;
use proptest::prelude::*;

use contact_index::contact::{
    parse_instance, serialize_instance, validate_instance, ContactInstance, GammaLoop,
    OrientationConvention,
};
use contact_index::fock::{model_diagonal, model_rep_matrix, ModelOperatorSpec};
use contact_index::frame::{parse_field, Axis, ScalarField};
use contact_index::winding::{winding_angle_sum, winding_number};
use contact_index::Complex64;

use common::{instance_from_loops, TrigPoly};

fn arb_sample() -> impl Strategy<Value = Complex64> {
    (-1e6f64..1e6, -1e6f64..1e6).prop_map(|(re, im)| Complex64::new(re, im))
}

fn arb_loop() -> impl Strategy<Value = GammaLoop<f64>> {
    ("[a-z]{1,8}", prop::collection::vec(arb_sample(), 3..20))
        .prop_map(|(name, samples)| GammaLoop { name, samples })
}

fn arb_instance() -> impl Strategy<Value = ContactInstance<f64>> {
    (
        "[a-z][a-z0-9 -]{0,15}",
        prop::collection::vec(arb_loop(), 0..4),
        1e-6f64..1.0,
    )
        .prop_map(|(label, loops, clearance)| ContactInstance {
            manifold_label: label,
            loops,
            clearance,
            orientation: OrientationConvention::CounterclockwisePositive,
        })
}

/// Admissible sampled loop: trigonometric polynomial rejected until the
/// instance-level rules hold.
fn arb_admissible_loop() -> impl Strategy<Value = GammaLoop<f64>> {
    (
        (-4.0f64..4.0, -3.0f64..3.0),
        prop::collection::vec((-1.5f64..1.5, -1.5f64..1.5), 1..4),
        prop::collection::vec((-1.5f64..1.5, -1.5f64..1.5), 1..4),
    )
        .prop_map(|(center, pos, neg)| {
            let mut modes: Vec<(i32, Complex64)> = Vec::new();
            for (m, (re, im)) in pos.into_iter().enumerate() {
                modes.push((m as i32 + 1, Complex64::new(re, im) / (m as f64 + 1.0)));
            }
            for (m, (re, im)) in neg.into_iter().enumerate() {
                modes.push((-(m as i32) - 1, Complex64::new(re, im) / (m as f64 + 1.0)));
            }
            TrigPoly {
                center: Complex64::new(center.0, center.1),
                modes,
            }
            .sample_loop(256, "prop")
        })
        .prop_filter("instance admissible", |lp| {
            validate_instance(&instance_from_loops(vec![lp.clone()])).ok
        })
}

fn arb_gamma() -> impl Strategy<Value = Complex64> {
    (-8.0f64..8.0, -4.0f64..4.0).prop_map(|(re, im)| Complex64::new(re, im))
}

// Expression trees restricted to shapes the parser itself can produce:
// non-negative finite constants (negative literals parse as Neg), depth-
// bounded nesting.
fn arb_expr() -> impl Strategy<Value = ScalarField> {
    let leaf = prop_oneof![
        (0.0f64..1e4).prop_map(ScalarField::Const),
        Just(ScalarField::Var(Axis::X)),
        Just(ScalarField::Var(Axis::Y)),
        Just(ScalarField::Var(Axis::Z)),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| ScalarField::Neg(Box::new(e))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| ScalarField::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| ScalarField::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| ScalarField::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| ScalarField::Div(Box::new(a), Box::new(b))),
            (inner.clone(), 0u32..6).prop_map(|(a, n)| ScalarField::Pow(Box::new(a), n)),
            inner.clone().prop_map(|e| ScalarField::Sin(Box::new(e))),
            inner.clone().prop_map(|e| ScalarField::Cos(Box::new(e))),
            inner.prop_map(|e| ScalarField::Exp(Box::new(e))),
        ]
    })
}

proptest! {
    #[test]
    fn instance_serialization_roundtrip(inst in arb_instance()) {
        let text = serialize_instance(&inst);
        let back: ContactInstance<f64> = parse_instance(&text).unwrap();
        prop_assert_eq!(back, inst);
    }

    #[test]
    fn winding_is_integral_and_antisymmetric(
        lp in arb_admissible_loop(),
        k in prop::sample::select(vec![-9i64, -7, -5, -3, -1, 1, 3, 5, 7, 9]),
    ) {
        let report = validate_instance(&instance_from_loops(vec![lp.clone()]));
        prop_assume!(report.relevant_odds.contains(&k));

        let target = Complex64::new(k as f64, 0.0);
        let total = winding_angle_sum(&lp.samples, target, &lp.name).unwrap();
        let turns = total / (2.0 * std::f64::consts::PI);
        prop_assert!((turns - turns.round()).abs() < 1e-6);

        let w = winding_number(&lp, k).unwrap();
        let mut reversed = lp.clone();
        reversed.samples.reverse();
        prop_assert_eq!(winding_number(&reversed, k).unwrap(), -w);
    }

    #[test]
    fn windings_vanish_beyond_the_sample_hull(lp in arb_admissible_loop()) {
        // Any odd integer past the largest sample modulus is outside the
        // hull, so the loop cannot wrap around it.
        let bound = lp.max_abs().ceil() as i64 + 1;
        for k in [bound | 1, -(bound | 1)] {
            prop_assert_eq!(winding_number(&lp, k).unwrap(), 0);
        }
    }

    #[test]
    fn opposite_operator_equals_sign_flipped_gamma(gamma in arb_gamma()) {
        let opposite = ModelOperatorSpec { gamma, opposite: true };
        let flipped = ModelOperatorSpec { gamma: -gamma, opposite: false };
        let n = 12;
        for t in [0.5, 1.0, 3.0] {
            let a = model_rep_matrix(&opposite, t, n).unwrap();
            let b = model_rep_matrix(&flipped, t, n).unwrap();
            prop_assert_eq!(&a.matrix, &b.matrix);
            let da = model_diagonal(&opposite, t, n).unwrap();
            let db = model_diagonal(&flipped, t, n).unwrap();
            prop_assert_eq!(&da.matrix, &db.matrix);
        }
    }

    #[test]
    fn expression_roundtrip_is_structural_identity(e in arb_expr()) {
        let text = e.to_string();
        let reparsed = parse_field(&text).unwrap();
        prop_assert_eq!(reparsed, e, "serialized: {}", text);
    }

    #[test]
    fn diagonal_oracle_matches_eigenvalue_formula(
        gamma in arb_gamma(),
        t in 0.1f64..5.0,
        opposite in any::<bool>(),
    ) {
        let spec = ModelOperatorSpec { gamma, opposite };
        let diag = model_diagonal(&spec, t, 8).unwrap();
        for q in 0..8 {
            let level = Complex::new((2 * q + 1) as f64, 0.0);
            let expected = if opposite { level + gamma } else { level - gamma } * t;
            prop_assert_eq!(diag.matrix[(q, q)], expected);
        }
    }
}
