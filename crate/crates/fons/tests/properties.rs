//! Property tests for the structural invariants: window shifting, the
//! thresholded sign rule, rotation congruences, learner equivalence, and
//! the positive definiteness of the inverse proxy.

use proptest::prelude::*;

use fons::harness::{compare_samples, Precision};
use fons::rotations::{apply_transform, compute_givens, compute_hyperbolic, PreArray};
use fons::{gradient_sign, ExtendedVector, FastOns, HyperParams, Ogd, Ons, SlidingWindow};

fn dims() -> impl Strategy<Value = usize> {
    1usize..10
}

fn samples(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 2..max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Pushing s maps the window [w0 .. w_{M-1}] to [s, w0 .. w_{M-2}].
    #[test]
    fn window_push_is_a_shift(dim in dims(), stream in samples(64)) {
        let mut w: SlidingWindow = SlidingWindow::new(dim);
        for &s in &stream {
            let before = w.to_vec();
            let dropped = w.push(s);
            let after = w.to_vec();
            prop_assert_eq!(after[0], s);
            prop_assert_eq!(&after[1..], &before[..dim - 1]);
            prop_assert_eq!(dropped, before[dim - 1]);
        }
    }

    /// The extended vector brackets the pre- and post-push windows.
    #[test]
    fn extended_vector_consistency(dim in dims(), stream in samples(32), s in -1.0f64..1.0) {
        let mut w: SlidingWindow = SlidingWindow::new(dim);
        for &x in &stream {
            w.push(x);
        }
        let ext = ExtendedVector::from_push(s, &w);
        let pre = w.to_vec();
        prop_assert_eq!(ext.pre_push_window(), pre.as_slice());
        w.push(s);
        let post = w.to_vec();
        prop_assert_eq!(ext.post_push_window(), post.as_slice());
    }

    /// Thresholded sign is odd outside the dead zone and zero inside it.
    #[test]
    fn gradient_sign_odd_outside_threshold(e in -1e3f64..1e3, eps in 0.0f64..10.0) {
        if e.abs() > eps {
            prop_assert_eq!(gradient_sign(-e, eps), -gradient_sign(e, eps));
            prop_assert_eq!(gradient_sign(e, eps).abs(), 1.0);
        } else {
            prop_assert_eq!(gradient_sign(e, eps), 0.0);
            prop_assert_eq!(gradient_sign(-e, eps), 0.0);
        }
    }

    /// Givens rotations preserve pair norms; hyperbolic rotations
    /// preserve pair gaps.
    #[test]
    fn rotations_preserve_their_forms(
        a in 1.0f64..10.0,
        b in -8.0f64..8.0,
        frac in -0.9f64..0.9,
        u in -5.0f64..5.0,
        v in -5.0f64..5.0,
    ) {
        let g = compute_givens(a, b).unwrap();
        let (gu, gv) = g.apply(u, v);
        prop_assert!(((gu * gu + gv * gv) - (u * u + v * v)).abs() < 1e-9);

        let c = frac * a.hypot(b);
        let h = compute_hyperbolic(a.hypot(b), c).unwrap();
        let (hu, hv) = h.apply(u, v);
        prop_assert!(((hu * hu - hv * hv) - (u * u - v * v)).abs() < 1e-8);
    }

    /// The two-rotation transform annihilates the pivot row and keeps
    /// B.diag(1,1,-1).Bt invariant.
    #[test]
    fn transform_keeps_congruence(
        dim in 1usize..7,
        a in 1.0f64..5.0,
        b in -3.0f64..3.0,
        frac in -0.9f64..0.9,
        fill in prop::collection::vec(-2.0f64..2.0, 60),
    ) {
        let rows = dim + 2;
        let mut it = fill.into_iter().cycle();
        let c = frac * a.hypot(b);
        let mut col0 = vec![a, 0.0];
        let mut col1 = vec![b];
        let mut col2 = vec![c];
        col0.extend((2..rows).map(|_| it.next().unwrap()));
        col1.extend((1..rows).map(|_| it.next().unwrap()));
        col2.extend((1..rows).map(|_| it.next().unwrap()));
        let mut arr = PreArray::from_columns(col0, col1, col2);

        let product = |arr: &PreArray| -> Vec<f64> {
            let theta = [1.0, 1.0, -1.0];
            let mut out = Vec::with_capacity(arr.rows() * arr.rows());
            for i in 0..arr.rows() {
                let ri = arr.row(i);
                for j in 0..arr.rows() {
                    let rj = arr.row(j);
                    out.push((0..3).map(|k| ri[k] * theta[k] * rj[k]).sum::<f64>());
                }
            }
            out
        };
        let before = product(&arr);
        apply_transform(&mut arr).unwrap();
        let after = product(&arr);
        prop_assert!(arr.col1[0].abs() < 1e-12);
        prop_assert!(arr.col2[0].abs() < 1e-12);
        for (x, y) in before.iter().zip(&after) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    /// The fast learner follows the regular Newton trajectory on
    /// arbitrary bounded streams.
    #[test]
    fn fast_and_regular_newton_agree(dim in 1usize..8, stream in samples(120)) {
        let params = HyperParams::new(dim, 1.0, 1.0, 1e-8).unwrap();
        let report = compare_samples(&params, &stream, 1e-10, Precision::F64, false).unwrap();
        prop_assert!(
            report.passed,
            "deviation {:.3e} at dim {}",
            report.max_deviation(),
            dim
        );
    }

    /// Normalization terms never drop below one, and the inverse proxy
    /// stays symmetric positive definite (checked with a Cholesky
    /// oracle).
    #[test]
    fn eta_and_proxy_stay_positive_definite(dim in 1usize..6, stream in samples(80)) {
        let params = HyperParams::new(dim, 1.0, 1.0, 1e-8).unwrap();
        let mut ons: Ons = Ons::new(&params);
        let mut fast: FastOns = FastOns::new(&params);
        for &s in &stream {
            ons.step(s).unwrap();
            fast.step(s).unwrap();
            prop_assert!(ons.eta() >= 1.0);
            prop_assert!(fast.eta() >= 1.0 - 1e-12);
            for i in 0..dim {
                for j in 0..i {
                    let d = (ons.a_inv()[i * dim + j] - ons.a_inv()[j * dim + i]).abs();
                    prop_assert!(d < 1e-10);
                }
            }
            let a = nalgebra::DMatrix::from_fn(dim, dim, |i, j| ons.a_inv()[i * dim + j]);
            prop_assert!(
                nalgebra::Cholesky::new(a).is_some(),
                "inverse proxy lost positive definiteness"
            );
        }
    }

    /// Below the error threshold the weights of all three learners stay
    /// bitwise identical to their previous values.
    #[test]
    fn below_threshold_updates_are_bitwise_noops(dim in 1usize..6, stream in samples(60)) {
        let params = HyperParams::new(dim, 1.0, 1.0, 0.5).unwrap();
        let mut ogd: Ogd = Ogd::new(&params);
        let mut ons: Ons = Ons::new(&params);
        let mut fast: FastOns = FastOns::new(&params);
        let mut w_ogd = ogd.weights().to_vec();
        let mut w_ons = ons.weights().to_vec();
        let mut w_fast = fast.weights().to_vec();
        for &s in &stream {
            let o1 = ogd.step(s);
            let o2 = ons.step(s).unwrap();
            let o3 = fast.step(s).unwrap();
            if !o1.updated {
                prop_assert_eq!(ogd.weights(), w_ogd.as_slice());
            }
            if !o2.updated {
                prop_assert_eq!(ons.weights(), w_ons.as_slice());
            }
            if !o3.updated {
                prop_assert_eq!(fast.weights(), w_fast.as_slice());
            }
            w_ogd = ogd.weights().to_vec();
            w_ons = ons.weights().to_vec();
            w_fast = fast.weights().to_vec();
        }
    }
}
