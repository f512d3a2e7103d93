use banova::{decompose, fixed_effects_table, nig_update, BalancedOneWayData, NigParams};
use proptest::prelude::*;

fn design() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (2usize..6, 2usize..6).prop_flat_map(|(i, j)| prop::collection::vec(prop::collection::vec(-50.0..50.0f64, j), i))
}

fn batch_stats(y: &[f64]) -> (usize, f64, f64) {
    let n = y.len();
    let mean = y.iter().sum::<f64>() / n as f64;
    (n, mean, y.iter().map(|v| (v - mean).powi(2)).sum())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #[test]
    fn total_splits_into_between_and_within(rows in design()) {
        let ss = decompose(&BalancedOneWayData::from_rows(rows).unwrap());
        prop_assert!(close(ss.sst, ss.ssa + ss.sse, 1e-10));
    }

    #[test]
    fn shift_leaves_sums_of_squares(rows in design(), c in -1e3..1e3f64) {
        let d = BalancedOneWayData::from_rows(rows).unwrap();
        let (a, b) = (decompose(&d), decompose(&d.map_values(|y| y + c).unwrap()));
        prop_assert!(close(a.ssa, b.ssa, 1e-7) && close(a.sse, b.sse, 1e-7));
    }

    #[test]
    fn scale_multiplies_sums_and_keeps_f(rows in design(), c in 0.01..100.0f64) {
        let d = BalancedOneWayData::from_rows(rows).unwrap();
        let s = d.map_values(|y| c * y).unwrap();
        let (a, b) = (decompose(&d), decompose(&s));
        prop_assert!(close(b.ssa, c * c * a.ssa, 1e-9) && close(b.sse, c * c * a.sse, 1e-9));
        if a.sse > 1e-6 {
            let (fa, fb) = (fixed_effects_table(&d).unwrap(), fixed_effects_table(&s).unwrap());
            prop_assert!(close(fa.f_value(), fb.f_value(), 1e-8));
        }
    }

    #[test]
    fn sequential_updates_equal_one_batch(
        mu0 in -10.0..10.0f64, tau in 0.0..5.0f64, u in -0.5..5.0f64, v in 0.0..5.0f64,
        y in prop::collection::vec(-20.0..20.0f64, 2..30), split in 1usize..29,
    ) {
        let split = split.min(y.len() - 1);
        let prior = NigParams::new(mu0, tau, u, v).unwrap();
        let (n1, m1, s1) = batch_stats(&y[..split]);
        let (n2, m2, s2) = batch_stats(&y[split..]);
        let (n, m, s) = batch_stats(&y);
        let seq = nig_update(&nig_update(&prior, n1, m1, s1), n2, m2, s2);
        let once = nig_update(&prior, n, m, s);
        prop_assert!(close(seq.mu0, once.mu0, 1e-10));
        prop_assert!(close(seq.tau, once.tau, 1e-10));
        prop_assert!(close(seq.u, once.u, 1e-10));
        prop_assert!(close(seq.v, once.v, 1e-10));
    }
}
