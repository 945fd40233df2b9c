//! Property and oracle-equivalence tests for the estimator and the
//! encoding layer.

mod common;

use common::{oracle, random_rows, rng};
use proptest::prelude::*;
use rand::Rng;

use subdc::dcor::{distance_correlation, distance_covariance, SampleMatrix};
use subdc::empirical::DiscreteDataset;

fn mat(rows: &[Vec<f64>]) -> SampleMatrix {
    SampleMatrix::from_rows(rows).unwrap()
}

#[test]
fn oracle_equivalence_random_instances() {
    let mut r = rng(2024);
    for _ in 0..100 {
        let m = r.gen_range(2..=12);
        let dx = r.gen_range(1..=4);
        let dy = r.gen_range(1..=4);
        let x = random_rows(m, dx, &mut r);
        let y = random_rows(m, dy, &mut r);
        let want = oracle(&x, &y);
        let dcov = distance_covariance(&mat(&x), &mat(&y)).unwrap();
        let res = distance_correlation(&mat(&x), &mat(&y)).unwrap();
        assert!((dcov - want.dcov).abs() < 1e-12);
        assert!((res.dcov - want.dcov).abs() < 1e-12);
        assert!((res.dvar_x - want.dvar_x).abs() < 1e-12);
        assert!((res.dvar_y - want.dvar_y).abs() < 1e-12);
        assert!((res.dcor - want.dcor).abs() < 1e-12);
    }
}

#[test]
fn symmetry_in_arguments() {
    let mut r = rng(7);
    for _ in 0..50 {
        let m = r.gen_range(2..=10);
        let x = random_rows(m, 2, &mut r);
        let y = random_rows(m, 3, &mut r);
        let a = distance_correlation(&mat(&x), &mat(&y)).unwrap();
        let b = distance_correlation(&mat(&y), &mat(&x)).unwrap();
        assert!((a.dcor - b.dcor).abs() < 1e-14);
    }
}

#[test]
fn self_correlation_is_one() {
    let mut r = rng(8);
    for _ in 0..50 {
        let m = r.gen_range(2..=10);
        let x = random_rows(m, 3, &mut r);
        // at least two distinct rows almost surely; enforce it
        if x.windows(2).all(|w| w[0] == w[1]) {
            continue;
        }
        let res = distance_correlation(&mat(&x), &mat(&x)).unwrap();
        assert!((res.dcor - 1.0).abs() < 1e-12);
    }
}

#[test]
fn translation_invariance() {
    let mut r = rng(9);
    for _ in 0..50 {
        let m = r.gen_range(3..=10);
        let x = random_rows(m, 2, &mut r);
        let y = random_rows(m, 2, &mut r);
        let shift = [r.gen_range(-10.0..10.0), r.gen_range(-10.0..10.0)];
        let xs: Vec<Vec<f64>> = x
            .iter()
            .map(|row| row.iter().zip(&shift).map(|(v, s)| v + s).collect())
            .collect();
        let base = distance_correlation(&mat(&x), &mat(&y)).unwrap();
        let shifted = distance_correlation(&mat(&xs), &mat(&y)).unwrap();
        assert!((base.dcov - shifted.dcov).abs() < 1e-12);
        assert!((base.dvar_x - shifted.dvar_x).abs() < 1e-12);
        assert!((base.dcor - shifted.dcor).abs() < 1e-12);
    }
}

#[test]
fn separate_positive_scaling() {
    let mut r = rng(10);
    for _ in 0..50 {
        let m = r.gen_range(3..=10);
        let x = random_rows(m, 2, &mut r);
        let y = random_rows(m, 2, &mut r);
        let (c, cp) = (r.gen_range(0.1..4.0), r.gen_range(0.1..4.0));
        let scale = |rows: &[Vec<f64>], f: f64| -> Vec<Vec<f64>> {
            rows.iter()
                .map(|row| row.iter().map(|v| v * f).collect())
                .collect()
        };
        let base = distance_correlation(&mat(&x), &mat(&y)).unwrap();
        let scaled = distance_correlation(&mat(&scale(&x, c)), &mat(&scale(&y, cp))).unwrap();
        assert!((scaled.dcov - base.dcov * c * cp).abs() < 1e-12 * (1.0 + base.dcov * c * cp));
        assert!((scaled.dcor - base.dcor).abs() < 1e-12);
    }
}

proptest! {
    #[test]
    fn dcor_in_unit_range(seed in any::<u64>(), m in 2usize..10, d in 1usize..4) {
        let mut r = rng(seed);
        let x = random_rows(m, d, &mut r);
        let y = random_rows(m, d, &mut r);
        let res = distance_correlation(&mat(&x), &mat(&y)).unwrap();
        prop_assert!((0.0..=1.0).contains(&res.dcor));
    }

    #[test]
    fn encode_order_invariant_supports(pairs in proptest::collection::vec((0i64..20, 0i64..20), 1..60)) {
        let mut reversed = pairs.clone();
        reversed.reverse();
        let a = DiscreteDataset::encode(&pairs).unwrap();
        let b = DiscreteDataset::encode(&reversed).unwrap();
        prop_assert_eq!(a.x_categories(), b.x_categories());
        prop_assert_eq!(a.y_categories(), b.y_categories());
        let jt_a = subdc::empirical::JointTable::from_dataset(&a).unwrap();
        let jt_b = subdc::empirical::JointTable::from_dataset(&b).unwrap();
        prop_assert_eq!(jt_a, jt_b);
    }
}

#[test]
fn label_permutation_invariance_dc_scores() {
    // relabeling categories permutes sample coordinates only; pairwise
    // distances and hence both direction scores are unchanged
    use subdc::dc_baseline::dc_score;
    use subdc::empirical::Direction;
    let mut r = rng(55);
    let n = 600;
    let x: Vec<u32> = (0..n).map(|_| r.gen_range(0..5)).collect();
    let y: Vec<u32> = x.iter().map(|&v| (v * 2 + r.gen_range(0..2)) % 7).collect();
    let ds = DiscreteDataset::from_codes(
        x.clone(),
        y.clone(),
        (0..5).collect(),
        (0..7).collect(),
    )
    .unwrap();
    // permute the labels of X: relabel i -> (i + 2) % 5, then re-encode so
    // the coordinate order is rebuilt from the permuted raw values
    let permuted: Vec<(i64, i64)> = x
        .iter()
        .zip(&y)
        .map(|(&xv, &yv)| (((xv + 2) % 5) as i64, yv as i64))
        .collect();
    let ds_perm = DiscreteDataset::encode(&permuted).unwrap();
    for dir in [Direction::Forward, Direction::Backward] {
        let a = dc_score(&ds, dir).unwrap().score;
        let b = dc_score(&ds_perm, dir).unwrap().score;
        assert!((a - b).abs() < 1e-12, "{dir:?}: {a} vs {b}");
    }
}
