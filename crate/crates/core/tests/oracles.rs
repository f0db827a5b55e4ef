mod common;

use common::{characteristic_polynomial, growth, int_poly, poly_mul, prefix_counts, q, to_rational_matrix, Growth};
use ifs_codings::dimension::{analyse, DEFAULT_TOLERANCE};
use ifs_codings::fixtures;
use ifs_codings::ifs::validate_class_e;
use num_bigint::BigUint;

#[test]
fn characteristic_polynomials_of_the_four_map_matrices() {
    let ifs = fixtures::four_map_example();
    let d = analyse(&ifs, &validate_class_e(&ifs), DEFAULT_TOLERANCE).unwrap();

    let full = characteristic_polynomial(&to_rational_matrix(d.full.counts()));
    // t^3 (t - 1)(t^2 - 4t + 2)
    let want = poly_mul(&poly_mul(&int_poly(&[0, 0, 0, 1]), &int_poly(&[-1, 1])), &int_poly(&[2, -4, 1]));
    assert_eq!(full, want);

    let reduced = characteristic_polynomial(&to_rational_matrix(d.reduced.counts()));
    // t^2 (t - 1)(t - 3)
    let want = poly_mul(&poly_mul(&int_poly(&[0, 0, 1]), &int_poly(&[-1, 1])), &int_poly(&[-3, 1]));
    assert_eq!(reduced, want);

    // largest roots 2 + √2 and 3
    let e = (2.0 + 2f64.sqrt()).ln() / 5f64.ln();
    let u = 3f64.ln() / 5f64.ln();
    assert!((d.dim_attractor.value - e).abs() < 1e-9, "{}", d.dim_attractor.value);
    assert!((d.dim_univoque.value - u).abs() < 1e-9, "{}", d.dim_univoque.value);
    assert!(d.dim_attractor.lo.to_f64() <= e && e <= d.dim_attractor.hi.to_f64());
    assert!(d.dim_univoque.lo.to_f64() <= u && u <= d.dim_univoque.hi.to_f64());
}

#[test]
fn characteristic_polynomial_of_small_matrices() {
    let m = to_rational_matrix(&[vec![2, 1], vec![1, 2]]);
    assert_eq!(characteristic_polynomial(&m), int_poly(&[3, -4, 1]));
    let id = to_rational_matrix(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    assert_eq!(characteristic_polynomial(&id), int_poly(&[-1, 3, -3, 1]));
}

#[test]
fn prefix_counts_on_the_four_map_example() {
    let ifs = fixtures::four_map_example();
    let c = |x: &str, d: usize| prefix_counts(&ifs, &q(x), &[d], 64).unwrap().counts[&d].clone();
    assert_eq!(c("1", 10), BigUint::from(1u32));
    assert_eq!(c("109/625", 30), BigUint::from(2u32));
    // 2^s 1 4^∞ for s < d, and 2^∞
    assert_eq!(c("1/5", 3), BigUint::from(4u32));
    assert_eq!(c("1/5", 60), BigUint::from(61u32));
    assert!(c("1/6", 60) > BigUint::from(1u64 << 30));
}

#[test]
fn growth_classes() {
    let ifs = fixtures::four_map_example();
    assert_eq!(growth(&ifs, &q("1"), 64).unwrap().1, Growth::Bounded(BigUint::from(1u32)));
    assert_eq!(growth(&ifs, &q("1/5"), 64).unwrap().1, Growth::Polynomial);
    assert_eq!(growth(&ifs, &q("1/6"), 64).unwrap().1, Growth::Exponential);
    // 1/2 lies in the gap between f_2(I) and f_3(I)
    assert_eq!(growth(&ifs, &q("1/2"), 64).unwrap().1, Growth::Bounded(BigUint::from(0u32)));
}
