//! Exact identity suite over randomized inputs: the q-binomial theorem,
//! the technical summation identity, and measure normalization.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::Zero;
use proptest::prelude::*;

use qekr::qcombinat::{
    gaussian_binomial, phi, q_binomial_sum_exact, q_pochhammer_exact, qr, technical_closed,
    technical_sum,
};
use qekr::scalar::Scalar;

fn rational_strategy() -> impl Strategy<Value = BigRational> {
    // includes negatives and zero; denominators stay positive
    (-60i64..60, 1i64..40)
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn q_binomial_theorem(sigma in rational_strategy(), n in 0u32..10, q in 2u32..5) {
        prop_assert_eq!(
            q_pochhammer_exact(&sigma, &qr(q), n),
            q_binomial_sum_exact(&sigma, &qr(q), n)
        );
    }

    #[test]
    fn pochhammer_shift(sigma in rational_strategy(), n in 1u32..9, q in 2u32..4) {
        // (-sigma;q)_n = (1 + sigma) (-sigma q; q)_{n-1}
        let lhs = q_pochhammer_exact(&sigma, &qr(q), n);
        let shifted = &sigma * qr(q);
        let rhs = (BigRational::new(1.into(), 1.into()) + &sigma)
            * q_pochhammer_exact(&shifted, &qr(q), n - 1);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn normalization(num in 1i64..30, den in 1i64..30, n in 0u32..8, q in 2u32..4) {
        let sigma = Scalar::from_ratio(num, den);
        let mut total = Scalar::zero();
        for k in 0..=n {
            let layer = Scalar::exact(gaussian_binomial(n as i64, k as i64, &qr(q)));
            total = total.add(&layer.mul(&phi(&sigma, q, n, k)));
        }
        prop_assert_eq!(total, Scalar::one());
    }
}

#[test]
fn technical_identity_full_grid() {
    for q in [2u32, 3] {
        for a in 0..=8u32 {
            for b in 0..=a {
                for c in 0..=8u32 {
                    let lhs = technical_sum(a, b, c, &qr(q)).unwrap();
                    let rhs = technical_closed(a, b, c, &qr(q)).unwrap();
                    assert_eq!(lhs, rhs, "a={a} b={b} c={c} q={q}");
                    if b > c {
                        assert!(lhs.is_zero(), "must vanish for b > c");
                    }
                }
            }
        }
    }
}

#[test]
fn binomial_theorem_wide_grid_with_negatives() {
    // the full identity grid with a fixed set of signed biases
    let sigmas: Vec<BigRational> = vec![
        BigRational::new(1.into(), 2.into()),
        BigRational::new((-1).into(), 2.into()),
        BigRational::new(7.into(), 3.into()),
        BigRational::new((-5).into(), 4.into()),
        BigRational::new((-1).into(), 1.into()),
    ];
    for q in [2u32, 3, 4] {
        for n in 0..=12u32 {
            for s in &sigmas {
                assert_eq!(
                    q_pochhammer_exact(s, &qr(q), n),
                    q_binomial_sum_exact(s, &qr(q), n)
                );
            }
        }
    }
}
