//! Exact q-arithmetic: brackets, factorials, Gaussian binomials, q-Pochhammer
//! products, the measure weight function, and the summation identities the
//! rest of the crate is built on.
//!
//! Everything here is a polynomial identity in q, so the exact layer accepts
//! any rational q > 0 (in particular q = 1 + 10^-d for limit checks), while
//! callers working over a concrete field pass an integer order.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// Rational view of an integer field order.
pub fn qr(q: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(q))
}

/// C(k,2), the exponent in the weight q^C(k,2).
pub fn binom2(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

/// q-bracket `[m] = (q^m - 1)/(q - 1)`; equals m at q = 1.
pub fn q_int(m: u32, q: &BigRational) -> BigRational {
    if q.is_one() {
        return BigRational::from_integer(BigInt::from(m));
    }
    let qm = num::pow::pow(q.clone(), m as usize);
    (qm - BigRational::one()) / (q - BigRational::one())
}

/// `[m]! = [1][2]...[m]`.
pub fn q_factorial(m: u32, q: &BigRational) -> BigRational {
    let mut acc = BigRational::one();
    for j in 1..=m {
        acc *= q_int(j, q);
    }
    acc
}

/// Gaussian binomial coefficient; zero outside 0 <= k <= n.
pub fn gaussian_binomial(n: i64, k: i64, q: &BigRational) -> BigRational {
    if k < 0 || k > n || n < 0 {
        return BigRational::zero();
    }
    let (n, k) = (n as u32, k as u32);
    // product form avoids the full factorials
    let mut acc = BigRational::one();
    for j in 0..k {
        acc *= q_int(n - j, q) / q_int(j + 1, q);
    }
    acc
}

/// (-sigma; q)_m = prod_{j=0}^{m-1} (1 + sigma q^j), as the explicit product.
pub fn q_pochhammer_exact(sigma: &BigRational, q: &BigRational, m: u32) -> BigRational {
    let mut acc = BigRational::one();
    let mut qj = BigRational::one();
    for _ in 0..m {
        acc *= BigRational::one() + sigma * &qj;
        qj *= q;
    }
    acc
}

/// Sum side of the q-binomial theorem:
/// `sum_k [m choose k] sigma^k q^C(k,2)`; equals the Pochhammer product.
pub fn q_binomial_sum_exact(sigma: &BigRational, q: &BigRational, m: u32) -> BigRational {
    let mut acc = BigRational::zero();
    for k in 0..=m {
        let term = gaussian_binomial(m as i64, k as i64, q)
            * num::pow::pow(sigma.clone(), k as usize)
            * num::pow::pow(q.clone(), binom2(k as u64) as usize);
        acc += term;
    }
    acc
}

fn poch_real(sigma: &Real, q: u32, m: u32) -> Real {
    let p = sigma.precision_bits();
    let qf = Real::from_u64(q as u64, p);
    let one = Real::one(p);
    let mut acc = one.clone();
    let mut qj = one;
    for _ in 0..m {
        acc = acc.mul(&sigma.mul(&qj).add(&Real::one(p)));
        qj = qj.mul(&qf);
    }
    acc
}

/// Mode-dispatching Pochhammer over an integer q.
pub fn q_pochhammer(sigma: &Scalar, q: u32, m: u32) -> Scalar {
    match sigma {
        Scalar::Exact(s) => Scalar::Exact(q_pochhammer_exact(s, &qr(q), m)),
        Scalar::Real(s) => Scalar::Real(poch_real(s, q, m)),
    }
}

/// Mode-dispatching q-binomial sum over an integer q.
pub fn q_binomial_sum(sigma: &Scalar, q: u32, m: u32) -> Scalar {
    match sigma {
        Scalar::Exact(s) => Scalar::Exact(q_binomial_sum_exact(s, &qr(q), m)),
        Scalar::Real(s) => {
            let p = s.precision_bits();
            let qf = Real::from_u64(q as u64, p);
            let mut acc = Real::zero(p);
            for k in 0..=m {
                let g = Real::from_rational(&gaussian_binomial(m as i64, k as i64, &qr(q)), p);
                let term = g.mul(&s.powi(k as i64)).mul(&qf.powi(binom2(k as u64) as i64));
                acc = acc.add(&term);
            }
            Scalar::Real(acc)
        }
    }
}

/// Real-extended bracket `[lambda] = (q^lambda - 1)/(q - 1)`.
pub fn q_bracket_real(lambda: &Real, q: u32) -> Real {
    let p = lambda.precision_bits();
    let qf = Real::from_u64(q as u64, p);
    qf.pow(lambda)
        .sub(&Real::one(p))
        .div(&Real::from_u64((q - 1) as u64, p))
}

/// Weight phi_{sigma,n}(k) = sigma^k q^C(k,2) / (-sigma;q)_n.
pub fn phi(sigma: &Scalar, q: u32, n: u32, k: u32) -> Scalar {
    assert!(k <= n, "phi requires 0 <= k <= n");
    match sigma {
        Scalar::Exact(s) => {
            let num = num::pow::pow(s.clone(), k as usize)
                * num::pow::pow(qr(q), binom2(k as u64) as usize);
            Scalar::Exact(num / q_pochhammer_exact(s, &qr(q), n))
        }
        Scalar::Real(s) => {
            let p = s.precision_bits();
            let qf = Real::from_u64(q as u64, p);
            let num = s.powi(k as i64).mul(&qf.powi(binom2(k as u64) as i64));
            Scalar::Real(num.div(&poch_real(s, q, n)))
        }
    }
}

/// Alternating sum side of the technical identity:
/// `sum_j [b,j][a-j,c](-1)^j q^C(j,2)`.
pub fn technical_sum(a: u32, b: u32, c: u32, q: &BigRational) -> Result<BigRational> {
    if b > a {
        return Err(Error::InvalidParameter(format!(
            "technical identity requires a >= b >= 0 (got a={a}, b={b})"
        )));
    }
    let mut acc = BigRational::zero();
    for j in 0..=b {
        let sign = if j % 2 == 0 { BigRational::one() } else { -BigRational::one() };
        acc += gaussian_binomial(b as i64, j as i64, q)
            * gaussian_binomial(a as i64 - j as i64, c as i64, q)
            * sign
            * num::pow::pow(q.clone(), binom2(j as u64) as usize);
    }
    Ok(acc)
}

/// Closed form of the technical identity: `q^{b(a-c)} [a-b choose c-b]`;
/// vanishes when b > c.
pub fn technical_closed(a: u32, b: u32, c: u32, q: &BigRational) -> Result<BigRational> {
    if b > a {
        return Err(Error::InvalidParameter(format!(
            "technical identity requires a >= b >= 0 (got a={a}, b={b})"
        )));
    }
    let g = gaussian_binomial((a - b) as i64, c as i64 - b as i64, q);
    if g.is_zero() {
        return Ok(BigRational::zero());
    }
    // a nonzero Gaussian factor forces b <= c <= a, so b(a-c) >= 0
    Ok(num::pow::pow(q.clone(), (b as usize) * ((a - c) as usize)) * g)
}

/// sigma_{theta,n} = q^{-(1-theta)n}; exact whenever (1-theta)n is an integer.
pub fn sigma_theta(theta: &BigRational, n: u32, q: u32, prec: usize) -> Result<Scalar> {
    if !(theta.is_positive() && theta < &BigRational::one()) {
        return Err(Error::InvalidParameter("theta must satisfy 0 < theta < 1".into()));
    }
    let e = (BigRational::one() - theta) * BigRational::from_integer(BigInt::from(n));
    if e.is_integer() {
        use num::ToPrimitive;
        let ei = e.to_integer().to_i64().ok_or_else(|| {
            Error::InvalidParameter("exponent too large".into())
        })?;
        let p = num::pow::pow(qr(q), ei.unsigned_abs() as usize);
        return Ok(Scalar::Exact(p.recip()));
    }
    let qf = Real::from_u64(q as u64, prec);
    Ok(Scalar::Real(qf.pow_rational(&-e)))
}

/// Conjectural bias `sigma = [pn] / ([n] - [pn])` with the real-extended bracket;
/// exact whenever pn is an integer.
pub fn sigma_conjecture(p: &BigRational, n: u32, q: u32, prec: usize) -> Result<Scalar> {
    if !(p.is_positive() && p < &BigRational::one()) {
        return Err(Error::InvalidParameter(
            "p must satisfy 0 < p < 1 (pn >= n makes the denominator nonpositive)".into(),
        ));
    }
    let pn = p * BigRational::from_integer(BigInt::from(n));
    let bn = q_int(n, &qr(q));
    if pn.is_integer() {
        use num::ToPrimitive;
        let pni = pn.to_integer().to_u32().ok_or_else(|| {
            Error::InvalidParameter("pn too large".into())
        })?;
        let bpn = q_int(pni, &qr(q));
        return Ok(Scalar::Exact(&bpn / (bn - &bpn)));
    }
    let pnr = Real::from_rational(&pn, prec);
    let bpn = q_bracket_real(&pnr, q);
    let bnr = Real::from_rational(&bn, prec);
    Ok(Scalar::Real(bpn.div(&bnr.sub(&bpn))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::DEFAULT_PRECISION_BITS as P;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn brackets() {
        assert_eq!(q_int(0, &qr(2)), BigRational::zero());
        assert_eq!(q_int(3, &qr(2)), rat(7, 1));
        assert_eq!(q_int(2, &qr(3)), rat(4, 1));
    }

    #[test]
    fn bracket_real_matches_integers() {
        let l = Real::from_f64(3.0, P);
        assert!((q_bracket_real(&l, 2).to_f64() - 7.0).abs() < 1e-12);
        let z = Real::zero(P);
        assert!(q_bracket_real(&z, 5).is_zero());
        let l = Real::from_f64(1.5, P);
        assert!((q_bracket_real(&l, 4).to_f64() - 7.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_values() {
        assert_eq!(gaussian_binomial(4, 0, &qr(2)), rat(1, 1));
        assert_eq!(gaussian_binomial(4, 2, &qr(2)), rat(35, 1));
        assert_eq!(gaussian_binomial(3, 1, &qr(2)), rat(7, 1));
        assert_eq!(gaussian_binomial(3, 4, &qr(2)), BigRational::zero());
        assert_eq!(gaussian_binomial(3, -1, &qr(2)), BigRational::zero());
    }

    #[test]
    fn gaussian_symmetry_and_pascal() {
        for q in [2u32, 3, 4] {
            for n in 1..=8i64 {
                for k in 0..=n {
                    assert_eq!(
                        gaussian_binomial(n, k, &qr(q)),
                        gaussian_binomial(n, n - k, &qr(q))
                    );
                    let lhs = gaussian_binomial(n, k, &qr(q));
                    let rhs = gaussian_binomial(n - 1, k - 1, &qr(q))
                        + num::pow::pow(qr(q), k as usize) * gaussian_binomial(n - 1, k, &qr(q));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn gaussian_q_to_one_limit() {
        // [n,k]_q decreases monotonically to C(n,k) as q -> 1+.
        let binom = |n: u64, k: u64| -> BigInt {
            let mut acc = BigInt::one();
            for j in 0..k {
                acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
            }
            acc
        };
        for (n, k) in [(4i64, 2i64), (5, 2), (6, 3)] {
            let target = BigRational::from_integer(binom(n as u64, k as u64));
            let mut prev: Option<BigRational> = None;
            for d in 1..=6u32 {
                let q = BigRational::one() + rat(1, 10i64.pow(d));
                let err = gaussian_binomial(n, k, &q) - &target;
                assert!(err.is_positive());
                if let Some(p) = prev {
                    assert!(err < p, "not monotone at d={d}");
                }
                prev = Some(err.clone());
                if d == 6 {
                    assert!(&err / &target < rat(1, 1000));
                }
            }
        }
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(q_pochhammer_exact(&BigRational::zero(), &qr(3), 5), rat(1, 1));
        assert_eq!(q_pochhammer_exact(&rat(1, 1), &qr(2), 2), rat(6, 1));
        assert_eq!(q_pochhammer_exact(&rat(-1, 1), &qr(2), 3), BigRational::zero());
    }

    #[test]
    fn binomial_sum_values() {
        assert_eq!(q_binomial_sum_exact(&rat(1, 1), &qr(2), 2), rat(6, 1));
        assert_eq!(q_binomial_sum_exact(&BigRational::zero(), &qr(5), 7), rat(1, 1));
        assert_eq!(q_binomial_sum_exact(&rat(-1, 1), &qr(2), 4), BigRational::zero());
    }

    #[test]
    fn phi_values() {
        let s = Scalar::from_ratio(1, 8);
        assert_eq!(phi(&s, 2, 3, 0).as_exact().unwrap(), &rat(64, 135));
        assert_eq!(phi(&s, 2, 3, 1).as_exact().unwrap(), &rat(8, 135));
        // k = 0 is always 1/(-sigma;q)_n
        let s = Scalar::from_ratio(3, 7);
        let expect = q_pochhammer_exact(&rat(3, 7), &qr(3), 4).recip();
        assert_eq!(phi(&s, 3, 4, 0).as_exact().unwrap(), &expect);
    }

    #[test]
    fn phi_normalizes() {
        for q in [2u32, 3] {
            for n in 0..=6u32 {
                let s = Scalar::from_ratio(2, 5);
                let mut total = Scalar::zero();
                for k in 0..=n {
                    let layer = Scalar::exact(gaussian_binomial(n as i64, k as i64, &qr(q)));
                    total = total.add(&layer.mul(&phi(&s, q, n, k)));
                }
                assert_eq!(total, Scalar::one());
            }
        }
    }

    #[test]
    fn technical_identity_examples() {
        assert_eq!(technical_sum(3, 1, 2, &qr(2)).unwrap(), rat(6, 1));
        assert_eq!(technical_closed(3, 1, 2, &qr(2)).unwrap(), rat(6, 1));
        assert_eq!(technical_sum(5, 3, 1, &qr(3)).unwrap(), BigRational::zero());
        assert_eq!(technical_closed(5, 3, 1, &qr(3)).unwrap(), BigRational::zero());
        assert_eq!(technical_sum(4, 0, 2, &qr(2)).unwrap(), rat(35, 1));
        assert!(technical_sum(2, 3, 1, &qr(2)).is_err());
    }

    #[test]
    fn sigma_theta_values() {
        let t = sigma_theta(&rat(1, 2), 4, 2, P).unwrap();
        assert_eq!(t.as_exact().unwrap(), &rat(1, 4));
        let t = sigma_theta(&rat(1, 3), 3, 2, P).unwrap();
        assert_eq!(t.as_exact().unwrap(), &rat(1, 4));
        let t = sigma_theta(&rat(3, 10), 10, 2, P).unwrap();
        assert_eq!(t.as_exact().unwrap(), &rat(1, 128));
        // non-integer exponent goes to real mode
        let t = sigma_theta(&rat(3, 10), 7, 2, P).unwrap();
        assert!(!t.is_exact());
        assert!((t.to_f64() - 2f64.powf(-4.9)).abs() < 1e-12);
        assert!(sigma_theta(&rat(3, 2), 4, 2, P).is_err());
    }

    #[test]
    fn sigma_conjecture_values() {
        let s = sigma_conjecture(&rat(1, 2), 4, 2, P).unwrap();
        assert_eq!(s.as_exact().unwrap(), &rat(1, 4));
        // frozen exact ratio at p = 0.3, n = 20, q = 2 (the asymptotic ratio
        // sigma / q^{-14}; tends to 1 but is still ~0.984 here)
        let s = sigma_conjecture(&rat(3, 10), 20, 2, P).unwrap();
        let ratio = s.as_exact().unwrap() * BigRational::from_integer(BigInt::from(1u64 << 14));
        assert_eq!(ratio, rat(5376, 5461));
        // by n = 40 the ratio is inside (0.99, 1.01)
        let s = sigma_conjecture(&rat(3, 10), 40, 2, P).unwrap();
        let ratio = s.as_exact().unwrap() * BigRational::from_integer(BigInt::from(1u64 << 28));
        assert!(ratio > rat(99, 100) && ratio < rat(101, 100));
        assert!(sigma_conjecture(&rat(1, 1), 4, 2, P).is_err());
    }

    #[test]
    fn binomial_theorem_small_grid() {
        for q in [2u32, 3] {
            for m in 0..=8u32 {
                for s in [rat(1, 2), rat(-3, 4), rat(5, 1), rat(-2, 7)] {
                    assert_eq!(
                        q_pochhammer_exact(&s, &qr(q), m),
                        q_binomial_sum_exact(&s, &qr(q), m)
                    );
                }
            }
        }
    }
}
