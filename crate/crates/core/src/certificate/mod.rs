//! The dual certificate behind the star bound, exact layer.
//!
//! Everything here is rational: the triangular similarity pair C, G, the
//! anti-triangular matrix F computed along two independent routes, the
//! per-block eigenvalues of the certificate matrix, and the bias threshold
//! at which positive semidefiniteness holds. Square roots appear only in
//! the float assembly layer (`full`), which exists for desk-scale
//! cross-validation of this one.

pub mod full;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcombinat::{binom2, gaussian_binomial, qr};
use crate::scalar::{Real, Scalar};

pub type Mat = Vec<Vec<BigRational>>;

fn zeros(n: usize) -> Mat {
    vec![vec![BigRational::zero(); n]; n]
}

fn identity(n: usize) -> Mat {
    let mut m = zeros(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigRational::one();
    }
    m
}

fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for (j, bkj) in b[k].iter().enumerate() {
                if !bkj.is_zero() {
                    out[i][j] += aik * bkj;
                }
            }
        }
    }
    out
}

fn pow_q(q: &BigRational, e: i64) -> BigRational {
    let p = num::pow::pow(q.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

fn sign(k: u32) -> BigRational {
    if k % 2 == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

/// (q;q)_m = prod_{j=1}^m (1 - q^j); sign-alternating for q > 1.
fn qq_pochhammer(m: u32, q: &BigRational) -> BigRational {
    let mut acc = BigRational::one();
    let mut qj = q.clone();
    for _ in 0..m {
        acc *= BigRational::one() - &qj;
        qj *= q;
    }
    acc
}

/// The triangular pair: C with Gaussian-binomial entries, its closed-form
/// inverse, and the upper triangular G whose diagonal carries the
/// certificate eigenvalues.
#[derive(Clone, Debug)]
pub struct TriangularPack {
    pub n: u32,
    pub sigma: BigRational,
    pub q: BigRational,
    pub c: Mat,
    pub c_inv: Mat,
    pub g: Mat,
}

pub fn build_triangular(n: u32, sigma: &BigRational, q: &BigRational) -> TriangularPack {
    let m = (n + 1) as usize;
    let mut c = zeros(m);
    let mut c_inv = zeros(m);
    let mut g = zeros(m);
    for k in 0..=n {
        for l in 0..=n {
            if l <= k {
                c[k as usize][l as usize] = gaussian_binomial(k as i64, l as i64, q);
                c_inv[k as usize][l as usize] = gaussian_binomial(k as i64, l as i64, q)
                    * sign(k - l)
                    * pow_q(q, binom2((k - l) as u64) as i64);
            }
            if k <= l {
                g[k as usize][l as usize] = gaussian_binomial(
                    (n - k) as i64,
                    (n - l) as i64,
                    q,
                ) * sign(k)
                    * num::pow::pow(sigma.clone(), l as usize)
                    * pow_q(q, (binom2(k as u64) + binom2(l as u64)) as i64);
            }
        }
    }
    assert_eq!(matmul(&c, &c_inv), identity(m), "C * C^-1 must be the identity");
    TriangularPack { n, sigma: sigma.clone(), q: q.clone(), c, c_inv, g }
}

/// The anti-triangular certificate matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FMatrix {
    pub n: u32,
    pub sigma: BigRational,
    pub q: BigRational,
    pub entries: Mat,
}

impl FMatrix {
    pub fn entry(&self, k: u32, l: u32) -> &BigRational {
        &self.entries[k as usize][l as usize]
    }

    /// Diagonal of C^-1 F C; equals the G diagonal (-1)^k sigma^k q^{k(k-1)}
    /// when F was built correctly, pinning the eigenvalue multiset.
    pub fn eigenvalues(&self) -> Vec<BigRational> {
        (0..=self.n)
            .map(|k| {
                sign(k)
                    * num::pow::pow(self.sigma.clone(), k as usize)
                    * pow_q(&self.q, (k as i64) * (k as i64 - 1))
            })
            .collect()
    }
}

/// F by the similarity route F = C G C^-1.
pub fn f_by_similarity(pack: &TriangularPack) -> FMatrix {
    let entries = matmul(&pack.c, &matmul(&pack.g, &pack.c_inv));
    FMatrix { n: pack.n, sigma: pack.sigma.clone(), q: pack.q.clone(), entries }
}

/// F by the closed-form route:
/// F_{k,l} = [n-k, l] sigma^l q^{kl + C(l,2)}
///           sum_h [n-k-l, h] (-1)^h sigma^h q^{h(h+k+l-1)}.
pub fn f_by_formula(n: u32, sigma: &BigRational, q: &BigRational) -> FMatrix {
    let m = (n + 1) as usize;
    let mut entries = zeros(m);
    for k in 0..=n {
        for l in 0..=n {
            if k + l > n {
                continue;
            }
            let mut tail = BigRational::zero();
            for h in 0..=(n - k - l) {
                tail += gaussian_binomial((n - k - l) as i64, h as i64, q)
                    * sign(h)
                    * num::pow::pow(sigma.clone(), h as usize)
                    * pow_q(q, (h as i64) * (h + k + l) as i64 - h as i64);
            }
            entries[k as usize][l as usize] = gaussian_binomial((n - k) as i64, l as i64, q)
                * num::pow::pow(sigma.clone(), l as usize)
                * pow_q(q, (k * l + binom2(l as u64) as u32) as i64)
                * tail;
        }
    }
    FMatrix { n, sigma: sigma.clone(), q: q.clone(), entries }
}

/// Entrywise limit of F as q -> 1: binomial(n-k, l) sigma^l (1-sigma)^{n-k-l}.
pub fn f_q1_limit(n: u32, sigma: &BigRational, k: u32, l: u32) -> Result<BigRational> {
    if k + l > n {
        return Err(Error::InvalidParameter("requires k + l <= n".into()));
    }
    let mut binom = BigInt::one();
    for j in 0..l as u64 {
        binom = binom * BigInt::from((n - k) as u64 - j) / BigInt::from(j + 1);
    }
    Ok(BigRational::from_integer(binom)
        * num::pow::pow(sigma.clone(), l as usize)
        * num::pow::pow(BigRational::one() - sigma, (n - k - l) as usize))
}

/// Weighted-symmetry ratio phi_k [n,k] / (phi_l [n,l]), exact.
fn weight_ratio(n: u32, sigma: &BigRational, q: &BigRational, k: u32, l: u32) -> BigRational {
    let p = num::pow::pow(sigma.clone(), k as usize) * pow_q(q, binom2(k as u64) as i64)
        / (num::pow::pow(sigma.clone(), l as usize) * pow_q(q, binom2(l as u64) as i64));
    p * gaussian_binomial(n as i64, k as i64, q) / gaussian_binomial(n as i64, l as i64, q)
}

/// The certificate coefficient a'_{k,l} in real mode (square roots).
pub fn a_prime_entry(
    n: u32,
    sigma: &BigRational,
    q: u32,
    k: u32,
    l: u32,
    prec: usize,
) -> Result<Real> {
    if k > n || l > n - k {
        return Err(Error::InvalidParameter("requires 0 <= k <= n, 0 <= l <= n-k".into()));
    }
    let f = f_by_formula(n, sigma, &qr(q));
    let base = f.entry(k, l) / (BigRational::one() + sigma);
    let ratio = weight_ratio(n, sigma, &qr(q), k, l);
    Ok(Real::from_rational(&base, prec).mul(&Real::from_rational(&ratio, prec).sqrt()))
}

/// Exact square of a'_{k,l} (the sign is the sign of F_{k,l}).
pub fn a_prime_entry_squared(
    n: u32,
    sigma: &BigRational,
    q: u32,
    k: u32,
    l: u32,
) -> Result<BigRational> {
    if k > n || l > n - k {
        return Err(Error::InvalidParameter("requires 0 <= k <= n, 0 <= l <= n-k".into()));
    }
    let f = f_by_formula(n, sigma, &qr(q));
    let base = f.entry(k, l) / (BigRational::one() + sigma);
    Ok(&base * &base * weight_ratio(n, sigma, &qr(q), k, l))
}

/// Eigenvalues of the certificate matrix restricted to one isotypic block.
#[derive(Clone, Debug, Serialize)]
pub struct BlockEigenvalues {
    pub block: u32,
    pub multiplicity: String,
    /// pairs (k, eigenvalue) for k = block..n-block
    pub eigenvalues: Vec<(u32, Scalar)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockSpectrum {
    pub n: u32,
    pub q: u32,
    pub sigma: Scalar,
    pub blocks: Vec<BlockEigenvalues>,
    /// exact verification of the reparametrized-block identity
    pub shift_identity_ok: bool,
}

impl BlockSpectrum {
    pub fn min_eigenvalue(&self) -> Scalar {
        let mut min: Option<Scalar> = None;
        for b in &self.blocks {
            for (_, ev) in &b.eigenvalues {
                if min.as_ref().is_none_or(|m| ev.cmp_scalar(m).is_lt()) {
                    min = Some(ev.clone());
                }
            }
        }
        min.expect("nonempty spectrum")
    }

    /// Zero eigenvalues as (block, k) pairs.
    pub fn zero_positions(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for b in &self.blocks {
            for (k, ev) in &b.eigenvalues {
                if ev.is_zero() {
                    out.push((b.block, *k));
                }
            }
        }
        out
    }
}

/// Closed-form eigenvalue (sigma + (-1)^k sigma^k q^{k(k-1)}) / (1 + sigma).
pub fn block_eigenvalue(sigma: &BigRational, q: &BigRational, k: u32) -> BigRational {
    let term = sign(k) * num::pow::pow(sigma.clone(), k as usize)
        * pow_q(q, (k as i64) * (k as i64 - 1));
    (sigma + term) / (BigRational::one() + sigma)
}

/// Per-block spectrum of the certificate matrix, with the exact shift
/// identity (F_i)_{k,l} = (F at n-2i, sigma q^{2i})_{k-i,l-i} (-1)^i sigma^i q^{i(i-1)}
/// verified entrywise for every block index.
pub fn block_spectrum(n: u32, sigma: &BigRational, q: u32) -> Result<BlockSpectrum> {
    let qrat = qr(q);
    let f = f_by_formula(n, sigma, &qrat);
    let mut blocks = Vec::new();
    let mut shift_ok = true;
    for i in 0..=(n / 2) {
        let d_i = gaussian_binomial(n as i64, i as i64, &qrat)
            - gaussian_binomial(n as i64, i as i64 - 1, &qrat);
        let eigenvalues: Vec<(u32, Scalar)> = (i..=(n - i))
            .map(|k| (k, Scalar::exact(block_eigenvalue(sigma, &qrat, k))))
            .collect();
        // reparametrized block: same F shape at (n-2i, sigma q^{2i})
        let shifted_sigma = sigma * pow_q(&qrat, 2 * i as i64);
        let f_shift = f_by_formula(n - 2 * i, &shifted_sigma, &qrat);
        let scale = sign(i) * num::pow::pow(sigma.clone(), i as usize)
            * pow_q(&qrat, (i as i64) * (i as i64 - 1));
        for k in i..=(n - i) {
            for l in i..=(n - i) {
                let fi = f.entry(k, l)
                    * sign(i)
                    * pow_q(&qrat, binom2(i as u64) as i64 - (i as i64) * (k as i64))
                    * qq_pochhammer(n - k - i, &qrat)
                    * qq_pochhammer(l, &qrat)
                    / (qq_pochhammer(n - k, &qrat) * qq_pochhammer(l - i, &qrat));
                let expected = f_shift.entry(k - i, l - i) * &scale;
                if fi != expected {
                    shift_ok = false;
                }
            }
        }
        blocks.push(BlockEigenvalues {
            block: i,
            multiplicity: d_i.to_integer().to_string(),
            eigenvalues,
        });
    }
    Ok(BlockSpectrum {
        n,
        q,
        sigma: Scalar::exact(sigma.clone()),
        blocks,
        shift_identity_ok: shift_ok,
    })
}

/// Largest bias for which the certificate stays positive semidefinite:
/// q^{-2 floor((n-1)/2) - 1}, i.e. q^{-n} for odd n and q^{-n+1} for even n.
pub fn psd_threshold(n: u32, q: u32) -> Result<BigRational> {
    if n < 1 {
        return Err(Error::InvalidParameter("threshold needs n >= 1".into()));
    }
    let e = 2 * ((n - 1) / 2) + 1;
    Ok(pow_q(&qr(q), -(e as i64)))
}

/// The odd-power condition sigma^k q^{k(k-1)} <= sigma for odd k <= n;
/// equivalent to nonnegativity of every block eigenvalue.
pub fn psd_condition(n: u32, sigma: &Scalar, q: u32) -> bool {
    let qs = Scalar::from_int(q as i64);
    let mut k = 1u32;
    while k <= n {
        let lhs = sigma.powi(k as i64).mul(&qs.powi((k as i64) * (k as i64 - 1)));
        if lhs.cmp_scalar(sigma).is_gt() {
            return false;
        }
        k += 2;
    }
    true
}
