//! Desk-scale float assembly of the certificate over the whole lattice:
//! containment and disjointness matrices from enumeration, the lifted
//! orthonormal basis, the certificate matrix with its spectrum and kernel,
//! and the spectral (ratio-bound) reading of the same construction.
//!
//! The exact layer decides the semidefiniteness verdict; this layer
//! corroborates the assembly numerically and never overrides it.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num::rational::BigRational;
use num::{One, Signed};
use serde::Serialize;

use super::{f_by_formula, psd_threshold};
use crate::error::{Error, Result};
use crate::families::Family;
use crate::gfspace::{enumerate_all, Subspace};
use crate::measure::MeasureContext;
use crate::qcombinat::{gaussian_binomial, q_int, qr};
use crate::scalar::{rational_to_f64, Scalar};

/// Relative eigenvalue cutoff used for kernels and PSD checks.
pub const SPECTRAL_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct OnbVector {
    pub block: u32,
    pub index: usize,
    pub level: u32,
    pub vec: DVector<f64>,
}

/// The assembled certificate with its diagnostics.
pub struct FullCertificate {
    pub n: u32,
    pub q: u32,
    pub sigma: BigRational,
    pub alpha: f64,
    pub subspaces: Vec<Subspace>,
    pub dims: Vec<u32>,
    pub layers: Vec<Vec<usize>>,
    pub phi: Vec<f64>,
    pub d_dims: Vec<usize>,
    pub onb: Vec<OnbVector>,
    pub a_prime: DMatrix<f64>,
    pub s_prime: DMatrix<f64>,
    pub w: DVector<f64>,
    pub spectrum: Vec<f64>,
    pub expected_spectrum: Vec<f64>,
    pub spectrum_match_error: f64,
    pub onb_gram_error: f64,
    pub theta_residual: f64,
    pub theta_symmetry_error: f64,
    pub nullspace_residuals: Vec<f64>,
    pub kernel: Vec<DVector<f64>>,
    pub min_eigenvalue: f64,
    pub spectral_radius: f64,
    pub a_support_ok: bool,
}

/// Summary without the large matrices, for machine-readable output.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateSummary {
    pub n: u32,
    pub q: u32,
    pub lattice_size: usize,
    pub min_eigenvalue: f64,
    pub spectral_radius: f64,
    pub psd_within_tolerance: bool,
    pub spectrum_match_error: f64,
    pub kernel_dim: usize,
    pub onb_gram_error: f64,
    pub theta_residual: f64,
    pub a_support_ok: bool,
}

impl FullCertificate {
    pub fn summary(&self) -> CertificateSummary {
        CertificateSummary {
            n: self.n,
            q: self.q,
            lattice_size: self.subspaces.len(),
            min_eigenvalue: self.min_eigenvalue,
            spectral_radius: self.spectral_radius,
            psd_within_tolerance: self.min_eigenvalue
                >= -SPECTRAL_TOL * (1.0 + self.spectral_radius),
            spectrum_match_error: self.spectrum_match_error,
            kernel_dim: self.kernel.len(),
            onb_gram_error: self.onb_gram_error,
            theta_residual: self.theta_residual,
            a_support_ok: self.a_support_ok,
        }
    }
}

fn gauss_f64(n: i64, k: i64, q: u32) -> f64 {
    rational_to_f64(&gaussian_binomial(n, k, &qr(q)))
}

/// theta_i^{k,l} in floats:
/// (-1)^i q^{C(i,2)+kl-i(k+l)/2} [n-k-i, l-i] sqrt([n-2i,k-i]/[n-2i,l-i]).
fn theta(n: u32, q: u32, i: u32, k: u32, l: u32) -> f64 {
    let qf = q as f64;
    let e = (i * (i.saturating_sub(1)) / 2) as f64 + (k * l) as f64
        - (i as f64) * ((k + l) as f64) / 2.0;
    let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
    let g1 = gauss_f64(n as i64 - k as i64 - i as i64, l as i64 - i as i64, q);
    let g2 = gauss_f64(n as i64 - 2 * i as i64, k as i64 - i as i64, q);
    let g3 = gauss_f64(n as i64 - 2 * i as i64, l as i64 - i as i64, q);
    sign * qf.powf(e) * g1 * (g2 / g3).sqrt()
}

pub fn build_full_certificate(
    n: u32,
    q: u32,
    sigma: &BigRational,
    cap: u64,
) -> Result<FullCertificate> {
    if !sigma.is_positive() {
        return Err(Error::NonpositiveSigma);
    }
    let subspaces: Vec<Subspace> = enumerate_all(n, q, cap)?.collect();
    let size = subspaces.len();
    let dims: Vec<u32> = subspaces.iter().map(|s| s.dim()).collect();
    let mut layers: Vec<Vec<usize>> = vec![Vec::new(); (n + 1) as usize];
    for (i, &d) in dims.iter().enumerate() {
        layers[d as usize].push(i);
    }

    let sig = Scalar::exact(sigma.clone());
    let phi: Vec<f64> = (0..=n)
        .map(|k| rational_to_f64(crate::qcombinat::phi(&sig, q, n, k).as_exact().unwrap()))
        .collect();

    // pairwise intersection dimensions drive everything downstream
    let mut meet = vec![0u32; size * size];
    for i in 0..size {
        for j in i..size {
            let d = subspaces[i].intersection_dim(&subspaces[j])?;
            meet[i * size + j] = d;
            meet[j * size + i] = d;
        }
    }
    let contains = |big: usize, small: usize| meet[big * size + small] == dims[small];

    // W_{k,i} block as a dense matrix (rows: layer k, cols: layer i)
    let w_block = |k: u32, i: u32| -> DMatrix<f64> {
        let rows = &layers[k as usize];
        let cols = &layers[i as usize];
        DMatrix::from_fn(rows.len(), cols.len(), |a, b| {
            let (x, y) = (rows[a], cols[b]);
            if contains(x, y) || contains(y, x) {
                1.0
            } else {
                0.0
            }
        })
    };

    // nullspace bases U_i of W_{i-1,i} via the Gram spectrum
    let half = n / 2;
    let mut d_dims = Vec::new();
    let mut nullspace_residuals = Vec::new();
    let mut bases: Vec<Vec<DVector<f64>>> = Vec::new();
    for i in 0..=half {
        let layer_size = layers[i as usize].len();
        if i == 0 {
            d_dims.push(1);
            nullspace_residuals.push(0.0);
            bases.push(vec![DVector::from_element(1, 1.0)]);
            continue;
        }
        let wi = w_block(i - 1, i);
        let gram = wi.transpose() * &wi;
        let eig = SymmetricEigen::new(gram);
        let max_ev = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
        // singular value of a unit Gram eigenvector is |W v|; threshold at
        // 1e-9 of the largest singular value
        let cut = SPECTRAL_TOL * max_ev.sqrt();
        let mut kernel_vecs = Vec::new();
        let mut worst = 0.0f64;
        for idx in 0..eig.eigenvalues.len() {
            let v = DVector::from_iterator(layer_size, eig.eigenvectors.column(idx).iter().cloned());
            let res = (&wi * &v).norm();
            if res <= cut {
                worst = worst.max(res);
                kernel_vecs.push(v);
            }
        }
        let expect = (gaussian_binomial(n as i64, i as i64, &qr(q))
            - gaussian_binomial(n as i64, i as i64 - 1, &qr(q)))
        .to_integer();
        if BigRational::from_integer(expect.clone())
            != BigRational::from_integer(num::bigint::BigInt::from(kernel_vecs.len()))
        {
            return Err(Error::InvalidParameter(format!(
                "ill-conditioned nullspace at block {i}: found {} vectors, expected {expect}, residual {worst:.3e}",
                kernel_vecs.len()
            )));
        }
        // deterministic basis order
        kernel_vecs.sort_by(|a, b| {
            a.iter()
                .zip(b.iter())
                .find_map(|(x, y)| x.partial_cmp(y).filter(|o| o.is_ne()))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        d_dims.push(kernel_vecs.len());
        nullspace_residuals.push(worst);
        bases.push(kernel_vecs);
    }

    // lift to the orthonormal basis of R^Omega
    let mut onb = Vec::new();
    for i in 0..=half {
        for (r, u) in bases[i as usize].iter().enumerate() {
            for k in i..=(n - i) {
                let coef = (q as f64).powf(-(i as f64) * ((k - i) as f64) / 2.0)
                    / gauss_f64(n as i64 - 2 * i as i64, k as i64 - i as i64, q).sqrt();
                let lifted = &w_block(k, i) * u;
                let mut vec = DVector::zeros(size);
                for (a, &x) in layers[k as usize].iter().enumerate() {
                    vec[x] = coef * lifted[a];
                }
                onb.push(OnbVector { block: i, index: r, level: k, vec });
            }
        }
    }
    let mut onb_gram_error = 0.0f64;
    for (a, va) in onb.iter().enumerate() {
        for (b, vb) in onb.iter().enumerate().skip(a) {
            let dot = va.vec.dot(&vb.vec);
            let expect = if a == b { 1.0 } else { 0.0 };
            onb_gram_error = onb_gram_error.max((dot - expect).abs());
        }
    }

    // disjointness action check against the closed-form coefficients
    let wbar = DMatrix::from_fn(size, size, |i, j| {
        if meet[i * size + j] == 0 {
            1.0
        } else {
            0.0
        }
    });
    let mut theta_residual = 0.0f64;
    let mut theta_symmetry_error = 0.0f64;
    for v in &onb {
        let (i, l) = (v.block, v.level);
        let image = &wbar * &v.vec;
        for k in 0..=n {
            if k < i || k > n - i {
                // the image must vanish outside the block's level range
                for &x in &layers[k as usize] {
                    theta_residual = theta_residual.max(image[x].abs());
                }
                continue;
            }
            let th = theta(n, q, i, k, l);
            theta_symmetry_error = theta_symmetry_error.max((th - theta(n, q, i, l, k)).abs());
            let partner = onb
                .iter()
                .find(|o| o.block == i && o.index == v.index && o.level == k)
                .expect("partner level exists");
            for &x in &layers[k as usize] {
                theta_residual = theta_residual.max((image[x] - th * partner.vec[x]).abs());
            }
        }
    }

    // A' = sum over k+l <= n of (a'_{k,l}/theta_0^{k,l}) Wbar_{k,l};
    // the coefficient reduces to [F_{k,l}/((1+sigma) q^{kl} [n-k, l])] sqrt(phi_k/phi_l)
    let f = f_by_formula(n, sigma, &qr(q));
    let mut a_prime = DMatrix::zeros(size, size);
    for k in 0..=n {
        for l in 0..=(n - k) {
            let denom = (BigRational::one() + sigma)
                * num::pow::pow(qr(q), (k * l) as usize)
                * gaussian_binomial((n - k) as i64, l as i64, &qr(q));
            let base = rational_to_f64(&(f.entry(k, l) / denom));
            let coef = base * (phi[k as usize] / phi[l as usize]).sqrt();
            for &x in &layers[k as usize] {
                for &y in &layers[l as usize] {
                    if meet[x * size + y] == 0 {
                        a_prime[(x, y)] += coef;
                    }
                }
            }
        }
    }
    let mut a_support_ok = true;
    for x in 0..size {
        for y in 0..size {
            if meet[x * size + y] != 0 && a_prime[(x, y)] != 0.0 {
                a_support_ok = false;
            }
        }
    }

    let w = DVector::from_iterator(size, dims.iter().map(|&d| phi[d as usize].sqrt()));
    let alpha = rational_to_f64(&(sigma / (BigRational::one() + sigma)));
    let s_prime = DMatrix::identity(size, size) * alpha - &w * w.transpose() + &a_prime;

    let eig = SymmetricEigen::new(s_prime.clone());
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let spectrum: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();

    let mut expected_spectrum = Vec::with_capacity(size);
    let sig_f = rational_to_f64(sigma);
    for i in 0..=half {
        for k in i..=(n - i) {
            let lam = if i == 0 && k == 0 {
                0.0 // the measure vector replaces the k = 0 slot of block 0
            } else {
                let sgn = if k % 2 == 0 { 1.0 } else { -1.0 };
                (sig_f + sgn * sig_f.powi(k as i32) * (q as f64).powi((k * (k - 1)) as i32))
                    / (1.0 + sig_f)
            };
            for _ in 0..d_dims[i as usize] {
                expected_spectrum.push(lam);
            }
        }
    }
    expected_spectrum.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(expected_spectrum.len(), size);
    let spectrum_match_error = spectrum
        .iter()
        .zip(&expected_spectrum)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);

    let spectral_radius = spectrum.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let min_eigenvalue = spectrum[0];
    let ktol = SPECTRAL_TOL * (1.0 + spectral_radius);
    let kernel: Vec<DVector<f64>> = order
        .iter()
        .filter(|&&i| eig.eigenvalues[i].abs() <= ktol)
        .map(|&i| DVector::from_iterator(size, eig.eigenvectors.column(i).iter().cloned()))
        .collect();

    Ok(FullCertificate {
        n,
        q,
        sigma: sigma.clone(),
        alpha,
        subspaces,
        dims,
        layers,
        phi,
        d_dims,
        onb,
        a_prime,
        s_prime,
        w,
        spectrum,
        expected_spectrum,
        spectrum_match_error,
        onb_gram_error,
        theta_residual,
        theta_symmetry_error,
        nullspace_residuals,
        kernel,
        min_eigenvalue,
        spectral_radius,
        a_support_ok,
    })
}

/// Kernel structure at bias strictly below the threshold.
#[derive(Clone, Debug, Serialize)]
pub struct KernelReport {
    pub expected_dim: usize,
    pub kernel_dim: usize,
    pub v0_residual: f64,
    pub v0_prime_residual: f64,
    pub vr_residuals: Vec<f64>,
    pub family_residuals: Vec<f64>,
    pub tolerance: f64,
}

impl KernelReport {
    pub fn all_within_tolerance(&self) -> bool {
        self.kernel_dim == self.expected_dim
            && self.v0_residual <= self.tolerance
            && self.v0_prime_residual <= self.tolerance
            && self.vr_residuals.iter().all(|&r| r <= self.tolerance)
            && self.family_residuals.iter().all(|&r| r <= self.tolerance)
    }
}

/// Verifies the kernel dimension `[n,1] + 1` and reproduces each kernel
/// vector from its construction; `families` are candidate optima whose
/// reweighted characteristic vectors must be killed by the certificate.
pub fn kernel_analysis(cert: &FullCertificate, families: &[Family]) -> Result<KernelReport> {
    let threshold = psd_threshold(cert.n, cert.q)?;
    if cert.sigma >= threshold {
        return Err(Error::NotBelowThreshold { threshold: threshold.to_string() });
    }
    let n = cert.n;
    let q = cert.q;
    let size = cert.subspaces.len();
    let tol = SPECTRAL_TOL * (1.0 + cert.spectral_radius);
    let expected_dim = rational_to_f64(&q_int(n, &qr(q))) as usize + 1;

    let v0_residual = (&cert.s_prime * &cert.w).amax();

    // v0' from the C-image of (nu, 1, 0, ..., 0), nu = -[n,1] sigma / (1+sigma)
    let nu = rational_to_f64(
        &(-q_int(n, &qr(q)) * &cert.sigma / (BigRational::one() + &cert.sigma)),
    );
    let mut v0p = DVector::zeros(size);
    for k in 0..=n {
        let coef = (cert.phi[k as usize] * gauss_f64(n as i64, k as i64, q)).sqrt()
            * (nu + rational_to_f64(&q_int(k, &qr(q))));
        let u = cert
            .onb
            .iter()
            .find(|o| o.block == 0 && o.level == k)
            .expect("block 0 vector");
        v0p += coef * &u.vec;
    }
    let v0_prime_residual = (&cert.s_prime * &v0p).amax();

    // v_r = sum_k eta_k u_{1,r}^k with eta_k = (D_1)_{k,k}
    let qf = q as f64;
    let mut vr_residuals = Vec::new();
    if n >= 2 {
        let d1 = cert.d_dims[1];
        for r in 0..d1 {
            let mut vr = DVector::zeros(size);
            for k in 1..=(n - 1) {
                let ratio = (1.0 - qf.powi((n - k) as i32)) * (1.0 - qf.powi(k as i32));
                let eta = (cert.phi[k as usize] * gauss_f64(n as i64, k as i64, q)).sqrt()
                    * qf.powf(k as f64 / 2.0)
                    * ratio.sqrt();
                let u = cert
                    .onb
                    .iter()
                    .find(|o| o.block == 1 && o.index == r && o.level == k)
                    .expect("block 1 vector");
                vr += eta * &u.vec;
            }
            vr_residuals.push((&cert.s_prime * &vr).amax());
        }
    }

    let mut family_residuals = Vec::new();
    for f in families {
        let mut y = DVector::zeros(size);
        for m in f.members() {
            let idx = cert
                .subspaces
                .iter()
                .position(|s| s == m)
                .ok_or_else(|| Error::InvalidParameter("family member outside lattice".into()))?;
            y[idx] = cert.phi[m.dim() as usize].sqrt();
        }
        family_residuals.push((&cert.s_prime * &y).amax());
    }

    Ok(KernelReport {
        expected_dim,
        kernel_dim: cert.kernel.len(),
        v0_residual,
        v0_prime_residual,
        vr_residuals,
        family_residuals,
        tolerance: tol,
    })
}

/// Weak duality gap for one intersecting family, along both routes:
/// alpha - mu(F) exactly, and the quadratic form of the certificate.
#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub mu: Scalar,
    pub gap_exact: Scalar,
    pub gap_quadratic: f64,
    pub routes_agree: bool,
}

pub fn weak_duality_check(cert: &FullCertificate, family: &Family) -> Result<DualityReport> {
    if family.is_empty() {
        return Err(Error::InvalidParameter("family must be non-empty".into()));
    }
    if !crate::families::is_t_intersecting(family, 1) {
        return Err(Error::InvalidParameter("family must be intersecting".into()));
    }
    let ctx = MeasureContext::new(cert.q, cert.n, Scalar::exact(cert.sigma.clone()))?;
    let mu = ctx.measure_family(family)?;
    let alpha = Scalar::exact(&cert.sigma / (BigRational::one() + &cert.sigma));
    let gap_exact = alpha.sub(&mu);

    let size = cert.subspaces.len();
    let mut y = DVector::zeros(size);
    for m in family.members() {
        let idx = cert
            .subspaces
            .iter()
            .position(|s| s == m)
            .ok_or_else(|| Error::InvalidParameter("family member outside lattice".into()))?;
        y[idx] = cert.phi[m.dim() as usize].sqrt();
    }
    let quad = (y.transpose() * &cert.s_prime * &y)[(0, 0)];
    let gap_quadratic = quad / mu.to_f64();
    let routes_agree = (gap_quadratic - gap_exact.to_f64()).abs()
        <= SPECTRAL_TOL * (1.0 + gap_exact.to_f64().abs());
    Ok(DualityReport { mu, gap_exact, gap_quadratic, routes_agree })
}

/// The ratio bound from the two extreme eigenvalues.
pub fn hoffman_bound(lambda1: f64, lambda_min: f64) -> Result<f64> {
    if lambda1 <= lambda_min {
        return Err(Error::InvalidParameter("needs lambda1 > lambda_min".into()));
    }
    Ok(-lambda_min / (lambda1 - lambda_min))
}

/// Spectral reading of the certificate: the weight matrix reflects
/// adjacency, the reweighted measure vector is its top eigenvector, and the
/// ratio bound reproduces the star bound.
#[derive(Clone, Debug, Serialize)]
pub struct HoffmanReport {
    pub adjacency_ok: bool,
    pub eigenvector_residual: f64,
    pub lambda1: f64,
    pub lambda1_expected: Scalar,
    pub lambda_min: f64,
    pub lambda_min_expected: Scalar,
    pub bound: f64,
    pub bound_expected: Scalar,
    pub matches_star_bound: bool,
}

pub fn hoffman_pipeline(n: u32, q: u32, sigma: &BigRational, cap: u64) -> Result<HoffmanReport> {
    let cert = build_full_certificate(n, q, sigma, cap)?;
    let one_plus = BigRational::one() + sigma;
    let lambda1_expected = Scalar::exact(one_plus.recip());
    let lambda_min_expected = Scalar::exact(-(sigma / &one_plus));
    let bound_expected = Scalar::exact(sigma / &one_plus);

    let image = &cert.a_prime * &cert.w;
    let l1f = lambda1_expected.to_f64();
    let eigenvector_residual = (&image - l1f * &cert.w).amax();

    let eig = SymmetricEigen::new(cert.a_prime.clone());
    let lambda_min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    let lambda1 = eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let bound = hoffman_bound(lambda1, lambda_min)?;
    let matches_star_bound = (bound - bound_expected.to_f64()).abs() <= SPECTRAL_TOL;
    Ok(HoffmanReport {
        adjacency_ok: cert.a_support_ok,
        eigenvector_residual,
        lambda1,
        lambda1_expected,
        lambda_min,
        lambda_min_expected,
        bound,
        bound_expected,
        matches_star_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::star_family;
    use crate::gfspace::DEFAULT_ENUM_CAP as CAP;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn assembly_at_n3_strict() {
        let cert = build_full_certificate(3, 2, &rat(1, 16), CAP).unwrap();
        assert_eq!(cert.subspaces.len(), 16);
        assert_eq!(cert.d_dims, vec![1, 6]);
        assert!(cert.onb_gram_error < 1e-12, "gram {}", cert.onb_gram_error);
        assert!(cert.theta_residual < 1e-12, "theta {}", cert.theta_residual);
        assert!(cert.theta_symmetry_error < 1e-12);
        assert!(cert.spectrum_match_error < 1e-12);
        assert!(cert.a_support_ok);
        assert!(cert.min_eigenvalue >= -SPECTRAL_TOL * (1.0 + cert.spectral_radius));
        assert_eq!(cert.kernel.len(), 8);

        let star = star_family(3, 2, 1, None, CAP).unwrap();
        let report = kernel_analysis(&cert, std::slice::from_ref(&star)).unwrap();
        assert!(report.all_within_tolerance(), "{report:?}");

        let dual = weak_duality_check(&cert, &star).unwrap();
        assert!(dual.gap_exact.is_zero());
        assert!(dual.gap_quadratic.abs() < 1e-9);
        assert!(dual.routes_agree);

        // singleton {F_q^n}: gap = sigma/(1+sigma) - phi_n > 0
        let top = Family::new(3, 2, [Subspace::full(3, 2)]).unwrap();
        let dual = weak_duality_check(&cert, &top).unwrap();
        assert!(dual.gap_exact.is_positive());
        assert!(dual.routes_agree);
    }

    #[test]
    fn kernel_grows_at_threshold() {
        // at sigma exactly on the threshold the k = n eigenvalue also vanishes
        let cert = build_full_certificate(3, 2, &rat(1, 8), CAP).unwrap();
        assert_eq!(cert.kernel.len(), 9);
        assert!(kernel_analysis(&cert, &[]).is_err());
    }

    #[test]
    fn hoffman_values() {
        assert!((hoffman_bound(0.5, -0.25).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(hoffman_bound(1.0, 0.0).unwrap(), 0.0);
        assert!(hoffman_bound(-0.5, 0.5).is_err());
        let rep = hoffman_pipeline(3, 2, &rat(1, 16), CAP).unwrap();
        assert!(rep.adjacency_ok);
        assert!(rep.eigenvector_residual < 1e-12);
        assert!(rep.matches_star_bound);
        assert!((rep.bound - 1.0 / 17.0).abs() < 1e-12);
    }
}
