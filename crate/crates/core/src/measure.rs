//! The sigma-biased measure on the subspace lattice: layer weights, closed
//! forms for star families, concentration moments, and the normalized tail
//! quantities used for the asymptotic evidence.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::Family;
use crate::qcombinat::{binom2, phi, q_int, q_pochhammer, qr, sigma_theta};
use crate::scalar::{Real, Scalar};

/// Parameters (q, n, sigma) with precomputed weights phi(k) and layer
/// masses Phi(k) = [n choose k] phi(k).
#[derive(Clone, Debug)]
pub struct MeasureContext {
    q: u32,
    n: u32,
    sigma: Scalar,
    phi: Vec<Scalar>,
    layer_mass: Vec<Scalar>,
}

impl MeasureContext {
    pub fn new(q: u32, n: u32, sigma: Scalar) -> Result<MeasureContext> {
        if !sigma.is_positive() {
            return Err(Error::NonpositiveSigma);
        }
        crate::gfspace::FiniteField::get(q)?;
        // phi(k+1) = phi(k) sigma q^k and [n,k+1] = [n,k][n-k]/[k+1] keep the
        // construction linear in n
        let qs = Scalar::from_int(q as i64);
        let mut phis = Vec::with_capacity(n as usize + 1);
        phis.push(phi(&sigma, q, n, 0));
        let mut q_to_k = Scalar::one();
        for k in 0..n {
            let next = phis[k as usize].mul(&sigma).mul(&q_to_k);
            phis.push(next);
            q_to_k = q_to_k.mul(&qs);
        }
        let mut layer_mass = Vec::with_capacity(n as usize + 1);
        let mut layer = Scalar::one();
        for k in 0..=n {
            layer_mass.push(layer.mul(&phis[k as usize]));
            if k < n {
                let up = Scalar::exact(q_int(n - k, &qr(q)));
                let down = Scalar::exact(q_int(k + 1, &qr(q)));
                layer = layer.mul(&up).div(&down);
            }
        }
        let total = layer_mass.iter().fold(Scalar::zero(), |a, b| a.add(b));
        match &total {
            Scalar::Exact(t) => assert!(t.is_one(), "layer masses must sum to 1"),
            Scalar::Real(t) => {
                let tol = Real::contract_tolerance(t.precision_bits());
                let gap = t.sub(&Real::one(t.precision_bits())).abs();
                assert!(gap.cmp_real(&tol).is_le(), "layer masses must sum to 1");
            }
        }
        Ok(MeasureContext { q, n, sigma, phi: phis, layer_mass })
    }

    /// Context for sigma = sigma_{theta,n} at the given real precision.
    pub fn biased(theta: &BigRational, n: u32, q: u32, prec: usize) -> Result<MeasureContext> {
        MeasureContext::new(q, n, sigma_theta(theta, n, q, prec)?)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn sigma(&self) -> &Scalar {
        &self.sigma
    }

    pub fn weight(&self, k: u32) -> &Scalar {
        &self.phi[k as usize]
    }

    pub fn layer_mass(&self, k: u32) -> &Scalar {
        &self.layer_mass[k as usize]
    }

    pub fn weights(&self) -> &[Scalar] {
        &self.phi
    }

    pub fn layer_masses(&self) -> &[Scalar] {
        &self.layer_mass
    }

    /// mu(F) = sum over members of phi(dim x).
    pub fn measure_family(&self, family: &Family) -> Result<Scalar> {
        if family.ambient() != self.n || family.order() != self.q {
            return Err(Error::AmbientMismatch {
                n1: self.n,
                q1: self.q,
                n2: family.ambient(),
                q2: family.order(),
            });
        }
        let mut acc = Scalar::zero();
        for m in family.members() {
            acc = acc.add(self.weight(m.dim()));
        }
        Ok(acc)
    }

    /// Closed form mu(A_n^(t)) = sigma^t q^C(t,2) / (-sigma;q)_t.
    pub fn measure_star_closed(&self, t: u32) -> Result<Scalar> {
        if t > self.n {
            return Err(Error::InvalidParameter(format!("t={t} exceeds n={}", self.n)));
        }
        let qs = Scalar::from_int(self.q as i64);
        let num = self.sigma.powi(t as i64).mul(&qs.powi(binom2(t as u64) as i64));
        Ok(num.div(&q_pochhammer(&self.sigma, self.q, t)))
    }

    /// sigma/(1+sigma), the star bound for t = 1.
    pub fn star_bound(&self) -> Scalar {
        self.sigma.div(&Scalar::one().add(&self.sigma))
    }

    /// mu of the dimension-threshold family {x : dim x >= (n+t)/2}.
    pub fn top_family_mass(&self, t: u32) -> Scalar {
        let mut acc = Scalar::zero();
        for k in 0..=self.n {
            if 2 * k >= self.n + t {
                acc = acc.add(self.layer_mass(k));
            }
        }
        acc
    }

    /// Strict tail sum over k > cutoff.
    pub fn tail_above(&self, cutoff: &BigRational) -> Scalar {
        let mut acc = Scalar::zero();
        for k in 0..=self.n {
            if &BigRational::from_integer(BigInt::from(k)) > cutoff {
                acc = acc.add(self.layer_mass(k));
            }
        }
        acc
    }

    /// Strict tail sum over k < cutoff.
    pub fn tail_below(&self, cutoff: &BigRational) -> Scalar {
        let mut acc = Scalar::zero();
        for k in 0..=self.n {
            if &BigRational::from_integer(BigInt::from(k)) < cutoff {
                acc = acc.add(self.layer_mass(k));
            }
        }
        acc
    }
}

/// Product form mu(A_n^(t)) = prod_{j=0}^{t-1} (1 + q^{(1-theta)n - j})^{-1}
/// for the theta-parametrized bias.
pub fn measure_star_product_form(
    theta: &BigRational,
    n: u32,
    q: u32,
    t: u32,
    prec: usize,
) -> Result<Real> {
    if !(theta.is_positive() && theta < &BigRational::one()) {
        return Err(Error::InvalidParameter("theta must satisfy 0 < theta < 1".into()));
    }
    let qf = Real::from_u64(q as u64, prec);
    let one = Real::one(prec);
    let mut acc = one.clone();
    for j in 0..t {
        let e = (BigRational::one() - theta) * BigRational::from_integer(BigInt::from(n))
            - BigRational::from_integer(BigInt::from(j));
        let factor = one.add(&qf.pow_rational(&e));
        acc = acc.div(&factor);
    }
    Ok(acc)
}

/// One observable of the concentration analysis: closed form, independent
/// direct sum, and the limiting value.
#[derive(Clone, Debug, Serialize)]
pub struct MomentEntry {
    pub name: String,
    pub closed: Scalar,
    pub direct: Scalar,
    pub limit: Scalar,
}

/// Moments of X = q^{k - theta n} under the layer distribution.
#[derive(Clone, Debug, Serialize)]
pub struct MomentReport {
    pub theta: String,
    pub n: u32,
    pub q: u32,
    pub mean_x: MomentEntry,
    pub mean_x2: MomentEntry,
    pub var_x: MomentEntry,
    pub mean_xinv: MomentEntry,
    pub mean_xinv2: MomentEntry,
    pub var_xinv: MomentEntry,
}

impl MomentReport {
    pub fn entries(&self) -> [&MomentEntry; 6] {
        [
            &self.mean_x,
            &self.mean_x2,
            &self.var_x,
            &self.mean_xinv,
            &self.mean_xinv2,
            &self.var_xinv,
        ]
    }
}

/// q^e for a rational exponent: exact for integer e, real otherwise.
fn q_pow(q: u32, e: &BigRational, prec: usize) -> Scalar {
    if e.is_integer() {
        use num::ToPrimitive;
        if let Some(i) = e.to_integer().to_i64() {
            return Scalar::exact(qr(q)).powi(i);
        }
    }
    Scalar::real(Real::from_u64(q as u64, prec).pow_rational(e))
}

pub fn moments(theta: &BigRational, n: u32, q: u32, prec: usize) -> Result<MomentReport> {
    let ctx = MeasureContext::biased(theta, n, q, prec)?;
    let sigma = ctx.sigma().clone();
    let tn = theta * BigRational::from_integer(BigInt::from(n));
    let one = Scalar::one();
    let qs = Scalar::from_int(q as i64);
    let qtn = q_pow(q, &tn, prec);

    let sq = |e: i64| sigma.mul(&qs.powi(e)); // sigma q^e
    let mean_x_closed = one.add(&sq(n as i64)).div(&qtn.mul(&one.add(&sigma)));
    let mean_x2_closed = one
        .add(&sq(n as i64))
        .mul(&one.add(&sq(n as i64 + 1)))
        .div(&qtn.powi(2).mul(&one.add(&sigma)).mul(&one.add(&sq(1))));
    let mean_xinv_closed =
        qtn.mul(&one.add(&sq(-1))).div(&one.add(&sq(n as i64 - 1)));
    let mean_xinv2_closed = qtn
        .powi(2)
        .mul(&one.add(&sq(-2)))
        .mul(&one.add(&sq(-1)))
        .div(&one.add(&sq(n as i64 - 2)).mul(&one.add(&sq(n as i64 - 1))));

    // independent route: direct sums of q^{m(k - theta n)} Phi(k)
    let direct_power_sum = |m: i64| -> Scalar {
        let step = qs.powi(m);
        let mut power = Scalar::one();
        let mut acc = Scalar::zero();
        for k in 0..=n {
            acc = acc.add(&power.mul(ctx.layer_mass(k)));
            if k < n {
                power = power.mul(&step);
            }
        }
        acc.mul(&q_pow(q, &(-&tn * BigRational::from_integer(BigInt::from(m))), prec))
    };
    let mean_x_direct = direct_power_sum(1);
    let mean_x2_direct = direct_power_sum(2);
    let mean_xinv_direct = direct_power_sum(-1);
    let mean_xinv2_direct = direct_power_sum(-2);

    let var = |m2: &Scalar, m1: &Scalar| m2.sub(&m1.mul(m1));
    let qi = q as i64;
    let entry = |name: &str, closed: Scalar, direct: Scalar, limit: Scalar| MomentEntry {
        name: name.into(),
        closed,
        direct,
        limit,
    };
    Ok(MomentReport {
        theta: theta.to_string(),
        n,
        q,
        mean_x: entry("E[X]", mean_x_closed.clone(), mean_x_direct.clone(), Scalar::one()),
        mean_x2: entry(
            "E[X^2]",
            mean_x2_closed.clone(),
            mean_x2_direct.clone(),
            Scalar::from_int(qi),
        ),
        var_x: entry(
            "V[X]",
            var(&mean_x2_closed, &mean_x_closed),
            var(&mean_x2_direct, &mean_x_direct),
            Scalar::from_int(qi - 1),
        ),
        mean_xinv: entry(
            "E[X^-1]",
            mean_xinv_closed.clone(),
            mean_xinv_direct.clone(),
            Scalar::from_int(qi),
        ),
        mean_xinv2: entry(
            "E[X^-2]",
            mean_xinv2_closed.clone(),
            mean_xinv2_direct.clone(),
            Scalar::from_int(qi * qi * qi),
        ),
        var_xinv: entry(
            "V[X^-1]",
            var(&mean_xinv2_closed, &mean_xinv_closed),
            var(&mean_xinv2_direct, &mean_xinv_direct),
            Scalar::from_int(qi * qi * qi - qi * qi),
        ),
    })
}

/// A tail sum together with the normalizer demanded by the matching claim.
#[derive(Clone, Debug, Serialize)]
pub struct TailReport {
    pub claim: String,
    pub theta: String,
    pub t: u32,
    pub q: u32,
    pub n: u32,
    pub cutoff: String,
    pub tail_mass: Scalar,
    pub normalizer: Scalar,
    pub normalized: Scalar,
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Upper tail sum over k > n/2, normalized by q^{(1-theta)tn}.
pub fn upper_tail_report(theta: &BigRational, n: u32, q: u32, t: u32, prec: usize) -> Result<TailReport> {
    let ctx = MeasureContext::biased(theta, n, q, prec)?;
    let cutoff = rational(n as i64, 2);
    let tail = ctx.tail_above(&cutoff);
    let e = (BigRational::one() - theta) * rational((t * n) as i64, 1);
    let normalizer = q_pow(q, &e, prec);
    Ok(TailReport {
        claim: "upper-tail".into(),
        theta: theta.to_string(),
        t,
        q,
        n,
        cutoff: format!("k > {cutoff}"),
        tail_mass: tail.clone(),
        normalizer: normalizer.clone(),
        normalized: tail.mul(&normalizer),
    })
}

/// Default exponent constant for the lower-tail claim: (theta - 1/2)^2 / 4.
pub fn default_delta(theta: &BigRational) -> BigRational {
    let d = theta - rational(1, 2);
    &d * &d / rational(4, 1)
}

/// Lower tail sum over k < (n+t)/2, normalized by q^{delta n^2}.
pub fn lower_tail_report(
    theta: &BigRational,
    n: u32,
    q: u32,
    t: u32,
    delta: Option<BigRational>,
    prec: usize,
) -> Result<TailReport> {
    let delta = delta.unwrap_or_else(|| default_delta(theta));
    if !delta.is_positive() {
        return Err(Error::InvalidParameter("delta must be positive".into()));
    }
    let ctx = MeasureContext::biased(theta, n, q, prec)?;
    let cutoff = rational((n + t) as i64, 2);
    let tail = ctx.tail_below(&cutoff);
    let e = &delta * rational((n as i64) * (n as i64), 1);
    let normalizer = q_pow(q, &e, prec);
    Ok(TailReport {
        claim: "lower-tail".into(),
        theta: theta.to_string(),
        t,
        q,
        n,
        cutoff: format!("k < {cutoff}"),
        tail_mass: tail.clone(),
        normalizer: normalizer.clone(),
        normalized: tail.mul(&normalizer),
    })
}

/// Upper tail sum over k > (n-t-1)/2, normalized by q^{2tn}.
pub fn cross_tail_report(theta: &BigRational, n: u32, q: u32, t: u32, prec: usize) -> Result<TailReport> {
    let ctx = MeasureContext::biased(theta, n, q, prec)?;
    let cutoff = rational(n as i64 - t as i64 - 1, 2);
    let tail = ctx.tail_above(&cutoff);
    let normalizer = Scalar::exact(qr(q)).powi(2 * (t as i64) * (n as i64));
    Ok(TailReport {
        claim: "cross-tail".into(),
        theta: theta.to_string(),
        t,
        q,
        n,
        cutoff: format!("k > {cutoff}"),
        tail_mass: tail.clone(),
        normalizer: normalizer.clone(),
        normalized: tail.mul(&normalizer),
    })
}

/// Direction of the layer-mass profile check.
#[derive(Clone, Debug, Serialize)]
pub struct ProfileReport {
    pub direction: String,
    pub lo: u32,
    pub hi: u32,
    pub holds: bool,
    pub first_violation: Option<u32>,
}

/// Verifies the monotone shape of Phi around its mode: decreasing above
/// ceil(n/2) for theta < 1/2, increasing below ceil((n+t)/2) for theta > 1/2.
/// Uses the ratio Phi(k+1)/Phi(k) = ([n-k]/[k+1]) sigma q^k directly.
pub fn monotone_profile(
    theta: &BigRational,
    n: u32,
    q: u32,
    t: u32,
    prec: usize,
) -> Result<ProfileReport> {
    let sigma = sigma_theta(theta, n, q, prec)?;
    let half = rational(1, 2);
    let qs = Scalar::from_int(q as i64);
    let up_ratio = |k: u32| -> Scalar {
        // Phi(k+1)/Phi(k)
        let num = Scalar::exact(crate::qcombinat::q_int(n - k, &qr(q)));
        let den = Scalar::exact(crate::qcombinat::q_int(k + 1, &qr(q)));
        num.div(&den).mul(&sigma).mul(&qs.powi(k as i64))
    };
    if theta < &half {
        let lo = n.div_ceil(2);
        let mut first = None;
        for k in lo..n {
            if up_ratio(k).cmp_scalar(&Scalar::one()).is_ge() {
                first = Some(k);
                break;
            }
        }
        Ok(ProfileReport {
            direction: "decreasing above ceil(n/2)".into(),
            lo,
            hi: n,
            holds: first.is_none(),
            first_violation: first,
        })
    } else if theta > &half {
        let hi = (n + t).div_ceil(2).min(n);
        let mut first = None;
        for k in 1..=hi {
            // Phi(k-1)/Phi(k) < 1
            if up_ratio(k - 1).cmp_scalar(&Scalar::one()).is_le() {
                first = Some(k);
                break;
            }
        }
        Ok(ProfileReport {
            direction: "increasing below ceil((n+t)/2)".into(),
            lo: 0,
            hi,
            holds: first.is_none(),
            first_violation: first,
        })
    } else {
        Err(Error::InvalidParameter("profile check needs theta != 1/2".into()))
    }
}
