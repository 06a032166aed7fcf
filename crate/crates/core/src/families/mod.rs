//! Intersecting families of subspaces: predicates, canonical constructions,
//! the exact extremal search, arithmetic counterexamples, and the uniform
//! bound oracles.

pub mod search;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gfspace::{enumerate_all, layer, Subspace};
use crate::qcombinat::{q_int, qr};
use crate::scalar::Real;

pub use search::{max_measure_t_intersecting, SearchConfig, SearchResult};

/// A finite set of subspaces of one ambient space, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Family {
    n: u32,
    q: u32,
    members: Vec<Subspace>,
}

impl Family {
    pub fn empty(n: u32, q: u32) -> Family {
        Family { n, q, members: Vec::new() }
    }

    pub fn new(n: u32, q: u32, members: impl IntoIterator<Item = Subspace>) -> Result<Family> {
        let mut ms: Vec<Subspace> = members.into_iter().collect();
        for m in &ms {
            if m.ambient() != n || m.order() != q {
                return Err(Error::AmbientMismatch {
                    n1: n,
                    q1: q,
                    n2: m.ambient(),
                    q2: m.order(),
                });
            }
        }
        ms.sort();
        ms.dedup();
        Ok(Family { n, q, members: ms })
    }

    pub fn ambient(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// dim(x ∩ y) >= t for every pair including x = y; members of dimension
/// below t are therefore never allowed.
pub fn is_t_intersecting(family: &Family, t: u32) -> bool {
    let ms = family.members();
    for (i, x) in ms.iter().enumerate() {
        if x.dim() < t {
            return false;
        }
        for y in &ms[i + 1..] {
            if x.intersection_dim(y).expect("same ambient") < t {
                return false;
            }
        }
    }
    true
}

/// dim(x ∩ y) >= t for every cross pair; self-pairs are not required.
pub fn is_cross_t_intersecting(u: &Family, w: &Family, t: u32) -> Result<bool> {
    if u.ambient() != w.ambient() || u.order() != w.order() {
        return Err(Error::AmbientMismatch {
            n1: u.ambient(),
            q1: u.order(),
            n2: w.ambient(),
            q2: w.order(),
        });
    }
    for x in u.members() {
        for y in w.members() {
            if x.intersection_dim(y)? < t {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The star A_n^(t) around a given core: all subspaces containing it,
/// optionally restricted to dim <= upto.
pub fn star_family_at(core: &Subspace, upto: Option<u32>, cap: u64) -> Result<Family> {
    let (n, q) = (core.ambient(), core.order());
    let bound = upto.unwrap_or(n);
    let mut members = Vec::new();
    for x in enumerate_all(n, q, cap)? {
        if x.dim() <= bound && x.contains(core)? {
            members.push(x);
        }
    }
    Family::new(n, q, members)
}

/// The canonical star A_n^(t): core = span of the first t basis vectors.
pub fn star_family(n: u32, q: u32, t: u32, upto: Option<u32>, cap: u64) -> Result<Family> {
    if t == 0 || t > n {
        return Err(Error::InvalidParameter(format!("star needs 1 <= t <= n, got t={t}")));
    }
    star_family_at(&Subspace::coordinate_subspace(n, q, t), upto, cap)
}

/// The dimension-threshold family {x : dim x >= (n+t)/2}; t-intersecting by
/// dimension count.
pub fn top_family(n: u32, q: u32, t: u32, cap: u64) -> Result<Family> {
    if t == 0 {
        return Err(Error::InvalidParameter("t must be positive".into()));
    }
    let mut members = Vec::new();
    for x in enumerate_all(n, q, cap)? {
        if 2 * x.dim() >= n + t {
            members.push(x);
        }
    }
    Family::new(n, q, members)
}

/// The n = k + l subspace counterexample: U = lines inside a plane z,
/// W = l-subspaces containing z. Cross 1-intersecting with
/// `|U||W| = [2,1][l-1,1] > [l,1]`, beating the would-be product bound.
#[derive(Clone, Debug, Serialize)]
pub struct SubspacePairReport {
    pub l: u32,
    pub q: u32,
    pub n: u32,
    pub u_family: Family,
    pub w_family: Family,
    pub u_size: String,
    pub w_size: String,
    pub product: String,
    pub ekr_product: String,
    pub exceeds: bool,
}

pub fn product_bound_subspace_pair(l: u32, q: u32, cap: u64) -> Result<SubspacePairReport> {
    if l < 3 {
        return Err(Error::InvalidParameter("the construction needs l >= 3".into()));
    }
    let n = l + 1;
    let z = Subspace::coordinate_subspace(n, q, 2);
    let mut u_members = Vec::new();
    for x in layer(n, 1, q, cap)? {
        if z.contains(&x)? {
            u_members.push(x);
        }
    }
    let mut w_members = Vec::new();
    for x in layer(n, l, q, cap)? {
        if x.contains(&z)? {
            w_members.push(x);
        }
    }
    let u_family = Family::new(n, q, u_members)?;
    let w_family = Family::new(n, q, w_members)?;

    let b = |m: u32| q_int(m, &qr(q)).to_integer();
    let u_size = b(2);
    let w_size = q_int(l - 1, &qr(q)).to_integer();
    assert_eq!(BigInt::from(u_family.len()), u_size);
    assert_eq!(BigInt::from(w_family.len()), w_size);
    let product = &u_size * &w_size;
    let ekr_product = b(l);
    let exceeds = product > ekr_product;
    Ok(SubspacePairReport {
        l,
        q,
        n,
        u_family,
        w_family,
        u_size: u_size.to_string(),
        w_size: w_size.to_string(),
        product: product.to_string(),
        ekr_product: ekr_product.to_string(),
        exceeds,
    })
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// The subset-world arithmetic: (2n-k-1)k(l-1) > (n-1)^2 together with the
/// exact binomial product comparison.
#[derive(Clone, Debug, Serialize)]
pub struct SubsetCheckReport {
    pub k: u64,
    pub l: u64,
    pub n: u64,
    pub lhs: String,
    pub rhs: String,
    pub condition_holds: bool,
    pub u_size: String,
    pub w_size: String,
    pub product: String,
    pub ekr_product: String,
    pub product_exceeds: bool,
}

pub fn product_bound_subset_check(k: u64, l: u64, n: u64) -> Result<SubsetCheckReport> {
    if n < k + l {
        return Err(Error::InvalidParameter("requires n >= k + l".into()));
    }
    let lhs = BigInt::from(2 * n - k - 1) * BigInt::from(k) * BigInt::from(l.saturating_sub(1));
    let rhs = BigInt::from(n - 1) * BigInt::from(n - 1);
    let u_size = binomial(n, k) - binomial(n - 2, k);
    let w_size = if l >= 2 { binomial(n - 2, l - 2) } else { BigInt::zero() };
    let product = &u_size * &w_size;
    let ekr_product = binomial(n - 1, k - 1) * binomial(n - 1, l - 1);
    Ok(SubsetCheckReport {
        k,
        l,
        n,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        condition_holds: lhs > rhs,
        u_size: u_size.to_string(),
        w_size: w_size.to_string(),
        product: product.to_string(),
        ekr_product: ekr_product.to_string(),
        product_exceeds: product > ekr_product,
    })
}

/// One uniform-bound check against a proved theorem; a violated applicable
/// check indicates an implementation bug, never new mathematics.
#[derive(Clone, Debug, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub applicable: bool,
    pub note: String,
    pub bound: Option<String>,
    pub actual: Option<String>,
    pub satisfied: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct UniformBoundReport {
    pub checks: Vec<OracleCheck>,
    pub violation: bool,
}

fn uniform_dim(f: &Family) -> Option<u32> {
    let mut it = f.members().iter();
    let first = it.next()?.dim();
    if it.all(|m| m.dim() == first) {
        Some(first)
    } else {
        None
    }
}

/// Checks the single-family bound |U| <= [n-t, k-t] (needs n >= 2k and a
/// t-intersecting uniform U) and the cross bound
/// |U||W| <= [n-t, k-t][n-t, l-t] (needs n >= k+l+t+1).
#[allow(clippy::int_plus_one)]
pub fn uniform_bound_oracle(
    u: &Family,
    w: Option<&Family>,
    t: u32,
) -> Result<UniformBoundReport> {
    if t == 0 {
        return Err(Error::InvalidParameter("t must be positive".into()));
    }
    let n = u.ambient();
    let q = u.order();
    let mut checks = Vec::new();

    let single = |name: &str, f: &Family| -> OracleCheck {
        if f.is_empty() {
            return OracleCheck {
                name: name.into(),
                applicable: true,
                note: "empty family, trivially within bound".into(),
                bound: None,
                actual: Some("0".into()),
                satisfied: true,
            };
        }
        let Some(k) = uniform_dim(f) else {
            return OracleCheck {
                name: name.into(),
                applicable: false,
                note: "family is not uniform".into(),
                bound: None,
                actual: None,
                satisfied: true,
            };
        };
        if n < 2 * k {
            return OracleCheck {
                name: name.into(),
                applicable: false,
                note: format!("needs n >= 2k (n={n}, k={k})"),
                bound: None,
                actual: None,
                satisfied: true,
            };
        }
        if k < t || !is_t_intersecting(f, t) {
            return OracleCheck {
                name: name.into(),
                applicable: false,
                note: "family is not t-intersecting".into(),
                bound: None,
                actual: None,
                satisfied: true,
            };
        }
        let bound = crate::qcombinat::gaussian_binomial((n - t) as i64, (k - t) as i64, &qr(q))
            .to_integer();
        let actual = BigInt::from(f.len());
        OracleCheck {
            name: name.into(),
            applicable: true,
            note: String::new(),
            bound: Some(bound.to_string()),
            actual: Some(actual.to_string()),
            satisfied: actual <= bound,
        }
    };

    checks.push(single("t-intersecting uniform bound (U)", u));
    if let Some(w) = w {
        if w.ambient() != n || w.order() != q {
            return Err(Error::AmbientMismatch {
                n1: n,
                q1: q,
                n2: w.ambient(),
                q2: w.order(),
            });
        }
        checks.push(single("t-intersecting uniform bound (W)", w));
        let cross = if u.is_empty() || w.is_empty() {
            OracleCheck {
                name: "cross bound (U, W)".into(),
                applicable: true,
                note: "an empty side makes the product zero".into(),
                bound: None,
                actual: Some("0".into()),
                satisfied: true,
            }
        } else {
            match (uniform_dim(u), uniform_dim(w)) {
                (Some(k), Some(l)) if n >= k + l + t + 1 => {
                    if !is_cross_t_intersecting(u, w, t)? {
                        OracleCheck {
                            name: "cross bound (U, W)".into(),
                            applicable: false,
                            note: "families are not cross t-intersecting".into(),
                            bound: None,
                            actual: None,
                            satisfied: true,
                        }
                    } else {
                        let bound = (crate::qcombinat::gaussian_binomial(
                            (n - t) as i64,
                            k as i64 - t as i64,
                            &qr(q),
                        ) * crate::qcombinat::gaussian_binomial(
                            (n - t) as i64,
                            l as i64 - t as i64,
                            &qr(q),
                        ))
                        .to_integer();
                        let actual = BigInt::from(u.len()) * BigInt::from(w.len());
                        OracleCheck {
                            name: "cross bound (U, W)".into(),
                            applicable: true,
                            note: String::new(),
                            bound: Some(bound.to_string()),
                            actual: Some(actual.to_string()),
                            satisfied: actual <= bound,
                        }
                    }
                }
                (Some(k), Some(l)) => OracleCheck {
                    name: "cross bound (U, W)".into(),
                    applicable: false,
                    note: format!("oracle not applicable: needs n >= k+l+t+1 (n={n}, k={k}, l={l}, t={t})"),
                    bound: None,
                    actual: None,
                    satisfied: true,
                },
                _ => OracleCheck {
                    name: "cross bound (U, W)".into(),
                    applicable: false,
                    note: "families are not uniform".into(),
                    bound: None,
                    actual: None,
                    satisfied: true,
                },
            }
        };
        checks.push(cross);
    }
    let violation = checks.iter().any(|c| c.applicable && !c.satisfied);
    Ok(UniformBoundReport { checks, violation })
}

/// Product-of-stars lower bound for the cross optimum:
/// (mu_1(A_n^(t)) mu_2(A_n^(t)))^{1/n}; tends to q^{-(2-theta1-theta2)t}.
pub fn g_lower_bound(
    theta1: &BigRational,
    theta2: &BigRational,
    n: u32,
    q: u32,
    t: u32,
    prec: usize,
) -> Result<Real> {
    let m1 = crate::measure::measure_star_product_form(theta1, n, q, t, prec)?;
    let m2 = crate::measure::measure_star_product_form(theta2, n, q, t, prec)?;
    Ok(m1.mul(&m2).nth_root(n))
}
