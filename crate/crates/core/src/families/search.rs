//! Exact maximum-measure t-intersecting families by branch and bound.
//!
//! Vertices are the subspaces of dimension >= t (anything smaller fails the
//! diagonal pair against itself); two vertices conflict when their
//! intersection dimension is below t. The search finds every
//! maximum-weight conflict-free family.
//!
//! Weights use a shared integer denominator, so all comparisons are big
//! integer comparisons. Parallel runs split the tree at a deterministic
//! frontier and give every task its own incumbent seeded from the best
//! star family; nothing is shared mid-flight, so the explored-node count
//! and the full result are identical for any thread count.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use num::bigint::BigInt;
use num::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::Family;
use crate::gfspace::{enumerate_all, layer, Subspace};
use crate::measure::MeasureContext;
use crate::qcombinat::binom2;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub max_vertices: usize,
    pub max_optima_reported: usize,
    pub threads: usize,
    pub time_budget: Option<Duration>,
    pub enum_cap: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_vertices: 400,
            max_optima_reported: 64,
            threads: 1,
            time_budget: None,
            enum_cap: crate::gfspace::DEFAULT_ENUM_CAP,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub optimum: Scalar,
    pub optima: Vec<Family>,
    pub optima_truncated: bool,
    pub explored_nodes: u64,
    pub complete: bool,
}

#[derive(Clone, PartialEq, Eq)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn empty(n: usize) -> BitSet {
        BitSet { words: vec![0; n.div_ceil(64)] }
    }

    fn full(n: usize) -> BitSet {
        let mut b = BitSet { words: vec![!0u64; n.div_ceil(64)] };
        let spare = b.words.len() * 64 - n;
        if spare > 0 {
            *b.words.last_mut().unwrap() >>= spare;
        }
        b
    }

    #[inline]
    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    #[inline]
    fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    fn and(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    fn first(&self) -> Option<usize> {
        for (wi, w) in self.words.iter().enumerate() {
            if *w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, w)| {
            let mut w = *w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }
}

struct Problem {
    vertices: Vec<Subspace>,
    weights: Vec<BigInt>,
    compat: Vec<BitSet>,
    max_optima: usize,
    deadline: Option<Instant>,
}

impl Problem {
    fn sum_over(&self, set: &BitSet) -> BigInt {
        let mut acc = BigInt::zero();
        for v in set.iter() {
            acc += &self.weights[v];
        }
        acc
    }
}

#[derive(Clone)]
struct Node {
    chosen: Vec<usize>,
    cand: BitSet,
    cur: BigInt,
    cand_sum: BigInt,
}

struct Local {
    best: BigInt,
    optima: Vec<Vec<usize>>,
    truncated: bool,
    nodes: u64,
    timed_out: bool,
}

fn dfs(p: &Problem, node: Node, local: &mut Local) {
    local.nodes += 1;
    if local.timed_out {
        return;
    }
    if let Some(deadline) = p.deadline {
        if local.nodes % 1024 == 0 && Instant::now() > deadline {
            local.timed_out = true;
            return;
        }
    }
    let bound = &node.cur + &node.cand_sum;
    if bound < local.best {
        return;
    }
    let Some(v) = node.cand.first() else {
        // leaf: a maximal extension of the chosen set
        if node.cur > local.best {
            local.best = node.cur;
            local.optima.clear();
            local.optima.push(node.chosen);
            local.truncated = false;
        } else if node.cur == local.best {
            if local.optima.len() < p.max_optima {
                local.optima.push(node.chosen);
            } else {
                local.truncated = true;
            }
        }
        return;
    };
    // include v
    let mut chosen = node.chosen.clone();
    chosen.push(v);
    let cand_in = node.cand.and(&p.compat[v]);
    let include = Node {
        chosen,
        cand_sum: p.sum_over(&cand_in),
        cand: cand_in,
        cur: &node.cur + &p.weights[v],
    };
    dfs(p, include, local);
    // exclude v
    let mut cand_ex = node.cand;
    cand_ex.remove(v);
    let exclude = Node {
        chosen: node.chosen,
        cand: cand_ex,
        cur: node.cur,
        cand_sum: node.cand_sum - &p.weights[v],
    };
    dfs(p, exclude, local);
}

/// Largest mu(U) over t-intersecting families, with the full optimum set.
pub fn max_measure_t_intersecting(
    ctx: &MeasureContext,
    t: u32,
    cfg: &SearchConfig,
) -> Result<SearchResult> {
    if t == 0 || t > ctx.n() {
        return Err(Error::InvalidParameter(format!(
            "search needs 1 <= t <= n (t={t}, n={})",
            ctx.n()
        )));
    }
    let sigma = ctx.sigma().as_exact().ok_or(Error::InexactSearchWeights)?;
    let (n, q) = (ctx.n(), ctx.q());

    // integer weights: phi(k) = s_n^k q^C(k,2) s_d^(n-k) / P
    // with sigma = s_n/s_d and P = prod_j (s_d + s_n q^j)
    let s_n = sigma.numer().clone();
    let s_d = sigma.denom().clone();
    let mut denom = BigInt::one();
    let mut qj = BigInt::one();
    for _ in 0..n {
        denom *= &s_d + &s_n * &qj;
        qj *= q;
    }
    let weight_of_dim: Vec<BigInt> = (0..=n)
        .map(|k| {
            num::pow::pow(s_n.clone(), k as usize)
                * num::pow::pow(BigInt::from(q), binom2(k as u64) as usize)
                * num::pow::pow(s_d.clone(), (n - k) as usize)
        })
        .collect();

    let mut vertices: Vec<Subspace> =
        enumerate_all(n, q, cfg.enum_cap)?.filter(|s| s.dim() >= t).collect();
    if vertices.len() > cfg.max_vertices {
        return Err(Error::VertexCap { count: vertices.len(), cap: cfg.max_vertices });
    }
    // heaviest first, canonical order on ties
    vertices.sort_by(|a, b| {
        weight_of_dim[b.dim() as usize]
            .cmp(&weight_of_dim[a.dim() as usize])
            .then_with(|| a.cmp(b))
    });
    let weights: Vec<BigInt> =
        vertices.iter().map(|v| weight_of_dim[v.dim() as usize].clone()).collect();

    let nv = vertices.len();
    let mut compat = vec![BitSet::empty(nv); nv];
    for i in 0..nv {
        for j in (i + 1)..nv {
            if vertices[i].intersection_dim(&vertices[j])? >= t {
                compat[i].insert(j);
                compat[j].insert(i);
            }
        }
    }

    // deterministic incumbent seed: the best star restricted to the vertex set
    let mut seed = BigInt::zero();
    for core in layer(n, t, q, cfg.enum_cap)? {
        let mut total = BigInt::zero();
        for (i, v) in vertices.iter().enumerate() {
            if v.contains(&core)? {
                total += &weights[i];
            }
        }
        seed = seed.max(total);
    }

    let deadline = cfg.time_budget.map(|b| Instant::now() + b);
    let problem = Problem {
        vertices,
        weights,
        compat,
        max_optima: cfg.max_optima_reported,
        deadline,
    };

    let root = Node {
        chosen: Vec::new(),
        cand: BitSet::full(nv),
        cur: BigInt::zero(),
        cand_sum: problem.sum_over(&BitSet::full(nv)),
    };

    // deterministic frontier split: expand FIFO until enough tasks exist;
    // the target is a constant so the task set (and with it the explored
    // node count) does not depend on the thread count
    let target = 32;
    let mut queue: VecDeque<Node> = VecDeque::new();
    queue.push_back(root);
    let mut frontier_nodes = 0u64;
    let mut tasks: Vec<Node> = Vec::new();
    while let Some(node) = queue.pop_front() {
        if tasks.len() + queue.len() >= target || node.cand.is_empty() {
            tasks.push(node);
            continue;
        }
        frontier_nodes += 1;
        let bound = &node.cur + &node.cand_sum;
        if bound < seed {
            continue; // pruned by the seed; deterministic
        }
        let v = node.cand.first().unwrap();
        let mut chosen = node.chosen.clone();
        chosen.push(v);
        let cand_in = node.cand.and(&problem.compat[v]);
        queue.push_back(Node {
            chosen,
            cand_sum: problem.sum_over(&cand_in),
            cand: cand_in,
            cur: &node.cur + &problem.weights[v],
        });
        let mut cand_ex = node.cand;
        cand_ex.remove(v);
        queue.push_back(Node {
            chosen: node.chosen,
            cand: cand_ex,
            cur: node.cur,
            cand_sum: node.cand_sum - &problem.weights[v],
        });
    }

    let run_task = |node: &Node| -> Local {
        let mut local = Local {
            best: seed.clone(),
            optima: Vec::new(),
            truncated: false,
            nodes: 0,
            timed_out: false,
        };
        dfs(&problem, node.clone(), &mut local);
        local
    };

    let locals: Vec<Local> = if cfg.threads <= 1 {
        tasks.iter().map(run_task).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        pool.install(|| {
            use rayon::prelude::*;
            tasks.par_iter().map(run_task).collect()
        })
    };

    let mut best = seed.clone();
    for l in &locals {
        if l.best > best {
            best = l.best.clone();
        }
    }
    let mut optima: Vec<Family> = Vec::new();
    let mut truncated = false;
    let mut nodes = frontier_nodes;
    let mut timed_out = false;
    for l in &locals {
        nodes += l.nodes;
        timed_out |= l.timed_out;
        if l.best == best {
            truncated |= l.truncated;
            for chosen in &l.optima {
                if optima.len() >= cfg.max_optima_reported {
                    truncated = true;
                    break;
                }
                let members = chosen.iter().map(|&i| problem.vertices[i].clone());
                optima.push(Family::new(n, q, members)?);
            }
        }
    }
    optima.sort_by(|a, b| a.members().cmp(b.members()));
    optima.dedup();

    let optimum = Scalar::exact(num::rational::BigRational::new(best, denom));
    Ok(SearchResult {
        optimum,
        optima,
        optima_truncated: truncated,
        explored_nodes: nodes,
        complete: !timed_out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn run(n: u32, q: u32, sigma: (i64, i64), t: u32, threads: usize) -> SearchResult {
        let ctx = MeasureContext::new(q, n, Scalar::from_ratio(sigma.0, sigma.1)).unwrap();
        let cfg = SearchConfig { threads, ..SearchConfig::default() };
        max_measure_t_intersecting(&ctx, t, &cfg).unwrap()
    }

    #[test]
    fn n3_strict_regime_gives_stars_only() {
        let r = run(3, 2, (1, 16), 1, 1);
        assert!(r.complete);
        assert_eq!(r.optimum.as_exact().unwrap(), &rat(1, 17));
        assert_eq!(r.optima.len(), 7);
        for f in &r.optima {
            assert!(crate::families::is_t_intersecting(f, 1));
            // every optimum is a point star: all members contain a common line
            let core = f
                .members()
                .iter()
                .find(|m| m.dim() == 1)
                .expect("a line member")
                .clone();
            assert!(f.members().iter().all(|m| m.contains(&core).unwrap()));
        }
    }

    #[test]
    fn n3_threshold_includes_top_family() {
        let r = run(3, 2, (1, 8), 1, 1);
        assert_eq!(r.optimum.as_exact().unwrap(), &rat(1, 9));
        assert_eq!(r.optima.len(), 8);
    }

    #[test]
    fn deterministic_across_threads() {
        let a = run(3, 2, (1, 16), 1, 1);
        let b = run(3, 2, (1, 16), 1, 8);
        assert_eq!(a.optimum, b.optimum);
        assert_eq!(a.optima, b.optima);
        assert_eq!(a.explored_nodes, b.explored_nodes);
    }

    #[test]
    fn monotone_in_t() {
        let r1 = run(3, 2, (1, 8), 1, 1);
        let r2 = run(3, 2, (1, 8), 2, 1);
        assert!(r2.optimum.cmp_scalar(&r1.optimum).is_le());
        let r3 = run(3, 2, (1, 8), 3, 1);
        assert!(r3.optimum.cmp_scalar(&r2.optimum).is_le());
    }

    #[test]
    fn rejects_bad_inputs() {
        let ctx = MeasureContext::new(2, 3, Scalar::from_ratio(1, 8)).unwrap();
        assert!(max_measure_t_intersecting(&ctx, 0, &SearchConfig::default()).is_err());
        let tiny = SearchConfig { max_vertices: 3, ..SearchConfig::default() };
        assert!(matches!(
            max_measure_t_intersecting(&ctx, 1, &tiny),
            Err(Error::VertexCap { .. })
        ));
    }

    #[test]
    fn optimum_at_least_star() {
        let ctx = MeasureContext::new(2, 3, Scalar::from_ratio(2, 5)).unwrap();
        let r = max_measure_t_intersecting(&ctx, 1, &SearchConfig::default()).unwrap();
        let star = ctx.measure_star_closed(1).unwrap();
        assert!(r.optimum.cmp_scalar(&star).is_ge());
    }
}
