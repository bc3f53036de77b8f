//! Negative-square profiles `k_n(f)` over a region.
//!
//! For each `n` the search evaluates three candidate families, in parallel
//! with per-candidate seed streams:
//!
//! 1. the best `(n-1)`-node witness with one appended node;
//! 2. structured witness plans at several `ε` (subsets or padded);
//! 3. `budget.configs` random configurations.
//!
//! The best few are then refined by coordinatewise hill-climbing unless the
//! theoretical bound `q + ℓ_Ω` is already attained.

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::build::{pick_inertia, DEFAULT_LINK_RADIUS};
use super::{PickError, Region};
use crate::analysis::witness_plan;
use crate::analysis::witness::max_epsilon;
use crate::hermitian::TolerancePolicy;
use crate::model::{PointConfig, StandardFunction, UnitDiskPoint};
use crate::seed;
use crate::C64;

/// Randomly placed nodes keep `|B(z)|` at least this large.
pub const MIN_POLE_MODULUS: f64 = 1e-8;
const SEPARATION_FRACTION: f64 = 1e-3;
const STRUCTURED_EPSILONS: [f64; 3] = [1e-1, 1e-2, 1e-3];
const ANGLE_SEEDS: u64 = 3;
const MAX_SUBSETS: usize = 32;
const APPEND_VARIANTS: usize = 8;
const CLIMBERS: usize = 4;
const INITIAL_STEP: f64 = 1e-2;
const CLIMB_RADIUS: f64 = 0.99;

/// `(configurations per n, hill-climb rounds)`, with an optional cap on
/// the total number of Pick evaluations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub configs: usize,
    pub rounds: usize,
    pub max_evaluations: Option<usize>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self::new(200, 40)
    }
}

impl SearchBudget {
    pub fn new(configs: usize, rounds: usize) -> Self {
        Self {
            configs,
            rounds,
            max_evaluations: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileEntry {
    pub n: usize,
    pub best_count: usize,
    pub witness: PointConfig,
    pub samples_used: usize,
}

/// First `n ≥ 0` with `best_count(n) == best_count(n + 3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Plateau {
    pub value: usize,
    pub first_n: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileResult {
    pub per_n: Vec<ProfileEntry>,
    pub plateau: Option<Plateau>,
    /// `q + ℓ_Ω`.
    pub upper_bound: usize,
    /// The evaluation cap stopped the search before `n_max`.
    pub exhausted: bool,
}

impl ProfileResult {
    /// `best_count(n)`, with `best_count(0) = 0`.
    pub fn best_count(&self, n: usize) -> Option<usize> {
        if n == 0 {
            return Some(0);
        }
        self.per_n.iter().find(|e| e.n == n).map(|e| e.best_count)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.per_n.iter().map(|e| e.best_count).collect()
    }
}

/// Plateau of width 3 in `counts[n-1] = best_count(n)`.
pub fn plateau_of(counts: &[usize]) -> Option<Plateau> {
    let at = |n: usize| if n == 0 { 0 } else { counts[n - 1] };
    (0..=counts.len())
        .take_while(|n| n + 3 <= counts.len())
        .find(|&n| at(n) == at(n + 3))
        .map(|n| Plateau { value: at(n), first_n: n })
}

/// Clustering radius used when conditioning Pick matrices of nodes in `region`.
pub fn link_radius_for(region: &Region) -> f64 {
    if region.is_small() {
        f64::INFINITY
    } else {
        DEFAULT_LINK_RADIUS
    }
}

#[derive(Clone, Debug)]
struct Candidate {
    nodes: Vec<C64>,
    pinned: Vec<bool>,
}

#[derive(Clone, Debug)]
struct Scored {
    nodes: Vec<C64>,
    pinned: Vec<bool>,
    count: usize,
    score: f64,
}

fn better(a: &Scored, b: &Scored) -> bool {
    use std::cmp::Ordering::*;
    match a.count.cmp(&b.count) {
        Greater => true,
        Less => false,
        Equal => match a.score.total_cmp(&b.score) {
            Less => true,
            Greater => false,
            Equal => lex_less(&a.nodes, &b.nodes),
        },
    }
}

fn lex_less(a: &[C64], b: &[C64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        match x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            _ => {}
        }
    }
    a.len() < b.len()
}

struct Search<'a> {
    f: &'a StandardFunction,
    region: Region,
    policy: TolerancePolicy,
    link: f64,
    sep_floor: f64,
}

impl Search<'_> {
    fn evaluate(&self, nodes: &[C64]) -> Option<(usize, f64)> {
        pick_inertia(self.f, nodes, self.policy, self.link)
            .ok()
            .map(|p| (p.inertia.negative, p.score()))
    }

    fn point_ok(&self, z: C64, others: &[C64], sep: f64) -> bool {
        if !self.region.contains(z) || z.norm() > CLIMB_RADIUS {
            return false;
        }
        if self.f.is_undefined_at(z) || self.f.blaschke().eval(z).norm() < MIN_POLE_MODULUS {
            return false;
        }
        others.iter().all(|o| (o - z).norm() >= sep)
    }

    fn random_point(&self, rng: &mut impl Rng, others: &[C64]) -> Option<C64> {
        (0..1000)
            .map(|_| self.region.sample(rng))
            .find(|&z| self.point_ok(z, others, self.sep_floor))
    }

    fn random_config(&self, rng: &mut impl Rng, n: usize, base: &[C64]) -> Option<Vec<C64>> {
        let mut nodes = base.to_vec();
        while nodes.len() < n {
            let z = self.random_point(rng, &nodes)?;
            nodes.push(z);
        }
        Some(nodes)
    }

    fn structured(&self, n: usize, seed: u64) -> Vec<Candidate> {
        let max = max_epsilon(self.f);
        let mut eps: Vec<f64> = STRUCTURED_EPSILONS.iter().copied().filter(|&e| e < max).collect();
        if eps.is_empty() && max.is_finite() {
            eps.push(0.5 * max);
        }
        let mut out = Vec::new();
        for (ei, &e) in eps.iter().enumerate() {
            for s in 0..ANGLE_SEEDS {
                let Ok(plan) = witness_plan(self.f, e, seed::derive(seed, &[ei as u64, s])) else {
                    continue;
                };
                let pts: Vec<C64> = plan.points().into_iter().filter(|&z| self.region.contains(z)).collect();
                if pts.is_empty() {
                    continue;
                }
                let pin = |z: &C64| self.f.jump_at(*z).is_some();
                let mut rng = seed::rng(seed, &[0x5354, ei as u64, s, n as u64]);
                if pts.len() >= n {
                    for idx in subsets(pts.len(), n, &mut rng) {
                        let nodes: Vec<C64> = idx.iter().map(|&i| pts[i]).collect();
                        let pinned = nodes.iter().map(pin).collect();
                        out.push(Candidate { nodes, pinned });
                    }
                } else {
                    for _ in 0..2 {
                        if let Some(nodes) = self.random_config(&mut rng, n, &pts) {
                            let pinned = nodes.iter().map(pin).collect();
                            out.push(Candidate { nodes, pinned });
                        }
                    }
                }
            }
        }
        out
    }

    fn climb(&self, start: Scored, rounds: usize) -> (Scored, usize) {
        let mut cur = start;
        let mut step = INITIAL_STEP * self.region.scale();
        let mut evals = 0;
        let dirs = [C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0)];
        for _ in 0..rounds {
            let mut improved = false;
            for i in 0..cur.nodes.len() {
                if cur.pinned[i] {
                    continue;
                }
                for d in dirs {
                    let z = cur.nodes[i] + d * step;
                    let others: Vec<C64> =
                        cur.nodes.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &w)| w).collect();
                    let own = others.iter().map(|o| (o - cur.nodes[i]).norm()).fold(f64::INFINITY, f64::min);
                    if !self.point_ok(z, &others, self.sep_floor.min(own)) {
                        continue;
                    }
                    let mut nodes = cur.nodes.clone();
                    nodes[i] = z;
                    evals += 1;
                    if let Some((count, score)) = self.evaluate(&nodes) {
                        let cand = Scored { nodes, pinned: cur.pinned.clone(), count, score };
                        if cand.count > cur.count || (cand.count == cur.count && cand.score < cur.score) {
                            cur = cand;
                            improved = true;
                        }
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        (cur, evals)
    }
}

fn subsets(m: usize, n: usize, rng: &mut impl Rng) -> Vec<Vec<usize>> {
    let total = binomial(m, n);
    if total <= MAX_SUBSETS as f64 {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        fn rec(start: usize, m: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            for i in start..m {
                cur.push(i);
                rec(i + 1, m, n, cur, out);
                cur.pop();
            }
        }
        rec(0, m, n, &mut cur, &mut out);
        out
    } else {
        (0..MAX_SUBSETS)
            .map(|_| {
                let mut v = sample(rng, m, n).into_vec();
                v.sort_unstable();
                v
            })
            .collect()
    }
}

fn binomial(m: usize, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64)
}

pub fn kn_profile(
    f: &StandardFunction,
    n_max: usize,
    region: &Region,
    budget: SearchBudget,
    seed: u64,
) -> Result<ProfileResult, PickError> {
    kn_profile_with(f, n_max, region, budget, seed, TolerancePolicy::default())
}

/// [`kn_profile`] with an explicit tolerance policy.
pub fn kn_profile_with(
    f: &StandardFunction,
    n_max: usize,
    region: &Region,
    budget: SearchBudget,
    seed: u64,
    policy: TolerancePolicy,
) -> Result<ProfileResult, PickError> {
    if n_max == 0 {
        return Err(PickError::BadNMax);
    }
    let region = region.validated()?;
    let counts = f.classify_counts();
    let l_region = f.jumps().iter().filter(|j| region.contains(j.at.value())).count();
    let upper_bound = counts.q + l_region;
    let search = Search {
        f,
        region,
        policy,
        link: link_radius_for(&region),
        sep_floor: SEPARATION_FRACTION * region.scale(),
    };
    if search.random_point(&mut seed::rng(seed, &[0xE]), &[]).is_none() {
        return Err(PickError::EmptyRegion);
    }

    let mut per_n: Vec<ProfileEntry> = Vec::new();
    let mut prev: Option<Scored> = None;
    let mut total_evals = 0usize;
    let mut exhausted = false;
    for n in 1..=n_max {
        if budget.max_evaluations.is_some_and(|m| total_evals >= m) {
            exhausted = true;
            break;
        }
        let nn = n as u64;
        let mut cands: Vec<Candidate> = Vec::new();
        if let Some(p) = &prev {
            let mut rng = seed::rng(seed, &[nn, 0]);
            for v in 0..APPEND_VARIANTS {
                let z = if v % 2 == 0 || p.nodes.is_empty() {
                    search.random_point(&mut rng, &p.nodes)
                } else {
                    let anchor = p.nodes[rng.random_range(0..p.nodes.len())];
                    let r = INITIAL_STEP * region.scale() * rng.random::<f64>().max(0.1);
                    let z = anchor + C64::from_polar(r, rng.random::<f64>() * std::f64::consts::TAU);
                    search.point_ok(z, &p.nodes, search.sep_floor).then_some(z)
                };
                if let Some(z) = z {
                    let mut nodes = p.nodes.clone();
                    nodes.push(z);
                    let mut pinned = p.pinned.clone();
                    pinned.push(false);
                    cands.push(Candidate { nodes, pinned });
                }
            }
        }
        cands.extend(search.structured(n, seed::derive(seed, &[nn, 3])));
        let randoms: Vec<Candidate> = (0..budget.configs)
            .into_par_iter()
            .filter_map(|idx| {
                let mut rng = seed::rng(seed, &[nn, 1, idx as u64]);
                search
                    .random_config(&mut rng, n, &[])
                    .map(|nodes| Candidate { pinned: vec![false; nodes.len()], nodes })
            })
            .collect();
        cands.extend(randoms);

        let mut scored: Vec<Scored> = cands
            .par_iter()
            .filter_map(|c| {
                search.evaluate(&c.nodes).map(|(count, score)| Scored {
                    nodes: c.nodes.clone(),
                    pinned: c.pinned.clone(),
                    count,
                    score,
                })
            })
            .collect();
        let mut evals = cands.len();
        scored.sort_by(|a, b| {
            if better(a, b) {
                std::cmp::Ordering::Less
            } else if better(b, a) {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        });
        let Some(mut best) = scored.first().cloned() else {
            return Err(PickError::EmptyRegion);
        };
        if best.count < upper_bound && budget.rounds > 0 {
            let climbed: Vec<(Scored, usize)> = scored
                .iter()
                .take(CLIMBERS)
                .cloned()
                .collect::<Vec<_>>()
                .into_par_iter()
                .map(|s| search.climb(s, budget.rounds))
                .collect();
            for (s, e) in climbed {
                evals += e;
                if better(&s, &best) {
                    best = s;
                }
            }
        }
        total_evals += evals;
        if best.count > upper_bound {
            return Err(PickError::UpperBound { n, count: best.count, bound: upper_bound });
        }
        let witness = PointConfig::new(
            best.nodes
                .iter()
                .map(|&z| UnitDiskPoint::new(z))
                .collect::<Result<Vec<_>, _>>()?,
        )?;
        per_n.push(ProfileEntry {
            n,
            best_count: best.count,
            witness,
            samples_used: evals,
        });
        prev = Some(best);
    }
    let plateau = plateau_of(&per_n.iter().map(|e| e.best_count).collect::<Vec<_>>());
    Ok(ProfileResult {
        per_n,
        plateau,
        upper_bound,
        exhausted,
    })
}
