//! Brute-force cross-checks. Nothing here is used by the deciders; the test
//! suites compare the deciders against these.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::attrs::{AttrSet, Universe};
use crate::entailment::EntailmentQuery;
use crate::error::{Error, Result};
use crate::model::{Dataset, ImplicationSet, PartialImplication};
use crate::rational::Rational;

/// Parameters for a reproducible random instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomInstanceSpec {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    /// Probability that an attribute joins a given random set.
    pub density: f64,
}

impl RandomInstanceSpec {
    pub fn new(n: usize, k: usize, seed: u64, density: f64) -> Result<Self> {
        if n == 0 || n > 10 || k > 4 {
            return Err(Error::Contract(format!(
                "oracle instances need 1 ≤ n ≤ 10, k ≤ 4; got n = {n}, k = {k}"
            )));
        }
        if !(0.0..=1.0).contains(&density) {
            return Err(Error::Domain(format!("density {density} outside [0, 1]")));
        }
        Ok(RandomInstanceSpec { n, k, seed, density })
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// `k` random premises. A third of the seeds share one antecedent across
    /// all premises, which makes homogeneous sets common.
    pub fn premises(&self) -> ImplicationSet {
        self.generate().0
    }

    /// Random premises with a conclusion that, half of the time, is shaped
    /// from a random subset of the premises so that entailments are common.
    pub fn query(&self, gamma: Rational) -> Result<EntailmentQuery> {
        let (premises, conclusion) = self.generate();
        EntailmentQuery::new(premises, conclusion, gamma)
    }

    fn generate(&self) -> (ImplicationSet, PartialImplication) {
        let mut rng = self.rng();
        let universe = Arc::new(Universe::letters(self.n).expect("n ≤ 10"));
        let full = universe.full();
        let density = self.density;
        let random_set = |rng: &mut ChaCha8Rng, within: AttrSet| -> AttrSet {
            AttrSet::from_indices(within.indices().filter(|_| rng.gen_bool(density)))
        };

        let shared = rng.gen_bool(1.0 / 3.0).then(|| random_set(&mut rng, full));
        let mut premises: Vec<PartialImplication> = (0..self.k)
            .map(|_| {
                let x = shared.unwrap_or_else(|| random_set(&mut rng, full));
                let y = random_set(&mut rng, full);
                PartialImplication::new(x, y)
            })
            .collect();

        let conclusion = if self.k > 0 && rng.gen_bool(0.5) {
            // Shape a subset L so that entailments from it are plausible:
            // a shared consequent core, sometimes forced nicety, and a
            // conclusion built from the pieces.
            let mut chosen: Vec<usize> = if rng.gen_bool(0.6) {
                (0..self.k).collect()
            } else {
                (0..self.k).filter(|_| rng.gen_bool(0.5)).collect()
            };
            if chosen.is_empty() {
                chosen.push(rng.gen_range(0..self.k));
            }
            if rng.gen_bool(0.5) {
                let common = AttrSet::from_indices(full.indices().filter(|_| rng.gen_bool(density / 2.0)));
                for &i in &chosen {
                    premises[i].antecedent = common;
                }
            }
            let antecedents = chosen
                .iter()
                .fold(AttrSet::EMPTY, |a, &i| a.union(premises[i].antecedent));
            let mut core = AttrSet::singleton(rng.gen_range(0..self.n));
            if rng.gen_bool(0.3) {
                core = core.union(random_set(&mut rng, full));
            }
            let core = core.difference(antecedents);
            let make_nice = rng.gen_bool(0.7);
            let mut free: Vec<usize> = full.difference(core.union(antecedents)).indices().collect();
            free.shuffle(&mut rng);
            let mut x0 = antecedents;
            for (slot, &i) in chosen.iter().enumerate() {
                let p = &mut premises[i];
                p.consequent = p.consequent.difference(free_set(&free)).union(core);
                if make_nice {
                    p.consequent = p.consequent.union(antecedents.difference(p.antecedent));
                }
                // One attribute private to this premise, usually put in X0.
                if let Some(&attr) = free.get(slot) {
                    let private = AttrSet::singleton(attr);
                    p.consequent = p.consequent.union(private);
                    if rng.gen_bool(0.9) {
                        x0 = x0.union(private);
                    }
                }
            }
            let outside: Vec<usize> = core.difference(x0).indices().collect();
            let mut y0 = random_set(&mut rng, core);
            if !outside.is_empty() {
                y0 = y0.union(AttrSet::singleton(outside[rng.gen_range(0..outside.len())]));
            }
            if rng.gen_bool(0.3) {
                y0 = y0.union(random_set(&mut rng, x0));
            }
            if rng.gen_bool(0.2) {
                y0 = y0.union(AttrSet::singleton(rng.gen_range(0..self.n)));
            }
            PartialImplication::new(x0, y0)
        } else {
            PartialImplication::new(random_set(&mut rng, full), random_set(&mut rng, full))
        };
        (
            ImplicationSet::new(universe, premises).expect("sets drawn from the universe"),
            conclusion,
        )
    }
}

fn free_set(indices: &[usize]) -> AttrSet {
    AttrSet::from_indices(indices.iter().copied())
}

/// How one transaction relates to the conclusion (index 0) and premises:
/// whether it contains `X` and whether it contains `XY`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Profile {
    covers: Vec<bool>,
    witnesses: Vec<bool>,
}

/// Searches for a dataset that satisfies every premise and fails the
/// conclusion, using transactions over the occurring attributes (one per
/// distinct behaviour), at most `k + 1` distinct transactions, and
/// multiplicities `1..=max_mult`. Datasets are visited by number of distinct
/// transactions, then lexicographically.
///
/// A `None` is not a proof of entailment: the search is bounded.
pub fn search_counterexample(q: &EntailmentQuery, max_mult: u32) -> Result<Option<Dataset>> {
    let occurring = q.occurring();
    if occurring.len() > 6 {
        return Err(Error::Contract(format!(
            "dataset search limited to 6 occurring attributes, got {}",
            occurring.len()
        )));
    }
    if max_mult == 0 || max_mult > 8 {
        return Err(Error::Contract(format!("max_mult must be in 1..=8, got {max_mult}")));
    }
    let listed: Vec<PartialImplication> = std::iter::once(*q.conclusion())
        .chain(q.premises().iter().copied())
        .collect();

    let mut transactions: Vec<(AttrSet, Profile)> = Vec::new();
    for z in occurring.subsets() {
        let profile = Profile {
            covers: listed.iter().map(|imp| imp.antecedent.is_subset_of(z)).collect(),
            witnesses: listed.iter().map(|imp| imp.both().is_subset_of(z)).collect(),
        };
        if profile.covers.iter().any(|&c| c) && transactions.iter().all(|(_, p)| *p != profile) {
            transactions.push((z, profile));
        }
    }

    let gamma = q.gamma();
    let (p, d) = (
        gamma
            .numer()
            .to_i128()
            .ok_or_else(|| Error::Domain("γ numerator too large".into()))?,
        gamma
            .denom()
            .to_i128()
            .ok_or_else(|| Error::Domain("γ denominator too large".into()))?,
    );
    // C[XY] / C[X] ≥ p/d  ⟺  d·C[XY] ≥ p·C[X]
    let holds = |chosen: &[usize], counts: &[u32], j: usize| -> bool {
        let (mut covered, mut witnessed) = (0i128, 0i128);
        for (&t, &c) in chosen.iter().zip(counts) {
            let profile = &transactions[t].1;
            if profile.covers[j] {
                covered += c as i128;
            }
            if profile.witnesses[j] {
                witnessed += c as i128;
            }
        }
        covered == 0 || d * witnessed >= p * covered
    };

    let max_support = (q.k() + 1).min(transactions.len());
    for size in 1..=max_support {
        let mut chosen: Vec<usize> = (0..size).collect();
        loop {
            let mut counts = vec![1u32; size];
            loop {
                let fails_conclusion = !holds(&chosen, &counts, 0);
                if fails_conclusion && (1..listed.len()).all(|j| holds(&chosen, &counts, j)) {
                    let mut dataset = Dataset::new(Arc::clone(q.universe()));
                    for (&t, &c) in chosen.iter().zip(&counts) {
                        dataset.add(transactions[t].0, c as u64)?;
                    }
                    return Ok(Some(dataset));
                }
                if !advance_counts(&mut counts, max_mult) {
                    break;
                }
            }
            if !advance_combination(&mut chosen, transactions.len()) {
                break;
            }
        }
    }
    Ok(None)
}

fn advance_counts(counts: &mut [u32], max: u32) -> bool {
    for c in counts.iter_mut().rev() {
        if *c < max {
            *c += 1;
            return true;
        }
        *c = 1;
    }
    false
}

fn advance_combination(chosen: &mut [usize], n: usize) -> bool {
    let size = chosen.len();
    for i in (0..size).rev() {
        if chosen[i] < n - size + i {
            chosen[i] += 1;
            for j in i + 1..size {
                chosen[j] = chosen[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Minimum over the simplex grid `{a/steps : Σa = steps}` of the inner max
/// ratio of γ*(Σ, X). An upper bound on γ* that tightens as `steps` grows.
pub fn grid_min_max(sigma: &ImplicationSet, x0: AttrSet, steps: u32) -> Result<Rational> {
    let k = sigma.len();
    if k == 0 || k > 4 {
        return Err(Error::Contract(format!("grid search supports 1 ≤ k ≤ 4, got {k}")));
    }
    if steps == 0 {
        return Err(Error::Contract("grid needs at least one step".into()));
    }
    // (witnessed mask, covered mask) for every Z with X ⊄ Z.
    let mut masks: Vec<(u32, u32)> = Vec::new();
    for z in sigma.occurring().union(x0).subsets() {
        if x0.is_subset_of(z) {
            continue;
        }
        let mut witnessed = 0u32;
        let mut covered = 0u32;
        for (i, imp) in sigma.iter().enumerate() {
            if imp.antecedent.is_subset_of(z) {
                covered |= 1 << i;
                if imp.consequent.is_subset_of(z) {
                    witnessed |= 1 << i;
                }
            }
        }
        if witnessed != 0 && !masks.contains(&(witnessed, covered)) {
            masks.push((witnessed, covered));
        }
    }

    // Best value so far as a fraction num/den.
    let mut best = (1u64, 1u64);
    let mut grid = vec![0u32; k];
    while next_composition(&mut grid, steps) {
        let sum = |mask: u32| -> u64 { (0..k).filter(|i| mask >> i & 1 == 1).map(|i| grid[i] as u64).sum() };
        let mut worst = (0u64, 1u64);
        for &(w, c) in &masks {
            let den = sum(c);
            if den == 0 {
                continue;
            }
            let num = sum(w);
            if num * worst.1 > worst.0 * den {
                worst = (num, den);
            }
        }
        if worst.0 * best.1 < best.0 * worst.1 {
            best = worst;
        }
    }
    let g = best.0.gcd(&best.1).max(1);
    Ok(Rational::new(BigInt::from(best.0 / g), BigInt::from(best.1 / g)))
}

/// Steps through all `a ∈ ℕ^k` with `Σa = steps`; the first call must see
/// the all-zero vector and initializes it.
fn next_composition(grid: &mut [u32], steps: u32) -> bool {
    let k = grid.len();
    let total: u32 = grid.iter().sum();
    if total == 0 {
        grid[k - 1] = steps;
        return true;
    }
    // Rightmost position with a non-empty tail takes one unit from that tail.
    let Some(i) = (0..k - 1).rev().find(|&i| grid[i + 1..].iter().any(|&g| g > 0)) else {
        return false;
    };
    let tail: u32 = grid[i + 1..].iter().sum();
    grid[i] += 1;
    for g in grid[i + 1..].iter_mut() {
        *g = 0;
    }
    grid[k - 1] = tail - 1;
    true
}
