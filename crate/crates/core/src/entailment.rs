//! Deciding `X₁→Y₁, …, X_k→Y_k ⊨_γ X₀→Y₀`.
//!
//! The LP route works for every γ ∈ [0,1] and any k. The characterization
//! routes are set-inclusion tests valid on part of (0,1). Every verdict is
//! backed by evidence: a multiplier vector λ that is re-checked against all
//! transaction inequalities when the entailment holds, and a dataset that is
//! re-checked with the confidence semantics when it fails.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::attrs::{AttrSet, SharedUniverse};
use crate::error::{Error, Result};
use crate::gamma_star;
use crate::homogeneity::implications_nice;
use crate::lp::{self, Constraint, LinearProgram, LpOutcome, Relation, Sense};
use crate::model::{check_gamma, status_weight, Dataset, ImplicationSet, PartialImplication};
use crate::rational::{in_open_unit_interval, int, to_integer_ray, Rational};
use crate::signature::{enumerate_signatures, SignatureRow, MAX_LISTED_IMPLICATIONS};

/// Above this many premises `Auto` goes straight to the LP instead of
/// searching the 2^k premise subsets.
pub const MAX_CHARACTERIZATION_PREMISES: usize = 12;

#[derive(Debug, Clone)]
pub struct EntailmentQuery {
    premises: ImplicationSet,
    conclusion: PartialImplication,
    gamma: Rational,
}

impl EntailmentQuery {
    pub fn new(premises: ImplicationSet, conclusion: PartialImplication, gamma: Rational) -> Result<Self> {
        check_gamma(&gamma)?;
        premises.universe().check(conclusion.both())?;
        if premises.len() >= MAX_LISTED_IMPLICATIONS {
            return Err(Error::Contract(format!(
                "at most {} premises supported, got {}",
                MAX_LISTED_IMPLICATIONS - 1,
                premises.len()
            )));
        }
        Ok(EntailmentQuery {
            premises,
            conclusion,
            gamma,
        })
    }

    pub fn premises(&self) -> &ImplicationSet {
        &self.premises
    }

    pub fn conclusion(&self) -> &PartialImplication {
        &self.conclusion
    }

    pub fn gamma(&self) -> &Rational {
        &self.gamma
    }

    pub fn k(&self) -> usize {
        self.premises.len()
    }

    pub fn universe(&self) -> &SharedUniverse {
        self.premises.universe()
    }

    /// Attributes mentioned anywhere in the query; transactions only matter
    /// through their intersection with this set.
    pub fn occurring(&self) -> AttrSet {
        self.premises.occurring().union(self.conclusion.both())
    }

    /// The same conclusion and γ, keeping only the given premises.
    pub fn restrict(&self, indices: &[usize]) -> EntailmentQuery {
        EntailmentQuery {
            premises: self.premises.select(indices),
            conclusion: self.conclusion,
            gamma: self.gamma.clone(),
        }
    }

    pub fn with_gamma(&self, gamma: Rational) -> Result<EntailmentQuery> {
        EntailmentQuery::new(self.premises.clone(), self.conclusion, gamma)
    }

    /// Conclusion first, then the premises in order.
    pub(crate) fn listed(&self) -> Vec<PartialImplication> {
        std::iter::once(self.conclusion)
            .chain(self.premises.iter().copied())
            .collect()
    }

    pub(crate) fn signatures(&self) -> Result<Vec<SignatureRow>> {
        enumerate_signatures(
            &self.listed(),
            self.occurring(),
            self.universe().enumeration_cap(),
            |_| true,
        )
    }
}

/// Which decision procedure produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Tautology,
    OnePremise,
    TwoPremise,
    LowGamma,
    HighGamma,
    GeneralGammaStar,
    LpDirect,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Tautology => "tautology",
            Regime::OnePremise => "one-premise",
            Regime::TwoPremise => "two-premise",
            Regime::LowGamma => "low-gamma",
            Regime::HighGamma => "high-gamma",
            Regime::GeneralGammaStar => "general-gamma-star",
            Regime::LpDirect => "lp-direct",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Auto,
    Lp,
    Characterization,
}

#[derive(Debug, Clone)]
pub struct EntailmentVerdict {
    pub holds: bool,
    /// Multipliers λ, one per premise. Present iff `holds`.
    pub certificate: Option<Vec<Rational>>,
    /// Satisfies every premise and fails the conclusion. Present iff `!holds`.
    pub counterexample: Option<Dataset>,
    pub regime: Regime,
}

/// Decides through the dual LP; falls back to the primal for a
/// counterexample when the dual is infeasible.
pub fn decide_lp(q: &EntailmentQuery) -> Result<EntailmentVerdict> {
    let rows = q.signatures()?;
    let k = q.k();
    let constraints: Vec<Constraint> = rows
        .iter()
        .filter_map(|row| {
            let weights = row_weights(row, k, q.gamma());
            let (conclusion, premises) = weights.split_first().expect("conclusion weight");
            // 0 ≤ w₀ rows with all-zero left side always hold.
            if premises.iter().all(Zero::is_zero) && !conclusion.is_negative() {
                return None;
            }
            Some(Constraint::new(premises.to_vec(), Relation::LessEq, conclusion.clone()))
        })
        .collect();
    match lp::feasible(&constraints, k)? {
        Some(lambda) => certified(q, lambda, Regime::LpDirect, &rows),
        None => refuted(q, Regime::LpDirect, &rows),
    }
}

/// `[w_Z(X₀→Y₀), w_Z(X₁→Y₁), …, w_Z(X_k→Y_k)]` for the row's transaction.
fn row_weights(row: &SignatureRow, k: usize, gamma: &Rational) -> Vec<Rational> {
    (0..=k).map(|j| status_weight(row.signature.status(j), gamma)).collect()
}

fn certified(
    q: &EntailmentQuery,
    lambda: Vec<Rational>,
    regime: Regime,
    rows: &[SignatureRow],
) -> Result<EntailmentVerdict> {
    if let Some(z) = violation_in(q, &lambda, rows)? {
        return Err(Error::Internal(format!(
            "{regime} certificate fails at transaction {{{}}}",
            q.universe().format(z)
        )));
    }
    Ok(EntailmentVerdict {
        holds: true,
        certificate: Some(lambda),
        counterexample: None,
        regime,
    })
}

fn refuted(q: &EntailmentQuery, regime: Regime, rows: &[SignatureRow]) -> Result<EntailmentVerdict> {
    match counterexample_from(q, rows)? {
        Some(dataset) => Ok(EntailmentVerdict {
            holds: false,
            certificate: None,
            counterexample: Some(dataset),
            regime,
        }),
        None => Err(Error::Internal(format!(
            "{regime} says the entailment fails but the primal program is bounded"
        ))),
    }
}

/// Solves the primal `min Σ w_Z(X₀→Y₀)·x_Z  s.t.  Σ w_Z(X_i→Y_i)·x_Z ≥ 0`.
/// The program is homogeneous, so it is either bounded at 0 (the entailment
/// holds) or unbounded; the ray, scaled to integers, is the counterexample.
pub fn find_counterexample(q: &EntailmentQuery) -> Result<Option<Dataset>> {
    let rows = q.signatures()?;
    counterexample_from(q, &rows)
}

fn counterexample_from(q: &EntailmentQuery, rows: &[SignatureRow]) -> Result<Option<Dataset>> {
    let k = q.k();
    let columns: Vec<Vec<Rational>> = rows.iter().map(|r| row_weights(r, k, q.gamma())).collect();
    let objective: Vec<Rational> = columns.iter().map(|c| c[0].clone()).collect();
    let mut primal = LinearProgram::new(Sense::Minimize, objective);
    for i in 1..=k {
        let coefficients = columns.iter().map(|c| c[i].clone()).collect();
        primal.add_constraint(coefficients, Relation::GreaterEq, Rational::zero());
    }
    let ray = match lp::solve(&primal)? {
        LpOutcome::Unbounded { ray, .. } => ray,
        LpOutcome::Optimal { .. } => return Ok(None),
        LpOutcome::Infeasible => return Err(Error::Internal("primal program cannot be infeasible".into())),
    };

    let mut dataset = Dataset::new(Arc::clone(q.universe()));
    for (row, count) in rows.iter().zip(to_integer_ray(&ray)) {
        let count = count
            .to_u64()
            .ok_or_else(|| Error::Internal(format!("counterexample multiplicity {count} too large")))?;
        dataset.add(row.representative, count)?;
    }
    verify_counterexample(q, &dataset)?;
    Ok(Some(dataset))
}

/// `true` iff `dataset` satisfies every premise and fails the conclusion.
pub fn is_counterexample(q: &EntailmentQuery, dataset: &Dataset) -> Result<bool> {
    if !dataset.same_universe(q.universe()) {
        return Err(Error::UniverseMismatch("dataset and query universes differ".into()));
    }
    for premise in q.premises() {
        if !dataset.satisfies(premise, q.gamma())? {
            return Ok(false);
        }
    }
    Ok(!dataset.satisfies(q.conclusion(), q.gamma())?)
}

fn verify_counterexample(q: &EntailmentQuery, dataset: &Dataset) -> Result<()> {
    if is_counterexample(q, dataset)? {
        Ok(())
    } else {
        Err(Error::Internal(format!(
            "extracted dataset is not a counterexample:\n{dataset}"
        )))
    }
}

/// Checks `Σ λ_i·w_Z(X_i→Y_i) ≤ w_Z(X₀→Y₀)` for every transaction.
pub fn check_certificate(q: &EntailmentQuery, lambda: &[Rational]) -> Result<bool> {
    Ok(lambda.len() == q.k() && lambda.iter().all(|l| !l.is_negative()) && certificate_violation(q, lambda)?.is_none())
}

/// The first transaction (in increasing bitmask order over the occurring
/// attributes) whose inequality `λ` breaks, if any.
pub fn certificate_violation(q: &EntailmentQuery, lambda: &[Rational]) -> Result<Option<AttrSet>> {
    if lambda.len() != q.k() {
        return Err(Error::Contract(format!(
            "certificate has {} multipliers for {} premises",
            lambda.len(),
            q.k()
        )));
    }
    if lambda.iter().any(Signed::is_negative) {
        return Err(Error::Contract("certificate multipliers must be non-negative".into()));
    }
    let rows = q.signatures()?;
    violation_in(q, lambda, &rows)
}

fn violation_in(q: &EntailmentQuery, lambda: &[Rational], rows: &[SignatureRow]) -> Result<Option<AttrSet>> {
    if lambda.len() != q.k() || lambda.iter().any(Signed::is_negative) {
        return Err(Error::Internal("malformed certificate".into()));
    }
    for row in rows {
        let weights = row_weights(row, q.k(), q.gamma());
        let combined = weights[1..]
            .iter()
            .zip(lambda)
            .fold(Rational::zero(), |acc, (w, l)| acc + w * l);
        if combined > weights[0] {
            return Ok(Some(row.representative));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Set-inclusion characterizations
// ---------------------------------------------------------------------------

/// One premise alone entails the conclusion: `X₁ ⊆ X₀` and `X₀Y₀ ⊆ X₁Y₁`.
pub(crate) fn single_premise_entails(premise: &PartialImplication, conclusion: &PartialImplication) -> bool {
    premise.antecedent.is_subset_of(conclusion.antecedent) && conclusion.both().is_subset_of(premise.both())
}

/// The seven inclusions for two premises.
pub(crate) fn seven_inclusions(
    first: &PartialImplication,
    second: &PartialImplication,
    conclusion: &PartialImplication,
) -> bool {
    let (x0, y0) = (conclusion.antecedent, conclusion.consequent);
    first.antecedent.is_subset_of(second.both())
        && second.antecedent.is_subset_of(first.both())
        && first.antecedent.is_subset_of(x0)
        && second.antecedent.is_subset_of(x0)
        && x0.is_subset_of(first.both().union(second.both()))
        && y0.is_subset_of(x0.union(first.consequent))
        && y0.is_subset_of(x0.union(second.consequent))
}

/// Premises that can belong to a set `L` meeting the per-premise parts of
/// conditions (b) and (c): `X_i ⊆ X₀` and `Y₀ ⊆ X₀ ∪ Y_i`.
pub(crate) fn structural_candidates(q: &EntailmentQuery) -> Vec<usize> {
    let x0 = q.conclusion.antecedent;
    let y0 = q.conclusion.consequent;
    q.premises
        .iter()
        .enumerate()
        .filter(|(_, p)| p.antecedent.is_subset_of(x0) && y0.is_subset_of(x0.union(p.consequent)))
        .map(|(i, _)| i)
        .collect()
}

/// Non-empty subsets of `candidates` (given as sorted premise indices)
/// meeting conditions (a), (b) and (c), smallest first and, within a size,
/// in increasing bitmask order over `candidates`.
pub(crate) fn structural_subsets(q: &EntailmentQuery) -> impl Iterator<Item = Vec<usize>> + '_ {
    let candidates = structural_candidates(q);
    let m = candidates.len();
    let mut masks: Vec<u32> = (1u32..(1u32 << m)).collect();
    masks.sort_by_key(|mask| (mask.count_ones(), *mask));
    let x0 = q.conclusion.antecedent;
    masks.into_iter().filter_map(move |mask| {
        let subset: Vec<usize> = (0..m).filter(|b| mask >> b & 1 == 1).map(|b| candidates[b]).collect();
        let chosen: Vec<PartialImplication> = subset.iter().map(|&i| q.premises.implications()[i]).collect();
        let covered = chosen.iter().fold(AttrSet::EMPTY, |acc, p| acc.union(p.both()));
        (x0.is_subset_of(covered) && implications_nice(&chosen)).then_some(subset)
    })
}

fn padded(q: &EntailmentQuery, entries: &[(usize, Rational)]) -> Vec<Rational> {
    let mut lambda = vec![Rational::zero(); q.k()];
    for (i, v) in entries {
        lambda[*i] = v.clone();
    }
    lambda
}

fn uniform_on(q: &EntailmentQuery, subset: &[usize]) -> Vec<Rational> {
    let share = Rational::new(BigInt::one(), BigInt::from(subset.len()));
    padded(q, &subset.iter().map(|&i| (i, share.clone())).collect::<Vec<_>>())
}

/// Outcome of a characterization: entailed with λ, or not entailed.
pub(crate) fn settle(q: &EntailmentQuery, lambda: Option<Vec<Rational>>, regime: Regime) -> Result<EntailmentVerdict> {
    let rows = q.signatures()?;
    match lambda {
        Some(lambda) => certified(q, lambda, regime, &rows),
        None => refuted(q, regime, &rows),
    }
}

/// λ for a conclusion implied by zero or one premise, if any.
fn trivial_or_single(q: &EntailmentQuery) -> Option<Vec<Rational>> {
    if q.conclusion.is_trivial() {
        return Some(vec![Rational::zero(); q.k()]);
    }
    q.premises
        .iter()
        .position(|p| single_premise_entails(p, &q.conclusion))
        .map(|i| padded(q, &[(i, Rational::one())]))
}

/// `k ≤ 1`. Holds iff `Y₀ ⊆ X₀`, or `X₁ ⊆ X₀` and `X₀Y₀ ⊆ X₁Y₁`, whatever γ ∈ (0,1).
pub fn decide_one_premise(q: &EntailmentQuery) -> Result<EntailmentVerdict> {
    if q.k() > 1 {
        return Err(Error::Contract(format!(
            "one-premise decider called with k = {}",
            q.k()
        )));
    }
    if !in_open_unit_interval(q.gamma()) {
        return decide_lp(q);
    }
    settle(q, trivial_or_single(q), Regime::OnePremise)
}

/// `k = 2`, γ ∈ [1/2, 1). Lower γ is routed to [`decide_low_gamma`].
pub fn decide_two_premise(q: &EntailmentQuery) -> Result<EntailmentVerdict> {
    if q.k() != 2 {
        return Err(Error::Contract(format!(
            "two-premise decider called with k = {}",
            q.k()
        )));
    }
    if !in_open_unit_interval(q.gamma()) {
        return decide_lp(q);
    }
    if *q.gamma() < Rational::new(BigInt::one(), BigInt::from(2)) {
        return decide_low_gamma(q);
    }
    let premises = q.premises.implications();
    let lambda = trivial_or_single(q)
        .or_else(|| seven_inclusions(&premises[0], &premises[1], &q.conclusion).then(|| uniform_on(q, &[0, 1])));
    settle(q, lambda, Regime::TwoPremise)
}

/// γ ∈ (0, 1/k): only zero or one premise can matter.
pub fn decide_low_gamma(q: &EntailmentQuery) -> Result<EntailmentVerdict> {
    let k = q.k();
    if k == 0 {
        return Err(Error::Contract("low-gamma decider needs at least one premise".into()));
    }
    let gamma = q.gamma();
    if !gamma.is_positive() || gamma * int(k as i64) >= Rational::one() {
        return Err(Error::Contract(format!(
            "low-gamma decider needs 0 < γ < 1/{k}, got {gamma}"
        )));
    }
    settle(q, trivial_or_single(q), Regime::LowGamma)
}

/// γ ∈ [(k−1)/k, 1): holds iff `Y₀ ⊆ X₀` or some non-empty `L ⊆ [k]` meets
/// (a) nicety, (b) `∪X_i ⊆ X₀ ⊆ ∪X_iY_i` and (c) `Y₀ ⊆ X₀ ∪ ∩Y_i`.
pub fn decide_high_gamma(q: &EntailmentQuery) -> Result<EntailmentVerdict> {
    let k = q.k();
    if k == 0 {
        return Err(Error::Contract("high-gamma decider needs at least one premise".into()));
    }
    let gamma = q.gamma();
    let threshold = Rational::new(BigInt::from(k - 1), BigInt::from(k));
    if !in_open_unit_interval(gamma) || *gamma < threshold {
        return Err(Error::Contract(format!(
            "high-gamma decider needs {threshold} ≤ γ < 1 and γ > 0, got {gamma}"
        )));
    }
    let lambda = if q.conclusion.is_trivial() {
        Some(vec![Rational::zero(); k])
    } else {
        structural_subsets(q).next().map(|subset| uniform_on(q, &subset))
    };
    settle(q, lambda, Regime::HighGamma)
}

/// Dispatches to the applicable decider. `Auto` and `Characterization`
/// agree on the regime; `Characterization` refuses γ ∈ {0, 1} where no
/// characterization applies, and `Auto` hands those (and k above
/// [`MAX_CHARACTERIZATION_PREMISES`]) to the LP.
pub fn decide(q: &EntailmentQuery, method: Method) -> Result<EntailmentVerdict> {
    let gamma = q.gamma();
    let k = q.k();
    match method {
        Method::Lp => return decide_lp(q),
        Method::Auto if !in_open_unit_interval(gamma) || k > MAX_CHARACTERIZATION_PREMISES => return decide_lp(q),
        Method::Characterization if !in_open_unit_interval(gamma) => {
            return Err(Error::Contract(format!(
                "no characterization applies at γ = {gamma}; use the LP method"
            )))
        }
        _ => {}
    }

    if k == 0 || q.conclusion.is_trivial() {
        let lambda = q.conclusion.is_trivial().then(|| vec![Rational::zero(); k]);
        return settle(q, lambda, Regime::Tautology);
    }
    if k == 1 {
        return decide_one_premise(q);
    }
    let k_rat = int(k as i64);
    if gamma * &k_rat < Rational::one() {
        decide_low_gamma(q)
    } else if gamma * &k_rat >= k_rat.clone() - Rational::one() {
        decide_high_gamma(q)
    } else {
        gamma_star::decide_general(q)
    }
}

/// Whether the entailment holds and no proper subset of the premises
/// already entails the conclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Properness {
    pub proper: bool,
    /// An inclusion-minimal set of premise indices that entails the
    /// conclusion. `None` when the entailment fails.
    pub minimal: Option<Vec<usize>>,
}

/// Minimality is established by re-deciding subsets, never by the
/// structural conditions alone.
pub fn properly_entails(q: &EntailmentQuery) -> Result<Properness> {
    if !decide(q, Method::Auto)?.holds {
        return Ok(Properness {
            proper: false,
            minimal: None,
        });
    }
    // Entailment is monotone in the premise set, so greedy deletion ends
    // at an inclusion-minimal entailing set.
    let mut kept: Vec<usize> = (0..q.k()).collect();
    let mut pos = 0;
    while pos < kept.len() {
        let mut without = kept.clone();
        without.remove(pos);
        if decide(&q.restrict(&without), Method::Auto)?.holds {
            kept = without;
        } else {
            pos += 1;
        }
    }
    Ok(Properness {
        proper: kept.len() == q.k(),
        minimal: Some(kept),
    })
}

/// Greedy redundancy removal in input order: a rule is dropped when the
/// rules kept so far together with the rules not yet visited entail it.
/// The result entails every input rule. It is not necessarily a smallest
/// such subset.
pub fn prune(rules: &ImplicationSet, gamma: &Rational) -> Result<ImplicationSet> {
    check_gamma(gamma)?;
    let mut kept: Vec<usize> = Vec::new();
    for i in 0..rules.len() {
        let others: Vec<usize> = kept.iter().copied().chain(i + 1..rules.len()).collect();
        let q = EntailmentQuery::new(rules.select(&others), rules.implications()[i], gamma.clone())?;
        if !decide(&q, Method::Auto)?.holds {
            kept.push(i);
        }
    }
    Ok(rules.select(&kept))
}
