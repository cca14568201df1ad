//! The critical confidence threshold
//!
//! ```text
//! γ*(Σ, X) = inf_λ max_{Z : X ⊄ Z} Σ_{i∈W_Z} λ_i / Σ_{i∈V_Z∪W_Z} λ_i
//! ```
//!
//! over `λ ≥ 0` with `Σλ_i = 1`, where `W_Z`/`V_Z` are the premises `Z`
//! witnesses/violates, `0/0` counts as `0` and an empty max as `0`.
//!
//! `γ ≥ max_Z(...)` is equivalent to the division-free system
//! `(1−γ)·Σ_W λ − γ·Σ_V λ ≤ 0`, so for a fixed rational γ the question
//! "is some λ good enough" is an exact LP feasibility problem. The feasible
//! γ form an up-set of [0,1] containing 1, which makes bisection valid.
//! γ* itself is irrational in general and is only ever reported as a
//! bracket; decisions never depend on the bracket.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::attrs::AttrSet;
use crate::entailment::{settle, structural_subsets, EntailmentQuery, EntailmentVerdict, Regime};
use crate::error::{Error, Result};
use crate::lp::{self, Constraint, Relation};
use crate::model::{check_gamma, ImplicationSet};
use crate::rational::{in_open_unit_interval, Rational};
use crate::signature::{enumerate_signatures, SignatureRow};

#[derive(Debug, Clone, PartialEq)]
pub struct GammaStarResult {
    /// Largest tested γ known to be infeasible, or 0.
    pub lower: Rational,
    /// Smallest tested γ known to be feasible.
    pub upper: Rational,
    pub tolerance: Rational,
    /// A multiplier vector achieving `max_ratio ≤ upper`.
    pub lambda_at_upper: Vec<Rational>,
}

impl GammaStarResult {
    pub fn midpoint(&self) -> Rational {
        (&self.lower + &self.upper) / BigInt::from(2)
    }
}

fn ratio_rows(sigma: &ImplicationSet, x0: AttrSet) -> Result<Vec<SignatureRow>> {
    if sigma.is_empty() {
        return Err(Error::Contract(
            "the critical threshold needs at least one premise".into(),
        ));
    }
    sigma.universe().check(x0)?;
    let attributes = sigma.occurring().union(x0);
    let rows = enumerate_signatures(
        sigma.implications(),
        attributes,
        sigma.universe().enumeration_cap(),
        |z| !x0.is_subset_of(z),
    )?;
    // Rows with nothing witnessed have ratio 0 and constrain nothing.
    Ok(rows.into_iter().filter(|r| r.signature.witnessed != 0).collect())
}

fn feasible_with(rows: &[SignatureRow], k: usize, gamma: &Rational) -> Result<Option<Vec<Rational>>> {
    let one_minus = Rational::one() - gamma;
    let mut constraints: Vec<Constraint> = rows
        .iter()
        .map(|row| {
            let coefficients = (0..k)
                .map(|i| {
                    if row.signature.witnessed >> i & 1 == 1 {
                        one_minus.clone()
                    } else if row.signature.violated >> i & 1 == 1 {
                        -gamma.clone()
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            Constraint::new(coefficients, Relation::LessEq, Rational::zero())
        })
        .collect();
    constraints.push(Constraint::new(
        vec![Rational::one(); k],
        Relation::Equal,
        Rational::one(),
    ));
    lp::feasible(&constraints, k)
}

/// Some λ on the simplex with `max_ratio(λ) ≤ γ`, if one exists.
pub fn feasible_at(gamma: &Rational, sigma: &ImplicationSet, x0: AttrSet) -> Result<Option<Vec<Rational>>> {
    check_gamma(gamma)?;
    let rows = ratio_rows(sigma, x0)?;
    feasible_with(&rows, sigma.len(), gamma)
}

/// Brackets γ*(Σ, X) to within `tol` by bisection on [0, 1].
pub fn gamma_star(sigma: &ImplicationSet, x0: AttrSet, tol: &Rational) -> Result<GammaStarResult> {
    if !tol.is_positive() {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let rows = ratio_rows(sigma, x0)?;
    let k = sigma.len();

    let mut lower = Rational::zero();
    if let Some(lambda) = feasible_with(&rows, k, &lower)? {
        return Ok(GammaStarResult {
            upper: lower.clone(),
            lower,
            tolerance: tol.clone(),
            lambda_at_upper: lambda,
        });
    }
    let mut upper = Rational::one();
    let mut lambda_at_upper =
        feasible_with(&rows, k, &upper)?.ok_or_else(|| Error::Internal("γ = 1 must always be feasible".into()))?;
    while &upper - &lower > *tol {
        let mid = (&lower + &upper) / BigInt::from(2);
        match feasible_with(&rows, k, &mid)? {
            Some(lambda) => {
                upper = mid;
                lambda_at_upper = lambda;
            }
            None => lower = mid,
        }
    }
    Ok(GammaStarResult {
        lower,
        upper,
        tolerance: tol.clone(),
        lambda_at_upper,
    })
}

/// The inner maximum for a fixed λ. Ratios are scale-invariant, so λ need
/// not be normalized.
pub fn max_ratio(lambda: &[Rational], sigma: &ImplicationSet, x0: AttrSet) -> Result<Rational> {
    if lambda.len() != sigma.len() {
        return Err(Error::Contract(format!(
            "{} multipliers for {} premises",
            lambda.len(),
            sigma.len()
        )));
    }
    if lambda.iter().any(Signed::is_negative) {
        return Err(Error::Contract("multipliers must be non-negative".into()));
    }
    let rows = ratio_rows(sigma, x0)?;
    let sum_over = |mask: u64| -> Rational {
        lambda
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(Rational::zero(), |acc, (_, l)| acc + l)
    };
    let mut best = Rational::zero();
    for row in &rows {
        let denominator = sum_over(row.signature.covered());
        if denominator.is_zero() {
            continue;
        }
        let ratio = sum_over(row.signature.witnessed) / denominator;
        if ratio > best {
            best = ratio;
        }
    }
    Ok(best)
}

/// γ ∈ (0,1), k ≥ 1. Holds iff `Y₀ ⊆ X₀` or some non-empty `L` meets the
/// structural conditions and `γ ≥ γ*(Σ_L, X₀)`. The last condition is
/// decided exactly by LP feasibility at the query's γ; the λ found there,
/// extended by zeros, is the certificate.
pub fn decide_general(q: &EntailmentQuery) -> Result<EntailmentVerdict> {
    if q.k() == 0 {
        return Err(Error::Contract("general decider needs at least one premise".into()));
    }
    if !in_open_unit_interval(q.gamma()) {
        return Err(Error::Contract(format!(
            "general decider needs 0 < γ < 1, got {}",
            q.gamma()
        )));
    }
    if q.conclusion().is_trivial() {
        return settle(q, Some(vec![Rational::zero(); q.k()]), Regime::GeneralGammaStar);
    }
    let x0 = q.conclusion().antecedent;
    for subset in structural_subsets(q) {
        let sub = q.premises().select(&subset);
        if let Some(partial) = feasible_at(q.gamma(), &sub, x0)? {
            let mut lambda = vec![Rational::zero(); q.k()];
            for (&i, value) in subset.iter().zip(partial) {
                lambda[i] = value;
            }
            return settle(q, Some(lambda), Regime::GeneralGammaStar);
        }
    }
    settle(q, None, Regime::GeneralGammaStar)
}
