//! Helpers shared by the integration suites and the acceptance runner.
#![allow(dead_code)]

use std::sync::Arc;

use entail_core::oracle::RandomInstanceSpec;
use entail_core::rational::rat;
use entail_core::{
    check_certificate, decide_general, decide_high_gamma, decide_low_gamma, decide_lp, decide_one_premise,
    decide_two_premise, enforces_homogeneity, properly_entails, EntailmentQuery, EntailmentVerdict, ImplicationSet,
    PartialImplication, Rational, Universe,
};
use num_traits::{One, Signed, Zero};

pub fn universe(names: &[&str]) -> Arc<Universe> {
    Arc::new(Universe::new(names.iter().copied()).unwrap())
}

/// Premises and conclusion written as letter runs, e.g. `("A", "BC")`.
pub fn query_in(
    u: &Arc<Universe>,
    premises: &[(&str, &str)],
    conclusion: (&str, &str),
    gamma: Rational,
) -> EntailmentQuery {
    let imp = |(x, y): (&str, &str)| PartialImplication::new(u.parse_set(x).unwrap(), u.parse_set(y).unwrap());
    let set = ImplicationSet::new(Arc::clone(u), premises.iter().map(|&p| imp(p)).collect()).unwrap();
    EntailmentQuery::new(set, imp(conclusion), gamma).unwrap()
}

pub const TWO_PREMISES: &[(&str, &str)] = &[("A", "BC"), ("A", "BD")];
pub const THREE_PREMISES: &[(&str, &str)] = &[("B", "ACH"), ("C", "AD"), ("D", "AB")];

pub fn two_premise_query(gamma: Rational) -> EntailmentQuery {
    query_in(&universe(&["A", "B", "C", "D"]), TWO_PREMISES, ("ACD", "B"), gamma)
}

pub fn five_attribute_query(gamma: Rational) -> EntailmentQuery {
    query_in(
        &universe(&["A", "B", "C", "D", "H"]),
        THREE_PREMISES,
        ("BCDH", "A"),
        gamma,
    )
}

/// Deterministic random query: `n ∈ 3..=max_n`, `k ∈ 0..=max_k`, density
/// in {0.25, 0.35, 0.45}, all derived from `seed`.
pub fn random_query(seed: u64, max_n: usize, max_k: usize, gamma: Rational) -> EntailmentQuery {
    let n = 3 + (seed % (max_n as u64 - 2)) as usize;
    let k = ((seed / 7) % (max_k as u64 + 1)) as usize;
    let density = 0.25 + 0.1 * ((seed / 3) % 3) as f64;
    RandomInstanceSpec::new(n, k, seed, density)
        .unwrap()
        .query(gamma)
        .unwrap()
}

pub const REGIME_GAMMAS: [(i64, i64); 6] = [(1, 10), (1, 4), (1, 2), (3, 5), (2, 3), (9, 10)];

pub fn gamma(pair: (i64, i64)) -> Rational {
    rat(pair.0, pair.1)
}

/// Evidence check for one verdict: holds needs a valid certificate, fails
/// needs a dataset that passes every premise and fails the conclusion
/// under the ratio semantics.
pub fn verify_evidence(q: &EntailmentQuery, v: &EntailmentVerdict) -> Result<(), String> {
    if v.holds {
        let lambda = v.certificate.as_ref().ok_or("holds without certificate")?;
        if !check_certificate(q, lambda).map_err(|e| e.to_string())? {
            return Err(format!("certificate {lambda:?} rejected"));
        }
    } else {
        let d = v.counterexample.as_ref().ok_or("fails without counterexample")?;
        for p in q.premises() {
            if !d.satisfies(p, q.gamma()).map_err(|e| e.to_string())? {
                return Err(format!("counterexample {d} fails a premise"));
            }
        }
        if d.satisfies(q.conclusion(), q.gamma()).map_err(|e| e.to_string())? {
            return Err(format!("counterexample {d} satisfies the conclusion"));
        }
    }
    Ok(())
}

type Decider = fn(&EntailmentQuery) -> entail_core::Result<EntailmentVerdict>;

/// Characterization deciders whose validity range contains the query.
pub fn applicable_deciders(q: &EntailmentQuery) -> Vec<(&'static str, Decider)> {
    let k = q.k();
    let g = q.gamma();
    let mut out: Vec<(&'static str, Decider)> = Vec::new();
    if k <= 1 {
        out.push(("one-premise", decide_one_premise));
    }
    if k == 0 || g.is_zero() || g.is_one() {
        return out;
    }
    let kk = rat(k as i64, 1);
    if g * &kk < Rational::one() {
        out.push(("low-gamma", decide_low_gamma));
    }
    if k == 2 && *g >= rat(1, 2) {
        out.push(("two-premise", decide_two_premise));
    }
    if g * &kk >= kk.clone() - Rational::one() {
        out.push(("high-gamma", decide_high_gamma));
    }
    out.push(("general", decide_general));
    out
}

#[derive(Debug, Default, Clone, Copy)]
pub struct AgreementStats {
    pub queries: usize,
    pub comparisons: usize,
    pub holds: usize,
    pub proper_holds: usize,
}

/// Verdicts of the LP and of every applicable characterization, or the
/// first disagreement.
pub fn regime_verdicts(q: &EntailmentQuery) -> Result<Vec<(&'static str, EntailmentVerdict)>, String> {
    let lp = decide_lp(q).map_err(|e| format!("lp: {e}"))?;
    let mut out = vec![("lp", lp)];
    for (name, decider) in applicable_deciders(q) {
        let v = decider(q).map_err(|e| format!("{name}: {e}"))?;
        if v.holds != out[0].1.holds {
            return Err(format!("{name} says {} but lp says {}", v.holds, out[0].1.holds));
        }
        out.push((name, v));
    }
    Ok(out)
}

/// Evidence of every verdict, then the structure of proper entailments.
pub fn check_verdicts(
    q: &EntailmentQuery,
    verdicts: &[(&'static str, EntailmentVerdict)],
    stats: &mut AgreementStats,
) -> Result<(), String> {
    for (name, v) in verdicts {
        verify_evidence(q, v).map_err(|e| format!("{name}: {e}"))?;
    }
    if verdicts[0].1.holds {
        stats.holds += 1;
        for (i, (name, v)) in verdicts.iter().enumerate() {
            check_proper_structure(q, v.certificate.as_ref().unwrap(), stats, i == 0)
                .map_err(|e| format!("{name}: {e}"))?;
        }
    }
    Ok(())
}

/// Agreement, evidence and proper-entailment structure in one go.
pub fn cross_check(q: &EntailmentQuery, stats: &mut AgreementStats) -> Result<(), String> {
    stats.queries += 1;
    let verdicts = regime_verdicts(q)?;
    stats.comparisons += verdicts.len() - 1;
    check_verdicts(q, &verdicts, stats)
}

/// Random premise sets for the homogeneity comparison; a quarter share
/// one antecedent.
pub fn random_implication_set(rng: &mut rand_chacha::ChaCha8Rng, max_n: usize, max_k: usize) -> ImplicationSet {
    use rand::Rng;
    let n = rng.gen_range(1..=max_n);
    let k = rng.gen_range(1..=max_k);
    let density = [0.2, 0.35, 0.5][rng.gen_range(0..3)];
    let random_set = |rng: &mut rand_chacha::ChaCha8Rng| {
        entail_core::AttrSet::from_indices((0..n).filter(|_| rng.gen_bool(density)))
    };
    let shared = rng.gen_bool(0.25).then(|| random_set(rng));
    let imps = (0..k)
        .map(|_| {
            let x = shared.unwrap_or_else(|| random_set(rng));
            PartialImplication::new(x, random_set(rng))
        })
        .collect();
    ImplicationSet::new(Arc::new(Universe::letters(n).unwrap()), imps).unwrap()
}

/// For a proper entailment with `γ ∈ (0,1)` and `k ≥ 1`, any certificate is
/// strictly positive and sums to one, and the premises are structurally
/// tied to the conclusion. Premise sets of proper entailments are nice.
pub fn check_proper_structure(
    q: &EntailmentQuery,
    lambda: &[Rational],
    stats: &mut AgreementStats,
    count: bool,
) -> Result<(), String> {
    let g = q.gamma();
    if q.k() == 0 || g.is_zero() || g.is_one() {
        return Ok(());
    }
    let properness = properly_entails(q).map_err(|e| e.to_string())?;
    if !properness.proper {
        return Ok(());
    }
    if count {
        stats.proper_holds += 1;
    }
    let c = q.conclusion();
    let union_all = q
        .premises()
        .iter()
        .fold(entail_core::AttrSet::EMPTY, |a, p| a.union(p.both()));
    let fail = |item: &str| Err(format!("proper entailment breaks {item}; λ = {lambda:?}"));
    if lambda.iter().any(|l| !l.is_positive()) {
        return fail("λ_i > 0");
    }
    if !c.both().is_subset_of(union_all) {
        return fail("X0Y0 ⊆ ∪ X_iY_i");
    }
    let sum: Rational = lambda.iter().sum();
    if !sum.is_one() {
        return fail("Σλ = 1");
    }
    for p in q.premises() {
        if !p.antecedent.is_subset_of(c.antecedent) {
            return fail("X_i ⊆ X0");
        }
        if p.both().is_subset_of(c.antecedent) {
            return fail("X_iY_i ⊄ X0");
        }
        if !c.consequent.is_subset_of(c.antecedent.union(p.consequent)) {
            return fail("Y0 ⊆ X0Y_i");
        }
    }
    if c.consequent.is_subset_of(c.antecedent) {
        return fail("Y0 ⊄ X0");
    }
    if !enforces_homogeneity(q.premises()) {
        return fail("nicety of the premises");
    }
    Ok(())
}
