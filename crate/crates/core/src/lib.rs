//! Exact reasoning about partial implications `X → Y` read at a confidence
//! threshold γ: a dataset satisfies `X → Y` when at least a γ fraction of the
//! transactions containing `X` also contain `Y`.
//!
//! The crate decides whether a set of such rules entails another one at γ,
//! and backs every answer with evidence that can be checked independently:
//! non-negative multipliers when the entailment holds, a concrete dataset
//! when it fails. It also computes the critical threshold above which an
//! entailment starts to hold, tests the homogeneity property that every
//! non-trivial entailment relies on, and removes redundant rules from a
//! rule set.
//!
//! All arithmetic is exact (arbitrary-precision rationals).

pub mod attrs;
pub mod entailment;
pub mod error;
pub mod gamma_star;
pub mod homogeneity;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod rational;
pub mod rules;
pub mod signature;

pub use attrs::{AttrSet, SharedUniverse, Universe, DEFAULT_ENUMERATION_CAP, MAX_ATTRIBUTES};
pub use entailment::{
    certificate_violation, check_certificate, decide, decide_high_gamma, decide_low_gamma, decide_lp,
    decide_one_premise, decide_two_premise, find_counterexample, is_counterexample, properly_entails, prune,
    EntailmentQuery, EntailmentVerdict, Method, Properness, Regime,
};
pub use error::{Error, Result};
pub use gamma_star::{decide_general, feasible_at, gamma_star, max_ratio, GammaStarResult};
pub use homogeneity::{brute_force_homogeneity, enforces_homogeneity, horn_closure, two_premise_nicety};
pub use model::{cover_status, satisfies, support, weight, CoverStatus, Dataset, ImplicationSet, PartialImplication};
pub use rational::Rational;
pub use rules::{format_rules, parse_gamma, parse_rules};
