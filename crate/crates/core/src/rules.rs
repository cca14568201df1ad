//! Line-oriented rule text.
//!
//! ```text
//! # comment
//! B -> A C H
//! C -> A D
//! A ->
//! -> B
//! ```
//!
//! Attribute tokens match `[A-Za-z0-9_]+` and are numbered by first
//! appearance. Repeated tokens on one side collapse.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::attrs::{AttrSet, Universe};
use crate::error::{Error, Result};
use crate::model::{format_implication, ImplicationSet, PartialImplication};
use crate::rational::{parse_rational, Rational};

const ARROW: &str = "->";

fn valid_token(token: &str) -> bool {
    !token.is_empty() && token.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses a whitespace-separated attribute list, adding unseen tokens to
/// `universe`. Errors carry `line`.
fn attrs_on_line(text: &str, universe: &mut Universe, line: usize) -> Result<AttrSet> {
    let mut set = AttrSet::EMPTY;
    for token in text.split_whitespace() {
        if !valid_token(token) {
            return Err(Error::Parse {
                line,
                message: format!("invalid attribute token `{token}`"),
            });
        }
        set = set.union(AttrSet::singleton(universe.intern(token)?));
    }
    Ok(set)
}

fn rule_on_line(text: &str, universe: &mut Universe, line: usize) -> Result<PartialImplication> {
    let mut sides = text.split(ARROW);
    let (Some(lhs), Some(rhs), None) = (sides.next(), sides.next(), sides.next()) else {
        return Err(Error::Parse {
            line,
            message: format!("expected exactly one `{ARROW}` in `{}`", text.trim()),
        });
    };
    let antecedent = attrs_on_line(lhs, universe, line)?;
    let consequent = attrs_on_line(rhs, universe, line)?;
    Ok(PartialImplication::new(antecedent, consequent))
}

/// Parses an attribute list such as `"B C D H"`, extending `universe`.
pub fn parse_attrs(text: &str, universe: &mut Universe) -> Result<AttrSet> {
    attrs_on_line(text, universe, 1)
}

/// Parses a single rule such as `"A C D -> B"`, extending `universe`.
pub fn parse_implication(text: &str, universe: &mut Universe) -> Result<PartialImplication> {
    rule_on_line(text, universe, 1)
}

/// Parses rule text, extending `universe` with new attribute tokens.
pub fn parse_rules_into(text: &str, universe: &mut Universe) -> Result<Vec<PartialImplication>> {
    let mut rules = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        rules.push(rule_on_line(line, universe, i + 1)?);
    }
    Ok(rules)
}

/// Parses rule text over a fresh universe.
pub fn parse_rules(text: &str) -> Result<ImplicationSet> {
    let mut universe = Universe::empty();
    let rules = parse_rules_into(text, &mut universe)?;
    ImplicationSet::new(Arc::new(universe), rules)
}

/// Accepts `p/q` or a decimal literal, exactly; rejects values outside [0, 1].
pub fn parse_gamma(token: &str) -> Result<Rational> {
    let gamma = parse_rational(token)?;
    if gamma < Rational::zero() || gamma > Rational::one() {
        return Err(Error::Usage(format!("confidence `{token}` is outside [0, 1]")));
    }
    Ok(gamma)
}

/// One rule per line, in canonical spacing.
pub fn format_rules(rules: &ImplicationSet) -> String {
    rules
        .iter()
        .map(|imp| format_implication(rules.universe(), imp) + "\n")
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn parses_example_premises() {
        let set = parse_rules("B -> A C H\nC -> A D\nD -> A B").unwrap();
        assert_eq!(set.len(), 3);
        assert_eq!(set.universe().names(), ["B", "A", "C", "H", "D"]);
        let u = set.universe();
        assert_eq!(
            set.implications()[0],
            PartialImplication::new(u.set(["B"]).unwrap(), u.set(["A", "C", "H"]).unwrap())
        );
    }

    #[test]
    fn empty_sides_comments_and_duplicates() {
        let set = parse_rules("# header\n\n  A ->  \n-> B\n   # indented comment\nC C -> D D C\n").unwrap();
        let u = set.universe();
        let imps = set.implications();
        assert_eq!(imps.len(), 3);
        assert_eq!(imps[0], PartialImplication::new(u.set(["A"]).unwrap(), AttrSet::EMPTY));
        assert_eq!(imps[1], PartialImplication::new(AttrSet::EMPTY, u.set(["B"]).unwrap()));
        assert_eq!(
            imps[2],
            PartialImplication::new(u.set(["C"]).unwrap(), u.set(["C", "D"]).unwrap())
        );
        assert_eq!(format_rules(&set), "A ->\n-> B\nC -> C D\n");
    }

    #[test]
    fn errors_report_line_numbers() {
        assert_eq!(
            parse_rules("A -> B\n\nA B C\n").unwrap_err(),
            Error::Parse {
                line: 3,
                message: "expected exactly one `->` in `A B C`".into()
            }
        );
        assert!(matches!(parse_rules("A -> B -> C"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_rules("A\n# x\nmilk, eggs -> bread"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_rules("A -> B\nmilk, eggs -> bread"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_rules("A -> B # trailing"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn too_many_attributes() {
        let text: String = (0..25).map(|i| format!("a{i} -> b\n")).collect();
        assert!(matches!(parse_rules(&text), Err(Error::ResourceCap { .. })));
    }

    #[test]
    fn real_item_names() {
        let set = parse_rules("milk eggs -> bread\nbread_2 ->  milk").unwrap();
        assert_eq!(set.universe().names(), ["milk", "eggs", "bread", "bread_2"]);
    }

    #[test]
    fn gamma_tokens() {
        assert_eq!(parse_gamma("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_gamma("0.57").unwrap(), rat(57, 100));
        assert_eq!(parse_gamma("1").unwrap(), rat(1, 1));
        assert_eq!(parse_gamma("0").unwrap(), rat(0, 1));
        assert!(matches!(parse_gamma("2/1"), Err(Error::Usage(_))));
        assert!(matches!(parse_gamma("-0.1"), Err(Error::Usage(_))));
        assert!(matches!(parse_gamma("half"), Err(Error::Usage(_))));
    }

    #[test]
    fn conclusion_extends_universe() {
        let mut u = Universe::empty();
        parse_rules_into("A -> B", &mut u).unwrap();
        let imp = parse_implication("A C -> B", &mut u).unwrap();
        assert_eq!(u.names(), ["A", "B", "C"]);
        assert_eq!(imp.antecedent, u.set(["A", "C"]).unwrap());
        assert_eq!(parse_attrs("  ", &mut u).unwrap(), AttrSet::EMPTY);
    }

    fn rule_text() -> impl Strategy<Value = String> {
        let token = prop::sample::select(vec!["A", "B", "C", "D", "milk", "x_1", "E9"]);
        let side = prop::collection::vec(token, 0..4).prop_map(|t| t.join("  "));
        let line = prop_oneof![
            4 => (side.clone(), side, "[ \t]{0,2}").prop_map(|(l, r, ws)| format!("{ws}{l} {ws}->{ws} {r}{ws}")),
            1 => Just("# note".to_string()),
            1 => Just(String::new()),
        ];
        prop::collection::vec(line, 0..8).prop_map(|lines| lines.join("\n"))
    }

    proptest! {
        #[test]
        fn format_then_parse_is_idempotent(text in rule_text()) {
            let parsed = parse_rules(&text).unwrap();
            let once = format_rules(&parsed);
            let reparsed = parse_rules(&once).unwrap();
            prop_assert_eq!(format_rules(&reparsed), once.clone());
            prop_assert_eq!(reparsed.len(), parsed.len());
            // Same rules, attribute by attribute name.
            for (a, b) in parsed.iter().zip(reparsed.iter()) {
                prop_assert_eq!(parsed.universe().format(a.antecedent), reparsed.universe().format(b.antecedent).clone());
                let names = |u: &Universe, s: AttrSet| {
                    let mut v: Vec<String> = s.indices().map(|i| u.names()[i].clone()).collect();
                    v.sort();
                    v
                };
                prop_assert_eq!(names(parsed.universe(), a.consequent), names(reparsed.universe(), b.consequent));
            }
        }
    }
}
