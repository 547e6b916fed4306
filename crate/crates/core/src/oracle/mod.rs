//! Bounded equational rewriting over each kind's axioms, used as ground
//! truth for the graph-based decisions, and seeded random generators.
//!
//! Terms are searched modulo associativity of composition and the identity
//! laws. Everything else is an explicit rewrite, applied in both directions
//! except `k(a) = k(b) . f`, which is only used to absorb `f`.

use thiserror::Error;

use crate::coherence::decide_equal;
use crate::syntax::MorTerm;
use crate::typing::{infer_type, Kind, MorType, TypeError};

mod node;
mod random;
mod rules;
mod search;

pub use random::{
    random_diversified_object, random_rule_instance, random_std_term, random_term, random_walk,
};
pub use rules::{rule_kinds, rule_names, Direction, INTERCHANGE};
pub use search::{Budget, OracleVerdict, WitnessStep};

use node::Node;
use search::{is_step, neighbors, rules_for, search};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("terms have different types: {left} versus {right}")]
    TypeMismatch { left: MorType, right: MorType },
}

/// Searches for a chain of rewrites connecting `f` and `g`, expanding the
/// smaller frontier first.
pub fn closure_equal(
    f: &MorTerm,
    g: &MorTerm,
    kind: Kind,
    budget: Budget,
) -> Result<OracleVerdict, OracleError> {
    let (tf, tg) = (infer_type(f, kind)?, infer_type(g, kind)?);
    if tf != tg {
        return Err(OracleError::TypeMismatch {
            left: tf,
            right: tg,
        });
    }
    Ok(search(
        Node::from_term(f),
        Node::from_term(g),
        &rules_for(kind),
        budget,
    ))
}

/// Every single rewrite of `f` at `kind`, with the rule and direction used.
pub fn rewrites(
    f: &MorTerm,
    kind: Kind,
) -> Result<Vec<(MorTerm, &'static str, Direction)>, TypeError> {
    infer_type(f, kind)?;
    Ok(neighbors(&Node::from_term(f), &rules_for(kind))
        .into_iter()
        .map(|(n, l)| (n.to_term(), l.rule, l.dir))
        .collect())
}

/// Whether two terms coincide up to associativity of composition and
/// identity laws.
pub fn same_modulo_composition(f: &MorTerm, g: &MorTerm) -> bool {
    Node::from_term(f) == Node::from_term(g)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("step {index} ({rule}) does not rewrite `{from}` into `{to}`")]
    NotAStep {
        index: usize,
        rule: String,
        from: String,
        to: String,
    },
    #[error("rule {rule} at step {index} is not available in {kind}")]
    RuleNotAdmitted {
        index: usize,
        rule: String,
        kind: Kind,
    },
    #[error("witness ends at `{end}` instead of `{target}`")]
    WrongEnd { end: String, target: String },
}

/// Checks that each witness step is a single rewrite of `kind` and that the
/// chain leads from `f` to `g`.
pub fn replay(
    f: &MorTerm,
    g: &MorTerm,
    witness: &[WitnessStep],
    kind: Kind,
) -> Result<(), ReplayError> {
    let rules = rules_for(kind);
    let kinds = rule_kinds();
    let mut cur = Node::from_term(f);
    for (index, step) in witness.iter().enumerate() {
        if !kinds.get(step.rule).is_some_and(|k| k.le(&kind)) {
            return Err(ReplayError::RuleNotAdmitted {
                index,
                rule: step.rule.to_string(),
                kind,
            });
        }
        let next = Node::from_term(&step.term);
        if !is_step(&cur, &next, step.rule, &rules) {
            return Err(ReplayError::NotAStep {
                index,
                rule: step.rule.to_string(),
                from: cur.to_string(),
                to: next.to_string(),
            });
        }
        cur = next;
    }
    let target = Node::from_term(g);
    if cur != target {
        return Err(ReplayError::WrongEnd {
            end: cur.to_string(),
            target: target.to_string(),
        });
    }
    Ok(())
}

/// Budget for pairs the decider calls different: only a quick search for
/// an unexpected proof.
pub const DISPROOF_BUDGET: Budget = Budget {
    max_depth: 6,
    max_states: 20_000,
};

/// Same-type random pairs: even indices pair a term with a random rewrite
/// walk from it, odd indices pair two independently drawn terms of the same
/// type when one turns up among 400 draws.
pub fn random_pairs(kind: Kind, size: usize, pairs: usize, seed: u64) -> Vec<(MorTerm, MorTerm)> {
    let mut out = Vec::with_capacity(pairs);
    for i in 0..pairs {
        let s = seed.wrapping_mul(1_000_003).wrapping_add(i as u64 * 7919);
        let f = random_term(kind, size, s, None);
        let walked = |n: u64| random_walk(&f, kind, 1 + (n % 5) as usize, size, s ^ 0x5eed);
        if i % 2 == 0 {
            out.push((f.clone(), walked(s)));
            continue;
        }
        let ty = infer_type(&f, kind).expect("generated terms are well-typed");
        let found = (1..=400u64)
            .map(|t| {
                random_term(
                    kind,
                    1 + t as usize % size.max(1),
                    s.wrapping_add(t * 104_729),
                    Some(&ty.dom),
                )
            })
            .find(|g| {
                infer_type(g, kind)
                    .map(|t| t.cod == ty.cod)
                    .unwrap_or(false)
            });
        let g = found.unwrap_or_else(|| walked(s));
        out.push((f, g));
    }
    out
}

/// Tally of a decider-versus-oracle comparison.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FuzzReport {
    pub pairs: usize,
    pub decider_equal: usize,
    pub decider_not_equal: usize,
    /// Decider-equal pairs the oracle proved equal.
    pub confirmed: usize,
    /// Decider-equal pairs the oracle could not settle.
    pub budget_exhausted: usize,
    pub unconfirmed: Vec<(MorTerm, MorTerm)>,
    pub contradictions: Vec<String>,
}

impl FuzzReport {
    /// Share of decider-equal pairs confirmed by the oracle (1 when there
    /// are none).
    pub fn confirmation_rate(&self) -> f64 {
        if self.decider_equal == 0 {
            1.0
        } else {
            self.confirmed as f64 / self.decider_equal as f64
        }
    }
}

/// Compares the decider with the oracle on the given pairs. A contradiction
/// is an oracle proof of a pair the decider separates. A decider-equal pair
/// the oracle cannot connect counts as exhausted even when both closures
/// were enumerated, since identities are inserted only at restricted points.
pub fn compare_with_decider(
    pairs: &[(MorTerm, MorTerm)],
    kind: Kind,
    budget: Budget,
) -> Result<FuzzReport, OracleError> {
    let mut report = FuzzReport {
        pairs: pairs.len(),
        ..FuzzReport::default()
    };
    for (f, g) in pairs {
        let verdict = decide_equal(f, g, kind)?;
        if verdict.equal {
            report.decider_equal += 1;
            match closure_equal(f, g, kind, budget)? {
                OracleVerdict::ProvedEqual { .. } => report.confirmed += 1,
                OracleVerdict::BudgetExhausted { .. } => {
                    report.budget_exhausted += 1;
                    report.unconfirmed.push((f.clone(), g.clone()));
                }
            }
        } else {
            report.decider_not_equal += 1;
            if verdict.reason == crate::coherence::Reason::DifferentType {
                continue;
            }
            if closure_equal(f, g, kind, DISPROOF_BUDGET)?.is_proved() {
                report.contradictions.push(format!(
                    "oracle proves a pair the decider separates: {f} = {g}"
                ));
            }
        }
    }
    Ok(report)
}
