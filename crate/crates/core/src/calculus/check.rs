//! Independent verification of proof objects: every node is re-derived
//! from its conclusion with [`apply_rule`], so a proof is accepted only if
//! each premise matches, every `(V)` leaf is a valid elementary sequent,
//! and every eigenvariable condition holds.

use std::fmt;

use super::rules::{apply_rule, RuleError};
use super::{ProofTree, RuleId, Sequent};
use crate::syntax::Nominal;

/// Outcome of checking a proof. `defect` explains the first failure found,
/// with the path of premise indices leading to the offending node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofCheck {
    pub ok: bool,
    pub defect: Option<Defect>,
}

impl ProofCheck {
    pub fn eigenvariable_violation(&self) -> bool {
        matches!(
            self.defect,
            Some(Defect {
                kind: DefectKind::Eigenvariable { .. },
                ..
            })
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Defect {
    /// Premise indices from the root to the node where checking failed.
    pub path: Vec<usize>,
    pub kind: DefectKind,
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at premise path {:?}: {}", self.path, self.kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DefectKind {
    /// An `R[]`, `L<>` or `U` witness occurs in its conclusion.
    Eigenvariable { rule: RuleId, nominal: Nominal },
    /// A `(V)` leaf whose sequent is not elementary and valid.
    LeafNotValid(String),
    /// The rule does not apply to the recorded conclusion at all.
    Rule(String),
    PremiseCount {
        rule: RuleId,
        expected: usize,
        found: usize,
    },
    PremiseMismatch {
        premise: usize,
        expected: Sequent,
        found: Sequent,
    },
}

impl fmt::Display for DefectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DefectKind::Eigenvariable { rule, nominal } => write!(
                f,
                "eigenvariable violation: {nominal} occurs in the conclusion of ({rule})"
            ),
            DefectKind::LeafNotValid(reason) => write!(f, "(V) leaf rejected: {reason}"),
            DefectKind::Rule(reason) => write!(f, "{reason}"),
            DefectKind::PremiseCount {
                rule,
                expected,
                found,
            } => write!(f, "({rule}) needs {expected} premises, found {found}"),
            DefectKind::PremiseMismatch {
                premise,
                expected,
                found,
            } => write!(f, "premise {premise} should be {expected}, found {found}"),
        }
    }
}

/// Checks a derivation bottom-up. Never errors: the result carries a
/// diagnostic instead.
pub fn check_proof(t: &ProofTree) -> ProofCheck {
    let mut path = Vec::new();
    match walk(t, &mut path) {
        Ok(()) => ProofCheck {
            ok: true,
            defect: None,
        },
        Err(defect) => ProofCheck {
            ok: false,
            defect: Some(*defect),
        },
    }
}

// the boxed error keeps the Ok path lean; defects carry whole sequents
fn walk(node: &ProofTree, path: &mut Vec<usize>) -> Result<(), Box<Defect>> {
    let fail = |kind: DefectKind, path: &[usize]| {
        Box::new(Defect {
            path: path.to_vec(),
            kind,
        })
    };
    let expected = match apply_rule(
        &node.conclusion,
        node.rule,
        node.principal,
        node.witness.as_ref(),
    ) {
        Ok(premises) => premises,
        Err(RuleError::Eigenvariable { rule, nominal }) => {
            return Err(fail(DefectKind::Eigenvariable { rule, nominal }, path))
        }
        Err(RuleError::LeafNotValid { reason, .. }) => {
            return Err(fail(DefectKind::LeafNotValid(reason), path))
        }
        Err(e) => return Err(fail(DefectKind::Rule(e.to_string()), path)),
    };
    if expected.len() != node.premises.len() {
        return Err(fail(
            DefectKind::PremiseCount {
                rule: node.rule,
                expected: expected.len(),
                found: node.premises.len(),
            },
            path,
        ));
    }
    for (i, (want, have)) in expected.iter().zip(&node.premises).enumerate() {
        if !want.same(&have.conclusion) {
            return Err(fail(
                DefectKind::PremiseMismatch {
                    premise: i,
                    expected: want.clone(),
                    found: have.conclusion.clone(),
                },
                path,
            ));
        }
    }
    for (i, premise) in node.premises.iter().enumerate() {
        path.push(i);
        walk(premise, path)?;
        path.pop();
    }
    Ok(())
}
