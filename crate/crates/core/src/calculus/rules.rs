//! Bottom-up application of the proof rules, with side conditions.

use std::sync::Arc;

use thiserror::Error;

use super::elementary::elementary_valid;
use super::{FormulaPos, LabeledFormula, ProofTree, RuleId, Sequent, Side};
use crate::syntax::{Formula, Nominal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("({rule}) cannot close this sequent: {reason}")]
    LeafNotValid { rule: RuleId, reason: String },
    #[error("({rule}) needs a principal formula position")]
    MissingPrincipal { rule: RuleId },
    #[error("no formula at {side:?} index {index}")]
    BadPosition { side: Side, index: usize },
    #[error("({rule}) does not apply to {found}")]
    ShapeMismatch { rule: RuleId, found: String },
    #[error("({rule}) needs a witness nominal")]
    MissingWitness { rule: RuleId },
    #[error("({rule}) takes no witness")]
    UnexpectedWitness { rule: RuleId },
    #[error("eigenvariable violation: {nominal} occurs in the conclusion of ({rule})")]
    Eigenvariable { rule: RuleId, nominal: Nominal },
    #[error("(U) applies only to a bare goal |- f")]
    UniversalShape,
    #[error("unlabeled member {0} outside a bare goal")]
    UnlabeledMember(String),
    #[error("derived rule mismatch: {0}")]
    DerivedMismatch(String),
}

fn forbid_witness(rule: RuleId, witness: Option<&Nominal>) -> Result<(), RuleError> {
    if witness.is_some() {
        Err(RuleError::UnexpectedWitness { rule })
    } else {
        Ok(())
    }
}

fn require_witness(
    rule: RuleId,
    witness: Option<&Nominal>,
) -> Result<&Nominal, RuleError> {
    witness.ok_or(RuleError::MissingWitness { rule })
}

/// Applies `rule` to `s` read bottom-up, returning the premises. The
/// premise keeps the context in place, minus the principal formula, with
/// new members appended at the end of their side.
///
/// `witness` is the instantiated nominal for `L[]`/`R<>` (any nominal) and
/// the eigenvariable for `R[]`/`L<>`/`U`, which must not occur in `s`.
pub fn apply_rule(
    s: &Sequent,
    rule: RuleId,
    principal: Option<FormulaPos>,
    witness: Option<&Nominal>,
) -> Result<Vec<Sequent>, RuleError> {
    match rule {
        RuleId::V => {
            forbid_witness(rule, witness)?;
            match elementary_valid(s) {
                Ok(true) => Ok(vec![]),
                Ok(false) => Err(RuleError::LeafNotValid {
                    rule,
                    reason: "the sequent is not valid".to_string(),
                }),
                Err(e) => Err(RuleError::LeafNotValid {
                    rule,
                    reason: e.to_string(),
                }),
            }
        }
        RuleId::U => {
            let goal = match (&s.left[..], &s.right[..]) {
                ([], [only]) if only.label.is_none() => only.formula.clone(),
                _ => return Err(RuleError::UniversalShape),
            };
            let w = require_witness(rule, witness)?;
            if goal.mentions_nominal(w) {
                return Err(RuleError::Eigenvariable {
                    rule,
                    nominal: w.clone(),
                });
            }
            Ok(vec![Sequent {
                left: vec![],
                right: vec![LabeledFormula::labeled(w, goal)],
            }])
        }
        _ => apply_logical(s, rule, principal, witness),
    }
}

fn apply_logical(
    s: &Sequent,
    rule: RuleId,
    principal: Option<FormulaPos>,
    witness: Option<&Nominal>,
) -> Result<Vec<Sequent>, RuleError> {
    // outside the (U) goal, every member must carry a label
    for (_, m) in s.members() {
        if m.label.is_none() {
            return Err(RuleError::UnlabeledMember(m.to_string()));
        }
    }
    let pos = principal.ok_or(RuleError::MissingPrincipal { rule })?;
    let member = s
        .member(pos)
        .ok_or(RuleError::BadPosition {
            side: pos.side,
            index: pos.index,
        })?
        .clone();
    let label = member.label.clone().expect("checked above");
    let shape_err = || RuleError::ShapeMismatch {
        rule,
        found: member.to_string(),
    };

    // contraction first: it keeps the principal and has no shape demands
    if matches!(rule, RuleId::CL | RuleId::CR) {
        forbid_witness(rule, witness)?;
        let ok_side = match rule {
            RuleId::CL => Side::Left,
            _ => Side::Right,
        };
        if pos.side != ok_side {
            return Err(shape_err());
        }
        let mut premise = s.clone();
        match pos.side {
            Side::Left => premise.left.push(member),
            Side::Right => premise.right.push(member),
        }
        return Ok(vec![premise]);
    }

    let labeled = |n: &Nominal, f: &Arc<Formula>| LabeledFormula::labeled(n, f.clone());
    // the conclusion minus the principal formula
    let mut base = s.clone();
    match pos.side {
        Side::Left => {
            base.left.remove(pos.index);
        }
        Side::Right => {
            base.right.remove(pos.index);
        }
    }
    let push = |mut seq: Sequent, side: Side, m: LabeledFormula| -> Sequent {
        match side {
            Side::Left => seq.left.push(m),
            Side::Right => seq.right.push(m),
        }
        seq
    };

    use Side::{Left, Right};
    let premises = match (rule, pos.side, &*member.formula) {
        (RuleId::LOr, Left, Formula::Or(a, b)) => {
            forbid_witness(rule, witness)?;
            vec![
                push(base.clone(), Left, labeled(&label, a)),
                push(base, Left, labeled(&label, b)),
            ]
        }
        (RuleId::ROr1, Right, Formula::Or(a, _)) => {
            forbid_witness(rule, witness)?;
            vec![push(base, Right, labeled(&label, a))]
        }
        (RuleId::ROr2, Right, Formula::Or(_, b)) => {
            forbid_witness(rule, witness)?;
            vec![push(base, Right, labeled(&label, b))]
        }
        (RuleId::LAnd1, Left, Formula::And(a, _)) => {
            forbid_witness(rule, witness)?;
            vec![push(base, Left, labeled(&label, a))]
        }
        (RuleId::LAnd2, Left, Formula::And(_, b)) => {
            forbid_witness(rule, witness)?;
            vec![push(base, Left, labeled(&label, b))]
        }
        (RuleId::RAnd, Right, Formula::And(a, b)) => {
            forbid_witness(rule, witness)?;
            vec![
                push(base.clone(), Right, labeled(&label, a)),
                push(base, Right, labeled(&label, b)),
            ]
        }
        (RuleId::LImp, Left, Formula::Imp(a, b)) => {
            forbid_witness(rule, witness)?;
            vec![
                push(base.clone(), Right, labeled(&label, a)),
                push(base, Left, labeled(&label, b)),
            ]
        }
        (RuleId::RImp1, Right, Formula::Imp(a, _)) => {
            forbid_witness(rule, witness)?;
            vec![push(base, Left, labeled(&label, a))]
        }
        (RuleId::RImp2, Right, Formula::Imp(_, b)) => {
            forbid_witness(rule, witness)?;
            vec![push(base, Right, labeled(&label, b))]
        }
        (RuleId::LNeg, Left, Formula::Neg(x)) => {
            forbid_witness(rule, witness)?;
            vec![push(base, Right, labeled(&label, x))]
        }
        (RuleId::RNeg, Right, Formula::Neg(x)) => {
            forbid_witness(rule, witness)?;
            vec![push(base, Left, labeled(&label, x))]
        }
        (RuleId::LAt, Left, Formula::At(j, x)) => {
            forbid_witness(rule, witness)?;
            vec![push(base, Left, labeled(j, x))]
        }
        (RuleId::RAt, Right, Formula::At(j, x)) => {
            forbid_witness(rule, witness)?;
            vec![push(base, Right, labeled(j, x))]
        }
        (RuleId::LBox, Left, Formula::Box(x)) => {
            let j = require_witness(rule, witness)?;
            vec![push(base, Left, box_instance(&label, j, x))]
        }
        (RuleId::RBox, Right, Formula::Box(x)) => {
            let j = eigenvariable(s, rule, witness)?;
            vec![push(base, Right, box_instance(&label, j, x))]
        }
        (RuleId::LDia, Left, Formula::Dia(x)) => {
            let j = eigenvariable(s, rule, witness)?;
            vec![push(base, Left, dia_instance(&label, j, x))]
        }
        (RuleId::RDia, Right, Formula::Dia(x)) => {
            let j = require_witness(rule, witness)?;
            vec![push(base, Right, dia_instance(&label, j, x))]
        }
        _ => return Err(shape_err()),
    };
    Ok(premises)
}

/// `j: ~R(i,j) | x`, the premise member both box rules introduce.
fn box_instance(i: &Nominal, j: &Nominal, x: &Arc<Formula>) -> LabeledFormula {
    LabeledFormula::labeled(
        j,
        Formula::or(Formula::neg(Formula::Rel(i.clone(), j.clone())), x.clone()),
    )
}

/// `j: R(i,j) & x`, for the diamond rules.
fn dia_instance(i: &Nominal, j: &Nominal, x: &Arc<Formula>) -> LabeledFormula {
    LabeledFormula::labeled(
        j,
        Formula::and(Formula::Rel(i.clone(), j.clone()), x.clone()),
    )
}

fn eigenvariable<'a>(
    s: &Sequent,
    rule: RuleId,
    witness: Option<&'a Nominal>,
) -> Result<&'a Nominal, RuleError> {
    let j = require_witness(rule, witness)?;
    if s.mentions_nominal(j) {
        return Err(RuleError::Eigenvariable {
            rule,
            nominal: j.clone(),
        });
    }
    Ok(j)
}

/// The derivable single-premise implication rule: wraps a proof of
/// `Γ, i:a |- i:b, Δ` into `CR`, `R->1`, `R->2` steps concluding
/// `Γ |- i:a -> b, Δ`.
pub fn derived_imp_right(
    conclusion: &Sequent,
    principal: FormulaPos,
    premise: ProofTree,
) -> Result<ProofTree, RuleError> {
    let c1 = apply_rule(conclusion, RuleId::CR, Some(principal), None)?
        .pop()
        .expect("CR has one premise");
    let c2 = apply_rule(&c1, RuleId::RImp1, Some(principal), None)?
        .pop()
        .expect("R->1 has one premise");
    let dup = FormulaPos::right(c2.right.len() - 1);
    let c3 = apply_rule(&c2, RuleId::RImp2, Some(dup), None)?
        .pop()
        .expect("R->2 has one premise");
    if !c3.same(&premise.conclusion) {
        return Err(RuleError::DerivedMismatch(format!(
            "expected premise {c3}, found {}",
            premise.conclusion
        )));
    }
    Ok(ProofTree {
        conclusion: conclusion.clone(),
        rule: RuleId::CR,
        principal: Some(principal),
        witness: None,
        premises: vec![ProofTree {
            conclusion: c1,
            rule: RuleId::RImp1,
            principal: Some(principal),
            witness: None,
            premises: vec![ProofTree {
                conclusion: c2,
                rule: RuleId::RImp2,
                principal: Some(dup),
                witness: None,
                premises: vec![premise],
            }],
        }],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::parse_sequent;

    fn nom(s: &str) -> Nominal {
        Nominal::new(s)
    }

    #[test]
    fn right_box_introduces_instance() {
        let s = parse_sequent("|- i:[]p").unwrap();
        let premises = apply_rule(
            &s,
            RuleId::RBox,
            Some(FormulaPos::right(0)),
            Some(&nom("j")),
        )
        .unwrap();
        assert_eq!(premises.len(), 1);
        assert!(premises[0].same(&parse_sequent("|- j:~R(i,j) | p").unwrap()));
    }

    #[test]
    fn left_box_instantiates_at_any_nominal() {
        let s = parse_sequent("i:[](p & q) |- j:~R(i,j) | p").unwrap();
        let premises =
            apply_rule(&s, RuleId::LBox, Some(FormulaPos::left(0)), Some(&nom("j"))).unwrap();
        assert_eq!(premises.len(), 1);
        assert!(premises[0].same(&parse_sequent("j:~R(i,j) | (p & q) |- j:~R(i,j) | p").unwrap()));
    }

    #[test]
    fn eigenvariable_violation_is_rejected() {
        let s = parse_sequent("|- i:[]p").unwrap();
        let err = apply_rule(
            &s,
            RuleId::RBox,
            Some(FormulaPos::right(0)),
            Some(&nom("i")),
        )
        .unwrap_err();
        assert_eq!(
            err,
            RuleError::Eigenvariable {
                rule: RuleId::RBox,
                nominal: nom("i")
            }
        );
    }

    #[test]
    fn universal_rule_requires_bare_goal() {
        let s = Sequent::goal(crate::syntax::parse("[]p -> p").unwrap());
        let premises = apply_rule(&s, RuleId::U, None, Some(&nom("i"))).unwrap();
        assert!(premises[0].same(&parse_sequent("|- i:[]p -> p").unwrap()));

        // the witness must be fresh for the goal
        let err = apply_rule(
            &Sequent::goal(crate::syntax::parse("@i p").unwrap()),
            RuleId::U,
            None,
            Some(&nom("i")),
        )
        .unwrap_err();
        assert!(matches!(err, RuleError::Eigenvariable { .. }));

        let err = apply_rule(
            &parse_sequent("i:p |- i:p").unwrap(),
            RuleId::U,
            None,
            Some(&nom("j")),
        )
        .unwrap_err();
        assert_eq!(err, RuleError::UniversalShape);
    }

    #[test]
    fn premise_counts_match_arity() {
        let cases: Vec<(&str, RuleId, FormulaPos)> = vec![
            ("i:p | q |- i:r", RuleId::LOr, FormulaPos::left(0)),
            ("|- i:p & q", RuleId::RAnd, FormulaPos::right(0)),
            ("i:p -> q |- i:r", RuleId::LImp, FormulaPos::left(0)),
            ("|- i:p | q", RuleId::ROr1, FormulaPos::right(0)),
            ("|- i:p | q", RuleId::ROr2, FormulaPos::right(0)),
            ("i:p & q |- i:r", RuleId::LAnd1, FormulaPos::left(0)),
            ("i:p & q |- i:r", RuleId::LAnd2, FormulaPos::left(0)),
            ("|- i:p -> q", RuleId::RImp1, FormulaPos::right(0)),
            ("|- i:p -> q", RuleId::RImp2, FormulaPos::right(0)),
            ("i:~p |- i:q", RuleId::LNeg, FormulaPos::left(0)),
            ("|- i:~p", RuleId::RNeg, FormulaPos::right(0)),
            ("i:@j p |- i:q", RuleId::LAt, FormulaPos::left(0)),
            ("|- i:@j p", RuleId::RAt, FormulaPos::right(0)),
            ("i:p |- i:p", RuleId::CL, FormulaPos::left(0)),
            ("i:p |- i:p", RuleId::CR, FormulaPos::right(0)),
        ];
        for (text, rule, pos) in cases {
            let s = parse_sequent(text).unwrap();
            let premises = apply_rule(&s, rule, Some(pos), None).unwrap();
            assert_eq!(premises.len(), rule.arity(), "rule {rule} on {text}");
        }
    }

    #[test]
    fn at_rules_relabel() {
        let s = parse_sequent("i:@j p |- i:q").unwrap();
        let premises = apply_rule(&s, RuleId::LAt, Some(FormulaPos::left(0)), None).unwrap();
        assert!(premises[0].same(&parse_sequent("j:p |- i:q").unwrap()));
    }

    #[test]
    fn shape_mismatches_are_rejected() {
        let s = parse_sequent("i:p & q |- i:r").unwrap();
        assert!(matches!(
            apply_rule(&s, RuleId::LOr, Some(FormulaPos::left(0)), None),
            Err(RuleError::ShapeMismatch { .. })
        ));
        assert!(matches!(
            apply_rule(&s, RuleId::RAnd, Some(FormulaPos::right(0)), None),
            Err(RuleError::ShapeMismatch { .. })
        ));
        assert!(matches!(
            apply_rule(&s, RuleId::LAnd1, Some(FormulaPos::left(5)), None),
            Err(RuleError::BadPosition { .. })
        ));
        assert!(matches!(
            apply_rule(&s, RuleId::LBox, Some(FormulaPos::left(0)), Some(&nom("j"))),
            Err(RuleError::ShapeMismatch { .. })
        ));
        assert!(matches!(
            apply_rule(
                &s,
                RuleId::LAnd1,
                Some(FormulaPos::left(0)),
                Some(&nom("j"))
            ),
            Err(RuleError::UnexpectedWitness { .. })
        ));
    }

    #[test]
    fn contraction_duplicates_principal() {
        let s = parse_sequent("|- i:p | ~p").unwrap();
        let premises = apply_rule(&s, RuleId::CR, Some(FormulaPos::right(0)), None).unwrap();
        assert!(premises[0].same(&parse_sequent("|- i:p | ~p, i:p | ~p").unwrap()));
    }

    #[test]
    fn derived_imp_right_expands_and_checks() {
        let conclusion = parse_sequent("|- i:p -> p").unwrap();
        let inner = ProofTree {
            conclusion: parse_sequent("i:p |- i:p").unwrap(),
            rule: RuleId::V,
            principal: None,
            witness: None,
            premises: vec![],
        };
        let tree = derived_imp_right(&conclusion, FormulaPos::right(0), inner).unwrap();
        assert_eq!(
            tree.rules_used(),
            vec![RuleId::CR, RuleId::RImp1, RuleId::RImp2, RuleId::V]
        );
        let check = crate::calculus::check_proof(&tree);
        assert!(check.ok, "{:?}", check.defect);
    }
}
