//! The labelled sequent calculus for validity over named models.
//!
//! A sequent `Γ |- Δ` stands for the claim that in every named model, some
//! formula of `Δ` is true at its label or some formula of `Γ` is false at
//! its label. Left formulas carry the opponent prefix of the underlying
//! disjunctive game state, right formulas the proponent prefix.
//!
//! The pieces:
//!
//! * [`apply_rule`] applies one rule of the proof system bottom-up, with the
//!   eigenvariable side conditions for `R[]`, `L<>` and `U`.
//! * [`elementary_valid`] decides the base rule `(V)` on elementary sequents
//!   and produces a quotient countermodel when the sequent is not valid.
//! * [`prove`] searches for a proof by fair saturation, returning a proof
//!   object, a countermodel extracted from an open saturated branch, or an
//!   honest `Unknown` when the budget runs out.
//! * [`check_proof`] independently re-derives every node of a proof object.

mod check;
mod elementary;
mod partition;
mod rules;
mod search;

pub use check::{check_proof, Defect, DefectKind, ProofCheck};
pub use elementary::{elementary_countermodel, elementary_valid, ElementaryError};
pub use partition::NominalPartition;
pub use rules::{apply_rule, derived_imp_right, RuleError};
pub use search::{
    extract_countermodel, prove, BranchState, ExtractError, Goal, RuleClass, SearchConfig,
    SearchError,
};

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::kripke::Model;
use crate::syntax::{is_nominal_ident, parse, Formula, Nominal};

/// A formula together with the nominal naming the world it is claimed at.
/// Only the root goal of a proof may be unlabeled.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct LabeledFormula {
    pub label: Option<Nominal>,
    pub formula: Arc<Formula>,
}

impl LabeledFormula {
    pub fn labeled(n: &Nominal, f: impl Into<Arc<Formula>>) -> Self {
        LabeledFormula {
            label: Some(n.clone()),
            formula: f.into(),
        }
    }

    pub fn unlabeled(f: impl Into<Arc<Formula>>) -> Self {
        LabeledFormula {
            label: None,
            formula: f.into(),
        }
    }

    pub fn is_elementary(&self) -> bool {
        self.formula.is_elementary()
    }

    pub fn mentions_nominal(&self, n: &Nominal) -> bool {
        self.label.as_ref() == Some(n) || self.formula.mentions_nominal(n)
    }
}

impl fmt::Display for LabeledFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(n) => write!(f, "{n}:{}", self.formula),
            None => write!(f, "{}", self.formula),
        }
    }
}

/// Which side of the turnstile a formula sits on.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Position of a formula inside a sequent.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct FormulaPos {
    pub side: Side,
    pub index: usize,
}

impl FormulaPos {
    pub fn left(index: usize) -> Self {
        FormulaPos {
            side: Side::Left,
            index,
        }
    }

    pub fn right(index: usize) -> Self {
        FormulaPos {
            side: Side::Right,
            index,
        }
    }
}

/// Two multisets of labelled formulas. The `Vec` order is presentation
/// only; equality of sequents is multiset equality via [`Sequent::same`].
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Sequent {
    pub left: Vec<LabeledFormula>,
    pub right: Vec<LabeledFormula>,
}

impl Sequent {
    pub fn new(left: Vec<LabeledFormula>, right: Vec<LabeledFormula>) -> Self {
        Sequent { left, right }
    }

    /// The sequent `|- f` with `f` unlabeled: how a bare validity goal is
    /// written before `(U)` introduces a label.
    pub fn goal(f: impl Into<Arc<Formula>>) -> Self {
        Sequent {
            left: vec![],
            right: vec![LabeledFormula::unlabeled(f)],
        }
    }

    pub fn side(&self, side: Side) -> &[LabeledFormula] {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn member(&self, pos: FormulaPos) -> Option<&LabeledFormula> {
        self.side(pos.side).get(pos.index)
    }

    pub fn members(&self) -> impl Iterator<Item = (FormulaPos, &LabeledFormula)> {
        self.left
            .iter()
            .enumerate()
            .map(|(i, m)| (FormulaPos::left(i), m))
            .chain(
                self.right
                    .iter()
                    .enumerate()
                    .map(|(i, m)| (FormulaPos::right(i), m)),
            )
    }

    pub fn is_elementary(&self) -> bool {
        self.members().all(|(_, m)| m.is_elementary())
    }

    pub fn mentions_nominal(&self, n: &Nominal) -> bool {
        self.members().any(|(_, m)| m.mentions_nominal(n))
    }

    /// Every nominal occurring in the sequent, as label or inside a formula.
    pub fn nominals(&self) -> std::collections::BTreeSet<Nominal> {
        let mut out = std::collections::BTreeSet::new();
        for (_, m) in self.members() {
            if let Some(n) = &m.label {
                out.insert(n.clone());
            }
            out.extend(m.formula.nominals());
        }
        out
    }

    /// Multiset equality on both sides.
    pub fn same(&self, other: &Sequent) -> bool {
        fn sorted(v: &[LabeledFormula]) -> Vec<&LabeledFormula> {
            let mut v: Vec<&LabeledFormula> = v.iter().collect();
            v.sort();
            v
        }
        sorted(&self.left) == sorted(&other.left) && sorted(&self.right) == sorted(&other.right)
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.left.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}")?;
        }
        if self.left.is_empty() {
            f.write_str("|-")?;
        } else {
            f.write_str(" |-")?;
        }
        for (i, m) in self.right.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, " {m}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse sequent: {0}")]
pub struct SequentParseError(pub String);

/// Parses `i:f, j:g |- k:h` style sequent text. Either side may be empty,
/// and an item without `label:` is an unlabeled formula.
pub fn parse_sequent(text: &str) -> Result<Sequent, SequentParseError> {
    let (left, right) = text
        .split_once("|-")
        .ok_or_else(|| SequentParseError("missing |- separator".to_string()))?;
    Ok(Sequent {
        left: parse_side(left)?,
        right: parse_side(right)?,
    })
}

fn parse_side(text: &str) -> Result<Vec<LabeledFormula>, SequentParseError> {
    let mut out = Vec::new();
    for item in split_top_level(text) {
        let item = item.trim();
        if item.is_empty() {
            return Err(SequentParseError("empty sequent member".to_string()));
        }
        // a colon can only be the label separator: formulas never contain one
        let (label, body) = match item.split_once(':') {
            Some((l, body)) => {
                let l = l.trim();
                if !is_nominal_ident(l) {
                    return Err(SequentParseError(format!(
                        "label {l:?} is not a nominal identifier"
                    )));
                }
                (Some(Nominal::new(l)), body)
            }
            None => (None, item),
        };
        let formula = parse(body).map_err(|e| SequentParseError(e.to_string()))?;
        out.push(LabeledFormula {
            label,
            formula: Arc::new(formula),
        });
    }
    Ok(out)
}

/// Splits on commas outside parentheses, so `R(i,j)` stays whole.
fn split_top_level(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (at, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push(&text[start..at]);
                start = at + 1;
            }
            _ => {}
        }
    }
    if !text[start..].trim().is_empty() {
        out.push(&text[start..]);
    }
    out
}

/// The rules of the proof system. `V` closes a valid elementary sequent;
/// `CL`/`CR` are contraction, `U` introduces the label of a bare goal, and
/// the rest decompose one connective on one side.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum RuleId {
    V,
    CL,
    CR,
    U,
    LOr,
    ROr1,
    ROr2,
    LAnd1,
    LAnd2,
    RAnd,
    LImp,
    RImp1,
    RImp2,
    LNeg,
    RNeg,
    LBox,
    RBox,
    LDia,
    RDia,
    LAt,
    RAt,
}

impl RuleId {
    pub const ALL: [RuleId; 21] = [
        RuleId::V,
        RuleId::CL,
        RuleId::CR,
        RuleId::U,
        RuleId::LOr,
        RuleId::ROr1,
        RuleId::ROr2,
        RuleId::LAnd1,
        RuleId::LAnd2,
        RuleId::RAnd,
        RuleId::LImp,
        RuleId::RImp1,
        RuleId::RImp2,
        RuleId::LNeg,
        RuleId::RNeg,
        RuleId::LBox,
        RuleId::RBox,
        RuleId::LDia,
        RuleId::RDia,
        RuleId::LAt,
        RuleId::RAt,
    ];

    /// Number of premises.
    pub fn arity(self) -> usize {
        match self {
            RuleId::V => 0,
            RuleId::LOr | RuleId::RAnd | RuleId::LImp => 2,
            _ => 1,
        }
    }

    /// True for the rules whose witness must not occur in the conclusion.
    pub fn has_eigenvariable(self) -> bool {
        matches!(self, RuleId::U | RuleId::RBox | RuleId::LDia)
    }

    pub fn name(self) -> &'static str {
        match self {
            RuleId::V => "V",
            RuleId::CL => "CL",
            RuleId::CR => "CR",
            RuleId::U => "U",
            RuleId::LOr => "L|",
            RuleId::ROr1 => "R|1",
            RuleId::ROr2 => "R|2",
            RuleId::LAnd1 => "L&1",
            RuleId::LAnd2 => "L&2",
            RuleId::RAnd => "R&",
            RuleId::LImp => "L->",
            RuleId::RImp1 => "R->1",
            RuleId::RImp2 => "R->2",
            RuleId::LNeg => "L~",
            RuleId::RNeg => "R~",
            RuleId::LBox => "L[]",
            RuleId::RBox => "R[]",
            RuleId::LDia => "L<>",
            RuleId::RDia => "R<>",
            RuleId::LAt => "L@",
            RuleId::RAt => "R@",
        }
    }

    pub fn from_name(name: &str) -> Option<RuleId> {
        RuleId::ALL.into_iter().find(|r| r.name() == name)
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for RuleId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for RuleId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let s = String::deserialize(d)?;
        RuleId::from_name(&s).ok_or_else(|| D::Error::custom(format!("unknown rule {s:?}")))
    }
}

/// A derivation: the conclusion, the rule that concluded it, where the
/// principal formula sat, the witness nominal for instantiation and
/// eigenvariable rules, and the subproofs of the premises.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ProofTree {
    pub conclusion: Sequent,
    pub rule: RuleId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub principal: Option<FormulaPos>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Nominal>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<ProofTree>,
}

impl ProofTree {
    pub fn node_count(&self) -> usize {
        1 + self
            .premises
            .iter()
            .map(ProofTree::node_count)
            .sum::<usize>()
    }

    /// Every rule used in the derivation, in bottom-up, left-to-right order.
    pub fn rules_used(&self) -> Vec<RuleId> {
        let mut out = vec![self.rule];
        for p in &self.premises {
            out.extend(p.rules_used());
        }
        out
    }

    /// Indented text rendering, one node per line, premises below their
    /// conclusion.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, depth: usize) {
        for _ in 0..depth {
            out.push_str("  ");
        }
        out.push('(');
        out.push_str(self.rule.name());
        out.push(')');
        if let Some(w) = &self.witness {
            out.push_str(&format!(" [{w}]"));
        }
        out.push(' ');
        out.push_str(&self.conclusion.to_string());
        out.push('\n');
        for p in &self.premises {
            p.render_into(out, depth + 1);
        }
    }
}

/// What a proof search produced.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchOutcome {
    /// A closed derivation of the goal.
    Proof(ProofTree),
    /// A named model falsifying the goal, extracted from an open saturated
    /// branch, together with the branch as a list of sequents.
    Countermodel { model: Model, branch: Vec<Sequent> },
    /// The search budget ran out before either answer.
    Unknown(BudgetReport),
}

impl SearchOutcome {
    pub fn is_proof(&self) -> bool {
        matches!(self, SearchOutcome::Proof(_))
    }

    pub fn is_countermodel(&self) -> bool {
        matches!(self, SearchOutcome::Countermodel { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetReport {
    pub steps_used: usize,
    pub fresh_used: usize,
    pub reason: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequent_display_and_parse() {
        let s = parse_sequent("i:[](p & q), j:p |- i:[]p").unwrap();
        assert_eq!(s.left.len(), 2);
        assert_eq!(s.right.len(), 1);
        assert_eq!(s.to_string(), "i:[](p & q), j:p |- i:[]p");
        let back = parse_sequent(&s.to_string()).unwrap();
        assert!(back.same(&s));
    }

    #[test]
    fn sequent_parse_edge_cases() {
        let s = parse_sequent("|- p | ~p").unwrap();
        assert!(s.left.is_empty());
        assert_eq!(s.right.len(), 1);
        assert_eq!(s.right[0].label, None);

        let s = parse_sequent("k:R(i,j), i:p |-").unwrap();
        assert_eq!(s.left.len(), 2);
        assert!(s.right.is_empty());

        assert!(parse_sequent("p, q").is_err());
        assert!(parse_sequent("p: q |- r").is_err());
    }

    #[test]
    fn multiset_equality_ignores_order() {
        let a = parse_sequent("i:p, j:q |- k:R(i,j)").unwrap();
        let b = parse_sequent("j:q, i:p |- k:R(i,j)").unwrap();
        assert!(a.same(&b));
        let c = parse_sequent("i:p, i:p |- k:R(i,j)").unwrap();
        assert!(!a.same(&c));
    }

    #[test]
    fn rule_names_round_trip() {
        for r in RuleId::ALL {
            assert_eq!(RuleId::from_name(r.name()), Some(r));
        }
        assert_eq!(RuleId::LOr.arity(), 2);
        assert_eq!(RuleId::RAnd.arity(), 2);
        assert_eq!(RuleId::LImp.arity(), 2);
        assert_eq!(RuleId::V.arity(), 0);
        assert_eq!(RuleId::RBox.arity(), 1);
    }

    #[test]
    fn proof_tree_json_round_trip() {
        let leaf = ProofTree {
            conclusion: parse_sequent("i:p |- i:p").unwrap(),
            rule: RuleId::V,
            principal: None,
            witness: None,
            premises: vec![],
        };
        let tree = ProofTree {
            conclusion: parse_sequent("i:p & q |- i:p").unwrap(),
            rule: RuleId::LAnd1,
            principal: Some(FormulaPos::left(0)),
            witness: None,
            premises: vec![leaf],
        };
        let text = serde_json::to_string(&tree).unwrap();
        let back: ProofTree = serde_json::from_str(&text).unwrap();
        assert_eq!(back, tree);
    }
}
