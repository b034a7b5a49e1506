//! Fair saturation-based proof search, and countermodel extraction from
//! open saturated branches.
//!
//! The search expands one branch at a time, choosing the next rule by a
//! fixed priority over four classes (closing by `(V)` always comes first):
//!
//! 1. invertible single-premise steps: `L~`, `R~`, `L@`, `R@`, and the
//!    contraction-backed expansions that keep both components of `L&`,
//!    `R|` and `R->`;
//! 2. the invertible splitting rules `L|`, `R&`, `L->`;
//! 3. instantiation of `L[]` and `R<>`, with built-in contraction: each
//!    such formula is instantiated at every nominal on the branch exactly
//!    once, and revisited whenever a new nominal appears;
//! 4. eigenvariable steps `R[]` and `L<>`, once per occurrence, with a
//!    freshly minted nominal.
//!
//! As soon as the elementary part of a branch is valid the branch is closed
//! by decomposing whatever remains with arbitrary choices, which cannot
//! disturb the elementary part. A branch with no applicable step at all is
//! saturated: the quotient of its nominals by the accumulated equalities,
//! furnished with its left-hand elementary facts, falsifies every goal on
//! the branch. Searches that exhaust the step or fresh-nominal budget
//! report `Unknown`.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use super::elementary::{part_valid, ElementaryFacts};
use super::rules::apply_rule;
use super::{
    BudgetReport, FormulaPos, LabeledFormula, ProofTree, RuleId, SearchOutcome, Sequent, Side,
};
use crate::kripke::Model;
use crate::syntax::{Formula, Nominal, NominalGen};

/// The four rule classes the regulation priority ranges over.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RuleClass {
    InvertibleSingle,
    InvertibleBranching,
    Instantiation,
    Eigenvariable,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Fresh nominals the whole search may mint (for `U`, `R[]`, `L<>`).
    pub max_fresh_nominals: usize,
    /// Total rule applications before giving up.
    pub max_steps: usize,
    /// Priority order over the rule classes; must mention each exactly
    /// once. Keeping instantiation ahead of the eigenvariable class lets
    /// left boxes feed right boxes, which sequents like
    /// `i:[](p & q) |- i:[]p` need.
    pub priority: Vec<RuleClass>,
}

impl SearchConfig {
    pub const DEFAULT_PRIORITY: [RuleClass; 4] = [
        RuleClass::InvertibleSingle,
        RuleClass::InvertibleBranching,
        RuleClass::Instantiation,
        RuleClass::Eigenvariable,
    ];
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_fresh_nominals: 8,
            max_steps: 10_000,
            priority: Self::DEFAULT_PRIORITY.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("budget misconfiguration: {0}")]
    BadBudget(String),
    #[error("invalid priority: each rule class must appear exactly once")]
    BadPriority,
    #[error("unlabeled formulas may appear only as a bare goal |- f")]
    UnlabeledInGoal,
    #[error("cannot search for a proof of an empty sequent")]
    EmptyGoal,
}

/// What to prove: a formula (validity) or a sequent.
#[derive(Clone, Debug)]
pub enum Goal {
    Formula(Arc<Formula>),
    Sequent(Sequent),
}

impl From<Formula> for Goal {
    fn from(f: Formula) -> Goal {
        Goal::Formula(Arc::new(f))
    }
}

impl From<Arc<Formula>> for Goal {
    fn from(f: Arc<Formula>) -> Goal {
        Goal::Formula(f)
    }
}

impl From<Sequent> for Goal {
    fn from(s: Sequent) -> Goal {
        Goal::Sequent(s)
    }
}

/// A branch of the search: the current sequent plus the bookkeeping that
/// makes instantiation fair. Elementary facts only accumulate along a
/// branch, so the final sequent carries almost everything the countermodel
/// needs; the exception is goal nominals whose labels were consumed by the
/// `@` rules, which stay anchored here so they keep a world.
#[derive(Clone, Debug)]
pub struct BranchState {
    sequent: Sequent,
    anchored: BTreeSet<Nominal>,
    used_instances: BTreeSet<(LabeledFormula, Nominal)>,
    saturated: bool,
}

impl BranchState {
    pub fn root(sequent: Sequent) -> Self {
        let anchored = sequent.nominals();
        BranchState {
            sequent,
            anchored,
            used_instances: BTreeSet::new(),
            saturated: false,
        }
    }

    fn root_anchored(sequent: Sequent, anchored: BTreeSet<Nominal>) -> Self {
        BranchState {
            sequent,
            anchored,
            used_instances: BTreeSet::new(),
            saturated: false,
        }
    }

    pub fn sequent(&self) -> &Sequent {
        &self.sequent
    }

    /// Set once no rule application can add anything new to the branch.
    pub fn is_saturated(&self) -> bool {
        self.saturated
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("the branch is not saturated")]
    NotSaturated,
}

/// The quotient countermodel of an open saturated branch: worlds are the
/// equivalence classes of the branch's nominals (plus the anchored goal
/// nominals) under the accumulated left-hand equalities, accessibility and
/// valuation come from the left-hand elementary facts, and every nominal
/// names its own class.
pub fn extract_countermodel(branch: &BranchState) -> Result<Model, ExtractError> {
    if !branch.saturated {
        return Err(ExtractError::NotSaturated);
    }
    let mut facts = ElementaryFacts::gather(&branch.sequent);
    for n in branch.sequent.nominals() {
        facts.partition.add(&n);
    }
    for n in &branch.anchored {
        facts.partition.add(n);
    }
    Ok(facts.quotient_model())
}

/// Searches for a proof of `goal`. Formula goals start at the bare sequent
/// `|- f` and apply `(U)` once with a fresh label.
pub fn prove(goal: impl Into<Goal>, config: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    validate(config)?;
    let goal = match goal.into() {
        Goal::Sequent(s) => {
            if s.left.is_empty() && s.right.len() == 1 && s.right[0].label.is_none() {
                Goal::Formula(s.right[0].formula.clone())
            } else if s.left.is_empty() && s.right.is_empty() {
                return Err(SearchError::EmptyGoal);
            } else if s.members().any(|(_, m)| m.label.is_none()) {
                return Err(SearchError::UnlabeledInGoal);
            } else {
                Goal::Sequent(s)
            }
        }
        g => g,
    };

    let mut engine = Engine {
        config,
        steps: 0,
        fresh_used: 0,
        gen: NominalGen::new("n"),
        avoid: BTreeSet::new(),
        trace: Vec::new(),
    };

    match goal {
        Goal::Formula(f) => {
            let root = Sequent::goal(f.clone());
            let goal_nominals = f.nominals();
            engine.avoid = goal_nominals.clone();
            engine.trace.push(root.clone());
            let witness = engine
                .mint()
                .expect("validated: the fresh budget is positive");
            engine.steps += 1;
            let premise = apply_rule(&root, RuleId::U, None, Some(&witness))
                .expect("a bare goal always has the (U) shape")
                .pop()
                .expect("(U) has one premise");
            engine.trace.push(premise.clone());
            // the goal's own nominals stay anchored: the branch may lose a
            // label to the @ rules, but the goal still needs it assigned
            let result = engine.search(&BranchState::root_anchored(premise, goal_nominals));
            Ok(match result {
                BranchResult::Closed(sub) => SearchOutcome::Proof(ProofTree {
                    conclusion: root,
                    rule: RuleId::U,
                    principal: Some(FormulaPos::right(0)),
                    witness: Some(witness),
                    premises: vec![sub],
                }),
                BranchResult::Open { model, branch } => {
                    SearchOutcome::Countermodel { model, branch }
                }
                BranchResult::Exhausted(reason) => engine.unknown(reason),
            })
        }
        Goal::Sequent(s) => {
            engine.avoid = s.nominals();
            engine.trace.push(s.clone());
            let result = engine.search(&BranchState::root(s));
            Ok(match result {
                BranchResult::Closed(tree) => SearchOutcome::Proof(tree),
                BranchResult::Open { model, branch } => {
                    SearchOutcome::Countermodel { model, branch }
                }
                BranchResult::Exhausted(reason) => engine.unknown(reason),
            })
        }
    }
}

fn validate(config: &SearchConfig) -> Result<(), SearchError> {
    if config.max_steps == 0 {
        return Err(SearchError::BadBudget(
            "max_steps must be positive".to_string(),
        ));
    }
    if config.max_fresh_nominals == 0 {
        return Err(SearchError::BadBudget(
            "max_fresh_nominals must be positive".to_string(),
        ));
    }
    let ok = config.priority.len() == 4
        && SearchConfig::DEFAULT_PRIORITY
            .iter()
            .all(|c| config.priority.contains(c));
    if !ok {
        return Err(SearchError::BadPriority);
    }
    Ok(())
}

struct Engine<'c> {
    config: &'c SearchConfig,
    steps: usize,
    fresh_used: usize,
    gen: NominalGen,
    avoid: BTreeSet<Nominal>,
    trace: Vec<Sequent>,
}

enum BranchResult {
    Closed(ProofTree),
    Open { model: Model, branch: Vec<Sequent> },
    Exhausted(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum ActionKind {
    Single,
    Branching,
    Instantiate,
    Eigen,
}

struct Action {
    kind: ActionKind,
    pos: FormulaPos,
    /// The instantiated nominal, for `Instantiate` actions.
    witness: Option<Nominal>,
}

/// One rule application recorded while expanding a chain bottom-up.
struct ProofStep {
    conclusion: Sequent,
    rule: RuleId,
    principal: FormulaPos,
    witness: Option<Nominal>,
}

const STEP_BUDGET: &str = "the step budget is exhausted";
const FRESH_BUDGET: &str = "the fresh-nominal budget is exhausted";

impl Engine<'_> {
    fn unknown(&self, reason: String) -> SearchOutcome {
        SearchOutcome::Unknown(BudgetReport {
            steps_used: self.steps,
            fresh_used: self.fresh_used,
            reason,
        })
    }

    fn mint(&mut self) -> Option<Nominal> {
        if self.fresh_used >= self.config.max_fresh_nominals {
            return None;
        }
        self.fresh_used += 1;
        let n = self.gen.fresh(&self.avoid);
        self.avoid.insert(n.clone());
        Some(n)
    }

    fn search(&mut self, branch: &BranchState) -> BranchResult {
        if self.steps >= self.config.max_steps {
            return BranchResult::Exhausted(STEP_BUDGET.to_string());
        }
        // close by (V): once the elementary part is valid, any way of
        // decomposing the rest keeps it valid, so the branch always closes
        if part_valid(&branch.sequent) {
            return match self.autocomplete(branch.sequent.clone()) {
                Ok(tree) => BranchResult::Closed(tree),
                Err(reason) => BranchResult::Exhausted(reason),
            };
        }
        let action = match self.pick_action(branch) {
            Some(a) => a,
            None => {
                let mut saturated = branch.clone();
                saturated.saturated = true;
                let model = extract_countermodel(&saturated).expect("saturated by construction");
                return BranchResult::Open {
                    model,
                    branch: self.trace.clone(),
                };
            }
        };
        let (chain, children) = match self.apply_action(branch, &action) {
            Ok(x) => x,
            Err(reason) => return BranchResult::Exhausted(reason),
        };
        self.steps += chain.len();

        // intermediates of the chain lie on the branch too
        let pushed = chain.len() - 1;
        for step in &chain[1..] {
            self.trace.push(step.conclusion.clone());
        }
        let mut subproofs = Vec::with_capacity(children.len());
        for child in &children {
            self.trace.push(child.sequent.clone());
            match self.search(child) {
                BranchResult::Closed(tree) => {
                    self.trace.pop();
                    subproofs.push(tree);
                }
                other => return other, // open or exhausted: stop everything
            }
        }
        for _ in 0..pushed {
            self.trace.pop();
        }

        let mut premises = subproofs;
        for step in chain.into_iter().rev() {
            premises = vec![ProofTree {
                conclusion: step.conclusion,
                rule: step.rule,
                principal: Some(step.principal),
                witness: step.witness,
                premises,
            }];
        }
        BranchResult::Closed(premises.pop().expect("the chain is never empty"))
    }

    fn pick_action(&self, branch: &BranchState) -> Option<Action> {
        for class in &self.config.priority {
            let found = match class {
                RuleClass::InvertibleSingle => find_member(branch, |side, f| {
                    matches!(
                        (side, f),
                        (
                            Side::Left,
                            Formula::Neg(_) | Formula::And(..) | Formula::At(..)
                        ) | (
                            Side::Right,
                            Formula::Neg(_) | Formula::Or(..) | Formula::Imp(..) | Formula::At(..)
                        )
                    )
                })
                .map(|pos| Action {
                    kind: ActionKind::Single,
                    pos,
                    witness: None,
                }),
                RuleClass::InvertibleBranching => find_member(branch, |side, f| {
                    matches!(
                        (side, f),
                        (Side::Left, Formula::Or(..) | Formula::Imp(..))
                            | (Side::Right, Formula::And(..))
                    )
                })
                .map(|pos| Action {
                    kind: ActionKind::Branching,
                    pos,
                    witness: None,
                }),
                RuleClass::Instantiation => self.find_instantiation(branch),
                RuleClass::Eigenvariable => find_member(branch, |side, f| {
                    matches!(
                        (side, f),
                        (Side::Right, Formula::Box(_)) | (Side::Left, Formula::Dia(_))
                    )
                })
                .map(|pos| Action {
                    kind: ActionKind::Eigen,
                    pos,
                    witness: None,
                }),
            };
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// The first unused (left box or right diamond, branch nominal) pair:
    /// the fair enumeration that revisits every such formula whenever a new
    /// nominal appears.
    fn find_instantiation(&self, branch: &BranchState) -> Option<Action> {
        let nominals = branch.sequent.nominals();
        for (pos, m) in branch.sequent.members() {
            let applicable = matches!(
                (pos.side, &*m.formula),
                (Side::Left, Formula::Box(_)) | (Side::Right, Formula::Dia(_))
            );
            if !applicable {
                continue;
            }
            for n in &nominals {
                if !branch.used_instances.contains(&(m.clone(), n.clone())) {
                    return Some(Action {
                        kind: ActionKind::Instantiate,
                        pos,
                        witness: Some(n.clone()),
                    });
                }
            }
        }
        None
    }

    #[allow(clippy::type_complexity)]
    fn apply_action(
        &mut self,
        branch: &BranchState,
        action: &Action,
    ) -> Result<(Vec<ProofStep>, Vec<BranchState>), String> {
        let s = &branch.sequent;
        let member = s
            .member(action.pos)
            .expect("action positions are live")
            .clone();
        let child = |sequent: Sequent| BranchState {
            sequent,
            anchored: branch.anchored.clone(),
            used_instances: branch.used_instances.clone(),
            saturated: false,
        };
        let mut chain: Vec<ProofStep> = Vec::new();

        match action.kind {
            ActionKind::Single => {
                use Formula::{And, At, Imp, Neg, Or};
                match (action.pos.side, &*member.formula) {
                    (Side::Left, Neg(_)) => {
                        let p = chain_step(&mut chain, s.clone(), RuleId::LNeg, action.pos, None);
                        Ok((chain, vec![child(p)]))
                    }
                    (Side::Right, Neg(_)) => {
                        let p = chain_step(&mut chain, s.clone(), RuleId::RNeg, action.pos, None);
                        Ok((chain, vec![child(p)]))
                    }
                    (Side::Left, At(..)) => {
                        let p = chain_step(&mut chain, s.clone(), RuleId::LAt, action.pos, None);
                        Ok((chain, vec![child(p)]))
                    }
                    (Side::Right, At(..)) => {
                        let p = chain_step(&mut chain, s.clone(), RuleId::RAt, action.pos, None);
                        Ok((chain, vec![child(p)]))
                    }
                    // duplicate, then take both components of the pair
                    (Side::Left, And(..)) => {
                        let p1 = chain_step(&mut chain, s.clone(), RuleId::CL, action.pos, None);
                        let p2 = chain_step(&mut chain, p1, RuleId::LAnd1, action.pos, None);
                        let dup = FormulaPos::left(last_equal(&p2.left, &member));
                        let p3 = chain_step(&mut chain, p2, RuleId::LAnd2, dup, None);
                        Ok((chain, vec![child(p3)]))
                    }
                    (Side::Right, Or(..)) => {
                        let p1 = chain_step(&mut chain, s.clone(), RuleId::CR, action.pos, None);
                        let p2 = chain_step(&mut chain, p1, RuleId::ROr1, action.pos, None);
                        let dup = FormulaPos::right(last_equal(&p2.right, &member));
                        let p3 = chain_step(&mut chain, p2, RuleId::ROr2, dup, None);
                        Ok((chain, vec![child(p3)]))
                    }
                    (Side::Right, Imp(..)) => {
                        let p1 = chain_step(&mut chain, s.clone(), RuleId::CR, action.pos, None);
                        let p2 = chain_step(&mut chain, p1, RuleId::RImp1, action.pos, None);
                        let dup = FormulaPos::right(last_equal(&p2.right, &member));
                        let p3 = chain_step(&mut chain, p2, RuleId::RImp2, dup, None);
                        Ok((chain, vec![child(p3)]))
                    }
                    _ => unreachable!("single actions match the scan"),
                }
            }
            ActionKind::Branching => {
                let rule = match (action.pos.side, &*member.formula) {
                    (Side::Left, Formula::Or(..)) => RuleId::LOr,
                    (Side::Left, Formula::Imp(..)) => RuleId::LImp,
                    (Side::Right, Formula::And(..)) => RuleId::RAnd,
                    _ => unreachable!("branching actions match the scan"),
                };
                let premises = apply_rule(s, rule, Some(action.pos), None)
                    .expect("search actions apply cleanly");
                chain.push(ProofStep {
                    conclusion: s.clone(),
                    rule,
                    principal: action.pos,
                    witness: None,
                });
                Ok((chain, premises.into_iter().map(child).collect()))
            }
            ActionKind::Instantiate => {
                let n = action
                    .witness
                    .clone()
                    .expect("instantiation carries a nominal");
                let (contraction, rule, side) = match action.pos.side {
                    Side::Left => (RuleId::CL, RuleId::LBox, Side::Left),
                    Side::Right => (RuleId::CR, RuleId::RDia, Side::Right),
                };
                let p1 = chain_step(&mut chain, s.clone(), contraction, action.pos, None);
                // the duplicated copy sits at the end of its side
                let dup = match side {
                    Side::Left => FormulaPos::left(p1.left.len() - 1),
                    Side::Right => FormulaPos::right(p1.right.len() - 1),
                };
                let p2 = chain_step(&mut chain, p1, rule, dup, Some(&n));
                let mut state = child(p2);
                state.used_instances.insert((member, n));
                Ok((chain, vec![state]))
            }
            ActionKind::Eigen => {
                let w = self.mint().ok_or_else(|| FRESH_BUDGET.to_string())?;
                let rule = match action.pos.side {
                    Side::Right => RuleId::RBox,
                    Side::Left => RuleId::LDia,
                };
                let p = chain_step(&mut chain, s.clone(), rule, action.pos, Some(&w));
                Ok((chain, vec![child(p)]))
            }
        }
    }

    /// Closes a branch whose elementary part is already valid: remaining
    /// formulas are decomposed one at a time with arbitrary choices (no
    /// duplication), which only ever grows the elementary part, so every
    /// leaf ends valid and elementary.
    fn autocomplete(&mut self, s: Sequent) -> Result<ProofTree, String> {
        self.steps += 1;
        if self.steps > self.config.max_steps {
            return Err(STEP_BUDGET.to_string());
        }
        let target = s
            .members()
            .find(|(_, m)| !m.is_elementary())
            .map(|(pos, m)| (pos, m.clone()));
        let (pos, member) = match target {
            None => {
                debug_assert!(part_valid(&s), "autocomplete leaves must be valid");
                return Ok(ProofTree {
                    conclusion: s,
                    rule: RuleId::V,
                    principal: None,
                    witness: None,
                    premises: vec![],
                });
            }
            Some(t) => t,
        };
        use Formula::{And, At, Box as BoxF, Dia, Imp, Neg, Or};
        let label = member.label.clone().expect("search sequents are labelled");
        let (rule, witness) = match (pos.side, &*member.formula) {
            (Side::Left, Neg(_)) => (RuleId::LNeg, None),
            (Side::Left, And(..)) => (RuleId::LAnd1, None),
            (Side::Left, Or(..)) => (RuleId::LOr, None),
            (Side::Left, Imp(..)) => (RuleId::LImp, None),
            (Side::Left, At(..)) => (RuleId::LAt, None),
            (Side::Left, BoxF(_)) => (RuleId::LBox, Some(label)),
            (Side::Left, Dia(_)) => (RuleId::LDia, Some(self.mint().ok_or(FRESH_BUDGET)?)),
            (Side::Right, Neg(_)) => (RuleId::RNeg, None),
            (Side::Right, And(..)) => (RuleId::RAnd, None),
            (Side::Right, Or(..)) => (RuleId::ROr1, None),
            (Side::Right, Imp(..)) => (RuleId::RImp1, None),
            (Side::Right, At(..)) => (RuleId::RAt, None),
            (Side::Right, BoxF(_)) => (RuleId::RBox, Some(self.mint().ok_or(FRESH_BUDGET)?)),
            (Side::Right, Dia(_)) => (RuleId::RDia, Some(label)),
            _ => unreachable!("non-elementary members only"),
        };
        let premises = apply_rule(&s, rule, Some(pos), witness.as_ref())
            .expect("autocompletion actions apply cleanly");
        let mut subs = Vec::with_capacity(premises.len());
        for p in premises {
            subs.push(self.autocomplete(p)?);
        }
        Ok(ProofTree {
            conclusion: s,
            rule,
            principal: Some(pos),
            witness,
            premises: subs,
        })
    }
}

fn find_member(branch: &BranchState, want: impl Fn(Side, &Formula) -> bool) -> Option<FormulaPos> {
    branch
        .sequent
        .members()
        .find(|(pos, m)| want(pos.side, &m.formula))
        .map(|(pos, _)| pos)
}

fn last_equal(side: &[LabeledFormula], m: &LabeledFormula) -> usize {
    side.iter()
        .rposition(|x| x == m)
        .expect("the duplicated member is present")
}

fn chain_step(
    chain: &mut Vec<ProofStep>,
    current: Sequent,
    rule: RuleId,
    pos: FormulaPos,
    witness: Option<&Nominal>,
) -> Sequent {
    let premise = apply_rule(&current, rule, Some(pos), witness)
        .expect("search actions apply cleanly")
        .pop()
        .expect("chain rules have one premise");
    chain.push(ProofStep {
        conclusion: current,
        rule,
        principal: pos,
        witness: witness.cloned(),
    });
    premise
}
