//! The base rule: deciding validity of elementary sequents.
//!
//! An elementary sequent is valid iff no named model makes every left member
//! true at its label and every right member false at its label. Left
//! equalities `i:j` force `g(i) = g(j)`; after closing them under
//! union-find, the sequent is valid exactly when some right member is forced
//! by the left facts. Otherwise the quotient of the nominals by the
//! equivalence, furnished with exactly the left facts, is itself a
//! countermodel.

use thiserror::Error;

use super::partition::NominalPartition;
use super::{LabeledFormula, Sequent, Side};
use crate::kripke::Model;
use crate::syntax::{Formula, Nominal, PropVar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElementaryError {
    #[error("not an elementary sequent: {0} is not elementary")]
    NotElementary(String),
    #[error("elementary sequents must be fully labelled, found bare {0}")]
    Unlabeled(String),
}

/// The elementary facts of (part of) a branch: the left-hand equalities as
/// a partition, plus the left proposition and accessibility facts.
pub(crate) struct ElementaryFacts {
    pub partition: NominalPartition,
    /// `(i, p)` for each left member `i:p`.
    pub props: Vec<(Nominal, PropVar)>,
    /// `(i, j)` for each left member `k:R(i,j)`; the locus `k` is
    /// irrelevant because accessibility atoms are world-independent.
    pub rels: Vec<(Nominal, Nominal)>,
}

impl ElementaryFacts {
    /// Gathers facts from the elementary left members, registering every
    /// nominal that occurs in any elementary member of the sequent.
    pub fn gather(s: &Sequent) -> ElementaryFacts {
        let mut facts = ElementaryFacts {
            partition: NominalPartition::new(),
            props: Vec::new(),
            rels: Vec::new(),
        };
        for (pos, m) in s.members() {
            if !m.is_elementary() {
                continue;
            }
            let label = match &m.label {
                Some(n) => n,
                None => continue,
            };
            facts.partition.add(label);
            match &*m.formula {
                Formula::Nom(j) => {
                    facts.partition.add(j);
                    if pos.side == Side::Left {
                        facts.partition.union(label, j);
                    }
                }
                Formula::Rel(i, j) => {
                    facts.partition.add(i);
                    facts.partition.add(j);
                    if pos.side == Side::Left {
                        facts.rels.push((i.clone(), j.clone()));
                    }
                }
                Formula::Prop(p) => {
                    if pos.side == Side::Left {
                        facts.props.push((label.clone(), p.clone()));
                    }
                }
                _ => unreachable!("elementary members only"),
            }
        }
        facts
    }

    /// Is the right member forced to be true by the left facts, up to the
    /// equivalence?
    pub fn forces(&mut self, m: &LabeledFormula) -> bool {
        let label = match &m.label {
            Some(n) => n,
            None => return false,
        };
        match &*m.formula {
            Formula::Prop(p) => {
                let props = std::mem::take(&mut self.props);
                let hit = props
                    .iter()
                    .any(|(i, q)| q == p && self.partition.same(i, label));
                self.props = props;
                hit
            }
            Formula::Nom(j) => self.partition.same(label, j),
            Formula::Rel(i, j) => {
                let rels = std::mem::take(&mut self.rels);
                let hit = rels
                    .iter()
                    .any(|(a, b)| self.partition.same(a, i) && self.partition.same(b, j));
                self.rels = rels;
                hit
            }
            _ => false,
        }
    }

    /// The quotient model: worlds are the equivalence classes of the
    /// registered nominals, accessibility and valuation come from the left
    /// facts, and every nominal names its class. Named by construction.
    pub fn quotient_model(&mut self) -> Model {
        let classes = self.partition.classes();
        assert!(!classes.is_empty(), "a quotient model needs nominals");
        let world_names: Vec<String> = classes.iter().map(|c| c[0].as_str().to_string()).collect();
        let world_of = |partition: &mut NominalPartition, n: &Nominal| -> usize {
            let id = partition.class_id(n);
            classes
                .iter()
                .position(|c| partition.class_id(&c[0]) == id)
                .expect("every registered nominal lies in some class")
        };
        let mut edges = Vec::new();
        for (i, j) in &self.rels.clone() {
            edges.push((
                world_of(&mut self.partition, i),
                world_of(&mut self.partition, j),
            ));
        }
        let mut valuation: Vec<(PropVar, Vec<usize>)> = Vec::new();
        for (i, p) in &self.props.clone() {
            let w = world_of(&mut self.partition, i);
            match valuation.iter_mut().find(|(q, _)| q == p) {
                Some((_, worlds)) => worlds.push(w),
                None => valuation.push((p.clone(), vec![w])),
            }
        }
        let mut assignment = Vec::new();
        for class in &classes {
            for n in class {
                assignment.push((n.clone(), world_of(&mut self.partition, n)));
            }
        }
        Model::new(world_names, edges, valuation, assignment)
            .expect("quotient models are well formed")
    }
}

fn require_elementary(s: &Sequent) -> Result<(), ElementaryError> {
    for (_, m) in s.members() {
        if !m.is_elementary() {
            return Err(ElementaryError::NotElementary(m.to_string()));
        }
        if m.label.is_none() {
            return Err(ElementaryError::Unlabeled(m.to_string()));
        }
    }
    Ok(())
}

/// Decides the `(V)` side condition: is the elementary sequent valid over
/// named models? Errors unless every member is elementary and labelled.
pub fn elementary_valid(s: &Sequent) -> Result<bool, ElementaryError> {
    require_elementary(s)?;
    Ok(part_valid(s))
}

/// Like [`elementary_valid`] but returning the quotient countermodel when
/// the sequent is not valid (`None` means valid).
pub fn elementary_countermodel(s: &Sequent) -> Result<Option<Model>, ElementaryError> {
    require_elementary(s)?;
    let mut facts = ElementaryFacts::gather(s);
    if s.right.iter().any(|m| facts.forces(m)) {
        return Ok(None);
    }
    Ok(Some(facts.quotient_model()))
}

/// Validity of just the elementary part of a sequent: the closure test the
/// search runs at every node. Monotone under adding members on either side,
/// so a branch that passes it can always be completed to a proof.
pub(crate) fn part_valid(s: &Sequent) -> bool {
    let mut facts = ElementaryFacts::gather(s);
    s.right
        .iter()
        .filter(|m| m.is_elementary())
        .any(|m| facts.forces(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::parse_sequent;
    use crate::kripke::{enumerate_models, DEFAULT_MODEL_CAP};
    use crate::syntax::Formula;

    /// Brute-force oracle: search for a named model with at most
    /// `max_worlds` worlds satisfying every left member at its label and
    /// falsifying every right member. Independent of the union-find route.
    pub(crate) fn brute_force_countermodel(s: &Sequent, max_worlds: usize) -> Option<Model> {
        let mut props = std::collections::BTreeSet::new();
        for (_, m) in s.members() {
            props.extend(m.formula.props());
        }
        let noms = s.nominals();
        for m in enumerate_models(max_worlds, &props, &noms, DEFAULT_MODEL_CAP).unwrap() {
            let falsifies = s.members().all(|(pos, lf)| {
                let w = m.world_of(lf.label.as_ref().unwrap()).unwrap();
                let truth = m.eval(w, &lf.formula).unwrap();
                match pos.side {
                    Side::Left => truth,
                    Side::Right => !truth,
                }
            });
            if falsifies {
                return Some(m);
            }
        }
        None
    }

    #[test]
    fn identity_is_valid() {
        let s = parse_sequent("i:p |- i:p").unwrap();
        assert_eq!(elementary_valid(&s), Ok(true));
    }

    #[test]
    fn equality_transfers_facts() {
        let s = parse_sequent("i:j, i:p |- j:p").unwrap();
        assert_eq!(elementary_valid(&s), Ok(true));
        assert!(brute_force_countermodel(&s, 2).is_none());
    }

    #[test]
    fn distinct_labels_are_not_forced() {
        let s = parse_sequent("i:p |- j:p").unwrap();
        assert_eq!(elementary_valid(&s), Ok(false));
        let witness = elementary_countermodel(&s).unwrap().unwrap();
        assert_eq!(witness.world_count(), 2);
        let gi = witness.world_of(&Nominal::new("i")).unwrap();
        let gj = witness.world_of(&Nominal::new("j")).unwrap();
        assert_ne!(gi, gj);
        assert!(witness.proposition_true_at(&PropVar::new("p"), gi));
        assert!(!witness.proposition_true_at(&PropVar::new("p"), gj));
        assert!(brute_force_countermodel(&s, 2).is_some());
    }

    #[test]
    fn reflexive_nominal_goal_is_valid() {
        let s = parse_sequent("|- i:i").unwrap();
        assert_eq!(elementary_valid(&s), Ok(true));
    }

    #[test]
    fn rel_facts_match_up_to_equivalence() {
        let s = parse_sequent("i:j, k:R(i,i) |- k:R(j,j)").unwrap();
        assert_eq!(elementary_valid(&s), Ok(true));
        let s = parse_sequent("k:R(i,i) |- k:R(j,j)").unwrap();
        assert_eq!(elementary_valid(&s), Ok(false));
    }

    #[test]
    fn non_elementary_input_is_rejected() {
        let s = parse_sequent("i:[]p |- i:p").unwrap();
        assert!(matches!(
            elementary_valid(&s),
            Err(ElementaryError::NotElementary(_))
        ));
        let s = parse_sequent("|- p").unwrap();
        assert!(matches!(
            elementary_valid(&s),
            Err(ElementaryError::Unlabeled(_))
        ));
    }

    #[test]
    fn witness_model_satisfies_left_and_falsifies_right() {
        let s = parse_sequent("i:j, i:p, k:R(j,l) |- l:p, i:l").unwrap();
        let witness = elementary_countermodel(&s).unwrap().unwrap();
        for (pos, m) in s.members() {
            let w = witness.world_of(m.label.as_ref().unwrap()).unwrap();
            let truth = witness.eval(w, &m.formula).unwrap();
            assert_eq!(truth, pos.side == Side::Left, "member {m}");
        }
    }

    /// The witness respects the accumulated equivalence: equal nominals name
    /// equal worlds.
    #[test]
    fn witness_respects_equivalence() {
        let s = parse_sequent("i:j, j:k, i:p |- m:p").unwrap();
        let witness = elementary_countermodel(&s).unwrap().unwrap();
        let mut facts = ElementaryFacts::gather(&s);
        for a in ["i", "j", "k", "m"] {
            for b in ["i", "j", "k", "m"] {
                let (na, nb) = (Nominal::new(a), Nominal::new(b));
                if facts.partition.same(&na, &nb) {
                    assert_eq!(witness.world_of(&na), witness.world_of(&nb));
                }
            }
        }
    }

    #[test]
    fn part_valid_ignores_non_elementary_members() {
        let s = parse_sequent("i:[]q, i:p |- i:p, i:<>q").unwrap();
        assert!(part_valid(&s));
        let s = parse_sequent("i:[]q, i:p |- j:p, i:<>q").unwrap();
        assert!(!part_valid(&s));
    }

    #[test]
    fn empty_right_side_is_falsifiable() {
        let s = parse_sequent("i:p |-").unwrap();
        assert_eq!(elementary_valid(&s), Ok(false));
        let m = elementary_countermodel(&s).unwrap().unwrap();
        assert_eq!(m.world_count(), 1);
        assert_eq!(m.eval_global(&Formula::prop("p")), Ok(true));
    }
}
