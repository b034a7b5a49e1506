//! Shared fixtures for the integration suites: the five-world example
//! model, a seeded bounded-degree formula generator, a brute-force sequent
//! oracle, and eigenvariable mutation of proof objects.

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;

use hybrid_games::calculus::{LabeledFormula, ProofTree, Sequent, Side};
use hybrid_games::kripke::{enumerate_models, Model, DEFAULT_MODEL_CAP};
use hybrid_games::syntax::{Formula, Nominal, PropVar};

/// Worlds w1..w5 with w1->w2, w1->w3, w3->w4, w3->w5, p at w2 and w4, and
/// j naming w2.
pub fn m1() -> Model {
    Model::new(
        ["w1", "w2", "w3", "w4", "w5"]
            .into_iter()
            .map(String::from)
            .collect(),
        vec![(0, 1), (0, 2), (2, 3), (2, 4)],
        vec![(PropVar::new("p"), vec![1, 3])],
        vec![(Nominal::new("j"), 1)],
    )
    .unwrap()
}

pub fn sig_ij() -> Vec<Nominal> {
    vec![Nominal::new("i"), Nominal::new("j")]
}

pub fn sig_pq() -> Vec<PropVar> {
    vec![PropVar::new("p"), PropVar::new("q")]
}

/// A random formula of degree at most `budget` over the given signature.
pub fn random_formula(
    rng: &mut StdRng,
    budget: usize,
    noms: &[Nominal],
    props: &[PropVar],
) -> Formula {
    let elementary = |rng: &mut StdRng| {
        if noms.is_empty() || rng.gen_ratio(2, 5) {
            Formula::Prop(props[rng.gen_range(0..props.len())].clone())
        } else if rng.gen_bool(0.5) {
            Formula::Nom(noms[rng.gen_range(0..noms.len())].clone())
        } else {
            Formula::Rel(
                noms[rng.gen_range(0..noms.len())].clone(),
                noms[rng.gen_range(0..noms.len())].clone(),
            )
        }
    };
    if budget == 0 || rng.gen_ratio(1, 6) {
        return elementary(rng);
    }
    let binary = |rng: &mut StdRng, ctor: fn(Formula, Formula) -> Formula| {
        let left = rng.gen_range(0..budget);
        let l = random_formula(rng, left, noms, props);
        let r = random_formula(rng, budget - 1 - left, noms, props);
        ctor(l, r)
    };
    match rng.gen_range(0..7) {
        0 => binary(rng, Formula::and),
        1 => binary(rng, Formula::or),
        2 => binary(rng, Formula::imp),
        3 => Formula::neg(random_formula(rng, budget - 1, noms, props)),
        4 if !noms.is_empty() => {
            let n = noms[rng.gen_range(0..noms.len())].clone();
            Formula::at(&n, random_formula(rng, budget - 1, noms, props))
        }
        4 | 5 => Formula::bx(random_formula(rng, budget - 1, noms, props)),
        _ => Formula::dia(random_formula(rng, budget - 1, noms, props)),
    }
}

/// Brute-force search for a named model (at most `max_worlds` worlds, over
/// the sequent's own signature) satisfying every left member at its label
/// and falsifying every right member. Entirely independent of the
/// union-find decision procedure.
pub fn brute_force_sequent_countermodel(s: &Sequent, max_worlds: usize) -> Option<Model> {
    let mut props = std::collections::BTreeSet::new();
    for (_, m) in s.members() {
        props.extend(m.formula.props());
    }
    let mut noms = s.nominals();
    if noms.is_empty() {
        // named models need at least one assigned nominal
        noms.insert(Nominal::new("i"));
    }
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

pub fn rename_in_formula(f: &Formula, from: &Nominal, to: &Nominal) -> Formula {
    let n = |x: &Nominal| if x == from { to.clone() } else { x.clone() };
    match f {
        Formula::Prop(p) => Formula::Prop(p.clone()),
        Formula::Nom(i) => Formula::Nom(n(i)),
        Formula::Rel(i, j) => Formula::Rel(n(i), n(j)),
        Formula::And(l, r) => Formula::and(
            rename_in_formula(l, from, to),
            rename_in_formula(r, from, to),
        ),
        Formula::Or(l, r) => Formula::or(
            rename_in_formula(l, from, to),
            rename_in_formula(r, from, to),
        ),
        Formula::Imp(l, r) => Formula::imp(
            rename_in_formula(l, from, to),
            rename_in_formula(r, from, to),
        ),
        Formula::Neg(x) => Formula::neg(rename_in_formula(x, from, to)),
        Formula::At(i, x) => Formula::At(n(i), std::sync::Arc::new(rename_in_formula(x, from, to))),
        Formula::Box(x) => Formula::bx(rename_in_formula(x, from, to)),
        Formula::Dia(x) => Formula::dia(rename_in_formula(x, from, to)),
    }
}

pub fn rename_in_sequent(s: &Sequent, from: &Nominal, to: &Nominal) -> Sequent {
    let member = |m: &LabeledFormula| LabeledFormula {
        label: m
            .label
            .as_ref()
            .map(|l| if l == from { to.clone() } else { l.clone() }),
        formula: std::sync::Arc::new(rename_in_formula(&m.formula, from, to)),
    };
    Sequent {
        left: s.left.iter().map(member).collect(),
        right: s.right.iter().map(member).collect(),
    }
}

fn rename_everywhere(t: &ProofTree, from: &Nominal, to: &Nominal) -> ProofTree {
    ProofTree {
        conclusion: rename_in_sequent(&t.conclusion, from, to),
        rule: t.rule,
        principal: t.principal,
        witness: t
            .witness
            .as_ref()
            .map(|w| if w == from { to.clone() } else { w.clone() }),
        premises: t
            .premises
            .iter()
            .map(|p| rename_everywhere(p, from, to))
            .collect(),
    }
}

/// Every single-node freshness mutation of a proof: at each eigenvariable
/// node, the witness is renamed to a nominal that does occur in the
/// conclusion, consistently through the subtree above it, so the resulting
/// object is wrong in exactly one way.
pub fn eigen_mutants(t: &ProofTree) -> Vec<ProofTree> {
    let mut out = Vec::new();
    if t.rule.has_eigenvariable() {
        if let Some(w) = &t.witness {
            for n in t.conclusion.nominals() {
                out.push(ProofTree {
                    conclusion: t.conclusion.clone(),
                    rule: t.rule,
                    principal: t.principal,
                    witness: Some(n.clone()),
                    premises: t
                        .premises
                        .iter()
                        .map(|p| rename_everywhere(p, w, &n))
                        .collect(),
                });
            }
        }
    }
    for (i, p) in t.premises.iter().enumerate() {
        for mutant in eigen_mutants(p) {
            let mut clone = t.clone();
            clone.premises[i] = mutant;
            out.push(clone);
        }
    }
    out
}
