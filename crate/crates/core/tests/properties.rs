//! Cross-module properties: the prover against the model-theoretic oracle,
//! countermodels against the evaluator, and the named-model facts about the
//! modal operators.

mod common;

use rand::rngs::StdRng;
use rand::SeedableRng;

use common::{random_formula, sig_ij, sig_pq};
use hybrid_games::calculus::{check_proof, prove, ProofTree, SearchConfig, SearchOutcome, Side};
use hybrid_games::game::StrategyTree;
use hybrid_games::kripke::{enumerate_models, Model, DEFAULT_MODEL_CAP};
use hybrid_games::syntax::Formula;

/// The core values are immutable and safe to share across threads.
#[test]
fn values_are_send_and_sync() {
    fn ok<T: Send + Sync>() {}
    ok::<Formula>();
    ok::<Model>();
    ok::<StrategyTree>();
    ok::<ProofTree>();
    ok::<SearchOutcome>();
}

/// Every proof the search emits passes the independent checker, and no
/// proved formula has a small countermodel.
#[test]
fn emitted_proofs_check_and_are_not_refutable() {
    let mut rng = StdRng::seed_from_u64(41);
    let (noms, props) = (sig_ij(), sig_pq());
    let config = SearchConfig::default();
    let mut proofs = 0;
    for _ in 0..300 {
        let f = random_formula(&mut rng, 4, &noms, &props);
        if let Ok(SearchOutcome::Proof(tree)) = prove(f.clone(), &config) {
            proofs += 1;
            let check = check_proof(&tree);
            assert!(check.ok, "proof of {f} rejected: {:?}", check.defect);
            let noms_of_f = f.nominals();
            let mut padded = noms_of_f.clone();
            let mut gen = hybrid_games::syntax::NominalGen::new("k");
            while padded.len() < 2 {
                let fresh = gen.fresh(&padded);
                padded.insert(fresh);
            }
            for m in enumerate_models(2, &f.props(), &padded, DEFAULT_MODEL_CAP).unwrap() {
                assert_eq!(m.eval_global(&f), Ok(true), "proved {f} fails in {m}");
            }
        }
    }
    assert!(proofs >= 10, "population produced only {proofs} proofs");
}

/// Along an open branch, every labelled left formula holds at its label in
/// the extracted model and every labelled right formula fails; the goal
/// itself fails globally.
#[test]
fn countermodels_falsify_their_whole_branch() {
    let mut rng = StdRng::seed_from_u64(43);
    let (noms, props) = (sig_ij(), sig_pq());
    let config = SearchConfig::default();
    let mut countermodels = 0;
    for _ in 0..200 {
        let f = random_formula(&mut rng, 4, &noms, &props);
        if let Ok(SearchOutcome::Countermodel { model, branch }) = prove(f.clone(), &config) {
            countermodels += 1;
            assert_eq!(model.eval_global(&f), Ok(false), "goal {f} not falsified");
            let last = branch.last().unwrap();
            for (pos, m) in last.members() {
                // the saturated sequent is fully labelled by model worlds
                let w = model.world_of(m.label.as_ref().unwrap()).unwrap();
                let truth = model.eval(w, &m.formula).unwrap();
                assert_eq!(
                    truth,
                    pos.side == Side::Left,
                    "final member {m} of {last} (goal {f})"
                );
            }
            for sequent in &branch {
                for (pos, m) in sequent.members() {
                    // labels consumed by the @ rules have no world of their
                    // own; their claims are locus-independent and live on in
                    // the relabelled members checked above
                    let Some(label) = &m.label else { continue };
                    let Some(w) = model.world_of(label) else {
                        continue;
                    };
                    let truth = model.eval(w, &m.formula).unwrap();
                    assert_eq!(
                        truth,
                        pos.side == Side::Left,
                        "branch member {m} of {sequent} (goal {f})"
                    );
                }
            }
        }
    }
    assert!(countermodels >= 50, "only {countermodels} countermodels");
}

/// In named models, global truth is truth at every named world, and the
/// modal operators reduce to accessibility atoms over nominals.
#[test]
fn named_model_facts() {
    let mut rng = StdRng::seed_from_u64(47);
    let (noms, props) = (sig_ij(), sig_pq());
    let models: Vec<Model> = enumerate_models(
        2,
        &props.iter().cloned().collect(),
        &noms.iter().cloned().collect(),
        DEFAULT_MODEL_CAP,
    )
    .unwrap()
    .collect();
    for _ in 0..30 {
        let f = random_formula(&mut rng, 3, &noms, &props);
        for m in models.iter().step_by(3) {
            // global truth = truth at g(i) for every assigned nominal
            let via_names = m.assignment().all(|(_, w)| m.eval(w, &f).unwrap());
            assert_eq!(m.eval_global(&f).unwrap(), via_names);

            // box and diamond through accessibility atoms over names
            for (i, gi) in m.assignment() {
                let boxed = m.eval(gi, &Formula::bx(f.clone())).unwrap();
                let reduct = m.assignment().all(|(j, gj)| {
                    m.eval(
                        gj,
                        &Formula::or(Formula::neg(Formula::Rel(i.clone(), j.clone())), f.clone()),
                    )
                    .unwrap()
                });
                assert_eq!(boxed, reduct, "box reduction for {f}");

                let dia = m.eval(gi, &Formula::dia(f.clone())).unwrap();
                let reduct = m.assignment().any(|(j, gj)| {
                    m.eval(
                        gj,
                        &Formula::and(Formula::Rel(i.clone(), j.clone()), f.clone()),
                    )
                    .unwrap()
                });
                assert_eq!(dia, reduct, "diamond reduction for {f}");
            }
        }
    }
}

/// The search never claims a proof and a close-range countermodel for the
/// same goal family: spot-check determinism and stability of outcomes.
#[test]
fn prove_is_deterministic() {
    let mut rng = StdRng::seed_from_u64(53);
    let (noms, props) = (sig_ij(), sig_pq());
    let config = SearchConfig::default();
    for _ in 0..40 {
        let f = random_formula(&mut rng, 4, &noms, &props);
        let a = prove(f.clone(), &config).unwrap();
        let b = prove(f.clone(), &config).unwrap();
        match (&a, &b) {
            (SearchOutcome::Proof(x), SearchOutcome::Proof(y)) => assert_eq!(x, y),
            (
                SearchOutcome::Countermodel { model: x, .. },
                SearchOutcome::Countermodel { model: y, .. },
            ) => assert_eq!(x, y),
            (SearchOutcome::Unknown(_), SearchOutcome::Unknown(_)) => {}
            _ => panic!("outcomes differ for {f}"),
        }
    }
}
