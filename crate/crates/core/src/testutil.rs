//! Shared helpers for unit tests: seeded random formulas over a small
//! signature.

use rand::rngs::StdRng;
use rand::Rng;

use crate::syntax::{Formula, Nominal, PropVar};

/// A random formula with degree at most `budget` over the given signature.
pub(crate) fn random_formula(
    rng: &mut StdRng,
    budget: usize,
    noms: &[Nominal],
    props: &[PropVar],
) -> Formula {
    let elementary = |rng: &mut StdRng| {
        // favour props a bit; skip nominal atoms if the signature has none
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
