//! Bounded enumeration of named models, and the brute-force validity oracle
//! built on top of it.
//!
//! Every named model over a fixed nominal and proposition signature with at
//! most `max_worlds` worlds is produced exactly once: for each world count
//! `k` up to `min(max_worlds, #nominals)`, every surjective assignment onto
//! the canonical worlds `w1..wk`, every accessibility relation, and every
//! valuation. The total count is
//!
//! ```text
//! sum over k of  surj(#nominals, k) * 2^(k*k) * 2^(k * #props)
//! ```
//!
//! which the resource guard checks against a cap before any model is built.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{Model, World};
use crate::syntax::{Formula, Nominal, NominalGen, PropVar};

/// Default ceiling on how many models an enumeration may yield.
pub const DEFAULT_MODEL_CAP: u64 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("invalid enumeration bounds: {0}")]
    InvalidBounds(String),
    #[error("enumeration would yield {count} models, above the cap of {cap}")]
    TooManyModels { count: u128, cap: u64 },
    #[error("model count overflows a u128")]
    CountOverflow,
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)?;
        acc /= i + 1;
    }
    Some(acc)
}

/// Number of surjective functions from an `n`-element set onto a `k`-element
/// set, by inclusion-exclusion.
fn surjections(n: usize, k: usize) -> Option<u128> {
    let mut total: i128 = 0;
    for j in 0..=k {
        let c = binomial(k as u128, j as u128)?;
        let pow = ((k - j) as u128).checked_pow(n as u32)?;
        let term = i128::try_from(c.checked_mul(pow)?).ok()?;
        if j % 2 == 0 {
            total = total.checked_add(term)?;
        } else {
            total = total.checked_sub(term)?;
        }
    }
    u128::try_from(total).ok()
}

/// Closed-form count of the models [`enumerate_models`] yields.
pub fn count_named_models(
    max_worlds: usize,
    n_props: usize,
    n_noms: usize,
) -> Result<u128, EnumError> {
    let mut total: u128 = 0;
    for k in 1..=max_worlds.min(n_noms) {
        let surj = surjections(n_noms, k).ok_or(EnumError::CountOverflow)?;
        let rels = (k * k) as u32;
        let vals = (k * n_props) as u32;
        if rels >= 128 || vals >= 128 {
            return Err(EnumError::CountOverflow);
        }
        let per_structure = (1u128 << rels)
            .checked_mul(1u128 << vals)
            .ok_or(EnumError::CountOverflow)?;
        total = surj
            .checked_mul(per_structure)
            .and_then(|x| total.checked_add(x))
            .ok_or(EnumError::CountOverflow)?;
    }
    Ok(total)
}

/// Deterministic stream over all named models with at most `max_worlds`
/// worlds, signature `props` and assignment domain exactly `noms`.
///
/// Order: ascending world count, then assignments lexicographically (nominals
/// sorted), then accessibility relations, then valuations. Each yielded model
/// is independently owned. Errors if `noms` is empty, `max_worlds` is zero,
/// or the total count exceeds `cap`.
pub fn enumerate_models(
    max_worlds: usize,
    props: &BTreeSet<PropVar>,
    noms: &BTreeSet<Nominal>,
    cap: u64,
) -> Result<ModelEnumeration, EnumError> {
    if noms.is_empty() {
        return Err(EnumError::InvalidBounds(
            "at least one nominal is required (assignments of named models are surjective)"
                .to_string(),
        ));
    }
    if max_worlds == 0 {
        return Err(EnumError::InvalidBounds(
            "at least one world is required".to_string(),
        ));
    }
    let count = count_named_models(max_worlds, props.len(), noms.len())?;
    if count > cap as u128 {
        return Err(EnumError::TooManyModels { count, cap });
    }
    Ok(ModelEnumeration {
        props: props.iter().cloned().collect(),
        noms: noms.iter().cloned().collect(),
        max_worlds,
        k: 0,
        assignments: Vec::new(),
        assignment_at: 0,
        rel_mask: 0,
        rel_end: 0,
        val_mask: 0,
        val_end: 0,
        done: false,
    })
}

/// Iterator state for [`enumerate_models`]; an odometer over
/// (world count, assignment, relation mask, valuation mask).
#[derive(Debug)]
pub struct ModelEnumeration {
    props: Vec<PropVar>,
    noms: Vec<Nominal>,
    max_worlds: usize,
    k: usize,
    assignments: Vec<Vec<usize>>,
    assignment_at: usize,
    rel_mask: u128,
    rel_end: u128,
    val_mask: u128,
    val_end: u128,
    done: bool,
}

impl ModelEnumeration {
    /// All surjective functions noms -> [k], lexicographic by digit vector.
    fn surjective_assignments(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut digits = vec![0usize; n];
        loop {
            let hit: BTreeSet<usize> = digits.iter().copied().collect();
            if hit.len() == k {
                out.push(digits.clone());
            }
            // increment from the rightmost digit
            let mut pos = n;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < k {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }

    fn advance_world_count(&mut self) -> bool {
        loop {
            self.k += 1;
            if self.k > self.max_worlds.min(self.noms.len()) {
                return false;
            }
            self.assignments = Self::surjective_assignments(self.noms.len(), self.k);
            if self.assignments.is_empty() {
                continue;
            }
            self.assignment_at = 0;
            self.rel_mask = 0;
            self.rel_end = 1u128 << (self.k * self.k);
            self.val_mask = 0;
            self.val_end = 1u128 << (self.k * self.props.len());
            return true;
        }
    }

    fn build_current(&self) -> Model {
        let k = self.k;
        let world_names = (1..=k).map(|i| format!("w{i}")).collect();
        let mut edges = Vec::new();
        for from in 0..k {
            for to in 0..k {
                if self.rel_mask >> (from * k + to) & 1 == 1 {
                    edges.push((from, to));
                }
            }
        }
        let mut valuation = Vec::new();
        for (pi, p) in self.props.iter().enumerate() {
            let worlds: Vec<usize> = (0..k)
                .filter(|w| self.val_mask >> (pi * k + w) & 1 == 1)
                .collect();
            valuation.push((p.clone(), worlds));
        }
        let digits = &self.assignments[self.assignment_at];
        let assignment = self
            .noms
            .iter()
            .cloned()
            .zip(digits.iter().copied())
            .collect();
        Model::new(world_names, edges, valuation, assignment)
            .expect("enumerated models are well formed")
    }
}

impl Iterator for ModelEnumeration {
    type Item = Model;

    fn next(&mut self) -> Option<Model> {
        if self.done {
            return None;
        }
        if self.k == 0 && !self.advance_world_count() {
            self.done = true;
            return None;
        }
        let model = self.build_current();
        // odometer: valuation fastest, then relation, then assignment
        self.val_mask += 1;
        if self.val_mask == self.val_end {
            self.val_mask = 0;
            self.rel_mask += 1;
            if self.rel_mask == self.rel_end {
                self.rel_mask = 0;
                self.assignment_at += 1;
                if self.assignment_at == self.assignments.len() && !self.advance_world_count() {
                    self.done = true;
                }
            }
        }
        Some(model)
    }
}

/// Bounds for [`oracle_valid`].
#[derive(Debug, Clone)]
pub struct OracleBounds {
    /// Maximum number of worlds to try. The nominal signature is padded with
    /// fresh nominals up to this size so that larger named models exist even
    /// for formulas mentioning few nominals.
    pub max_worlds: usize,
    pub cap: u64,
}

impl OracleBounds {
    pub fn worlds(max_worlds: usize) -> Self {
        OracleBounds {
            max_worlds,
            cap: DEFAULT_MODEL_CAP,
        }
    }
}

impl Default for OracleBounds {
    fn default() -> Self {
        OracleBounds::worlds(3)
    }
}

#[derive(Debug, Clone)]
pub enum OracleVerdict {
    /// No named model within the bounds falsifies the formula.
    ValidUpToBounds,
    /// The first enumerated named model falsifying the formula, together
    /// with a world where it fails.
    Counterexample { model: Model, world: World },
}

impl OracleVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, OracleVerdict::ValidUpToBounds)
    }
}

/// Brute-force check of validity over named models at desk scale: enumerates
/// every named model within the bounds and evaluates `f` everywhere.
pub fn oracle_valid(f: &Formula, bounds: &OracleBounds) -> Result<OracleVerdict, EnumError> {
    let props = f.props();
    let mut noms = f.nominals();
    let mut gen = NominalGen::new("k");
    while noms.len() < bounds.max_worlds.max(1) {
        let fresh = gen.fresh(&noms);
        noms.insert(fresh);
    }
    for model in enumerate_models(bounds.max_worlds, &props, &noms, bounds.cap)? {
        let world = model
            .first_failing_world(f)
            .expect("oracle models assign every nominal of the formula");
        if let Some(world) = world {
            return Ok(OracleVerdict::Counterexample { model, world });
        }
    }
    Ok(OracleVerdict::ValidUpToBounds)
}
