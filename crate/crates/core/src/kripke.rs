//! Finite Kripke models with assignments, and the recursive truth evaluator.
//!
//! A model is a nonempty set of worlds, an accessibility relation, a
//! valuation for propositional variables and an assignment mapping nominals
//! to worlds. Assignments have finite domain: only the nominals a problem
//! actually mentions are ever assigned. A model is *named* when the
//! assignment is surjective, i.e. every world has a name.
//!
//! Models are immutable after construction and cheap to share. The JSON
//! persistence format is:
//!
//! ```json
//! {
//!   "worlds": ["w1", "w2"],
//!   "access": [["w1", "w2"]],
//!   "valuation": {"p": ["w2"]},
//!   "assignment": {"j": "w2"}
//! }
//! ```

mod enumerate;

pub use enumerate::{
    count_named_models, enumerate_models, oracle_valid, EnumError, ModelEnumeration, OracleBounds,
    OracleVerdict, DEFAULT_MODEL_CAP,
};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::syntax::{Formula, Nominal, PropVar};

/// Handle to a world of the model that produced it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct World(usize);

impl World {
    pub fn new(index: usize) -> Self {
        World(index)
    }

    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("a model needs at least one world")]
    NoWorlds,
    #[error("duplicate world name {0:?}")]
    DuplicateWorld(String),
    #[error("{context}: unknown world {world:?}")]
    UnknownWorld { world: String, context: String },
    #[error("{context}: world index {index} out of range (model has {count} worlds)")]
    IndexOutOfRange {
        index: usize,
        count: usize,
        context: String,
    },
    #[error("nominal {0} is assigned twice")]
    DuplicateAssignment(Nominal),
    #[error("invalid model JSON: {0}")]
    Json(String),
}

/// The nominal a formula mentions is outside the model assignment's domain.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown nominal {0}: not in the model assignment's domain")]
pub struct UnknownNominal(pub Nominal);

/// A finite Kripke model for hybrid modal logic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    world_names: Vec<String>,
    /// Sorted successor lists, indexed by world.
    succ: Vec<Vec<World>>,
    edges: BTreeSet<(usize, usize)>,
    valuation: BTreeMap<PropVar, BTreeSet<World>>,
    assignment: BTreeMap<Nominal, World>,
    named: bool,
}

impl Model {
    /// Validated constructor over world indices. Rejects empty or duplicate
    /// world lists and any out-of-range reference, reporting the first
    /// violation found.
    pub fn new(
        world_names: Vec<String>,
        edges: Vec<(usize, usize)>,
        valuation: Vec<(PropVar, Vec<usize>)>,
        assignment: Vec<(Nominal, usize)>,
    ) -> Result<Model, ModelError> {
        if world_names.is_empty() {
            return Err(ModelError::NoWorlds);
        }
        let count = world_names.len();
        let mut seen = BTreeSet::new();
        for name in &world_names {
            if !seen.insert(name.clone()) {
                return Err(ModelError::DuplicateWorld(name.clone()));
            }
        }
        let check = |index: usize, context: String| {
            if index < count {
                Ok(())
            } else {
                Err(ModelError::IndexOutOfRange {
                    index,
                    count,
                    context,
                })
            }
        };

        let mut edge_set = BTreeSet::new();
        let mut succ = vec![Vec::new(); count];
        for (from, to) in edges {
            check(from, "accessibility pair".to_string())?;
            check(to, "accessibility pair".to_string())?;
            if edge_set.insert((from, to)) {
                succ[from].push(World(to));
            }
        }
        for list in &mut succ {
            list.sort();
        }

        let mut val: BTreeMap<PropVar, BTreeSet<World>> = BTreeMap::new();
        for (p, worlds) in valuation {
            let entry = val.entry(p.clone()).or_default();
            for w in worlds {
                check(w, format!("valuation of {p}"))?;
                entry.insert(World(w));
            }
        }

        // a proposition holding nowhere is the same as an unmentioned one
        val.retain(|_, worlds| !worlds.is_empty());

        let mut assign = BTreeMap::new();
        for (n, w) in assignment {
            check(w, format!("assignment of {n}"))?;
            if assign.insert(n.clone(), World(w)).is_some() {
                return Err(ModelError::DuplicateAssignment(n));
            }
        }

        let image: BTreeSet<World> = assign.values().copied().collect();
        let named = image.len() == count;

        Ok(Model {
            world_names,
            succ,
            edges: edge_set,
            valuation: val,
            assignment: assign,
            named,
        })
    }

    pub fn world_count(&self) -> usize {
        self.world_names.len()
    }

    pub fn worlds(&self) -> impl Iterator<Item = World> {
        (0..self.world_names.len()).map(World)
    }

    pub fn world_name(&self, w: World) -> &str {
        &self.world_names[w.0]
    }

    pub fn world_named(&self, name: &str) -> Option<World> {
        self.world_names.iter().position(|n| n == name).map(World)
    }

    pub fn successors(&self, w: World) -> &[World] {
        &self.succ[w.0]
    }

    pub fn has_edge(&self, from: World, to: World) -> bool {
        self.edges.contains(&(from.0, to.0))
    }

    pub fn proposition_true_at(&self, p: &PropVar, w: World) -> bool {
        self.valuation.get(p).is_some_and(|s| s.contains(&w))
    }

    /// The world a nominal names, if the nominal is assigned.
    pub fn world_of(&self, n: &Nominal) -> Option<World> {
        self.assignment.get(n).copied()
    }

    pub fn assignment(&self) -> impl Iterator<Item = (&Nominal, World)> {
        self.assignment.iter().map(|(n, w)| (n, *w))
    }

    pub fn propositions(&self) -> impl Iterator<Item = &PropVar> {
        self.valuation.keys()
    }

    /// True iff every world has at least one name.
    pub fn is_named(&self) -> bool {
        self.named
    }

    /// All nominals naming `w`, in sorted order.
    pub fn names_of(&self, w: World) -> Vec<&Nominal> {
        self.assignment
            .iter()
            .filter(|(_, v)| **v == w)
            .map(|(n, _)| n)
            .collect()
    }

    fn first_unknown(&self, f: &Formula) -> Option<Nominal> {
        match f {
            Formula::Prop(_) => None,
            Formula::Nom(i) => (!self.assignment.contains_key(i)).then(|| i.clone()),
            Formula::Rel(i, j) => [i, j]
                .into_iter()
                .find(|n| !self.assignment.contains_key(*n))
                .cloned(),
            Formula::Neg(x) | Formula::Box(x) | Formula::Dia(x) => self.first_unknown(x),
            Formula::At(i, x) => {
                if !self.assignment.contains_key(i) {
                    Some(i.clone())
                } else {
                    self.first_unknown(x)
                }
            }
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                self.first_unknown(l).or_else(|| self.first_unknown(r))
            }
        }
    }

    pub(crate) fn check_nominals(&self, f: &Formula) -> Result<(), UnknownNominal> {
        match self.first_unknown(f) {
            Some(n) => Err(UnknownNominal(n)),
            None => Ok(()),
        }
    }

    pub(crate) fn eval_unchecked(&self, w: World, f: &Formula) -> bool {
        match f {
            Formula::Prop(p) => self.proposition_true_at(p, w),
            Formula::Nom(i) => self.assignment[i] == w,
            Formula::Rel(i, j) => self.has_edge(self.assignment[i], self.assignment[j]),
            Formula::And(l, r) => self.eval_unchecked(w, l) && self.eval_unchecked(w, r),
            Formula::Or(l, r) => self.eval_unchecked(w, l) || self.eval_unchecked(w, r),
            Formula::Imp(l, r) => !self.eval_unchecked(w, l) || self.eval_unchecked(w, r),
            Formula::Neg(x) => !self.eval_unchecked(w, x),
            Formula::At(i, x) => self.eval_unchecked(self.assignment[i], x),
            Formula::Box(x) => self.succ[w.0].iter().all(|v| self.eval_unchecked(*v, x)),
            Formula::Dia(x) => self.succ[w.0].iter().any(|v| self.eval_unchecked(*v, x)),
        }
    }

    /// Truth of `f` at world `w`, by the recursive truth definition.
    /// `R(i,j)` atoms are evaluated against the assignment alone and do not
    /// depend on `w`; a `[]` over a world without successors is vacuously
    /// true.
    pub fn eval(&self, w: World, f: &Formula) -> Result<bool, UnknownNominal> {
        self.check_nominals(f)?;
        Ok(self.eval_unchecked(w, f))
    }

    /// Truth in the whole model: `f` holds at every world.
    pub fn eval_global(&self, f: &Formula) -> Result<bool, UnknownNominal> {
        Ok(self.first_failing_world(f)?.is_none())
    }

    /// The first world (in index order) where `f` fails, if any.
    pub fn first_failing_world(&self, f: &Formula) -> Result<Option<World>, UnknownNominal> {
        self.check_nominals(f)?;
        Ok(self.worlds().find(|w| !self.eval_unchecked(*w, f)))
    }

    pub fn from_json(text: &str) -> Result<Model, ModelError> {
        let dto: ModelDto =
            serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        dto.into_model()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialization cannot fail")
    }

    /// GraphViz rendering of the model; read-only output for figures.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph model {\n  rankdir=LR;\n  node [shape=circle];\n");
        for w in self.worlds() {
            let mut label = self.world_name(w).to_string();
            let names = self.names_of(w);
            if !names.is_empty() {
                let names: Vec<&str> = names.iter().map(|n| n.as_str()).collect();
                label.push_str(&format!(" [{}]", names.join(",")));
            }
            let props: Vec<&str> = self
                .valuation
                .iter()
                .filter(|(_, s)| s.contains(&w))
                .map(|(p, _)| p.as_str())
                .collect();
            if !props.is_empty() {
                label.push_str("\\n");
                label.push_str(&props.join(","));
            }
            out.push_str(&format!("  w{} [label=\"{}\"];\n", w.0, label));
        }
        for (from, to) in &self.edges {
            out.push_str(&format!("  w{from} -> w{to};\n"));
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "model with {} worlds, {} edges{}",
            self.world_count(),
            self.edges.len(),
            if self.named { " (named)" } else { "" }
        )
    }
}

#[derive(Serialize, Deserialize)]
struct ModelDto {
    worlds: Vec<String>,
    #[serde(default)]
    access: Vec<(String, String)>,
    #[serde(default)]
    valuation: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    assignment: BTreeMap<String, String>,
}

impl ModelDto {
    fn into_model(self) -> Result<Model, ModelError> {
        let index = |name: &str, context: String| {
            self.worlds
                .iter()
                .position(|w| w == name)
                .ok_or_else(|| ModelError::UnknownWorld {
                    world: name.to_string(),
                    context,
                })
        };

        let mut edges = Vec::new();
        for (from, to) in &self.access {
            edges.push((
                index(from, "accessibility pair".to_string())?,
                index(to, "accessibility pair".to_string())?,
            ));
        }
        let mut valuation = Vec::new();
        for (p, worlds) in &self.valuation {
            let p = PropVar::try_new(p).ok_or_else(|| {
                ModelError::Json(format!("{p:?} is not a propositional identifier"))
            })?;
            let mut indices = Vec::new();
            for w in worlds {
                indices.push(index(w, format!("valuation of {p}"))?);
            }
            valuation.push((p, indices));
        }
        let mut assignment = Vec::new();
        for (n, w) in &self.assignment {
            let n = Nominal::try_new(n)
                .ok_or_else(|| ModelError::Json(format!("{n:?} is not a nominal identifier")))?;
            let w = index(w, format!("assignment of {n}"))?;
            assignment.push((n, w));
        }
        Model::new(self.worlds, edges, valuation, assignment)
    }
}

impl Serialize for Model {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let dto = ModelDto {
            worlds: self.world_names.clone(),
            access: self
                .edges
                .iter()
                .map(|(a, b)| (self.world_names[*a].clone(), self.world_names[*b].clone()))
                .collect(),
            valuation: self
                .valuation
                .iter()
                .map(|(p, ws)| {
                    (
                        p.as_str().to_string(),
                        ws.iter().map(|w| self.world_names[w.0].clone()).collect(),
                    )
                })
                .collect(),
            assignment: self
                .assignment
                .iter()
                .map(|(n, w)| (n.as_str().to_string(), self.world_names[w.0].clone()))
                .collect(),
        };
        dto.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Model {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let dto = ModelDto::deserialize(d)?;
        dto.into_model().map_err(D::Error::custom)
    }
}
