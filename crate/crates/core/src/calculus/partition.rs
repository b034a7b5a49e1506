//! Union-find over nominals, for the equalities a branch accumulates.

use std::collections::BTreeMap;

use crate::syntax::Nominal;

/// An equivalence relation over a growing set of nominals. Reflexive by
/// construction; `union` closes it under symmetry and transitivity.
#[derive(Clone, Debug, Default)]
pub struct NominalPartition {
    index: BTreeMap<Nominal, usize>,
    items: Vec<Nominal>,
    parent: Vec<usize>,
}

impl NominalPartition {
    pub fn new() -> Self {
        NominalPartition::default()
    }

    /// Registers a nominal as its own singleton class (idempotent).
    pub fn add(&mut self, n: &Nominal) -> usize {
        if let Some(i) = self.index.get(n) {
            return *i;
        }
        let i = self.items.len();
        self.index.insert(n.clone(), i);
        self.items.push(n.clone());
        self.parent.push(i);
        i
    }

    fn root(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    pub fn union(&mut self, a: &Nominal, b: &Nominal) {
        let (a, b) = (self.add(a), self.add(b));
        let (ra, rb) = (self.root(a), self.root(b));
        if ra != rb {
            self.parent[rb] = ra;
        }
    }

    pub fn same(&mut self, a: &Nominal, b: &Nominal) -> bool {
        let (a, b) = (self.add(a), self.add(b));
        self.root(a) == self.root(b)
    }

    /// Stable id of the class of `n` (adds `n` if unseen).
    pub fn class_id(&mut self, n: &Nominal) -> usize {
        let i = self.add(n);
        self.root(i)
    }

    /// The classes as sorted member lists, ordered by smallest member.
    pub fn classes(&mut self) -> Vec<Vec<Nominal>> {
        let mut groups: BTreeMap<usize, Vec<Nominal>> = BTreeMap::new();
        for i in 0..self.items.len() {
            let r = self.root(i);
            groups.entry(r).or_default().push(self.items[i].clone());
        }
        let mut out: Vec<Vec<Nominal>> = groups
            .into_values()
            .map(|mut v| {
                v.sort();
                v
            })
            .collect();
        out.sort();
        out
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}
