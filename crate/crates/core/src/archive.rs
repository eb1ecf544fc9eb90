//! Non-dominated archive of evaluated packings.

use crate::model::{ObjectiveVector, Solution};

/// An antichain of objective vectors, one witness packing per vector.
///
/// Archives stay tiny in practice (a handful of vectors), so membership and
/// dominance are plain linear scans.
#[derive(Clone, Debug, Default)]
pub struct ParetoArchive {
    entries: Vec<(ObjectiveVector, Solution)>,
}

impl ParetoArchive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(ObjectiveVector, Solution)] {
        &self.entries
    }

    pub fn vectors(&self) -> impl Iterator<Item = ObjectiveVector> + '_ {
        self.entries.iter().map(|(v, _)| *v)
    }

    /// Vectors in reporting order (`z1` descending, `z2` ascending).
    pub fn sorted_vectors(&self) -> Vec<ObjectiveVector> {
        let mut out: Vec<_> = self.vectors().collect();
        out.sort_by(ObjectiveVector::report_cmp);
        out
    }

    pub fn contains(&self, vector: &ObjectiveVector) -> bool {
        self.entries.iter().any(|(v, _)| v == vector)
    }

    /// Offers a candidate. Entries it dominates are dropped; it is kept
    /// unless an entry dominates it or already carries the same vector, in
    /// which case the incumbent witness stays. Returns whether it was kept.
    pub fn update(&mut self, vector: ObjectiveVector, solution: Solution) -> bool {
        if self.entries.iter().any(|(v, _)| v == &vector || v.dominates(&vector)) {
            return false;
        }
        self.entries.retain(|(v, _)| !vector.dominates(v));
        self.entries.push((vector, solution));
        true
    }

    /// Folds every entry of `other` into a copy of `self`. On equal vectors
    /// the witness from `self` wins.
    pub fn merge(mut self, other: ParetoArchive) -> ParetoArchive {
        self.extend(other);
        self
    }

    pub fn extend(&mut self, other: ParetoArchive) {
        for (vector, solution) in other.entries {
            self.update(vector, solution);
        }
    }
}

impl IntoIterator for ParetoArchive {
    type Item = (ObjectiveVector, Solution);
    type IntoIter = std::vec::IntoIter<(ObjectiveVector, Solution)>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.into_iter()
    }
}
