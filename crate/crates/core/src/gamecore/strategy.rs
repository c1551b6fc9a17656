use std::collections::BTreeMap;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

/// Moves keyed by the path of child indices from the root.
///
/// `fallback` answers paths outside the table; it is used past endless
/// stretches of play where tabulation stops.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Strategy {
    pub moves: BTreeMap<Vec<usize>, usize>,
    pub fallback: Option<usize>,
}

impl Strategy {
    pub fn insert(&mut self, path: Vec<usize>, choice: usize) {
        self.moves.insert(path, choice);
    }

    pub fn choose(&self, path: &[usize]) -> Option<usize> {
        self.moves.get(path).copied().or(self.fallback)
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }
}

#[derive(Serialize)]
struct Entry<'a> {
    path: &'a [usize],
    choice: usize,
}

impl Serialize for Strategy {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.moves.len()))?;
        for (path, &choice) in &self.moves {
            seq.serialize_element(&Entry { path, choice })?;
        }
        seq.end()
    }
}
