use serde::{Deserialize, Serialize};

use super::StoneError;

/// Minimal transversals of a set family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dual {
    pub sets: Vec<Vec<usize>>,
    /// The family was empty, so the empty set meets every member.
    pub degenerate: bool,
}

pub const DUAL_MAX_VERTICES: usize = 20;

/// Minimal sets meeting every set of `family`, by enumerating subsets of
/// the `n` vertices.
pub fn maker_breaker_dual(n: usize, family: &[Vec<usize>]) -> Result<Dual, StoneError> {
    if n > DUAL_MAX_VERTICES {
        return Err(StoneError::BudgetExceeded {
            size: n,
            budget: DUAL_MAX_VERTICES,
        });
    }
    if family.is_empty() {
        return Ok(Dual {
            sets: vec![Vec::new()],
            degenerate: true,
        });
    }
    let mut edges = Vec::with_capacity(family.len());
    for s in family {
        if s.is_empty() {
            return Err(StoneError::EmptySet);
        }
        let mut m = 0u32;
        for &v in s {
            if v >= n {
                return Err(StoneError::OutOfRange(v));
            }
            m |= 1 << v;
        }
        edges.push(m);
    }
    let hits = |m: u32| edges.iter().all(|&e| e & m != 0);
    let mut sets = Vec::new();
    for m in 0..1u32 << n {
        if !hits(m) {
            continue;
        }
        let minimal = (0..n)
            .filter(|i| m >> i & 1 == 1)
            .all(|i| !hits(m & !(1 << i)));
        if minimal {
            sets.push((0..n).filter(|i| m >> i & 1 == 1).collect::<Vec<usize>>());
        }
    }
    sets.sort();
    Ok(Dual {
        sets,
        degenerate: false,
    })
}

/// A set of integers, either listed or an arithmetic progression of copies
/// of a base pattern: `base + k * step` for every `k >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SetDescriptor {
    Finite { vertices: Vec<i64> },
    Periodic { base: Vec<i64>, step: i64 },
}

impl SetDescriptor {
    pub fn is_finite(&self) -> bool {
        match self {
            SetDescriptor::Finite { .. } => true,
            SetDescriptor::Periodic { base, step } => base.is_empty() || *step == 0,
        }
    }

    pub fn contains(&self, v: i64) -> bool {
        match self {
            SetDescriptor::Finite { vertices } => vertices.contains(&v),
            SetDescriptor::Periodic { base, step } => base.iter().any(|&b| {
                if *step == 0 {
                    v == b
                } else {
                    (v - b) % step == 0 && (v - b) / step >= 0
                }
            }),
        }
    }

    /// The first `k` repetitions, or the whole set if finite.
    pub fn prefix(&self, k: usize) -> Vec<i64> {
        match self {
            SetDescriptor::Finite { vertices } => vertices.clone(),
            SetDescriptor::Periodic { base, step } => (0..k as i64)
                .flat_map(|i| base.iter().map(move |b| b + i * step))
                .collect(),
        }
    }

    /// Whether every element of `self` lies in `other`.
    pub fn subset_of(&self, other: &SetDescriptor) -> bool {
        match (self, other) {
            (SetDescriptor::Finite { vertices }, _) => vertices.iter().all(|&v| other.contains(v)),
            (SetDescriptor::Periodic { .. }, SetDescriptor::Finite { .. }) => {
                self.is_finite() && { self.prefix(1).iter().all(|&v| other.contains(v)) }
            }
            (
                SetDescriptor::Periodic { base, step },
                SetDescriptor::Periodic { base: b2, step: s2 },
            ) => {
                if *step == 0 || base.is_empty() {
                    return base.iter().all(|&v| other.contains(v));
                }
                if *s2 == 0 || step.signum() != s2.signum() {
                    return false;
                }
                // Past every base of `other`, membership only depends on the
                // residue mod s2, which cycles within |s2| repetitions.
                let reach = base
                    .iter()
                    .flat_map(|b| b2.iter().map(move |c| (b - c).abs()))
                    .max()
                    .unwrap_or(0);
                let k = reach / step.abs() + 1 + s2.abs();
                (0..k).all(|i| base.iter().all(|b| other.contains(b + i * step)))
            }
        }
    }
}

/// Whether every minimal set is finite; returns the finite ones.
pub fn has_finite_basis(minimal: &[SetDescriptor]) -> (bool, Vec<SetDescriptor>) {
    let basis: Vec<SetDescriptor> = minimal.iter().filter(|s| s.is_finite()).cloned().collect();
    (basis.len() == minimal.len(), basis)
}
