use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use rand::Rng;

use crate::error::{Error, Result};
use crate::fitness::FitnessValue;
use crate::label::Labeling;

#[derive(Clone, Debug)]
pub struct Individual {
    pub labeling: Labeling,
    pub fitness: FitnessValue,
    /// Generation that produced this individual (0 for the initial one).
    pub birth: u32,
    pub lineage: u64,
}

/// Hash of the label vector (stamps excluded).
pub fn label_digest(l: &Labeling) -> u64 {
    let mut h = DefaultHasher::new();
    l.labels().hash(&mut h);
    h.finish()
}

/// Elite set sorted by ascending total fitness. Equal totals keep insertion
/// order, and label vectors are unique.
#[derive(Clone, Debug)]
pub struct Archive {
    entries: Vec<(u64, Individual)>,
    capacity: usize,
}

impl Archive {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity >= 1, "archive capacity must be positive");
        Archive { entries: Vec::with_capacity(capacity + 1), capacity }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.entries.len() >= self.capacity
    }

    /// Entry at 0-based rank.
    pub fn get(&self, rank: usize) -> &Individual {
        &self.entries[rank].1
    }

    pub fn best(&self) -> Option<&Individual> {
        self.entries.first().map(|e| &e.1)
    }

    pub fn worst(&self) -> Option<&Individual> {
        self.entries.last().map(|e| &e.1)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Individual> {
        self.entries.iter().map(|e| &e.1)
    }

    pub fn contains_labels(&self, l: &Labeling) -> bool {
        let d = label_digest(l);
        self.entries.iter().any(|(h, e)| *h == d && e.labeling.same_labels(l))
    }

    /// Offers `ind`; returns whether it was stored. Duplicates are refused;
    /// when full, the candidate must be strictly better than the worst
    /// entry, which is then dropped.
    pub fn insert(&mut self, ind: Individual) -> bool {
        let d = label_digest(&ind.labeling);
        if self.entries.iter().any(|(h, e)| *h == d && e.labeling.same_labels(&ind.labeling)) {
            return false;
        }
        if self.is_full() && ind.fitness.total >= self.entries.last().expect("full archive").1.fitness.total {
            return false;
        }
        let pos = self.entries.partition_point(|(_, e)| e.fitness.total <= ind.fitness.total);
        self.entries.insert(pos, (d, ind));
        self.entries.truncate(self.capacity);
        true
    }

    /// Rank-proportional draw: rank `i` (1-based) out of `n` has
    /// probability `(n - i + 1) / (n (n + 1) / 2)`.
    pub fn select<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<&Individual> {
        let rank = select_rank(self.len(), rng).ok_or(Error::EmptyArchive)?;
        Ok(self.get(rank))
    }
}

/// 0-based rank drawn with weights `n, n - 1, ..., 1`.
pub fn select_rank<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Option<usize> {
    if n == 0 {
        return None;
    }
    let total = n * (n + 1) / 2;
    let mut r = rng.gen_range(0..total);
    for i in 0..n {
        let w = n - i;
        if r < w {
            return Some(i);
        }
        r -= w;
    }
    unreachable!("draw below total weight")
}

/// Per-triangle recombination: agreeing labels are copied with the larger
/// stamp; on conflict the parent with the strictly more recent stamp wins,
/// `a` on ties. The child keeps the winning stamp.
pub fn crossover(a: &Labeling, b: &Labeling) -> Labeling {
    assert_eq!(a.len(), b.len(), "parents must label the same mesh");
    let mut labels = Vec::with_capacity(a.len());
    let mut stamps = Vec::with_capacity(a.len());
    for t in 0..a.len() {
        let (la, lb, sa, sb) = (a.label(t), b.label(t), a.stamp(t), b.stamp(t));
        if la == lb {
            labels.push(la);
            stamps.push(sa.max(sb));
        } else if sb > sa {
            labels.push(lb);
            stamps.push(sb);
        } else {
            labels.push(la);
            stamps.push(sa);
        }
    }
    Labeling::from_parts(labels, stamps)
}
