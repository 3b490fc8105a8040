use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use crate::error::{Error, Result};

/// Marker for the off-diagonal value of delta-style aggregations.
pub(crate) const ABSENT: u32 = u32::MAX;

/// Dense ids for exact keys, in first-seen order.
#[derive(Debug)]
pub(crate) struct Interner<T> {
    map: HashMap<Box<[T]>, u32>,
}

impl<T: Eq + Hash + Clone> Interner<T> {
    pub(crate) fn new() -> Self {
        Interner { map: HashMap::new() }
    }

    pub(crate) fn len(&self) -> usize {
        self.map.len()
    }

    pub(crate) fn intern(&mut self, key: &[T]) -> u32 {
        if let Some(&id) = self.map.get(key) {
            return id;
        }
        let id = self.map.len() as u32;
        assert!(id != ABSENT, "intern table overflow");
        self.map.insert(key.into(), id);
        id
    }
}

/// Scratch for one synchronous round: `main` gives the new colors, `aux` names
/// sub-multisets shared by many elements. Both are fresh every round, so ids are
/// only comparable within the round (which covers every graph of the run).
pub(crate) struct Round {
    pub main: Interner<u32>,
    pub aux: Interner<u32>,
    pub key: Vec<u32>,
    scratch: Vec<u32>,
}

impl Round {
    pub(crate) fn new() -> Self {
        Round { main: Interner::new(), aux: Interner::new(), key: Vec::new(), scratch: Vec::new() }
    }

    /// Interns `self.key` as a new main color and clears it.
    pub(crate) fn commit(&mut self) -> u32 {
        let id = self.main.intern(&self.key);
        self.key.clear();
        id
    }

    /// Aux id of the sorted multiset `items`, namespaced by `tag`.
    pub(crate) fn multiset(&mut self, tag: u32, items: &mut [u32]) -> u32 {
        items.sort_unstable();
        self.scratch.clear();
        self.scratch.push(tag);
        self.scratch.extend_from_slice(items);
        self.aux.intern(&self.scratch)
    }
}

/// Appends the sorted tuples to `key`.
pub(crate) fn push_sorted<const K: usize>(key: &mut Vec<u32>, items: &mut [[u32; K]]) {
    items.sort_unstable();
    for t in items.iter() {
        key.extend_from_slice(t);
    }
}

pub(crate) fn distinct(colors: &[Vec<u32>]) -> usize {
    colors.iter().flatten().collect::<HashSet<_>>().len()
}

pub(crate) struct Fixpoint {
    pub colors: Vec<Vec<u32>>,
    /// Rounds that split at least one class.
    pub rounds: usize,
}

/// Applies `step` until the joint partition over all graphs stops changing.
///
/// Every round is checked to refine the previous one. At most (total elements) rounds
/// can split something, so running longer means the step is broken.
pub(crate) fn fixpoint<F>(init: Vec<Vec<u32>>, mut step: F) -> Result<Fixpoint>
where
    F: FnMut(&[Vec<u32>], &mut Round) -> Vec<Vec<u32>>,
{
    let total: usize = init.iter().map(Vec::len).sum();
    let mut cur = init;
    let mut classes = distinct(&cur);
    for rounds in 0..=total {
        let mut round = Round::new();
        let next = step(&cur, &mut round);
        let new_classes = round.main.len();
        check_refines(&cur, &next, new_classes)?;
        if new_classes == classes {
            return Ok(Fixpoint { colors: cur, rounds });
        }
        cur = next;
        classes = new_classes;
    }
    Err(Error::Internal(format!("refinement did not stabilise within {total} rounds")))
}

/// Applies `step` exactly `times` times (still checking monotonicity).
pub(crate) fn iterate<F>(init: Vec<Vec<u32>>, times: usize, mut step: F) -> Result<Vec<Vec<u32>>>
where
    F: FnMut(&[Vec<u32>], &mut Round) -> Vec<Vec<u32>>,
{
    let mut cur = init;
    for _ in 0..times {
        let mut round = Round::new();
        let next = step(&cur, &mut round);
        check_refines(&cur, &next, round.main.len())?;
        cur = next;
    }
    Ok(cur)
}

/// New colors must determine old colors.
fn check_refines(old: &[Vec<u32>], new: &[Vec<u32>], new_classes: usize) -> Result<()> {
    let mut old_of = vec![ABSENT; new_classes];
    for (o, n) in old.iter().zip(new) {
        if o.len() != n.len() {
            return Err(Error::Internal("refinement step changed the domain size".into()));
        }
        for (&a, &b) in o.iter().zip(n) {
            let slot = &mut old_of[b as usize];
            if *slot == ABSENT {
                *slot = a;
            } else if *slot != a {
                return Err(Error::Internal("refinement step merged two color classes".into()));
            }
        }
    }
    Ok(())
}
