//! Representatives: the sets of positives covered by maximals.

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::lattice::{LatticeContext, LatticeElement, ObjectPoint};
use crate::search::{find_maximals_visit, SearchProblem};

/// A positive object together with its atom.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPoint {
    pub id: String,
    pub point: ObjectPoint,
}

/// All maximals that cover the same positives, abstracted to that set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Representative {
    /// Indices into the positive list, ascending.
    pub members: Vec<usize>,
    /// Object ids of the members, in the same order.
    pub covered_positives: Vec<String>,
}

impl Representative {
    pub fn from_members(members: Vec<usize>, positives: &[LabeledPoint]) -> Self {
        let covered_positives = members.iter().map(|&i| positives[i].id.clone()).collect();
        Representative {
            members,
            covered_positives,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Representatives {
    /// Ordered by size descending, then members ascending.
    pub representatives: Vec<Representative>,
    pub maximals: usize,
    pub examined: usize,
}

/// Indices of the positives covered by `m`.
pub fn coverage(m: &LatticeElement, positives: &[LabeledPoint]) -> Vec<usize> {
    positives
        .iter()
        .enumerate()
        .filter(|(_, p)| m.covers(&p.point))
        .map(|(i, _)| i)
        .collect()
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.by_ref().any(|y| y == x))
}

/// Keeps only the inclusion-maximal sets.
#[derive(Debug, Default)]
pub struct Antichain {
    sets: Vec<Vec<usize>>,
}

impl Antichain {
    pub fn insert(&mut self, set: Vec<usize>) {
        if set.is_empty() || self.sets.iter().any(|d| is_subset(&set, d)) {
            return;
        }
        self.sets.retain(|d| !is_subset(d, &set));
        self.sets.push(set);
    }

    /// Size descending, then lexicographic.
    pub fn into_sorted(mut self) -> Vec<Vec<usize>> {
        sort_candidates(&mut self.sets);
        self.sets
    }
}

pub fn sort_candidates(sets: &mut [Vec<usize>]) {
    sets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
}

/// Streams the maximals below `⊔Π⁺` into an antichain of their coverage
/// sets.
pub fn find_representatives(
    ctx: &LatticeContext,
    positives: &[LabeledPoint],
    negatives: &[ObjectPoint],
    budget: &Budget,
    exec: Execution,
) -> Result<Representatives> {
    if positives.is_empty() {
        return Err(Error::EmptyPositives);
    }
    let bound = positives
        .iter()
        .map(|p| ctx.point_element(&p.point))
        .try_fold(LatticeElement::Bottom, |acc, a| acc.join(&a))?;
    let problem = SearchProblem {
        ctx,
        bound,
        positives: positives.iter().map(|p| p.point.clone()).collect(),
        negatives: negatives.to_vec(),
    };
    let mut antichain = Antichain::default();
    let mut maximals = 0;
    let examined = find_maximals_visit(&problem, budget, exec, |m| {
        maximals += 1;
        antichain.insert(coverage(m, positives));
    })?;
    Ok(Representatives {
        representatives: antichain
            .into_sorted()
            .into_iter()
            .map(|s| Representative::from_members(s, positives))
            .collect(),
        maximals,
        examined,
    })
}
