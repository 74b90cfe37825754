//! Exact minimum set cover.
//!
//! The 0-1 integer program being solved, with one variable per candidate
//! set `Sⱼ` and one constraint per universe element `u`:
//!
//! ```text
//! minimize    Σⱼ xⱼ
//! subject to  Σ_{j : u ∈ Sⱼ} xⱼ ≥ 1      for every u in the universe
//!             xⱼ ∈ {0, 1}
//! ```
//!
//! Solved by branch and bound. The optimum is searched upward from a lower
//! bound (pairwise "disjoint" elements no candidate covers together) to the
//! greedy upper bound. At each size the search includes candidates before
//! excluding them in index order, so the first cover found is the
//! lexicographically smallest optimal one.

use std::collections::BTreeMap;
use std::fmt::Display;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CoverInstance<T> {
    pub universe: Vec<T>,
    pub candidates: Vec<Vec<T>>,
}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] & (1 << (i % 64)) != 0
    }
    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
    fn intersects(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).any(|(a, b)| a & b != 0)
    }
    fn count_and(&self, o: &Bits) -> u32 {
        self.0.iter().zip(&o.0).map(|(a, b)| (a & b).count_ones()).sum()
    }
    fn minus(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & !b).collect())
    }
    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64).filter(move |b| w & (1 << b) != 0).map(move |b| wi * 64 + b)
        })
    }
}

/// Indices (ascending) of a minimum-cardinality sub-list of candidates whose
/// union contains the universe. Among optimal covers, the lexicographically
/// smallest index list is returned. Candidate elements outside the universe
/// are ignored.
pub fn min_cover<T: Ord + Display>(instance: &CoverInstance<T>) -> Result<Vec<usize>> {
    let n = instance.universe.len();
    let position: BTreeMap<&T, usize> = instance
        .universe
        .iter()
        .enumerate()
        .map(|(i, u)| (u, i))
        .collect();
    let lookup = |x: &T| position.get(x).copied();

    let sets: Vec<Bits> = instance
        .candidates
        .iter()
        .map(|c| {
            let mut b = Bits::new(n);
            for x in c {
                if let Some(i) = lookup(x) {
                    b.set(i);
                }
            }
            b
        })
        .collect();

    let mut all = Bits::new(n);
    for i in 0..n {
        all.set(i);
    }
    let uncovered: Vec<String> = (0..n)
        .filter(|&i| !sets.iter().any(|s| s.get(i)))
        .map(|i| instance.universe[i].to_string())
        .collect();
    if !uncovered.is_empty() {
        return Err(Error::Uncovered(uncovered));
    }
    if n == 0 {
        return Ok(Vec::new());
    }

    let upper = greedy(&sets, &all);
    let lower = disjoint_bound(&sets, &all, 0);
    let mut solver = Solver {
        sets: &sets,
        chosen: Vec::new(),
    };
    for k in lower..=upper {
        if solver.search(0, &all, k) {
            return Ok(solver.chosen);
        }
    }
    unreachable!("the greedy cover has size {upper}")
}

fn greedy(sets: &[Bits], universe: &Bits) -> usize {
    let mut left = universe.clone();
    let mut size = 0;
    while !left.is_empty() {
        let best = sets
            .iter()
            .enumerate()
            .max_by(|(ia, a), (ib, b)| a.count_and(&left).cmp(&b.count_and(&left)).then(ib.cmp(ia)))
            .map(|(_, s)| s)
            .expect("feasibility was checked");
        left = left.minus(best);
        size += 1;
    }
    size
}

/// Number of uncovered elements chosen so that no candidate from `from`
/// onward contains two of them; each needs its own candidate.
fn disjoint_bound(sets: &[Bits], left: &Bits, from: usize) -> usize {
    let mut taken = Bits::new(left.0.len() * 64);
    let mut count = 0;
    for e in left.iter() {
        let clash = sets[from..].iter().any(|s| s.get(e) && s.intersects(&taken));
        if !clash {
            taken.set(e);
            count += 1;
        }
    }
    count
}

struct Solver<'a> {
    sets: &'a [Bits],
    chosen: Vec<usize>,
}

impl Solver<'_> {
    fn search(&mut self, from: usize, left: &Bits, k: usize) -> bool {
        if left.is_empty() {
            return true;
        }
        if self.chosen.len() >= k {
            return false;
        }
        if left.iter().any(|e| !self.sets[from..].iter().any(|s| s.get(e))) {
            return false;
        }
        if self.chosen.len() + disjoint_bound(self.sets, left, from) > k {
            return false;
        }
        for j in from..self.sets.len() {
            // A candidate adding nothing can't belong to an optimal cover.
            if !self.sets[j].intersects(left) {
                continue;
            }
            self.chosen.push(j);
            if self.search(j + 1, &left.minus(&self.sets[j]), k) {
                return true;
            }
            self.chosen.pop();
            // Excluding j: elements covered only by j leave no way forward.
            if left.iter().any(|e| !self.sets[j + 1..].iter().any(|s| s.get(e))) {
                return false;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(universe: &[char], candidates: &[&[char]]) -> CoverInstance<char> {
        CoverInstance {
            universe: universe.to_vec(),
            candidates: candidates.iter().map(|c| c.to_vec()).collect(),
        }
    }

    #[test]
    fn worked_example() {
        let i = inst(&['b', 'd', 'e', 'g'], &[&['b', 'd'], &['d', 'e'], &['e', 'g']]);
        assert_eq!(min_cover(&i).unwrap(), vec![0, 2]);
    }

    #[test]
    fn single_candidate() {
        let i = inst(&['a', 'b'], &[&['a', 'b']]);
        assert_eq!(min_cover(&i).unwrap(), vec![0]);
    }

    #[test]
    fn ties_break_lexicographically() {
        let i = CoverInstance {
            universe: vec![1, 2, 3, 4],
            candidates: vec![vec![1, 2], vec![2, 3], vec![3, 4], vec![1, 4]],
        };
        assert_eq!(min_cover(&i).unwrap(), vec![0, 2]);
    }

    #[test]
    fn uncovered_elements_are_reported() {
        let i = inst(&['a', 'b', 'c'], &[&['a']]);
        assert_eq!(
            min_cover(&i),
            Err(Error::Uncovered(vec!["b".into(), "c".into()]))
        );
    }

    #[test]
    fn greedy_is_not_optimal_here() {
        // Greedy picks the big middle set first and needs 3.
        let i = CoverInstance {
            universe: (1..=6).collect(),
            candidates: vec![vec![1, 2, 3], vec![4, 5, 6], vec![2, 3, 4, 5]],
        };
        assert_eq!(min_cover(&i).unwrap(), vec![0, 1]);
    }
}
