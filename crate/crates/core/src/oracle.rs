//! Brute-force reference synthesis over a materialized lattice.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Result;
use crate::lattice::{materialize, LatticeContext, LatticeElement, ObjectPoint};

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    /// Every maximal of the feasible region, canonically ordered.
    pub maximals: Vec<LatticeElement>,
    /// Minimum number of maximals whose union covers all positives.
    pub optimum: usize,
    /// All optimal covers, each as a list of coverage sets (indices into
    /// the positives). Any maximal with a listed coverage set may serve as
    /// that clause.
    pub optimal_covers: Vec<Vec<Vec<usize>>>,
    /// Maximals grouped by the positives they cover.
    pub by_coverage: BTreeMap<Vec<usize>, Vec<LatticeElement>>,
}

impl OracleSolution {
    pub fn is_maximal(&self, m: &LatticeElement) -> bool {
        self.maximals.binary_search(m).is_ok()
    }
}

/// Enumerates the whole lattice, keeps the elements covering a positive and
/// no negative, takes those without a feasible successor, then searches
/// cover sizes 1, 2, … exhaustively.
pub fn oracle_synthesize(
    ctx: &LatticeContext,
    positives: &[ObjectPoint],
    negatives: &[ObjectPoint],
    cap: u64,
) -> Result<OracleSolution> {
    let feasible = |x: &LatticeElement| x.covers_any(positives) && !x.covers_any(negatives);
    let mut maximals = Vec::new();
    for x in materialize(ctx, cap)? {
        if x.is_bottom() || !feasible(&x) {
            continue;
        }
        if ctx.successors(&x)?.iter().all(|s| !feasible(s)) {
            maximals.push(x);
        }
    }
    maximals.sort();

    let mut by_coverage: BTreeMap<Vec<usize>, Vec<LatticeElement>> = BTreeMap::new();
    for m in &maximals {
        let cov: Vec<usize> = (0..positives.len()).filter(|&i| m.covers(&positives[i])).collect();
        by_coverage.entry(cov).or_default().push(m.clone());
    }
    let sets: Vec<&Vec<usize>> = by_coverage.keys().collect();
    let everything: BTreeSet<usize> = (0..positives.len()).collect();

    let mut optimal_covers = Vec::new();
    let mut optimum = 0;
    for k in 1..=sets.len() {
        for combo in combinations(sets.len(), k) {
            let union: BTreeSet<usize> = combo.iter().flat_map(|&i| sets[i].iter().copied()).collect();
            if union == everything {
                optimal_covers.push(combo.iter().map(|&i| sets[i].clone()).collect());
            }
        }
        if !optimal_covers.is_empty() {
            optimum = k;
            break;
        }
    }
    Ok(OracleSolution {
        maximals,
        optimum,
        optimal_covers,
        by_coverage,
    })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}
