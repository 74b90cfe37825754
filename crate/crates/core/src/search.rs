//! Maximal-element search over the feasible region.

use std::collections::BTreeSet;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::lattice::{
    coords_cover, diff_point, CoordinateValue, LatticeContext, LatticeElement, ObjectPoint,
};

/// One search: maximal elements below `bound` that cover a positive and no
/// negative.
#[derive(Debug, Clone)]
pub struct SearchProblem<'a> {
    pub ctx: &'a LatticeContext,
    pub bound: LatticeElement,
    pub positives: Vec<ObjectPoint>,
    pub negatives: Vec<ObjectPoint>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Maximals {
    /// Canonically ordered.
    pub elements: Vec<LatticeElement>,
    /// Candidates generated by element difference over the whole run.
    pub examined: usize,
}

/// Subtracts each negative from every working element, keeps the
/// children that still cover a positive, then drops the non-maximal ones.
///
/// Maximality is relative to `bound`: a successor leaving the bound does not
/// count as a witness against maximality.
pub fn find_maximals(problem: &SearchProblem<'_>, budget: &Budget, exec: Execution) -> Result<Maximals> {
    let mut out = Maximals::default();
    find_maximals_visit(problem, budget, exec, |m| out.elements.push(m.clone()))
        .map(|examined| {
            out.examined = examined;
            out
        })
}

/// Like [`find_maximals`] but hands each maximal to `visit` in canonical
/// order instead of collecting them. Returns the examined-candidate count.
pub fn find_maximals_visit(
    problem: &SearchProblem<'_>,
    budget: &Budget,
    exec: Execution,
    mut visit: impl FnMut(&LatticeElement),
) -> Result<usize> {
    let ctx = problem.ctx;
    let bound = problem.bound.coords().ok_or(Error::BottomInput)?;
    ctx.check(bound)?;
    let positives = &problem.positives;

    // Negatives outside the bound can never be covered by anything below it.
    let negatives: Vec<&ObjectPoint> = problem
        .negatives
        .iter()
        .filter(|n| coords_cover(bound, n))
        .collect();

    let mut working: Vec<Vec<CoordinateValue>> = Vec::new();
    if positives.iter().any(|p| coords_cover(bound, p)) {
        working.push(bound.to_vec());
    }
    let mut examined = 0usize;

    for (k, neg) in negatives.iter().enumerate() {
        budget.check()?;
        let children: Vec<Result<Vec<Vec<CoordinateValue>>>> = exec.map(&working, |m| {
            budget.check()?;
            if !coords_cover(m, neg) {
                return Ok(vec![m.clone()]);
            }
            Ok(diff_point(m, neg)
                .into_iter()
                .filter_map(|c| match c {
                    LatticeElement::Tuple(c) => Some(c),
                    LatticeElement::Bottom => None,
                })
                .filter(|c| positives.iter().any(|p| coords_cover(c, p)))
                .collect())
        });
        let mut next = BTreeSet::new();
        for batch in children {
            let batch = batch?;
            examined += batch.len();
            next.extend(batch);
        }
        let processed = &negatives[..=k];
        working = exec.filter(next.into_iter().collect(), |c| {
            is_maximal_within(c, bound, processed)
        });
    }
    budget.check()?;
    for m in working {
        visit(&LatticeElement::Tuple(m));
    }
    Ok(examined)
}

/// Whether every successor of `m` covers at least one negative.
pub fn is_maximal(ctx: &LatticeContext, m: &LatticeElement, negatives: &[ObjectPoint]) -> Result<bool> {
    let coords = m.coords().ok_or(Error::BottomInput)?;
    ctx.check(coords)?;
    let top = ctx.top();
    let negatives: Vec<&ObjectPoint> = negatives.iter().collect();
    Ok(is_maximal_within(coords, top.coords().expect("top is a tuple"), &negatives))
}

/// Successors of `m` blocked by an excluded point, as (coordinate, atom)
/// pairs. A successor adds one atom on one coordinate, so it covers `e`
/// exactly when `m` misses `e` on that coordinate alone and the added atom is
/// `e`'s value there. Returns `None` when `m` already covers some point.
fn blocked_successors(
    coords: &[CoordinateValue],
    excluded: &[&ObjectPoint],
) -> Option<Vec<(usize, u32)>> {
    let mut blocked = Vec::new();
    for e in excluded {
        let mut miss = None;
        let mut misses = 0;
        for (i, (c, &v)) in coords.iter().zip(&e.0).enumerate() {
            if !c.contains_index(v) {
                misses += 1;
                if misses > 1 {
                    break;
                }
                miss = Some((i, v));
            }
        }
        match misses {
            0 => return None,
            1 => blocked.extend(miss),
            _ => {}
        }
    }
    blocked.sort_unstable();
    blocked.dedup();
    Some(blocked)
}

/// Calls `visit(coordinate, added_atom)` for each successor of `coords` that
/// stays below `bound`, in canonical order, until `visit` returns false.
fn for_each_bounded_step(
    coords: &[CoordinateValue],
    bound: &[CoordinateValue],
    mut visit: impl FnMut(usize, u32) -> bool,
) {
    for (i, (c, b)) in coords.iter().zip(bound).enumerate() {
        match (c, b) {
            (CoordinateValue::Symbols(s), CoordinateValue::Symbols(bs)) => {
                for v in bs.iter() {
                    if !s.contains(v) && !visit(i, v as u32) {
                        return;
                    }
                }
            }
            (CoordinateValue::Run { lo, hi }, CoordinateValue::Run { lo: blo, hi: bhi }) => {
                if lo > blo && !visit(i, lo - 1) {
                    return;
                }
                if hi < bhi && !visit(i, hi + 1) {
                    return;
                }
            }
            _ => {}
        }
    }
}

pub(crate) fn is_maximal_within(
    coords: &[CoordinateValue],
    bound: &[CoordinateValue],
    excluded: &[&ObjectPoint],
) -> bool {
    let Some(blocked) = blocked_successors(coords, excluded) else {
        return true;
    };
    let mut maximal = true;
    for_each_bounded_step(coords, bound, |i, v| {
        maximal = blocked.binary_search(&(i, v)).is_ok();
        maximal
    });
    maximal
}

fn extend(coords: &mut [CoordinateValue], i: usize, v: u32) {
    match &mut coords[i] {
        CoordinateValue::Symbols(s) => s.insert(v as usize),
        CoordinateValue::Run { lo, hi } => {
            if v < *lo {
                *lo = v;
            } else {
                *hi = v;
            }
        }
    }
}

/// Greedily adds the first unblocked atom until none is left, giving an
/// element maximal with respect to `excluded`.
fn climb(ctx: &LatticeContext, coords: &mut [CoordinateValue], excluded: &[&ObjectPoint]) -> bool {
    let top = ctx.top();
    let top = top.coords().expect("top is a tuple");
    let mut moved = false;
    loop {
        let Some(blocked) = blocked_successors(coords, excluded) else {
            return moved;
        };
        let mut step = None;
        for_each_bounded_step(coords, top, |i, v| {
            if blocked.binary_search(&(i, v)).is_ok() {
                true
            } else {
                step = Some((i, v));
                false
            }
        });
        match step {
            Some((i, v)) => {
                extend(coords, i, v);
                moved = true;
            }
            None => return moved,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Concretized {
    pub element: LatticeElement,
    /// True when the result may cover positives outside delta: either the
    /// strict exclusion set was infeasible, or the final climb against the
    /// negatives alone went past it.
    pub relaxed: bool,
}

/// A maximal element covering every atom of `delta` and
/// none of `negatives`.
///
/// Descends from top by element difference, each time removing the first
/// excluded atom still covered and following the first child that keeps all
/// of `delta`. Such a child always exists because `⊔delta` avoids the
/// exclusion set. The descent result is then climbed to maximality against
/// the exclusion set, and finally against the negatives alone.
pub fn concretize_representative(
    ctx: &LatticeContext,
    delta: &[ObjectPoint],
    other_positives: &[ObjectPoint],
    negatives: &[ObjectPoint],
) -> Result<Concretized> {
    if delta.is_empty() {
        return Err(Error::Infeasible);
    }
    let hull = delta
        .iter()
        .map(|p| ctx.point_element(p))
        .try_fold(LatticeElement::Bottom, |acc, a| acc.join(&a))?;
    let hull = hull.coords().ok_or(Error::Infeasible)?.to_vec();

    let negatives: Vec<&ObjectPoint> = negatives.iter().collect();
    if negatives.iter().any(|n| coords_cover(&hull, n)) {
        return Err(Error::Infeasible);
    }
    let strict: Vec<&ObjectPoint> = negatives
        .iter()
        .copied()
        .chain(other_positives.iter().filter(|p| !delta.contains(p)))
        .collect();
    let fallback = strict.iter().any(|e| coords_cover(&hull, e));
    let excluded: &[&ObjectPoint] = if fallback { &negatives } else { &strict };

    let top = ctx.top();
    let mut current = top.coords().expect("top is a tuple").to_vec();
    while let Some(e) = excluded.iter().find(|e| coords_cover(&current, e)) {
        current = diff_point(&current, e)
            .into_iter()
            .filter_map(|c| match c {
                LatticeElement::Tuple(c) => Some(c),
                LatticeElement::Bottom => None,
            })
            .find(|c| delta.iter().all(|p| coords_cover(c, p)))
            .expect("the hull of delta lies below some child");
    }
    climb(ctx, &mut current, excluded);
    let relaxed = climb(ctx, &mut current, &negatives) || fallback;
    Ok(Concretized {
        element: LatticeElement::Tuple(current),
        relaxed,
    })
}
