#![allow(dead_code)]

use std::collections::BTreeSet;

use lattice_select::lattice::{
    Component, ComponentKind, CoordinateValue, LatticeContext, LatticeElement, NumericGrid,
    ObjectPoint, SymbolSet,
};
use rand::seq::SliceRandom;
use rand::Rng;

/// Up to three components; categorical domains and numeric grids of at most
/// four values each.
pub fn random_context(rng: &mut impl Rng) -> LatticeContext {
    let n = rng.gen_range(1..=3);
    let components = (0..n)
        .map(|i| {
            let kind = if rng.gen_bool(0.5) {
                let size = rng.gen_range(1..=4);
                ComponentKind::Categorical {
                    domain: (0..size).map(|v| format!("s{v}")).collect(),
                }
            } else {
                let mut values: Vec<f64> = (1..10).map(f64::from).collect();
                values.shuffle(rng);
                let k = rng.gen_range(0..=2);
                ComponentKind::Numeric {
                    grid: NumericGrid::new(0.0, 10.0, values[..k].iter().copied()),
                }
            };
            Component {
                attribute: format!("a{i}"),
                kind,
            }
        })
        .collect();
    LatticeContext {
        class_name: "T".into(),
        components,
    }
}

pub fn all_atoms(ctx: &LatticeContext) -> Vec<ObjectPoint> {
    let mut out = vec![Vec::new()];
    for c in &ctx.components {
        let w = c.width() as u32;
        out = out
            .into_iter()
            .flat_map(|p: Vec<u32>| {
                (0..w).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out.into_iter().map(ObjectPoint).collect()
}

/// Disjoint positive and negative atoms: 1..=4 positives, 0..=4 negatives.
pub fn random_labels(rng: &mut impl Rng, ctx: &LatticeContext) -> (Vec<ObjectPoint>, Vec<ObjectPoint>) {
    let mut atoms = all_atoms(ctx);
    atoms.shuffle(rng);
    let pos = rng.gen_range(1..=4.min(atoms.len()));
    let neg = rng.gen_range(0..=4.min(atoms.len() - pos));
    let negatives = atoms[pos..pos + neg].to_vec();
    atoms.truncate(pos);
    (atoms, negatives)
}

pub fn random_element(rng: &mut impl Rng, ctx: &LatticeContext) -> LatticeElement {
    if rng.gen_ratio(1, 20) {
        return LatticeElement::Bottom;
    }
    LatticeElement::Tuple(
        ctx.components
            .iter()
            .map(|c| match &c.kind {
                ComponentKind::Categorical { domain } => {
                    let n = domain.len();
                    let mut s = SymbolSet::empty(n);
                    while s.is_empty() {
                        for v in 0..n {
                            if rng.gen_bool(0.5) {
                                s.insert(v);
                            }
                        }
                    }
                    CoordinateValue::Symbols(s)
                }
                ComponentKind::Numeric { grid } => {
                    let t = grid.atoms().len() as u32;
                    let a = rng.gen_range(0..t);
                    let b = rng.gen_range(0..t);
                    CoordinateValue::Run {
                        lo: a.min(b),
                        hi: a.max(b),
                    }
                }
            })
            .collect(),
    )
}

/// Sum of coordinate sizes; the product order is graded by it.
pub fn rank(e: &LatticeElement) -> usize {
    match e {
        LatticeElement::Bottom => 0,
        LatticeElement::Tuple(cs) => cs
            .iter()
            .map(|c| match c {
                CoordinateValue::Symbols(s) => s.len(),
                CoordinateValue::Run { lo, hi } => (hi - lo + 1) as usize,
            })
            .sum(),
    }
}

/// Brute-force maximal set of {x ≤ bound | some positive ≤ x, no negative ≤ x}.
pub fn brute_maximals(
    all: &[LatticeElement],
    bound: &LatticeElement,
    pos: &[ObjectPoint],
    neg: &[ObjectPoint],
) -> Vec<LatticeElement> {
    let feasible: Vec<&LatticeElement> = all
        .iter()
        .filter(|x| !x.is_bottom() && x.leq(bound).unwrap())
        .filter(|x| x.covers_any(pos) && !x.covers_any(neg))
        .collect();
    let mut out: Vec<LatticeElement> = feasible
        .iter()
        .filter(|x| !feasible.iter().any(|y| y != *x && x.leq(y).unwrap()))
        .map(|x| (*x).clone())
        .collect();
    out.sort();
    out
}

pub fn inclusion_maximal(sets: impl IntoIterator<Item = Vec<usize>>) -> BTreeSet<Vec<usize>> {
    let sets: BTreeSet<Vec<usize>> = sets.into_iter().filter(|s| !s.is_empty()).collect();
    sets.iter()
        .filter(|s| {
            !sets
                .iter()
                .any(|t| t != *s && s.iter().all(|x| t.contains(x)))
        })
        .cloned()
        .collect()
}
