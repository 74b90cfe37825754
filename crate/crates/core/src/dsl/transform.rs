use super::ast::{Predicate, ValueSet};
use crate::error::{Error, Result};
use crate::lattice::{ComponentKind, CoordinateValue, LatticeContext, LatticeElement};

/// Translates a lattice element into a class-guarded conjunction, one
/// membership per constrained coordinate.
///
/// A categorical coordinate prints as `notin` its complement when the
/// complement is strictly smaller than the member set, otherwise as `in`.
/// Intervals print as `in`.
pub fn element_to_predicate(ctx: &LatticeContext, m: &LatticeElement) -> Result<Predicate> {
    let coords = m.coords().ok_or(Error::BottomInput)?;
    ctx.check(coords)?;
    let mut conjuncts = vec![Predicate::ClassIs(ctx.class_name.clone())];
    for (comp, c) in ctx.components.iter().zip(coords) {
        match (&comp.kind, c) {
            (ComponentKind::Categorical { domain }, CoordinateValue::Symbols(s)) => {
                if s.len() == domain.len() {
                    continue;
                }
                let (negated, picked): (bool, Vec<String>) = if domain.len() - s.len() < s.len() {
                    (
                        true,
                        (0..domain.len())
                            .filter(|&i| !s.contains(i))
                            .map(|i| domain[i].clone())
                            .collect(),
                    )
                } else {
                    (false, s.iter().map(|i| domain[i].clone()).collect())
                };
                conjuncts.push(Predicate::member(
                    &comp.attribute,
                    negated,
                    ValueSet::Symbols(picked),
                ));
            }
            (ComponentKind::Numeric { grid }, CoordinateValue::Run { lo, hi }) => {
                if *lo == 0 && *hi as usize == grid.atoms().len() - 1 {
                    continue;
                }
                conjuncts.push(Predicate::member(
                    &comp.attribute,
                    false,
                    ValueSet::Intervals(vec![grid.run_interval(*lo, *hi)]),
                ));
            }
            _ => return Err(Error::ContextMismatch("coordinate kinds differ".into())),
        }
    }
    Ok(Predicate::all_of(conjuncts))
}
