//! Symbolic set, interval and product lattices.
//!
//! A class lattice is the product of one component per attribute: the
//! powerset of a categorical domain, or the contiguous runs of a numeric
//! grid's atoms. Elements are stored coordinate-wise and the Hasse diagram is
//! never built, except by [`materialize`] for the oracle and the ablation
//! modes.
//!
//! The product keeps a single shared bottom; tuples never contain an empty
//! coordinate. An object maps to an *atom*: the tuple of its exact values,
//! which sits directly above bottom.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use smallvec::SmallVec;

use crate::dataset::{AttributeKind, ClassSchema, ObjectRecord, Value};
use crate::error::{Error, Result};
use crate::interval::Interval;

// ---------------------------------------------------------------------------
// Symbol sets

/// A subset of a categorical domain, as a bitset over symbol indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolSet(SmallVec<[u64; 2]>);

impl SymbolSet {
    fn words(domain_len: usize) -> usize {
        domain_len.div_ceil(64).max(1)
    }

    pub fn empty(domain_len: usize) -> Self {
        SymbolSet(SmallVec::from_elem(0, Self::words(domain_len)))
    }

    pub fn full(domain_len: usize) -> Self {
        let mut set = Self::empty(domain_len);
        for i in 0..domain_len {
            set.insert(i);
        }
        set
    }

    pub fn singleton(index: usize, domain_len: usize) -> Self {
        let mut set = Self::empty(domain_len);
        set.insert(index);
        set
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>, domain_len: usize) -> Self {
        let mut set = Self::empty(domain_len);
        for i in indices {
            set.insert(i);
        }
        set
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0
            .get(index / 64)
            .is_some_and(|w| w & (1 << (index % 64)) != 0)
    }

    pub fn insert(&mut self, index: usize) {
        self.0[index / 64] |= 1 << (index % 64);
    }

    pub fn remove(&mut self, index: usize) {
        self.0[index / 64] &= !(1 << (index % 64));
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &SymbolSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &SymbolSet) -> SymbolSet {
        SymbolSet(self.0.iter().zip(&other.0).map(|(a, b)| a | b).collect())
    }

    pub fn intersection(&self, other: &SymbolSet) -> SymbolSet {
        SymbolSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64).filter(move |b| w & (1 << b) != 0).map(move |b| wi * 64 + b)
        })
    }
}

impl fmt::Debug for SymbolSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

// ---------------------------------------------------------------------------
// Numeric grids

/// The interval lattice's preprocessing: the labeled values of one numeric
/// attribute, split into alternating open gaps and closed points.
///
/// With points g₁ < … < gₖ inside `[lower, upper]` the atoms are
/// `[lower,g₁) [g₁,g₁] (g₁,g₂) … [gₖ,gₖ] (gₖ,upper]`. A gap at either end is
/// dropped when its point coincides with the bound, since it would be empty.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericGrid {
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub points: Vec<f64>,
    atoms: Vec<Interval>,
}

impl NumericGrid {
    pub fn new(lower_bound: f64, upper_bound: f64, values: impl IntoIterator<Item = f64>) -> Self {
        let mut points: Vec<f64> = values
            .into_iter()
            .map(|v| v.clamp(lower_bound, upper_bound))
            .collect();
        points.sort_by(f64::total_cmp);
        points.dedup();

        let mut atoms = Vec::with_capacity(2 * points.len() + 1);
        let mut left = (lower_bound, true);
        for &p in &points {
            if p > left.0 {
                atoms.push(Interval {
                    lo: left.0,
                    lo_closed: left.1,
                    hi: p,
                    hi_closed: false,
                });
            }
            atoms.push(Interval::point(p));
            left = (p, false);
        }
        if upper_bound > left.0 || atoms.is_empty() {
            atoms.push(Interval {
                lo: left.0,
                lo_closed: left.1,
                hi: upper_bound,
                hi_closed: true,
            });
        }
        NumericGrid {
            lower_bound,
            upper_bound,
            points,
            atoms,
        }
    }

    pub fn atoms(&self) -> &[Interval] {
        &self.atoms
    }

    /// Index of the closed point atom `[v,v]`.
    pub fn point_atom(&self, v: f64) -> Option<usize> {
        self.atoms
            .iter()
            .position(|a| a.lo_closed && a.hi_closed && a.lo == v && a.hi == v)
    }

    /// The interval denoted by the run of atoms `lo..=hi`.
    pub fn run_interval(&self, lo: u32, hi: u32) -> Interval {
        let first = &self.atoms[lo as usize];
        let last = &self.atoms[hi as usize];
        Interval {
            lo: first.lo,
            lo_closed: first.lo_closed,
            hi: last.hi,
            hi_closed: last.hi_closed,
        }
    }
}

// ---------------------------------------------------------------------------
// Context

#[derive(Debug, Clone, PartialEq)]
pub enum ComponentKind {
    Categorical { domain: Vec<String> },
    Numeric { grid: NumericGrid },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub attribute: String,
    pub kind: ComponentKind,
}

impl Component {
    /// Number of atoms: domain symbols, or grid atoms.
    pub fn width(&self) -> usize {
        match &self.kind {
            ComponentKind::Categorical { domain } => domain.len(),
            ComponentKind::Numeric { grid } => grid.atoms.len(),
        }
    }

    pub fn top(&self) -> CoordinateValue {
        match &self.kind {
            ComponentKind::Categorical { domain } => {
                CoordinateValue::Symbols(SymbolSet::full(domain.len()))
            }
            ComponentKind::Numeric { grid } => CoordinateValue::Run {
                lo: 0,
                hi: grid.atoms.len() as u32 - 1,
            },
        }
    }

    /// Size of the component lattice, bottom included.
    pub fn size(&self) -> BigUint {
        match &self.kind {
            ComponentKind::Categorical { domain } => BigUint::one() << domain.len(),
            ComponentKind::Numeric { grid } => {
                let t = BigUint::from(grid.atoms.len());
                &t * (&t + 1u32) / 2u32 + 1u32
            }
        }
    }

    fn coordinate_of(&self, value: &Value) -> Result<u32> {
        match (&self.kind, value) {
            (ComponentKind::Categorical { domain }, Value::Symbol(s)) => domain
                .iter()
                .position(|d| d == s)
                .map(|i| i as u32)
                .ok_or_else(|| Error::TypeMismatch {
                    attribute: self.attribute.clone(),
                    message: format!("`{s}` is not in the domain"),
                }),
            (ComponentKind::Numeric { grid }, Value::Number(v)) => grid
                .point_atom(*v)
                .map(|i| i as u32)
                .ok_or_else(|| Error::NotOnGrid {
                    attribute: self.attribute.clone(),
                    value: *v,
                }),
            _ => Err(Error::TypeMismatch {
                attribute: self.attribute.clone(),
                message: format!("value {value} has the wrong kind"),
            }),
        }
    }
}

/// One class lattice: a component per schema attribute, in schema order.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeContext {
    pub class_name: String,
    pub components: Vec<Component>,
}

/// Builds the class lattice. Numeric grids hold the distinct values of the
/// labeled objects (positives and negatives) of this class.
pub fn build_context(schema: &ClassSchema, labeled: &[&ObjectRecord]) -> LatticeContext {
    let components = schema
        .attributes
        .iter()
        .map(|attr| {
            let kind = match &attr.kind {
                AttributeKind::Categorical { domain } => ComponentKind::Categorical {
                    domain: domain.clone(),
                },
                AttributeKind::Numeric {
                    lower_bound,
                    upper_bound,
                } => ComponentKind::Numeric {
                    grid: NumericGrid::new(
                        *lower_bound,
                        *upper_bound,
                        labeled
                            .iter()
                            .filter(|o| o.class_name == schema.class_name)
                            .filter_map(|o| o.value(&attr.name).and_then(Value::as_number)),
                    ),
                },
            };
            Component {
                attribute: attr.name.clone(),
                kind,
            }
        })
        .collect();
    LatticeContext {
        class_name: schema.class_name.clone(),
        components,
    }
}

/// An object's exact position in a context: per coordinate, a symbol index
/// or a grid point-atom index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjectPoint(pub Vec<u32>);

// ---------------------------------------------------------------------------
// Elements

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoordinateValue {
    Symbols(SymbolSet),
    /// Contiguous run of grid atoms `lo..=hi`.
    Run { lo: u32, hi: u32 },
}

impl CoordinateValue {
    pub fn contains_index(&self, index: u32) -> bool {
        match self {
            CoordinateValue::Symbols(s) => s.contains(index as usize),
            CoordinateValue::Run { lo, hi } => *lo <= index && index <= *hi,
        }
    }

    fn leq(&self, other: &CoordinateValue) -> Option<bool> {
        match (self, other) {
            (CoordinateValue::Symbols(a), CoordinateValue::Symbols(b)) => Some(a.is_subset(b)),
            (CoordinateValue::Run { lo: al, hi: ah }, CoordinateValue::Run { lo: bl, hi: bh }) => {
                Some(bl <= al && ah <= bh)
            }
            _ => None,
        }
    }

    fn single_index(&self) -> Option<u32> {
        match self {
            CoordinateValue::Symbols(s) if s.len() == 1 => s.iter().next().map(|i| i as u32),
            CoordinateValue::Run { lo, hi } if lo == hi => Some(*lo),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LatticeElement {
    Bottom,
    Tuple(Vec<CoordinateValue>),
}

impl LatticeElement {
    pub fn coords(&self) -> Option<&[CoordinateValue]> {
        match self {
            LatticeElement::Bottom => None,
            LatticeElement::Tuple(c) => Some(c),
        }
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, LatticeElement::Bottom)
    }

    fn check_arity(a: &[CoordinateValue], b: &[CoordinateValue]) -> Result<()> {
        if a.len() != b.len() {
            return Err(Error::Arity {
                expected: a.len(),
                found: b.len(),
            });
        }
        Ok(())
    }

    /// Bottom is below everything; tuples compare coordinate-wise.
    pub fn leq(&self, other: &LatticeElement) -> Result<bool> {
        match (self, other) {
            (LatticeElement::Bottom, _) => Ok(true),
            (_, LatticeElement::Bottom) => Ok(false),
            (LatticeElement::Tuple(a), LatticeElement::Tuple(b)) => {
                Self::check_arity(a, b)?;
                for (x, y) in a.iter().zip(b) {
                    match x.leq(y) {
                        Some(true) => {}
                        Some(false) => return Ok(false),
                        None => return Err(mismatch()),
                    }
                }
                Ok(true)
            }
        }
    }

    pub fn join(&self, other: &LatticeElement) -> Result<LatticeElement> {
        match (self, other) {
            (LatticeElement::Bottom, x) | (x, LatticeElement::Bottom) => Ok(x.clone()),
            (LatticeElement::Tuple(a), LatticeElement::Tuple(b)) => {
                Self::check_arity(a, b)?;
                a.iter()
                    .zip(b)
                    .map(|(x, y)| match (x, y) {
                        (CoordinateValue::Symbols(p), CoordinateValue::Symbols(q)) => {
                            Ok(CoordinateValue::Symbols(p.union(q)))
                        }
                        (
                            CoordinateValue::Run { lo: al, hi: ah },
                            CoordinateValue::Run { lo: bl, hi: bh },
                        ) => Ok(CoordinateValue::Run {
                            lo: *al.min(bl),
                            hi: *ah.max(bh),
                        }),
                        _ => Err(mismatch()),
                    })
                    .collect::<Result<_>>()
                    .map(LatticeElement::Tuple)
            }
        }
    }

    /// Coordinate-wise intersection; bottom as soon as any coordinate
    /// becomes empty.
    pub fn meet(&self, other: &LatticeElement) -> Result<LatticeElement> {
        match (self, other) {
            (LatticeElement::Bottom, _) | (_, LatticeElement::Bottom) => Ok(LatticeElement::Bottom),
            (LatticeElement::Tuple(a), LatticeElement::Tuple(b)) => {
                Self::check_arity(a, b)?;
                let mut coords = Vec::with_capacity(a.len());
                for (x, y) in a.iter().zip(b) {
                    let c = match (x, y) {
                        (CoordinateValue::Symbols(p), CoordinateValue::Symbols(q)) => {
                            let s = p.intersection(q);
                            if s.is_empty() {
                                return Ok(LatticeElement::Bottom);
                            }
                            CoordinateValue::Symbols(s)
                        }
                        (
                            CoordinateValue::Run { lo: al, hi: ah },
                            CoordinateValue::Run { lo: bl, hi: bh },
                        ) => {
                            let (lo, hi) = (*al.max(bl), *ah.min(bh));
                            if lo > hi {
                                return Ok(LatticeElement::Bottom);
                            }
                            CoordinateValue::Run { lo, hi }
                        }
                        _ => return Err(mismatch()),
                    };
                    coords.push(c);
                }
                Ok(LatticeElement::Tuple(coords))
            }
        }
    }

    /// Whether this element lies above the atom of `point`.
    pub fn covers(&self, point: &ObjectPoint) -> bool {
        match self {
            LatticeElement::Bottom => false,
            LatticeElement::Tuple(coords) => coords_cover(coords, point),
        }
    }

    pub fn covers_any<'p>(&self, points: impl IntoIterator<Item = &'p ObjectPoint>) -> bool {
        points.into_iter().any(|p| self.covers(p))
    }
}

pub(crate) fn coords_cover(coords: &[CoordinateValue], point: &ObjectPoint) -> bool {
    coords
        .iter()
        .zip(&point.0)
        .all(|(c, &i)| c.contains_index(i))
}

fn mismatch() -> Error {
    Error::ContextMismatch("coordinate kinds differ".into())
}

impl LatticeContext {
    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn top(&self) -> LatticeElement {
        LatticeElement::Tuple(self.components.iter().map(Component::top).collect())
    }

    pub fn point_of(&self, object: &ObjectRecord) -> Result<ObjectPoint> {
        self.components
            .iter()
            .map(|c| {
                let value = object.value(&c.attribute).ok_or_else(|| Error::UnknownAttribute {
                    class: self.class_name.clone(),
                    attribute: c.attribute.clone(),
                })?;
                c.coordinate_of(value)
            })
            .collect::<Result<_>>()
            .map(ObjectPoint)
    }

    pub fn point_element(&self, point: &ObjectPoint) -> LatticeElement {
        LatticeElement::Tuple(
            self.components
                .iter()
                .zip(&point.0)
                .map(|(c, &i)| match &c.kind {
                    ComponentKind::Categorical { domain } => {
                        CoordinateValue::Symbols(SymbolSet::singleton(i as usize, domain.len()))
                    }
                    ComponentKind::Numeric { .. } => CoordinateValue::Run { lo: i, hi: i },
                })
                .collect(),
        )
    }

    /// The atom of `object`: singleton symbols and degenerate closed
    /// intervals. Fails when a numeric value is not a grid point, i.e. the
    /// object was not among the labeled objects the grid was built from.
    pub fn atom_of(&self, object: &ObjectRecord) -> Result<LatticeElement> {
        Ok(self.point_element(&self.point_of(object)?))
    }

    /// Inverse of [`point_element`](Self::point_element) for atoms.
    pub fn as_point(&self, element: &LatticeElement) -> Result<ObjectPoint> {
        let coords = element.coords().ok_or(Error::NotAnAtom)?;
        self.check(coords)?;
        coords
            .iter()
            .map(|c| c.single_index().ok_or(Error::NotAnAtom))
            .collect::<Result<_>>()
            .map(ObjectPoint)
    }

    /// Verifies that `coords` is a valid tuple of this context.
    pub fn check(&self, coords: &[CoordinateValue]) -> Result<()> {
        if coords.len() != self.arity() {
            return Err(Error::Arity {
                expected: self.arity(),
                found: coords.len(),
            });
        }
        for (comp, c) in self.components.iter().zip(coords) {
            let ok = match (&comp.kind, c) {
                (ComponentKind::Categorical { domain }, CoordinateValue::Symbols(s)) => {
                    !s.is_empty() && s.iter().all(|i| i < domain.len())
                }
                (ComponentKind::Numeric { grid }, CoordinateValue::Run { lo, hi }) => {
                    lo <= hi && (*hi as usize) < grid.atoms.len()
                }
                _ => false,
            };
            if !ok {
                return Err(Error::ContextMismatch(format!(
                    "invalid coordinate for attribute `{}`",
                    comp.attribute
                )));
            }
        }
        Ok(())
    }

    /// Direct successors: every single-coordinate minimal increase, in
    /// coordinate order. Bottom is rejected; its successors are the whole
    /// atom set.
    pub fn successors(&self, element: &LatticeElement) -> Result<Vec<LatticeElement>> {
        let coords = element.coords().ok_or(Error::BottomInput)?;
        self.check(coords)?;
        let mut out = Vec::new();
        for_each_successor(self, coords, |i, c| {
            let mut next = coords.to_vec();
            next[i] = c;
            out.push(LatticeElement::Tuple(next));
            true
        });
        Ok(out)
    }

    /// Direct predecessors of a tuple. The atoms' predecessor (bottom) is
    /// reported as `LatticeElement::Bottom`.
    pub fn predecessors(&self, element: &LatticeElement) -> Result<Vec<LatticeElement>> {
        let coords = element.coords().ok_or(Error::BottomInput)?;
        self.check(coords)?;
        let mut out = Vec::new();
        let mut is_atom = true;
        for (i, c) in coords.iter().enumerate() {
            match c {
                CoordinateValue::Symbols(s) => {
                    if s.len() > 1 {
                        is_atom = false;
                        for x in s.iter() {
                            let mut smaller = s.clone();
                            smaller.remove(x);
                            let mut next = coords.to_vec();
                            next[i] = CoordinateValue::Symbols(smaller);
                            out.push(LatticeElement::Tuple(next));
                        }
                    }
                }
                CoordinateValue::Run { lo, hi } => {
                    if lo < hi {
                        is_atom = false;
                        for (l, h) in [(*lo + 1, *hi), (*lo, *hi - 1)] {
                            let mut next = coords.to_vec();
                            next[i] = CoordinateValue::Run { lo: l, hi: h };
                            out.push(LatticeElement::Tuple(next));
                        }
                    }
                }
            }
        }
        if is_atom {
            out.push(LatticeElement::Bottom);
        }
        Ok(out)
    }

    /// Element difference `a ∖ b` for an atom `b`.
    ///
    /// Each child replaces one coordinate of `a` by a piece of `aᵢ ∖ bᵢ`:
    /// the set difference for symbols, or the runs left and right of `b`'s
    /// point for intervals (open at that point). When `b ≰ a` there is
    /// nothing to remove and the result is `[a]`.
    pub fn element_diff(
        &self,
        a: &LatticeElement,
        b: &LatticeElement,
    ) -> Result<Vec<LatticeElement>> {
        let coords = a.coords().ok_or(Error::BottomInput)?;
        self.check(coords)?;
        let point = self.as_point(b)?;
        Ok(diff_point(coords, &point))
    }

    /// Number of elements, bottom included:
    /// `1 + Π (|component| − 1)`.
    pub fn lattice_size(&self) -> BigUint {
        self.components
            .iter()
            .fold(BigUint::one(), |acc, c| acc * (c.size() - 1u32))
            + 1u32
    }

    /// Canonical debug text, e.g. `<{NoStyle,Stride}, (22,100]>`.
    pub fn display(&self, element: &LatticeElement) -> String {
        let Some(coords) = element.coords() else {
            return "⊥".to_string();
        };
        let mut out = String::from("<");
        for (i, (comp, c)) in self.components.iter().zip(coords).enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            match (&comp.kind, c) {
                (ComponentKind::Categorical { domain }, CoordinateValue::Symbols(s)) => {
                    out.push('{');
                    let names: Vec<&str> = s.iter().map(|i| domain[i].as_str()).collect();
                    out.push_str(&names.join(","));
                    out.push('}');
                }
                (ComponentKind::Numeric { grid }, CoordinateValue::Run { lo, hi }) => {
                    grid.run_interval(*lo, *hi)
                        .fmt_compact(&mut out)
                        .expect("writing to a String cannot fail");
                }
                _ => out.push('?'),
            }
        }
        out.push('>');
        out
    }
}

/// Calls `visit(coordinate, new_value)` for every direct successor of the
/// tuple `coords`, in canonical order, until `visit` returns false.
pub(crate) fn for_each_successor(
    ctx: &LatticeContext,
    coords: &[CoordinateValue],
    mut visit: impl FnMut(usize, CoordinateValue) -> bool,
) {
    for (i, (comp, c)) in ctx.components.iter().zip(coords).enumerate() {
        match c {
            CoordinateValue::Symbols(s) => {
                for x in 0..comp.width() {
                    if !s.contains(x) {
                        let mut bigger = s.clone();
                        bigger.insert(x);
                        if !visit(i, CoordinateValue::Symbols(bigger)) {
                            return;
                        }
                    }
                }
            }
            CoordinateValue::Run { lo, hi } => {
                if *lo > 0 && !visit(i, CoordinateValue::Run { lo: lo - 1, hi: *hi }) {
                    return;
                }
                if (*hi as usize) + 1 < comp.width()
                    && !visit(i, CoordinateValue::Run { lo: *lo, hi: hi + 1 })
                {
                    return;
                }
            }
        }
    }
}

pub(crate) fn diff_point(coords: &[CoordinateValue], point: &ObjectPoint) -> Vec<LatticeElement> {
    if !coords_cover(coords, point) {
        return vec![LatticeElement::Tuple(coords.to_vec())];
    }
    let mut out = Vec::new();
    for (i, (c, &p)) in coords.iter().zip(&point.0).enumerate() {
        let mut push = |value: CoordinateValue| {
            let mut next = coords.to_vec();
            next[i] = value;
            out.push(LatticeElement::Tuple(next));
        };
        match c {
            CoordinateValue::Symbols(s) => {
                let mut rest = s.clone();
                rest.remove(p as usize);
                if !rest.is_empty() {
                    push(CoordinateValue::Symbols(rest));
                }
            }
            CoordinateValue::Run { lo, hi } => {
                if *lo < p {
                    push(CoordinateValue::Run { lo: *lo, hi: p - 1 });
                }
                if p < *hi {
                    push(CoordinateValue::Run { lo: p + 1, hi: *hi });
                }
            }
        }
    }
    out
}

/// Enumerates every element of the context (bottom first, then tuples in
/// canonical order). Refuses contexts larger than `cap`.
pub fn materialize(ctx: &LatticeContext, cap: u64) -> Result<Vec<LatticeElement>> {
    let size = ctx.lattice_size();
    if size > BigUint::from(cap) {
        return Err(Error::ContextTooLarge {
            class: ctx.class_name.clone(),
            size: size.to_string(),
            cap,
        });
    }
    let per_component: Vec<Vec<CoordinateValue>> = ctx
        .components
        .iter()
        .map(|comp| match &comp.kind {
            ComponentKind::Categorical { domain } => {
                let n = domain.len();
                // n < 64 holds here because 2^n − 1 ≤ cap.
                (1u64..(1u64 << n))
                    .map(|mask| {
                        CoordinateValue::Symbols(SymbolSet::from_indices(
                            (0..n).filter(|b| mask & (1 << b) != 0),
                            n,
                        ))
                    })
                    .collect()
            }
            ComponentKind::Numeric { grid } => {
                let t = grid.atoms.len() as u32;
                (0..t)
                    .flat_map(|lo| (lo..t).map(move |hi| CoordinateValue::Run { lo, hi }))
                    .collect()
            }
        })
        .collect();

    let total = size.to_usize().unwrap_or(usize::MAX);
    let mut out = Vec::with_capacity(total);
    out.push(LatticeElement::Bottom);
    let mut odometer = vec![0usize; per_component.len()];
    loop {
        out.push(LatticeElement::Tuple(
            odometer
                .iter()
                .zip(&per_component)
                .map(|(&i, values)| values[i].clone())
                .collect(),
        ));
        let mut k = per_component.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            odometer[k] += 1;
            if odometer[k] < per_component[k].len() {
                break;
            }
            odometer[k] = 0;
        }
    }
}

/// Partial-order comparison, `None` when incomparable.
pub fn compare(a: &LatticeElement, b: &LatticeElement) -> Result<Option<Ordering>> {
    Ok(match (a.leq(b)?, b.leq(a)?) {
        (true, true) => Some(Ordering::Equal),
        (true, false) => Some(Ordering::Less),
        (false, true) => Some(Ordering::Greater),
        (false, false) => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn motivating_ctx() -> LatticeContext {
        let ds = fixtures::motivating_dataset();
        let labeled: Vec<&ObjectRecord> = ds.objects.iter().collect();
        build_context(ds.schema("Person").unwrap(), &labeled)
    }

    /// N=0, S=1, L=2; grid atoms as in [`motivating_ctx`].
    fn el(ctx: &LatticeContext, syms: &[usize], run: (u32, u32)) -> LatticeElement {
        let _ = ctx;
        LatticeElement::Tuple(vec![
            CoordinateValue::Symbols(SymbolSet::from_indices(syms.iter().copied(), 3)),
            CoordinateValue::Run {
                lo: run.0,
                hi: run.1,
            },
        ])
    }

    fn grid(ctx: &LatticeContext) -> &NumericGrid {
        match &ctx.components[1].kind {
            ComponentKind::Numeric { grid } => grid,
            _ => unreachable!(),
        }
    }

    #[test]
    fn motivating_grid_atoms() {
        let ctx = motivating_ctx();
        let g = grid(&ctx);
        assert_eq!(g.points, vec![19.0, 22.0, 24.0, 31.0, 42.0]);
        let printed: Vec<String> = g
            .atoms()
            .iter()
            .map(|a| {
                let mut s = String::new();
                a.fmt_compact(&mut s).unwrap();
                s
            })
            .collect();
        assert_eq!(
            printed,
            [
                "[0,19)", "[19,19]", "(19,22)", "[22,22]", "(22,24)", "[24,24]", "(24,31)",
                "[31,31]", "(31,42)", "[42,42]", "(42,100]"
            ]
        );
    }

    #[test]
    fn single_point_grid_has_three_atoms() {
        let g = NumericGrid::new(0.0, 100.0, [24.0]);
        assert_eq!(
            g.atoms(),
            &[
                Interval {
                    lo: 0.0,
                    lo_closed: true,
                    hi: 24.0,
                    hi_closed: false
                },
                Interval::point(24.0),
                Interval {
                    lo: 24.0,
                    lo_closed: false,
                    hi: 100.0,
                    hi_closed: true
                },
            ]
        );
        let empty = NumericGrid::new(0.0, 100.0, []);
        assert_eq!(empty.atoms(), &[Interval::closed(0.0, 100.0)]);
        let at_bound = NumericGrid::new(0.0, 100.0, [0.0, 100.0]);
        assert_eq!(at_bound.atoms().len(), 3);
    }

    #[test]
    fn atoms_of_objects() {
        let ctx = motivating_ctx();
        let ds = fixtures::motivating_dataset();
        let pi7 = ctx.atom_of(ds.object("pi7").unwrap()).unwrap();
        assert_eq!(ctx.display(&pi7), "<{NoStyle}, [24,24]>");
        let pi6 = ctx.atom_of(ds.object("pi6").unwrap()).unwrap();
        assert_eq!(ctx.display(&pi6), "<{Logo}, [19,19]>");
        assert!(ctx.predecessors(&pi7).unwrap() == vec![LatticeElement::Bottom]);

        let mut neutral = ds.object("pi7").unwrap().clone();
        neutral.attributes.insert("Age".into(), Value::Number(23.0));
        assert!(matches!(ctx.atom_of(&neutral), Err(Error::NotOnGrid { .. })));
    }

    #[test]
    fn order_examples() {
        let ctx = motivating_ctx();
        // [24,24] is atom 5; [22,22] atom 3; (22,100] = atoms 4..=10.
        let logo24 = el(&ctx, &[2], (5, 5));
        assert!(logo24.leq(&ctx.top()).unwrap());
        let n22 = el(&ctx, &[0], (3, 3));
        let ns_open = el(&ctx, &[0, 1], (4, 10));
        assert_eq!(ctx.display(&ns_open), "<{NoStyle,Stride}, (22,100]>");
        assert!(!n22.leq(&ns_open).unwrap());
        assert!(ns_open.leq(&ns_open).unwrap());
        assert!(LatticeElement::Bottom.leq(&n22).unwrap());
        assert!(!n22.leq(&LatticeElement::Bottom).unwrap());
        let short = LatticeElement::Tuple(vec![CoordinateValue::Run { lo: 0, hi: 0 }]);
        assert!(matches!(short.leq(&n22), Err(Error::Arity { .. })));
    }

    #[test]
    fn join_and_meet() {
        let ctx = motivating_ctx();
        let n24 = el(&ctx, &[0], (5, 5));
        let s42 = el(&ctx, &[1], (9, 9));
        let j = n24.join(&s42).unwrap();
        assert_eq!(ctx.display(&j), "<{NoStyle,Stride}, [24,42]>");
        assert_eq!(n24.meet(&s42).unwrap(), LatticeElement::Bottom);
        assert_eq!(n24.join(&LatticeElement::Bottom).unwrap(), n24);
        assert_eq!(n24.meet(&LatticeElement::Bottom).unwrap(), LatticeElement::Bottom);
        let wide = el(&ctx, &[0, 1], (0, 10));
        assert_eq!(n24.meet(&wide).unwrap(), n24);
    }

    #[test]
    fn successor_examples() {
        let ctx = motivating_ctx();
        let ns24 = el(&ctx, &[0, 1], (5, 5));
        let succ: Vec<String> = ctx
            .successors(&ns24)
            .unwrap()
            .iter()
            .map(|e| ctx.display(e))
            .collect();
        assert_eq!(
            succ,
            [
                "<{NoStyle,Stride,Logo}, [24,24]>",
                "<{NoStyle,Stride}, (22,24]>",
                "<{NoStyle,Stride}, [24,31)>"
            ]
        );
        assert!(ctx.successors(&ctx.top()).unwrap().is_empty());
        assert_eq!(ctx.successors(&LatticeElement::Bottom), Err(Error::BottomInput));
    }

    #[test]
    fn element_difference_example() {
        let schema = ClassSchema::new(
            "Person",
            vec![
                crate::dataset::AttributeSchema::categorical("TopStyle", ["NoStyle", "Stride", "Logo"]),
                crate::dataset::AttributeSchema::numeric("Age", 0.0, 100.0),
            ],
        )
        .unwrap();
        let obj = ObjectRecord {
            id: "pi3".into(),
            class_name: "Person".into(),
            region: Default::default(),
            attributes: [
                ("TopStyle".to_string(), Value::Symbol("Logo".into())),
                ("Age".to_string(), Value::Number(24.0)),
            ]
            .into_iter()
            .collect(),
        };
        let ctx = build_context(&schema, &[&obj]);
        let b = ctx.atom_of(&obj).unwrap();
        let diff: Vec<String> = ctx
            .element_diff(&ctx.top(), &b)
            .unwrap()
            .iter()
            .map(|e| ctx.display(e))
            .collect();
        assert_eq!(
            diff,
            [
                "<{NoStyle,Stride}, [0,100]>",
                "<{NoStyle,Stride,Logo}, [0,24)>",
                "<{NoStyle,Stride,Logo}, (24,100]>"
            ]
        );
        assert!(ctx.element_diff(&b, &b).unwrap().is_empty());
        let other = LatticeElement::Tuple(vec![
            CoordinateValue::Symbols(SymbolSet::singleton(0, 3)),
            CoordinateValue::Run { lo: 0, hi: 0 },
        ]);
        assert_eq!(ctx.element_diff(&other, &b).unwrap(), vec![other.clone()]);
        assert_eq!(ctx.element_diff(&other, &ctx.top()), Err(Error::NotAnAtom));
        assert_eq!(
            ctx.element_diff(&LatticeElement::Bottom, &b),
            Err(Error::BottomInput)
        );
    }

    #[test]
    fn sizes() {
        let vehicle = LatticeContext {
            class_name: "Vehicle".into(),
            components: (0..2)
                .map(|i| Component {
                    attribute: format!("A{i}"),
                    kind: ComponentKind::Categorical {
                        domain: (0..10).map(|s| format!("v{s}")).collect(),
                    },
                })
                .collect(),
        };
        assert_eq!(vehicle.lattice_size(), BigUint::from(1_046_530u32));

        let one = LatticeContext {
            class_name: "T".into(),
            components: vec![Component {
                attribute: "TopStyle".into(),
                kind: ComponentKind::Categorical {
                    domain: vec!["N".into(), "S".into(), "L".into()],
                },
            }],
        };
        assert_eq!(one.lattice_size(), BigUint::from(8u32));

        let interval = LatticeContext {
            class_name: "T".into(),
            components: vec![Component {
                attribute: "Age".into(),
                kind: ComponentKind::Numeric {
                    grid: NumericGrid::new(0.0, 100.0, [24.0]),
                },
            }],
        };
        // Oracle: contiguous runs of 3 atoms plus bottom.
        let runs = (0..3).flat_map(|lo| (lo..3).map(move |hi| (lo, hi))).count();
        assert_eq!(interval.lattice_size(), BigUint::from(runs + 1));
        assert_eq!(interval.lattice_size(), BigUint::from(7u32));
    }

    #[test]
    fn materialize_respects_cap() {
        let ctx = motivating_ctx();
        let all = materialize(&ctx, 1_000).unwrap();
        assert_eq!(BigUint::from(all.len()), ctx.lattice_size());
        assert!(matches!(materialize(&ctx, 10), Err(Error::ContextTooLarge { .. })));
    }
}
