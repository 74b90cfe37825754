//! Predicate synthesis: per class, representatives, minimum cover, then one
//! concretized maximal per chosen representative.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::cover::{min_cover, CoverInstance};
use crate::dataset::{
    build_specification, partition_by_class, ClassLabels, Dataset, EditRequest, ObjectRecord,
    Specification,
};
use crate::dsl::{
    ast_metrics, check_correctness, element_to_predicate, run_program, Predicate, Program,
    ProgramMetrics,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::lattice::{build_context, LatticeContext, LatticeElement, ObjectPoint};
use crate::representatives::{coverage, find_representatives, sort_candidates, Antichain, LabeledPoint};
use crate::search::{concretize_representative, find_maximals, is_maximal_within, SearchProblem};

pub const DEFAULT_SIZE_CAP: u64 = 1_000_000;
pub const SIZE_CAP_ENV: &str = "LATTICE_SELECT_SIZE_CAP";

/// Materialization cap: `LATTICE_SELECT_SIZE_CAP` when set and valid,
/// otherwise [`DEFAULT_SIZE_CAP`].
pub fn default_size_cap() -> u64 {
    std::env::var(SIZE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_SIZE_CAP)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SynthesisMode {
    /// Element-difference search and representatives.
    #[default]
    Full,
    /// Breadth-first descent over the materialized lattice instead of
    /// element difference.
    NoDifference,
    /// Every maximal's coverage set goes to the cover solver.
    NoAbstraction,
    /// Both replacements.
    Naive,
}

impl SynthesisMode {
    pub const ALL: [SynthesisMode; 4] = [
        SynthesisMode::Full,
        SynthesisMode::NoDifference,
        SynthesisMode::NoAbstraction,
        SynthesisMode::Naive,
    ];

    /// Command-line spelling.
    pub fn name(self) -> &'static str {
        match self {
            SynthesisMode::Full => "full",
            SynthesisMode::NoDifference => "no-diff",
            SynthesisMode::NoAbstraction => "no-abstraction",
            SynthesisMode::Naive => "naive",
        }
    }

    pub fn materializes(self) -> bool {
        matches!(self, SynthesisMode::NoDifference | SynthesisMode::Naive)
    }
}

impl fmt::Display for SynthesisMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SynthesisMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "full" => Ok(SynthesisMode::Full),
            "no-diff" | "no_diff" | "no-difference" | "no_difference" => Ok(SynthesisMode::NoDifference),
            "no-abstraction" | "no_abstraction" => Ok(SynthesisMode::NoAbstraction),
            "naive" => Ok(SynthesisMode::Naive),
            _ => Err(format!(
                "unknown mode `{s}` (expected full, no-diff, no-abstraction or naive)"
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SynthesisOptions {
    pub mode: SynthesisMode,
    pub budget: Budget,
    pub size_cap: u64,
    pub execution: Execution,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions {
            mode: SynthesisMode::Full,
            budget: Budget::unlimited(),
            size_cap: default_size_cap(),
            execution: Execution::default(),
        }
    }
}

impl SynthesisOptions {
    pub fn with_mode(mode: SynthesisMode) -> Self {
        SynthesisOptions {
            mode,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassStats {
    pub class_name: String,
    /// Decimal; can exceed any machine integer.
    pub lattice_size: String,
    /// Maximal elements found by the search.
    pub maximals: usize,
    /// Candidates generated on the way.
    pub examined: usize,
    /// Cover candidates handed to the solver.
    pub representatives: usize,
    pub cover_size: usize,
    /// Chosen maximals, in display form.
    pub clauses: Vec<String>,
}

/// Result for one class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassSynthesis {
    pub predicate: Predicate,
    pub clauses: Vec<LatticeElement>,
    pub stats: ClassStats,
}

fn labeled_points(ctx: &LatticeContext, objects: &[&ObjectRecord]) -> Result<Vec<LabeledPoint>> {
    objects
        .iter()
        .map(|o| {
            Ok(LabeledPoint {
                id: o.id.clone(),
                point: ctx.point_of(o)?,
            })
        })
        .collect()
}

/// Representatives, minimum cover, then one concrete maximal per chosen
/// representative, for one class lattice.
pub fn synthesize_predicate(
    ctx: &LatticeContext,
    positives: &[LabeledPoint],
    negatives: &[ObjectPoint],
    options: &SynthesisOptions,
) -> Result<ClassSynthesis> {
    if positives.is_empty() {
        return Err(Error::EmptyPositives);
    }
    if positives.iter().any(|p| negatives.contains(&p.point)) {
        let ids = positives
            .iter()
            .filter(|p| negatives.contains(&p.point))
            .map(|p| p.id.clone())
            .collect();
        return Err(Error::LabelOverlap(ids));
    }
    let lattice_size = ctx.lattice_size();
    if options.mode.materializes() && lattice_size > BigUint::from(options.size_cap) {
        return Err(Error::ContextTooLarge {
            class: ctx.class_name.clone(),
            size: lattice_size.to_string(),
            cap: options.size_cap,
        });
    }
    let budget = &options.budget;
    let exec = options.execution;
    let points: Vec<ObjectPoint> = positives.iter().map(|p| p.point.clone()).collect();
    let hull = points
        .iter()
        .map(|p| ctx.point_element(p))
        .try_fold(LatticeElement::Bottom, |acc, a| acc.join(&a))?;

    let (candidates, maximals, examined) = match options.mode {
        SynthesisMode::Full => {
            let reps = find_representatives(ctx, positives, negatives, budget, exec)?;
            let sets = reps.representatives.into_iter().map(|r| r.members).collect();
            (sets, reps.maximals, reps.examined)
        }
        SynthesisMode::NoAbstraction => {
            let problem = SearchProblem {
                ctx,
                bound: ctx.top(),
                positives: points.clone(),
                negatives: negatives.to_vec(),
            };
            let found = find_maximals(&problem, budget, exec)?;
            let sets = distinct_coverages(&found.elements, positives);
            (sets, found.elements.len(), found.examined)
        }
        SynthesisMode::NoDifference => {
            let (found, examined) = descend(ctx, &hull, &points, negatives, budget)?;
            let mut chain = Antichain::default();
            for m in &found {
                chain.insert(coverage(m, positives));
            }
            (chain.into_sorted(), found.len(), examined)
        }
        SynthesisMode::Naive => {
            let (found, examined) = descend(ctx, &ctx.top(), &points, negatives, budget)?;
            let sets = distinct_coverages(&found, positives);
            (sets, found.len(), examined)
        }
    };
    budget.check()?;

    let chosen = min_cover(&CoverInstance {
        universe: (0..positives.len()).collect(),
        candidates: candidates.clone(),
    })
    .map_err(|e| match e {
        Error::Uncovered(idx) => Error::Uncovered(
            idx.iter()
                .filter_map(|i| i.parse::<usize>().ok())
                .map(|i| positives[i].id.clone())
                .collect(),
        ),
        other => other,
    })?;

    let mut clauses = Vec::with_capacity(chosen.len());
    for &j in &chosen {
        budget.check()?;
        let members = &candidates[j];
        let delta: Vec<ObjectPoint> = members.iter().map(|&i| points[i].clone()).collect();
        let others: Vec<ObjectPoint> = (0..points.len())
            .filter(|i| !members.contains(i))
            .map(|i| points[i].clone())
            .collect();
        clauses.push(concretize_representative(ctx, &delta, &others, negatives)?.element);
    }
    let predicate = Predicate::any_of(
        clauses
            .iter()
            .map(|m| element_to_predicate(ctx, m))
            .collect::<Result<Vec<_>>>()?,
    );
    Ok(ClassSynthesis {
        predicate,
        stats: ClassStats {
            class_name: ctx.class_name.clone(),
            lattice_size: lattice_size.to_string(),
            maximals,
            examined,
            representatives: candidates.len(),
            cover_size: chosen.len(),
            clauses: clauses.iter().map(|m| ctx.display(m)).collect(),
        },
        clauses,
    })
}

fn distinct_coverages(maximals: &[LatticeElement], positives: &[LabeledPoint]) -> Vec<Vec<usize>> {
    let set: BTreeSet<Vec<usize>> = maximals
        .iter()
        .map(|m| coverage(m, positives))
        .filter(|s| !s.is_empty())
        .collect();
    let mut sets: Vec<Vec<usize>> = set.into_iter().collect();
    sort_candidates(&mut sets);
    sets
}

/// Breadth-first descent from `bound` through predecessors. Elements that
/// cover a negative are expanded; feasible ones are recorded and not
/// expanded; elements covering no positive are dropped. Returns the
/// recorded elements that are maximal below `bound`, canonically ordered,
/// and the number of elements visited.
fn descend(
    ctx: &LatticeContext,
    bound: &LatticeElement,
    positives: &[ObjectPoint],
    negatives: &[ObjectPoint],
    budget: &Budget,
) -> Result<(Vec<LatticeElement>, usize)> {
    let bound_coords = bound.coords().ok_or(Error::BottomInput)?;
    let mut seen: HashSet<LatticeElement> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut feasible = BTreeSet::new();
    seen.insert(bound.clone());
    queue.push_back(bound.clone());
    while let Some(x) = queue.pop_front() {
        budget.check()?;
        if !x.covers_any(positives) {
            continue;
        }
        if !x.covers_any(negatives) {
            feasible.insert(x);
            continue;
        }
        for p in ctx.predecessors(&x)? {
            if !p.is_bottom() && seen.insert(p.clone()) {
                queue.push_back(p);
            }
        }
    }
    let excluded: Vec<&ObjectPoint> = negatives.iter().collect();
    let maximal = feasible
        .into_iter()
        .filter(|m| is_maximal_within(m.coords().expect("tuple"), bound_coords, &excluded))
        .collect();
    Ok((maximal, seen.len()))
}

/// One class's lattice and labeled points, as the synthesizer sees them.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassProblem {
    pub ctx: LatticeContext,
    pub positives: Vec<LabeledPoint>,
    pub negatives: Vec<ObjectPoint>,
}

/// Builds the lattice of `class` from its labeled objects; numeric grids
/// hold the labeled values only.
pub fn class_problem(dataset: &Dataset, class: &str, labels: &ClassLabels) -> Result<ClassProblem> {
    let schema = dataset
        .schema(class)
        .ok_or_else(|| Error::UnknownClass(class.to_string()))?;
    let pos: Vec<&ObjectRecord> = labels.positives.iter().map(|&i| &dataset.objects[i]).collect();
    let neg: Vec<&ObjectRecord> = labels.negatives.iter().map(|&i| &dataset.objects[i]).collect();
    let labeled: Vec<&ObjectRecord> = pos.iter().chain(&neg).copied().collect();
    let ctx = build_context(schema, &labeled);
    let positives = labeled_points(&ctx, &pos)?;
    let negatives = labeled_points(&ctx, &neg)?
        .into_iter()
        .map(|p| p.point)
        .collect();
    Ok(ClassProblem {
        ctx,
        positives,
        negatives,
    })
}

/// One predicate per class with positives, joined by `||` in class
/// name order. Classes run concurrently under parallel execution.
pub fn synthesize_by_class(
    spec: &Specification<'_>,
    options: &SynthesisOptions,
) -> Result<(Predicate, Vec<ClassStats>)> {
    let classes: Vec<(String, ClassLabels)> = partition_by_class(spec).into_iter().collect();
    let results = options.execution.map(&classes, |(class, labels)| {
        let p = class_problem(spec.dataset, class, labels)?;
        synthesize_predicate(&p.ctx, &p.positives, &p.negatives, options)
    });
    let mut predicates = Vec::new();
    let mut stats = Vec::new();
    for r in results {
        let r = r?;
        predicates.push(r.predicate);
        stats.push(r.stats);
    }
    Ok((Predicate::any_of(predicates), stats))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisReport {
    pub mode: SynthesisMode,
    pub program: Program,
    pub program_text: String,
    pub predicate: Predicate,
    /// Ids of every object the program selects, labeled or not.
    pub selected: Vec<String>,
    pub metrics: ProgramMetrics,
    pub classes: Vec<ClassStats>,
    #[serde(with = "seconds")]
    pub wall_time: Duration,
}

mod seconds {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let secs = f64::deserialize(d)?;
        Duration::try_from_secs_f64(secs).map_err(serde::de::Error::custom)
    }
}

/// Labels to specification, predicate, then
/// `Apply(action, Filter(φ, All))`.
pub fn synthesize(dataset: &Dataset, edit: &EditRequest, options: &SynthesisOptions) -> Result<SynthesisReport> {
    let start = Instant::now();
    edit.action.validate()?;
    let spec = build_specification(dataset, edit)?;
    let (predicate, classes) = synthesize_by_class(&spec, options)?;
    let verdict = check_correctness(&predicate, &spec)?;
    assert!(
        verdict.is_correct(),
        "synthesized predicate violates the labels: {:?}",
        verdict.violations
    );
    let program = Program::filter(edit.action.clone(), predicate.clone());
    let selected = run_program(&program, dataset)?
        .into_iter()
        .map(|e| e.object)
        .collect();
    Ok(SynthesisReport {
        mode: options.mode,
        program_text: program.to_string(),
        metrics: ast_metrics(&program),
        program,
        predicate,
        selected,
        classes,
        wall_time: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Label, LabelsFile};
    use crate::dsl::Action;
    use crate::fixtures;
    use crate::lattice::{Component, ComponentKind, NumericGrid};

    fn all_modes() -> impl Iterator<Item = SynthesisOptions> {
        SynthesisMode::ALL.into_iter().map(SynthesisOptions::with_mode)
    }

    #[test]
    fn motivating_single_clause_in_every_mode() {
        let ds = fixtures::motivating_dataset();
        for opts in all_modes() {
            let report = synthesize(&ds, &fixtures::motivating_edit(), &opts).unwrap();
            assert_eq!(report.selected, ["pi7", "pi10", "pi14"], "{}", opts.mode);
            assert_eq!(report.classes.len(), 1);
            assert_eq!(report.classes[0].cover_size, 1);
            assert_eq!(
                report.classes[0].clauses,
                ["<{NoStyle,Stride}, (22,100]>"],
                "{}",
                opts.mode
            );
            assert_eq!(
                report.program_text,
                "Apply(Remove, Filter(class(Person) && x.TopStyle notin {Logo} && x.Age in (22, 100], All))"
            );
        }
    }

    #[test]
    fn positives_only_gives_bare_guard() {
        let ds = fixtures::motivating_dataset();
        let edit = EditRequest {
            action: Action::Cover {
                effect: crate::dsl::Effect::Blur,
            },
            positive: vec![Label::Object("pi7".into())],
            negative: vec![],
        };
        let report = synthesize(&ds, &edit, &SynthesisOptions::default()).unwrap();
        assert_eq!(
            report.program_text,
            "Apply(Cover(Blur), Filter(class(Person), All))"
        );
        assert_eq!(report.selected.len(), 6);
    }

    #[test]
    fn separated_positives_need_two_clauses() {
        let ctx = LatticeContext {
            class_name: "T".into(),
            components: vec![Component {
                attribute: "X".into(),
                kind: ComponentKind::Numeric {
                    grid: NumericGrid::new(0.0, 4.0, [1.0, 2.0, 3.0]),
                },
            }],
        };
        let pos = vec![
            LabeledPoint {
                id: "p1".into(),
                point: ObjectPoint(vec![1]),
            },
            LabeledPoint {
                id: "p3".into(),
                point: ObjectPoint(vec![5]),
            },
        ];
        let neg = vec![ObjectPoint(vec![3])];
        for opts in all_modes() {
            let r = synthesize_predicate(&ctx, &pos, &neg, &opts).unwrap();
            assert_eq!(r.stats.cover_size, 2);
            assert_eq!(r.stats.clauses, ["<[0,2)>", "<(2,4]>"]);
        }
    }

    #[test]
    fn classes_are_joined_in_name_order() {
        let ds = fixtures::mixed_dataset();
        let labels = LabelsFile {
            positive: vec!["car1".into(), "p1".into()],
            negative: vec!["car2".into(), "p2".into()],
            ..Default::default()
        };
        let report = synthesize(&ds, &labels.into_edit(Action::Remove), &SynthesisOptions::default()).unwrap();
        let names: Vec<&str> = report.classes.iter().map(|c| c.class_name.as_str()).collect();
        assert_eq!(names, ["Person", "Vehicle"]);
        assert_eq!(report.predicate.clauses().len(), 2);
        assert!(report.selected.contains(&"car1".to_string()));
        assert!(report.selected.contains(&"p1".to_string()));
        assert!(!report.selected.contains(&"car2".to_string()));
        assert!(!report.selected.contains(&"p2".to_string()));
    }

    #[test]
    fn overlapping_labels_are_rejected() {
        let ds = fixtures::motivating_dataset();
        let labels = LabelsFile {
            positive: vec!["pi7".into()],
            negative: vec!["pi7".into()],
            ..Default::default()
        };
        assert!(matches!(
            synthesize(&ds, &labels.into_edit(Action::Remove), &SynthesisOptions::default()),
            Err(Error::LabelOverlap(_))
        ));
    }

    #[test]
    fn materializing_modes_respect_the_cap() {
        let ds = fixtures::motivating_dataset();
        let mut opts = SynthesisOptions::with_mode(SynthesisMode::Naive);
        opts.size_cap = 10;
        assert!(matches!(
            synthesize(&ds, &fixtures::motivating_edit(), &opts),
            Err(Error::ContextTooLarge { .. })
        ));
        opts.mode = SynthesisMode::Full;
        assert!(synthesize(&ds, &fixtures::motivating_edit(), &opts).is_ok());
    }

    #[test]
    fn expired_budget_times_out() {
        let ds = fixtures::motivating_dataset();
        let opts = SynthesisOptions {
            budget: Budget::with_timeout(Duration::ZERO),
            ..Default::default()
        };
        assert_eq!(
            synthesize(&ds, &fixtures::motivating_edit(), &opts).unwrap_err(),
            Error::Timeout
        );
    }

    #[test]
    fn mode_names_round_trip() {
        for m in SynthesisMode::ALL {
            assert_eq!(m.name().parse::<SynthesisMode>().unwrap(), m);
        }
        assert_eq!("no_difference".parse::<SynthesisMode>().unwrap(), SynthesisMode::NoDifference);
        assert!("fast".parse::<SynthesisMode>().is_err());
    }

    #[test]
    fn report_serializes() {
        let ds = fixtures::motivating_dataset();
        let report = synthesize(&ds, &fixtures::motivating_edit(), &SynthesisOptions::default()).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["mode"], "full");
        assert_eq!(json["classes"][0]["lattice_size"], report.classes[0].lattice_size);
        let back: SynthesisReport = serde_json::from_value(json).unwrap();
        assert_eq!(back.program, report.program);
    }
}
