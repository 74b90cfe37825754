use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lattice_select::dataset::{build_specification, ObjectRecord};
use lattice_select::dsl::Action;
use lattice_select::generate::{generate, GeneratorSpec, GENERATED_CLASS};
use lattice_select::lattice::{build_context, ObjectPoint};
use lattice_select::search::{find_maximals, SearchProblem};
use lattice_select::{synthesize, Budget, Execution, SynthesisMode, SynthesisOptions};

const EXECUTIONS: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn search_from_top(c: &mut Criterion) {
    let mut group = c.benchmark_group("find_maximals_top");
    for (attrs, range, neg) in [(4, 4, 6), (6, 5, 8)] {
        let mut spec = GeneratorSpec::new(attrs, range, 4, neg, 11);
        spec.numeric_frac = 0.5;
        let case = generate(&spec).unwrap();
        let ds = &case.dataset;
        let pick = |ids: &[String]| -> Vec<&ObjectRecord> {
            ids.iter().map(|id| ds.object(id).unwrap()).collect()
        };
        let pos = pick(&case.labels.positive);
        let neg = pick(&case.labels.negative);
        let labeled: Vec<&ObjectRecord> = pos.iter().chain(&neg).copied().collect();
        let ctx = build_context(ds.schema(GENERATED_CLASS).unwrap(), &labeled);
        let points = |objs: &[&ObjectRecord]| -> Vec<ObjectPoint> {
            objs.iter().map(|o| ctx.point_of(o).unwrap()).collect()
        };
        let problem = SearchProblem {
            ctx: &ctx,
            bound: ctx.top(),
            positives: points(&pos),
            negatives: points(&neg),
        };
        for (name, exec) in EXECUTIONS {
            group.bench_with_input(
                BenchmarkId::new(name, format!("{attrs}x{range}")),
                &problem,
                |b, p| b.iter(|| find_maximals(black_box(p), &Budget::unlimited(), exec).unwrap()),
            );
        }
    }
    group.finish();
}

fn end_to_end(c: &mut Criterion) {
    let mut group = c.benchmark_group("synthesize_full");
    for (attrs, range) in [(10, 10), (150, 10)] {
        let case = generate(&GeneratorSpec::new(attrs, range, 5, 5, 1)).unwrap();
        let edit = case.labels.clone().into_edit(Action::Remove);
        build_specification(&case.dataset, &edit).unwrap();
        for (name, exec) in EXECUTIONS {
            let opts = SynthesisOptions {
                execution: exec,
                ..SynthesisOptions::with_mode(SynthesisMode::Full)
            };
            group.bench_function(BenchmarkId::new(name, format!("{attrs}x{range}")), |b| {
                b.iter(|| synthesize(black_box(&case.dataset), &edit, &opts).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, search_from_top, end_to_end);
criterion_main!(benches);
