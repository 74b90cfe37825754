mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{all_atoms, random_context, random_element};
use lattice_select::dataset::{AttributeSchema, ClassSchema, Dataset, ObjectRecord, Region, Value};
use lattice_select::dsl::{
    eval_predicate, parse_action, parse_predicate, parse_program, print_predicate, print_program,
    element_to_predicate, Action, Effect, Objects, Predicate, Program, ValueSet,
};
use lattice_select::interval::Interval;
use lattice_select::lattice::{ComponentKind, LatticeContext, ObjectPoint};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn name() -> impl Strategy<Value = String> {
    prop_oneof![
        "[A-Za-z_][A-Za-z0-9_]{0,6}",
        "[ a-z\"\\\\\n-]{0,5}",
    ]
}

fn interval() -> impl Strategy<Value = Interval> {
    (-1000i32..1000, 0i32..500, any::<bool>(), any::<bool>(), 0u8..4).prop_map(
        |(lo, width, lo_closed, hi_closed, scale)| {
            let div = [1.0, 2.0, 4.0, 100.0][scale as usize];
            Interval {
                lo: lo as f64 / div,
                lo_closed,
                hi: (lo + width) as f64 / div,
                hi_closed,
            }
        },
    )
}

fn leaf() -> impl Strategy<Value = Predicate> {
    prop_oneof![
        Just(Predicate::True),
        Just(Predicate::False),
        name().prop_map(Predicate::ClassIs),
        (name(), any::<bool>(), prop::collection::vec(name(), 0..4))
            .prop_map(|(a, neg, s)| Predicate::member(&a, neg, ValueSet::Symbols(s))),
        (name(), any::<bool>(), prop::collection::vec(interval(), 1..4))
            .prop_map(|(a, neg, s)| Predicate::member(&a, neg, ValueSet::Intervals(s))),
    ]
}

fn predicate() -> impl Strategy<Value = Predicate> {
    leaf().prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Predicate::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Predicate::or(a, b)),
            inner.prop_map(Predicate::not),
        ]
    })
}

fn action() -> impl Strategy<Value = Action> {
    prop_oneof![
        prop::sample::select(Effect::ALL.to_vec()).prop_map(|effect| Action::Cover { effect }),
        Just(Action::Remove),
        "#[0-9A-Fa-f]{6}".prop_map(|color| Action::Recolor { color }),
        "[a-z][a-z \"]{0,10}".prop_map(|prompt| Action::Inpaint { prompt }),
    ]
}

fn program() -> impl Strategy<Value = Program> {
    (action(), prop::collection::vec(predicate(), 0..3)).prop_map(|(action, filters)| {
        let objects = filters
            .into_iter()
            .fold(Objects::All, |o, p| Objects::Filter(Box::new(p), Box::new(o)));
        Program { action, objects }
    })
}

const DOMAIN: [&str; 3] = ["p", "q", "r"];

fn sample_dataset() -> Dataset {
    let schema = ClassSchema::new(
        "C",
        vec![
            AttributeSchema::categorical("A", DOMAIN),
            AttributeSchema::categorical("B", DOMAIN),
            AttributeSchema::numeric("N", 0.0, 10.0),
        ],
    )
    .unwrap();
    let mut objects = Vec::new();
    for (i, (a, b, n)) in DOMAIN
        .iter()
        .flat_map(|a| DOMAIN.iter().map(move |b| (a, b)))
        .zip([0.0, 1.5, 2.0, 3.0, 5.0, 7.5, 9.0, 10.0, 4.0])
        .map(|((a, b), n)| (a, b, n))
        .enumerate()
    {
        objects.push(ObjectRecord {
            id: format!("o{i}"),
            class_name: "C".into(),
            region: Region { x: i as f64 * 10.0, y: 0.0, w: 5.0, h: 5.0 },
            attributes: BTreeMap::from([
                ("A".to_string(), Value::Symbol(a.to_string())),
                ("B".to_string(), Value::Symbol(b.to_string())),
                ("N".to_string(), Value::Number(n)),
            ]),
        });
    }
    Dataset::new(vec![schema], objects).unwrap()
}

fn typed_predicate() -> impl Strategy<Value = Predicate> {
    let syms = prop::collection::vec(prop::sample::select(DOMAIN.to_vec()), 0..3)
        .prop_map(|v| v.into_iter().map(String::from).collect::<Vec<_>>());
    let ivs = prop::collection::vec(
        (0i32..10, 0i32..6, any::<bool>(), any::<bool>()).prop_map(|(lo, w, lc, hc)| Interval {
            lo: lo as f64,
            lo_closed: lc,
            hi: (lo + w) as f64,
            hi_closed: hc,
        }),
        1..3,
    );
    let leaf = prop_oneof![
        Just(Predicate::True),
        Just(Predicate::False),
        prop::sample::select(vec!["C", "D"]).prop_map(|c| Predicate::ClassIs(c.into())),
        (prop::sample::select(vec!["A", "B"]), any::<bool>(), syms)
            .prop_map(|(a, n, s)| Predicate::member(a, n, ValueSet::Symbols(s))),
        (any::<bool>(), ivs).prop_map(|(n, s)| Predicate::member("N", n, ValueSet::Intervals(s))),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Predicate::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Predicate::or(a, b)),
            inner.prop_map(Predicate::not),
        ]
    })
}

/// Denotation as a set of object indices, computed bottom-up.
fn denote(p: &Predicate, ds: &Dataset) -> BTreeSet<usize> {
    let all: BTreeSet<usize> = (0..ds.objects.len()).collect();
    match p {
        Predicate::True => all,
        Predicate::False => BTreeSet::new(),
        Predicate::ClassIs(c) => all.into_iter().filter(|&i| ds.objects[i].class_name == *c).collect(),
        Predicate::Membership(m) => all
            .into_iter()
            .filter(|&i| {
                let v = &ds.objects[i].attributes[&m.attribute];
                let inside = match (&m.values, v) {
                    (ValueSet::Symbols(s), Value::Symbol(x)) => s.contains(x),
                    (ValueSet::Intervals(s), Value::Number(x)) => s.iter().any(|iv| iv.contains(*x)),
                    _ => unreachable!(),
                };
                inside != m.negated
            })
            .collect(),
        Predicate::And(a, b) => denote(a, ds).intersection(&denote(b, ds)).copied().collect(),
        Predicate::Or(a, b) => denote(a, ds).union(&denote(b, ds)).copied().collect(),
        Predicate::Not(a) => all.difference(&denote(a, ds)).copied().collect(),
    }
}

fn selected(p: &Predicate, ds: &Dataset) -> BTreeSet<usize> {
    (0..ds.objects.len())
        .filter(|&i| eval_predicate(p, &ds.objects[i]).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn predicate_round_trip(p in predicate()) {
        let text = print_predicate(&p);
        prop_assert_eq!(parse_predicate(&text).unwrap(), p.clone(), "{}", text);
        prop_assert_eq!(print_predicate(&parse_predicate(&text).unwrap()), text);
    }

    #[test]
    fn program_round_trip(p in program()) {
        let text = print_program(&p);
        prop_assert_eq!(parse_program(&text).unwrap(), p.clone(), "{}", text);
        prop_assert_eq!(parse_action(&p.action.to_string()).unwrap(), p.action);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn evaluator_matches_set_semantics(p in typed_predicate()) {
        let ds = sample_dataset();
        prop_assert_eq!(selected(&p, &ds), denote(&p, &ds));
    }

    #[test]
    fn de_morgan(a in typed_predicate(), b in typed_predicate()) {
        let ds = sample_dataset();
        let lhs = Predicate::not(Predicate::and(a.clone(), b.clone()));
        let rhs = Predicate::or(Predicate::not(a.clone()), Predicate::not(b.clone()));
        prop_assert_eq!(selected(&lhs, &ds), selected(&rhs, &ds));
        let lhs = Predicate::not(Predicate::or(a.clone(), b.clone()));
        let rhs = Predicate::and(Predicate::not(a), Predicate::not(b));
        prop_assert_eq!(selected(&lhs, &ds), selected(&rhs, &ds));
    }

    #[test]
    fn notin_is_in_complement(
        attr in prop::sample::select(vec!["A", "B"]),
        set in prop::collection::btree_set(prop::sample::select(DOMAIN.to_vec()), 0..=3),
    ) {
        let ds = sample_dataset();
        let inside: Vec<String> = set.iter().map(|s| s.to_string()).collect();
        let outside: Vec<String> = DOMAIN.iter().filter(|s| !set.contains(*s)).map(|s| s.to_string()).collect();
        let notin = Predicate::member(attr, true, ValueSet::Symbols(inside.clone()));
        let in_complement = Predicate::member(attr, false, ValueSet::Symbols(outside));
        prop_assert_eq!(selected(&notin, &ds), selected(&in_complement, &ds));
        let negated = Predicate::not(Predicate::member(attr, false, ValueSet::Symbols(inside)));
        prop_assert_eq!(selected(&notin, &ds), selected(&negated, &ds));
    }
}

/// An object whose attribute values sit inside the given atom.
fn object_at(ctx: &LatticeContext, p: &ObjectPoint) -> ObjectRecord {
    let attributes = ctx
        .components
        .iter()
        .zip(&p.0)
        .map(|(c, &v)| {
            let value = match &c.kind {
                ComponentKind::Categorical { domain } => Value::Symbol(domain[v as usize].clone()),
                ComponentKind::Numeric { grid } => {
                    let iv = grid.atoms()[v as usize];
                    Value::Number(if iv.lo_closed {
                        iv.lo
                    } else if iv.hi_closed {
                        iv.hi
                    } else {
                        (iv.lo + iv.hi) / 2.0
                    })
                }
            };
            (c.attribute.clone(), value)
        })
        .collect();
    ObjectRecord {
        id: "o".into(),
        class_name: ctx.class_name.clone(),
        region: Region { x: 0.0, y: 0.0, w: 1.0, h: 1.0 },
        attributes,
    }
}

#[test]
fn transform_is_faithful_on_random_lattices() {
    for seed in 0..300 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = random_context(&mut rng);
        let atoms = all_atoms(&ctx);
        for _ in 0..5 {
            let m = random_element(&mut rng, &ctx);
            if m.is_bottom() {
                continue;
            }
            let p = element_to_predicate(&ctx, &m).unwrap();
            assert_eq!(parse_predicate(&print_predicate(&p)).unwrap(), p);
            for a in &atoms {
                let o = object_at(&ctx, a);
                assert_eq!(
                    eval_predicate(&p, &o).unwrap(),
                    m.covers(a),
                    "seed {seed}: {} vs {}",
                    ctx.display(&m),
                    p
                );
                let mut other = o.clone();
                other.class_name = format!("{}_", ctx.class_name);
                assert!(!eval_predicate(&p, &other).unwrap());
            }
        }
    }
}
