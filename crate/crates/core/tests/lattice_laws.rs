mod common;

use common::{all_atoms, random_context, random_element, rank};
use lattice_select::lattice::{compare, materialize, LatticeElement};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;

const CASES: u64 = 200;

#[test]
fn partial_order_laws() {
    for seed in 0..CASES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = random_context(&mut rng);
        let xs: Vec<LatticeElement> = (0..6).map(|_| random_element(&mut rng, &ctx)).collect();
        for a in &xs {
            assert!(a.leq(a).unwrap());
            assert!(LatticeElement::Bottom.leq(a).unwrap());
            assert!(a.leq(&ctx.top()).unwrap());
            for b in &xs {
                let ab = a.leq(b).unwrap();
                let ba = b.leq(a).unwrap();
                if ab && ba {
                    assert_eq!(a, b);
                }
                let expected = match (ab, ba) {
                    (true, true) => Some(Ordering::Equal),
                    (true, false) => Some(Ordering::Less),
                    (false, true) => Some(Ordering::Greater),
                    _ => None,
                };
                assert_eq!(compare(a, b).unwrap(), expected);
                for c in &xs {
                    if ab && b.leq(c).unwrap() {
                        assert!(a.leq(c).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn join_and_meet_are_bounds() {
    for seed in 0..CASES {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let ctx = random_context(&mut rng);
        let all = materialize(&ctx, 100_000).unwrap();
        for _ in 0..5 {
            let a = random_element(&mut rng, &ctx);
            let b = random_element(&mut rng, &ctx);
            let j = a.join(&b).unwrap();
            let m = a.meet(&b).unwrap();
            assert_eq!(j, b.join(&a).unwrap());
            assert_eq!(m, b.meet(&a).unwrap());
            let uppers: Vec<&LatticeElement> = all
                .iter()
                .filter(|x| a.leq(x).unwrap() && b.leq(x).unwrap())
                .collect();
            assert!(uppers.contains(&&j));
            assert!(uppers.iter().all(|u| j.leq(u).unwrap()));
            let lowers: Vec<&LatticeElement> = all
                .iter()
                .filter(|x| x.leq(&a).unwrap() && x.leq(&b).unwrap())
                .collect();
            assert!(lowers.contains(&&m));
            assert!(lowers.iter().all(|l| l.leq(&m).unwrap()));
            assert_eq!(a.join(&m).unwrap(), a, "absorption");
            assert_eq!(a.meet(&j).unwrap(), a, "absorption");
        }
    }
}

#[test]
fn successors_and_predecessors_are_covers() {
    for seed in 0..CASES {
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + seed);
        let ctx = random_context(&mut rng);
        let all = materialize(&ctx, 100_000).unwrap();
        let atom_rank = ctx.arity();
        let a = random_element(&mut rng, &ctx);
        if a.is_bottom() {
            assert!(ctx.successors(&a).is_err() && ctx.predecessors(&a).is_err());
            continue;
        }
        let covers_of = |lo: &LatticeElement, hi: &LatticeElement| {
            lo != hi
                && lo.leq(hi).unwrap()
                && !all
                    .iter()
                    .any(|z| z != lo && z != hi && lo.leq(z).unwrap() && z.leq(hi).unwrap())
        };
        let mut up: Vec<LatticeElement> = all.iter().filter(|x| covers_of(&a, x)).cloned().collect();
        let mut down: Vec<LatticeElement> = all.iter().filter(|x| covers_of(x, &a)).cloned().collect();
        up.sort();
        down.sort();
        let mut succ = ctx.successors(&a).unwrap();
        let mut pred = ctx.predecessors(&a).unwrap();
        succ.sort();
        succ.dedup();
        pred.sort();
        pred.dedup();
        assert_eq!(succ, up, "successors of {}", ctx.display(&a));
        assert_eq!(pred, down, "predecessors of {}", ctx.display(&a));
        for s in &succ {
            assert_eq!(rank(s), rank(&a) + 1);
        }
        for p in &pred {
            if rank(&a) == atom_rank {
                assert!(p.is_bottom());
            } else {
                assert_eq!(rank(p) + 1, rank(&a));
            }
        }
    }
}

#[test]
fn element_diff_is_sound_and_complete() {
    for seed in 0..CASES {
        let mut rng = ChaCha8Rng::seed_from_u64(3000 + seed);
        let ctx = random_context(&mut rng);
        let all = materialize(&ctx, 100_000).unwrap();
        let a = random_element(&mut rng, &ctx);
        if a.is_bottom() {
            continue;
        }
        for p in all_atoms(&ctx) {
            let b = ctx.point_element(&p);
            let children = ctx.element_diff(&a, &b).unwrap();
            if !b.leq(&a).unwrap() {
                assert_eq!(children, vec![a.clone()]);
                continue;
            }
            for c in &children {
                assert!(c.leq(&a).unwrap());
                assert!(!c.covers(&p));
            }
            // Every element below `a` avoiding `b` lies below some child,
            // and the children form an antichain.
            for x in &all {
                if x.is_bottom() || !x.leq(&a).unwrap() || x.covers(&p) {
                    continue;
                }
                assert!(children.iter().any(|c| x.leq(c).unwrap()));
            }
            for (i, c) in children.iter().enumerate() {
                for (j, d) in children.iter().enumerate() {
                    assert!(i == j || !c.leq(d).unwrap());
                }
            }
        }
    }
}

#[test]
fn size_matches_enumeration() {
    for seed in 0..CASES {
        let mut rng = ChaCha8Rng::seed_from_u64(4000 + seed);
        let ctx = random_context(&mut rng);
        let all = materialize(&ctx, 100_000).unwrap();
        assert_eq!(ctx.lattice_size(), BigUint::from(all.len()));
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), all.len());
        assert_eq!(all_atoms(&ctx).len(), all.iter().filter(|x| rank(x) == ctx.arity()).count());
    }
}
