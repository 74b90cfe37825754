use lattice_select::cover::{min_cover, CoverInstance};
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = CoverInstance<u8>> {
    (1u8..9).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::btree_set(0..n, 0..=n as usize), 1..=12).prop_map(
            move |sets| CoverInstance {
                universe: (0..n).collect(),
                candidates: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
            },
        )
    })
}

/// Lexicographically smallest minimum cover by exhaustive enumeration.
fn brute(inst: &CoverInstance<u8>) -> Option<Vec<usize>> {
    let full: u32 = inst.universe.iter().map(|&u| 1u32 << u).sum();
    let masks: Vec<u32> = inst
        .candidates
        .iter()
        .map(|c| c.iter().map(|&u| 1u32 << u).fold(0, |a, b| a | b))
        .collect();
    let mut best: Option<Vec<usize>> = None;
    for pick in 0u32..(1 << masks.len()) {
        let union = (0..masks.len())
            .filter(|&i| pick >> i & 1 == 1)
            .fold(0, |a, i| a | masks[i]);
        if union != full {
            continue;
        }
        let chosen: Vec<usize> = (0..masks.len()).filter(|&i| pick >> i & 1 == 1).collect();
        let better = match &best {
            None => true,
            Some(b) => chosen.len() < b.len() || (chosen.len() == b.len() && chosen < *b),
        };
        if better {
            best = Some(chosen);
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn matches_exhaustive_minimum(inst in instance()) {
        match brute(&inst) {
            None => prop_assert!(min_cover(&inst).is_err()),
            Some(expected) => {
                let got = min_cover(&inst).unwrap();
                prop_assert_eq!(&got, &expected);
                for u in &inst.universe {
                    prop_assert!(got.iter().any(|&i| inst.candidates[i].contains(u)));
                }
                prop_assert_eq!(min_cover(&inst).unwrap(), got);
            }
        }
    }
}
