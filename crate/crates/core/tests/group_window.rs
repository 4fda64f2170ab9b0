use std::collections::BTreeSet;

use ccw_core::group::{GroupSpec, GroupWindow};
use ccw_core::q;
use proptest::prelude::*;

fn specs() -> Vec<(GroupSpec, u32)> {
    vec![
        (GroupSpec::integers(), 12),
        (GroupSpec::free_abelian(2), 5),
        (GroupSpec::free_abelian(3), 3),
        (GroupSpec::free(2), 4),
        (GroupSpec::cyclic(6), 3),
        (GroupSpec::symmetric3(), 3),
        (GroupSpec::product(vec![GroupSpec::integers(), GroupSpec::cyclic(2)]), 4),
        (GroupSpec::product(vec![GroupSpec::free(2), GroupSpec::integers()]), 3),
    ]
}

fn lattice_count(n: usize, r: i64) -> usize {
    // points of Z^n with l1 norm at most r, by enumeration of the cube
    let side = 2 * r + 1;
    let total = side.pow(n as u32);
    (0..total)
        .filter(|&mut_idx| {
            let mut i = mut_idx;
            let mut norm = 0;
            for _ in 0..n {
                norm += (i % side - r).abs();
                i /= side;
            }
            norm <= r
        })
        .count()
}

#[test]
fn lattice_windows_match_cube_enumeration() {
    for n in 1..=3 {
        for r in 0..=4 {
            let w = GroupWindow::build(&GroupSpec::free_abelian(n), r as u32).unwrap();
            assert_eq!(w.len(), lattice_count(n, r), "Z^{n} radius {r}");
        }
    }
}

#[test]
fn free_windows_have_2_times_3_pow_r_minus_1_elements() {
    for r in 0..=6 {
        let w = GroupWindow::build(&GroupSpec::free(2), r).unwrap();
        assert_eq!(w.len(), 2 * 3usize.pow(r) - 1);
    }
}

#[test]
fn integer_window_names() {
    let w = GroupWindow::build(&GroupSpec::integers(), 3).unwrap();
    let names: BTreeSet<i64> = (0..w.len()).map(|i| w.name(i).parse().unwrap()).collect();
    assert_eq!(names, (-3..=3).collect());
    let z2 = GroupWindow::build(&GroupSpec::free_abelian(2), 1).unwrap();
    let names: BTreeSet<String> = (0..z2.len()).map(|i| z2.name(i)).collect();
    let want: BTreeSet<String> = ["0,0", "1,0", "-1,0", "0,1", "0,-1"].iter().map(|s| s.to_string()).collect();
    assert_eq!(names, want);
}

#[test]
fn distance_is_length_of_quotient() {
    for (spec, r) in specs() {
        let w = GroupWindow::build(&spec, r).unwrap();
        assert!(w.len() <= 1000);
        let g = w.group();
        for a in 0..w.len() {
            for b in 0..w.len() {
                let quot = g.mul(&g.inv(w.elem(a)), w.elem(b));
                assert_eq!(w.dist(a, b), g.word_length(&quot), "{spec:?}");
            }
        }
    }
}

#[test]
fn windows_are_closed_under_inverse_and_lengths_subadditive() {
    for (spec, r) in specs() {
        let w = GroupWindow::build(&spec, r).unwrap();
        for a in 0..w.len() {
            let ai = w.inverse(a);
            assert_eq!(w.word_length(ai), w.word_length(a));
            assert_eq!(w.mul(a, ai), Some(w.identity()));
            assert!(w.word_length(a) <= r);
            assert_eq!(w.word_length(a) == 0, a == w.identity());
            for b in 0..w.len() {
                if let Some(ab) = w.mul(a, b) {
                    assert!(w.word_length(ab) <= w.word_length(a) + w.word_length(b));
                }
            }
        }
    }
}

#[test]
fn balls_are_left_translates_of_the_identity_ball() {
    for (spec, r) in specs() {
        let w = GroupWindow::build(&spec, r).unwrap();
        for alpha in 1..=r as i64 + 1 {
            let alpha = q::int(alpha);
            let base = w.ball(w.identity(), &alpha).unwrap().members;
            for g in 0..w.len() {
                let ball: BTreeSet<usize> = w.ball(g, &alpha).unwrap().members.into_iter().collect();
                let moved: BTreeSet<usize> = base.iter().filter_map(|&h| w.mul(g, h)).collect();
                assert_eq!(ball, moved, "{spec:?} g={} α={}", w.name(g), q::fmt(&alpha));
            }
        }
    }
}

#[test]
fn balls_are_open() {
    let w = GroupWindow::build(&GroupSpec::free_abelian(2), 5).unwrap();
    for g in 0..w.len() {
        for (p, d) in [(5i64, 2i64), (3, 1), (7, 3), (1, 1)] {
            let alpha = q::frac(p, d);
            let ball = w.ball(g, &alpha).unwrap();
            let oracle: Vec<usize> = (0..w.len()).filter(|&h| q::int(w.dist(g, h) as i64) < alpha).collect();
            assert_eq!(ball.members, oracle);
            assert_eq!(ball.clipped, q::int(w.word_length(g) as i64) + alpha > q::int(6));
        }
    }
}

#[test]
fn inner_window_is_the_defining_set() {
    for (spec, r) in specs() {
        let w = GroupWindow::build(&spec, r).unwrap();
        for num in 1..=4 * (r as i64 + 2) {
            let alpha = q::frac(num, 2);
            let oracle: Vec<usize> = (0..w.len())
                .filter(|&g| q::int(w.word_length(g) as i64) + alpha <= q::int(r as i64 + 1))
                .collect();
            assert_eq!(w.inner_window(&alpha), oracle);
        }
    }
}

proptest! {
    #[test]
    fn inner_windows_shrink_as_alpha_grows(r in 0u32..10, a in 1i64..40, b in 1i64..40, d in 1i64..4) {
        let w = GroupWindow::build(&GroupSpec::free_abelian(2), r).unwrap();
        let (lo, hi) = (q::frac(a.min(b), d), q::frac(a.max(b), d));
        let small: BTreeSet<usize> = w.inner_window(&hi).into_iter().collect();
        let big: BTreeSet<usize> = w.inner_window(&lo).into_iter().collect();
        prop_assert!(small.is_subset(&big));
    }

    #[test]
    fn normal_forms_round_trip(r in 0u32..4, k in 1usize..3) {
        let w = GroupWindow::build(&GroupSpec::free(k), r).unwrap();
        for i in 0..w.len() {
            prop_assert_eq!(w.lookup(&w.name(i)).unwrap(), i);
        }
    }
}
