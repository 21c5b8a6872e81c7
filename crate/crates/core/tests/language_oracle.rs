use std::ops::ControlFlow;

use num_traits::ToPrimitive;
mod oracles;

use oracles::{brute_force_forbidden, code};
use zerotemp::language::{for_each_forbidden, forbidden_slice, language_slice, verify_reconstruction};
use zerotemp::params::preset;
use zerotemp::words::{Hierarchy, DEFAULT_MATERIALIZE_CAP as CAP};

const TOYS: [&str; 3] = ["toy-a", "toy-b", "toy-c"];

fn hierarchy(name: &str) -> Hierarchy {
    Hierarchy::new(&preset(name).unwrap(), 3).unwrap()
}

#[test]
fn ground_truth_small_lengths() {
    for name in TOYS {
        let h = hierarchy(name);
        assert!(forbidden_slice(&h, 1, CAP).unwrap().0.is_empty());
        let two: Vec<_> = forbidden_slice(&h, 2, CAP).unwrap().0.into_iter().map(|r| r.word).collect();
        assert_eq!(two, vec![vec![0, 0]]);
        assert_eq!(language_slice(&h, 2, CAP).unwrap().count, 8);
    }
}

#[test]
fn forbidden_slices_match_brute_force_up_to_two_ell_one() {
    for name in TOYS {
        let h = hierarchy(name);
        let two_ell = 2 * h.ell(1).unwrap().to_usize().unwrap();
        for n in 1..=two_ell {
            let expected = brute_force_forbidden(&h, n);
            let mut next = 0usize;
            let stats = for_each_forbidden(&h, n, CAP, |w| {
                assert_eq!(Some(&code(w)), expected.get(next), "{name} n={n} #{next}");
                next += 1;
                ControlFlow::Continue(())
            })
            .unwrap();
            assert_eq!(next, expected.len(), "{name} n={n}");
            assert_eq!(stats.forbidden, expected.len() as u64);
            if n <= 8 {
                let listed: Vec<usize> = forbidden_slice(&h, n, CAP).unwrap().0.iter().map(|r| code(&r.word)).collect();
                assert_eq!(listed, expected);
            }
        }
    }
}

#[test]
fn reconstruction_holds_up_to_ell_one() {
    for name in TOYS {
        let h = hierarchy(name);
        let ell = h.ell(1).unwrap().to_usize().unwrap();
        for n in 1..=ell {
            let r = verify_reconstruction(&h, n, CAP).unwrap();
            assert!(r.holds, "{name} n={n}: {:?}", r.counterexample);
        }
    }
}
