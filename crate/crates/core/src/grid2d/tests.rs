use std::collections::HashSet;

use num_traits::ToPrimitive;
use proptest::prelude::*;

use super::generators::{random_tiling, GeneratorKind, PatternGenerator};
use super::*;
use crate::params::preset;

const CAP: usize = 1 << 22;

fn toy(name: &str, levels: u32) -> Hierarchy {
    Hierarchy::new(&preset(name).unwrap(), levels).unwrap()
}

fn word(h: &Hierarchy, k: u32, idx: usize) -> Vec<Symbol> {
    h.words(k).unwrap().named()[idx].1.materialize_all(CAP).unwrap()
}

/// Windows of length m of every w1·w2 with w1, w2 level-q words, q least with ℓ_q ≥ m.
fn naive_language(h: &Hierarchy, m: usize) -> HashSet<Vec<Symbol>> {
    let q = (0..=h.max_level())
        .find(|&q| h.ell(q).unwrap().to_usize().unwrap() >= m)
        .unwrap();
    let ws: Vec<_> = (0..4).map(|i| word(h, q, i)).collect();
    let mut out = HashSet::new();
    for x in &ws {
        for y in &ws {
            let t: Vec<Symbol> = x.iter().chain(y).copied().collect();
            for s in 0..=t.len() - m {
                out.insert(t[s..s + m].to_vec());
            }
        }
    }
    out
}

/// Intermediate words written out from the level k-1 words.
fn naive_intermediate(h: &Hierarchy, k: u32) -> (Vec<Vec<Symbol>>, Vec<Vec<Symbol>>) {
    let st = h.state(k).unwrap();
    let np = st.n_prime.as_ref().unwrap().to_usize().unwrap();
    let ell = h.ell(k - 1).unwrap().to_usize().unwrap();
    let a = word(h, k - 1, 0);
    let b = word(h, k - 1, 1);
    let lp = np * ell;
    let pad = |c: Symbol| vec![c; (np - 1) * ell];
    let cat = |x: &[Symbol], y: &[Symbol]| -> Vec<Symbol> { x.iter().chain(y).copied().collect() };
    let mut aw = Vec::new();
    let mut bw = Vec::new();
    if k.is_multiple_of(2) {
        aw.push(cat(&a, &pad(1)));
        aw.push(cat(&pad(1), &a));
        bw.push(b.repeat(np));
    } else {
        bw.push(cat(&b, &pad(2)));
        bw.push(cat(&pad(2), &b));
        aw.push(a.repeat(np));
    }
    aw.push(vec![1; lp]);
    bw.push(vec![2; lp]);
    (aw, bw)
}

struct Naive {
    i: Vec<(usize, usize)>,
    i_a: Vec<(usize, usize)>,
    i_b: Vec<(usize, usize)>,
    j_a: HashSet<(usize, usize)>,
    j_b: HashSet<(usize, usize)>,
    k_a: usize,
    k_b: usize,
}

fn naive_ijk(p: &Pattern2D, h: &Hierarchy, k: u32) -> Naive {
    let n = p.width;
    let (aw, bw) = naive_intermediate(h, k);
    let lp = aw[0].len();
    let lang = naive_language(h, 2 * lp);
    let aligned_row = |ux: usize, uy: usize, m: usize| -> Option<Vec<Symbol>> {
        let row: Vec<Symbol> = (1..=m).map(|x| p.get(ux + x, uy + 1)).collect();
        for y in 1..=m {
            for x in 1..=m {
                if p.get(ux + x, uy + y) != row[x - 1] {
                    return None;
                }
            }
        }
        Some(row)
    };
    let mut out = Naive {
        i: vec![],
        i_a: vec![],
        i_b: vec![],
        j_a: HashSet::new(),
        j_b: HashSet::new(),
        k_a: 0,
        k_b: 0,
    };
    for uy in 0..=n - 2 * lp {
        for ux in 0..=n - 2 * lp {
            if aligned_row(ux, uy, 2 * lp).is_some_and(|r| lang.contains(&r)) {
                out.i.push((ux, uy));
            }
        }
    }
    for uy in 0..=n - lp {
        for ux in 0..=n - lp {
            if let Some(r) = aligned_row(ux, uy, lp) {
                let (list, j) = if aw.contains(&r) {
                    (&mut out.i_a, &mut out.j_a)
                } else if bw.contains(&r) {
                    (&mut out.i_b, &mut out.j_b)
                } else {
                    continue;
                };
                list.push((ux, uy));
                for y in 1..=lp {
                    for x in 1..=lp {
                        j.insert((ux + x, uy + y));
                    }
                }
            }
        }
    }
    out.k_a = out.j_a.iter().filter(|&&(x, y)| p.get(x, y) == 0).count();
    out.k_b = out.j_b.iter().filter(|&&(x, y)| p.get(x, y) == 0).count();
    out
}

fn assert_matches_naive(p: &Pattern2D, h: &Hierarchy, ctx: &IjkContext) {
    let r = compute_ijk(p, ctx).unwrap();
    let nv = naive_ijk(p, h, ctx.k);
    assert_eq!(r.i, nv.i);
    assert_eq!(r.i_a, nv.i_a);
    assert_eq!(r.i_b, nv.i_b);
    let ja: HashSet<_> = r.j_a.positions().into_iter().collect();
    let jb: HashSet<_> = r.j_b.positions().into_iter().collect();
    assert_eq!(ja, nv.j_a);
    assert_eq!(jb, nv.j_b);
    assert_eq!(r.k_a.len(), nv.k_a);
    assert_eq!(r.k_b.len(), nv.k_b);
    assert!(r.k_a.positions().iter().all(|&(x, y)| p.get(x, y) == 0 && r.j_a.contains(x, y)));
}

#[test]
fn verticalize_examples() {
    let p = verticalize(&[0, 1], 2).unwrap();
    assert_eq!(p.rows(), vec!["01", "01"]);
    let h = toy("toy-a", 1);
    let a1 = word(&h, 1, 0);
    let p = verticalize(&a1, 3).unwrap();
    assert_eq!((p.width, p.height), (8, 3));
    assert!(p.rows().iter().all(|r| r == "01010101"));
    assert!(p.is_vertically_aligned());
    assert!(verticalize(&a1, 0).is_err());
}

#[test]
fn project_and_lift() {
    let p = Pattern2D::filled(Alphabet::Duplicated, 2, 2, ZERO_PRIME).unwrap();
    assert_eq!(project(&p).unwrap().cells, vec![0; 4]);
    let mixed = Pattern2D::new(Alphabet::Duplicated, 1, 2, vec![ZERO_PRIME, ZERO_SECOND]).unwrap();
    assert_eq!(project(&mixed).unwrap().cells, vec![0, 0]);
    let tilde = verticalize(&[0, 2, 0, 1], 3).unwrap();
    assert!(project(&tilde).is_err());
    for choice in [0usize, 1, 5] {
        let l = lift(&tilde, |i| (i + choice) % 2 == 0).unwrap();
        assert_eq!(project(&l).unwrap(), tilde);
    }
}

#[test]
fn duplication_counts() {
    let b0 = verticalize(&[0, 2], 2).unwrap();
    assert_eq!(count_duplications(&b0), BigUint::from(4u32));
    let ones = Pattern2D::filled(Alphabet::Tilde, 3, 3, 1).unwrap();
    assert_eq!(count_duplications(&ones), BigUint::from(1u32));
    let h = toy("toy-a", 1);
    let b1 = verticalize(&word(&h, 1, 1), 8).unwrap();
    assert_eq!(count_duplications(&b1), BigUint::from(1u32 << 16));
    let all = enumerate_duplications(&b0, 16).unwrap();
    assert_eq!(all.len(), 4);
    assert_eq!(all.iter().collect::<HashSet<_>>().len(), 4);
    assert!(enumerate_duplications(&b1, 1000).is_err());
}

#[test]
fn a_only_rows_have_no_b_windows() {
    let h = toy("toy-a", 2);
    let ctx = IjkContext::new(&h, 1, CAP).unwrap();
    let row = word(&h, 1, 0).repeat(4);
    let n = 2 * ctx.ell_prime + 3;
    let p = verticalize(&row[..n], n).unwrap();
    let r = compute_ijk(&p, &ctx).unwrap();
    assert!(!r.i.is_empty());
    assert!(r.j_b.is_empty());
    assert_matches_naive(&p, &h, &ctx);
}

#[test]
fn all_zero_pattern_has_empty_i() {
    let h = toy("toy-a", 3);
    let ctx = IjkContext::new(&h, 2, CAP).unwrap();
    let n = 2 * ctx.ell_prime + 1;
    let p = Pattern2D::filled(Alphabet::Tilde, n, n, 0).unwrap();
    let r = compute_ijk(&p, &ctx).unwrap();
    assert!(r.i.is_empty() && r.i_a.is_empty() && r.i_b.is_empty());
    assert!(check_admissibility_cover(&r).holds());
}

#[test]
fn small_pattern_rejected() {
    let h = toy("toy-a", 3);
    let ctx = IjkContext::new(&h, 2, CAP).unwrap();
    let n = 2 * ctx.ell_prime;
    let p = Pattern2D::filled(Alphabet::Tilde, n, n, 1).unwrap();
    assert!(matches!(compute_ijk(&p, &ctx), Err(Error::InvalidInput(_))));
}

#[test]
fn single_flip_only_touches_covering_windows() {
    let h = toy("toy-a", 3);
    let ctx = IjkContext::new(&h, 2, CAP).unwrap();
    let side = PatternGenerator::default_side(&ctx, 4);
    let g = PatternGenerator::new(&h, &ctx, side, 7, CAP).unwrap();
    let p = g.generate(GeneratorKind::Structured, 0);
    let mut q = p.clone();
    q.set(side, side, (p.get(side, side) + 1) % 3);
    let (r, s) = (compute_ijk(&p, &ctx).unwrap(), compute_ijk(&q, &ctx).unwrap());
    let lp = ctx.ell_prime;
    let far = |&&(ux, uy): &&(usize, usize)| ux + lp < side && uy + lp < side;
    let keep = |v: &Vec<(usize, usize)>| v.iter().filter(far).copied().collect::<Vec<_>>();
    assert_eq!(keep(&r.i_a), keep(&s.i_a));
    assert_eq!(keep(&r.i_b), keep(&s.i_b));
    let far2 = |v: &Vec<(usize, usize)>| {
        v.iter()
            .filter(|&&(ux, uy)| ux + 2 * lp < side && uy + 2 * lp < side)
            .copied()
            .collect::<Vec<_>>()
    };
    assert_eq!(far2(&r.i), far2(&s.i));
    assert_matches_naive(&q, &h, &ctx);
}

#[test]
fn generated_patterns_match_naive_oracle() {
    for name in ["toy-a", "toy-b", "toy-c"] {
        let h = toy(name, 3);
        for k in 1..=2 {
            let ctx = IjkContext::new(&h, k, CAP).unwrap();
            let side = PatternGenerator::default_side(&ctx, 3);
            let g = PatternGenerator::new(&h, &ctx, side, 11, CAP).unwrap();
            for kind in GeneratorKind::ALL {
                for idx in 0..3 {
                    assert_matches_naive(&g.generate(kind, idx), &h, &ctx);
                }
            }
        }
    }
}

#[test]
fn cover_and_frequency_on_generated_patterns() {
    let h = toy("toy-a", 3);
    let ctx = IjkContext::new(&h, 2, CAP).unwrap();
    let g = PatternGenerator::new(&h, &ctx, PatternGenerator::default_side(&ctx, 5), 3, CAP).unwrap();
    let mut nonvacuous = 0;
    for kind in GeneratorKind::ALL {
        for idx in 0..20 {
            let r = compute_ijk(&g.generate(kind, idx), &ctx).unwrap();
            nonvacuous += usize::from(!r.i.is_empty());
            assert!(check_admissibility_cover(&r).holds(), "{kind:?} {idx}");
            assert!(check_frequency_bounds(&r, &ctx).unwrap().holds(), "{kind:?} {idx}");
        }
    }
    assert!(nonvacuous >= 20);
}

#[test]
fn b_power_frequency_is_exact() {
    let h = toy("toy-a", 3);
    let ctx = IjkContext::new(&h, 2, CAP).unwrap();
    let row = word(&h, 2, 1).repeat(3);
    // a whole number of b_1 blocks, so b'_2 windows tile every row
    let n = 2 * ctx.ell_prime + h.ell(1).unwrap().to_usize().unwrap();
    let p = verticalize(&row[..n], n).unwrap();
    let r = compute_ijk(&p, &ctx).unwrap();
    assert_eq!(r.j_b.len(), n * n);
    let ratio = BigRational::new(BigInt::from(r.k_b.len()), BigInt::from(r.j_b.len()));
    assert_eq!(ratio, ctx.f_prev_b);
    let rep = check_frequency_bounds(&r, &ctx).unwrap();
    assert!(rep.holds());
    assert!(rep.checks[0].lhs < rep.checks[0].rhs);
    // J^A is empty, so the A bound is 0 <= 0
    assert_eq!(rep.checks[1].lhs, rat(0));
    assert_eq!(rep.checks[1].rhs, rat(0));
}

#[test]
fn parity_routing() {
    let h = toy("toy-a", 3);
    let odd = IjkContext::new(&h, 3, CAP).unwrap();
    let even = IjkContext::new(&h, 2, CAP).unwrap();
    let n = 2 * odd.ell_prime + 1;
    let p = Pattern2D::filled(Alphabet::Tilde, n, n, 1).unwrap();
    let r = compute_ijk(&p, &odd).unwrap();
    assert!(matches!(check_frequency_bounds(&r, &odd), Err(Error::InvalidInput(_))));
    assert!(check_frequency_bounds_mirrored(&r, &odd).unwrap().holds());
    let n = 2 * even.ell_prime + 1;
    let r = compute_ijk(&Pattern2D::filled(Alphabet::Tilde, n, n, 1).unwrap(), &even).unwrap();
    assert!(check_frequency_bounds_mirrored(&r, &even).is_err());
}

fn tiled_b_blocks(h: &Hierarchy, k: u32, tiles: usize, pick: &[usize]) -> Pattern2D {
    let words = [word(h, k, 1), vec![2; h.ell(k).unwrap().to_usize().unwrap()]];
    let l = words[0].len();
    let n = l * tiles;
    let mut cells = vec![0; n * n];
    for ty in 0..tiles {
        for tx in 0..tiles {
            let w = &words[pick[(ty * tiles + tx) % pick.len()]];
            for y in 0..l {
                let row = (ty * l + y) * n + tx * l;
                cells[row..row + l].copy_from_slice(w);
            }
        }
    }
    Pattern2D::new(Alphabet::Tilde, n, n, cells).unwrap()
}

#[test]
fn forbidden_density_bounds() {
    let h = toy("toy-a", 2);
    let l = h.ell(1).unwrap().to_usize().unwrap();
    let block_ok = |p: &Pattern2D, bx: usize, by: usize, s: usize| {
        let w = p.window(bx, by, s, s).unwrap();
        w.is_vertically_aligned() && globally_ok(&h, w.row(1))
    };
    for d in [2usize, 3, l] {
        let test = aligned_window_test(naive_language(&h, d));
        let bound = BigRational::new(BigInt::from(2 * d), BigInt::from(l));
        for pick in [&[0usize][..], &[0, 1], &[1, 0, 0]] {
            let p = tiled_b_blocks(&h, 1, 3, pick);
            let dens = forbidden_position_density(&p, d, l, block_ok, &test).unwrap();
            assert!(dens <= bound, "d={d} pick={pick:?} {dens}");
            if d < l && pick.len() == 1 {
                assert!(dens < bound);
            }
        }
    }
    let single = tiled_b_blocks(&h, 1, 1, &[0]);
    let test = aligned_window_test(naive_language(&h, 2));
    assert_eq!(forbidden_position_density(&single, 2, l, block_ok, &test).unwrap(), rat(0));
    let ragged = single.window(0, 0, l - 1, l - 1).unwrap();
    assert!(forbidden_position_density(&ragged, 2, l, block_ok, &test).is_err());
}

fn globally_ok(h: &Hierarchy, w: &[Symbol]) -> bool {
    crate::language::globally_admissible(h, w, CAP).unwrap()
}

#[test]
fn tilings_are_block_aligned_and_seeded() {
    let blocks = vec![vec![1, 0, 1], vec![2, 2, 0]];
    let p = random_tiling(&blocks, 2, 9, 4).unwrap();
    assert_eq!((p.width, p.height), (6, 6));
    for by in [0, 3] {
        for bx in [0, 3] {
            let w = p.window(bx, by, 3, 3).unwrap();
            assert!(w.is_vertically_aligned());
            assert!(blocks.contains(&w.row(1).to_vec()));
        }
    }
    assert_eq!(p, random_tiling(&blocks, 2, 9, 4).unwrap());
    assert!(random_tiling(&[vec![0], vec![0, 1]], 2, 0, 0).is_err());
}

#[test]
fn one_block_density_counts_straddling_windows() {
    // a single aligned block: no window straddles a block boundary
    let p = verticalize(&[1, 2, 1, 2], 4).unwrap();
    let lang: HashSet<Vec<Symbol>> = [vec![1, 2], vec![2, 1]].into_iter().collect();
    let d = forbidden_position_density(&p, 2, 4, |_, _, _, _| true, aligned_window_test(lang)).unwrap();
    assert_eq!(d, BigRational::from_integer(0.into()));
    // two different rows of blocks: the middle row of translates fails
    let mut cells = vec![1; 8 * 4];
    cells.extend(vec![2; 8 * 4]);
    let q = Pattern2D::new(Alphabet::Tilde, 8, 8, cells).unwrap();
    let lang: HashSet<Vec<Symbol>> = [vec![1, 1], vec![2, 2]].into_iter().collect();
    let d = forbidden_position_density(&q, 2, 4, |_, _, _, _| true, aligned_window_test(lang)).unwrap();
    assert_eq!(d, BigRational::new(7.into(), 49.into()));
    // 2D/l = 1 here
    assert!(d <= BigRational::new(4.into(), 4.into()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_patterns_match_oracle(seed in any::<u64>(), idx in 0u64..1000, kind in 0usize..4) {
        let h = toy("toy-b", 3);
        let ctx = IjkContext::new(&h, 2, CAP).unwrap();
        let g = PatternGenerator::new(&h, &ctx, PatternGenerator::default_side(&ctx, 2), seed, CAP).unwrap();
        let p = g.generate(GeneratorKind::ALL[kind], idx);
        assert_matches_naive(&p, &h, &ctx);
        let r = compute_ijk(&p, &ctx).unwrap();
        prop_assert!(check_admissibility_cover(&r).holds());
        prop_assert_eq!(r.j_a.intersection_len(&r.j_b), 0);
        prop_assert!(check_frequency_bounds(&r, &ctx).unwrap().holds());
    }

    #[test]
    fn duplications_of_vertical_words(w in proptest::collection::vec(0u8..3, 1..12), height in 1usize..6) {
        let zeros = w.iter().filter(|&&s| s == 0).count();
        let p = verticalize(&w, height).unwrap();
        prop_assert_eq!(count_duplications(&p), BigUint::one() << (height * zeros));
    }

    #[test]
    fn generation_is_deterministic(seed in any::<u64>(), idx in 0u64..50) {
        let h = toy("toy-a", 2);
        let ctx = IjkContext::new(&h, 1, CAP).unwrap();
        let g = PatternGenerator::new(&h, &ctx, 20, seed, CAP).unwrap();
        for kind in GeneratorKind::ALL {
            prop_assert_eq!(g.generate(kind, idx), g.generate(kind, idx));
        }
    }
}
