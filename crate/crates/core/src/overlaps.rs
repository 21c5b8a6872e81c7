//! Suffix/prefix overlaps between hierarchy words and their classification.
//!
//! A shift s means v is placed s positions to the right of u, so the last
//! |u| - s symbols of u coincide with the first |u| - s symbols of v. The
//! matched length is |u| - s; s = 0 (full coincidence) is never reported.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{Dict, Parity};
use crate::words::{Hierarchy, MarkedWord, SuccinctWord, Symbol};

/// All nontrivial shifts at which a suffix of u equals a prefix of v,
/// ascending. Words of different lengths are allowed.
pub fn overlap_shifts(u: &[Symbol], v: &[Symbol]) -> Vec<usize> {
    if u.is_empty() || v.is_empty() {
        return Vec::new();
    }
    // prefix function over v # u; the separator never matches
    const SEP: u16 = 256;
    let text: Vec<u16> = v
        .iter()
        .map(|&s| s as u16)
        .chain(std::iter::once(SEP))
        .chain(u.iter().map(|&s| s as u16))
        .collect();
    let mut pi = vec![0usize; text.len()];
    for i in 1..text.len() {
        let mut j = pi[i - 1];
        while j > 0 && text[i] != text[j] {
            j = pi[j - 1];
        }
        if text[i] == text[j] {
            j += 1;
        }
        pi[i] = j;
    }
    let mut shifts = Vec::new();
    let mut m = pi[text.len() - 1];
    while m > 0 {
        if m < u.len() {
            shifts.push(u.len() - m);
        }
        m = pi[m - 1];
    }
    shifts.sort_unstable();
    shifts
}

pub fn overlap_shifts_succinct(u: &SuccinctWord, v: &SuccinctWord, cap: usize) -> Result<Vec<usize>> {
    Ok(overlap_shifts(&u.materialize_all(cap)?, &v.materialize_all(cap)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairOverlap {
    pub u: String,
    pub v: String,
    pub shifts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossOverlapReport {
    pub k: u32,
    pub pairs: Vec<PairOverlap>,
    pub holds: bool,
}

struct Named {
    name: String,
    symbols: Vec<Symbol>,
}

fn named(name: impl Into<String>, w: &SuccinctWord, cap: usize) -> Result<Named> {
    Ok(Named {
        name: name.into(),
        symbols: w.materialize_all(cap)?,
    })
}

/// No word of Ã'_k ∪ Ã_k overlaps a word of B̃'_k ∪ B̃_k, in either order.
/// At k = 0 only Ã_0 and B̃_0 take part.
pub fn verify_no_cross_overlap(h: &Hierarchy, k: u32, cap: usize) -> Result<CrossOverlapReport> {
    let lw = h.words(k)?;
    let mut a_side = vec![named(format!("a_{k}"), &lw.a, cap)?, named(format!("1_{k}"), &lw.ones, cap)?];
    let mut b_side = vec![named(format!("b_{k}"), &lw.b, cap)?, named(format!("2_{k}"), &lw.twos, cap)?];
    if k > 0 {
        let iw = h.intermediate(k)?;
        for w in &iw.a_words {
            a_side.push(named(format!("{}_{k}", w.name), &w.word, cap)?);
        }
        a_side.push(named(format!("1'_{k}"), &iw.ones, cap)?);
        for w in &iw.b_words {
            b_side.push(named(format!("{}_{k}", w.name), &w.word, cap)?);
        }
        b_side.push(named(format!("2'_{k}"), &iw.twos, cap)?);
    }
    let mut pairs = Vec::new();
    for a in &a_side {
        for b in &b_side {
            for (u, v) in [(a, b), (b, a)] {
                pairs.push(PairOverlap {
                    u: u.name.clone(),
                    v: v.name.clone(),
                    shifts: overlap_shifts(&u.symbols, &v.symbols),
                });
            }
        }
    }
    let holds = pairs.iter().all(|p| p.shifts.is_empty());
    Ok(CrossOverlapReport { k, pairs, holds })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail { offending: Vec<OffendingShift> },
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OffendingShift {
    pub u: String,
    pub v: String,
    pub shift: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassVerdict {
    pub class: &'static str,
    pub statement: String,
    #[serde(flatten)]
    pub verdict: Verdict,
}

impl ClassVerdict {
    pub fn passed(&self) -> bool {
        matches!(self.verdict, Verdict::Pass)
    }

    pub fn failed(&self) -> bool {
        matches!(self.verdict, Verdict::Fail { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelfOverlapReport {
    pub k: u32,
    pub parity: Parity,
    /// True at odd k, where the roles of A and B are exchanged.
    pub mirrored: bool,
    pub pairs: Vec<PairOverlap>,
    pub classes: Vec<ClassVerdict>,
}

impl SelfOverlapReport {
    pub fn all_pass(&self) -> bool {
        self.classes.iter().all(|c| !c.failed())
    }
}

fn judge<F>(class: &'static str, statement: String, pair: &PairOverlap, ok: F) -> ClassVerdict
where
    F: Fn(usize) -> bool,
{
    let offending: Vec<_> = pair
        .shifts
        .iter()
        .filter(|&&s| !ok(s))
        .map(|&s| OffendingShift {
            u: pair.u.clone(),
            v: pair.v.clone(),
            shift: s,
        })
        .collect();
    ClassVerdict {
        class,
        statement,
        verdict: if offending.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail { offending }
        },
    }
}

fn small(v: &BigUint, what: &str) -> Result<usize> {
    v.to_usize()
        .ok_or_else(|| Error::capacity(what, v, usize::MAX))
}

fn within(lo: usize, hi: usize, range: &Option<(BigUint, BigUint)>) -> bool {
    match range {
        Some((a, b)) => {
            let (a, b) = (a.to_usize().unwrap_or(usize::MAX), b.to_usize().unwrap_or(usize::MAX));
            a <= lo && hi <= b
        }
        None => false,
    }
}

/// Classify every self-overlap of the level-k words.
///
/// Written for even k, with the sparse dictionary A and dense dictionary B:
/// (i) shifts of a_k against itself are at least (N_k-1)ℓ_{k-1};
/// (ii) shifts of b_k against itself are multiples of ℓ_{k-1} or leave a match
/// of at most ℓ_{k-2} symbols;
/// (iii) a'_k and a''_k do not overlap themselves;
/// (iv) a'_k and a''_k overlap only marker on marker, or terminal segment of
/// the left word on initial segment of the right word.
/// At odd k the same statements are checked with A and B exchanged.
pub fn classify_self_overlaps(h: &Hierarchy, k: u32, cap: usize) -> Result<SelfOverlapReport> {
    if k == 0 {
        return Err(Error::Undefined("self-overlap classes need k >= 1".into()));
    }
    let st = h.state(k)?;
    let parity = st.parity();
    let (sparse_dict, dense_dict) = match parity {
        Parity::Even => (Dict::A, Dict::B),
        Parity::Odd => (Dict::B, Dict::A),
    };
    let lw = h.words(k)?;
    let iw = h.intermediate(k)?;
    let ell = small(&st.ell, "l_k")?;
    let ell_prev = small(&h.state(k - 1)?.ell, "l_{k-1}")?;
    let n = small(st.n_big.as_ref().expect("k >= 1"), "N_k")?;

    let sparse = named(format!("{}_{k}", dict_letter(sparse_dict)), lw.word(sparse_dict), cap)?;
    let dense = named(format!("{}_{k}", dict_letter(dense_dict)), lw.word(dense_dict), cap)?;
    let primes: &[MarkedWord] = iw.dict_words(sparse_dict);
    let primes_named = primes
        .iter()
        .map(|w| named(format!("{}_{k}", w.name), &w.word, cap))
        .collect::<Result<Vec<_>>>()?;

    let self_pair = |w: &Named| PairOverlap {
        u: w.name.clone(),
        v: w.name.clone(),
        shifts: overlap_shifts(&w.symbols, &w.symbols),
    };
    let mut pairs = Vec::new();
    let mut classes = Vec::new();

    let p_sparse = self_pair(&sparse);
    let bound = (n - 1) * ell_prev;
    classes.push(judge(
        "i",
        format!("{} overlaps itself only at shifts >= (N_k-1) l_(k-1) = {bound}", sparse.name),
        &p_sparse,
        |s| s >= bound,
    ));
    pairs.push(p_sparse);

    let p_dense = self_pair(&dense);
    if k >= 2 {
        let ell_pp = small(&h.state(k - 2)?.ell, "l_{k-2}")?;
        classes.push(judge(
            "ii",
            format!(
                "{} overlaps itself at multiples of l_(k-1) = {ell_prev} or with match length <= l_(k-2) = {ell_pp}",
                dense.name
            ),
            &p_dense,
            |s| s % ell_prev == 0 || ell - s <= ell_pp,
        ));
    } else {
        classes.push(ClassVerdict {
            class: "ii",
            statement: format!("{} self-overlap classes", dense.name),
            verdict: Verdict::Skipped {
                reason: "l_(k-2) is undefined for k < 2".into(),
            },
        });
    }
    pairs.push(p_dense);

    for w in &primes_named {
        let p = self_pair(w);
        classes.push(judge("iii", format!("{} does not overlap itself", w.name), &p, |_| false));
        pairs.push(p);
    }

    // (iv): the prime word (marker at the end) against the double prime (marker at the start)
    let (first, second) = (&primes[0], &primes[1]);
    let (first_n, second_n) = (&primes_named[0], &primes_named[1]);
    for (u, un, v, vn) in [(first, first_n, second, second_n), (second, second_n, first, first_n)] {
        let p = PairOverlap {
            u: un.name.clone(),
            v: vn.name.clone(),
            shifts: overlap_shifts(&un.symbols, &vn.symbols),
        };
        let len = un.symbols.len();
        classes.push(judge(
            "iv",
            format!(
                "{} then {}: overlap lies on both markers or on terminal then initial segments",
                un.name, vn.name
            ),
            &p,
            |s| {
                let (ulo, uhi) = (s + 1, len);
                let (vlo, vhi) = (1, len - s);
                (within(ulo, uhi, &u.marker) && within(vlo, vhi, &v.marker))
                    || (within(ulo, uhi, &u.terminal) && within(vlo, vhi, &v.initial))
            },
        ));
        pairs.push(p);
    }

    Ok(SelfOverlapReport {
        k,
        parity,
        mirrored: parity == Parity::Odd,
        pairs,
        classes,
    })
}

fn dict_letter(d: Dict) -> &'static str {
    match d {
        Dict::A => "a",
        Dict::B => "b",
    }
}
