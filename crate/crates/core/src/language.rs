//! Forbidden words, language slices, complexity and reconstruction checks for
//! the one-dimensional subshift generated by the dictionaries L̃_k.

use std::collections::{BTreeSet, HashSet};
use std::ops::ControlFlow;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::words::{symbols_to_string, Hierarchy, Symbol};

const ALPHABET: [Symbol; 3] = [0, 1, 2];

fn word_string<S: Serializer>(w: &[Symbol], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&symbols_to_string(w))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ForbiddenWordRecord {
    pub n: usize,
    #[serde(serialize_with = "word_string")]
    pub word: Vec<Symbol>,
    pub k: u32,
    pub p: u64,
}

/// The level used for words of length n: the least k with ℓ_k ≥ n, and the
/// block index p with (p-1)ℓ_{k-1} < n ≤ pℓ_{k-1}. For n ≤ ℓ_0 the result is
/// k = 0, p = n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelChoice {
    pub k: u32,
    pub p: u64,
    /// Length of the terminal and initial segments that are concatenated.
    pub segment_len: usize,
}

pub fn level_for_length(h: &Hierarchy, n: usize) -> Result<LevelChoice> {
    if n == 0 {
        return Err(Error::invalid("word length must be at least 1"));
    }
    let nb = BigUint::from(n);
    let k = h
        .states
        .iter()
        .position(|s| s.ell >= nb)
        .ok_or_else(|| {
            Error::capacity(
                "word length",
                n,
                format!("l_{} = {}", h.max_level(), h.states.last().expect("nonempty").ell),
            )
        })? as u32;
    if k == 0 {
        return Ok(LevelChoice {
            k,
            p: n as u64,
            segment_len: 2,
        });
    }
    let ell_prev = h.state(k - 1)?.ell.to_usize().expect("l_{k-1} < n");
    let p = n.div_ceil(ell_prev);
    let ell = &h.state(k)?.ell;
    let seg = BigUint::from((p + 1) * ell_prev).min(ell.clone());
    Ok(LevelChoice {
        k,
        p: p as u64,
        segment_len: seg.to_usize().expect("segment below l_k"),
    })
}

/// One of the 16 texts terminal(w1)·initial(w2), w1, w2 ∈ {a_k, b_k, 1^{ℓ_k}, 2^{ℓ_k}}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairText {
    pub left: &'static str,
    pub right: &'static str,
    pub text: Vec<Symbol>,
}

/// Concatenations of the terminal `seg` symbols of w1 with the initial `seg`
/// symbols of w2, over all 16 ordered pairs of level-k words.
pub fn segment_texts(h: &Hierarchy, k: u32, seg: usize, cap: usize) -> Result<Vec<PairText>> {
    let lw = h.words(k)?;
    let ell = lw.ell().clone();
    let seg_b = BigUint::from(seg);
    if seg_b > ell {
        return Err(Error::invalid(format!("segment {seg} longer than l_{k} = {ell}")));
    }
    if 2 * seg > cap {
        return Err(Error::capacity("materialized symbols", 2 * seg, cap));
    }
    let named = lw.named();
    let mut heads = Vec::with_capacity(4);
    let mut tails = Vec::with_capacity(4);
    for (_, w) in &named {
        heads.push(w.materialize(&BigUint::from(1u32), &seg_b, cap)?);
        tails.push(w.materialize(&(&ell - &seg_b + 1u32), &ell, cap)?);
    }
    let mut out = Vec::with_capacity(16);
    for (i, (ln, _)) in named.iter().enumerate() {
        for (j, (rn, _)) in named.iter().enumerate() {
            let mut text = tails[i].clone();
            text.extend_from_slice(&heads[j]);
            out.push(PairText {
                left: ln,
                right: rn,
                text,
            });
        }
    }
    Ok(out)
}

/// The 16 full concatenations w1·w2 at level k.
pub fn full_concatenations(h: &Hierarchy, k: u32, cap: usize) -> Result<Vec<PairText>> {
    let ell = h.ell(k)?;
    match ell.to_usize() {
        Some(l) if 2 * l <= cap => segment_texts(h, k, l, cap),
        _ => Err(Error::capacity("materialized symbols", ell * 2u32, cap)),
    }
}

/// Whether `w` occurs in some concatenation of two words of L̃_k, for the
/// least k with ℓ_k ≥ |w|.
pub fn globally_admissible(h: &Hierarchy, w: &[Symbol], cap: usize) -> Result<bool> {
    let choice = level_for_length(h, w.len())?;
    globally_admissible_at(h, w, choice.k, cap)
}

/// Same test at an explicit level k with ℓ_k ≥ |w|.
pub fn globally_admissible_at(h: &Hierarchy, w: &[Symbol], k: u32, cap: usize) -> Result<bool> {
    if w.is_empty() {
        return Err(Error::invalid("empty word"));
    }
    if h.ell(k)? < &BigUint::from(w.len()) {
        return Err(Error::invalid(format!("l_{k} is shorter than the word")));
    }
    Ok(full_concatenations(h, k, cap)?
        .iter()
        .any(|t| t.text.windows(w.len()).any(|x| x == w)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LanguageSlice {
    pub n: usize,
    pub k: u32,
    pub count: usize,
    #[serde(skip)]
    pub words: BTreeSet<Vec<Symbol>>,
}

/// Distinct length-n windows of the 16 full concatenations at the least
/// admissible level.
pub fn language_slice(h: &Hierarchy, n: usize, cap: usize) -> Result<LanguageSlice> {
    let k = level_for_length(h, n)?.k;
    language_slice_at(h, n, k, cap)
}

pub fn language_slice_at(h: &Hierarchy, n: usize, k: u32, cap: usize) -> Result<LanguageSlice> {
    if n == 0 {
        return Err(Error::invalid("word length must be at least 1"));
    }
    if h.ell(k)? < &BigUint::from(n) {
        return Err(Error::invalid(format!("l_{k} is shorter than {n}")));
    }
    let mut words = BTreeSet::new();
    for t in full_concatenations(h, k, cap)? {
        for w in t.text.windows(n) {
            if !words.contains(w) {
                words.insert(w.to_vec());
            }
        }
    }
    Ok(LanguageSlice {
        n,
        k,
        count: words.len(),
        words,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexityEntry {
    pub n: usize,
    pub count: usize,
    /// (1/n)·ln C(n)
    pub log_over_n: f64,
}

pub fn complexity_function(h: &Hierarchy, n_max: usize, cap: usize) -> Result<Vec<ComplexityEntry>> {
    (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let count = language_slice(h, n, cap)?.count;
            Ok(ComplexityEntry {
                n,
                count,
                log_over_n: (count as f64).ln() / n as f64,
            })
        })
        .collect()
}

/// Work counters for one forbidden slice. `elapsed_micros` is wall-clock and
/// therefore not reproducible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceStats {
    pub n: usize,
    pub k: u32,
    pub p: u64,
    pub segment_len: usize,
    /// Prefixes visited by the pruned search, emitted words included.
    pub prefixes_examined: u64,
    pub forbidden: u64,
    pub elapsed_micros: u128,
}

/// Stream F̃(n) in lexicographic order (0 < 1 < 2) to `emit`.
///
/// Admissible words are exactly the length-n windows of the segment texts.
/// Those windows are sorted; the search descends through prefixes shared with
/// some window, and a prefix shared with none spans a block of forbidden
/// words that is emitted without further tests.
pub fn for_each_forbidden<F>(h: &Hierarchy, n: usize, cap: usize, mut emit: F) -> Result<SliceStats>
where
    F: FnMut(&[Symbol]) -> ControlFlow<()>,
{
    let start = Instant::now();
    let choice = level_for_length(h, n)?;
    let texts = segment_texts(h, choice.k, choice.segment_len, cap)?;
    let mut windows: Vec<&[Symbol]> = texts.iter().flat_map(|t| t.text.windows(n)).collect();
    windows.sort_unstable();
    windows.dedup();

    let mut stats = SliceStats {
        n,
        k: choice.k,
        p: choice.p,
        segment_len: choice.segment_len,
        prefixes_examined: 0,
        forbidden: 0,
        elapsed_micros: 0,
    };
    let mut prefix = Vec::with_capacity(n);
    let _ = descend(&windows, n, &mut prefix, &mut stats, &mut emit);
    stats.elapsed_micros = start.elapsed().as_micros();
    Ok(stats)
}

fn descend<F>(
    windows: &[&[Symbol]],
    n: usize,
    prefix: &mut Vec<Symbol>,
    stats: &mut SliceStats,
    emit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[Symbol]) -> ControlFlow<()>,
{
    let depth = prefix.len();
    if depth == n {
        return ControlFlow::Continue(());
    }
    let mut rest = windows;
    for c in ALPHABET {
        let split = rest.partition_point(|w| w[depth] <= c);
        let below = rest.partition_point(|w| w[depth] < c);
        let group = &rest[below..split];
        rest = &rest[split..];
        prefix.push(c);
        stats.prefixes_examined += 1;
        let flow = if group.is_empty() {
            emit_block(n, prefix, stats, emit)
        } else {
            descend(group, n, prefix, stats, emit)
        };
        prefix.pop();
        flow?;
    }
    ControlFlow::Continue(())
}

/// Emit every completion of `prefix` to length n in lexicographic order.
fn emit_block<F>(n: usize, prefix: &mut Vec<Symbol>, stats: &mut SliceStats, emit: &mut F) -> ControlFlow<()>
where
    F: FnMut(&[Symbol]) -> ControlFlow<()>,
{
    let fixed = prefix.len();
    prefix.resize(n, 0);
    let result = loop {
        stats.forbidden += 1;
        if let ControlFlow::Break(()) = emit(prefix) {
            break ControlFlow::Break(());
        }
        // odometer over the free positions
        let mut i = n;
        let mut wrapped = true;
        while i > fixed {
            i -= 1;
            if prefix[i] < 2 {
                prefix[i] += 1;
                wrapped = false;
                break;
            }
            prefix[i] = 0;
        }
        if wrapped {
            break ControlFlow::Continue(());
        }
        stats.prefixes_examined += 1;
    };
    prefix.truncate(fixed);
    result
}

/// F̃(n) collected into records.
pub fn forbidden_slice(h: &Hierarchy, n: usize, cap: usize) -> Result<(Vec<ForbiddenWordRecord>, SliceStats)> {
    let mut words = Vec::new();
    let stats = for_each_forbidden(h, n, cap, |w| {
        words.push(w.to_vec());
        ControlFlow::Continue(())
    })?;
    let records = words
        .into_iter()
        .map(|word| ForbiddenWordRecord {
            n,
            word,
            k: stats.k,
            p: stats.p,
        })
        .collect();
    Ok((records, stats))
}

/// Slices 1..=n_max computed in parallel and concatenated in order.
pub fn enumerate_forbidden(
    h: &Hierarchy,
    n_max: usize,
    cap: usize,
) -> Result<(Vec<ForbiddenWordRecord>, Vec<SliceStats>)> {
    let slices: Vec<_> = (1..=n_max)
        .into_par_iter()
        .map(|n| forbidden_slice(h, n, cap))
        .collect::<Result<_>>()?;
    let mut records = Vec::new();
    let mut stats = Vec::with_capacity(slices.len());
    for (r, s) in slices {
        records.extend(r);
        stats.push(s);
    }
    Ok((records, stats))
}

/// Slices 1..=n_max streamed in order through `emit`, one slice at a time.
pub fn stream_forbidden<F>(h: &Hierarchy, n_max: usize, cap: usize, mut emit: F) -> Result<Vec<SliceStats>>
where
    F: FnMut(&ForbiddenWordRecord) -> ControlFlow<()>,
{
    let mut all = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let choice = level_for_length(h, n)?;
        let mut stopped = false;
        let stats = for_each_forbidden(h, n, cap, |w| {
            let rec = ForbiddenWordRecord {
                n,
                word: w.to_vec(),
                k: choice.k,
                p: choice.p,
            };
            let flow = emit(&rec);
            stopped = flow.is_break();
            flow
        })?;
        all.push(stats);
        if stopped {
            break;
        }
    }
    Ok(all)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReconstructionReport {
    pub n: usize,
    pub window: usize,
    /// Level used for the global test.
    pub global_level: u32,
    pub locally_admissible: u64,
    pub globally_admissible: u64,
    pub holds: bool,
    pub counterexample: Option<String>,
}

/// Check that every locally admissible word of length 2n+1 is globally
/// admissible.
///
/// Locally admissible words are grown one symbol at a time; each new suffix of
/// length m is tested against L(m) taken at the least level for m, which
/// prunes every extension of a word containing a forbidden factor. Survivors
/// are tested against windows at the next level up when it is materializable.
pub fn verify_reconstruction(h: &Hierarchy, n: usize, cap: usize) -> Result<ReconstructionReport> {
    let len = 2 * n + 1;
    let mut lang: Vec<HashSet<Vec<Symbol>>> = vec![HashSet::new()];
    for m in 1..=len {
        lang.push(language_slice(h, m, cap)?.words.into_iter().collect());
    }
    let k_min = level_for_length(h, len)?.k;
    let global_level = if k_min < h.max_level() && full_concatenations(h, k_min + 1, cap).is_ok() {
        k_min + 1
    } else {
        k_min
    };
    let texts = full_concatenations(h, global_level, cap)?;
    let global: HashSet<&[Symbol]> = texts.iter().flat_map(|t| t.text.windows(len)).collect();

    let mut report = ReconstructionReport {
        n,
        window: len,
        global_level,
        locally_admissible: 0,
        globally_admissible: 0,
        holds: true,
        counterexample: None,
    };
    let mut word = Vec::with_capacity(len);
    grow(&lang, &global, len, &mut word, &mut report);
    Ok(report)
}

fn grow(
    lang: &[HashSet<Vec<Symbol>>],
    global: &HashSet<&[Symbol]>,
    len: usize,
    word: &mut Vec<Symbol>,
    report: &mut ReconstructionReport,
) {
    if word.len() == len {
        report.locally_admissible += 1;
        if global.contains(&word[..]) {
            report.globally_admissible += 1;
        } else {
            report.holds = false;
            report
                .counterexample
                .get_or_insert_with(|| symbols_to_string(word));
        }
        return;
    }
    for c in ALPHABET {
        word.push(c);
        let j = word.len();
        let ok = (1..=j).all(|m| lang[m].contains(&word[j - m..]));
        if ok {
            grow(lang, global, len, word, report);
        }
        word.pop();
    }
}
