//! Square patterns over Ã and the duplicated alphabet, vertically aligned
//! windows, and the index sets I, I^A, I^B, J^A, J^B, K^A, K^B.
//!
//! A position is (i, j) with i the horizontal coordinate (along a word) and j
//! the vertical one, both 1-based. A vertically aligned pattern has
//! p(i, j) = w(i) for every j. Translates u = (u_x, u_y) are 0-based, and the
//! window of side m at u covers u + ⟦1, m⟧².

pub mod generators;

use std::collections::{HashMap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::language::full_concatenations;
use crate::params::{Dict, Parity};
use crate::words::{gamma, symbols_to_string, Alphabet, Hierarchy, Symbol, ZERO_PRIME, ZERO_SECOND};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern2D {
    pub alphabet: Alphabet,
    pub width: usize,
    pub height: usize,
    /// Row-major: `cells[(j - 1) * width + (i - 1)]`.
    pub cells: Vec<Symbol>,
    /// Position of the lower-left cell in Z².
    pub offset: (i64, i64),
}

impl Pattern2D {
    pub fn new(alphabet: Alphabet, width: usize, height: usize, cells: Vec<Symbol>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("pattern sides must be positive"));
        }
        if cells.len() != width * height {
            return Err(Error::invalid(format!(
                "{} cells for a {width}x{height} pattern",
                cells.len()
            )));
        }
        if let Some(bad) = cells.iter().find(|s| !alphabet.contains(**s)) {
            return Err(Error::invalid(format!("symbol {bad} outside {alphabet:?}")));
        }
        Ok(Pattern2D {
            alphabet,
            width,
            height,
            cells,
            offset: (1, 1),
        })
    }

    pub fn filled(alphabet: Alphabet, width: usize, height: usize, symbol: Symbol) -> Result<Self> {
        Pattern2D::new(alphabet, width, height, vec![symbol; width * height])
    }

    /// The symbol at 1-based (i, j).
    pub fn get(&self, i: usize, j: usize) -> Symbol {
        self.cells[(j - 1) * self.width + (i - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, s: Symbol) {
        self.cells[(j - 1) * self.width + (i - 1)] = s;
    }

    /// Row j (1-based) as a slice.
    pub fn row(&self, j: usize) -> &[Symbol] {
        &self.cells[(j - 1) * self.width..j * self.width]
    }

    pub fn rows(&self) -> Vec<String> {
        (1..=self.height).map(|j| symbols_to_string(self.row(j))).collect()
    }

    pub fn zero_cells(&self) -> usize {
        self.cells.iter().filter(|&&s| s == 0).count()
    }

    pub fn is_square(&self) -> bool {
        self.width == self.height
    }

    /// True when every column is constant.
    pub fn is_vertically_aligned(&self) -> bool {
        (2..=self.height).all(|j| self.row(j) == self.row(1))
    }

    /// The sub-pattern of side (w, h) whose lower-left cell is u + (1, 1).
    pub fn window(&self, ux: usize, uy: usize, w: usize, h: usize) -> Result<Pattern2D> {
        if ux + w > self.width || uy + h > self.height {
            return Err(Error::invalid("window outside the pattern"));
        }
        let mut cells = Vec::with_capacity(w * h);
        for j in uy + 1..=uy + h {
            cells.extend_from_slice(&self.row(j)[ux..ux + w]);
        }
        Ok(Pattern2D {
            alphabet: self.alphabet,
            width: w,
            height: h,
            cells,
            offset: (self.offset.0 + ux as i64, self.offset.1 + uy as i64),
        })
    }
}

/// The pattern whose every row equals `w`.
pub fn verticalize(w: &[Symbol], height: usize) -> Result<Pattern2D> {
    if height == 0 || w.is_empty() {
        return Err(Error::invalid("verticalize needs a nonempty word and height >= 1"));
    }
    let alphabet = if w.iter().all(|s| Alphabet::Tilde.contains(*s)) {
        Alphabet::Tilde
    } else {
        Alphabet::Duplicated
    };
    Pattern2D::new(alphabet, w.len(), height, w.repeat(height))
}

/// Cellwise collapse γ of a duplicated pattern onto Ã.
pub fn project(p: &Pattern2D) -> Result<Pattern2D> {
    if p.alphabet != Alphabet::Duplicated {
        return Err(Error::invalid("project expects a pattern over the duplicated alphabet"));
    }
    let cells = p.cells.iter().map(|&s| gamma(s)).collect::<Result<Vec<_>>>()?;
    Ok(Pattern2D {
        alphabet: Alphabet::Tilde,
        cells,
        ..*p
    })
}

/// A preimage under γ: each 0 becomes 0' or 0'' according to `choose`.
pub fn lift<F: FnMut(usize) -> bool>(p: &Pattern2D, mut choose: F) -> Result<Pattern2D> {
    if p.alphabet != Alphabet::Tilde {
        return Err(Error::invalid("lift expects a pattern over the tilde alphabet"));
    }
    let cells = p
        .cells
        .iter()
        .enumerate()
        .map(|(idx, &s)| match s {
            0 if choose(idx) => ZERO_SECOND,
            0 => ZERO_PRIME,
            s => s,
        })
        .collect();
    Ok(Pattern2D {
        alphabet: Alphabet::Duplicated,
        cells,
        ..*p
    })
}

/// Number of preimages under the zero-duplication collapse: 2^{#zero cells}.
pub fn count_duplications(p: &Pattern2D) -> BigUint {
    BigUint::one() << p.zero_cells()
}

/// Every preimage of `p` under γ, built cell by cell; refuses more than `limit`.
pub fn enumerate_duplications(p: &Pattern2D, limit: usize) -> Result<Vec<Pattern2D>> {
    let zeros: Vec<usize> = (0..p.cells.len()).filter(|&i| p.cells[i] == 0).collect();
    if zeros.len() >= usize::BITS as usize || (1usize << zeros.len()) > limit {
        return Err(Error::capacity("duplicated patterns", count_duplications(p), limit));
    }
    let mut out = Vec::with_capacity(1 << zeros.len());
    for mask in 0u64..(1u64 << zeros.len()) {
        let mut cells = p.cells.clone();
        for (bit, &idx) in zeros.iter().enumerate() {
            cells[idx] = if mask >> bit & 1 == 1 { ZERO_SECOND } else { ZERO_PRIME };
        }
        out.push(Pattern2D {
            alphabet: Alphabet::Duplicated,
            cells,
            ..*p
        });
    }
    Ok(out)
}

/// Polynomial rolling hash over a symbol slice, wrapping in u64.
struct RollingHash {
    prefix: Vec<u64>,
    pow: Vec<u64>,
}

const HASH_BASE: u64 = 0x100_0000_01b3;

impl RollingHash {
    fn new(s: &[Symbol]) -> Self {
        let mut prefix = Vec::with_capacity(s.len() + 1);
        let mut pow = Vec::with_capacity(s.len() + 1);
        prefix.push(0u64);
        pow.push(1u64);
        for &c in s {
            let last = *prefix.last().expect("nonempty");
            prefix.push(last.wrapping_mul(HASH_BASE).wrapping_add(c as u64 + 1));
            pow.push(pow.last().expect("nonempty").wrapping_mul(HASH_BASE));
        }
        RollingHash { prefix, pow }
    }

    /// Hash of s[i..i+m].
    fn get(&self, i: usize, m: usize) -> u64 {
        self.prefix[i + m].wrapping_sub(self.prefix[i].wrapping_mul(self.pow[m]))
    }
}

fn hash_of(s: &[Symbol]) -> u64 {
    RollingHash::new(s).get(0, s.len())
}

/// A set of equal-length words supporting lookup of row segments by hash.
#[derive(Debug, Clone)]
struct WordSet {
    len: usize,
    words: HashMap<u64, Vec<Vec<Symbol>>>,
}

impl WordSet {
    fn new(len: usize) -> Self {
        WordSet {
            len,
            words: HashMap::new(),
        }
    }

    fn insert(&mut self, w: &[Symbol]) {
        debug_assert_eq!(w.len(), self.len);
        let bucket = self.words.entry(hash_of(w)).or_default();
        if !bucket.iter().any(|x| x == w) {
            bucket.push(w.to_vec());
        }
    }

    fn contains_hashed(&self, h: u64, w: &[Symbol]) -> bool {
        self.words
            .get(&h)
            .is_some_and(|b| b.iter().any(|x| x == w))
    }

    fn size(&self) -> usize {
        self.words.values().map(Vec::len).sum()
    }
}

/// Level data shared by every pattern checked at scale ℓ'_k.
#[derive(Debug, Clone)]
pub struct IjkContext {
    pub k: u32,
    pub ell_prime: usize,
    pub parity: Parity,
    /// L(X̃, 2ℓ'_k)
    language: WordSet,
    /// Ã'_k (constant word included)
    a_words: WordSet,
    /// B̃'_k (constant word included)
    b_words: WordSet,
    pub a_names: Vec<(String, Vec<Symbol>)>,
    pub b_names: Vec<(String, Vec<Symbol>)>,
    /// N_{k-1}; undefined at k = 1.
    pub n_prev: Option<BigUint>,
    pub n_prime: BigUint,
    pub f_prev_a: BigRational,
    pub f_prev_b: BigRational,
}

impl IjkContext {
    pub fn new(h: &Hierarchy, k: u32, cap: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Undefined("the intermediate scale needs k >= 1".into()));
        }
        let st = h.state(k)?;
        let (_, np, lp) = st.require_n()?;
        let ell_prime = lp
            .to_usize()
            .filter(|&l| 2 * l <= cap)
            .ok_or_else(|| Error::capacity("materialized symbols", lp * 2u32, cap))?;
        let m = 2 * ell_prime;
        // least level whose words reach length 2l'_k
        let lk = h
            .states
            .iter()
            .position(|s| s.ell >= BigUint::from(m))
            .ok_or_else(|| Error::capacity("word length", m, h.max_level()))? as u32;
        let mut language = WordSet::new(m);
        for t in full_concatenations(h, lk, cap)? {
            for w in t.text.windows(m) {
                language.insert(w);
            }
        }
        let iw = h.intermediate(k)?;
        let mut a_words = WordSet::new(ell_prime);
        let mut b_words = WordSet::new(ell_prime);
        let mut a_names = Vec::new();
        let mut b_names = Vec::new();
        let a_src = iw.a_words.iter().map(|w| (w.name, &w.word)).chain([("1'", &iw.ones)]);
        for (name, w) in a_src {
            let sym = w.materialize_all(cap)?;
            a_words.insert(&sym);
            a_names.push((name.to_string(), sym));
        }
        let b_src = iw.b_words.iter().map(|w| (w.name, &w.word)).chain([("2'", &iw.twos)]);
        for (name, w) in b_src {
            let sym = w.materialize_all(cap)?;
            b_words.insert(&sym);
            b_names.push((name.to_string(), sym));
        }
        let prev = h.state(k - 1)?;
        Ok(IjkContext {
            k,
            ell_prime,
            parity: st.parity(),
            language,
            a_words,
            b_words,
            a_names,
            b_names,
            n_prev: prev.n_big.clone(),
            n_prime: np.clone(),
            f_prev_a: prev.f_a(),
            f_prev_b: prev.f_b(),
        })
    }

    pub fn language_size(&self) -> usize {
        self.language.size()
    }

    /// Whether `w` (length ℓ'_k) belongs to Ã'_k or B̃'_k.
    pub fn dictionary_of(&self, w: &[Symbol]) -> Option<Dict> {
        let h = hash_of(w);
        if w.len() == self.ell_prime && self.a_words.contains_hashed(h, w) {
            Some(Dict::A)
        } else if w.len() == self.ell_prime && self.b_words.contains_hashed(h, w) {
            Some(Dict::B)
        } else {
            None
        }
    }

    pub fn in_language(&self, w: &[Symbol]) -> bool {
        w.len() == self.language.len && self.language.contains_hashed(hash_of(w), w)
    }
}

/// A boolean mask over positions ⟦1, n⟧².
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionSet {
    pub side: usize,
    bits: Vec<bool>,
    count: usize,
}

impl PositionSet {
    fn empty(side: usize) -> Self {
        PositionSet {
            side,
            bits: vec![false; side * side],
            count: 0,
        }
    }

    fn from_bits(side: usize, bits: Vec<bool>) -> Self {
        let count = bits.iter().filter(|&&b| b).count();
        PositionSet { side, bits, count }
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i >= 1 && j >= 1 && i <= self.side && j <= self.side && self.bits[(j - 1) * self.side + (i - 1)]
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn positions(&self) -> Vec<(usize, usize)> {
        (0..self.bits.len())
            .filter(|&x| self.bits[x])
            .map(|x| (x % self.side + 1, x / self.side + 1))
            .collect()
    }

    pub fn intersection_len(&self, other: &PositionSet) -> usize {
        self.bits.iter().zip(&other.bits).filter(|(a, b)| **a && **b).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IjkCounts {
    pub i: usize,
    pub i_a: usize,
    pub i_b: usize,
    pub j_a: usize,
    pub j_b: usize,
    pub k_a: usize,
    pub k_b: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IjkReport {
    pub k: u32,
    pub n: usize,
    pub ell_prime: usize,
    pub i: Vec<(usize, usize)>,
    pub i_a: Vec<(usize, usize)>,
    pub i_b: Vec<(usize, usize)>,
    pub j_a: PositionSet,
    pub j_b: PositionSet,
    pub k_a: PositionSet,
    pub k_b: PositionSet,
}

impl IjkReport {
    pub fn counts(&self) -> IjkCounts {
        IjkCounts {
            i: self.i.len(),
            i_a: self.i_a.len(),
            i_b: self.i_b.len(),
            j_a: self.j_a.len(),
            j_b: self.j_b.len(),
            k_a: self.k_a.len(),
            k_b: self.k_b.len(),
        }
    }
}

/// For each row j and start column x (both 0-based), whether the side-m window
/// with lower-left cell (x+1, j+1) is vertically constant.
#[allow(clippy::needless_range_loop)]
fn constant_windows(p: &Pattern2D, m: usize) -> Vec<Vec<bool>> {
    let n = p.width;
    let rows = p.height;
    // run[j][i]: how many following rows repeat cell (i, j)
    let mut run = vec![vec![0usize; n]; rows];
    for j in (0..rows.saturating_sub(1)).rev() {
        for i in 0..n {
            if p.cells[j * n + i] == p.cells[(j + 1) * n + i] {
                run[j][i] = run[j + 1][i] + 1;
            }
        }
    }
    let mut out = vec![Vec::new(); rows];
    for j in 0..rows {
        if j + m > rows {
            break;
        }
        let mut bad_prefix = vec![0usize; n + 1];
        for i in 0..n {
            bad_prefix[i + 1] = bad_prefix[i] + usize::from(run[j][i] + 1 < m);
        }
        out[j] = (0..=n - m).map(|x| bad_prefix[x + m] == bad_prefix[x]).collect();
    }
    out
}

/// The index sets at scale ℓ'_k for a square pattern of side n > 2ℓ'_k.
#[allow(clippy::needless_range_loop)]
pub fn compute_ijk(p: &Pattern2D, ctx: &IjkContext) -> Result<IjkReport> {
    if p.alphabet != Alphabet::Tilde {
        return Err(Error::invalid("index sets are defined for patterns over the tilde alphabet"));
    }
    if !p.is_square() {
        return Err(Error::invalid("index sets need a square pattern"));
    }
    let n = p.width;
    let lp = ctx.ell_prime;
    if n <= 2 * lp {
        return Err(Error::invalid(format!("pattern side {n} must exceed 2l'_k = {}", 2 * lp)));
    }
    let hashes: Vec<RollingHash> = (1..=n).map(|j| RollingHash::new(p.row(j))).collect();

    let big = constant_windows(p, 2 * lp);
    let mut i_set = Vec::new();
    for uy in 0..=n - 2 * lp {
        for ux in 0..=n - 2 * lp {
            if big[uy][ux] {
                let seg = &p.row(uy + 1)[ux..ux + 2 * lp];
                if ctx.language.contains_hashed(hashes[uy].get(ux, 2 * lp), seg) {
                    i_set.push((ux, uy));
                }
            }
        }
    }

    let small = constant_windows(p, lp);
    let mut i_a = Vec::new();
    let mut i_b = Vec::new();
    for uy in 0..=n - lp {
        for ux in 0..=n - lp {
            if small[uy][ux] {
                let seg = &p.row(uy + 1)[ux..ux + lp];
                let h = hashes[uy].get(ux, lp);
                if ctx.a_words.contains_hashed(h, seg) {
                    i_a.push((ux, uy));
                } else if ctx.b_words.contains_hashed(h, seg) {
                    i_b.push((ux, uy));
                }
            }
        }
    }

    let j_a = cover(n, lp, &i_a);
    let j_b = cover(n, lp, &i_b);
    let zeros = |j: &PositionSet| {
        PositionSet::from_bits(
            n,
            j.bits.iter().zip(&p.cells).map(|(&b, &c)| b && c == 0).collect(),
        )
    };
    Ok(IjkReport {
        k: ctx.k,
        n,
        ell_prime: lp,
        i: i_set,
        k_a: zeros(&j_a),
        k_b: zeros(&j_b),
        i_a,
        i_b,
        j_a,
        j_b,
    })
}

/// Union of u + ⟦1, m⟧² over the translates, via a 2D difference array.
fn cover(n: usize, m: usize, translates: &[(usize, usize)]) -> PositionSet {
    if translates.is_empty() {
        return PositionSet::empty(n);
    }
    let w = n + 1;
    let mut diff = vec![0i64; w * w];
    for &(ux, uy) in translates {
        let (x0, y0, x1, y1) = (ux, uy, ux + m, uy + m);
        diff[y0 * w + x0] += 1;
        if x1 < w {
            diff[y0 * w + x1] -= 1;
        }
        if y1 < w {
            diff[y1 * w + x0] -= 1;
            if x1 < w {
                diff[y1 * w + x1] += 1;
            }
        }
    }
    for y in 0..w {
        for x in 1..w {
            diff[y * w + x] += diff[y * w + x - 1];
        }
    }
    for y in 1..w {
        for x in 0..w {
            diff[y * w + x] += diff[(y - 1) * w + x];
        }
    }
    let bits = (0..n * n).map(|idx| diff[(idx / n) * w + idx % n] > 0).collect();
    PositionSet::from_bits(n, bits)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub disjoint: bool,
    pub included: bool,
    pub i_count: usize,
    /// Translates u ∈ I with u + τ'_k outside J^A ∪ J^B (at most 16 listed).
    pub uncovered: Vec<(usize, usize)>,
}

impl CoverReport {
    pub fn holds(&self) -> bool {
        self.disjoint && self.included
    }
}

/// J^A ∩ J^B = ∅ and τ'_k + I ⊆ J^A ⊔ J^B, with τ'_k = (ℓ'_k, ℓ'_k).
pub fn check_admissibility_cover(r: &IjkReport) -> CoverReport {
    let disjoint = r.j_a.intersection_len(&r.j_b) == 0;
    let lp = r.ell_prime;
    let uncovered_all: Vec<_> = r
        .i
        .iter()
        .copied()
        .filter(|&(ux, uy)| {
            let (x, y) = (ux + lp, uy + lp);
            !(r.j_a.contains(x, y) || r.j_b.contains(x, y))
        })
        .collect();
    CoverReport {
        disjoint,
        included: uncovered_all.is_empty(),
        i_count: r.i.len(),
        uncovered: uncovered_all.into_iter().take(16).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    #[serde(serialize_with = "crate::bigfmt::rational::serialize")]
    pub lhs: BigRational,
    #[serde(serialize_with = "crate::bigfmt::rational::serialize")]
    pub rhs: BigRational,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrequencyReport {
    pub k: u32,
    pub mirrored: bool,
    pub checks: Vec<BoundCheck>,
}

impl FrequencyReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn rat(v: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn big_rat(v: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v.clone()))
}

fn frequency_checks(r: &IjkReport, ctx: &IjkContext, dense: Dict) -> Result<FrequencyReport> {
    let n_prev = ctx
        .n_prev
        .as_ref()
        .ok_or_else(|| Error::Undefined("N_{k-1} is undefined at k = 1".into()))?;
    let (j_dense, k_dense, f_dense, j_sparse, k_sparse, f_sparse) = match dense {
        Dict::B => (&r.j_b, &r.k_b, &ctx.f_prev_b, &r.j_a, &r.k_a, &ctx.f_prev_a),
        Dict::A => (&r.j_a, &r.k_a, &ctx.f_prev_a, &r.j_b, &r.k_b, &ctx.f_prev_b),
    };
    let np = big_rat(n_prev);
    // (1 - 1/N_{k-1})^{-1} = N_{k-1} / (N_{k-1} - 1)
    let factor = &np / (&np - BigRational::one());
    let rhs1 = factor * rat(j_dense.len()) * f_dense;
    let lhs1 = rat(k_dense.len());
    let rhs2 = BigRational::from_integer(BigInt::from(2)) / big_rat(&ctx.n_prime)
        * rat(j_sparse.len())
        * f_sparse;
    let lhs2 = rat(k_sparse.len());
    let (dn, sn) = match dense {
        Dict::B => ("B", "A"),
        Dict::A => ("A", "B"),
    };
    Ok(FrequencyReport {
        k: r.k,
        mirrored: dense == Dict::A,
        checks: vec![
            BoundCheck {
                name: format!("card K^{dn} <= (1 - 1/N_(k-1))^-1 card J^{dn} f^{dn}_(k-1)"),
                holds: lhs1 <= rhs1,
                lhs: lhs1,
                rhs: rhs1,
            },
            BoundCheck {
                name: format!("card K^{sn} <= (2/N'_k) card J^{sn} f^{sn}_(k-1)"),
                holds: lhs2 <= rhs2,
                lhs: lhs2,
                rhs: rhs2,
            },
        ],
    })
}

/// Both zero-frequency bounds for even k ≥ 2, evaluated exactly.
pub fn check_frequency_bounds(r: &IjkReport, ctx: &IjkContext) -> Result<FrequencyReport> {
    if ctx.parity == Parity::Odd {
        return Err(Error::invalid(format!(
            "k = {} is odd; use check_frequency_bounds_mirrored",
            ctx.k
        )));
    }
    if ctx.k < 2 {
        return Err(Error::Undefined("frequency bounds need k >= 2".into()));
    }
    frequency_checks(r, ctx, Dict::B)
}

/// The odd-k statement, with A and B exchanged.
pub fn check_frequency_bounds_mirrored(r: &IjkReport, ctx: &IjkContext) -> Result<FrequencyReport> {
    if ctx.parity == Parity::Even {
        return Err(Error::invalid(format!(
            "k = {} is even; use check_frequency_bounds",
            ctx.k
        )));
    }
    frequency_checks(r, ctx, Dict::A)
}

/// Fraction of translates u ∈ ⟦0, n-D⟧² whose D×D window fails `window_ok`,
/// for a pattern tiled by side-`block` squares that each pass `block_ok`.
/// Both closures receive the pattern, a 0-based translate and a side length.
pub fn forbidden_position_density<B, W>(
    p: &Pattern2D,
    d: usize,
    block: usize,
    block_ok: B,
    window_ok: W,
) -> Result<BigRational>
where
    B: Fn(&Pattern2D, usize, usize, usize) -> bool,
    W: Fn(&Pattern2D, usize, usize, usize) -> bool,
{
    if d == 0 || d > block {
        return Err(Error::invalid(format!("window side {d} must lie in [1, {block}]")));
    }
    if block == 0 || !p.width.is_multiple_of(block) || !p.height.is_multiple_of(block) {
        return Err(Error::invalid(format!(
            "a {}x{} pattern is not tiled by side-{block} blocks",
            p.width, p.height
        )));
    }
    for by in (0..p.height).step_by(block) {
        for bx in (0..p.width).step_by(block) {
            if !block_ok(p, bx, by, block) {
                return Err(Error::invalid(format!("block at ({bx}, {by}) fails the block test")));
            }
        }
    }
    let mut bad = 0usize;
    let mut total = 0usize;
    for uy in 0..=p.height - d {
        for ux in 0..=p.width - d {
            total += 1;
            if !window_ok(p, ux, uy, d) {
                bad += 1;
            }
        }
    }
    Ok(BigRational::new(BigInt::from(bad), BigInt::from(total)))
}

/// Window test "vertically constant with bottom row in `language`".
pub fn aligned_window_test(language: HashSet<Vec<Symbol>>) -> impl Fn(&Pattern2D, usize, usize, usize) -> bool {
    move |p, ux, uy, d| {
        let base = &p.row(uy + 1)[ux..ux + d];
        (uy + 2..=uy + d).all(|j| &p.row(j)[ux..ux + d] == base) && language.contains(base)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PatternSummary {
    pub side: usize,
    pub zero_cells: usize,
    pub vertically_aligned: bool,
}

impl From<&Pattern2D> for PatternSummary {
    fn from(p: &Pattern2D) -> Self {
        PatternSummary {
            side: p.width,
            zero_cells: p.zero_cells(),
            vertically_aligned: p.is_vertically_aligned(),
        }
    }
}

#[cfg(test)]
mod tests;
