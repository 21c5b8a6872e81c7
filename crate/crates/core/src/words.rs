//! Grammar-compressed words over the tilde alphabet {0,1,2} and the
//! duplicated alphabet {0',0'',1,2}.
//!
//! Indices are 1-based throughout. Lengths and zero counts are cached at
//! construction, so words whose length has tens of thousands of digits are
//! still cheap to build, index and count.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::params::{self, Dict, ParamState, Parity, Schedule};

pub type Symbol = u8;

/// Code of 0' in the duplicated alphabet.
pub const ZERO_PRIME: Symbol = 3;
/// Code of 0'' in the duplicated alphabet.
pub const ZERO_SECOND: Symbol = 4;

/// Default bound on the number of symbols a single materialization may produce.
pub const DEFAULT_MATERIALIZE_CAP: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Alphabet {
    /// {0, 1, 2}
    Tilde,
    /// {0', 0'', 1, 2} encoded as 3, 4, 1, 2.
    Duplicated,
}

impl Alphabet {
    pub fn symbols(self) -> &'static [Symbol] {
        match self {
            Alphabet::Tilde => &[0, 1, 2],
            Alphabet::Duplicated => &[ZERO_PRIME, ZERO_SECOND, 1, 2],
        }
    }

    pub fn contains(self, s: Symbol) -> bool {
        self.symbols().contains(&s)
    }

    pub fn size(self) -> usize {
        self.symbols().len()
    }
}

/// The collapse map γ from the duplicated alphabet onto the tilde alphabet.
pub fn gamma(s: Symbol) -> Result<Symbol> {
    match s {
        ZERO_PRIME | ZERO_SECOND => Ok(0),
        1 | 2 => Ok(s),
        _ => Err(Error::invalid(format!(
            "symbol {s} is not in the duplicated alphabet"
        ))),
    }
}

/// An explicit finite word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DenseWord {
    pub alphabet: Alphabet,
    pub symbols: Vec<Symbol>,
}

impl DenseWord {
    pub fn new(alphabet: Alphabet, symbols: Vec<Symbol>) -> Result<Self> {
        if let Some(bad) = symbols.iter().find(|s| !alphabet.contains(**s)) {
            return Err(Error::invalid(format!("symbol {bad} outside {alphabet:?}")));
        }
        Ok(DenseWord { alphabet, symbols })
    }

    /// Parse a digit string such as "0102" over the tilde alphabet.
    pub fn parse_tilde(text: &str) -> Result<Self> {
        let symbols = text
            .bytes()
            .map(|b| match b {
                b'0'..=b'2' => Ok(b - b'0'),
                _ => Err(Error::invalid(format!("bad symbol {:?}", b as char))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DenseWord {
            alphabet: Alphabet::Tilde,
            symbols,
        })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

impl fmt::Display for DenseWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_symbols(f, &self.symbols)
    }
}

pub(crate) fn write_symbols(f: &mut impl fmt::Write, symbols: &[Symbol]) -> fmt::Result {
    for s in symbols {
        f.write_char(char::from(b'0' + s))?;
    }
    Ok(())
}

pub fn symbols_to_string(symbols: &[Symbol]) -> String {
    let mut out = String::with_capacity(symbols.len());
    write_symbols(&mut out, symbols).expect("writing to a String");
    out
}

#[derive(Debug, PartialEq, Eq)]
pub enum Expr {
    Run(Symbol, BigUint),
    Concat(Vec<SuccinctWord>),
    Power(SuccinctWord, BigUint),
}

#[derive(Debug, PartialEq, Eq)]
struct Node {
    expr: Expr,
    len: BigUint,
    zeros: BigUint,
}

/// A word stored as an expression tree of runs, concatenations and powers.
/// Clones share structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuccinctWord(Arc<Node>);

impl SuccinctWord {
    pub fn run(symbol: Symbol, count: impl Into<BigUint>) -> Self {
        let count = count.into();
        let zeros = if symbol == 0 {
            count.clone()
        } else {
            BigUint::zero()
        };
        SuccinctWord(Arc::new(Node {
            len: count.clone(),
            zeros,
            expr: Expr::Run(symbol, count),
        }))
    }

    pub fn concat(parts: Vec<SuccinctWord>) -> Self {
        let len = parts.iter().map(|p| &p.0.len).sum();
        let zeros = parts.iter().map(|p| &p.0.zeros).sum();
        SuccinctWord(Arc::new(Node {
            expr: Expr::Concat(parts),
            len,
            zeros,
        }))
    }

    pub fn power(base: SuccinctWord, exponent: impl Into<BigUint>) -> Self {
        let exponent = exponent.into();
        SuccinctWord(Arc::new(Node {
            len: &base.0.len * &exponent,
            zeros: &base.0.zeros * &exponent,
            expr: Expr::Power(base, exponent),
        }))
    }

    /// A literal word, stored as a concatenation of maximal runs.
    pub fn literal(symbols: &[Symbol]) -> Self {
        let mut parts = Vec::new();
        let mut i = 0;
        while i < symbols.len() {
            let j = symbols[i..]
                .iter()
                .position(|&s| s != symbols[i])
                .map_or(symbols.len(), |d| i + d);
            parts.push(SuccinctWord::run(symbols[i], (j - i) as u64));
            i = j;
        }
        if parts.len() == 1 {
            parts.pop().expect("one part")
        } else {
            SuccinctWord::concat(parts)
        }
    }

    pub fn expr(&self) -> &Expr {
        &self.0.expr
    }

    pub fn len(&self) -> &BigUint {
        &self.0.len
    }

    pub fn is_empty(&self) -> bool {
        self.0.len.is_zero()
    }

    /// Number of occurrences of the symbol 0.
    pub fn zero_count(&self) -> &BigUint {
        &self.0.zeros
    }

    pub fn depth(&self) -> usize {
        match &self.0.expr {
            Expr::Run(..) => 1,
            Expr::Concat(parts) => 1 + parts.iter().map(|p| p.depth()).max().unwrap_or(0),
            Expr::Power(base, _) => 1 + base.depth(),
        }
    }

    /// Recompute length and zero count from the expression alone.
    pub fn recount(&self) -> (BigUint, BigUint) {
        match &self.0.expr {
            Expr::Run(s, c) => (c.clone(), if *s == 0 { c.clone() } else { BigUint::zero() }),
            Expr::Concat(parts) => parts.iter().fold(
                (BigUint::zero(), BigUint::zero()),
                |(l, z), p| {
                    let (pl, pz) = p.recount();
                    (l + pl, z + pz)
                },
            ),
            Expr::Power(base, e) => {
                let (l, z) = base.recount();
                (l * e, z * e)
            }
        }
    }

    /// Set of symbols occurring in the word.
    pub fn symbol_set(&self) -> Vec<Symbol> {
        let mut seen = [false; 256];
        self.collect_symbols(&mut seen);
        (0..=255u8).filter(|&s| seen[s as usize]).collect()
    }

    fn collect_symbols(&self, seen: &mut [bool; 256]) {
        match &self.0.expr {
            Expr::Run(s, c) => {
                if !c.is_zero() {
                    seen[*s as usize] = true;
                }
            }
            Expr::Concat(parts) => parts.iter().for_each(|p| p.collect_symbols(seen)),
            Expr::Power(base, e) => {
                if !e.is_zero() {
                    base.collect_symbols(seen)
                }
            }
        }
    }

    /// The symbol at 1-based position `i`.
    pub fn letter_at(&self, i: &BigUint) -> Result<Symbol> {
        if i.is_zero() || i > self.len() {
            return Err(Error::invalid(format!(
                "index {i} outside [1, {}]",
                self.len()
            )));
        }
        let mut node = self;
        let mut offset = i - 1u32;
        loop {
            match &node.0.expr {
                Expr::Run(s, _) => return Ok(*s),
                Expr::Concat(parts) => {
                    let mut next = None;
                    for p in parts {
                        if &offset < p.len() {
                            next = Some(p);
                            break;
                        }
                        offset -= p.len();
                    }
                    node = next.expect("offset below cached length");
                }
                Expr::Power(base, _) => {
                    offset = offset.mod_floor(base.len());
                    node = base;
                }
            }
        }
    }

    pub fn letter_at_u64(&self, i: u64) -> Result<Symbol> {
        self.letter_at(&BigUint::from(i))
    }

    /// Symbols at 1-based positions `start..=end`. An empty range (end < start) yields
    /// an empty word.
    pub fn materialize(&self, start: &BigUint, end: &BigUint, cap: usize) -> Result<Vec<Symbol>> {
        if end < start {
            return Ok(Vec::new());
        }
        if start.is_zero() || end > self.len() {
            return Err(Error::invalid(format!(
                "window [{start}, {end}] outside [1, {}]",
                self.len()
            )));
        }
        let size = end - start + 1u32;
        let size = match size.to_usize() {
            Some(s) if s <= cap => s,
            _ => return Err(Error::capacity("materialized symbols", size, cap)),
        };
        let mut out = Vec::with_capacity(size);
        self.emit(&(start - 1u32), size, &mut out);
        debug_assert_eq!(out.len(), size);
        Ok(out)
    }

    pub fn materialize_range(&self, start: u64, end: u64, cap: usize) -> Result<Vec<Symbol>> {
        self.materialize(&BigUint::from(start), &BigUint::from(end), cap)
    }

    /// The whole word, subject to `cap`.
    pub fn materialize_all(&self, cap: usize) -> Result<Vec<Symbol>> {
        self.materialize(&BigUint::one(), self.len(), cap)
    }

    pub fn to_dense(&self, cap: usize) -> Result<DenseWord> {
        Ok(DenseWord {
            alphabet: Alphabet::Tilde,
            symbols: self.materialize_all(cap)?,
        })
    }

    /// Appends `count` symbols starting at 0-based `offset`.
    fn emit(&self, offset: &BigUint, count: usize, out: &mut Vec<Symbol>) {
        if count == 0 {
            return;
        }
        match &self.0.expr {
            Expr::Run(s, _) => out.extend(std::iter::repeat_n(*s, count)),
            Expr::Concat(parts) => {
                let mut offset = offset.clone();
                let mut left = count;
                for p in parts {
                    if left == 0 {
                        break;
                    }
                    if &offset >= p.len() {
                        offset -= p.len();
                        continue;
                    }
                    let avail = (p.len() - &offset).to_usize().unwrap_or(usize::MAX);
                    let take = avail.min(left);
                    p.emit(&offset, take, out);
                    left -= take;
                    offset = BigUint::zero();
                }
            }
            Expr::Power(base, _) => {
                let mut inner = offset.mod_floor(base.len());
                let mut left = count;
                while left > 0 {
                    let avail = (base.len() - &inner).to_usize().unwrap_or(usize::MAX);
                    let take = avail.min(left);
                    base.emit(&inner, take, out);
                    left -= take;
                    inner = BigUint::zero();
                }
            }
        }
    }
}

impl fmt::Display for SuccinctWord {
    /// Canonical expression text, e.g. `pow(cat(run(0,1),run(1,1)),64)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.expr {
            Expr::Run(s, c) => write!(f, "run({s},{c})"),
            Expr::Concat(parts) => {
                f.write_str("cat(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
            Expr::Power(base, e) => write!(f, "pow({base},{e})"),
        }
    }
}

/// The four words of length ℓ_k forming L̃_k = {a_k, b_k, 1^{ℓ_k}, 2^{ℓ_k}}.
#[derive(Debug, Clone)]
pub struct LevelWords {
    pub k: u32,
    pub a: SuccinctWord,
    pub b: SuccinctWord,
    pub ones: SuccinctWord,
    pub twos: SuccinctWord,
}

impl LevelWords {
    pub fn level0() -> Self {
        LevelWords {
            k: 0,
            a: SuccinctWord::literal(&[0, 1]),
            b: SuccinctWord::literal(&[0, 2]),
            ones: SuccinctWord::run(1, 2u32),
            twos: SuccinctWord::run(2, 2u32),
        }
    }

    pub fn ell(&self) -> &BigUint {
        self.a.len()
    }

    pub fn word(&self, dict: Dict) -> &SuccinctWord {
        match dict {
            Dict::A => &self.a,
            Dict::B => &self.b,
        }
    }

    /// Named members in the order a, b, 1, 2.
    pub fn named(&self) -> [(&'static str, &SuccinctWord); 4] {
        [
            ("a", &self.a),
            ("b", &self.b),
            ("1", &self.ones),
            ("2", &self.twos),
        ]
    }

    /// The next level from the previous one using (R1) at odd k and (R2) at even k.
    pub fn next(&self, st: &ParamState) -> Result<Self> {
        if st.k != self.k + 1 {
            return Err(Error::invalid(format!(
                "state for level {} cannot extend words of level {}",
                st.k, self.k
            )));
        }
        let (n, _, _) = st.require_n()?;
        let ell = self.ell();
        let gap = (n - 2u32) * ell;
        let (a, b) = match st.parity() {
            Parity::Odd => (
                SuccinctWord::power(self.a.clone(), n.clone()),
                SuccinctWord::concat(vec![
                    self.b.clone(),
                    SuccinctWord::run(2, gap),
                    self.b.clone(),
                ]),
            ),
            Parity::Even => (
                SuccinctWord::concat(vec![
                    self.a.clone(),
                    SuccinctWord::run(1, gap),
                    self.a.clone(),
                ]),
                SuccinctWord::power(self.b.clone(), n.clone()),
            ),
        };
        Ok(LevelWords {
            k: st.k,
            ones: SuccinctWord::run(1, st.ell.clone()),
            twos: SuccinctWord::run(2, st.ell.clone()),
            a,
            b,
        })
    }
}

fn check_history(k: u32, states: &[ParamState]) -> Result<()> {
    if states.len() <= k as usize {
        return Err(Error::capacity("parameter levels", k, states.len().saturating_sub(1)));
    }
    for (i, st) in states.iter().enumerate().take(k as usize + 1) {
        if st.k as usize != i {
            return Err(Error::invalid(format!(
                "state history out of order at index {i} (k = {})",
                st.k
            )));
        }
    }
    Ok(())
}

/// Words of every level 0..=k.
pub fn build_hierarchy(k: u32, states: &[ParamState]) -> Result<Vec<LevelWords>> {
    check_history(k, states)?;
    let mut out = vec![LevelWords::level0()];
    for st in &states[1..=k as usize] {
        let next = out.last().expect("nonempty").next(st)?;
        out.push(next);
    }
    Ok(out)
}

/// {a_k, b_k, 1^{ℓ_k}, 2^{ℓ_k}}.
pub fn build_level(k: u32, states: &[ParamState]) -> Result<LevelWords> {
    Ok(build_hierarchy(k, states)?.pop().expect("nonempty"))
}

/// A word of Ã'_k ∪ B̃'_k together with the block structure needed by the
/// overlap checks. All intervals are 1-based and inclusive.
#[derive(Debug, Clone)]
pub struct MarkedWord {
    pub name: &'static str,
    pub dict: Dict,
    pub word: SuccinctWord,
    /// The constant run 1^{(N'-1)ℓ} or 2^{(N'-1)ℓ}, when the word has one.
    pub marker: Option<(BigUint, BigUint)>,
    /// The copy of a_{k-1} or b_{k-1} at the start.
    pub initial: Option<(BigUint, BigUint)>,
    /// The copy of a_{k-1} or b_{k-1} at the end.
    pub terminal: Option<(BigUint, BigUint)>,
}

/// The intermediate dictionaries Ã'_k and B̃'_k.
#[derive(Debug, Clone)]
pub struct IntermediateWords {
    pub k: u32,
    pub ell_prime: BigUint,
    /// Even k: a'_k, a''_k. Odd k: a'_k.
    pub a_words: Vec<MarkedWord>,
    /// Even k: b'_k. Odd k: b'_k, b''_k.
    pub b_words: Vec<MarkedWord>,
    pub ones: SuccinctWord,
    pub twos: SuccinctWord,
}

impl IntermediateWords {
    pub fn dict_words(&self, dict: Dict) -> &[MarkedWord] {
        match dict {
            Dict::A => &self.a_words,
            Dict::B => &self.b_words,
        }
    }

    pub fn find(&self, name: &str) -> Option<&MarkedWord> {
        self.a_words.iter().chain(&self.b_words).find(|w| w.name == name)
    }

    /// Ã'_k followed by B̃'_k, constant words included: the dictionary L̃'_k.
    pub fn all_words(&self) -> Vec<(&'static str, SuccinctWord)> {
        let mut out: Vec<_> = self.a_words.iter().map(|w| (w.name, w.word.clone())).collect();
        out.push(("1'", self.ones.clone()));
        out.extend(self.b_words.iter().map(|w| (w.name, w.word.clone())));
        out.push(("2'", self.twos.clone()));
        out
    }
}

/// Build a'_k, a''_k, b'_k, b''_k by (R'1) at odd k and (R'2) at even k.
pub fn build_intermediate(k: u32, states: &[ParamState]) -> Result<IntermediateWords> {
    if k == 0 {
        return Err(Error::Undefined(
            "intermediate words need k >= 1".to_string(),
        ));
    }
    let levels = build_hierarchy(k - 1, states)?;
    check_history(k, states)?;
    let prev = levels.last().expect("nonempty");
    let st = &states[k as usize];
    let (_, np, lp) = st.require_n()?;
    let ell = prev.ell().clone();
    let gap = (np - 1u32) * &ell;
    let one = BigUint::one();

    // sparse' = w·c^{gap}, sparse'' = c^{gap}·w, dense' = v^{N'}
    let sparse = |name_p: &'static str, name_s: &'static str, dict: Dict, w: &SuccinctWord, c| {
        let p = MarkedWord {
            name: name_p,
            dict,
            word: SuccinctWord::concat(vec![w.clone(), SuccinctWord::run(c, gap.clone())]),
            marker: Some((&ell + 1u32, lp.clone())),
            initial: Some((one.clone(), ell.clone())),
            terminal: None,
        };
        let s = MarkedWord {
            name: name_s,
            dict,
            word: SuccinctWord::concat(vec![SuccinctWord::run(c, gap.clone()), w.clone()]),
            marker: Some((one.clone(), gap.clone())),
            initial: None,
            terminal: Some((lp - &ell + 1u32, lp.clone())),
        };
        vec![p, s]
    };
    let dense = |name: &'static str, dict: Dict, w: &SuccinctWord| MarkedWord {
        name,
        dict,
        word: SuccinctWord::power(w.clone(), np.clone()),
        marker: None,
        initial: Some((one.clone(), ell.clone())),
        terminal: Some((lp - &ell + 1u32, lp.clone())),
    };
    let (a_words, b_words) = match Parity::of(k) {
        Parity::Even => (
            sparse("a'", "a''", Dict::A, &prev.a, 1),
            vec![dense("b'", Dict::B, &prev.b)],
        ),
        Parity::Odd => (
            vec![dense("a'", Dict::A, &prev.a)],
            sparse("b'", "b''", Dict::B, &prev.b, 2),
        ),
    };
    Ok(IntermediateWords {
        k,
        ell_prime: lp.clone(),
        a_words,
        b_words,
        ones: SuccinctWord::run(1, lp.clone()),
        twos: SuccinctWord::run(2, lp.clone()),
    })
}

/// Parameter states and level words for levels 0..=K, built once and shared.
#[derive(Debug, Clone)]
pub struct Hierarchy {
    pub states: Vec<ParamState>,
    pub levels: Vec<LevelWords>,
}

impl Hierarchy {
    pub fn new(schedule: &Schedule, levels: u32) -> Result<Self> {
        Hierarchy::from_states(params::states(schedule, levels)?)
    }

    pub fn from_states(states: Vec<ParamState>) -> Result<Self> {
        let top = states.len().checked_sub(1).ok_or_else(|| Error::invalid("no states"))?;
        let levels = build_hierarchy(top as u32, &states)?;
        Ok(Hierarchy { states, levels })
    }

    pub fn max_level(&self) -> u32 {
        (self.levels.len() - 1) as u32
    }

    pub fn state(&self, k: u32) -> Result<&ParamState> {
        self.states
            .get(k as usize)
            .ok_or_else(|| Error::capacity("level", k, self.max_level()))
    }

    pub fn words(&self, k: u32) -> Result<&LevelWords> {
        self.levels
            .get(k as usize)
            .ok_or_else(|| Error::capacity("level", k, self.max_level()))
    }

    pub fn intermediate(&self, k: u32) -> Result<IntermediateWords> {
        build_intermediate(k, &self.states)
    }

    pub fn ell(&self, k: u32) -> Result<&BigUint> {
        Ok(&self.state(k)?.ell)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{preset, states, Schedule, ToyLevel};
    use proptest::prelude::*;

    const CAP: usize = DEFAULT_MATERIALIZE_CAP;

    fn toy_states() -> Vec<ParamState> {
        let sched = Schedule::toy(vec![ToyLevel::new(1, 4, 2, 8u32), ToyLevel::new(2, 4, 2, 32u32)])
            .unwrap();
        states(&sched, 2).unwrap()
    }

    fn text(w: &SuccinctWord) -> String {
        symbols_to_string(&w.materialize_all(CAP).unwrap())
    }

    #[test]
    fn level0() {
        let l = build_level(0, &toy_states()).unwrap();
        assert_eq!(text(&l.a), "01");
        assert_eq!(text(&l.b), "02");
        assert_eq!(l.a.letter_at_u64(1).unwrap(), 0);
    }

    #[test]
    fn toy_level1_and_2() {
        let st = toy_states();
        let l1 = build_level(1, &st).unwrap();
        assert_eq!(text(&l1.a), "01010101");
        assert_eq!(text(&l1.b), "02222202");
        let l2 = build_level(2, &st).unwrap();
        assert_eq!(text(&l2.b), "02222202".repeat(4));
        assert_eq!(text(&l2.a), format!("01010101{}01010101", "1".repeat(16)));
        assert_eq!(l2.b.zero_count(), &BigUint::from(8u32));
        assert_eq!(
            symbols_to_string(&l1.b.materialize_range(3, 6, CAP).unwrap()),
            "2222"
        );
    }

    #[test]
    fn toy_intermediate() {
        let st = toy_states();
        let i1 = build_intermediate(1, &st).unwrap();
        assert_eq!(text(&i1.find("a'").unwrap().word), "0101");
        let i2 = build_intermediate(2, &st).unwrap();
        assert_eq!(text(&i2.find("a'").unwrap().word), format!("01010101{}", "1".repeat(8)));
        assert_eq!(text(&i2.find("a''").unwrap().word), format!("{}01010101", "1".repeat(8)));
        assert!(matches!(build_intermediate(0, &st), Err(Error::Undefined(_))));
    }

    #[test]
    fn paper_words() {
        let st = states(&Schedule::paper(), 2).unwrap();
        let l1 = build_level(1, &st).unwrap();
        assert_eq!(l1.a.zero_count(), &BigUint::from(64u32));
        assert_eq!(l1.b.letter_at_u64(3).unwrap(), 2);
        assert_eq!(l1.b.to_string(), "cat(cat(run(0,1),run(2,1)),run(2,124),cat(run(0,1),run(2,1)))");
        let l2 = build_level(2, &st).unwrap();
        assert_eq!(l2.a.len(), &st[2].ell);
        assert_eq!(l2.b.zero_count(), &st[2].rho_b);
        assert_eq!(l2.a.zero_count(), &st[2].rho_a);
        let last = st[2].ell.clone();
        assert_eq!(l2.b.letter_at(&last).unwrap(), 2);
        assert_eq!(l2.a.letter_at(&last).unwrap(), 1);
        assert!(matches!(
            l2.a.materialize_all(CAP),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn huge_constant_word() {
        let w = SuccinctWord::power(SuccinctWord::run(2, 1u32), BigUint::from(10u32).pow(30));
        assert_eq!(w.letter_at(&BigUint::from(10u32).pow(29)).unwrap(), 2);
        assert!(w.letter_at(&BigUint::zero()).is_err());
        assert!(w.letter_at(&(w.len() + 1u32)).is_err());
    }

    #[test]
    fn canonical_text() {
        let a1 = SuccinctWord::power(SuccinctWord::literal(&[0, 1]), 64u32);
        assert_eq!(a1.to_string(), "pow(cat(run(0,1),run(1,1)),64)");
    }

    #[test]
    fn empty_window() {
        let w = SuccinctWord::literal(&[0, 1]);
        assert!(w.materialize_range(2, 1, CAP).unwrap().is_empty());
        assert!(w.materialize_range(1, 3, CAP).is_err());
    }

    #[test]
    fn gamma_map() {
        assert_eq!(gamma(ZERO_PRIME).unwrap(), 0);
        assert_eq!(gamma(ZERO_SECOND).unwrap(), 0);
        assert_eq!(gamma(1).unwrap(), 1);
        assert_eq!(gamma(2).unwrap(), 2);
        assert!(gamma(0).is_err());
        assert!(DenseWord::new(Alphabet::Tilde, vec![3]).is_err());
    }

    #[test]
    fn zero_counts_match_rho_on_presets() {
        for name in ["toy-a", "toy-b", "toy-c", "induction-a"] {
            let st = states(&preset(name).unwrap(), 5).unwrap();
            for lw in build_hierarchy(5, &st).unwrap() {
                let s = &st[lw.k as usize];
                assert_eq!(lw.a.zero_count(), &s.rho_a, "{name} k={}", lw.k);
                assert_eq!(lw.b.zero_count(), &s.rho_b, "{name} k={}", lw.k);
                assert_eq!(lw.ones.len(), &s.ell);
                assert_eq!(lw.a.recount(), (s.ell.clone(), s.rho_a.clone()));
                assert_eq!(lw.a.symbol_set(), vec![0, 1]);
                assert_eq!(lw.b.symbol_set(), vec![0, 2]);
            }
        }
    }

    #[test]
    fn factorization_toy() {
        for name in ["toy-a", "toy-b", "toy-c"] {
            let st = states(&preset(name).unwrap(), 4).unwrap();
            let levels = build_hierarchy(4, &st).unwrap();
            for k in 1..=4u32 {
                let iw = build_intermediate(k, &st).unwrap();
                let lw = &levels[k as usize];
                let s = &st[k as usize];
                let m = (s.n_big.as_ref().unwrap() / s.n_prime.as_ref().unwrap())
                    .to_usize()
                    .unwrap();
                let (sparse_dict, dense_dict) = match s.parity() {
                    Parity::Even => (Dict::A, Dict::B),
                    Parity::Odd => (Dict::B, Dict::A),
                };
                let sp = iw.dict_words(sparse_dict);
                let c = if sparse_dict == Dict::A { iw.ones.clone() } else { iw.twos.clone() };
                let mut parts = vec![sp[0].word.clone()];
                parts.extend(std::iter::repeat_n(c, m - 2));
                parts.push(sp[1].word.clone());
                assert_eq!(
                    SuccinctWord::concat(parts).materialize_all(CAP).unwrap(),
                    lw.word(sparse_dict).materialize_all(CAP).unwrap()
                );
                let dense = SuccinctWord::power(iw.dict_words(dense_dict)[0].word.clone(), m as u64);
                assert_eq!(
                    dense.materialize_all(CAP).unwrap(),
                    lw.word(dense_dict).materialize_all(CAP).unwrap()
                );
            }
        }
    }

    #[test]
    fn factorization_sampled_at_paper_scale() {
        let st = states(&Schedule::paper(), 2).unwrap();
        let lw = build_level(2, &st).unwrap();
        let iw = build_intermediate(2, &st).unwrap();
        let lp = iw.ell_prime.clone();
        let ell = st[2].ell.clone();
        let a1 = &iw.find("a'").unwrap().word;
        let a2 = &iw.find("a''").unwrap().word;
        let b1 = &iw.find("b'").unwrap().word;
        for i in [1u64, 2, 127, 128, 129, 200, 16383, 16384] {
            let i = BigUint::from(i);
            assert_eq!(lw.a.letter_at(&i).unwrap(), a1.letter_at(&i).unwrap());
            let tail = &ell - &lp + &i;
            assert_eq!(lw.a.letter_at(&tail).unwrap(), a2.letter_at(&i).unwrap());
            let far = (&ell >> 1) + &i;
            let j = (&far - 1u32) % &lp + 1u32;
            assert_eq!(lw.b.letter_at(&far).unwrap(), b1.letter_at(&j).unwrap());
        }
    }

    fn arb_word() -> impl Strategy<Value = SuccinctWord> {
        let leaf = (0u8..3, 1u64..5).prop_map(|(s, c)| SuccinctWord::run(s, c));
        leaf.prop_recursive(4, 24, 4, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 1..4).prop_map(SuccinctWord::concat),
                (inner, 1u64..4).prop_map(|(w, e)| SuccinctWord::power(w, e)),
            ]
        })
    }

    fn naive(w: &SuccinctWord) -> Vec<Symbol> {
        match w.expr() {
            Expr::Run(s, c) => vec![*s; c.to_usize().unwrap()],
            Expr::Concat(parts) => parts.iter().flat_map(naive).collect(),
            Expr::Power(b, e) => naive(b).repeat(e.to_usize().unwrap()),
        }
    }

    proptest! {
        #[test]
        fn letter_at_matches_materialization(w in arb_word()) {
            let full = naive(&w);
            prop_assert_eq!(&w.materialize_all(CAP).unwrap(), &full);
            prop_assert_eq!(w.recount(), (w.len().clone(), w.zero_count().clone()));
            for (i, s) in full.iter().enumerate() {
                prop_assert_eq!(w.letter_at_u64(i as u64 + 1).unwrap(), *s);
            }
        }

        #[test]
        fn windows_match(w in arb_word(), a in 0usize..400, b in 0usize..400) {
            let full = naive(&w);
            let (a, b) = (a % full.len(), b % full.len());
            let (lo, hi) = (a.min(b), a.max(b));
            let got = w.materialize_range(lo as u64 + 1, hi as u64 + 1, CAP).unwrap();
            prop_assert_eq!(&got[..], &full[lo..=hi]);
        }

        #[test]
        fn letters_in_dictionaries(k in 0u32..5, name in prop::sample::select(vec!["toy-a", "toy-b", "toy-c"])) {
            let st = states(&preset(name).unwrap(), 4).unwrap();
            let lw = build_level(k, &st).unwrap();
            let a = lw.a.materialize_all(CAP).unwrap();
            let b = lw.b.materialize_all(CAP).unwrap();
            prop_assert!(a.iter().all(|s| *s <= 1));
            prop_assert!(b.iter().all(|s| *s == 0 || *s == 2));
        }
    }
}
