//! Closed-form entropy and pressure bounds, evaluated with exact rational
//! coefficients and decimal logarithms at a configurable precision.

use std::str::FromStr;

use dashu_float::DBig;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bigfmt;
use crate::error::{Error, Result};
use crate::params::{Dict, ParamState, Parity};
use crate::words::SuccinctWord;

pub const DEFAULT_PRECISION: usize = 50;
pub const DEFAULT_D: u32 = 2;
/// Extra digits carried internally beyond the requested precision.
const GUARD_DIGITS: usize = 12;

pub fn biguint_dec(v: &BigUint, prec: usize) -> DBig {
    DBig::from_str(&v.to_str_radix(10))
        .expect("decimal integer")
        .with_precision(prec)
        .value()
}

pub fn bigint_dec(v: &BigInt, prec: usize) -> DBig {
    let m = biguint_dec(v.magnitude(), prec);
    if v.is_negative() {
        -m
    } else {
        m
    }
}

pub fn rational_dec(v: &BigRational, prec: usize) -> DBig {
    bigint_dec(v.numer(), prec) / bigint_dec(v.denom(), prec)
}

pub fn ln_uint(v: &BigUint, prec: usize) -> DBig {
    biguint_dec(v, prec).ln()
}

fn ln_u64(v: u64, prec: usize) -> DBig {
    ln_uint(&BigUint::from(v), prec)
}

fn dec_zero(prec: usize) -> DBig {
    DBig::ZERO.with_precision(prec).value()
}

fn dec_is_zero(v: &DBig) -> bool {
    *v == DBig::ZERO
}

fn dec_one(prec: usize) -> DBig {
    DBig::ONE.with_precision(prec).value()
}

/// Render with `digits` significant digits.
pub fn format_decimal(v: &DBig, digits: usize) -> String {
    if dec_is_zero(v) {
        return "0".to_string();
    }
    let r = v.clone().with_precision(digits).value();
    let (sig, exp) = (r.repr().significand().to_string(), r.repr().exponent());
    let (sign, sig) = match sig.strip_prefix('-') {
        Some(rest) => ("-", rest.trim_end_matches('0')),
        None => ("", sig.trim_end_matches('0')),
    };
    let sig = if sig.is_empty() { "0" } else { sig };
    let dropped = r.repr().significand().to_string().trim_start_matches('-').len() - sig.len();
    let exp = exp + dropped as isize;
    // position of the leading digit: value = d.ddd × 10^lead
    let lead = exp + sig.len() as isize - 1;
    if (-6..digits as isize).contains(&lead) {
        return r.to_string();
    }
    let (head, tail) = sig.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{lead}")
    } else {
        format!("{sign}{head}.{tail}e{lead}")
    }
}

pub fn decimal_f64(v: &DBig) -> f64 {
    v.to_f64().value()
}

/// Binary entropy −e ln e − (1−e) ln(1−e) of an exact rational in [0, 1].
pub fn binary_entropy(e: &BigRational, prec: usize) -> Result<DBig> {
    if e.is_negative() || e > &BigRational::one() {
        return Err(Error::invalid(format!(
            "binary entropy needs 0 <= e <= 1, got {}",
            bigfmt::rational_string(e)
        )));
    }
    binary_entropy_dec(&rational_dec(e, prec + GUARD_DIGITS), prec)
}

/// Binary entropy of a decimal in [0, 1]; the endpoints give 0.
pub fn binary_entropy_dec(e: &DBig, prec: usize) -> Result<DBig> {
    let w = prec + GUARD_DIGITS;
    let e = e.clone().with_precision(w).value();
    let one = dec_one(w);
    if e < dec_zero(w) || e > one {
        return Err(Error::invalid(format!("binary entropy needs 0 <= e <= 1, got {e}")));
    }
    if dec_is_zero(&e) || e == one {
        return Ok(dec_zero(w));
    }
    Ok(-(&e * e.ln()) - (&one - &e) * (-&e).ln_1p())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cardinalities {
    /// card(A), the duplicated alphabet of the two-dimensional shift
    pub a: u64,
    /// card(Ã)
    pub a_tilde: u64,
    /// card(Â)
    pub a_hat: u64,
}

impl Default for Cardinalities {
    fn default() -> Self {
        Cardinalities {
            a: 4,
            a_tilde: 3,
            a_hat: 3,
        }
    }
}

/// The surrogate reconstruction and complexity functions R(n) = n·K^n and
/// C(n) = n²·K^n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Surrogate {
    pub base: u32,
}

impl Default for Surrogate {
    fn default() -> Self {
        Surrogate { base: 1 }
    }
}

/// Largest n·log2 K allowed for surrogate evaluation.
const SURROGATE_BITS: u64 = 1 << 24;

impl Surrogate {
    fn power(&self, n: &BigUint) -> Result<BigUint> {
        if self.base <= 1 {
            return Ok(BigUint::from(self.base));
        }
        let bits = n.to_u64().and_then(|n| n.checked_mul(32 - self.base.leading_zeros() as u64));
        match (bits, n.to_u32()) {
            (Some(b), Some(e)) if b <= SURROGATE_BITS => Ok(BigUint::from(self.base).pow(e)),
            _ => Err(Error::capacity("surrogate bits", format!("{n}*log2({})", self.base), SURROGATE_BITS)),
        }
    }

    pub fn reconstruction(&self, n: &BigUint) -> Result<BigUint> {
        Ok(n * self.power(n)?)
    }

    pub fn complexity(&self, n: &BigUint) -> Result<BigUint> {
        Ok(n * n * self.power(n)?)
    }

    /// R'_k = 2R(ℓ'_k) + 1
    pub fn r_prime(&self, ell_prime: &BigUint) -> Result<BigUint> {
        Ok(self.reconstruction(ell_prime)? * 2u32 + 1u32)
    }

    /// C'_k = C(ℓ'_k)
    pub fn c_prime(&self, ell_prime: &BigUint) -> Result<BigUint> {
        self.complexity(ell_prime)
    }
}

/// Scalars entering the level-k bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub k: u32,
    #[serde(with = "bigfmt::biguint")]
    pub ell: BigUint,
    #[serde(with = "bigfmt::biguint")]
    pub ell_prime: BigUint,
    #[serde(with = "bigfmt::biguint")]
    pub beta: BigUint,
    #[serde(with = "bigfmt::biguint")]
    pub n_prime: BigUint,
    /// N_{k-1}
    #[serde(with = "bigfmt::biguint")]
    pub n_prev: BigUint,
    #[serde(with = "bigfmt::rational")]
    pub f_prev_a: BigRational,
    #[serde(with = "bigfmt::rational")]
    pub f_prev_b: BigRational,
    #[serde(with = "bigfmt::rational")]
    pub f_a: BigRational,
    #[serde(with = "bigfmt::rational")]
    pub f_b: BigRational,
    pub d: u32,
    #[serde(with = "bigfmt::biguint")]
    pub r_prime: BigUint,
    #[serde(with = "bigfmt::biguint")]
    pub c_prime: BigUint,
    #[serde(default)]
    pub cards: Cardinalities,
}

impl BoundInputs {
    pub fn from_states(
        states: &[ParamState],
        k: u32,
        d: u32,
        r_prime: BigUint,
        c_prime: BigUint,
        cards: Cardinalities,
    ) -> Result<Self> {
        if k < 2 {
            return Err(Error::Undefined(format!("the upper bound needs N_(k-1), undefined at k = {k}")));
        }
        let st = states
            .get(k as usize)
            .ok_or_else(|| Error::invalid(format!("no state for level {k}")))?;
        let prev = &states[k as usize - 1];
        let (_, np, lp) = st.require_n()?;
        let (n_prev, _, _) = prev.require_n()?;
        let inputs = BoundInputs {
            k,
            ell: st.ell.clone(),
            ell_prime: lp.clone(),
            beta: st.beta.clone(),
            n_prime: np.clone(),
            n_prev: n_prev.clone(),
            f_prev_a: prev.f_a(),
            f_prev_b: prev.f_b(),
            f_a: st.f_a(),
            f_b: st.f_b(),
            d,
            r_prime,
            c_prime,
            cards,
        };
        inputs.validate()?;
        Ok(inputs)
    }

    pub fn with_surrogate(
        states: &[ParamState],
        k: u32,
        d: u32,
        surrogate: &Surrogate,
        cards: Cardinalities,
    ) -> Result<Self> {
        let lp = states
            .get(k as usize)
            .and_then(|s| s.ell_prime.clone())
            .ok_or_else(|| Error::Undefined(format!("l'_k is undefined at level {k}")))?;
        let r = surrogate.r_prime(&lp)?;
        let c = surrogate.c_prime(&lp)?;
        BoundInputs::from_states(states, k, d, r, c, cards)
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.k)
    }

    /// The dictionary carrying the dominant zero frequency: B for even k, A for odd k.
    pub fn dominant(&self) -> Dict {
        self.parity().dominant()
    }

    /// (f^sparse_{k-1}, f^dense_{k-1}) in parity order.
    fn prev_freqs(&self) -> (&BigRational, &BigRational) {
        match self.dominant() {
            Dict::B => (&self.f_prev_a, &self.f_prev_b),
            Dict::A => (&self.f_prev_b, &self.f_prev_a),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let c = self.cards;
        for (name, v) in [("card(A)", c.a), ("card(Ã)", c.a_tilde), ("card(Â)", c.a_hat)] {
            if v < 2 {
                return Err(Error::Constraint(format!("{name} = {v} must be at least 2")));
            }
        }
        if self.d == 0 {
            return Err(Error::Constraint("D must be positive".into()));
        }
        if self.r_prime < self.ell_prime {
            return Err(Error::Constraint(format!(
                "R'_k = {} must be at least l'_k = {}",
                self.r_prime, self.ell_prime
            )));
        }
        if self.ell_prime.is_zero() || self.ell.is_zero() || self.n_prime.is_zero() {
            return Err(Error::Constraint("l_k, l'_k and N'_k must be positive".into()));
        }
        if self.n_prev < BigUint::from(2u32) {
            return Err(Error::Constraint(format!("N_(k-1) = {} must be at least 2", self.n_prev)));
        }
        if self.c_prime.is_zero() {
            return Err(Error::Constraint("C'_k must be positive".into()));
        }
        Ok(())
    }
}

/// h_top(X_k^B) ≥ f_k^B ln 2; returns the coefficient f_k^B.
pub fn entropy_lower_bound(state: &ParamState) -> BigRational {
    state.f_b()
}

/// log2 of the number of duplicated, vertically aligned blocks of height
/// `height` over the max-zero word of the dictionary: height·ρ_k.
pub fn dictionary_log_count(state: &ParamState, dict: Dict, height: &BigUint) -> BigUint {
    height * state.rho(dict)
}

/// log2 of the duplication count of one vertically aligned word.
pub fn word_log_count(word: &SuccinctWord, height: &BigUint) -> BigUint {
    height * word.zero_count()
}

#[derive(Debug, Clone, Serialize)]
pub struct PressureLowerBound {
    pub k: u32,
    pub dict: Dict,
    /// f_k, the coefficient of ln 2
    #[serde(serialize_with = "bigfmt::rational::serialize")]
    pub entropy_coefficient: BigRational,
    /// 2D·β_k/ℓ_k
    #[serde(serialize_with = "bigfmt::rational::serialize")]
    pub penalty: BigRational,
    pub decimal_value: String,
    #[serde(skip)]
    pub value: DBig,
}

/// P(β_k φ) ≥ f_k^B ln 2 − 2D β_k/ℓ_k.
pub fn pressure_lower_bound(state: &ParamState, d: u32, prec: usize) -> PressureLowerBound {
    pressure_lower_bound_for(state, Dict::B, d, prec)
}

/// The lower bound for the concatenated shift of either dictionary.
pub fn pressure_lower_bound_for(state: &ParamState, dict: Dict, d: u32, prec: usize) -> PressureLowerBound {
    lower_bound(state.k, dict, state.freq(dict), &state.beta, &state.ell, d, prec)
}

fn lower_bound(k: u32, dict: Dict, f: BigRational, beta: &BigUint, ell: &BigUint, d: u32, prec: usize) -> PressureLowerBound {
    let w = prec + GUARD_DIGITS;
    let penalty = BigRational::new(BigInt::from(beta.clone()) * (2 * d), BigInt::from(ell.clone()));
    let value = rational_dec(&f, w) * ln_u64(2, w) - rational_dec(&penalty, w);
    PressureLowerBound {
        k,
        dict,
        entropy_coefficient: f,
        penalty,
        decimal_value: format_decimal(&value, prec),
        value,
    }
}

/// ε_k = (R'_k)²/β_k · ln card(A); returns the coefficient (R'_k)²/β_k.
pub fn epsilon_coefficient(r_prime: &BigUint, beta: &BigUint) -> Result<BigRational> {
    if beta.is_zero() {
        return Err(Error::Undefined("epsilon_k needs beta_k > 0".into()));
    }
    Ok(BigRational::new(
        BigInt::from(r_prime * r_prime),
        BigInt::from(beta.clone()),
    ))
}

pub fn epsilon_k(inputs: &BoundInputs, prec: usize) -> Result<(BigRational, DBig)> {
    let q = epsilon_coefficient(&inputs.r_prime, &inputs.beta)?;
    let w = prec + GUARD_DIGITS;
    let v = rational_dec(&q, w) * ln_u64(inputs.cards.a, w);
    Ok((q, v))
}

#[derive(Debug, Clone, Serialize)]
pub struct Term {
    pub term_name: &'static str,
    #[serde(serialize_with = "bigfmt::opt_rational::serialize")]
    pub exact_coefficient: Option<BigRational>,
    /// What the exact coefficient multiplies.
    pub unit: &'static str,
    pub decimal_value: String,
    #[serde(skip)]
    pub value: DBig,
}

#[derive(Debug, Clone, Serialize)]
pub struct UpperBoundReport {
    pub k: u32,
    pub parity: Parity,
    pub mirrored: bool,
    #[serde(serialize_with = "bigfmt::rational::serialize")]
    pub mu_complement: BigRational,
    pub terms: Vec<Term>,
    pub decimal_total: String,
    #[serde(skip)]
    pub total: DBig,
}

impl UpperBoundReport {
    pub fn term(&self, name: &str) -> Option<&Term> {
        self.terms.iter().find(|t| t.term_name == name)
    }
}

/// Shared pieces of the upper bound at working precision.
struct UpperParts {
    w: usize,
    ln2: DBig,
    q: BigRational,
    eps: DBig,
    factor_f: BigRational,
    /// Everything except the μ-proportional duplication term.
    terms: Vec<Term>,
}

fn upper_parts(inputs: &BoundInputs, prec: usize) -> Result<UpperParts> {
    inputs.validate()?;
    let w = prec + GUARD_DIGITS;
    let (f_sparse, f_dense) = inputs.prev_freqs();
    let (q, eps) = epsilon_k(inputs, prec)?;
    if eps > dec_one(w) {
        return Err(Error::Constraint(format!(
            "binary_entropy: epsilon_k = {} exceeds 1",
            format_decimal(&eps, 12)
        )));
    }
    let ln2 = ln_u64(2, w);
    let ln_a = ln_u64(inputs.cards.a, w);
    let ln_at = ln_u64(inputs.cards.a_tilde, w);
    let ln_2ah = ln_u64(2 * inputs.cards.a_hat, w);
    let ln_c = ln_uint(&inputs.c_prime, w);
    let n1 = BigRational::from_integer(BigInt::from(inputs.n_prev.clone()));
    let factor = &n1 / (&n1 - BigRational::one());
    let factor_f = factor * f_dense;
    let lp = BigRational::from_integer(BigInt::from(inputs.ell_prime.clone()));
    let rp = BigRational::from_integer(BigInt::from(inputs.r_prime.clone()));
    let np = BigRational::from_integer(BigInt::from(inputs.n_prime.clone()));
    let two = BigRational::from_integer(BigInt::from(2));
    let term = |name, coef: BigRational, unit, scale: DBig| {
        let value = rational_dec(&coef, w) * scale;
        Term {
            term_name: name,
            exact_coefficient: Some(coef),
            unit,
            decimal_value: format_decimal(&value, prec),
            value,
        }
    };
    let h = binary_entropy_dec(&eps, prec)?;
    let terms = vec![
        term("leak", two / np * f_sparse, "ln 2", ln2.clone()),
        term(
            "duplication_epsilon",
            &factor_f * &q,
            "ln card(A) ln 2",
            &ln_a * &ln2,
        ),
        term("boundary", lp.recip(), "ln card(Ã)", ln_at.clone()),
        term("complexity", (&lp * &lp).recip(), "ln C'_k", ln_c),
        term("epsilon_hat", q.clone(), "ln card(A) ln(2 card(Â))", &ln_a * &ln_2ah),
        term("reconstruction", BigRational::from_integer(BigInt::from(8)) / rp, "ln card(Ã)", ln_at.clone()),
        term("epsilon_tilde", q.clone(), "ln card(A) ln card(Ã)", &ln_a * &ln_at),
        Term {
            term_name: "binary_entropy",
            exact_coefficient: None,
            unit: "H(epsilon_k)",
            decimal_value: format_decimal(&h, prec),
            value: h,
        },
    ];
    Ok(UpperParts {
        w,
        ln2,
        q,
        eps,
        factor_f,
        terms,
    })
}

fn sum_terms(terms: &[Term], w: usize) -> DBig {
    terms.iter().fold(dec_zero(w), |acc, t| acc + &t.value)
}

/// The itemized right-hand side of the pressure upper bound at level k, for
/// a given μ(Σ² ∖ G̃_1) (even k) or μ(Σ² ∖ G̃_2) (odd k, A and B exchanged).
pub fn pressure_upper_bound_rhs(inputs: &BoundInputs, mu_complement: &BigRational, prec: usize) -> Result<UpperBoundReport> {
    if mu_complement.is_negative() || mu_complement > &BigRational::one() {
        return Err(Error::Constraint(format!(
            "duplication: mu_complement = {} outside [0, 1]",
            bigfmt::rational_string(mu_complement)
        )));
    }
    let parts = upper_parts(inputs, prec)?;
    let coef = &parts.factor_f * mu_complement;
    let value = rational_dec(&coef, parts.w) * &parts.ln2;
    let mut terms = parts.terms;
    terms.insert(
        1,
        Term {
            term_name: "duplication",
            exact_coefficient: Some(coef),
            unit: "ln 2",
            decimal_value: format_decimal(&value, prec),
            value,
        },
    );
    let total = sum_terms(&terms, parts.w);
    Ok(UpperBoundReport {
        k: inputs.k,
        parity: inputs.parity(),
        mirrored: inputs.parity() == Parity::Odd,
        mu_complement: mu_complement.clone(),
        terms,
        decimal_total: format_decimal(&total, prec),
        total,
    })
}

/// The same bound written as in the proof, with η = 1 − μ_complement:
/// ((2/N')f^A + (1−1/N_{k−1})^{−1}(1−η+ε)f^B + ε) ln 2 + ε ln card(Â) + …
pub fn pressure_upper_bound_proof_form(inputs: &BoundInputs, eta: &BigRational, prec: usize) -> Result<DBig> {
    let parts = upper_parts(inputs, prec)?;
    let w = parts.w;
    let (f_sparse, _) = inputs.prev_freqs();
    let np = BigRational::from_integer(BigInt::from(inputs.n_prime.clone()));
    let one = dec_one(w);
    let main = rational_dec(&(BigRational::from_integer(BigInt::from(2)) / np * f_sparse), w)
        + rational_dec(&parts.factor_f, w) * (&one - rational_dec(eta, w) + &parts.eps)
        + &parts.eps;
    let lp = biguint_dec(&inputs.ell_prime, w);
    let ln_at = ln_u64(inputs.cards.a_tilde, w);
    let rest = &ln_at / &lp
        + ln_uint(&inputs.c_prime, w) / (&lp * &lp)
        + &parts.eps * ln_u64(inputs.cards.a_hat, w)
        + (DBig::from(8u8).with_precision(w).value() / biguint_dec(&inputs.r_prime, w) + &parts.eps) * ln_at
        + binary_entropy_dec(&parts.eps, prec)?;
    let _ = &parts.q;
    Ok(main * parts.ln2 + rest)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Forcing {
    /// The implied bound lies in (0, 1].
    Forcing,
    /// The implied bound is ≤ 0: no forcing at this k.
    NoForcing,
    /// The implied bound exceeds 1, so the inputs contradict each other.
    Inconsistent,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChaoticRow {
    pub k: u32,
    pub parity: Parity,
    pub dict: Dict,
    #[serde(rename = "L_k")]
    pub lower: String,
    #[serde(rename = "U_k_at_mu0")]
    pub upper_at_mu0: String,
    /// d U_k / d mu_complement, an exact multiple of ln 2
    #[serde(serialize_with = "bigfmt::rational::serialize")]
    pub slope_coefficient: BigRational,
    pub implied_mu_bound: String,
    pub forcing: Forcing,
    /// |U_k(μ*) − L_k| after substitution.
    pub round_trip_residual: String,
    #[serde(skip)]
    pub lower_value: DBig,
    #[serde(skip)]
    pub upper0_value: DBig,
    #[serde(skip)]
    pub mu_star: DBig,
    #[serde(skip)]
    pub residual: DBig,
}

impl ChaoticRow {
    /// Whether substituting μ* back gives L_k = U_k(μ*) to within 10^-prec relative.
    pub fn round_trip_holds(&self, prec: usize) -> bool {
        let tol = DBig::from_str(&format!("1e-{prec}")).expect("literal");
        let scale = if dec_is_zero(&self.lower_value) {
            DBig::ONE
        } else {
            abs(&self.lower_value)
        };
        abs(&self.residual) <= tol * scale
    }
}

fn abs(v: &DBig) -> DBig {
    if v < &DBig::ZERO {
        -v.clone()
    } else {
        v.clone()
    }
}

/// |a − b| ≤ 10^-digits · max(|a|, |b|), or both zero.
pub fn agrees_to(a: &DBig, b: &DBig, digits: usize) -> bool {
    let scale = if abs(a) > abs(b) { abs(a) } else { abs(b) };
    if dec_is_zero(&scale) {
        return true;
    }
    let tol = DBig::from_str(&format!("1e-{digits}")).expect("literal");
    abs(&(a - b)) <= tol * scale
}

/// U_k(μ) for any real μ, without the range check.
fn upper_at(parts: &UpperParts, mu: &DBig) -> DBig {
    sum_terms(&parts.terms, parts.w) + rational_dec(&parts.factor_f, parts.w) * mu * &parts.ln2
}

/// Compare L_k with U_k(μ) per level and solve L_k ≤ U_k(μ) for μ.
pub fn chaotic_report(inputs: &[BoundInputs], prec: usize) -> Result<Vec<ChaoticRow>> {
    inputs.iter().map(|inp| chaotic_row(inp, prec)).collect()
}

/// The lower bound uses the dominant dictionary's frequency from `inp`.
pub fn chaotic_row(inp: &BoundInputs, prec: usize) -> Result<ChaoticRow> {
    let dict = inp.dominant();
    let f = match dict {
        Dict::A => inp.f_a.clone(),
        Dict::B => inp.f_b.clone(),
    };
    let lower = lower_bound(inp.k, dict, f, &inp.beta, &inp.ell, inp.d, prec);
    let parts = upper_parts(inp, prec)?;
    let w = parts.w;
    let u0 = upper_at(&parts, &dec_zero(w));
    let slope = rational_dec(&parts.factor_f, w) * &parts.ln2;
    let mu_star = (&lower.value - &u0) / &slope;
    let residual = upper_at(&parts, &mu_star) - &lower.value;
    let forcing = if mu_star <= dec_zero(w) {
        Forcing::NoForcing
    } else if mu_star > dec_one(w) {
        Forcing::Inconsistent
    } else {
        Forcing::Forcing
    };
    Ok(ChaoticRow {
        k: inp.k,
        parity: inp.parity(),
        dict,
        lower: lower.decimal_value.clone(),
        upper_at_mu0: format_decimal(&u0, prec),
        slope_coefficient: parts.factor_f.clone(),
        implied_mu_bound: format_decimal(&mu_star, prec),
        forcing,
        round_trip_residual: format_decimal(&residual, 6),
        lower_value: lower.value,
        upper0_value: u0,
        mu_star,
        residual,
    })
}

/// Seeded random inputs with ε_k ≤ 1/2 and R'_k ≥ ℓ'_k.
pub fn sample_admissible_inputs(seed: u64, index: u64) -> BoundInputs {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let k = rng.gen_range(2u32..40);
    let n_prev = rng.gen_range(2u64..1000);
    let n_prime = rng.gen_range(2u64..500);
    let ell_prev = rng.gen_range(2u64..1 << 20);
    let ell_prime = n_prime * ell_prev;
    let ell = ell_prime * rng.gen_range(2u64..64);
    let freq = |rng: &mut ChaCha8Rng| {
        let den = rng.gen_range(2u64..1 << 30);
        BigRational::new(BigInt::from(rng.gen_range(1..=den / 2)), BigInt::from(den))
    };
    let f_prev_a = freq(&mut rng);
    let f_prev_b = freq(&mut rng);
    let f_a = freq(&mut rng);
    let f_b = freq(&mut rng);
    let r_prime = BigUint::from(ell_prime) * rng.gen_range(1u64..1000) + rng.gen_range(0u64..1000);
    let cards = Cardinalities {
        a: rng.gen_range(2..64),
        a_tilde: rng.gen_range(2..16),
        a_hat: rng.gen_range(2..1 << 16),
    };
    // β ≥ 2 R'² ln card(A) keeps ε_k ≤ 1/2; use card(A) ≤ 2^6 > e^4
    let beta = &r_prime * &r_prime * 8u32 * rng.gen_range(1u64..1 << 40);
    let c_bits = rng.gen_range(1u64..4096);
    let c_prime = (BigUint::one() << c_bits) + rng.gen_range(0u64..1 << 20);
    BoundInputs {
        k,
        ell: BigUint::from(ell),
        ell_prime: BigUint::from(ell_prime),
        beta,
        n_prime: BigUint::from(n_prime),
        n_prev: BigUint::from(n_prev),
        f_prev_a,
        f_prev_b,
        f_a,
        f_b,
        d: rng.gen_range(2..8),
        r_prime,
        c_prime,
        cards,
    }
}
