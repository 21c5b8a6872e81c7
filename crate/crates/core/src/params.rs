//! The recursive parameter sequence: scales ℓ_k and ℓ'_k, block counts N_k and
//! N'_k, inverse temperatures β_k and the zero counts ρ_k^A, ρ_k^B.
//!
//! Everything is exact. Frequencies f_k = ρ_k/ℓ_k are big rationals; the
//! super-exponential terms are compared through bit lengths where building
//! them would be wasteful.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bigfmt;
use crate::error::{Error, Result};

/// Default highest level computed in paper-exact mode.
pub const DEFAULT_PAPER_CAP: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(k: u32) -> Self {
        if k.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// The dictionary whose frequency is preserved at this parity:
    /// B for even levels, A for odd ones.
    pub fn dominant(self) -> Dict {
        match self {
            Parity::Even => Dict::B,
            Parity::Odd => Dict::A,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// One of the two dictionaries Ã_k (symbols 0,1) and B̃_k (symbols 0,2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dict {
    A,
    B,
}

impl Dict {
    pub fn other(self) -> Self {
        match self {
            Dict::A => Dict::B,
            Dict::B => Dict::A,
        }
    }
}

impl fmt::Display for Dict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dict::A => "A",
            Dict::B => "B",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamState {
    pub k: u32,
    #[serde(with = "bigfmt::biguint")]
    pub ell: BigUint,
    #[serde(with = "bigfmt::opt_biguint")]
    pub ell_prime: Option<BigUint>,
    #[serde(rename = "N", with = "bigfmt::opt_biguint")]
    pub n_big: Option<BigUint>,
    #[serde(rename = "N_prime", with = "bigfmt::opt_biguint")]
    pub n_prime: Option<BigUint>,
    #[serde(with = "bigfmt::biguint")]
    pub beta: BigUint,
    #[serde(with = "bigfmt::biguint")]
    pub rho_a: BigUint,
    #[serde(with = "bigfmt::biguint")]
    pub rho_b: BigUint,
}

impl ParamState {
    pub fn parity(&self) -> Parity {
        Parity::of(self.k)
    }

    pub fn rho(&self, dict: Dict) -> &BigUint {
        match dict {
            Dict::A => &self.rho_a,
            Dict::B => &self.rho_b,
        }
    }

    /// f_k = ρ_k / ℓ_k for the given dictionary.
    pub fn freq(&self, dict: Dict) -> BigRational {
        ratio(self.rho(dict), &self.ell)
    }

    pub fn f_a(&self) -> BigRational {
        self.freq(Dict::A)
    }

    pub fn f_b(&self) -> BigRational {
        self.freq(Dict::B)
    }

    pub(crate) fn require_n(&self) -> Result<(&BigUint, &BigUint, &BigUint)> {
        match (&self.n_big, &self.n_prime, &self.ell_prime) {
            (Some(n), Some(np), Some(lp)) => Ok((n, np, lp)),
            _ => Err(Error::Undefined(format!(
                "N_k, N'_k and l'_k are not defined at level {}",
                self.k
            ))),
        }
    }
}

/// The level-0 state: ℓ_0 = 2, β_0 = 0, ρ_0^A = ρ_0^B = 1.
pub fn initial_state() -> ParamState {
    ParamState {
        k: 0,
        ell: BigUint::from(2u32),
        ell_prime: None,
        n_big: None,
        n_prime: None,
        beta: BigUint::zero(),
        rho_a: BigUint::one(),
        rho_b: BigUint::one(),
    }
}

/// Per-level entries of a toy schedule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToyLevel {
    pub k: u32,
    #[serde(rename = "N", with = "bigfmt::biguint")]
    pub n: BigUint,
    #[serde(rename = "N_prime", with = "bigfmt::biguint")]
    pub n_prime: BigUint,
    #[serde(with = "bigfmt::biguint")]
    pub beta: BigUint,
}

impl ToyLevel {
    pub fn new(k: u32, n: u64, n_prime: u64, beta: impl Into<BigUint>) -> Self {
        ToyLevel {
            k,
            n: n.into(),
            n_prime: n_prime.into(),
            beta: beta.into(),
        }
    }

    /// Structural constraints on the block counts: N' ≥ 2, N' | N, N/N' ≥ 2, N ≥ 4.
    pub fn validate(&self) -> Result<()> {
        let two = BigUint::from(2u32);
        if self.n_prime < two {
            return Err(Error::Constraint(format!(
                "level {}: N'_k >= 2 fails (N'_k = {})",
                self.k, self.n_prime
            )));
        }
        if !self.n.is_multiple_of(&self.n_prime) {
            return Err(Error::Constraint(format!(
                "level {}: N'_k divides N_k fails (N_k = {}, N'_k = {})",
                self.k, self.n, self.n_prime
            )));
        }
        if &self.n / &self.n_prime < two {
            return Err(Error::Constraint(format!(
                "level {}: N_k / N'_k >= 2 fails (N_k = {}, N'_k = {})",
                self.k, self.n, self.n_prime
            )));
        }
        if self.n < BigUint::from(4u32) {
            return Err(Error::Constraint(format!(
                "level {}: N_k >= 4 fails (N_k = {})",
                self.k, self.n
            )));
        }
        Ok(())
    }
}

/// On-disk form of a toy schedule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleFile {
    pub levels: Vec<ToyLevel>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Schedule {
    /// The recurrence evaluated exactly, refusing levels above `cap`.
    PaperExact { cap: u32 },
    /// Block counts and temperatures supplied per level; only the ℓ and ρ
    /// updates are computed.
    Toy { levels: Vec<ToyLevel> },
}

impl Schedule {
    pub fn paper() -> Self {
        Schedule::PaperExact {
            cap: DEFAULT_PAPER_CAP,
        }
    }

    pub fn toy(levels: Vec<ToyLevel>) -> Result<Self> {
        for (i, level) in levels.iter().enumerate() {
            if level.k as usize != i + 1 {
                return Err(Error::invalid(format!(
                    "toy levels must be listed as k = 1, 2, ...; entry {} has k = {}",
                    i, level.k
                )));
            }
            level.validate()?;
        }
        Ok(Schedule::Toy { levels })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ScheduleFile =
            serde_json::from_str(text).map_err(|e| Error::invalid(format!("schedule: {e}")))?;
        Schedule::toy(file.levels)
    }

    pub fn to_json(&self) -> Option<String> {
        match self {
            Schedule::Toy { levels } => serde_json::to_string_pretty(&ScheduleFile {
                levels: levels.clone(),
            })
            .ok(),
            Schedule::PaperExact { .. } => None,
        }
    }

    pub fn is_paper(&self) -> bool {
        matches!(self, Schedule::PaperExact { .. })
    }

    /// Highest level this schedule can produce.
    pub fn max_level(&self) -> u32 {
        match self {
            Schedule::PaperExact { cap } => *cap,
            Schedule::Toy { levels } => levels.len() as u32,
        }
    }
}

fn ceil_div(a: &BigUint, b: &BigUint) -> BigUint {
    (a + b - 1u32) / b
}

fn ratio(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

/// Outputs of one recurrence step written in even-level roles: `lead` is the
/// dictionary whose count doubles (A at even levels), `dominant` the one whose
/// count is multiplied by N_k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct StepCore {
    pub n_prime: BigUint,
    pub ell_prime: BigUint,
    pub beta: BigUint,
    pub n_big: BigUint,
    pub ell: BigUint,
    pub rho_lead: BigUint,
    pub rho_dominant: BigUint,
}

pub(crate) fn recurrence_core(
    k: u32,
    ell_prev: &BigUint,
    rho_lead_prev: &BigUint,
    rho_dominant_prev: &BigUint,
) -> StepCore {
    let kk = BigUint::from(k);
    let n_prime = ceil_div(&(BigUint::from(2u32) * &kk * rho_lead_prev), rho_dominant_prev);
    let ell_prime = &n_prime * ell_prev;
    let shift = &kk * &ell_prime;
    let shift = usize::try_from(&shift).expect("shift exponent exceeds address space");
    let beta = ceil_div(
        &((ell_prev * ell_prev) << shift),
        &(rho_dominant_prev * rho_dominant_prev),
    );
    let n_big = &n_prime * ceil_div(&(&kk * &beta), &(&n_prime * rho_dominant_prev));
    let ell = &n_big * ell_prev;
    StepCore {
        rho_lead: BigUint::from(2u32) * rho_lead_prev,
        rho_dominant: &n_big * rho_dominant_prev,
        n_prime,
        ell_prime,
        beta,
        n_big,
        ell,
    }
}

/// Advance one level. Paper-exact mode evaluates the four ceilings of the
/// recurrence with A and B permuted at odd levels; toy mode reads N_k, N'_k
/// and β_k from the schedule.
pub fn step(prev: &ParamState, schedule: &Schedule) -> Result<ParamState> {
    let k = prev.k + 1;
    let parity = Parity::of(k);
    match schedule {
        Schedule::PaperExact { cap } => {
            if k > *cap {
                return Err(Error::capacity(
                    "paper-exact level",
                    k,
                    format!("{cap} (raise the cap explicitly)"),
                ));
            }
            let (lead, dom) = match parity {
                Parity::Even => (&prev.rho_a, &prev.rho_b),
                Parity::Odd => (&prev.rho_b, &prev.rho_a),
            };
            let core = recurrence_core(k, &prev.ell, lead, dom);
            let (rho_a, rho_b) = match parity {
                Parity::Even => (core.rho_lead, core.rho_dominant),
                Parity::Odd => (core.rho_dominant, core.rho_lead),
            };
            Ok(ParamState {
                k,
                ell: core.ell,
                ell_prime: Some(core.ell_prime),
                n_big: Some(core.n_big),
                n_prime: Some(core.n_prime),
                beta: core.beta,
                rho_a,
                rho_b,
            })
        }
        Schedule::Toy { levels } => {
            let level = levels.get(k as usize - 1).ok_or_else(|| {
                Error::capacity("toy schedule level", k, levels.len())
            })?;
            if level.k != k {
                return Err(Error::invalid(format!(
                    "schedule entry for level {k} is labelled k = {}",
                    level.k
                )));
            }
            level.validate()?;
            let two = BigUint::from(2u32);
            let (rho_a, rho_b) = match parity {
                Parity::Even => (&two * &prev.rho_a, &level.n * &prev.rho_b),
                Parity::Odd => (&level.n * &prev.rho_a, &two * &prev.rho_b),
            };
            Ok(ParamState {
                k,
                ell: &level.n * &prev.ell,
                ell_prime: Some(&level.n_prime * &prev.ell),
                n_big: Some(level.n.clone()),
                n_prime: Some(level.n_prime.clone()),
                beta: level.beta.clone(),
                rho_a,
                rho_b,
            })
        }
    }
}

/// States for levels 0..=levels.
pub fn states(schedule: &Schedule, levels: u32) -> Result<Vec<ParamState>> {
    let mut out = Vec::with_capacity(levels as usize + 1);
    out.push(initial_state());
    for _ in 0..levels {
        let next = step(out.last().expect("nonempty"), schedule)?;
        out.push(next);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Presets

/// Names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 6] = ["toy-a", "toy-b", "toy-c", "induction-a", "induction-b", "induction-c"];

/// Built-in schedules.
///
/// `toy-*` have small block counts so that every word up to level 4 can be
/// materialized. `induction-*` satisfy the induction inequalities that a finite
/// toy schedule can satisfy (block counts grow geometrically and
/// β_{k+1} = k·β_k·2^{(k+1)ℓ_k}); they are parameter-only.
pub fn preset(name: &str) -> Option<Schedule> {
    let small = |spec: &[(u64, u64)]| {
        let levels = spec
            .iter()
            .enumerate()
            .map(|(i, &(n, np))| {
                let k = i as u32 + 1;
                ToyLevel::new(k, n, np, BigUint::from(1u32) << (2 * k as usize + 1))
            })
            .collect();
        Schedule::toy(levels).expect("preset is valid")
    };
    match name {
        "toy-a" => Some(small(&[(4, 2), (4, 2), (4, 2), (4, 2), (4, 2)])),
        "toy-b" => Some(small(&[(4, 2), (6, 2), (4, 2), (6, 2), (4, 2)])),
        "toy-c" => Some(small(&[(4, 2), (4, 2), (6, 3), (8, 2), (6, 3)])),
        "induction-a" => Some(induction_schedule(&[(4, 2), (8, 4), (16, 8), (32, 16), (64, 32)])),
        "induction-b" => Some(induction_schedule(&[(4, 2), (8, 4), (16, 8), (32, 16), (96, 32)])),
        "induction-c" => Some(induction_schedule(&[(6, 2), (12, 6), (24, 12), (48, 24), (96, 48)])),
        _ => None,
    }
}

fn induction_schedule(spec: &[(u64, u64)]) -> Schedule {
    let mut levels = Vec::with_capacity(spec.len());
    let mut ell = BigUint::from(2u32);
    let mut beta = BigUint::zero();
    for (i, &(n, np)) in spec.iter().enumerate() {
        let k = i as u32 + 1;
        beta = if k == 1 {
            // largest value allowed by the upper half of the β bound
            BigUint::from(n * 2)
        } else {
            let prev_k = BigUint::from(k - 1);
            (prev_k * &beta) << (k as usize * usize::try_from(&ell).expect("small"))
        };
        ell *= n;
        levels.push(ToyLevel {
            k,
            n: n.into(),
            n_prime: np.into(),
            beta: beta.clone(),
        });
    }
    Schedule::toy(levels).expect("preset is valid")
}

// ---------------------------------------------------------------------------
// Induction inequalities

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CheckStatus {
    Holds,
    Violated,
    NotApplicable { reason: String },
}

impl CheckStatus {
    fn from_bool(ok: bool) -> Self {
        if ok {
            CheckStatus::Holds
        } else {
            CheckStatus::Violated
        }
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, CheckStatus::Violated)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ItemCheck {
    pub item: u8,
    pub statement: &'static str,
    #[serde(flatten)]
    pub status: CheckStatus,
    /// False for items that only constrain the paper-exact sequence and are
    /// merely reported for toy schedules.
    pub asserted: bool,
}

/// An exact rational with a short scientific rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioEntry {
    pub name: String,
    #[serde(serialize_with = "bigfmt::rational::serialize")]
    pub exact: BigRational,
    pub approx: String,
}

impl RatioEntry {
    pub fn new(name: impl Into<String>, exact: BigRational) -> Self {
        let approx = bigfmt::rational_sci(&exact, 6);
        RatioEntry {
            name: name.into(),
            exact,
            approx,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InductionLevel {
    pub k: u32,
    pub items: Vec<ItemCheck>,
    /// Items 6 and 7 are limits; only the ratios are tabulated.
    pub ratios: Vec<RatioEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InductionReport {
    pub paper_exact: bool,
    pub levels: Vec<InductionLevel>,
}

impl InductionReport {
    /// True when no asserted item is violated.
    pub fn all_asserted_hold(&self) -> bool {
        self.levels
            .iter()
            .flat_map(|l| &l.items)
            .all(|i| !(i.asserted && i.status.is_violated()))
    }

    pub fn item(&self, k: u32, item: u8) -> Option<&ItemCheck> {
        self.levels
            .iter()
            .find(|l| l.k == k)?
            .items
            .iter()
            .find(|i| i.item == item)
    }
}

/// Item 5 for the paper recurrence when β_{k+1} is too large to build. Only
/// the exponent of β_{k+1} ≥ ℓ_k²·2^{(k+1)ℓ'_{k+1}}/ρ² is needed, which
/// suffices whenever the left inequality holds with that lower bound.
fn item5_from_recurrence(st: &ParamState) -> CheckStatus {
    let k1 = st.k + 1;
    let (lead, dom) = match Parity::of(k1) {
        Parity::Even => (&st.rho_a, &st.rho_b),
        Parity::Odd => (&st.rho_b, &st.rho_a),
    };
    if dom.is_zero() {
        return CheckStatus::NotApplicable {
            reason: "rho_k of the dominant dictionary is zero".into(),
        };
    }
    let kk = BigUint::from(st.k);
    let n_prime_next = ceil_div(&(BigUint::from(2 * k1) * lead), dom);
    let e_next = BigUint::from(k1) * n_prime_next * &st.ell;
    let e_here = BigUint::from(k1) * &st.ell;
    // k β_k ρ² 2^{e_here} <= ℓ_k³ 2^{e_next}
    let x1 = &kk * &st.beta * dom * dom;
    let x2 = &st.ell * &st.ell * &st.ell;
    let first = if e_here <= e_next {
        cmp_shifted(&x2, &(&e_next - &e_here), &x1) != Ordering::Less
    } else {
        cmp_shifted(&x1, &(&e_here - &e_next), &x2) != Ordering::Greater
    };
    let second = cmp_shifted(&kk, &e_here, &st.ell) != Ordering::Less;
    match (first, second) {
        (_, false) => CheckStatus::Violated,
        (true, true) => CheckStatus::Holds,
        (false, true) => CheckStatus::NotApplicable {
            reason: "beta_{k+1} too large to build and its lower bound is inconclusive".into(),
        },
    }
}

/// Compare x·2^e with y without building 2^e when it would be enormous.
fn cmp_shifted(x: &BigUint, e: &BigUint, y: &BigUint) -> Ordering {
    if x.is_zero() {
        return if y.is_zero() { Ordering::Equal } else { Ordering::Less };
    }
    let lhs_bits = BigUint::from(x.bits()) + e;
    let rhs_bits = BigUint::from(y.bits());
    match lhs_bits.cmp(&rhs_bits) {
        Ordering::Equal => {
            let e = usize::try_from(e).expect("e below bit length of y");
            (x << e).cmp(y)
        }
        other => other,
    }
}

/// Evaluate the exact induction inequalities (items 1-5) on consecutive
/// states starting at level 0 or 1; items 6-7 are emitted as ratio tables.
///
/// Items 1 and 2 are asserted only when `paper_exact` is set; for toy schedules
/// they are still evaluated and reported.
pub fn check_induction(states: &[ParamState], paper_exact: bool) -> InductionReport {
    let mut levels = Vec::new();
    for (idx, st) in states.iter().enumerate() {
        if st.k == 0 {
            continue;
        }
        let Ok((n, np, lp)) = st.require_n() else {
            continue;
        };
        let prev = if idx > 0 { states.get(idx - 1) } else { None };
        let next = states.get(idx + 1);
        let kk = BigUint::from(st.k);
        let two_k = BigUint::from(2u32) * &kk;
        let mut items = Vec::with_capacity(5);

        let item1 = match prev {
            Some(p) => CheckStatus::from_bool(&two_k <= np && np <= &(&two_k * &p.ell)),
            None => CheckStatus::NotApplicable {
                reason: "previous level missing".into(),
            },
        };
        items.push(ItemCheck {
            item: 1,
            statement: "2k <= N'_k <= 2k l_{k-1}",
            status: item1,
            asserted: paper_exact,
        });

        // 2^{k l'_k} <= beta_k  and  k beta_k <= l_k
        let exponent = &kk * lp;
        let lower = cmp_shifted(&BigUint::one(), &exponent, &st.beta) != Ordering::Greater;
        let upper = &kk * &st.beta <= st.ell;
        items.push(ItemCheck {
            item: 2,
            statement: "2^{k l'_k} <= beta_k <= l_k / k",
            status: CheckStatus::from_bool(lower && upper),
            asserted: paper_exact,
        });

        let item3 = match prev.and_then(|p| p.n_big.as_ref()) {
            Some(n_prev) => CheckStatus::from_bool(n_prev <= np && np <= n),
            None => CheckStatus::NotApplicable {
                reason: "N_{k-1} undefined".into(),
            },
        };
        items.push(ItemCheck {
            item: 3,
            statement: "N_{k-1} <= N'_k <= N_k",
            status: item3,
            asserted: true,
        });

        let item4 = match st.parity() {
            Parity::Odd => st.rho_a >= st.rho_b,
            Parity::Even => st.rho_b >= st.rho_a,
        };
        items.push(ItemCheck {
            item: 4,
            statement: "rho^A_k >= rho^B_k (k odd), rho^B_k >= rho^A_k (k even)",
            status: CheckStatus::from_bool(item4),
            asserted: true,
        });

        let item5 = match next {
            Some(nx) if nx.k == st.k + 1 => {
                // k beta_k 2^{(k+1) l_k} <= l_k beta_{k+1}  and  l_k <= k 2^{(k+1) l_k}
                let e = BigUint::from(st.k + 1) * &st.ell;
                let first = cmp_shifted(&(&kk * &st.beta), &e, &(&st.ell * &nx.beta))
                    != Ordering::Greater;
                let second = cmp_shifted(&kk, &e, &st.ell) != Ordering::Less;
                CheckStatus::from_bool(first && second)
            }
            _ if paper_exact => item5_from_recurrence(st),
            _ => CheckStatus::NotApplicable {
                reason: "beta_{k+1} not computed".into(),
            },
        };
        items.push(ItemCheck {
            item: 5,
            statement: "beta_k <= l_k beta_{k+1} / (k 2^{(k+1) l_k}) <= beta_{k+1}",
            status: item5,
            asserted: true,
        });

        let mut ratios = vec![
            RatioEntry::new("f^A_k", st.f_a()),
            RatioEntry::new("f^B_k", st.f_b()),
            RatioEntry::new("N_k/N'_k", ratio(n, np)),
        ];
        if let Some(n_prev) = prev.and_then(|p| p.n_big.as_ref()) {
            ratios.push(RatioEntry::new("N'_k/N_{k-1}", ratio(np, n_prev)));
        }
        if let Some(nx) = next {
            if !st.beta.is_zero() {
                ratios.push(RatioEntry::new("beta_{k+1}/beta_k", ratio(&nx.beta, &st.beta)));
            }
        }
        if !st.rho_b.is_zero() {
            ratios.push(RatioEntry::new("f^A_k/f^B_k", ratio(&st.rho_a, &st.rho_b)));
        }
        levels.push(InductionLevel {
            k: st.k,
            items,
            ratios,
        });
    }
    InductionReport {
        paper_exact,
        levels,
    }
}

// ---------------------------------------------------------------------------
// Constraints (C1)-(C4)

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintLevel {
    pub k: u32,
    pub parity: Parity,
    /// (β_k/ℓ_k) / f_k, with f the dominant frequency.
    pub c1: RatioEntry,
    /// ((R'_k)²/β_k) / (f_{k-1})²; `None` when R'_k was not supplied.
    pub c2: Option<RatioEntry>,
    pub c2_note: Option<String>,
    /// (f^{lead}_{k-1}/N'_k) / f^{dominant}_{k-1}.
    pub c3: RatioEntry,
    /// Frequency of the dominant dictionary is unchanged from level k-1.
    pub c4_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trend {
    pub constraint: &'static str,
    pub parity: Parity,
    /// `None` with fewer than two levels in the parity class.
    pub strictly_decreasing: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintsReport {
    pub levels: Vec<ConstraintLevel>,
    pub trends: Vec<Trend>,
}

impl ConstraintsReport {
    pub fn c4_all_hold(&self) -> bool {
        self.levels.iter().all(|l| l.c4_holds)
    }
}

/// Tabulate (C1)-(C3) as exact ratios and check (C4) exactly. `r_prime[i]`
/// holds R'_k for `states[i]`; a missing value marks C2 unevaluable there.
pub fn check_constraints(
    states: &[ParamState],
    r_prime: &[Option<BigUint>],
) -> Result<ConstraintsReport> {
    let mut levels = Vec::new();
    for (idx, st) in states.iter().enumerate() {
        if st.k == 0 || idx == 0 {
            continue;
        }
        let prev = &states[idx - 1];
        if prev.k + 1 != st.k {
            return Err(Error::invalid("states must be consecutive"));
        }
        let (_, np, _) = st.require_n()?;
        let dom = st.parity().dominant();
        let lead = dom.other();
        if st.beta.is_zero() && st.rho(dom).is_zero() {
            return Err(Error::Undefined(format!("C1 at level {}", st.k)));
        }
        let c1 = RatioEntry::new("C1", ratio(&st.beta, st.rho(dom)));
        let f_dom_prev = prev.freq(dom);
        let (c2, c2_note) = match r_prime.get(idx).cloned().flatten() {
            Some(r) if !st.beta.is_zero() => {
                let num = BigInt::from(&r * &r);
                let q = BigRational::new(num, BigInt::from(st.beta.clone()))
                    / (&f_dom_prev * &f_dom_prev);
                (Some(RatioEntry::new("C2", q)), None)
            }
            Some(_) => (None, Some("C2 unevaluable: beta_k = 0".to_string())),
            None => (None, Some("C2 unevaluable: R'_k not supplied".to_string())),
        };
        let c3 = RatioEntry::new(
            "C3",
            prev.freq(lead) / BigRational::from_integer(BigInt::from(np.clone())) / f_dom_prev.clone(),
        );
        let c4_holds = st.freq(dom) == f_dom_prev;
        levels.push(ConstraintLevel {
            k: st.k,
            parity: st.parity(),
            c1,
            c2,
            c2_note,
            c3,
            c4_holds,
        });
    }
    let mut trends = Vec::new();
    for name in ["C1", "C2", "C3"] {
        for parity in [Parity::Even, Parity::Odd] {
            let seq: Vec<&BigRational> = levels
                .iter()
                .filter(|l| l.parity == parity)
                .filter_map(|l| match name {
                    "C1" => Some(&l.c1.exact),
                    "C2" => l.c2.as_ref().map(|c| &c.exact),
                    _ => Some(&l.c3.exact),
                })
                .collect();
            let strictly_decreasing = if seq.len() < 2 {
                None
            } else {
                Some(seq.windows(2).all(|w| w[1] < w[0]))
            };
            trends.push(Trend {
                constraint: name,
                parity,
                strictly_decreasing,
            });
        }
    }
    Ok(ConstraintsReport { levels, trends })
}
