use std::collections::HashSet;
use std::fs;
use std::ops::ControlFlow;

use num_bigint::BigUint;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use zerotemp::bigfmt;
use zerotemp::grid2d::generators::{random_tiling, GeneratorKind, PatternGenerator};
use zerotemp::grid2d::{
    aligned_window_test, check_admissibility_cover, check_frequency_bounds, check_frequency_bounds_mirrored,
    compute_ijk, enumerate_duplications, forbidden_position_density, verticalize, IjkContext, IjkCounts, Pattern2D,
};
use zerotemp::language::{complexity_function, language_slice, level_for_length, stream_forbidden, verify_reconstruction};
use zerotemp::overlaps::{classify_self_overlaps, verify_no_cross_overlap};
use zerotemp::params::{check_constraints, check_induction, preset, states, Dict, Parity, ParamState, Schedule, PRESET_NAMES};
use zerotemp::thermo::{
    chaotic_row, dictionary_log_count, pressure_lower_bound, pressure_upper_bound_rhs, BoundInputs, Cardinalities,
    Surrogate,
};
use zerotemp::words::{Hierarchy, Symbol};
use zerotemp::Error;

use crate::args::{BoundsArgs, Cli, Command, GlobalOpts, GridArgs, GridCheck, Mode};
use crate::error::{CliError, CliResult};
use crate::output::Emitter;
use crate::report;

pub fn run(cli: &Cli) -> CliResult<()> {
    let opts = &cli.global;
    let schedule = load_schedule(opts)?;
    match &cli.command {
        Command::Params(a) => params(opts, &schedule, &a.surrogate.to_surrogate()),
        Command::Forbidden(a) => forbidden(opts, &schedule, a.n_max, a.stats),
        Command::Language(a) => language(opts, &schedule, a.n_max, a.words),
        Command::Reconstruct(a) => reconstruct(opts, &schedule, a.n_max),
        Command::Overlaps => overlaps(opts, &schedule),
        Command::Grid(a) => grid(opts, &schedule, a),
        Command::Bounds(a) => bounds(opts, &schedule, a),
        Command::Report(a) => report::run(opts, &schedule, a),
    }
}

pub fn load_schedule(opts: &GlobalOpts) -> CliResult<Schedule> {
    match (opts.mode, &opts.schedule) {
        (Some(Mode::Paper), Some(_)) => Err(CliError::Usage("--schedule cannot be combined with --mode paper".into())),
        (Some(Mode::Paper), None) => Ok(Schedule::paper()),
        (_, None) => Ok(preset("toy-a").expect("built-in preset")),
        (_, Some(name)) => {
            if let Some(s) = preset(name) {
                return Ok(s);
            }
            let text = fs::read_to_string(name).map_err(|e| {
                CliError::Usage(format!(
                    "schedule {name:?} is neither a preset ({}) nor a readable file: {e}",
                    PRESET_NAMES.join(", ")
                ))
            })?;
            Ok(Schedule::from_json(&text)?)
        }
    }
}

/// `--levels` if given, else `default` clamped to what the schedule provides.
pub fn levels(opts: &GlobalOpts, schedule: &Schedule, default: u32) -> u32 {
    opts.levels.unwrap_or_else(|| default.min(schedule.max_level()))
}

impl crate::args::SurrogateOpts {
    pub fn to_surrogate(&self) -> Surrogate {
        Surrogate {
            base: self.surrogate_base,
        }
    }
}

#[derive(Serialize)]
struct WithK<'a, T> {
    k: u32,
    #[serde(flatten)]
    inner: &'a T,
}

fn params(opts: &GlobalOpts, schedule: &Schedule, surrogate: &Surrogate) -> CliResult<()> {
    let n = levels(opts, schedule, schedule.max_level());
    let st = states(schedule, n)?;
    let mut out = Emitter::new(
        opts,
        "state",
        &["k", "ell", "ell_prime", "N", "N_prime", "beta", "rho_a", "rho_b"],
    )?;
    for s in &st {
        out.record("state", s)?;
    }
    let induction = check_induction(&st, schedule.is_paper());
    for level in &induction.levels {
        for item in &level.items {
            out.record("induction", &WithK { k: level.k, inner: item })?;
        }
        for ratio in &level.ratios {
            out.record("ratio", &WithK { k: level.k, inner: ratio })?;
        }
    }
    // R'_k needs the surrogate at l'_k; levels where it is too large are skipped
    let r_primes: Vec<Option<BigUint>> = st
        .iter()
        .map(|s| s.ell_prime.as_ref().and_then(|lp| surrogate.r_prime(lp).ok()))
        .collect();
    let constraints = check_constraints(&st, &r_primes)?;
    for level in &constraints.levels {
        out.record("constraint", level)?;
    }
    for trend in &constraints.trends {
        out.record("trend", trend)?;
    }
    out.finish()
}

fn hierarchy(opts: &GlobalOpts, schedule: &Schedule, default: u32) -> CliResult<Hierarchy> {
    Ok(Hierarchy::new(schedule, levels(opts, schedule, default))?)
}

/// Toy schedules are built to level 4 by default; paper mode to its cap.
const WORD_LEVELS: u32 = 4;

fn forbidden(opts: &GlobalOpts, schedule: &Schedule, n_max: usize, stats: bool) -> CliResult<()> {
    let h = hierarchy(opts, schedule, WORD_LEVELS)?;
    let mut out = Emitter::new(opts, "forbidden", &["n", "word", "k", "p"])?;
    let mut failure = None;
    let all = stream_forbidden(&h, n_max, opts.materialize_cap, |rec| match out.record("forbidden", rec) {
        Ok(()) => ControlFlow::Continue(()),
        Err(e) => {
            failure = Some(e);
            ControlFlow::Break(())
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    if stats {
        for s in &all {
            out.record("slice", s)?;
        }
    }
    out.finish()
}

#[derive(Serialize)]
struct ComplexityRow {
    n: usize,
    count: usize,
    k: u32,
    log_over_n: f64,
}

#[derive(Serialize)]
struct WordRow {
    n: usize,
    word: String,
}

fn language(opts: &GlobalOpts, schedule: &Schedule, n_max: usize, words: bool) -> CliResult<()> {
    let h = hierarchy(opts, schedule, WORD_LEVELS)?;
    let cap = opts.materialize_cap;
    let mut out = Emitter::new(opts, "complexity", &["n", "count", "k", "log_over_n"])?;
    for e in complexity_function(&h, n_max, cap)? {
        let k = level_for_length(&h, e.n)?.k;
        out.record(
            "complexity",
            &ComplexityRow {
                n: e.n,
                count: e.count,
                k,
                log_over_n: e.log_over_n,
            },
        )?;
    }
    if words {
        for n in 1..=n_max {
            for w in language_slice(&h, n, cap)?.words {
                out.record(
                    "word",
                    &WordRow {
                        n,
                        word: zerotemp::words::symbols_to_string(&w),
                    },
                )?;
            }
        }
    }
    out.finish()
}

fn reconstruct(opts: &GlobalOpts, schedule: &Schedule, n_max: usize) -> CliResult<()> {
    let h = hierarchy(opts, schedule, WORD_LEVELS)?;
    let cap = opts.materialize_cap;
    let reports = (1..=n_max)
        .into_par_iter()
        .map(|n| verify_reconstruction(&h, n, cap))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Emitter::new(
        opts,
        "reconstruction",
        &[
            "n",
            "window",
            "global_level",
            "locally_admissible",
            "globally_admissible",
            "holds",
            "counterexample",
        ],
    )?;
    for r in &reports {
        out.record("reconstruction", r)?;
    }
    out.finish()
}

#[derive(Serialize)]
struct CrossRow<'a> {
    k: u32,
    holds: bool,
    overlapping_pairs: Vec<&'a zerotemp::overlaps::PairOverlap>,
}

#[derive(Serialize)]
struct ClassRow<'a> {
    k: u32,
    parity: Parity,
    mirrored: bool,
    #[serde(flatten)]
    class: &'a zerotemp::overlaps::ClassVerdict,
}

fn overlaps(opts: &GlobalOpts, schedule: &Schedule) -> CliResult<()> {
    let default = if schedule.is_paper() { 1 } else { WORD_LEVELS };
    let h = hierarchy(opts, schedule, default)?;
    let cap = opts.materialize_cap;
    let top = h.max_level();
    let mut out = Emitter::new(opts, "class", &["k", "parity", "class", "verdict", "statement"])?;
    for k in 0..=top {
        let cross = verify_no_cross_overlap(&h, k, cap)?;
        out.record(
            "cross",
            &CrossRow {
                k,
                holds: cross.holds,
                overlapping_pairs: cross.pairs.iter().filter(|p| !p.shifts.is_empty()).collect(),
            },
        )?;
        if k == 0 {
            continue;
        }
        let selfr = classify_self_overlaps(&h, k, cap)?;
        for pair in &selfr.pairs {
            out.record("shifts", &WithK { k, inner: pair })?;
        }
        for class in &selfr.classes {
            out.record(
                "class",
                &ClassRow {
                    k,
                    parity: selfr.parity,
                    mirrored: selfr.mirrored,
                    class,
                },
            )?;
        }
    }
    out.finish()
}

// ---------------------------------------------------------------------------
// grid

#[derive(Debug, Clone, Serialize)]
pub struct PatternRow {
    pub k: u32,
    pub generator: &'static str,
    pub index: u64,
    pub side: usize,
    #[serde(flatten)]
    pub counts: IjkCounts,
    pub cover_holds: bool,
    pub uncovered: Vec<(usize, usize)>,
    /// `None` where the frequency bounds are undefined (k = 1) or not requested.
    pub frequency_holds: Option<bool>,
    pub frequency: Vec<zerotemp::grid2d::BoundCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridSummary {
    pub k: u32,
    pub check: &'static str,
    pub side: usize,
    pub patterns: usize,
    /// Patterns with I nonempty, where the inclusion is not vacuous.
    pub nonvacuous: usize,
    pub cover_failures: usize,
    pub frequency_failures: usize,
    pub holds: bool,
}

/// Which generators run and how many patterns each contributes.
pub fn grid_plan(samples: u64, structured: u64) -> Vec<(GeneratorKind, u64)> {
    let mut plan = Vec::new();
    for kind in GeneratorKind::ALL {
        let count = if kind == GeneratorKind::Uniform { samples } else { structured };
        plan.extend((0..count).map(|i| (kind, i)));
    }
    plan
}

/// Run the admissibility cover and (when defined) frequency bounds on every
/// planned pattern, in plan order.
pub fn grid_rows(
    h: &Hierarchy,
    k: u32,
    margin: usize,
    seed: u64,
    cap: usize,
    plan: &[(GeneratorKind, u64)],
    frequency: bool,
) -> CliResult<(usize, Vec<PatternRow>)> {
    let ctx = IjkContext::new(h, k, cap)?;
    let side = PatternGenerator::default_side(&ctx, margin);
    let gen = PatternGenerator::new(h, &ctx, side, seed, cap)?;
    let rows = plan
        .par_iter()
        .map(|&(kind, index)| {
            let p = gen.generate(kind, index);
            let r = compute_ijk(&p, &ctx)?;
            let cover = check_admissibility_cover(&r);
            let freq = if !frequency || k < 2 {
                None
            } else if ctx.parity == Parity::Even {
                Some(check_frequency_bounds(&r, &ctx)?)
            } else {
                Some(check_frequency_bounds_mirrored(&r, &ctx)?)
            };
            Ok(PatternRow {
                k,
                generator: kind.name(),
                index,
                side,
                counts: r.counts(),
                cover_holds: cover.holds(),
                uncovered: cover.uncovered,
                frequency_holds: freq.as_ref().map(|f| f.holds()),
                frequency: freq.map(|f| f.checks).unwrap_or_default(),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok((side, rows))
}

pub fn summarize(k: u32, check: &'static str, side: usize, rows: &[PatternRow]) -> GridSummary {
    let cover_failures = rows.iter().filter(|r| !r.cover_holds).count();
    let frequency_failures = rows.iter().filter(|r| r.frequency_holds == Some(false)).count();
    GridSummary {
        k,
        check,
        side,
        patterns: rows.len(),
        nonvacuous: rows.iter().filter(|r| r.counts.i > 0).count(),
        cover_failures,
        frequency_failures,
        holds: cover_failures == 0 && frequency_failures == 0,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DuplicationRow {
    pub k: u32,
    pub block: String,
    pub height: usize,
    pub distinct: usize,
    /// log2 of the predicted count, ℓ_k ρ^B_k
    #[serde(with = "bigfmt::biguint")]
    pub expected_log2: BigUint,
    pub holds: bool,
}

/// Largest number of duplicated blocks enumerated.
const DUPLICATION_LIMIT: usize = 1 << 20;

/// Distinct duplications of the vertically aligned b_j block for j ≤ k.
pub fn duplication_rows(h: &Hierarchy, k: u32, cap: usize) -> CliResult<Vec<DuplicationRow>> {
    (0..=k)
        .map(|j| {
            let st = h.state(j)?;
            let b = h.words(j)?.word(Dict::B).materialize_all(cap)?;
            let height = b.len();
            let block = verticalize(&b, height)?;
            let dups = enumerate_duplications(&block, DUPLICATION_LIMIT)?;
            let distinct = dups.iter().map(|p| p.cells.clone()).collect::<HashSet<_>>().len();
            let expected_log2 = dictionary_log_count(st, Dict::B, &BigUint::from(height));
            let holds = BigUint::from(distinct) == BigUint::from(1u32) << bigfmt_usize(&expected_log2);
            Ok(DuplicationRow {
                k: j,
                block: format!("b_{j}"),
                height,
                distinct,
                expected_log2,
                holds,
            })
        })
        .collect()
}

fn bigfmt_usize(v: &BigUint) -> usize {
    usize::try_from(v).unwrap_or(usize::MAX)
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityRow {
    pub k: u32,
    pub index: u64,
    pub window: usize,
    pub tiles: usize,
    #[serde(with = "bigfmt::rational")]
    pub density: BigRational,
    #[serde(with = "bigfmt::rational")]
    pub bound: BigRational,
    pub holds: bool,
}

/// Side of the square tilings used by the density check, in blocks.
pub const DENSITY_TILES: usize = 3;

/// Density of failing D×D windows in seeded tilings by vertically aligned
/// level-k words, against the bound 2D/ℓ_k.
pub fn density_rows(h: &Hierarchy, k: u32, d: usize, count: u64, seed: u64, cap: usize) -> CliResult<Vec<DensityRow>> {
    let lw = h.words(k)?;
    let blocks: Vec<Vec<Symbol>> = lw
        .named()
        .iter()
        .map(|(_, w)| w.materialize_all(cap))
        .collect::<Result<_, _>>()?;
    let ell = blocks[0].len();
    let cells = (ell * DENSITY_TILES).saturating_mul(ell * DENSITY_TILES);
    if cells > cap {
        return Err(Error::capacity("pattern cells", cells, cap).into());
    }
    if d == 0 || d > ell {
        return Err(Error::invalid(format!("window side {d} must lie in [1, {ell}]")).into());
    }
    let lang: HashSet<Vec<Symbol>> = language_slice(h, d, cap)?.words.into_iter().collect();
    let window_ok = aligned_window_test(lang);
    let block_set: HashSet<Vec<Symbol>> = blocks.iter().cloned().collect();
    let block_ok = |p: &Pattern2D, bx: usize, by: usize, side: usize| {
        let row = &p.row(by + 1)[bx..bx + side];
        (by + 2..=by + side).all(|j| &p.row(j)[bx..bx + side] == row) && block_set.contains(row)
    };
    let bound = BigRational::new((2 * d).into(), ell.into());
    (0..count)
        .into_par_iter()
        .map(|index| {
            let p = random_tiling(&blocks, DENSITY_TILES, seed, index)?;
            let density = forbidden_position_density(&p, d, ell, block_ok, &window_ok)?;
            Ok(DensityRow {
                k,
                index,
                window: d,
                tiles: DENSITY_TILES,
                holds: density <= bound,
                density,
                bound: bound.clone(),
            })
        })
        .collect()
}

fn grid(opts: &GlobalOpts, schedule: &Schedule, a: &GridArgs) -> CliResult<()> {
    let cap = opts.materialize_cap;
    match a.check {
        GridCheck::Duplications => {
            let k = a.level.unwrap_or(1);
            let h = Hierarchy::new(schedule, k)?;
            let mut out = Emitter::new(opts, "duplication", &["k", "block", "height", "distinct", "expected_log2", "holds"])?;
            for row in duplication_rows(&h, k, cap)? {
                out.record("duplication", &row)?;
            }
            out.finish()
        }
        GridCheck::Density => {
            let k = a.level.unwrap_or(1);
            let h = Hierarchy::new(schedule, k)?;
            let rows = density_rows(&h, k, a.window, a.structured, opts.seed, cap)?;
            let mut out = Emitter::new(opts, "density", &["k", "index", "window", "tiles", "density", "bound", "holds"])?;
            for row in &rows {
                out.record("density", row)?;
            }
            out.finish()
        }
        check => {
            let k = a.level.unwrap_or(2);
            let name = match check {
                GridCheck::Admissibility => "admissibility",
                GridCheck::Frequency => "frequency",
                _ => "all",
            };
            let top = k.max(levels_for_language(schedule, k));
            let h = Hierarchy::new(schedule, top)?;
            let plan = grid_plan(a.samples, a.structured);
            let frequency = check != GridCheck::Admissibility;
            let (side, mut rows) = grid_rows(&h, k, a.margin, opts.seed, cap, &plan, frequency)?;
            if check == GridCheck::Frequency {
                for r in &mut rows {
                    r.cover_holds = true;
                }
            }
            let summary = summarize(k, name, side, &rows);
            let (primary, columns): (&'static str, &'static [&'static str]) = if a.each {
                (
                    "pattern",
                    &["k", "generator", "index", "side", "i", "j_a", "j_b", "k_a", "k_b", "cover_holds", "frequency_holds"],
                )
            } else {
                (
                    "summary",
                    &["k", "check", "side", "patterns", "nonvacuous", "cover_failures", "frequency_failures", "holds"],
                )
            };
            let mut out = Emitter::new(opts, primary, columns)?;
            if a.each {
                for r in &rows {
                    out.record("pattern", r)?;
                }
            }
            out.record("summary", &summary)?;
            out.finish()
        }
    }
}

/// Level of the hierarchy whose words reach 2ℓ'_k, capped by the schedule.
pub fn levels_for_language(schedule: &Schedule, k: u32) -> u32 {
    (k + 1).min(schedule.max_level())
}

// ---------------------------------------------------------------------------
// bounds

#[derive(Serialize)]
struct TermRow<'a> {
    k: u32,
    term_name: &'a str,
    #[serde(serialize_with = "bigfmt::opt_rational::serialize")]
    exact_coefficient: &'a Option<BigRational>,
    unit: &'a str,
    decimal_value: &'a str,
}

#[derive(Serialize)]
struct UpperRow<'a> {
    k: u32,
    parity: Parity,
    mirrored: bool,
    #[serde(serialize_with = "bigfmt::rational::serialize")]
    mu_complement: &'a BigRational,
    decimal_total: &'a str,
}

#[derive(Serialize)]
struct SkipRow {
    k: u32,
    reason: String,
}

/// Bound inputs per level; a level whose inputs cannot be formed keeps its error.
type LevelInputs = Vec<Result<BoundInputs, Error>>;

fn bound_inputs(
    opts: &GlobalOpts,
    schedule: &Schedule,
    a: &BoundsArgs,
) -> CliResult<(Vec<ParamState>, LevelInputs)> {
    if let Some(path) = &a.inputs {
        let text = fs::read_to_string(path)?;
        let value: serde_json::Value = serde_json::from_str(&text)?;
        let list: Vec<BoundInputs> = match value {
            serde_json::Value::Array(_) => serde_json::from_value(value)?,
            other => vec![serde_json::from_value(other)?],
        };
        for inp in &list {
            inp.validate()?;
        }
        return Ok((Vec::new(), list.into_iter().map(Ok).collect()));
    }
    let top = levels(opts, schedule, schedule.max_level());
    let st = states(schedule, top)?;
    let cards = Cardinalities {
        a: a.card_a,
        a_tilde: a.card_a_tilde,
        a_hat: a.card_a_hat,
    };
    let surrogate = a.surrogate.to_surrogate();
    let inputs = (2..=top)
        .map(|k| BoundInputs::with_surrogate(&st, k, a.d, &surrogate, cards))
        .collect();
    Ok((st, inputs))
}

fn bounds(opts: &GlobalOpts, schedule: &Schedule, a: &BoundsArgs) -> CliResult<()> {
    let mu = bigfmt::parse_rational(&a.mu).map_err(|e| CliError::Usage(format!("--mu: {e}")))?;
    let prec = opts.precision;
    let (st, inputs) = bound_inputs(opts, schedule, a)?;
    let mut out = Emitter::new(opts, "chaotic", &["k", "parity", "L_k", "U_k_at_mu0", "implied_mu_bound"])?;
    for s in st.iter().skip(1) {
        out.record("lower", &pressure_lower_bound(s, a.d, prec))?;
    }
    let evaluated: Vec<_> = inputs
        .par_iter()
        .map(|inp| {
            let inp = inp.as_ref().map_err(Clone::clone)?;
            let upper = pressure_upper_bound_rhs(inp, &mu, prec)?;
            let row = chaotic_row(inp, prec)?;
            Ok::<_, Error>((inp.k, upper, row))
        })
        .collect();
    for (idx, item) in evaluated.into_iter().enumerate() {
        match item {
            Ok((k, upper, row)) => {
                for t in &upper.terms {
                    out.record(
                        "term",
                        &TermRow {
                            k,
                            term_name: t.term_name,
                            exact_coefficient: &t.exact_coefficient,
                            unit: t.unit,
                            decimal_value: &t.decimal_value,
                        },
                    )?;
                }
                out.record(
                    "upper",
                    &UpperRow {
                        k,
                        parity: upper.parity,
                        mirrored: upper.mirrored,
                        mu_complement: &upper.mu_complement,
                        decimal_total: &upper.decimal_total,
                    },
                )?;
                out.record("chaotic", &row)?;
            }
            // a level whose inputs break a standing constraint is reported, not fatal
            Err(e @ (Error::Constraint(_) | Error::Undefined(_))) if a.inputs.is_none() => {
                out.record(
                    "skipped",
                    &SkipRow {
                        k: idx as u32 + 2,
                        reason: e.to_string(),
                    },
                )?;
            }
            Err(e) => return Err(e.into()),
        }
    }
    out.finish()
}
