//! The `report` command: every check at desk scale, one verdict per suite.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use serde_json::{json, Value};
use zerotemp::grid2d::generators::GeneratorKind;
use zerotemp::language::{for_each_forbidden, forbidden_slice, language_slice, verify_reconstruction};
use zerotemp::overlaps::{classify_self_overlaps, verify_no_cross_overlap};
use zerotemp::params::{check_induction, preset, states, Schedule};
use zerotemp::thermo::{
    agrees_to, chaotic_row, pressure_upper_bound_proof_form, pressure_upper_bound_rhs, sample_admissible_inputs,
};
use zerotemp::words::{symbols_to_string, Hierarchy};
use zerotemp::Error;

use crate::args::{Format, GlobalOpts, ReportArgs};
use crate::commands::{density_rows, duplication_rows, grid_rows, levels, summarize};
use crate::error::CliResult;
use crate::output::Emitter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
struct Suite {
    suite: &'static str,
    status: Status,
    detail: Value,
}

#[derive(Debug, Serialize)]
struct Summary<'a> {
    schedule: String,
    seed: u64,
    passed: usize,
    failed: Vec<&'static str>,
    skipped: Vec<&'static str>,
    suites: &'a [Suite],
}

type Outcome = Result<(bool, Value), Error>;

fn suite(name: &'static str, outcome: Outcome) -> CliResult<Suite> {
    match outcome {
        Ok((ok, detail)) => Ok(Suite {
            suite: name,
            status: if ok { Status::Pass } else { Status::Fail },
            detail,
        }),
        // checks that cannot be materialized under this schedule are skipped
        Err(e @ Error::Capacity { .. }) => Ok(Suite {
            suite: name,
            status: Status::Skipped,
            detail: json!({ "reason": e.to_string() }),
        }),
        Err(e) => Err(e.into()),
    }
}

/// Uniform patterns per 2D level come from `--samples`; each structured
/// generator adds this many more.
const STRUCTURED_PER_KIND: u64 = 10;
const BOUND_SAMPLES: u64 = 20;
const DENSITY_SAMPLES: u64 = 10;
const OVERLAP_LEVELS: u32 = 4;

pub fn run(opts: &GlobalOpts, schedule: &Schedule, a: &ReportArgs) -> CliResult<()> {
    let cap = opts.materialize_cap;
    let top = levels(opts, schedule, OVERLAP_LEVELS);
    let name = match (&opts.schedule, schedule.is_paper()) {
        (_, true) => "paper".to_string(),
        (Some(s), false) => s.clone(),
        (None, false) => "toy-a".to_string(),
    };
    let hierarchy = Hierarchy::new(schedule, top);
    let h = || hierarchy.as_ref().map_err(Clone::clone);

    let mut suites = vec![
        suite("paper-first-levels", paper_first_levels())?,
        suite("word-lengths-match-parameters", h().and_then(word_lengths))?,
        suite("induction-inequalities", induction_inequalities())?,
        suite("forbidden-words", h().and_then(|h| forbidden_words(h, a.n_max, cap)))?,
        suite("local-to-global-reconstruction", h().and_then(|h| reconstruction(h, a.n_max, cap)))?,
        suite("no-cross-overlaps", h().and_then(|h| cross_overlaps(h, cap)))?,
        suite("self-overlap-classes", h().and_then(|h| self_overlaps(h, cap)))?,
    ];
    for (name, frequency) in [("admissibility-cover", false), ("zero-frequency-bounds", true)] {
        suites.push(suite(name, grid_suite(schedule, top, a.samples, opts.seed, cap, frequency))?);
    }
    suites.push(suite("duplication-count", h().and_then(|h| duplications(h, cap)))?);
    suites.push(suite("forbidden-window-density", h().and_then(|h| density(h, opts.seed, cap)))?);
    suites.push(suite("upper-bound-forms-agree", bound_forms(opts.seed, opts.precision))?);
    suites.push(suite("implied-bound-round-trip", round_trip(opts.seed, opts.precision))?);

    let pick = |s: Status| suites.iter().filter(|x| x.status == s).map(|x| x.suite).collect::<Vec<_>>();
    let summary = Summary {
        schedule: name,
        seed: opts.seed,
        passed: pick(Status::Pass).len(),
        failed: pick(Status::Fail),
        skipped: pick(Status::Skipped),
        suites: &suites,
    };
    let mut out = Emitter::new(opts, "suite", &["suite", "status"])?;
    if opts.format == Format::Json {
        out.record("report", &summary)?;
    } else {
        for s in &suites {
            out.record("suite", s)?;
        }
    }
    out.finish()
}

fn log2_exact(v: &BigUint) -> Option<u64> {
    (v.count_ones() == 1).then(|| v.bits() - 1)
}

fn paper_first_levels() -> Outcome {
    let st = states(&Schedule::paper(), 2)?;
    let s1 = &st[1];
    let tuple = [
        s1.n_prime.clone(),
        s1.ell_prime.clone(),
        Some(s1.beta.clone()),
        s1.n_big.clone(),
        Some(s1.ell.clone()),
        Some(s1.rho_a.clone()),
        Some(s1.rho_b.clone()),
    ];
    let expected = [2u32, 4, 64, 64, 128, 64, 2].map(|v| Some(BigUint::from(v)));
    let log_beta = log2_exact(&st[2].beta);
    let log_ell = log2_exact(&st[2].ell);
    let ok = tuple == expected && log_beta == Some(32780) && log_ell == Some(32787);
    Ok((
        ok,
        json!({ "log2_beta_2": log_beta, "log2_ell_2": log_ell }),
    ))
}

fn word_lengths(h: &Hierarchy) -> Outcome {
    let mut ok = true;
    for k in 0..=h.max_level() {
        let st = h.state(k)?;
        let w = h.words(k)?;
        let (len_a, zeros_a) = w.a.recount();
        let (len_b, zeros_b) = w.b.recount();
        ok &= len_a == st.ell && len_b == st.ell && zeros_a == st.rho_a && zeros_b == st.rho_b;
    }
    Ok((ok, json!({ "levels": h.max_level() })))
}

fn induction_inequalities() -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    let paper = check_induction(&states(&Schedule::paper(), 2)?, true).all_asserted_hold();
    ok &= paper;
    detail.push(json!({ "schedule": "paper", "levels": 2, "holds": paper }));
    for name in ["induction-a", "induction-b", "induction-c"] {
        let s = preset(name).expect("built-in preset");
        let holds = check_induction(&states(&s, s.max_level())?, false).all_asserted_hold();
        ok &= holds;
        detail.push(json!({ "schedule": name, "levels": s.max_level(), "holds": holds }));
    }
    Ok((ok, Value::Array(detail)))
}

/// Fixed small cases, then card F̃(n) + card L(n) = 3^n for every n.
fn forbidden_words(h: &Hierarchy, n_max: usize, cap: usize) -> Outcome {
    let (f1, _) = forbidden_slice(h, 1, cap)?;
    let (f2, _) = forbidden_slice(h, 2, cap)?;
    let l2 = language_slice(h, 2, cap)?.count;
    let f2_words: Vec<String> = f2.iter().map(|r| symbols_to_string(&r.word)).collect();
    let mut ok = f1.is_empty() && f2_words == ["00"] && l2 == 8;
    let mut sizes = Vec::new();
    for n in 1..=n_max {
        let stats = for_each_forbidden(h, n, cap, |_| std::ops::ControlFlow::Continue(()))?;
        let lang = language_slice(h, n, cap)?.count as u64;
        let total = 3u64.pow(n as u32);
        ok &= stats.forbidden + lang == total;
        sizes.push(json!({ "n": n, "forbidden": stats.forbidden, "language": lang }));
    }
    Ok((ok, json!({ "f2": f2_words, "language_2": l2, "sizes": sizes })))
}

fn reconstruction(h: &Hierarchy, n_max: usize, cap: usize) -> Outcome {
    let ell1 = usize::try_from(h.ell(1.min(h.max_level()))?).unwrap_or(usize::MAX);
    let upto = ell1.min(n_max);
    let mut failures = Vec::new();
    for n in 1..=upto {
        let r = verify_reconstruction(h, n, cap)?;
        if !r.holds {
            failures.push(json!({ "n": n, "counterexample": r.counterexample }));
        }
    }
    Ok((failures.is_empty(), json!({ "n_max": upto, "failures": failures })))
}

fn cross_overlaps(h: &Hierarchy, cap: usize) -> Outcome {
    let mut bad = Vec::new();
    for k in 0..=h.max_level().min(OVERLAP_LEVELS) {
        if !verify_no_cross_overlap(h, k, cap)?.holds {
            bad.push(k);
        }
    }
    Ok((bad.is_empty(), json!({ "failing_levels": bad })))
}

fn self_overlaps(h: &Hierarchy, cap: usize) -> Outcome {
    let mut failing = Vec::new();
    for k in 1..=h.max_level().min(OVERLAP_LEVELS) {
        let r = classify_self_overlaps(h, k, cap)?;
        for c in r.classes.iter().filter(|c| c.failed()) {
            failing.push(json!({ "k": k, "class": c.class, "statement": c.statement }));
        }
    }
    Ok((failing.is_empty(), json!({ "failing": failing })))
}

fn grid_suite(schedule: &Schedule, top: u32, samples: u64, seed: u64, cap: usize, frequency: bool) -> Outcome {
    let mut plan = Vec::new();
    for kind in GeneratorKind::ALL {
        let count = if kind == GeneratorKind::Uniform { samples } else { STRUCTURED_PER_KIND };
        plan.extend((0..count).map(|i| (kind, i)));
    }
    let mut ok = true;
    let mut detail = Vec::new();
    for k in [2u32, 4].into_iter().filter(|&k| k <= top) {
        let h = Hierarchy::new(schedule, (k + 1).min(schedule.max_level()))?;
        let (side, rows) = match grid_rows(&h, k, 3, seed, cap, &plan, frequency) {
            Ok(v) => v,
            Err(crate::error::CliError::Core(e)) => return Err(e),
            Err(e) => return Err(Error::invalid(e.to_string())),
        };
        let s = summarize(k, if frequency { "frequency" } else { "admissibility" }, side, &rows);
        ok &= if frequency { s.frequency_failures == 0 } else { s.cover_failures == 0 };
        detail.push(serde_json::to_value(&s).expect("serializable"));
    }
    if detail.is_empty() {
        return Err(Error::capacity("levels for the 2D checks", 2, top));
    }
    Ok((ok, Value::Array(detail)))
}

fn core_err(e: crate::error::CliError) -> Error {
    match e {
        crate::error::CliError::Core(e) => e,
        other => Error::invalid(other.to_string()),
    }
}

fn duplications(h: &Hierarchy, cap: usize) -> Outcome {
    let rows = duplication_rows(h, 1.min(h.max_level()), cap).map_err(core_err)?;
    let ok = rows.iter().all(|r| r.holds);
    Ok((ok, serde_json::to_value(&rows).expect("serializable")))
}

fn density(h: &Hierarchy, seed: u64, cap: usize) -> Outcome {
    let k = 1.min(h.max_level());
    let rows = density_rows(h, k, 2, DENSITY_SAMPLES, seed, cap).map_err(core_err)?;
    let worst = rows.iter().map(|r| r.density.clone()).max();
    let ok = rows.iter().all(|r| r.holds);
    Ok((
        ok,
        json!({
            "k": k,
            "window": 2,
            "patterns": rows.len(),
            "largest_density": worst.map(|v| zerotemp::bigfmt::rational_string(&v)),
            "bound": rows.first().map(|r| zerotemp::bigfmt::rational_string(&r.bound)),
        }),
    ))
}

fn bound_forms(seed: u64, prec: usize) -> Outcome {
    let mut ok = true;
    for idx in 0..BOUND_SAMPLES {
        let inp = sample_admissible_inputs(seed, idx);
        let mu = BigRational::new((idx as i64).into(), ((BOUND_SAMPLES - 1) as i64).into());
        let stated = pressure_upper_bound_rhs(&inp, &mu, prec)?.total;
        let proof = pressure_upper_bound_proof_form(&inp, &(BigRational::one() - &mu), prec)?;
        ok &= agrees_to(&stated, &proof, prec.saturating_sub(5));
    }
    Ok((ok, json!({ "samples": BOUND_SAMPLES })))
}

fn round_trip(seed: u64, prec: usize) -> Outcome {
    let mut failures = Vec::new();
    for idx in 0..BOUND_SAMPLES {
        let row = chaotic_row(&sample_admissible_inputs(seed, idx), prec)?;
        if !row.round_trip_holds(prec.saturating_sub(10)) {
            failures.push(idx);
        }
    }
    Ok((failures.is_empty(), json!({ "samples": BOUND_SAMPLES, "failures": failures })))
}
