//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::str::FromStr;

use dashu_float::DBig;
use num_bigint::BigUint;
use num_rational::BigRational;
use zerotemp::language::{full_concatenations, level_for_length};
use zerotemp::thermo::BoundInputs;
use zerotemp::words::{Hierarchy, DEFAULT_MATERIALIZE_CAP as CAP};

pub fn code(w: &[u8]) -> usize {
    w.iter().fold(0, |acc, &s| acc * 3 + s as usize)
}

/// Base-3 codes of all length-n words missing from every window of the
/// level texts, in increasing (= lexicographic) order.
pub fn brute_force_forbidden(h: &Hierarchy, n: usize) -> Vec<usize> {
    let k = level_for_length(h, n).unwrap().k;
    let total = 3usize.pow(n as u32);
    let mut seen = vec![false; total];
    for t in full_concatenations(h, k, CAP).unwrap() {
        for w in t.text.windows(n) {
            seen[code(w)] = true;
        }
    }
    (0..total).filter(|&c| !seen[c]).collect()
}

const ORACLE_DIGITS: usize = 40;

fn d(v: &BigUint) -> DBig {
    DBig::from_str(&v.to_string()).unwrap().with_precision(ORACLE_DIGITS).value()
}

fn r(v: &BigRational) -> DBig {
    let n = DBig::from_str(&v.numer().to_string()).unwrap().with_precision(ORACLE_DIGITS).value();
    n / DBig::from_str(&v.denom().to_string()).unwrap().with_precision(ORACLE_DIGITS).value()
}

fn small(v: u64) -> DBig {
    d(&BigUint::from(v))
}

/// U_k(μ) written as one expression at 40 digits.
pub fn monolithic(x: &BoundInputs, mu: &BigRational) -> DBig {
    let (fs, fd) = if x.k.is_multiple_of(2) { (&x.f_prev_a, &x.f_prev_b) } else { (&x.f_prev_b, &x.f_prev_a) };
    let one = small(1);
    let eps = d(&x.r_prime) * d(&x.r_prime) / d(&x.beta) * small(x.cards.a).ln();
    let h = -(&eps * eps.ln()) - (&one - &eps) * (&one - &eps).ln();
    let n1 = d(&x.n_prev);
    (small(2) / d(&x.n_prime) * r(fs) + (&one / (&one - &one / n1)) * (r(mu) + &eps) * r(fd)) * small(2).ln()
        + small(x.cards.a_tilde).ln() / d(&x.ell_prime)
        + d(&x.c_prime).ln() / (d(&x.ell_prime) * d(&x.ell_prime))
        + &eps * small(2 * x.cards.a_hat).ln()
        + (small(8) / d(&x.r_prime) + &eps) * small(x.cards.a_tilde).ln()
        + h
}

pub fn agree(a: &DBig, b: &DBig, digits: i32) -> bool {
    let rel = ((a - b) / b).to_f64().value().abs();
    rel < 10f64.powi(-digits)
}
