use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::certificate::{Certificate, Claim, Counterexample, Outcome};
use super::scheme::RecursionScheme;
use crate::corpus::SequenceOracle;
use crate::ratlin::{fmt_rational, rat, Rational};

/// Checks the scheme exactly for every `n` in `range` with `n >= n0` and
/// every residue. Reports the first failure in `(n, b)` order.
pub fn verify<O: SequenceOracle + ?Sized>(
    oracle: &O,
    scheme: &RecursionScheme,
    range: RangeInclusive<u64>,
) -> Certificate {
    verify_jobs(oracle, scheme, range, 1)
}

/// [`verify`] with the `n`-range split across `jobs` workers. The result
/// does not depend on `jobs`.
pub fn verify_jobs<O: SequenceOracle + ?Sized>(
    oracle: &O,
    scheme: &RecursionScheme,
    range: RangeInclusive<u64>,
    jobs: usize,
) -> Certificate {
    let (lo, hi) = range.into_inner();
    let s = scheme.shape();
    let claim = Claim::Scheme {
        oracle: oracle.name(),
        k: s.k,
        r: s.r,
        t: s.t,
        lower: s.lower,
        upper: s.upper,
        n0: s.n0,
    };
    let start = lo.max(s.n0);
    let mut cert = Certificate::new(claim, Outcome::Verified).with_range(lo, hi);
    if start > hi {
        cert.vacuous = true;
        return cert;
    }
    let values = oracle.table(s.table_len(hi));
    if let Some(cx) = first_failure(&values, scheme, start, hi, jobs) {
        cert.outcome = Outcome::Counterexample(cx);
    }
    cert
}

/// Integer form of one residue's relation: `den * f(target) = Σ num_a f(gen_a)`.
struct IntRelation {
    den: BigInt,
    terms: Vec<(i64, BigInt)>,
}

fn integer_relations(scheme: &RecursionScheme) -> Vec<IntRelation> {
    let lower = scheme.shape().lower;
    scheme
        .coeffs()
        .iter()
        .map(|row| {
            let den = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let terms = row
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (lower + i as i64, c.numer() * (&den / c.denom())))
                .collect();
            IntRelation { den, terms }
        })
        .collect()
}

/// First `(n, b)` in `start..=hi` where the relation fails.
pub fn first_failure(
    values: &[BigInt],
    scheme: &RecursionScheme,
    start: u64,
    hi: u64,
    jobs: usize,
) -> Option<Counterexample> {
    let rels = integer_relations(scheme);
    let check = |n: u64| -> Option<Counterexample> {
        let s = scheme.shape();
        for (b, rel) in rels.iter().enumerate() {
            let lhs = &values[s.target_index(n, b as u64) as usize];
            let rhs: BigInt = rel
                .terms
                .iter()
                .map(|(a, c)| c * &values[s.generator_index(n, *a) as usize])
                .sum();
            if lhs * &rel.den != rhs {
                let exact: Rational = scheme.coeffs()[b]
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        c * rat(values[s.generator_index(n, s.lower + i as i64) as usize].clone())
                    })
                    .sum();
                return Some(Counterexample::Relation {
                    n,
                    b: b as u64,
                    lhs: lhs.to_string(),
                    rhs: fmt_rational(&exact),
                });
            }
        }
        None
    };

    crate::par::find_first(start, hi, jobs, check)
}
