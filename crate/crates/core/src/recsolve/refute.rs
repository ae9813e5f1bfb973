//! Finite refutations for the `g_{k,ell}` family and for `h`.
//!
//! Each refutation samples the would-be recursion at a handful of `n`,
//! solves the resulting exact system, and records both the solver's
//! inconsistency witness and the closed-form contradiction.

use num_bigint::BigInt;

use super::certificate::{Certificate, Claim, Derivation, NoSolution, Outcome};
use super::fit::{render_equation, Subseq};
use super::RecError;
use crate::corpus::{floor_log, GSeq, HSeq, SequenceOracle};
use crate::ratlin::{
    fmt_rational, rat, solve_exact, LinearSystem, Rational, RationalPair, Row, SolveResult,
};

fn check_family(k: u32, ell: u32, r: u32, t: u32) -> Result<GSeq, RecError> {
    if r >= t {
        return Err(RecError::param(format!("need r < t, got r={r}, t={t}")));
    }
    if t > 30 {
        return Err(RecError::param(format!("t = {t} is too large")));
    }
    GSeq::new(k, ell).map_err(|e| RecError::param(e.to_string()))
}

/// Like [`super::fit_combination`], but evaluating pointwise so that
/// sample indices far out do not need a dense table.
fn sampled_system(
    f: impl Fn(u64) -> BigInt,
    target: Subseq,
    gens: &[Subseq],
    ns: &[u64],
) -> (LinearSystem, SolveResult) {
    let mut sys = LinearSystem::new(gens.len());
    for &n in ns {
        let row = Row::new(
            gens.iter().map(|g| rat(f(g.index(n)))).collect(),
            rat(f(target.index(n))),
        );
        sys.push(row).expect("row width matches generators");
    }
    let solved = solve_exact(&sys);
    (sys, solved)
}

/// Refutes `g(k^t n) = c0 g(k^r n) + c1 g(k^r n + 1)` for all `n >= 0`.
///
/// At `n = 1` and `n = k` both generators take the same value, so the two
/// equations pin the single aggregate `c0 + c1` to the two different ratios
/// `(ell^t + 1)/(ell^r + 1)` and `(ell^{t+1} + 1)/(ell^{r+1} + 1)`. When
/// `r = 0` and `k = 2` the index `k^r + 1 = 2` already lies on the next
/// level, so the samples shift to `n = k` and `n = k²`.
pub fn refute_g_strong(k: u32, ell: u32, r: u32, t: u32) -> Result<Certificate, RecError> {
    let g = check_family(k, ell, r, t)?;
    let kk = k as u64;
    let target = Subseq::new(kk.pow(t), 0);
    let gens = [Subseq::new(kk.pow(r), 0), Subseq::new(kk.pow(r), 1)];

    let collapses = |n: u64| g.eval(gens[0].index(n)) == g.eval(gens[1].index(n));
    let (samples, shifted) = if collapses(1) && collapses(kk) {
        ([1, kk], false)
    } else {
        ([kk, kk * kk], true)
    };
    debug_assert!(samples.iter().all(|&n| collapses(n)));

    // the aggregate system in the single unknown c0 + c1
    let (sys, solved) = sampled_system(|i| g.eval(i), target, &gens[..1], &samples);
    let SolveResult::Inconsistent { witness } = solved else {
        return Err(RecError::Refutation(format!(
            "aggregate system for k={k}, ell={ell}, r={r}, t={t} is consistent"
        )));
    };
    let ratios = [0, 1].map(|i| {
        let row = &sys.rows()[i];
        RationalPair(&row.rhs / &row.coeffs[0])
    });
    if ratios[0] == ratios[1] {
        return Err(RecError::Refutation("ratios coincide".into()));
    }

    let equations = witness
        .iter()
        .map(|&i| {
            let row = &sys.rows()[i];
            format!(
                "n={}: g({}) = {} = {} (c0 + c1)",
                samples[i],
                target.index(samples[i]),
                fmt_rational(&row.rhs),
                fmt_rational(&row.coeffs[0])
            )
        })
        .collect();
    let mut cert = Certificate::new(
        Claim::RefuteGStrong { k, ell, r, t },
        Outcome::NoSolution(NoSolution {
            residue: Some(0),
            samples: witness.iter().map(|&i| samples[i]).collect(),
            equations,
            derivation: Some(Derivation::RatioMismatch { samples, ratios }),
        }),
    );
    if shifted {
        cert = cert.note(format!(
            "k^r + 1 = {} is a power of k, so the samples n = 1, k were replaced by n = k, k^2",
            kk.pow(r) + 1
        ));
    }
    Ok(cert)
}

/// Smallest `s >= 1` with `k^{r+s-1} >= max(-L, U)`.
pub fn refutation_level(k: u32, r: u32, lower: i64, upper: i64) -> u32 {
    let need = (-lower).max(upper).max(1) as u128;
    let mut s = 1;
    while (k as u128).pow(r + s - 1) < need {
        s += 1;
    }
    s
}

/// Refutes `g(k^t n) = Σ_{L<=a<U} c_a g(k^r n + a)` for all `n >= 0`.
///
/// At `n = k^{s-1}(k+1)` and `n = k^s(k+1)` every generator sits on the
/// same level as `k^r n`, so only the sum `c = Σ c_a` matters, and the two
/// equations force first `c = 1` and then `ell^{t+s} = ell^{r+s}`.
pub fn refute_g_general(
    k: u32,
    ell: u32,
    r: u32,
    t: u32,
    lower: i64,
    upper: i64,
) -> Result<Certificate, RecError> {
    let g = check_family(k, ell, r, t)?;
    if lower >= upper {
        return Err(RecError::param(format!(
            "need L < U, got L={lower}, U={upper}"
        )));
    }
    let kk = k as u64;
    let s = refutation_level(k, r, lower, upper);
    let fits = kk
        .checked_pow(t.max(r) + s)
        .and_then(|x| x.checked_mul(kk + 1))
        .and_then(|x| x.checked_add(upper.max(0) as u64));
    if fits.is_none() {
        return Err(RecError::param("sample indices overflow u64"));
    }
    let samples = [kk.pow(s - 1) * (kk + 1), kk.pow(s) * (kk + 1)];
    let target = Subseq::new(kk.pow(t), 0);
    let gens: Vec<Subseq> = (lower..upper).map(|a| Subseq::new(kk.pow(r), a)).collect();

    // every generator index lies on level r + s (resp. r + s + 1)
    let mut log_levels = [0; 2];
    for (i, &n) in samples.iter().enumerate() {
        let level = r + s + i as u32;
        if let Some(a) = gens.iter().find(|g| floor_log(kk, g.index(n)) != level) {
            return Err(RecError::Refutation(format!(
                "index {} at n={n} is off level {level}",
                a.index(n)
            )));
        }
        log_levels[i] = level;
    }

    let (sys, solved) = sampled_system(|i| g.eval(i), target, &gens, &samples);
    let SolveResult::Inconsistent { witness } = solved else {
        return Err(RecError::Refutation(format!(
            "sampled system for k={k}, ell={ell}, r={r}, t={t}, L={lower}, U={upper} is consistent"
        )));
    };

    // A_i = g(k^t n_i), B_i = common value of the generators at n_i
    let a1 = sys.rows()[0].rhs.clone();
    let a2 = sys.rows()[1].rhs.clone();
    let b1 = sys.rows()[0].coeffs[0].clone();
    let b2 = sys.rows()[1].coeffs[0].clone();
    let l = rat(ell);
    // ell * (first) - (second): (ell - 1) = (ell - 1) c
    let c: Rational = (&l * &a1 - &a2) / (&l * &b1 - &b2);
    // (second) - (first) with c inserted
    let lhs = &a2 - &a1;
    let rhs = (&b2 - &b1) * &c;
    if lhs == rhs {
        return Err(RecError::Refutation("exponent equation holds".into()));
    }

    let equations = vec![
        format!(
            "n={}: {} = {} c   (ell^(t+s) + 1 = (ell^(r+s) + 1) c, s={s})",
            samples[0],
            fmt_rational(&a1),
            fmt_rational(&b1)
        ),
        format!(
            "n={}: {} = {} c   (ell^(t+s+1) + 1 = (ell^(r+s+1) + 1) c)",
            samples[1],
            fmt_rational(&a2),
            fmt_rational(&b2)
        ),
    ];
    let cert = Certificate::new(
        Claim::RefuteGGeneral {
            k,
            ell,
            r,
            t,
            lower,
            upper,
        },
        Outcome::NoSolution(NoSolution {
            residue: Some(0),
            samples: witness.iter().map(|&i| samples[i]).collect(),
            equations,
            derivation: Some(Derivation::AggregateExponent {
                s,
                samples,
                log_levels,
                c: RationalPair(c),
                lhs: fmt_rational(&lhs),
                rhs: fmt_rational(&rhs),
            }),
        }),
    )
    .note(format!(
        "solver witness rows: {}",
        witness
            .iter()
            .map(|&i| render_equation(&sys.rows()[i], lower))
            .collect::<Vec<_>>()
            .join("; ")
    ));
    Ok(cert)
}

/// Refutes `h(3^t n) = c0 h(3^r n) + c1 h(3^r n + 1)` from the samples
/// `n ∈ {0, 1, 3}`: the first gives `c1 = 0`, the other two give different
/// values of `c0`.
pub fn refute_h_strong(r: u32, t: u32) -> Result<Certificate, RecError> {
    if r >= t {
        return Err(RecError::param(format!("need r < t, got r={r}, t={t}")));
    }
    if t > 35 {
        return Err(RecError::param(format!("t = {t} is too large")));
    }
    let samples = [0u64, 1, 3];
    let target = Subseq::new(3u64.pow(t), 0);
    let gens = [Subseq::new(3u64.pow(r), 0), Subseq::new(3u64.pow(r), 1)];
    let (sys, solved) = sampled_system(|i| HSeq.eval(i), target, &gens, &samples);
    let SolveResult::Inconsistent { witness } = solved else {
        return Err(RecError::Refutation(format!(
            "h system for r={r}, t={t} is consistent"
        )));
    };
    let rows = sys.rows();
    // row 0 reads 0 = c0 h(0) + c1 h(1) = c1
    let c0_candidates = [1, 2].map(|i| RationalPair(&rows[i].rhs / &rows[i].coeffs[0]));
    let equations = rows
        .iter()
        .zip(samples)
        .map(|(row, n)| {
            format!(
                "n={n}: {} = {} c0 + {} c1",
                fmt_rational(&row.rhs),
                fmt_rational(&row.coeffs[0]),
                fmt_rational(&row.coeffs[1])
            )
        })
        .collect();
    Ok(Certificate::new(
        Claim::RefuteHStrong { r, t },
        Outcome::NoSolution(NoSolution {
            residue: Some(0),
            samples: witness.iter().map(|&i| samples[i]).collect(),
            equations,
            derivation: Some(Derivation::TwoUnknowns {
                samples: samples.to_vec(),
                c0_candidates,
            }),
        }),
    ))
}
