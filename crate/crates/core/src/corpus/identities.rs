//! Exhaustive finite-range checks of the linear identities satisfied by
//! `g_{k,ell}` and `h`. Each check returns the number of instances it
//! evaluated, or the first failing instance.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{delannoy, eval_h, padic_valuation, GSeq, HSeq, SequenceOracle};
use crate::ratlin::pow;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
pub struct IdentityFailure {
    pub identity: String,
    pub n: u64,
    pub residue: Option<u64>,
    #[serde(with = "crate::ratlin::decimal")]
    pub lhs: BigInt,
    #[serde(with = "crate::ratlin::decimal")]
    pub rhs: BigInt,
}

impl fmt::Display for IdentityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at n = {}", self.identity, self.n)?;
        if let Some(b) = self.residue {
            write!(f, ", residue {b}")?;
        }
        write!(f, ": {} != {}", self.lhs, self.rhs)
    }
}

fn check(
    identity: &str,
    n: u64,
    residue: Option<u64>,
    lhs: BigInt,
    rhs: BigInt,
) -> Result<(), IdentityFailure> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(IdentityFailure {
            identity: identity.to_string(),
            n,
            residue,
            lhs,
            rhs,
        })
    }
}

/// `g(k^t n + b) = (1 - ell^j) g(k^t n) + ell^j g(k^t n + 1)` for
/// `k^j <= b < k^{j+1}`, `j < t`, `n <= n_max`.
pub fn g_within_level(k: u32, ell: u32, t: u32, n_max: u64) -> Result<u64, IdentityFailure> {
    let g = GSeq::new(k, ell).expect("k, ell >= 2");
    let kt = (k as u64).pow(t);
    let table = g.table((kt * (n_max + 1)) as usize);
    let mut count = 0;
    for n in 0..=n_max {
        let base = (kt * n) as usize;
        for j in 0..t {
            let lj = pow(ell as u64, j);
            for b in (k as u64).pow(j)..(k as u64).pow(j + 1) {
                let rhs = (1 - &lj) * &table[base] + &lj * &table[base + 1];
                check(
                    "g within-level",
                    n,
                    Some(b),
                    table[base + b as usize].clone(),
                    rhs,
                )?;
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Which residues to test in [`g_two_level`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidueSampling {
    Exhaustive,
    /// `a ∈ {1, k-1}` and `b ∈ {k, k²-1}`.
    Boundary,
}

/// The three relations expressing `g(k²n + b)` through `g(n)`, `g(kn)`,
/// `g(kn+1)`.
pub fn g_two_level(
    k: u32,
    ell: u32,
    n_max: u64,
    sampling: ResidueSampling,
) -> Result<u64, IdentityFailure> {
    let g = GSeq::new(k, ell).expect("k, ell >= 2");
    let k = k as u64;
    let table = g.table((k * k * (n_max + 1)) as usize);
    let at = |i: u64| &table[i as usize];
    let ell = BigInt::from(ell);
    let (a_vals, b_vals): (Vec<u64>, Vec<u64>) = match sampling {
        ResidueSampling::Exhaustive => ((1..k).collect(), (k..k * k).collect()),
        ResidueSampling::Boundary => (vec![1, k - 1], vec![k, k * k - 1]),
    };
    let mut count = 0;
    for n in 0..=n_max {
        let (gn, gkn, gkn1) = (at(n), at(k * n), at(k * n + 1));
        check(
            "g(k^2 n) = -l g(n) + (l+1) g(kn)",
            n,
            Some(0),
            at(k * k * n).clone(),
            -&ell * gn + (&ell + 1) * gkn,
        )?;
        count += 1;
        for &a in &a_vals {
            check(
                "g(k^2 n + a) = -l g(n) + l g(kn) + g(kn+1)",
                n,
                Some(a),
                at(k * k * n + a).clone(),
                -&ell * gn + &ell * gkn + gkn1,
            )?;
            count += 1;
        }
        for &b in &b_vals {
            check(
                "g(k^2 n + b) = -l g(n) + g(kn) + l g(kn+1)",
                n,
                Some(b),
                at(k * k * n + b).clone(),
                -&ell * gn + gkn + &ell * gkn1,
            )?;
            count += 1;
        }
    }
    Ok(count)
}

/// The displayed `h` relations for `n <= n_max`:
/// `h(3n+2) = h(n) + (n mod 2)`, `h(9n) = h(9n+6) = -h(n) + 2h(3n)`,
/// `h(9n+1) = h(9n+4) = h(9n+7) = -h(n) + h(3n) + h(3n+1)`,
/// `h(9n+3) = -h(n) + 2h(3n+1)`.
pub fn h_relations(n_max: u64) -> Result<u64, IdentityFailure> {
    let table = HSeq.table((9 * n_max + 9) as usize);
    let h = |i: u64| -> BigInt { table[i as usize].clone() };
    let mut count = 0;
    for n in 0..=n_max {
        let parity = BigInt::from(n % 2);
        check(
            "h(3n+2) = h(n) + (n mod 2)",
            n,
            Some(2),
            h(3 * n + 2),
            h(n) + parity,
        )?;
        let nine_zero = -h(n) + h(3 * n) * 2u32;
        check(
            "h(9n) = -h(n) + 2h(3n)",
            n,
            Some(0),
            h(9 * n),
            nine_zero.clone(),
        )?;
        check(
            "h(9n+6) = -h(n) + 2h(3n)",
            n,
            Some(6),
            h(9 * n + 6),
            nine_zero,
        )?;
        let ones = -h(n) + h(3 * n) + h(3 * n + 1);
        for b in [1, 4, 7] {
            check(
                "h(9n+b) = -h(n) + h(3n) + h(3n+1), b in {1,4,7}",
                n,
                Some(b),
                h(9 * n + b),
                ones.clone(),
            )?;
        }
        check(
            "h(9n+3) = -h(n) + 2h(3n+1)",
            n,
            Some(3),
            h(9 * n + 3),
            -h(n) + h(3 * n + 1) * 2u32,
        )?;
        count += 8;
    }
    Ok(count)
}

/// `h(3^t n + b)` is `h(n) + h(b)` for even `n` and `h(n) + t - h(b)` for odd
/// `n`, for `t <= t_max`, `0 <= b < 3^t`, `n <= n_max`.
pub fn h_two_branch(t_max: u32, n_max: u64) -> Result<u64, IdentityFailure> {
    let mut count = 0;
    for t in 0..=t_max {
        let m = 3u64.pow(t);
        for b in 0..m {
            for n in 0..=n_max {
                let (hn, hb) = (eval_h(n) as i64, eval_h(b) as i64);
                let expected = if n % 2 == 0 {
                    hn + hb
                } else {
                    hn + t as i64 - hb
                };
                check(
                    "h(3^t n + b) two-branch form",
                    n,
                    Some(b),
                    BigInt::from(eval_h(m * n + b)),
                    BigInt::from(expected),
                )?;
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `h(3^t n + b) = (1 - h(b)) h(3^t n) + h(b) h(3^t n + 1)`.
pub fn h_fundamental(t_max: u32, n_max: u64) -> Result<u64, IdentityFailure> {
    let mut count = 0;
    for t in 0..=t_max {
        let m = 3u64.pow(t);
        for b in 0..m {
            let hb = BigInt::from(eval_h(b));
            for n in 0..=n_max {
                let rhs = (1 - &hb) * eval_h(m * n) + &hb * eval_h(m * n + 1);
                check(
                    "h(3^t n + b) = (1-h(b)) h(3^t n) + h(b) h(3^t n + 1)",
                    n,
                    Some(b),
                    BigInt::from(eval_h(m * n + b)),
                    rhs,
                )?;
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `h(n) = ν₃(d(n))` for `1 <= n <= n_max`.
pub fn h_is_delannoy_valuation(n_max: u64) -> Result<u64, IdentityFailure> {
    for n in 1..=n_max {
        let v = padic_valuation(3, &delannoy(n)).expect("Delannoy numbers are positive");
        check(
            "h(n) = v3(d(n))",
            n,
            None,
            BigInt::from(eval_h(n)),
            BigInt::from(v),
        )?;
    }
    Ok(n_max)
}
