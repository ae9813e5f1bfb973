//! Independent reference implementations used by the integration suites.
//! Nothing here calls into the library's own evaluators.

#![allow(dead_code)]

pub mod props;

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use seqrec::corpus::SequenceOracle;

/// `g_{k,ell}(n)`: 1 at zero, else `1 + ell^(number of base-k digits - 1)`.
pub fn g_ref(k: u64, ell: u64, n: u64) -> i128 {
    if n == 0 {
        return 1;
    }
    let mut digits = 0u32;
    let mut m = n;
    while m > 0 {
        m /= k;
        digits += 1;
    }
    1 + (ell as i128).pow(digits - 1)
}

pub fn tm_ref(n: u64) -> u8 {
    (n.count_ones() % 2) as u8
}

/// Closed form for the factor complexity of Thue-Morse: for `n >= 3`
/// write `n - 1 = 2^m + r` with `0 < r <= 2^m`.
pub fn tmfc_ref(n: u64) -> i128 {
    match n {
        0 => 1,
        1 => 2,
        2 => 4,
        _ => {
            let m = 63 - (n - 2).leading_zeros();
            let p = 1i128 << m;
            let r = (n - 1) as i128 - p;
            if 2 * r <= p {
                3 * p + 4 * r
            } else {
                4 * p + 2 * r
            }
        }
    }
}

/// Distinct windows of each length `0..=max_len` in a prefix of length
/// `prefix`, by hashing.
pub fn tmfc_brute(max_len: usize, prefix: usize) -> Vec<u64> {
    let word: Vec<u8> = (0..prefix as u64).map(tm_ref).collect();
    (0..=max_len)
        .map(|len| match len {
            0 => 1,
            _ => word.windows(len).collect::<HashSet<_>>().len() as u64,
        })
        .collect()
}

/// `h` straight from its three-case definition.
pub fn h_ref(n: u64) -> i64 {
    if n == 0 {
        0
    } else if n % 3 == 1 {
        h_ref(n / 9) + 1
    } else {
        h_ref(n / 3) + ((n / 3) % 2) as i64
    }
}

/// Central Delannoy numbers `d(0..=n_max)` by the three-term recurrence
/// `n d(n) = 3(2n-1) d(n-1) - (n-1) d(n-2)`.
pub fn delannoy_ref(n_max: usize) -> Vec<BigInt> {
    let mut d = vec![BigInt::one(), BigInt::from(3)];
    for n in 2..=n_max {
        let n_big = BigInt::from(n);
        let next =
            (BigInt::from(3 * (2 * n - 1)) * &d[n - 1] - BigInt::from(n - 1) * &d[n - 2]) / &n_big;
        d.push(next);
    }
    d.truncate(n_max + 1);
    d
}

pub fn nu3(x: &BigInt) -> u32 {
    let three = BigInt::from(3);
    let mut x = x.clone();
    let mut v = 0;
    while !x.is_zero() && (&x % &three).is_zero() {
        x /= &three;
        v += 1;
    }
    v
}

/// Parity of the 2-adic valuation of `n + 1`.
pub fn period_doubling_ref(n: u64) -> i64 {
    ((n + 1).trailing_zeros() % 2) as i64
}

/// `(-1)^(number of possibly overlapping 11 blocks in binary)`.
pub fn rudin_shapiro_ref(n: u64) -> i64 {
    if (n & (n >> 1)).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn digit_sum_mod3_ref(mut n: u64) -> i64 {
    let mut s = 0;
    while n > 0 {
        s += n % 3;
        n /= 3;
    }
    (s % 3) as i64
}

/// Rank over the rationals by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            for j in col + 1..cols {
                let v = (&m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j]) / &prev;
                m[i][j] = v;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].abs();
        if prev.is_zero() {
            prev = BigInt::one();
        }
        rank += 1;
    }
    rank
}

/// `A x = b` has a rational solution.
pub fn consistent(a: &[Vec<BigInt>], b: &[BigInt]) -> bool {
    let aug: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    bareiss_rank(a) == bareiss_rank(&aug)
}

pub fn big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// A sequence given by a closure.
pub struct FnOracle<F> {
    pub name: String,
    pub f: F,
}

impl<F: Fn(u64) -> i128 + Send + Sync> SequenceOracle for FnOracle<F> {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn eval(&self, n: u64) -> BigInt {
        BigInt::from((self.f)(n))
    }
}

pub fn oracle<F: Fn(u64) -> i128 + Send + Sync>(name: &str, f: F) -> FnOracle<F> {
    FnOracle {
        name: name.to_string(),
        f,
    }
}

/// Deterministic pseudo-random values in `-span..=span`.
pub fn hashed(seed: u64, n: u64, span: i128) -> i128 {
    let mut z = seed ^ n.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z % (2 * span as u64 + 1)) as i128 - span
}

#[test]
fn tmfc_closed_form_matches_brute_force() {
    let brute = tmfc_brute(80, 1 << 13);
    for (n, &c) in brute.iter().enumerate() {
        assert_eq!(tmfc_ref(n as u64), c as i128, "n = {n}");
    }
}

#[test]
fn bareiss_rank_small_cases() {
    assert_eq!(bareiss_rank(&big(&[vec![1, 2], vec![2, 4]])), 1);
    assert_eq!(bareiss_rank(&big(&[vec![0, 1], vec![1, 0], vec![1, 1]])), 2);
    assert_eq!(bareiss_rank(&big(&[vec![0, 0]])), 0);
    assert!(!consistent(
        &big(&[vec![1], vec![1]]),
        &[1.into(), 2.into()]
    ));
}

#[test]
fn delannoy_start() {
    let d = delannoy_ref(5);
    let d: Vec<i64> = d.iter().map(|x| x.try_into().unwrap()).collect();
    assert_eq!(d, [1, 3, 13, 63, 321, 1683]);
}
