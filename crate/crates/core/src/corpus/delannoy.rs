use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{CorpusError, SequenceOracle};

/// The base-3 sequence `h`:
///
/// * `h(0) = 0`
/// * `h(n) = h(n/3) + ((n/3) mod 2)` for `n ≡ 0, 2 (mod 3)`
/// * `h(n) = h(n/9) + 1` for `n ≡ 1 (mod 3)`
pub fn eval_h(n: u64) -> u64 {
    let mut n = n;
    let mut acc = 0;
    while n > 0 {
        if n % 3 == 1 {
            n /= 9;
            acc += 1;
        } else {
            n /= 3;
            acc += n % 2;
        }
    }
    acc
}

#[derive(Clone, Copy, Debug, Default)]
pub struct HSeq;

impl SequenceOracle for HSeq {
    fn name(&self) -> String {
        "h".into()
    }

    fn eval(&self, n: u64) -> BigInt {
        BigInt::from(eval_h(n))
    }

    // bottom-up memo table
    fn table(&self, len: usize) -> Vec<BigInt> {
        let mut memo = vec![0u64; len];
        for n in 1..len {
            memo[n] = if n % 3 == 1 {
                memo[n / 9] + 1
            } else {
                memo[n / 3] + (n as u64 / 3) % 2
            };
        }
        memo.into_iter().map(BigInt::from).collect()
    }
}

/// Central Delannoy number `sum_j C(n,j) C(n+j,j)`.
pub fn delannoy(n: u64) -> BigInt {
    let mut sum = BigInt::zero();
    // C(n, j) and C(n + j, j), updated in place
    let mut c1 = BigInt::one();
    let mut c2 = BigInt::one();
    for j in 0..=n {
        sum += &c1 * &c2;
        c1 = c1 * (n - j) / (j + 1);
        c2 = c2 * (n + j + 1) / (j + 1);
    }
    sum
}

/// Largest `e` with `p^e | m`.
pub fn padic_valuation(p: u64, m: &BigInt) -> Result<u64, CorpusError> {
    if p < 2 {
        return Err(CorpusError::Parameter(format!(
            "valuation needs p >= 2, got {p}"
        )));
    }
    if m.is_zero() {
        return Err(CorpusError::Domain("valuation of 0 is undefined".into()));
    }
    let p = BigInt::from(p);
    let mut m = m.clone();
    let mut e = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Ok(e);
        }
        m = q;
        e += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h_recursive(n: u64) -> u64 {
        match n {
            0 => 0,
            _ if n % 3 == 1 => h_recursive(n / 9) + 1,
            _ => h_recursive(n / 3) + (n / 3) % 2,
        }
    }

    fn binomial(n: u64, k: u64) -> BigInt {
        (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn h_values() {
        assert_eq!(eval_h(0), 0);
        assert_eq!(eval_h(1), 1);
        assert_eq!((0..4).map(eval_h).collect::<Vec<_>>(), [0, 1, 0, 2]);
        let mut p = 1;
        for t in 0..=10 {
            assert_eq!(eval_h(p), t + 1);
            p *= 3;
        }
    }

    #[test]
    fn h_forms_agree() {
        let table = HSeq.table(5000);
        for n in 0..5000u64 {
            assert_eq!(eval_h(n), h_recursive(n));
            assert_eq!(table[n as usize], BigInt::from(eval_h(n)));
        }
    }

    #[test]
    fn delannoy_values() {
        assert_eq!(delannoy(0), BigInt::from(1));
        assert_eq!(delannoy(2), BigInt::from(13));
        assert_eq!(delannoy(3), BigInt::from(63));
        for n in 0..40 {
            let direct: BigInt = (0..=n).map(|j| binomial(n, j) * binomial(n + j, j)).sum();
            assert_eq!(delannoy(n), direct);
        }
    }

    #[test]
    fn valuation() {
        assert_eq!(padic_valuation(3, &BigInt::from(63)).unwrap(), 2);
        assert_eq!(padic_valuation(3, &delannoy(3)).unwrap(), eval_h(3));
        assert_eq!(padic_valuation(2, &BigInt::from(-48)).unwrap(), 4);
        assert_eq!(padic_valuation(5, &BigInt::from(7)).unwrap(), 0);
        assert!(matches!(
            padic_valuation(3, &BigInt::zero()),
            Err(CorpusError::Domain(_))
        ));
        assert!(padic_valuation(1, &BigInt::from(3)).is_err());
    }
}
