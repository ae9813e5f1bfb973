use num_bigint::BigInt;

use super::{CorpusError, SequenceOracle};

/// Sum of the base-`k` digits of `n`.
pub fn eval_s(k: u32, n: u64) -> BigInt {
    let k = k as u64;
    let mut m = n;
    let mut sum = 0u64;
    while m > 0 {
        sum += m % k;
        m /= k;
    }
    BigInt::from(sum)
}

/// Thue-Morse: parity of the number of ones in binary.
pub fn tm(n: u64) -> u8 {
    (n.count_ones() & 1) as u8
}

#[derive(Clone, Copy, Debug)]
pub struct DigitSum {
    k: u32,
}

impl DigitSum {
    pub fn new(k: u32) -> Result<Self, CorpusError> {
        if k < 2 {
            return Err(CorpusError::Parameter(format!("s needs k >= 2, got {k}")));
        }
        Ok(DigitSum { k })
    }
}

impl SequenceOracle for DigitSum {
    fn name(&self) -> String {
        format!("s(k={})", self.k)
    }
    fn eval(&self, n: u64) -> BigInt {
        eval_s(self.k, n)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ThueMorse;

impl SequenceOracle for ThueMorse {
    fn name(&self) -> String {
        "tm".into()
    }
    fn eval(&self, n: u64) -> BigInt {
        BigInt::from(tm(n))
    }
}

/// The sequence `n`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Identity;

impl SequenceOracle for Identity {
    fn name(&self) -> String {
        "id".into()
    }
    fn eval(&self, n: u64) -> BigInt {
        BigInt::from(n)
    }
}
