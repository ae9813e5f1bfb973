use num_bigint::BigInt;

use super::{CorpusError, SequenceOracle};
use crate::ratlin::pow;

/// Largest `s` with `k^s <= n`, by integer comparison. `n` must be positive.
pub fn floor_log(k: u64, n: u64) -> u32 {
    debug_assert!(k >= 2 && n > 0);
    let mut s = 0;
    let mut p = k;
    while p <= n {
        s += 1;
        match p.checked_mul(k) {
            Some(q) => p = q,
            None => break,
        }
    }
    s
}

/// `g_{k,ell}(n)`: 1 at zero, otherwise `1 + ell^floor(log_k n)`.
pub fn eval_g(k: u32, ell: u32, n: u64) -> Result<BigInt, CorpusError> {
    Ok(GSeq::new(k, ell)?.eval(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GSeq {
    k: u32,
    ell: u32,
}

impl GSeq {
    pub fn new(k: u32, ell: u32) -> Result<Self, CorpusError> {
        if k < 2 || ell < 2 {
            return Err(CorpusError::Parameter(format!(
                "g needs k, ell >= 2, got k={k}, ell={ell}"
            )));
        }
        Ok(GSeq { k, ell })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }
}

impl SequenceOracle for GSeq {
    fn name(&self) -> String {
        format!("g(k={},ell={})", self.k, self.ell)
    }

    fn eval(&self, n: u64) -> BigInt {
        if n == 0 {
            return BigInt::from(1);
        }
        pow(self.ell as u64, floor_log(self.k as u64, n)) + 1
    }

    fn table(&self, len: usize) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(len);
        let mut value = BigInt::from(2);
        let mut next_power = self.k as u64;
        for n in 0..len as u64 {
            if n == 0 {
                out.push(BigInt::from(1));
                continue;
            }
            if n == next_power {
                value = (value - 1u32) * self.ell + 1u32;
                next_power = next_power.saturating_mul(self.k as u64);
            }
            out.push(value.clone());
        }
        out
    }
}
