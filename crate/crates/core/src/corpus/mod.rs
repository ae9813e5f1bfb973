//! Built-in sequences, all behind [`SequenceOracle`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::dfao::Dfao;

mod delannoy;
mod digits;
mod factor;
mod g;
mod growth;
pub mod identities;

pub use delannoy::{delannoy, eval_h, padic_valuation, HSeq};
pub use digits::{eval_s, tm, DigitSum, Identity, ThueMorse};
pub use factor::{factor_counts, tm_factor_complexity, TmFactorComplexity};
pub use g::{eval_g, floor_log, GSeq};
pub use growth::{growth_exponent, ln_bigint};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unknown sequence {0:?} (known: g, s, tm, tmfc, h, d, id)")]
    Unknown(String),
}

/// A deterministic integer sequence defined for all `n >= 0`.
pub trait SequenceOracle: Send + Sync {
    /// Short display name including parameters, e.g. `g(k=2,ell=3)`.
    fn name(&self) -> String;

    fn eval(&self, n: u64) -> BigInt;

    /// Values at `0..len`. Implementations with shared work override this.
    fn table(&self, len: usize) -> Vec<BigInt> {
        (0..len as u64).map(|n| self.eval(n)).collect()
    }
}

impl SequenceOracle for Dfao {
    fn name(&self) -> String {
        format!("dfao(k={},states={})", self.base(), self.num_states())
    }

    fn eval(&self, n: u64) -> BigInt {
        self.eval_u64(n)
    }
}

impl<T: SequenceOracle + ?Sized> SequenceOracle for Box<T> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn eval(&self, n: u64) -> BigInt {
        (**self).eval(n)
    }
    fn table(&self, len: usize) -> Vec<BigInt> {
        (**self).table(len)
    }
}

impl<T: SequenceOracle + ?Sized> SequenceOracle for &T {
    fn name(&self) -> String {
        (**self).name()
    }
    fn eval(&self, n: u64) -> BigInt {
        (**self).eval(n)
    }
    fn table(&self, len: usize) -> Vec<BigInt> {
        (**self).table(len)
    }
}

/// Name plus integer parameters, the way the command line addresses a
/// sequence (`--seq g --k 2 --ell 3`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, i64>,
}

impl OracleSpec {
    pub fn new(name: &str) -> Self {
        OracleSpec {
            name: name.to_string(),
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: i64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    fn param(&self, key: &str) -> Result<i64, CorpusError> {
        self.params
            .get(key)
            .copied()
            .ok_or_else(|| CorpusError::Parameter(format!("{} needs --{key}", self.name)))
    }

    fn base_param(&self, key: &str) -> Result<u32, CorpusError> {
        let v = self.param(key)?;
        u32::try_from(v)
            .ok()
            .filter(|&v| v >= 2)
            .ok_or_else(|| CorpusError::Parameter(format!("{key} must be >= 2, got {v}")))
    }

    /// Instantiates the named sequence.
    pub fn build(&self) -> Result<Box<dyn SequenceOracle>, CorpusError> {
        Ok(match self.name.as_str() {
            "g" => Box::new(GSeq::new(self.base_param("k")?, self.base_param("ell")?)?),
            "s" => Box::new(DigitSum::new(self.base_param("k")?)?),
            "tm" => Box::new(ThueMorse),
            "tmfc" => Box::new(TmFactorComplexity::default()),
            "h" => Box::new(HSeq),
            "d" => Box::new(Delannoy),
            "id" | "n" => Box::new(Identity),
            other => return Err(CorpusError::Unknown(other.to_string())),
        })
    }
}

impl fmt::Display for OracleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            write!(f, "({})", ps.join(","))?;
        }
        Ok(())
    }
}

/// Central Delannoy numbers as an oracle.
#[derive(Clone, Copy, Debug, Default)]
pub struct Delannoy;

impl SequenceOracle for Delannoy {
    fn name(&self) -> String {
        "d".into()
    }
    fn eval(&self, n: u64) -> BigInt {
        delannoy(n)
    }
}
