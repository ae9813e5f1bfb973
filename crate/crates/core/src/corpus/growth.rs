use num_bigint::{BigInt, Sign};
use num_traits::ToPrimitive;

use super::{CorpusError, SequenceOracle};

/// Natural log of a positive integer, accurate for values beyond `f64`.
pub fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit head");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Least-squares slope of `ln f(k^j)` against `j ln k` for `j = 2..=depth`.
///
/// This is the only floating-point computation in the crate. It estimates
/// `theta` for sequences growing like `n^theta`.
pub fn growth_exponent<O: SequenceOracle + ?Sized>(
    oracle: &O,
    k: u32,
    depth: u32,
) -> Result<f64, CorpusError> {
    if k < 2 {
        return Err(CorpusError::Parameter(format!("k must be >= 2, got {k}")));
    }
    if depth < 4 {
        return Err(CorpusError::Parameter(format!(
            "depth must be >= 4, got {depth}"
        )));
    }
    let ln_k = (k as f64).ln();
    let mut points = Vec::new();
    for j in 2..=depth {
        let n = (k as u64)
            .checked_pow(j)
            .ok_or_else(|| CorpusError::Parameter(format!("{k}^{j} overflows")))?;
        let v = oracle.eval(n);
        if v.sign() != Sign::Plus {
            return Err(CorpusError::Domain(format!(
                "{} is not positive at n = {n}",
                oracle.name()
            )));
        }
        points.push((j as f64 * ln_k, ln_bigint(&v)));
    }
    let m = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    Ok(sxy / sxx)
}
