use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::certificate::{Certificate, Claim, Exhaustion, Outcome};
use super::fit::{fit_values, FitOutcome};
use super::scheme::{RecursionScheme, SchemeShape};
use super::verify::first_failure;
use super::RecError;
use crate::corpus::SequenceOracle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// Only `n0 = 0`, `L >= 0`, `U <= k^t`.
    Strong,
    /// Any `L < U` with `|L|, U - L <= max_band`, and the smallest
    /// admissible `n0` plus `extra_n0` more.
    General,
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchMode::Strong => "strong",
            SearchMode::General => "general",
        })
    }
}

impl FromStr for SearchMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "strong" => Ok(SearchMode::Strong),
            "general" => Ok(SearchMode::General),
            _ => Err(format!("unknown search mode {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub k: u32,
    pub max_t: u32,
    pub max_band: u32,
    pub mode: SearchMode,
    /// Number of consecutive `n >= n0` sampled when fitting.
    pub train_len: u64,
    /// Candidates that fit are verified on `0..=verify_max`.
    pub verify_max: u64,
    pub extra_n0: u64,
}

impl SearchBounds {
    pub fn new(k: u32, max_t: u32, max_band: u32, mode: SearchMode) -> Self {
        SearchBounds {
            k,
            max_t,
            max_band,
            mode,
            train_len: 64,
            verify_max: 10_000,
            extra_n0: 1,
        }
    }

    /// Every candidate shape, cheapest first: increasing `t`, then
    /// increasing `U - L`, then decreasing `L`, then increasing `r`, then
    /// increasing `n0`.
    pub fn candidates(&self) -> Vec<SchemeShape> {
        let mut out = Vec::new();
        let band = self.max_band as i64;
        for t in 1..=self.max_t {
            let modulus = (self.k as i64).pow(t);
            for width in 1..=band {
                let (hi_l, lo_l) = match self.mode {
                    SearchMode::Strong => (modulus - width, 0),
                    SearchMode::General => (band, -band),
                };
                for lower in (lo_l..=hi_l).rev() {
                    for r in 0..t {
                        let gm = (self.k as i64).pow(r);
                        let min_n0 = if lower >= 0 {
                            0
                        } else {
                            (-lower + gm - 1) / gm
                        } as u64;
                        let n0s = match self.mode {
                            SearchMode::Strong => 0..=0,
                            SearchMode::General => min_n0..=min_n0 + self.extra_n0,
                        };
                        for n0 in n0s {
                            if let Ok(shape) =
                                SchemeShape::new(self.k, r, t, lower, lower + width, n0)
                            {
                                out.push(shape);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub certificate: Certificate,
    pub scheme: Option<RecursionScheme>,
}

/// Fits every candidate shape in cost order and returns the first scheme
/// that also verifies, or `Exhausted`.
pub fn search<O: SequenceOracle + ?Sized>(
    oracle: &O,
    bounds: SearchBounds,
) -> Result<SearchResult, RecError> {
    if bounds.k < 2 || bounds.max_t < 2 || bounds.max_band < 1 {
        return Err(RecError::param(format!(
            "search needs k >= 2, max_t >= 2 and max_band >= 1, got {bounds:?}"
        )));
    }
    let claim = Claim::Search {
        oracle: oracle.name(),
        k: bounds.k,
        max_t: bounds.max_t,
        max_band: bounds.max_band,
        mode: bounds.mode.to_string(),
    };
    let candidates = bounds.candidates();
    let train_max = candidates
        .iter()
        .map(|c| c.n0 + bounds.train_len.max(c.width() as u64 + 2))
        .max()
        .unwrap_or(0);
    let len = candidates
        .iter()
        .map(|c| c.table_len(train_max.max(bounds.verify_max)))
        .max()
        .unwrap_or(0);
    let values = oracle.table(len);

    let mut tried = 0;
    for shape in candidates {
        tried += 1;
        let count = bounds.train_len.max(shape.width() as u64 + 2);
        let ns: Vec<u64> = (shape.n0..shape.n0 + count).collect();
        let FitOutcome::Fitted { scheme, pinned } = fit_values(&values, shape, &ns) else {
            continue;
        };
        let start = shape.n0;
        if first_failure(&values, &scheme, start, bounds.verify_max, 1).is_some() {
            continue;
        }
        let mut cert = Certificate::new(claim, Outcome::Verified)
            .with_range(0, bounds.verify_max)
            .note(format!("found after {tried} candidates"));
        if !pinned.is_empty() {
            cert = cert.note(format!("free coefficients pinned to 0: {pinned:?}"));
        }
        return Ok(SearchResult {
            certificate: cert,
            scheme: Some(scheme),
        });
    }
    let cert = Certificate::new(
        claim,
        Outcome::Exhausted(Exhaustion {
            candidates: tried,
            max_t: bounds.max_t,
            max_band: bounds.max_band,
            train: [0, train_max],
            verify: [0, bounds.verify_max],
        }),
    );
    Ok(SearchResult {
        certificate: cert,
        scheme: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{DigitSum, Identity, ThueMorse};

    #[test]
    fn candidate_order() {
        let c = SearchBounds::new(2, 2, 2, SearchMode::Strong).candidates();
        let first: Vec<(u32, u32, i64, i64)> = c
            .iter()
            .take(4)
            .map(|s| (s.t, s.r, s.lower, s.upper))
            .collect();
        assert_eq!(
            first,
            [(1, 0, 1, 2), (1, 0, 0, 1), (1, 0, 0, 2), (2, 0, 3, 4)]
        );
        assert!(c.iter().all(|s| s.is_strong()));

        let g = SearchBounds::new(2, 2, 2, SearchMode::General).candidates();
        assert!(g.iter().any(|s| !s.is_strong()));
        assert!(g.iter().all(|s| s.validate().is_ok()));
    }

    #[test]
    fn strong_schemes_for_simple_sequences() {
        for oracle in [
            &Identity as &dyn SequenceOracle,
            &ThueMorse,
            &DigitSum::new(2).unwrap(),
        ] {
            let mut bounds = SearchBounds::new(2, 2, 4, SearchMode::Strong);
            bounds.verify_max = 2000;
            let res = search(oracle, bounds).unwrap();
            let scheme = res.scheme.unwrap_or_else(|| panic!("{}", oracle.name()));
            assert!(scheme.is_strong());
            assert!(res.certificate.is_verified());
        }
    }

    #[test]
    fn bad_bounds() {
        assert!(search(&Identity, SearchBounds::new(2, 1, 4, SearchMode::Strong)).is_err());
    }
}
