//! Machine-readable verification outcomes.

use serde::{Deserialize, Serialize};

use crate::ratlin::RationalPair;

/// What a certificate is about.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Claim {
    Scheme {
        oracle: String,
        k: u32,
        r: u32,
        t: u32,
        #[serde(rename = "L")]
        lower: i64,
        #[serde(rename = "U")]
        upper: i64,
        n0: u64,
    },
    Mapping {
        oracle: String,
        k: u32,
        r: u32,
        t: u32,
    },
    Search {
        oracle: String,
        k: u32,
        max_t: u32,
        max_band: u32,
        mode: String,
    },
    RefuteGStrong {
        k: u32,
        ell: u32,
        r: u32,
        t: u32,
    },
    RefuteGGeneral {
        k: u32,
        ell: u32,
        r: u32,
        t: u32,
        #[serde(rename = "L")]
        lower: i64,
        #[serde(rename = "U")]
        upper: i64,
    },
    RefuteHStrong {
        r: u32,
        t: u32,
    },
    Synchronized {
        machine: String,
        oracle: String,
        negatives_per_n: usize,
        seed: u64,
    },
    ReprPattern {
        k: u32,
    },
}

/// A reproducible failing instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Counterexample {
    /// `f(k^t n + b) = lhs` but the recursion predicts `rhs`.
    Relation {
        n: u64,
        b: u64,
        lhs: String,
        rhs: String,
    },
    /// The automaton's verdict on `(n, m)` disagrees with the oracle.
    Membership {
        n: u64,
        m: String,
        should_accept: bool,
    },
    /// The base-`k` digits of the value do not have the expected shape.
    Pattern {
        n: u64,
        value: String,
        digits: String,
    },
}

/// The exact reasoning behind a refutation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Derivation {
    /// Both samples force the same aggregate `c0 + c1`, as the ratios
    /// `g(k^t n) / g(k^r n)`; the two ratios differ.
    RatioMismatch {
        samples: [u64; 2],
        ratios: [RationalPair; 2],
    },
    /// With `c = Σ c_a`: `ell^{t+s} + 1 = (ell^{r+s} + 1) c` and
    /// `ell^{t+s+1} + 1 = (ell^{r+s+1} + 1) c`. Eliminating gives
    /// `(ell - 1) = (ell - 1) c`, so `c = 1`, and then
    /// `(ell - 1) ell^{t+s} = (ell - 1) ell^{r+s}` fails.
    AggregateExponent {
        s: u32,
        samples: [u64; 2],
        /// `floor(log_k(k^r n + a))` agrees for every `a` in `[L, U)` at
        /// both samples
        log_levels: [u32; 2],
        c: RationalPair,
        lhs: String,
        rhs: String,
    },
    /// Unknowns `(c0, c1)` pinned by `c1 = 0` and two more samples.
    TwoUnknowns {
        samples: Vec<u64>,
        c0_candidates: [RationalPair; 2],
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoSolution {
    /// Residue `b` whose system failed, where that applies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue: Option<u64>,
    /// Values of `n` whose equations are jointly inconsistent.
    pub samples: Vec<u64>,
    /// The inconsistent equations, exactly.
    pub equations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derivation: Option<Derivation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exhaustion {
    pub candidates: u64,
    pub max_t: u32,
    pub max_band: u32,
    pub train: [u64; 2],
    pub verify: [u64; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "witness")]
pub enum Outcome {
    Verified,
    Counterexample(Counterexample),
    NoSolution(NoSolution),
    Exhausted(Exhaustion),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub claim: Claim,
    /// Inclusive `[lo, hi]` range of `n` that was checked.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range: Option<[u64; 2]>,
    /// Set when the checked range was empty.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub vacuous: bool,
    #[serde(flatten)]
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn new(claim: Claim, outcome: Outcome) -> Self {
        Certificate {
            claim,
            range: None,
            vacuous: false,
            outcome,
            notes: Vec::new(),
        }
    }

    pub fn with_range(mut self, lo: u64, hi: u64) -> Self {
        self.range = Some([lo, hi]);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn is_verified(&self) -> bool {
        matches!(self.outcome, Outcome::Verified)
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match &self.outcome {
            Outcome::Counterexample(c) => Some(c),
            _ => None,
        }
    }

    pub fn no_solution(&self) -> Option<&NoSolution> {
        match &self.outcome {
            Outcome::NoSolution(w) => Some(w),
            _ => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self.outcome {
            Outcome::Verified => "Verified",
            Outcome::Counterexample(_) => "Counterexample",
            Outcome::NoSolution(_) => "NoSolution",
            Outcome::Exhausted(_) => "Exhausted",
        }
    }
}
