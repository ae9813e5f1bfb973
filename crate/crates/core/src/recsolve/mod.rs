//! Recursion schemes `f(k^t n + b) = Σ_{L<=a<U} c_a f(k^r n + a)`, `n >= n0`.
//!
//! A sequence is `k`-recursive when some scheme holds for every residue
//! `0 <= b < k^t`, and strongly `k`-recursive when moreover `n0 = 0`,
//! `L >= 0` and `U <= k^t`. [`fit`] solves for coefficients on sampled
//! `n`, [`verify`] checks a scheme over a range, [`search`] enumerates
//! shapes, and the `refute_*` functions reproduce the finite
//! contradictions that rule schemes out for `g_{k,ell}` and `h`.

mod certificate;
mod fit;
mod refute;
mod scheme;
mod search;
mod verify;

pub use certificate::{
    Certificate, Claim, Counterexample, Derivation, Exhaustion, NoSolution, Outcome,
};
pub use fit::{fit, fit_combination, fit_values, FitOutcome, Subseq};
pub use refute::{refutation_level, refute_g_general, refute_g_strong, refute_h_strong};
pub use scheme::{RecursionScheme, SchemeShape};
pub use search::{search, SearchBounds, SearchMode, SearchResult};
pub use verify::{first_failure, verify, verify_jobs};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RecError {
    #[error("parameter error: {0}")]
    Parameter(String),
    /// A refutation's own sanity checks did not go through.
    #[error("refutation failed: {0}")]
    Refutation(String),
}

impl RecError {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        RecError::Parameter(msg.into())
    }
}
