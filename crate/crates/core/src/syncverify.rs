//! Two-track automata recognizing the graph `{(n, f(n))}` of a sequence.
//!
//! Both numbers are written in base `k`, most significant digit first,
//! the shorter one padded with leading zeros, and read in parallel as a
//! word over pairs `[d1, d2]`. The pair `(0, 0)` is the empty word.
//! Transitions may be partial; a missing one leads to a non-accepting dead
//! state. State 0 is initial.
//!
//! Text format, sharing its layout with the single-track one:
//!
//! ```text
//! base 2 msd pair
//! state 0 0
//! state 1 1
//! trans 0 0,0 0
//! trans 0 1,1 1
//! ```
//!
//! `state <id> <0|1>` marks accepting states with `1`.

use std::fmt::Write as _;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{growth_exponent, CorpusError, GSeq, SequenceOracle};
use crate::dfao::DigitOrder;
use crate::recsolve::{Certificate, Claim, Counterexample, Outcome};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SyncError {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("digit pair [{0},{1}] out of range for base {2}")]
    Digit(u32, u32, u32),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Growth(#[from] CorpusError),
}

fn parse_err(line: usize, msg: impl Into<String>) -> SyncError {
    SyncError::Parse {
        line,
        msg: msg.into(),
    }
}

/// A deterministic, possibly partial automaton over `Σ_k × Σ_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyncDfa {
    name: String,
    k: u32,
    accepting: Vec<bool>,
    // delta[(q * k + d1) * k + d2]
    delta: Vec<Option<usize>>,
}

impl SyncDfa {
    /// An automaton with `num_states` states, none accepting, no transitions.
    pub fn new(name: &str, k: u32, num_states: usize) -> Result<Self, SyncError> {
        if k < 2 {
            return Err(SyncError::Parameter(format!("base must be >= 2, got {k}")));
        }
        if num_states == 0 {
            return Err(SyncError::Parameter("no states".into()));
        }
        Ok(SyncDfa {
            name: name.to_string(),
            k,
            accepting: vec![false; num_states],
            delta: vec![None; num_states * (k * k) as usize],
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn base(&self) -> u32 {
        self.k
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn set_accepting(&mut self, q: usize, accepting: bool) {
        self.accepting[q] = accepting;
    }

    fn slot(&self, q: usize, d1: u32, d2: u32) -> usize {
        (q * self.k as usize + d1 as usize) * self.k as usize + d2 as usize
    }

    /// Adds `from --[d1,d2]--> to`. Redefining an existing transition with
    /// a different target is an error.
    pub fn add(&mut self, from: usize, d1: u32, d2: u32, to: usize) -> Result<(), SyncError> {
        let n = self.num_states();
        if from >= n || to >= n {
            return Err(SyncError::Parameter(format!(
                "state out of range in {from} -> {to}"
            )));
        }
        if d1 >= self.k || d2 >= self.k {
            return Err(SyncError::Digit(d1, d2, self.k));
        }
        let i = self.slot(from, d1, d2);
        match self.delta[i] {
            Some(old) if old != to => Err(SyncError::Parameter(format!(
                "transition ({from},[{d1},{d2}]) already goes to {old}"
            ))),
            _ => {
                self.delta[i] = Some(to);
                Ok(())
            }
        }
    }

    pub fn step(&self, q: usize, d1: u32, d2: u32) -> Option<usize> {
        self.delta[self.slot(q, d1, d2)]
    }

    /// Runs a pair word from state 0; `None` means the dead state.
    pub fn run_pairs(&self, word: &[(u32, u32)]) -> Result<Option<usize>, SyncError> {
        let mut q = 0;
        for &(d1, d2) in word {
            if d1 >= self.k || d2 >= self.k {
                return Err(SyncError::Digit(d1, d2, self.k));
            }
            match self.step(q, d1, d2) {
                Some(p) => q = p,
                None => return Ok(None),
            }
        }
        Ok(Some(q))
    }

    pub fn accepts_word(&self, word: &[(u32, u32)]) -> Result<bool, SyncError> {
        Ok(self.run_pairs(word)?.is_some_and(|q| self.accepting[q]))
    }

    /// The padded pair word of `(n, m)`, with `extra` more leading `[0,0]`.
    pub fn pair_word(&self, n: &BigUint, m: &BigUint, extra: usize) -> Vec<(u32, u32)> {
        let digits = |x: &BigUint| -> Vec<u32> {
            if x.is_zero() {
                Vec::new()
            } else {
                x.to_radix_be(self.k).into_iter().map(u32::from).collect()
            }
        };
        let (a, b) = (digits(n), digits(m));
        let len = a.len().max(b.len()) + extra;
        let pad = |v: Vec<u32>| {
            let mut out = vec![0; len - v.len()];
            out.extend(v);
            out
        };
        pad(a).into_iter().zip(pad(b)).collect()
    }

    pub fn accepts(&self, n: &BigUint, m: &BigUint) -> bool {
        self.accepts_word(&self.pair_word(n, m, 0))
            .expect("digits of a base-k representation are in range")
    }

    pub fn accepts_u64(&self, n: u64, m: u64) -> bool {
        self.accepts(&BigUint::from(n), &BigUint::from(m))
    }

    pub fn parse(text: &str) -> Result<Self, SyncError> {
        let mut k = None;
        let mut accepting: Vec<bool> = Vec::new();
        let mut trans = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let words: Vec<&str> = content.split_whitespace().collect();
            match words.as_slice() {
                ["base", b, order, "pair"] => {
                    if k.is_some() {
                        return Err(parse_err(line, "duplicate header"));
                    }
                    let base: u32 = b
                        .parse()
                        .map_err(|_| parse_err(line, format!("bad base {b:?}")))?;
                    if base < 2 {
                        return Err(parse_err(line, format!("base must be >= 2, got {base}")));
                    }
                    let order: DigitOrder = order.parse().map_err(|()| {
                        parse_err(
                            line,
                            format!("digit order must be lsd or msd, got {order:?}"),
                        )
                    })?;
                    if order != DigitOrder::Msd {
                        return Err(parse_err(line, "pair automata read msd first"));
                    }
                    k = Some(base);
                }
                _ if k.is_none() => {
                    return Err(parse_err(line, "expected header `base <k> msd pair`"));
                }
                ["state", id, acc] => {
                    let id: usize = id
                        .parse()
                        .map_err(|_| parse_err(line, format!("bad state {id:?}")))?;
                    if id != accepting.len() {
                        return Err(parse_err(
                            line,
                            format!(
                                "states must be declared in order; expected {}",
                                accepting.len()
                            ),
                        ));
                    }
                    accepting.push(match *acc {
                        "0" => false,
                        "1" => true,
                        _ => {
                            return Err(parse_err(
                                line,
                                format!("acceptance flag must be 0 or 1, got {acc:?}"),
                            ))
                        }
                    });
                }
                ["trans", from, pair, to] => {
                    let num = |s: &str| -> Result<u32, SyncError> {
                        s.parse()
                            .map_err(|_| parse_err(line, format!("bad number {s:?}")))
                    };
                    let (d1, d2) = pair
                        .split_once(',')
                        .ok_or_else(|| parse_err(line, format!("bad digit pair {pair:?}")))?;
                    trans.push((
                        line,
                        num(from)? as usize,
                        num(d1)?,
                        num(d2)?,
                        num(to)? as usize,
                    ));
                }
                _ => return Err(parse_err(line, format!("malformed line {content:?}"))),
            }
        }
        let k = k.ok_or_else(|| parse_err(1, "missing header"))?;
        let mut dfa =
            SyncDfa::new("custom", k, accepting.len()).map_err(|e| parse_err(1, e.to_string()))?;
        dfa.accepting = accepting;
        for (line, from, d1, d2, to) in trans {
            dfa.add(from, d1, d2, to)
                .map_err(|e| parse_err(line, e.to_string()))?;
        }
        Ok(dfa)
    }

    /// Canonical text: states in order, transitions by source then pair.
    pub fn serialize(&self) -> String {
        let mut out = format!("base {} msd pair\n", self.k);
        for (q, &acc) in self.accepting.iter().enumerate() {
            writeln!(out, "state {q} {}", u8::from(acc)).unwrap();
        }
        for q in 0..self.num_states() {
            for d1 in 0..self.k {
                for d2 in 0..self.k {
                    if let Some(p) = self.step(q, d1, d2) {
                        writeln!(out, "trans {q} {d1},{d2} {p}").unwrap();
                    }
                }
            }
        }
        out
    }
}

/// The machine for `g_{2,2}`. The self-loop on state 1 reads `[0,0]` and
/// `[1,0]`: the middle digits of `m = 10…01`.
pub fn build_fig2() -> SyncDfa {
    let mut d = SyncDfa::new("fig2", 2, 4).expect("valid");
    let edges = [
        (0, 0, 0, 0),
        (0, 1, 1, 1),
        (1, 0, 0, 1),
        (1, 1, 0, 1),
        (1, 0, 1, 2),
        (1, 1, 1, 2),
        (0, 0, 1, 3),
        (3, 1, 0, 2),
    ];
    for (from, d1, d2, to) in edges {
        d.add(from, d1, d2, to).expect("deterministic");
    }
    d.set_accepting(2, true);
    d.set_accepting(3, true);
    d
}

/// The machine for `g_{k,k}`, `k > 2`.
pub fn build_figk(k: u32) -> Result<SyncDfa, SyncError> {
    if k <= 2 {
        return Err(SyncError::Parameter(format!(
            "the g(k,k) machine needs k > 2, got {k}"
        )));
    }
    let mut d = SyncDfa::new("figk", k, 3)?;
    d.add(0, 0, 0, 0)?;
    d.add(0, 0, 1, 2)?;
    for a in 1..k {
        d.add(0, a, 1, 1)?;
        d.add(0, a, 2, 2)?;
    }
    for a in 0..k {
        d.add(1, a, 0, 1)?;
        d.add(1, a, 1, 2)?;
    }
    d.set_accepting(2, true);
    Ok(d)
}

/// One accepting state looping on `[d,d]`: the graph of `f(n) = n`.
pub fn build_identity(k: u32) -> Result<SyncDfa, SyncError> {
    let mut d = SyncDfa::new("identity", k, 1)?;
    for a in 0..k {
        d.add(0, a, a, 0)?;
    }
    d.set_accepting(0, true);
    Ok(d)
}

/// The Thue–Morse graph in base 2. The parity of the ones of `n` does not
/// depend on reading order, and `m ∈ {0, 1}` has at most a final 1.
pub fn build_tm() -> SyncDfa {
    // state = 2 * (m finished with a 1) + parity
    let mut d = SyncDfa::new("tm", 2, 4).expect("valid");
    for p in 0..2 {
        for d1 in 0..2u32 {
            let next = p ^ d1 as usize;
            d.add(p, d1, 0, next).expect("deterministic");
            d.add(p, d1, 1, 2 + next).expect("deterministic");
        }
    }
    d.set_accepting(0, true);
    d.set_accepting(3, true);
    d
}

/// Values `m != v` that a correct machine must reject for `(n, v)`:
/// `v ± 1`, `0`, `2v`, then uniform draws below `4v + 16`.
fn negatives(v: &BigUint, count: usize, rng: &mut ChaCha8Rng) -> Vec<BigUint> {
    let mut out: Vec<BigUint> = Vec::with_capacity(count);
    let push = |m: BigUint, out: &mut Vec<BigUint>| {
        if &m != v && !out.contains(&m) && out.len() < count {
            out.push(m);
        }
    };
    push(v + 1u32, &mut out);
    if !v.is_zero() {
        push(v - 1u32, &mut out);
    }
    push(BigUint::zero(), &mut out);
    push(v * 2u32, &mut out);
    let bound = v * 4u32 + 16u32;
    // at most `bound - 1` distinct candidates exist
    let target = count.min(bound.to_usize().map_or(count, |b| b - 1));
    while out.len() < target {
        push(rng.gen_biguint_below(&bound), &mut out);
    }
    out
}

/// Checks acceptance of `(n, f(n))` and rejection of `negatives_per_n`
/// other values for every `0 <= n <= n_max`. The negatives for each `n`
/// come from a stream of a seeded generator, so the result depends on
/// `seed` but not on `jobs`.
pub fn verify_sync<O: SequenceOracle + ?Sized>(
    dfa: &SyncDfa,
    oracle: &O,
    n_max: u64,
    negatives_per_n: usize,
    seed: u64,
    jobs: usize,
) -> Certificate {
    let claim = Claim::Synchronized {
        machine: dfa.name().to_string(),
        oracle: oracle.name(),
        negatives_per_n,
        seed,
    };
    let values = oracle.table(n_max as usize + 1);
    let check = |n: u64| -> Option<Counterexample> {
        let value = &values[n as usize];
        let fail = |m: String, should_accept| Counterexample::Membership {
            n,
            m,
            should_accept,
        };
        let Some(v) = value.to_biguint() else {
            return Some(fail(value.to_string(), true));
        };
        let nb = BigUint::from(n);
        if !dfa.accepts(&nb, &v) {
            return Some(fail(v.to_string(), true));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(n);
        negatives(&v, negatives_per_n, &mut rng)
            .into_iter()
            .find(|m| dfa.accepts(&nb, m))
            .map(|m| fail(m.to_string(), false))
    };
    let outcome = match crate::par::find_first(0, n_max, jobs, check) {
        Some(cx) => Outcome::Counterexample(cx),
        None => Outcome::Verified,
    };
    Certificate::new(claim, outcome).with_range(0, n_max)
}

/// Checks that `g_{k,k}(n)` is written `1 0^{L-2} 1` in base `k`, where
/// `L >= 2` is the length of `n`, for `k <= n <= n_max`.
pub fn repr_pattern_check(k: u32, n_max: u64) -> Result<Certificate, SyncError> {
    let g = GSeq::new(k, k)?;
    if n_max < k as u64 {
        return Err(SyncError::Parameter(format!(
            "need N >= k, got N={n_max}, k={k}"
        )));
    }
    let check = |n: u64| -> Option<Counterexample> {
        let value = g.eval(n);
        let len = BigUint::from(n).to_radix_be(k).len();
        let digits: Vec<u8> = value.magnitude().to_radix_be(k);
        let ok = digits.len() == len
            && digits[0] == 1
            && digits[len - 1] == 1
            && digits[1..len - 1].iter().all(|&d| d == 0);
        (!ok).then(|| Counterexample::Pattern {
            n,
            value: value.to_string(),
            digits: digits
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(","),
        })
    };
    let outcome = match crate::par::find_first(k as u64, n_max, 1, check) {
        Some(cx) => Outcome::Counterexample(cx),
        None => Outcome::Verified,
    };
    Ok(Certificate::new(Claim::ReprPattern { k }, outcome).with_range(k as u64, n_max))
}

/// Result of [`sync_growth_screen`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum GrowthScreen {
    /// Consistent with being synchronized; no claim is made.
    PossiblySynchronized { theta: f64 },
    /// The estimated growth `n^theta` is impossible for a synchronized
    /// sequence.
    NotSynchronized { theta: f64, reason: String },
}

impl GrowthScreen {
    pub fn theta(&self) -> f64 {
        match self {
            GrowthScreen::PossiblySynchronized { theta }
            | GrowthScreen::NotSynchronized { theta, .. } => *theta,
        }
    }

    pub fn is_not_synchronized(&self) -> bool {
        matches!(self, GrowthScreen::NotSynchronized { .. })
    }
}

/// Tolerance around the exponents 0 and 1 that synchronized sequences can
/// have along `k^j`.
pub const GROWTH_MARGIN: f64 = 0.1;

/// A synchronized sequence is `O(n)`, and is either `O(1)` or at least
/// `cn` infinitely often. An estimated exponent above `1 + margin`, or
/// strictly between `margin` and `1 - margin`, rules it out.
pub fn sync_growth_screen<O: SequenceOracle + ?Sized>(
    oracle: &O,
    k: u32,
    depth: u32,
) -> Result<GrowthScreen, SyncError> {
    if depth < 6 {
        return Err(SyncError::Parameter(format!(
            "depth must be >= 6, got {depth}"
        )));
    }
    let theta = growth_exponent(oracle, k, depth)?;
    Ok(if theta > 1.0 + GROWTH_MARGIN {
        GrowthScreen::NotSynchronized {
            theta,
            reason: format!("superlinear growth, theta = {theta:.4}"),
        }
    } else if theta > GROWTH_MARGIN && theta < 1.0 - GROWTH_MARGIN {
        GrowthScreen::NotSynchronized {
            theta,
            reason: format!("unbounded but sublinear growth, theta = {theta:.4}"),
        }
    } else {
        GrowthScreen::PossiblySynchronized { theta }
    })
}
