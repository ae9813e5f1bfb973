//! Deterministic finite automata with output over base-`k` digits.
//!
//! # Text format
//!
//! ```text
//! # Thue-Morse, least significant digit first
//! base 2 lsd
//! state 0 0
//! state 1 1
//! trans 0 0 0
//! trans 0 1 1
//! trans 1 0 1
//! trans 1 1 0
//! ```
//!
//! States are numbered `0..|Q|` in declaration order and state `0` is
//! initial. Everything after a `#` is a comment. The transition table must
//! be total.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DigitOrder {
    Lsd,
    Msd,
}

impl fmt::Display for DigitOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DigitOrder::Lsd => "lsd",
            DigitOrder::Msd => "msd",
        })
    }
}

impl FromStr for DigitOrder {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "lsd" => Ok(DigitOrder::Lsd),
            "msd" => Ok(DigitOrder::Msd),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DfaoError {
    #[error("base must be at least 2, got {0}")]
    Base(u32),
    #[error("automaton has no states")]
    Empty,
    #[error("transition ({state},{digit}) undefined")]
    Undefined { state: usize, digit: u32 },
    #[error("transition ({state},{digit}) targets unknown state {target}")]
    UnknownTarget {
        state: usize,
        digit: u32,
        target: usize,
    },
    #[error("reach sets need a least-significant-digit-first automaton")]
    DigitOrder,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error("missing `base <k> <lsd|msd>` header")]
    MissingHeader,
    #[error("states must be declared in order; expected state {expected}, found {found}")]
    StateOrder { expected: usize, found: usize },
    #[error("duplicate transition ({0},{1})")]
    Duplicate(usize, u32),
    #[error("digit {digit} out of range for base {base}")]
    Digit { digit: u32, base: u32 },
    #[error("state {0} has no output")]
    MissingOutput(usize),
    #[error(transparent)]
    Invalid(#[from] DfaoError),
}

/// A complete DFAO `(Q, Σ_k, δ, q₀ = 0, τ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfao {
    k: u32,
    order: DigitOrder,
    // delta[q * k + d]
    delta: Vec<usize>,
    output: Vec<BigInt>,
}

/// States reachable from `q₀` by words of length exactly `depth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachSet {
    pub depth: usize,
    pub states: BTreeSet<usize>,
}

impl Dfao {
    /// Builds an automaton from a dense table, `delta[q][d]`.
    pub fn new(
        k: u32,
        order: DigitOrder,
        delta: Vec<Vec<usize>>,
        output: Vec<BigInt>,
    ) -> Result<Self, DfaoError> {
        if k < 2 {
            return Err(DfaoError::Base(k));
        }
        if delta.is_empty() || output.len() != delta.len() {
            return Err(DfaoError::Empty);
        }
        let n = delta.len();
        let mut flat = Vec::with_capacity(n * k as usize);
        for (q, row) in delta.iter().enumerate() {
            for d in 0..k {
                let &target = row
                    .get(d as usize)
                    .ok_or(DfaoError::Undefined { state: q, digit: d })?;
                if target >= n {
                    return Err(DfaoError::UnknownTarget {
                        state: q,
                        digit: d,
                        target,
                    });
                }
                flat.push(target);
            }
        }
        Ok(Dfao {
            k,
            order,
            delta: flat,
            output,
        })
    }

    /// The two-state Thue-Morse automaton, lsd-first.
    pub fn thue_morse() -> Self {
        Dfao::new(
            2,
            DigitOrder::Lsd,
            vec![vec![0, 1], vec![1, 0]],
            vec![BigInt::from(0), BigInt::from(1)],
        )
        .expect("valid automaton")
    }

    pub fn base(&self) -> u32 {
        self.k
    }

    pub fn digit_order(&self) -> DigitOrder {
        self.order
    }

    pub fn num_states(&self) -> usize {
        self.output.len()
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn step(&self, q: usize, d: u32) -> usize {
        self.delta[q * self.k as usize + d as usize]
    }

    pub fn output(&self, q: usize) -> &BigInt {
        &self.output[q]
    }

    /// Runs the automaton on a word given in reading order.
    pub fn run<I: IntoIterator<Item = u32>>(&self, word: I) -> usize {
        word.into_iter()
            .fold(self.initial(), |q, d| self.step(q, d))
    }

    /// Base-`k` digits of `n` in this automaton's reading order. Zero is the
    /// empty word.
    pub fn digits(&self, n: &BigUint) -> Vec<u32> {
        let mut ds = lsd_digits(n, self.k);
        if self.order == DigitOrder::Msd {
            ds.reverse();
        }
        ds
    }

    pub fn eval(&self, n: &BigUint) -> BigInt {
        self.output(self.run(self.digits(n))).clone()
    }

    pub fn eval_u64(&self, n: u64) -> BigInt {
        let q = match self.order {
            DigitOrder::Lsd => {
                let mut q = self.initial();
                let mut m = n;
                while m > 0 {
                    q = self.step(q, (m % self.k as u64) as u32);
                    m /= self.k as u64;
                }
                q
            }
            DigitOrder::Msd => self.run(self.digits(&BigUint::from(n))),
        };
        self.output(q).clone()
    }

    /// `S_0, ..., S_max_depth`, computed by iterating the image of a set.
    pub fn reach_sets(&self, max_depth: usize) -> Result<Vec<ReachSet>, DfaoError> {
        if self.order != DigitOrder::Lsd {
            return Err(DfaoError::DigitOrder);
        }
        let mut out = Vec::with_capacity(max_depth + 1);
        let mut current = BTreeSet::from([self.initial()]);
        for depth in 0..=max_depth {
            let next = self.image(&current);
            out.push(ReachSet {
                depth,
                states: std::mem::replace(&mut current, next),
            });
        }
        Ok(out)
    }

    /// States reached from `set` by one more digit.
    pub fn image(&self, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        set.iter()
            .flat_map(|&q| (0..self.k).map(move |d| self.step(q, d)))
            .collect()
    }

    /// True when padding with non-significant zeros never changes the
    /// output: every reachable state has the same output as all states
    /// reachable from it by zeros.
    pub fn is_zero_invariant(&self) -> bool {
        let mut seen = vec![false; self.num_states()];
        let mut stack = vec![self.initial()];
        seen[self.initial()] = true;
        while let Some(q) = stack.pop() {
            if self.output(self.step(q, 0)) != self.output(q) {
                return false;
            }
            for d in 0..self.k {
                let p = self.step(q, d);
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        true
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut header: Option<(u32, DigitOrder)> = None;
        let mut outputs: Vec<BigInt> = Vec::new();
        let mut delta: Vec<Vec<Option<usize>>> = Vec::new();
        let mut last_line = 0;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |kind| ParseError {
                line: line_no,
                kind,
            };
            let malformed = || err(ParseErrorKind::Malformed(raw.trim().to_string()));
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["base", k, order] if header.is_none() => {
                    let k: u32 = k.parse().map_err(|_| malformed())?;
                    if k < 2 {
                        return Err(err(DfaoError::Base(k).into()));
                    }
                    let order = order.parse().map_err(|_| malformed())?;
                    header = Some((k, order));
                }
                ["state", id, out] => {
                    let (k, _) = header.ok_or_else(|| err(ParseErrorKind::MissingHeader))?;
                    let id: usize = id.parse().map_err(|_| malformed())?;
                    if id != outputs.len() {
                        return Err(err(ParseErrorKind::StateOrder {
                            expected: outputs.len(),
                            found: id,
                        }));
                    }
                    outputs.push(out.parse().map_err(|_| malformed())?);
                    delta.push(vec![None; k as usize]);
                }
                ["state", id] => {
                    let id = id.parse().map_err(|_| malformed())?;
                    return Err(err(ParseErrorKind::MissingOutput(id)));
                }
                ["trans", from, digit, to] => {
                    let (k, _) = header.ok_or_else(|| err(ParseErrorKind::MissingHeader))?;
                    let from: usize = from.parse().map_err(|_| malformed())?;
                    let digit: u32 = digit.parse().map_err(|_| malformed())?;
                    let to: usize = to.parse().map_err(|_| malformed())?;
                    if digit >= k {
                        return Err(err(ParseErrorKind::Digit { digit, base: k }));
                    }
                    let row = delta.get_mut(from).ok_or_else(malformed)?;
                    let slot = &mut row[digit as usize];
                    if slot.is_some() {
                        return Err(err(ParseErrorKind::Duplicate(from, digit)));
                    }
                    *slot = Some(to);
                }
                _ => return Err(malformed()),
            }
        }

        let (k, order) = header.ok_or(ParseError {
            line: last_line.max(1),
            kind: ParseErrorKind::MissingHeader,
        })?;
        let mut table = Vec::with_capacity(delta.len());
        for (q, row) in delta.into_iter().enumerate() {
            let mut dense = Vec::with_capacity(row.len());
            for (d, t) in row.into_iter().enumerate() {
                dense.push(
                    t.ok_or(ParseError {
                        line: last_line,
                        kind: DfaoError::Undefined {
                            state: q,
                            digit: d as u32,
                        }
                        .into(),
                    })?,
                );
            }
            table.push(dense);
        }
        Dfao::new(k, order, table, outputs).map_err(|e| ParseError {
            line: last_line,
            kind: e.into(),
        })
    }

    /// Canonical text: header, states in order, transitions by (state, digit).
    pub fn serialize(&self) -> String {
        let mut s = format!("base {} {}\n", self.k, self.order);
        for (q, out) in self.output.iter().enumerate() {
            s.push_str(&format!("state {q} {out}\n"));
        }
        for q in 0..self.num_states() {
            for d in 0..self.k {
                s.push_str(&format!("trans {q} {d} {}\n", self.step(q, d)));
            }
        }
        s
    }
}

impl FromStr for Dfao {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        Dfao::parse(s)
    }
}

/// Base-`k` digits of `n`, least significant first; empty for zero.
pub fn lsd_digits(n: &BigUint, k: u32) -> Vec<u32> {
    if n == &BigUint::default() {
        return Vec::new();
    }
    n.to_radix_le(k)
        .into_iter()
        .map(u32::from)
        .collect::<Vec<_>>()
}

/// Base-`k` digits of a machine integer, least significant first.
pub fn lsd_digits_u64(mut n: u64, k: u32) -> Vec<u32> {
    let mut out = Vec::new();
    while n > 0 {
        out.push((n % k as u64) as u32);
        n /= k as u64;
    }
    out
}
