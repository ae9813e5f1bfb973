//! Exact rational linear algebra.
//!
//! Every coefficient that the fitting and refutation code produces passes
//! through [`solve_exact`]. There is no floating point here; a system is
//! either solved exactly or shown to be inconsistent by a set of rows.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use num_bigint::BigInt;
pub use num_rational::BigRational as Rational;

/// Shorthand for an integer rational.
pub fn rat(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// `num / den` in lowest terms. Panics if `den` is zero.
pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

/// One equation `coeffs · x = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Row {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Row { coeffs, rhs }
    }

    /// Builds a row from integer data.
    pub fn from_ints<I, J>(coeffs: I, rhs: J) -> Self
    where
        I: IntoIterator,
        I::Item: Into<BigInt>,
        J: Into<BigInt>,
    {
        Row {
            coeffs: coeffs.into_iter().map(rat).collect(),
            rhs: rat(rhs),
        }
    }

    /// Evaluates `coeffs · x`.
    pub fn apply(&self, x: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(x)
            .fold(Rational::zero(), |acc, (c, v)| acc + c * v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("row {row} has {got} coefficients, expected {expected}")]
pub struct ShapeError {
    pub row: usize,
    pub got: usize,
    pub expected: usize,
}

/// A dense system of linear equations over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    rows: Vec<Row>,
    num_unknowns: usize,
}

impl LinearSystem {
    pub fn new(num_unknowns: usize) -> Self {
        LinearSystem {
            rows: Vec::new(),
            num_unknowns,
        }
    }

    pub fn from_rows(num_unknowns: usize, rows: Vec<Row>) -> Result<Self, ShapeError> {
        let mut sys = LinearSystem::new(num_unknowns);
        for row in rows {
            sys.push(row)?;
        }
        Ok(sys)
    }

    pub fn push(&mut self, row: Row) -> Result<(), ShapeError> {
        if row.coeffs.len() != self.num_unknowns {
            return Err(ShapeError {
                row: self.rows.len(),
                got: row.coeffs.len(),
                expected: self.num_unknowns,
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn num_unknowns(&self) -> usize {
        self.num_unknowns
    }

    /// True when `x` satisfies every row exactly.
    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.num_unknowns && self.rows.iter().all(|r| r.apply(x) == r.rhs)
    }

    fn subsystem(&self, keep: &[usize]) -> LinearSystem {
        LinearSystem {
            rows: keep.iter().map(|&i| self.rows[i].clone()).collect(),
            num_unknowns: self.num_unknowns,
        }
    }
}

/// Outcome of [`solve_exact`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveResult {
    Unique(Vec<Rational>),
    /// `particular + span(null_basis)`. `free` lists the unknowns that were
    /// set to zero in `particular`.
    Affine {
        particular: Vec<Rational>,
        null_basis: Vec<Vec<Rational>>,
        free: Vec<usize>,
    },
    /// The listed rows (indices into the input) have no common solution, and
    /// no proper subset of them is inconsistent.
    Inconsistent {
        witness: Vec<usize>,
    },
}

impl SolveResult {
    /// Any exact solution, with free unknowns pinned to zero.
    pub fn any_solution(&self) -> Option<&[Rational]> {
        match self {
            SolveResult::Unique(x) => Some(x),
            SolveResult::Affine { particular, .. } => Some(particular),
            SolveResult::Inconsistent { .. } => None,
        }
    }

    pub fn is_consistent(&self) -> bool {
        !matches!(self, SolveResult::Inconsistent { .. })
    }
}

struct Echelon {
    pivots: Vec<usize>,
    // reduced rows, one per pivot, paired with the augmented rhs
    reduced: Vec<(Vec<Rational>, Rational)>,
    // rows that reduced to 0 = nonzero, with their support in the input
    contradiction: Option<Vec<usize>>,
}

/// Gauss-Jordan elimination with pivot columns chosen left to right.
///
/// Each working row carries the set of input rows that were combined into
/// it, so a contradictory row yields a witness directly.
fn eliminate(sys: &LinearSystem) -> Echelon {
    let n = sys.num_unknowns;
    let mut work: Vec<(Vec<Rational>, Rational, Vec<bool>)> = sys
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut support = vec![false; sys.rows.len()];
            support[i] = true;
            (r.coeffs.clone(), r.rhs.clone(), support)
        })
        .collect();

    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..n {
        let Some(p) = (top..work.len()).find(|&i| !work[i].0[col].is_zero()) else {
            continue;
        };
        work.swap(top, p);
        let inv = work[top].0[col].recip();
        {
            let (coeffs, rhs, _) = &mut work[top];
            for c in coeffs.iter_mut().skip(col) {
                *c *= &inv;
            }
            *rhs *= &inv;
        }
        let (head, tail) = work.split_at_mut(top);
        let (pivot_row, rest) = tail.split_first_mut().expect("pivot row exists");
        for row in head.iter_mut().chain(rest.iter_mut()) {
            let factor = row.0[col].clone();
            if factor.is_zero() {
                continue;
            }
            for j in col..n {
                let delta = &factor * &pivot_row.0[j];
                row.0[j] -= delta;
            }
            row.1 -= &factor * &pivot_row.1;
            for (s, &ps) in row.2.iter_mut().zip(&pivot_row.2) {
                *s |= ps;
            }
        }
        pivots.push(col);
        top += 1;
        if top == work.len() {
            break;
        }
    }

    let contradiction =
        work[top..]
            .iter()
            .find(|(_, rhs, _)| !rhs.is_zero())
            .map(|(_, _, support)| {
                support
                    .iter()
                    .enumerate()
                    .filter_map(|(i, &s)| s.then_some(i))
                    .collect()
            });
    let reduced = work.into_iter().take(top).map(|(c, r, _)| (c, r)).collect();
    Echelon {
        pivots,
        reduced,
        contradiction,
    }
}

/// Solves a linear system exactly.
///
/// An empty system is `Affine` with the full space as its null space.
pub fn solve_exact(sys: &LinearSystem) -> SolveResult {
    let n = sys.num_unknowns;
    let ech = eliminate(sys);
    if let Some(support) = ech.contradiction {
        return SolveResult::Inconsistent {
            witness: minimize_witness(sys, support),
        };
    }

    let mut particular = vec![Rational::zero(); n];
    for (&col, (_, rhs)) in ech.pivots.iter().zip(&ech.reduced) {
        particular[col] = rhs.clone();
    }
    if ech.pivots.len() == n {
        return SolveResult::Unique(particular);
    }

    let free: Vec<usize> = (0..n).filter(|c| !ech.pivots.contains(c)).collect();
    let null_basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (&col, (coeffs, _)) in ech.pivots.iter().zip(&ech.reduced) {
                v[col] = -coeffs[f].clone();
            }
            v
        })
        .collect();
    SolveResult::Affine {
        particular,
        null_basis,
        free,
    }
}

/// Drops rows from an inconsistent subset while it stays inconsistent.
fn minimize_witness(sys: &LinearSystem, mut rows: Vec<usize>) -> Vec<usize> {
    let mut i = 0;
    while i < rows.len() {
        let mut trial = rows.clone();
        trial.remove(i);
        if eliminate(&sys.subsystem(&trial)).contradiction.is_some() {
            rows = trial;
        } else {
            i += 1;
        }
    }
    rows
}

/// Writes a rational as `p/q`, or `p` when integral.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A rational serialized as a pair of decimal strings `["num", "den"]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "[String; 2]", into = "[String; 2]")]
pub struct RationalPair(pub Rational);

impl From<RationalPair> for [String; 2] {
    fn from(r: RationalPair) -> Self {
        [r.0.numer().to_string(), r.0.denom().to_string()]
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RationalParseError {
    #[error("invalid integer {0:?}")]
    Integer(String),
    #[error("zero denominator")]
    ZeroDenominator,
}

impl TryFrom<[String; 2]> for RationalPair {
    type Error = RationalParseError;

    fn try_from([num, den]: [String; 2]) -> Result<Self, Self::Error> {
        let parse = |s: &str| {
            s.parse::<BigInt>()
                .map_err(|_| RationalParseError::Integer(s.to_string()))
        };
        let (num, den) = (parse(&num)?, parse(&den)?);
        if den.is_zero() {
            return Err(RationalParseError::ZeroDenominator);
        }
        Ok(RationalPair(Rational::new(num, den)))
    }
}

impl fmt::Display for RationalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rational(&self.0))
    }
}

/// Serde adapter for `BigInt` as a decimal string.
pub mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Exact `base^exp`.
pub fn pow(base: u64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}
