use num_bigint::BigInt;

use super::certificate::NoSolution;
use super::scheme::{RecursionScheme, SchemeShape};
use super::RecError;
use crate::corpus::SequenceOracle;
use crate::ratlin::{rat, solve_exact, LinearSystem, Row, SolveResult};

/// An arithmetic subsequence `n ↦ mult * n + offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Subseq {
    pub mult: u64,
    pub offset: i64,
}

impl Subseq {
    pub fn new(mult: u64, offset: i64) -> Self {
        Subseq { mult, offset }
    }

    pub fn index(&self, n: u64) -> u64 {
        let i = self.mult as i128 * n as i128 + self.offset as i128;
        u64::try_from(i).expect("subsequence index is nonnegative")
    }
}

/// Samples `target(n) = Σ_i x_i gens[i](n)` at each `n` in `ns` and solves
/// for `x`. `values` must cover every index touched.
pub fn fit_combination(
    values: &[BigInt],
    target: Subseq,
    gens: &[Subseq],
    ns: &[u64],
) -> (LinearSystem, SolveResult) {
    let mut sys = LinearSystem::new(gens.len());
    for &n in ns {
        let row = Row::new(
            gens.iter()
                .map(|g| rat(values[g.index(n) as usize].clone()))
                .collect(),
            rat(values[target.index(n) as usize].clone()),
        );
        sys.push(row).expect("row width matches generators");
    }
    let solved = solve_exact(&sys);
    (sys, solved)
}

/// Result of [`fit`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FitOutcome {
    /// An exact solution of every sampled system. `pinned` lists, per
    /// residue, the generator offsets `a` whose coefficients were free and
    /// set to zero.
    Fitted {
        scheme: RecursionScheme,
        pinned: Vec<(u64, Vec<i64>)>,
    },
    NoSolution(NoSolution),
}

impl FitOutcome {
    pub fn scheme(&self) -> Option<&RecursionScheme> {
        match self {
            FitOutcome::Fitted { scheme, .. } => Some(scheme),
            FitOutcome::NoSolution(_) => None,
        }
    }

    /// True when some residue's system had free unknowns.
    pub fn is_underdetermined(&self) -> bool {
        matches!(self, FitOutcome::Fitted { pinned, .. } if !pinned.is_empty())
    }
}

/// Fits a scheme of the given shape to `oracle` on the `n` in `train` with
/// `n >= n0`.
pub fn fit<O: SequenceOracle + ?Sized>(
    oracle: &O,
    shape: SchemeShape,
    train: (u64, u64),
) -> Result<FitOutcome, RecError> {
    shape.validate()?;
    let ns = training_ns(&shape, train)?;
    let values = oracle.table(shape.table_len(*ns.last().expect("nonempty")));
    Ok(fit_values(&values, shape, &ns))
}

pub(crate) fn training_ns(shape: &SchemeShape, (lo, hi): (u64, u64)) -> Result<Vec<u64>, RecError> {
    let ns: Vec<u64> = (lo.max(shape.n0)..=hi).collect();
    let needed = shape.width() + 2;
    if ns.len() < needed {
        return Err(RecError::param(format!(
            "training range {lo}..{hi} has {} usable values of n >= n0 = {}, need at least U-L+2 = {needed}",
            ns.len(),
            shape.n0
        )));
    }
    Ok(ns)
}

/// [`fit`] against a precomputed value table.
pub fn fit_values(values: &[BigInt], shape: SchemeShape, ns: &[u64]) -> FitOutcome {
    let gens: Vec<Subseq> = (shape.lower..shape.upper)
        .map(|a| Subseq::new(shape.generator_modulus(), a))
        .collect();
    let mut coeffs = Vec::with_capacity(shape.modulus() as usize);
    let mut pinned = Vec::new();
    for b in 0..shape.modulus() {
        let target = Subseq::new(shape.modulus(), b as i64);
        let (sys, solved) = fit_combination(values, target, &gens, ns);
        match solved {
            SolveResult::Unique(x) => coeffs.push(x),
            SolveResult::Affine {
                particular, free, ..
            } => {
                pinned.push((b, free.iter().map(|&i| shape.lower + i as i64).collect()));
                coeffs.push(particular);
            }
            SolveResult::Inconsistent { witness } => {
                return FitOutcome::NoSolution(NoSolution {
                    residue: Some(b),
                    samples: witness.iter().map(|&i| ns[i]).collect(),
                    equations: witness
                        .iter()
                        .map(|&i| render_equation(&sys.rows()[i], shape.lower))
                        .collect(),
                    derivation: None,
                })
            }
        }
    }
    FitOutcome::Fitted {
        scheme: RecursionScheme::new(shape, coeffs).expect("fitted shape is valid"),
        pinned,
    }
}

/// `lhs = v_L c[L] + ...`, with zero terms dropped.
pub(crate) fn render_equation(row: &Row, lower: i64) -> String {
    use num_traits::Zero;
    let terms: Vec<String> = row
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| format!("{} c[{}]", crate::ratlin::fmt_rational(v), lower + i as i64))
        .collect();
    let rhs = if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    };
    format!("{} = {rhs}", crate::ratlin::fmt_rational(&row.rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{GSeq, Identity};
    use crate::recsolve::verify;

    #[test]
    fn identity_sequence_is_fitted_and_verified() {
        let shape = SchemeShape::new(2, 1, 2, 0, 2, 0).unwrap();
        let out = fit(&Identity, shape, (0, 32)).unwrap();
        let scheme = out.scheme().expect("n is strongly 2-recursive");
        assert!(scheme.is_strong());
        assert!(verify(&Identity, scheme, 0..=2000).is_verified());
    }

    #[test]
    fn g_has_no_small_strong_scheme() {
        let shape = SchemeShape::new(2, 1, 2, 0, 2, 0).unwrap();
        match fit(&GSeq::new(2, 3).unwrap(), shape, (0, 32)).unwrap() {
            FitOutcome::NoSolution(w) => {
                assert_eq!(w.residue, Some(0));
                assert!(!w.samples.is_empty());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn training_range_too_small() {
        let shape = SchemeShape::new(2, 1, 2, 0, 4, 0).unwrap();
        assert!(matches!(
            fit(&Identity, shape, (0, 4)),
            Err(RecError::Parameter(_))
        ));
        assert!(fit(&Identity, shape, (0, 5)).is_ok());
    }

    #[test]
    fn underdetermined_fits_are_flagged() {
        // f(2n) and f(2n+1) plus a constant-free third generator f(2n+2)
        // make the identity over-parameterized
        let shape = SchemeShape::new(2, 1, 2, 0, 3, 0).unwrap();
        let out = fit(&Identity, shape, (0, 20)).unwrap();
        assert!(out.is_underdetermined());
        assert!(verify(&Identity, out.scheme().unwrap(), 0..=500).is_verified());
    }

    #[test]
    fn equation_rendering() {
        let row = Row::from_ints([4i64, 0, -2], 10);
        assert_eq!(render_equation(&row, -1), "10 = 4 c[-1] + -2 c[1]");
    }
}
