//! Randomized suites with fixed seeds. Each suite is a plain function so
//! the same runs back both the `properties` tests and the acceptance
//! summary.

use std::collections::BTreeSet;
use std::fmt::Debug;

use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};
use seqrec::corpus::SequenceOracle;
use seqrec::dfao::{Dfao, DigitOrder};
use seqrec::ratlin::{ratio, solve_exact, LinearSystem, Rational, RationalPair, Row, SolveResult};
use seqrec::recsolve::{
    fit, verify, Counterexample, FitOutcome, Outcome, RecursionScheme, SchemeShape,
};
use seqrec::strongderive::{derive, find_rt, SubsequenceMapping};
use seqrec::syncverify::{build_fig2, build_figk, build_identity, build_tm, SyncDfa};

use super::{consistent, g_ref, hashed, oracle, tm_ref};

pub const CASES: u32 = 500;

pub type Suite = (&'static str, fn() -> Result<(), String>);

pub const SUITES: &[Suite] = &[
    ("solver agrees with fraction-free rank", solver_matches_rank),
    ("rational inverse and pair round trip", rationals),
    ("dfao text round trip", dfao_round_trip),
    ("dfao zero padding", dfao_padding),
    ("zero invariance agrees with brute force", zero_invariance),
    ("reach sets and (r, t)", reach_sets),
    ("derived mappings hold", derived_mappings),
    ("pair machines: padding and graph", sync_machines),
    ("pair machine text round trip", sync_round_trip),
    ("fit and verify soundness", fit_verify_soundness),
    ("scheme json round trip", scheme_round_trip),
];

fn run<S>(
    seed: u64,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String>
where
    S: Strategy,
    S::Value: Debug,
{
    let config = Config {
        cases: CASES,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new(config)
        .run(&strategy, test)
        .map_err(|e| e.to_string())
}

fn rows_strategy() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<i64>)> {
    (1usize..=4, 1usize..=6, any::<bool>()).prop_flat_map(|(n, m, planted)| {
        (
            prop::collection::vec(prop::collection::vec(-3i64..=3, n), m),
            prop::collection::vec(-3i64..=3, n),
            prop::collection::vec(-4i64..=4, m),
            Just(planted),
        )
            .prop_map(|(a, x0, noise, planted)| {
                let b = if planted {
                    a.iter()
                        .map(|row| row.iter().zip(&x0).map(|(c, x)| c * x).sum())
                        .collect()
                } else {
                    noise
                };
                (a, b)
            })
    })
}

fn residual_zero(a: &[Vec<i64>], v: &[Rational]) -> bool {
    a.iter().all(|row| {
        row.iter()
            .zip(v)
            .fold(Rational::from_integer(0.into()), |acc, (&c, x)| {
                acc + x * Rational::from_integer(BigInt::from(c))
            })
            == Rational::from_integer(0.into())
    })
}

pub fn solver_matches_rank() -> Result<(), String> {
    run(0x5eed_0001, rows_strategy(), |(a, b)| {
        let n = a[0].len();
        let rows: Vec<Row> = a
            .iter()
            .zip(&b)
            .map(|(r, &rhs)| Row::from_ints(r.iter().copied(), rhs))
            .collect();
        let sys = LinearSystem::from_rows(n, rows).unwrap();
        let big_a = super::big(&a);
        let big_b: Vec<BigInt> = b.iter().map(|&x| x.into()).collect();
        let rank = super::bareiss_rank(&big_a);
        let solvable = consistent(&big_a, &big_b);
        let res = solve_exact(&sys);
        prop_assert_eq!(res.is_consistent(), solvable);
        match &res {
            SolveResult::Unique(x) => {
                prop_assert_eq!(rank, n);
                prop_assert!(sys.is_satisfied_by(x));
            }
            SolveResult::Affine {
                particular,
                null_basis,
                free,
            } => {
                prop_assert!(rank < n);
                prop_assert_eq!(null_basis.len(), n - rank);
                prop_assert!(sys.is_satisfied_by(particular));
                for v in null_basis {
                    prop_assert!(residual_zero(&a, v));
                }
                for &i in free {
                    prop_assert_eq!(&particular[i], &Rational::from_integer(0.into()));
                }
            }
            SolveResult::Inconsistent { witness } => {
                let pick = |skip: Option<usize>| {
                    let idx: Vec<usize> = witness
                        .iter()
                        .copied()
                        .filter(|&i| Some(i) != skip)
                        .collect();
                    let sa: Vec<Vec<BigInt>> = idx.iter().map(|&i| big_a[i].clone()).collect();
                    let sb: Vec<BigInt> = idx.iter().map(|&i| big_b[i].clone()).collect();
                    consistent(&sa, &sb)
                };
                prop_assert!(!pick(None), "witness {:?} is consistent", witness);
                for &i in witness {
                    prop_assert!(pick(Some(i)), "witness {:?} is not minimal", witness);
                }
            }
        }
        Ok(())
    })
}

pub fn rationals() -> Result<(), String> {
    let nonzero = (-10_000i64..=10_000).prop_filter("nonzero", |&x| x != 0);
    run(0x5eed_0002, (nonzero.clone(), nonzero), |(p, q)| {
        let a = ratio(p, q);
        let inv = ratio(q, p);
        prop_assert_eq!(&a * &inv, Rational::from_integer(1.into()));
        let json = serde_json::to_string(&RationalPair(a.clone())).unwrap();
        let back: RationalPair = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back.0, a);
        let bad = serde_json::from_str::<RationalPair>(&format!("[\"{p}\",\"0\"]"));
        prop_assert!(bad.is_err());
        Ok(())
    })
}

#[derive(Clone, Debug)]
pub struct DfaoSpec {
    pub k: u32,
    pub lsd: bool,
    pub delta: Vec<Vec<usize>>,
    pub out: Vec<i64>,
}

impl DfaoSpec {
    pub fn build(&self) -> Dfao {
        let order = if self.lsd {
            DigitOrder::Lsd
        } else {
            DigitOrder::Msd
        };
        let out = self.out.iter().map(|&x| BigInt::from(x)).collect();
        Dfao::new(self.k, order, self.delta.clone(), out).unwrap()
    }

    /// Runs the table directly on a word in reading order.
    pub fn run(&self, word: &[u32]) -> usize {
        word.iter().fold(0, |q, &d| self.delta[q][d as usize])
    }
}

/// `zero_loops` forces `δ(q, 0) = q` everywhere.
fn dfao_strategy(zero_loops: bool, lsd_only: bool) -> impl Strategy<Value = DfaoSpec> {
    (2u32..=3, 1usize..=4, any::<bool>()).prop_flat_map(move |(k, n, lsd)| {
        (
            prop::collection::vec(prop::collection::vec(0..n, k as usize), n),
            prop::collection::vec(-2i64..=2, n),
        )
            .prop_map(move |(mut delta, out)| {
                if zero_loops {
                    for (q, row) in delta.iter_mut().enumerate() {
                        row[0] = q;
                    }
                }
                DfaoSpec {
                    k,
                    lsd: lsd || lsd_only,
                    delta,
                    out,
                }
            })
    })
}

fn lsd_digits(mut n: u64, k: u32) -> Vec<u32> {
    let mut ds = Vec::new();
    while n > 0 {
        ds.push((n % k as u64) as u32);
        n /= k as u64;
    }
    ds
}

pub fn dfao_round_trip() -> Result<(), String> {
    run(0x5eed_0003, dfao_strategy(false, false), |spec| {
        let d = spec.build();
        let text = d.serialize();
        let back: Dfao = text
            .parse()
            .map_err(|e| TestCaseError::fail(format!("{e}")))?;
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(back.serialize(), text);
        Ok(())
    })
}

pub fn dfao_padding() -> Result<(), String> {
    let strat = (dfao_strategy(true, false), 0u64..1_000_000, 0usize..5);
    run(0x5eed_0004, strat, |(spec, n, pad)| {
        let d = spec.build();
        let mut word = lsd_digits(n, spec.k);
        if !spec.lsd {
            word.reverse();
        }
        let plain = spec.out[spec.run(&word)];
        if spec.lsd {
            word.extend(std::iter::repeat_n(0, pad));
        } else {
            word.splice(0..0, std::iter::repeat_n(0, pad));
        }
        prop_assert_eq!(spec.out[spec.run(&word)], plain);
        prop_assert_eq!(d.eval_u64(n), BigInt::from(plain));
        prop_assert_eq!(d.eval(&BigUint::from(n)), BigInt::from(plain));
        prop_assert!(!spec.lsd || d.is_zero_invariant());
        Ok(())
    })
}

/// Every word of length `< |Q|` (enough to reach every reachable state).
fn words(k: u32, max_len: usize) -> Vec<Vec<u32>> {
    let mut all = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<u32>| {
                (0..k).map(move |d| {
                    let mut w = w.clone();
                    w.push(d);
                    w
                })
            })
            .collect();
        all.extend(layer.iter().cloned());
    }
    all
}

pub fn zero_invariance() -> Result<(), String> {
    run(0x5eed_0005, dfao_strategy(false, true), |spec| {
        let brute = words(spec.k, spec.delta.len()).iter().all(|w| {
            let q = spec.run(w);
            spec.out[spec.delta[q][0]] == spec.out[q]
        });
        prop_assert_eq!(spec.build().is_zero_invariant(), brute);
        Ok(())
    })
}

fn reach(spec: &DfaoSpec, t: usize) -> BTreeSet<usize> {
    let mut s = BTreeSet::from([0]);
    for _ in 0..t {
        s = s
            .iter()
            .flat_map(|&q| spec.delta[q].iter().copied())
            .collect();
    }
    s
}

pub fn reach_sets() -> Result<(), String> {
    run(0x5eed_0006, dfao_strategy(false, true), |spec| {
        let d = spec.build();
        let (r, t) = find_rt(&d).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let q = spec.delta.len();
        prop_assert!(r < t);
        prop_assert!(t as usize <= 1 << q, "t = {} for {} states", t, q);
        prop_assert!(reach(&spec, t as usize).is_subset(&reach(&spec, r as usize)));
        for tt in 1..t as usize {
            for rr in 0..tt {
                prop_assert!(!reach(&spec, tt).is_subset(&reach(&spec, rr)));
            }
        }
        let sets = d.reach_sets(t as usize).unwrap();
        for (i, s) in sets.iter().enumerate() {
            prop_assert_eq!(&s.states, &reach(&spec, i));
        }
        Ok(())
    })
}

pub fn derived_mappings() -> Result<(), String> {
    let strat = (
        dfao_strategy(true, true),
        prop::collection::vec(0u64..5_000, 8),
    );
    run(0x5eed_0007, strat, |(spec, ns)| {
        let d = spec.build();
        let m = match derive(&d) {
            Ok(m) => m,
            Err(seqrec::strongderive::DeriveError::TooLarge { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let f = |n: u64| spec.out[spec.run(&lsd_digits(n, spec.k))];
        let (kt, kr) = ((spec.k as u64).pow(m.t()), (spec.k as u64).pow(m.r()));
        for &n in ns.iter().chain([0, 1].iter()) {
            for (b, &a) in m.map().iter().enumerate() {
                prop_assert!(a < kr);
                prop_assert_eq!(
                    f(kt * n + b as u64),
                    f(kr * n + a),
                    "n = {}, b = {}, a = {}",
                    n,
                    b,
                    a
                );
            }
        }
        let json = serde_json::to_string(&m).unwrap();
        let back: SubsequenceMapping = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, m);
        Ok(())
    })
}

type Graph = Box<dyn Fn(u64) -> u64>;

fn machines() -> Vec<(SyncDfa, Graph)> {
    let mut out: Vec<(SyncDfa, Graph)> = vec![
        (build_fig2(), Box::new(|n| g_ref(2, 2, n) as u64)),
        (build_tm(), Box::new(|n| tm_ref(n) as u64)),
    ];
    for k in 3..=5u64 {
        out.push((
            build_figk(k as u32).unwrap(),
            Box::new(move |n| g_ref(k, k, n) as u64),
        ));
    }
    for k in 2..=4 {
        out.push((build_identity(k).unwrap(), Box::new(|n| n)));
    }
    out
}

pub fn sync_machines() -> Result<(), String> {
    let ms = machines();
    let strat = (0..ms.len(), 0u64..20_000, 0u64..3, 0usize..4);
    run(0x5eed_0008, strat, |(i, n, pick, extra)| {
        let (dfa, f) = &ms[i];
        let v = f(n);
        let m = match pick {
            0 => v,
            1 => v + 1 + n % 7,
            _ => n.wrapping_mul(2_654_435_761) % (2 * v + 8),
        };
        let (bn, bm) = (BigUint::from(n), BigUint::from(m));
        let plain = dfa.accepts(&bn, &bm);
        prop_assert_eq!(plain, m == v, "{} on ({}, {})", dfa.name(), n, m);
        let padded = dfa.accepts_word(&dfa.pair_word(&bn, &bm, extra)).unwrap();
        prop_assert_eq!(padded, plain);
        Ok(())
    })
}

fn sync_strategy() -> impl Strategy<Value = SyncDfa> {
    (2u32..=3, 1usize..=4).prop_flat_map(|(k, n)| {
        let cells = (k * k) as usize * n;
        (
            prop::collection::vec(prop::option::of(0..n), cells),
            prop::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(targets, acc)| {
                let mut d = SyncDfa::new("random", k, n).unwrap();
                for (q, &a) in acc.iter().enumerate() {
                    d.set_accepting(q, a);
                }
                for (i, t) in targets.iter().enumerate() {
                    if let Some(p) = *t {
                        let q = i / (k * k) as usize;
                        let d1 = (i % (k * k) as usize) as u32 / k;
                        let d2 = (i % (k * k) as usize) as u32 % k;
                        d.add(q, d1, d2, p).unwrap();
                    }
                }
                d
            })
    })
}

pub fn sync_round_trip() -> Result<(), String> {
    run(0x5eed_0009, sync_strategy(), |d| {
        let text = d.serialize();
        let back = SyncDfa::parse(&text)
            .map_err(|e| TestCaseError::fail(e.to_string()))?
            .with_name(d.name());
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(back.serialize(), text);
        Ok(())
    })
}

#[derive(Clone, Debug)]
pub struct FitCase {
    k: u32,
    r: u32,
    t: u32,
    lower: i64,
    width: i64,
    /// 0 periodic, 1 affine, 2 noise, 3 periodic with one late defect
    kind: u8,
    pattern: Vec<i64>,
    seed: u64,
}

fn fit_strategy() -> impl Strategy<Value = FitCase> {
    (
        2u32..=3,
        1u32..=3,
        -2i64..=1,
        1i64..=4,
        0u8..4,
        any::<u64>(),
    )
        .prop_flat_map(|(k, t, lower, width, kind, seed)| {
            let t = if k == 3 { t.min(2) } else { t };
            (0..t, prop::collection::vec(-3i64..=3, (k as usize).pow(2))).prop_map(
                move |(r, pattern)| FitCase {
                    k,
                    r,
                    t,
                    lower,
                    width,
                    kind,
                    pattern,
                    seed,
                },
            )
        })
}

pub fn fit_verify_soundness() -> Result<(), String> {
    run(0x5eed_000a, fit_strategy(), |c| {
        let gm = (c.k as i64).pow(c.r);
        let n0 = if c.lower < 0 {
            (-c.lower + gm - 1) / gm
        } else {
            0
        } as u64;
        let shape = SchemeShape::new(c.k, c.r, c.t, c.lower, c.lower + c.width, n0).unwrap();
        let pattern = c.pattern.clone();
        let (a, b) = (c.pattern[0] as i128, c.pattern[1] as i128);
        let seed = c.seed;
        let kind = c.kind;
        let train = (n0, n0 + c.width as u64 + 6);
        let defect = shape.table_len(train.1) as u64 + seed % 200;
        let f = move |n: u64| -> i128 {
            let periodic = pattern[(n % pattern.len() as u64) as usize] as i128;
            match kind {
                0 => periodic,
                1 => a * n as i128 + b,
                2 => hashed(seed, n, 3),
                _ => periodic + i128::from(n == defect),
            }
        };
        let o = oracle("table", f);
        let value = |i: u64| o.eval(i);
        match fit(&o, shape, train).map_err(|e| TestCaseError::fail(e.to_string()))? {
            FitOutcome::Fitted { scheme, .. } => {
                let holds = |n: u64, b: u64| {
                    let lhs = Rational::from_integer(value(shape.target_index(n, b)));
                    let rhs = (shape.lower..shape.upper).fold(
                        Rational::from_integer(0.into()),
                        |acc, a| {
                            acc + scheme.coeff(b, a)
                                * Rational::from_integer(value(shape.generator_index(n, a)))
                        },
                    );
                    lhs == rhs
                };
                for n in train.0..=train.1 {
                    for b in 0..shape.modulus() {
                        prop_assert!(holds(n, b), "fitted scheme fails on training n = {}", n);
                    }
                }
                let first = (n0..=120)
                    .flat_map(|n| (0..shape.modulus()).map(move |b| (n, b)))
                    .find(|&(n, b)| !holds(n, b));
                let cert = verify(&o, &scheme, 0..=120);
                match (&cert.outcome, first) {
                    (Outcome::Verified, None) => {}
                    (Outcome::Counterexample(Counterexample::Relation { n, b, .. }), Some(w)) => {
                        prop_assert_eq!((*n, *b), w);
                    }
                    (other, w) => {
                        return Err(TestCaseError::fail(format!(
                            "verify says {other:?}, independent check says {w:?}"
                        )))
                    }
                }
            }
            FitOutcome::NoSolution(ns) => {
                let b = ns.residue.expect("fit failures name a residue");
                prop_assert!(!ns.samples.is_empty());
                let rows: Vec<Vec<BigInt>> = ns
                    .samples
                    .iter()
                    .map(|&n| {
                        (shape.lower..shape.upper)
                            .map(|a| value(shape.generator_index(n, a)))
                            .collect()
                    })
                    .collect();
                let rhs: Vec<BigInt> = ns
                    .samples
                    .iter()
                    .map(|&n| value(shape.target_index(n, b)))
                    .collect();
                prop_assert!(ns.samples.iter().all(|n| (train.0..=train.1).contains(n)));
                prop_assert!(!consistent(&rows, &rhs));
            }
        }
        Ok(())
    })
}

fn scheme_strategy() -> impl Strategy<Value = RecursionScheme> {
    (2u32..=3, 1u32..=2, -3i64..=3, 1i64..=4).prop_flat_map(|(k, t, lower, width)| {
        (0..t).prop_flat_map(move |r| {
            let gm = (k as i64).pow(r);
            let n0 = if lower < 0 { (-lower + gm - 1) / gm } else { 0 } as u64;
            let shape = SchemeShape::new(k, r, t, lower, lower + width, n0).unwrap();
            let rows = (k as usize).pow(t);
            prop::collection::vec(
                prop::collection::vec((-9i64..=9, 1i64..=5), width as usize),
                rows,
            )
            .prop_map(move |cs| {
                let coeffs = cs
                    .into_iter()
                    .map(|row| row.into_iter().map(|(p, q)| ratio(p, q)).collect())
                    .collect();
                RecursionScheme::new(shape, coeffs).unwrap()
            })
        })
    })
}

pub fn scheme_round_trip() -> Result<(), String> {
    run(0x5eed_000b, scheme_strategy(), |s| {
        let json = serde_json::to_string(&s).unwrap();
        let back: RecursionScheme = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), json);
        Ok(())
    })
}
