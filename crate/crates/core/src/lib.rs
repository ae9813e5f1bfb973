//! Exact tools for automatic, regular, synchronized and (strongly)
//! `k`-recursive integer sequences.
//!
//! * [`ratlin`]: exact rationals and a linear solver with inconsistency
//!   witnesses.
//! * [`dfao`]: automata with output over base-`k` digits.
//! * [`corpus`]: the built-in sequences.
//! * [`recsolve`]: fitting, verifying, searching and refuting recursion
//!   schemes `f(k^t n + b) = Σ c_a f(k^r n + a)`.
//! * [`strongderive`]: subsequence equalities read off an automaton.
//! * [`syncverify`]: two-track automata for the graph of a sequence.
//! * [`report`]: per-class evidence for a built-in sequence.

pub mod corpus;
pub mod dfao;
mod par;
pub mod ratlin;
pub mod recsolve;
pub mod report;
pub mod strongderive;
pub mod syncverify;
