//! Factor complexity of the Thue-Morse word by counting windows.
//!
//! Distinct factors of a finite prefix are counted for every length at once
//! with a suffix automaton: each state contributes one factor to every
//! length in `(len(link), len]`. The prefix is doubled until the counts
//! for all requested lengths agree across one doubling.

use std::sync::Mutex;

use num_bigint::BigInt;

use super::{tm, SequenceOracle};

const NONE: u32 = u32::MAX;

struct SuffixAutomaton {
    len: Vec<u32>,
    link: Vec<u32>,
    next: Vec<[u32; 2]>,
    last: u32,
}

impl SuffixAutomaton {
    fn with_capacity(n: usize) -> Self {
        let mut sa = SuffixAutomaton {
            len: Vec::with_capacity(2 * n + 1),
            link: Vec::with_capacity(2 * n + 1),
            next: Vec::with_capacity(2 * n + 1),
            last: 0,
        };
        sa.push_state(0, NONE, [NONE; 2]);
        sa
    }

    fn push_state(&mut self, len: u32, link: u32, next: [u32; 2]) -> u32 {
        self.len.push(len);
        self.link.push(link);
        self.next.push(next);
        (self.len.len() - 1) as u32
    }

    fn extend(&mut self, c: usize) {
        let cur = self.push_state(self.len[self.last as usize] + 1, NONE, [NONE; 2]);
        let mut p = self.last;
        while p != NONE && self.next[p as usize][c] == NONE {
            self.next[p as usize][c] = cur;
            p = self.link[p as usize];
        }
        if p == NONE {
            self.link[cur as usize] = 0;
        } else {
            let q = self.next[p as usize][c];
            if self.len[p as usize] + 1 == self.len[q as usize] {
                self.link[cur as usize] = q;
            } else {
                let clone = self.push_state(
                    self.len[p as usize] + 1,
                    self.link[q as usize],
                    self.next[q as usize],
                );
                while p != NONE && self.next[p as usize][c] == q {
                    self.next[p as usize][c] = clone;
                    p = self.link[p as usize];
                }
                self.link[q as usize] = clone;
                self.link[cur as usize] = clone;
            }
        }
        self.last = cur;
    }
}

/// Number of distinct factors of `word` of each length `0..=max_len`.
pub fn factor_counts(word: &[u8], max_len: usize) -> Vec<u64> {
    let mut sa = SuffixAutomaton::with_capacity(word.len());
    for &c in word {
        sa.extend(c as usize);
    }
    let mut diff = vec![0i64; max_len + 2];
    for v in 1..sa.len.len() {
        let lo = sa.len[sa.link[v] as usize] as usize + 1;
        let hi = (sa.len[v] as usize).min(max_len);
        if lo <= hi {
            diff[lo] += 1;
            diff[hi + 1] -= 1;
        }
    }
    let mut out = Vec::with_capacity(max_len + 1);
    let mut acc = 0i64;
    for (n, d) in diff.iter().take(max_len + 1).enumerate() {
        acc += d;
        // the empty word is the unique factor of length zero
        out.push(if n == 0 { 1 } else { acc as u64 });
    }
    out
}

fn thue_morse_prefix(len: usize) -> Vec<u8> {
    (0..len as u64).map(tm).collect()
}

/// `f_t(n)` for all `n <= max_n`, from a prefix of length `C * max_n` with
/// `C` doubling from 16 until the table is stable.
pub fn tm_factor_table(max_n: usize) -> Vec<u64> {
    let scale = max_n.max(4);
    let mut c = 16;
    let mut prev = factor_counts(&thue_morse_prefix(c * scale), max_n);
    loop {
        c *= 2;
        let cur = factor_counts(&thue_morse_prefix(c * scale), max_n);
        if cur == prev {
            return cur;
        }
        prev = cur;
    }
}

/// Number of distinct length-`n` factors of the Thue-Morse word.
pub fn tm_factor_complexity(n: u64) -> BigInt {
    BigInt::from(tm_factor_table(n as usize)[n as usize])
}

/// Thue-Morse factor complexity with a cache of the largest table computed.
#[derive(Default)]
pub struct TmFactorComplexity {
    cache: Mutex<Vec<u64>>,
}

impl TmFactorComplexity {
    fn ensure(&self, len: usize) -> std::sync::MutexGuard<'_, Vec<u64>> {
        let mut cache = self.cache.lock().expect("cache lock");
        if cache.len() < len {
            // grow geometrically so repeated single evaluations stay cheap
            let target = len.max(2 * cache.len());
            *cache = tm_factor_table(target.saturating_sub(1));
        }
        cache
    }
}

impl SequenceOracle for TmFactorComplexity {
    fn name(&self) -> String {
        "tmfc".into()
    }

    fn eval(&self, n: u64) -> BigInt {
        BigInt::from(self.ensure(n as usize + 1)[n as usize])
    }

    fn table(&self, len: usize) -> Vec<BigInt> {
        self.ensure(len)[..len]
            .iter()
            .map(|&v| BigInt::from(v))
            .collect()
    }
}
