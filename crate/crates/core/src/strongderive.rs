//! Subsequence equalities `f(k^t n + b) = f(k^r n + a)` read off an
//! lsd-first automaton.
//!
//! Reading `k^t n + b` least significant digit first means reading the
//! `t`-digit padded word of `b` and then the digits of `n`. If `S_t`, the
//! set of states reachable by words of length `t`, is contained in `S_r`,
//! every such `b` lands in a state that some `r`-digit `a` also reaches,
//! and from there the two computations coincide. For `n = 0` the padded
//! and unpadded words must agree, so the automaton has to be
//! zero-invariant ([`Dfao::is_zero_invariant`]).

use std::collections::{BTreeMap, BTreeSet};

use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::corpus::SequenceOracle;
use crate::dfao::{lsd_digits_u64, Dfao, DigitOrder};
use crate::ratlin::rat;
use crate::recsolve::{first_failure, Certificate, Claim, Outcome, RecursionScheme, SchemeShape};

/// Largest `k^t` accepted, so that mappings stay tabulable.
pub const MAX_MODULUS: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DeriveError {
    #[error("automaton reads digits msd first; strong derivation needs lsd first")]
    DigitOrder,
    #[error(
        "S_{t} is not contained in S_{r}: state {state} is reachable in {t} steps but not in {r}"
    )]
    NotContained { r: u32, t: u32, state: usize },
    #[error("outputs change under zero padding; f(b) = f(a) at n = 0 is not guaranteed")]
    NotZeroInvariant,
    #[error("k^t = {k}^{t} exceeds the supported modulus")]
    TooLarge { k: u32, t: u32 },
    #[error("invalid mapping: {0}")]
    Invalid(String),
}

/// `f(k^t n + b) = f(k^r n + map[b])` for all `n >= 0` and `0 <= b < k^t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsequenceMapping {
    k: u32,
    r: u32,
    t: u32,
    map: Vec<u64>,
}

impl SubsequenceMapping {
    pub fn new(k: u32, r: u32, t: u32, map: Vec<u64>) -> Result<Self, DeriveError> {
        if k < 2 || r >= t {
            return Err(DeriveError::Invalid(format!(
                "need k >= 2 and r < t, got k={k}, r={r}, t={t}"
            )));
        }
        let modulus = modulus(k, t)?;
        let gm = (k as u64).pow(r);
        if map.len() as u64 != modulus {
            return Err(DeriveError::Invalid(format!(
                "map has {} entries, expected k^t = {modulus}",
                map.len()
            )));
        }
        if let Some((b, a)) = map.iter().enumerate().find(|(_, &a)| a >= gm) {
            return Err(DeriveError::Invalid(format!(
                "map[{b}] = {a} is not below k^r = {gm}"
            )));
        }
        Ok(SubsequenceMapping { k, r, t, map })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn map(&self) -> &[u64] {
        &self.map
    }

    pub fn image(&self, b: u64) -> u64 {
        self.map[b as usize]
    }
}

impl Serialize for SubsequenceMapping {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Entries<'a>(&'a [u64]);
        impl Serialize for Entries<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (b, a) in self.0.iter().enumerate() {
                    m.serialize_entry(&b.to_string(), a)?;
                }
                m.end()
            }
        }
        #[derive(Serialize)]
        struct Repr<'a> {
            k: u32,
            r: u32,
            t: u32,
            map: Entries<'a>,
        }
        Repr {
            k: self.k,
            r: self.r,
            t: self.t,
            map: Entries(&self.map),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SubsequenceMapping {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            k: u32,
            r: u32,
            t: u32,
            map: BTreeMap<String, u64>,
        }
        let repr = Repr::deserialize(d)?;
        let mut entries = BTreeMap::new();
        for (key, a) in repr.map {
            let b: u64 = key
                .parse()
                .map_err(|_| D::Error::custom(format!("bad residue {key:?}")))?;
            entries.insert(b, a);
        }
        if entries.keys().copied().ne(0..entries.len() as u64) {
            return Err(D::Error::custom("map must cover 0..k^t without gaps"));
        }
        SubsequenceMapping::new(repr.k, repr.r, repr.t, entries.into_values().collect())
            .map_err(D::Error::custom)
    }
}

fn modulus(k: u32, t: u32) -> Result<u64, DeriveError> {
    (k as u64)
        .checked_pow(t)
        .filter(|&m| m <= MAX_MODULUS)
        .ok_or(DeriveError::TooLarge { k, t })
}

/// Smallest `t`, then smallest `r < t`, with `S_t ⊆ S_r`.
///
/// Only `2^|Q|` distinct sets exist, so `t <= 2^|Q|`; in practice the
/// sequence of reach sets cycles much sooner.
pub fn find_rt(dfao: &Dfao) -> Result<(u32, u32), DeriveError> {
    if dfao.digit_order() != DigitOrder::Lsd {
        return Err(DeriveError::DigitOrder);
    }
    let mut seen: Vec<BTreeSet<usize>> = vec![BTreeSet::from([dfao.initial()])];
    loop {
        let next = dfao.image(seen.last().expect("nonempty"));
        let t = seen.len() as u32;
        if let Some(r) = seen.iter().position(|s| next.is_subset(s)) {
            return Ok((r as u32, t));
        }
        seen.push(next);
    }
}

fn padded_state(dfao: &Dfao, x: u64, len: u32) -> usize {
    let mut digits = lsd_digits_u64(x, dfao.base());
    digits.resize(len as usize, 0);
    dfao.run(digits)
}

/// The mapping `b ↦ a` where `a` is the smallest `r`-digit word reaching
/// the same state as the `t`-digit word of `b`.
pub fn derive_mapping(dfao: &Dfao, r: u32, t: u32) -> Result<SubsequenceMapping, DeriveError> {
    if dfao.digit_order() != DigitOrder::Lsd {
        return Err(DeriveError::DigitOrder);
    }
    if r >= t {
        return Err(DeriveError::Invalid(format!(
            "need r < t, got r={r}, t={t}"
        )));
    }
    if !dfao.is_zero_invariant() {
        return Err(DeriveError::NotZeroInvariant);
    }
    let k = dfao.base();
    let modulus = modulus(k, t)?;
    let gm = (k as u64).pow(r);

    let mut first_a: BTreeMap<usize, u64> = BTreeMap::new();
    for a in 0..gm {
        first_a.entry(padded_state(dfao, a, r)).or_insert(a);
    }
    let mut map = Vec::with_capacity(modulus as usize);
    for b in 0..modulus {
        let q = padded_state(dfao, b, t);
        match first_a.get(&q) {
            Some(&a) => map.push(a),
            None => return Err(DeriveError::NotContained { r, t, state: q }),
        }
    }
    SubsequenceMapping::new(k, r, t, map)
}

/// [`find_rt`] followed by [`derive_mapping`].
pub fn derive(dfao: &Dfao) -> Result<SubsequenceMapping, DeriveError> {
    let (r, t) = find_rt(dfao)?;
    derive_mapping(dfao, r, t)
}

/// The strong scheme with a single unit coefficient per residue, over the
/// window `[0, k^r)`.
pub fn mapping_to_scheme(mapping: &SubsequenceMapping) -> RecursionScheme {
    let gm = (mapping.k as u64).pow(mapping.r);
    let shape = SchemeShape::new(mapping.k, mapping.r, mapping.t, 0, gm as i64, 0)
        .expect("mapping shape is valid");
    let coeffs = mapping
        .map
        .iter()
        .map(|&a| (0..gm).map(|i| rat(u32::from(i == a))).collect())
        .collect();
    RecursionScheme::new(shape, coeffs).expect("one row per residue")
}

/// Checks every equality of the mapping for `0 <= n <= n_max`.
pub fn verify_mapping<O: SequenceOracle + ?Sized>(
    oracle: &O,
    mapping: &SubsequenceMapping,
    n_max: u64,
    jobs: usize,
) -> Certificate {
    let scheme = mapping_to_scheme(mapping);
    let values = oracle.table(scheme.shape().table_len(n_max));
    let claim = Claim::Mapping {
        oracle: oracle.name(),
        k: mapping.k,
        r: mapping.r,
        t: mapping.t,
    };
    let outcome = match first_failure(&values, &scheme, 0, n_max, jobs) {
        Some(cx) => Outcome::Counterexample(cx),
        None => Outcome::Verified,
    };
    Certificate::new(claim, outcome).with_range(0, n_max)
}
