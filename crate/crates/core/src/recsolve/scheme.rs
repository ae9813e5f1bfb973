use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::RecError;
use crate::ratlin::{fmt_rational, Rational, RationalPair};

/// The parameters of a recursion `f(k^t n + b) = Σ_{L<=a<U} c_a f(k^r n + a)`
/// for `n >= n0`, without coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SchemeShape {
    pub k: u32,
    pub r: u32,
    pub t: u32,
    pub lower: i64,
    pub upper: i64,
    pub n0: u64,
}

impl SchemeShape {
    pub fn new(k: u32, r: u32, t: u32, lower: i64, upper: i64, n0: u64) -> Result<Self, RecError> {
        let shape = SchemeShape {
            k,
            r,
            t,
            lower,
            upper,
            n0,
        };
        shape.validate()?;
        Ok(shape)
    }

    pub fn validate(&self) -> Result<(), RecError> {
        if self.k < 2 {
            return Err(RecError::param(format!("k must be >= 2, got {}", self.k)));
        }
        if self.r >= self.t {
            return Err(RecError::param(format!(
                "need r < t, got r={}, t={}",
                self.r, self.t
            )));
        }
        if self.lower >= self.upper {
            return Err(RecError::param(format!(
                "need L < U, got L={}, U={}",
                self.lower, self.upper
            )));
        }
        if self.t > 40 {
            return Err(RecError::param(format!("t = {} is too large", self.t)));
        }
        if (self.generator_modulus() as i128) * (self.n0 as i128) + (self.lower as i128) < 0 {
            return Err(RecError::param(format!(
                "k^r n0 + L = {}*{} + {} is negative; raise n0",
                self.generator_modulus(),
                self.n0,
                self.lower
            )));
        }
        Ok(())
    }

    /// `k^t`, the number of residues.
    pub fn modulus(&self) -> u64 {
        (self.k as u64).pow(self.t)
    }

    /// `k^r`.
    pub fn generator_modulus(&self) -> u64 {
        (self.k as u64).pow(self.r)
    }

    pub fn width(&self) -> usize {
        (self.upper - self.lower) as usize
    }

    /// `n0 = 0`, `L >= 0` and `U <= k^t`.
    pub fn is_strong(&self) -> bool {
        self.n0 == 0 && self.lower >= 0 && self.upper as i128 <= self.modulus() as i128
    }

    /// `k^t n + b`.
    pub fn target_index(&self, n: u64, b: u64) -> u64 {
        self.modulus() * n + b
    }

    /// `k^r n + a`; nonnegative for `n >= n0`.
    pub fn generator_index(&self, n: u64, a: i64) -> u64 {
        (self.generator_modulus() as i64 * n as i64 + a) as u64
    }

    /// Length of a value table covering every index used for `n <= n_max`.
    pub fn table_len(&self, n_max: u64) -> usize {
        let target = self.target_index(n_max, self.modulus() - 1);
        let gen = self.generator_index(n_max, self.upper - 1);
        target.max(gen) as usize + 1
    }
}

/// A recursion scheme with one coefficient vector per residue `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursionScheme {
    shape: SchemeShape,
    /// `coeffs[b][a - L]`
    coeffs: Vec<Vec<Rational>>,
}

impl RecursionScheme {
    pub fn new(shape: SchemeShape, coeffs: Vec<Vec<Rational>>) -> Result<Self, RecError> {
        shape.validate()?;
        if coeffs.len() as u64 != shape.modulus() {
            return Err(RecError::param(format!(
                "expected {} coefficient rows, got {}",
                shape.modulus(),
                coeffs.len()
            )));
        }
        if let Some((b, row)) = coeffs
            .iter()
            .enumerate()
            .find(|(_, r)| r.len() != shape.width())
        {
            return Err(RecError::param(format!(
                "row {b} has {} coefficients, expected {}",
                row.len(),
                shape.width()
            )));
        }
        Ok(RecursionScheme { shape, coeffs })
    }

    pub fn shape(&self) -> &SchemeShape {
        &self.shape
    }

    pub fn coeffs(&self) -> &[Vec<Rational>] {
        &self.coeffs
    }

    /// Coefficient of `f(k^r n + a)` in the relation for residue `b`.
    pub fn coeff(&self, b: u64, a: i64) -> &Rational {
        &self.coeffs[b as usize][(a - self.shape.lower) as usize]
    }

    pub fn set_coeff(&mut self, b: u64, a: i64, c: Rational) {
        self.coeffs[b as usize][(a - self.shape.lower) as usize] = c;
    }

    pub fn is_strong(&self) -> bool {
        self.shape.is_strong()
    }

    /// The relation for residue `b`, e.g. `f(16n+7) = 2 f(8n+4)`.
    pub fn relation(&self, b: u64) -> String {
        let s = &self.shape;
        let mut rhs = String::new();
        for (i, c) in self.coeffs[b as usize].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let a = s.lower + i as i64;
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if rhs.is_empty() {
                if c.is_negative() {
                    rhs.push('-');
                }
            } else {
                rhs.push_str(&format!(" {sign} "));
            }
            if !mag.is_one() {
                rhs.push_str(&fmt_rational(&mag));
                rhs.push(' ');
            }
            rhs.push_str(&affine("f", s.generator_modulus(), a));
        }
        if rhs.is_empty() {
            rhs.push('0');
        }
        format!("{} = {rhs}", affine("f", s.modulus(), b as i64))
    }
}

fn affine(f: &str, m: u64, a: i64) -> String {
    let head = if m == 1 {
        "n".to_string()
    } else {
        format!("{m}n")
    };
    match a.cmp(&0) {
        std::cmp::Ordering::Equal => format!("{f}({head})"),
        std::cmp::Ordering::Greater => format!("{f}({head}+{a})"),
        std::cmp::Ordering::Less => format!("{f}({head}{a})"),
    }
}

impl fmt::Display for RecursionScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in 0..self.shape.modulus() {
            writeln!(f, "{}", self.relation(b))?;
        }
        Ok(())
    }
}

struct CoeffMap<'a>(&'a [Vec<Rational>]);

impl Serialize for CoeffMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (b, row) in self.0.iter().enumerate() {
            let pairs: Vec<RationalPair> = row.iter().cloned().map(RationalPair).collect();
            map.serialize_entry(&b.to_string(), &pairs)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct SchemeOut<'a> {
    k: u32,
    r: u32,
    t: u32,
    #[serde(rename = "L")]
    lower: i64,
    #[serde(rename = "U")]
    upper: i64,
    n0: u64,
    strong: bool,
    coeffs: CoeffMap<'a>,
}

#[derive(Deserialize)]
struct SchemeIn {
    k: u32,
    r: u32,
    t: u32,
    #[serde(rename = "L")]
    lower: i64,
    #[serde(rename = "U")]
    upper: i64,
    n0: u64,
    coeffs: BTreeMap<String, Vec<RationalPair>>,
}

impl Serialize for RecursionScheme {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let sh = &self.shape;
        SchemeOut {
            k: sh.k,
            r: sh.r,
            t: sh.t,
            lower: sh.lower,
            upper: sh.upper,
            n0: sh.n0,
            strong: self.is_strong(),
            coeffs: CoeffMap(&self.coeffs),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RecursionScheme {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = SchemeIn::deserialize(d)?;
        let shape = SchemeShape::new(raw.k, raw.r, raw.t, raw.lower, raw.upper, raw.n0)
            .map_err(D::Error::custom)?;
        let mut rows = vec![None; shape.modulus() as usize];
        for (key, row) in raw.coeffs {
            let b: usize = key
                .parse()
                .ok()
                .filter(|&b| b < rows.len())
                .ok_or_else(|| D::Error::custom(format!("bad residue key {key:?}")))?;
            rows[b] = Some(row.into_iter().map(|p| p.0).collect());
        }
        let coeffs = rows
            .into_iter()
            .enumerate()
            .map(|(b, r)| r.ok_or_else(|| D::Error::custom(format!("missing residue {b}"))))
            .collect::<Result<Vec<_>, _>>()?;
        RecursionScheme::new(shape, coeffs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::rat;

    fn digit_sum_scheme() -> RecursionScheme {
        // s(4n+b) = (1 - s(b)) s(2n) + s(b) s(2n+1)
        let sb = [0, 1, 1, 2];
        let coeffs = sb.iter().map(|&s| vec![rat(1 - s), rat(s)]).collect();
        RecursionScheme::new(SchemeShape::new(2, 1, 2, 0, 2, 0).unwrap(), coeffs).unwrap()
    }

    #[test]
    fn shape_validation() {
        assert!(SchemeShape::new(2, 2, 2, 0, 1, 0).is_err());
        assert!(SchemeShape::new(2, 1, 2, 3, 3, 0).is_err());
        assert!(SchemeShape::new(1, 0, 1, 0, 1, 0).is_err());
        assert!(SchemeShape::new(2, 1, 2, -3, 1, 1).is_err());
        assert!(SchemeShape::new(2, 1, 2, -2, 1, 1).is_ok());
    }

    #[test]
    fn strongness() {
        assert!(SchemeShape::new(2, 1, 2, 0, 4, 0).unwrap().is_strong());
        assert!(!SchemeShape::new(2, 1, 2, 0, 5, 0).unwrap().is_strong());
        assert!(!SchemeShape::new(2, 1, 2, -1, 2, 1).unwrap().is_strong());
        assert!(!SchemeShape::new(2, 1, 2, 0, 2, 1).unwrap().is_strong());
    }

    #[test]
    fn relation_text() {
        let s = digit_sum_scheme();
        assert_eq!(s.relation(0), "f(4n) = f(2n)");
        assert_eq!(s.relation(3), "f(4n+3) = -f(2n) + 2 f(2n+1)");
        let mut neg = s.clone();
        neg.set_coeff(1, 0, rat(0));
        neg.set_coeff(1, 1, rat(0));
        assert_eq!(neg.relation(1), "f(4n+1) = 0");
    }

    #[test]
    fn json_round_trip() {
        let s = digit_sum_scheme();
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.starts_with(r#"{"k":2,"r":1,"t":2,"L":0,"U":2,"n0":0,"strong":true,"coeffs":{"0":[["1","1"],["0","1"]]"#));
        let back: RecursionScheme = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn json_rejects_gaps() {
        let bad = r#"{"k":2,"r":0,"t":1,"L":0,"U":1,"n0":0,"coeffs":{"0":[["1","1"]]}}"#;
        assert!(serde_json::from_str::<RecursionScheme>(bad).is_err());
    }
}
