//! Intersection arrays `{b_0, ..., b_{D-1}; c_1, ..., c_D}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Intersection array of a (putative) distance-regular graph of diameter `D`.
///
/// Only the structural conditions are enforced on construction (`D >= 1`,
/// positive entries, `c_1 = 1`); arithmetic feasibility is reported by
/// [`IntersectionArray::basic_feasibility`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntersectionArray {
    b: Vec<u64>,
    c: Vec<u64>,
}

/// First failing condition found by [`IntersectionArray::basic_feasibility`].
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum FeasibilityWitness {
    NegativeA {
        i: usize,
        a: i64,
    },
    NonIntegralK {
        i: usize,
        numerator: String,
        denominator: u64,
    },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FeasibilityReport {
    pub pass: bool,
    /// Subconstituent sizes `k_0 = 1, k_1 = k, ...`; filled only on success.
    #[serde(serialize_with = "crate::ser::bigints")]
    pub k: Vec<BigInt>,
    /// Number of vertices `sum k_i`; filled only on success.
    #[serde(serialize_with = "crate::ser::opt_bigint")]
    pub v: Option<BigInt>,
    pub witness: Option<FeasibilityWitness>,
    /// Non-fatal observations (monotonicity of `b_i`, `c_i`).
    pub warnings: Vec<String>,
}

impl IntersectionArray {
    pub fn new(b: Vec<u64>, c: Vec<u64>) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::input("diameter must be at least 1"));
        }
        if b.len() != c.len() {
            return Err(Error::input(format!(
                "{} b-entries but {} c-entries",
                b.len(),
                c.len()
            )));
        }
        if b.iter().chain(c.iter()).any(|&x| x == 0) {
            return Err(Error::input(
                "intersection numbers b_i (i < D) and c_i (i >= 1) must be positive",
            ));
        }
        if c[0] != 1 {
            return Err(Error::input(format!("c_1 must be 1, got {}", c[0])));
        }
        Ok(IntersectionArray { b, c })
    }

    pub fn diameter(&self) -> usize {
        self.b.len()
    }

    pub fn valency(&self) -> u64 {
        self.b[0]
    }

    /// `b_i` for `0 <= i <= D` (with `b_D = 0`).
    pub fn b(&self, i: usize) -> u64 {
        self.b.get(i).copied().unwrap_or(0)
    }

    /// `c_i` for `0 <= i <= D` (with `c_0 = 0`).
    pub fn c(&self, i: usize) -> u64 {
        if i == 0 {
            0
        } else {
            self.c[i - 1]
        }
    }

    /// `a_i = k - b_i - c_i`, possibly negative for infeasible arrays.
    pub fn a(&self, i: usize) -> i64 {
        if i == 0 {
            return 0;
        }
        self.valency() as i64 - self.b(i) as i64 - self.c(i) as i64
    }

    pub fn b_seq(&self) -> &[u64] {
        &self.b
    }

    pub fn c_seq(&self) -> &[u64] {
        &self.c
    }

    pub fn is_bipartite(&self) -> bool {
        (1..=self.diameter()).all(|i| self.a(i) == 0)
    }

    pub fn basic_feasibility(&self) -> FeasibilityReport {
        let d = self.diameter();
        let mut warnings = Vec::new();
        for i in 1..=d {
            let a = self.a(i);
            if a < 0 {
                return FeasibilityReport {
                    pass: false,
                    k: Vec::new(),
                    v: None,
                    witness: Some(FeasibilityWitness::NegativeA { i, a }),
                    warnings,
                };
            }
        }
        for i in 1..d {
            if self.c(i + 1) < self.c(i) {
                warnings.push(format!("c_{} < c_{}", i + 1, i));
            }
            if self.b(i) > self.b(i - 1) {
                warnings.push(format!("b_{} > b_{}", i, i - 1));
            }
        }
        let mut ks = vec![BigInt::from(1u32)];
        for i in 1..=d {
            let num = &ks[i - 1] * BigInt::from(self.b(i - 1));
            let den = BigInt::from(self.c(i));
            let (q, r) = num.div_rem(&den);
            if r != BigInt::from(0) {
                return FeasibilityReport {
                    pass: false,
                    k: Vec::new(),
                    v: None,
                    witness: Some(FeasibilityWitness::NonIntegralK {
                        i,
                        numerator: num.to_string(),
                        denominator: self.c(i),
                    }),
                    warnings,
                };
            }
            ks.push(q);
        }
        let v = ks.iter().sum();
        FeasibilityReport {
            pass: true,
            k: ks,
            v: Some(v),
            witness: None,
            warnings,
        }
    }

    /// Array of the antipodal quotient, derived from this (antipodal) array.
    ///
    /// For parent diameter `2m` the folded graph has `c_m` replaced by
    /// `c_m + b_m`; for parent diameter `2m + 1` the array is truncated at `m`
    /// (the lost `b_m` moves into `a_m`).
    pub fn folded(&self) -> Result<IntersectionArray> {
        let d = self.diameter();
        if d < 2 {
            return Err(Error::input("folding needs diameter at least 2"));
        }
        let m = d / 2;
        let b = self.b[..m].to_vec();
        let mut c = self.c[..m].to_vec();
        if d.is_multiple_of(2) {
            c[m - 1] += self.b(m);
        }
        IntersectionArray::new(b, c)
    }
}

impl fmt::Display for IntersectionArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{};{}", join(&self.b), join(&self.c))
    }
}

impl FromStr for IntersectionArray {
    type Err = Error;

    /// Parses `"b0,b1,...,b_{D-1};c1,...,cD"`; whitespace is ignored and
    /// braces are tolerated.
    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s
            .chars()
            .filter(|ch| !ch.is_whitespace() && *ch != '{' && *ch != '}')
            .collect();
        let (bs, cs) = cleaned
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("missing ';' in intersection array {s:?}")))?;
        let parse = |part: &str| -> Result<Vec<u64>> {
            part.split(',')
                .map(|t| {
                    t.parse::<u64>().map_err(|_| {
                        Error::Parse(format!("bad intersection number {t:?} in {s:?}"))
                    })
                })
                .collect()
        };
        IntersectionArray::new(parse(bs)?, parse(cs)?)
    }
}

impl Serialize for IntersectionArray {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ia(s: &str) -> IntersectionArray {
        s.parse().unwrap()
    }

    #[test]
    fn johnson_10_5_feasibility() {
        let rep = ia("25,16,9,4,1;1,4,9,16,25").basic_feasibility();
        assert!(rep.pass);
        let ks: Vec<u64> = rep.k.iter().map(|k| k.try_into().unwrap()).collect();
        assert_eq!(ks, vec![1, 25, 100, 100, 25, 1]);
        assert_eq!(rep.v, Some(BigInt::from(252)));
    }

    #[test]
    fn four_cycle_passes() {
        let rep = ia("2,1;1,2").basic_feasibility();
        assert!(rep.pass);
        assert_eq!(rep.v, Some(BigInt::from(4)));
    }

    #[test]
    fn negative_a1_is_reported() {
        let rep = ia("2,2;1,1").basic_feasibility();
        assert!(!rep.pass);
        assert_eq!(
            rep.witness,
            Some(FeasibilityWitness::NegativeA { i: 1, a: -1 })
        );
    }

    #[test]
    fn non_integral_subconstituent() {
        let rep = ia("5,4;1,3").basic_feasibility();
        assert!(!rep.pass);
        assert!(matches!(
            rep.witness,
            Some(FeasibilityWitness::NonIntegralK { i: 2, .. })
        ));
    }

    #[test]
    fn parse_tolerates_spaces_and_braces() {
        assert_eq!(ia(" {3, 2 ; 1, 1} "), ia("3,2;1,1"));
        assert!("3,2;2,1".parse::<IntersectionArray>().is_err());
        assert!("3,2,1".parse::<IntersectionArray>().is_err());
        assert!("3,x;1,1".parse::<IntersectionArray>().is_err());
        assert!("3,2;1".parse::<IntersectionArray>().is_err());
    }

    #[test]
    fn fold_rule() {
        // J(12,6) -> folded J(12,6)
        assert_eq!(
            ia("36,25,16,9,4,1;1,4,9,16,25,36").folded().unwrap(),
            ia("36,25,16;1,4,18")
        );
        // 4-cube -> folded 4-cube
        assert_eq!(ia("4,3,2,1;1,2,3,4").folded().unwrap(), ia("4,3;1,4"));
        // C6 -> K3
        assert_eq!(ia("2,1,1;1,1,2").folded().unwrap(), ia("2;1"));
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(b in proptest::collection::vec(1u64..100, 1..8), tail in proptest::collection::vec(1u64..100, 0..7)) {
            let d = b.len();
            let mut c = vec![1u64];
            c.extend(tail.into_iter().take(d - 1));
            while c.len() < d { c.push(1); }
            let arr = IntersectionArray::new(b, c).unwrap();
            prop_assert_eq!(arr.to_string().parse::<IntersectionArray>().unwrap(), arr);
        }
    }
}
