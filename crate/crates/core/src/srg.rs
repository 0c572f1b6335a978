//! Strongly regular parameters: eigenvalues, recognition of the standard
//! parameter families, the Sims trichotomy and the mu- and claw bounds.
//!
//! Recognition works on parameters only; a parameter match does not certify
//! that a graph is isomorphic to the named construction.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::bounds::{claw_f, mu_bound, srg_bounds};
use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::scalar::{ExactScalar, QuadSurd};

/// `(v, k, lambda, mu)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SrgParams {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
}

impl SrgParams {
    /// Checks `k(k - lambda - 1) = (v - k - 1) mu`, `lambda < k` and `mu <= k`.
    pub fn new(v: u64, k: u64, lambda: u64, mu: u64) -> Result<Self> {
        if k >= v {
            return Err(Error::input(format!(
                "valency {k} must be below the order {v}"
            )));
        }
        if k > 0 && lambda >= k {
            return Err(Error::input(format!(
                "lambda = {lambda} must be below k = {k}"
            )));
        }
        if mu > k {
            return Err(Error::input(format!("mu = {mu} exceeds k = {k}")));
        }
        let lhs = k as u128 * (k as u128 - lambda.min(k) as u128 - u128::from(k > 0));
        let rhs = (v - k - 1) as u128 * mu as u128;
        if lhs != rhs {
            return Err(Error::input(format!(
                "k(k-lambda-1) = {lhs} differs from (v-k-1)mu = {rhs} for ({v},{k},{lambda},{mu})"
            )));
        }
        Ok(SrgParams { v, k, lambda, mu })
    }

    pub fn is_primitive(&self) -> bool {
        self.mu > 0 && self.mu < self.k
    }
}

impl fmt::Display for SrgParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.v, self.k, self.lambda, self.mu)
    }
}

impl FromStr for SrgParams {
    type Err = Error;

    /// `"v,k,lambda,mu"`, parentheses and spaces tolerated.
    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '(' && *c != ')')
            .collect();
        let parts: Vec<u64> = cleaned
            .split(',')
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad SRG parameter {t:?} in {s:?}")))
            })
            .collect::<Result<_>>()?;
        if parts.len() != 4 {
            return Err(Error::Parse(format!(
                "expected four SRG parameters, got {}",
                parts.len()
            )));
        }
        SrgParams::new(parts[0], parts[1], parts[2], parts[3])
    }
}

/// Restricted eigenvalues `r > s` and, when integral, `m = -s`, `n = r - s`.
#[derive(Clone, Debug, Serialize)]
pub struct SrgEigen {
    pub r: ExactScalar,
    pub s: ExactScalar,
    #[serde(serialize_with = "crate::ser::opt_bigint")]
    pub m: Option<BigInt>,
    #[serde(serialize_with = "crate::ser::opt_bigint")]
    pub n: Option<BigInt>,
    /// `mu = 0`: a disjoint union of cliques; the eigenvalue relations are skipped.
    pub degenerate: bool,
}

/// Roots of `x^2 - (lambda - mu) x - (k - mu)`, checked against
/// `v = (k-r)(k-s)/mu`, `k = mu - rs` and `lambda = mu + r + s` when `mu > 0`.
pub fn srg_eigenvalues(p: &SrgParams) -> Result<SrgEigen> {
    let t = BigInt::from(p.lambda) - BigInt::from(p.mu);
    let disc = &t * &t + BigInt::from(4) * (BigInt::from(p.k) - BigInt::from(p.mu));
    let two = BigInt::from(2);
    let r = QuadSurd::new(t.clone(), BigInt::one(), disc.clone(), two.clone())?;
    let s = QuadSurd::new(t, -BigInt::one(), disc, two)?;
    let degenerate = p.mu == 0;
    if !degenerate {
        let int = |x: u64| ExactScalar::from_bigint(BigInt::from(x));
        let (k, mu) = (int(p.k), int(p.mu));
        let v = k.sub(&r)?.mul(&k.sub(&s)?)?.div(&mu)?;
        let k_back = mu.sub(&r.mul(&s)?)?;
        let l_back = mu.add(&r)?.add(&s)?;
        if !v.eq_exact(&int(p.v))? || !k_back.eq_exact(&k)? || !l_back.eq_exact(&int(p.lambda))? {
            return Err(Error::Internal(format!(
                "eigenvalue relations fail for {p}"
            )));
        }
    }
    let (m, n) = match (r.as_integer(), s.as_integer()) {
        (Some(ri), Some(si)) => (Some(-si.clone()), Some(ri - si)),
        _ => (None, None),
    };
    Ok(SrgEigen {
        r,
        s,
        m,
        n,
        degenerate,
    })
}

/// Common-neighbour counts, if constant over adjacent and over non-adjacent pairs.
pub fn srg_from_graph(g: &Graph) -> Option<SrgParams> {
    let n = g.n();
    let k = g.regular_degree()?;
    if n < 2 {
        return None;
    }
    let mut lambda = None;
    let mut mu = None;
    for x in 0..n as u32 {
        for y in x + 1..n as u32 {
            let common = match (g.bitset_row(x), g.bitset_row(y)) {
                (Some(a), Some(b)) => a
                    .iter()
                    .zip(b)
                    .map(|(p, q)| (p & q).count_ones() as u64)
                    .sum(),
                _ => crate::graphs::common_neighbors(g, x, y).len() as u64,
            };
            let slot = if g.adjacent(x, y) {
                &mut lambda
            } else {
                &mut mu
            };
            if *slot.get_or_insert(common) != common {
                return None;
            }
        }
    }
    SrgParams::new(n as u64, k as u64, lambda.unwrap_or(0), mu.unwrap_or(0)).ok()
}

/// Parameter families a set of SRG parameters can belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum SrgFamilyTag {
    /// `(4mu+1, 2mu, mu-1, mu)`.
    Conference { mu: u64 },
    /// `K_{t x m}`: `(tm, (t-1)m, (t-2)m, (t-1)m)`.
    CompleteMultipartite { t: u64, m: u64 },
    /// `LS_m(n)`: `(n^2, m(n-1), (m-1)(m-2)+n-2, m(m-1))`.
    LatinSquare { m: u64, n: u64 },
    /// `S_m(n)`, the block graph of `S(2, m, mn+m-n)`.
    SteinerGraph { m: u64, n: u64 },
    /// Block graph of a Steiner system `S(2, m, n)`.
    SteinerSystemBlockGraph { m: u64, n: u64 },
}

impl fmt::Display for SrgFamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SrgFamilyTag::Conference { mu } => write!(f, "Conference({mu})"),
            SrgFamilyTag::CompleteMultipartite { t, m } => {
                write!(f, "CompleteMultipartite({t},{m})")
            }
            SrgFamilyTag::LatinSquare { m, n } => write!(f, "LatinSquare({m},{n})"),
            SrgFamilyTag::SteinerGraph { m, n } => write!(f, "SteinerGraph({m},{n})"),
            SrgFamilyTag::SteinerSystemBlockGraph { m, n } => {
                write!(f, "SteinerSystemBlockGraph({m},{n})")
            }
        }
    }
}

pub fn latin_square_params(m: u64, n: u64) -> Option<(u64, u64, u64, u64)> {
    Some((
        n * n,
        m * (n.checked_sub(1)?),
        (m - 1) * (m.checked_sub(2)?) + n.checked_sub(2)?,
        m * (m - 1),
    ))
}

pub fn steiner_graph_params(m: u64, n: u64) -> Option<(u64, u64, u64, u64)> {
    let num = (m + n * (m - 1)) * (n + 1);
    num.is_multiple_of(m).then(|| (num / m, m * n, m * m - 2 * m + n, m * m))
}

pub fn block_graph_params(m: u64, n: u64) -> Option<(u64, u64, u64, u64)> {
    if m < 2 || n <= m {
        return None;
    }
    let (vn, vd) = (n * (n - 1), m * (m - 1));
    let (kn, kd) = (m * (n - m), m - 1);
    if vn % vd != 0 || kn % kd != 0 || !(n - 1).is_multiple_of(m - 1) {
        return None;
    }
    Some((
        vn / vd,
        kn / kd,
        (m - 1) * (m - 1) + (n - 1) / (m - 1) - 2,
        m * m,
    ))
}

/// Every family parameterization matching `p` exactly.
pub fn recognize_srg_family(p: &SrgParams) -> Vec<SrgFamilyTag> {
    let mut tags = Vec::new();
    let tuple = (p.v, p.k, p.lambda, p.mu);
    if p.mu >= 1 && tuple == (4 * p.mu + 1, 2 * p.mu, p.mu - 1, p.mu) {
        tags.push(SrgFamilyTag::Conference { mu: p.mu });
    }
    let m = p.v - p.k;
    if m >= 1 && p.v.is_multiple_of(m) {
        let t = p.v / m;
        if t >= 2 && tuple == (t * m, (t - 1) * m, (t - 2) * m, (t - 1) * m) {
            tags.push(SrgFamilyTag::CompleteMultipartite { t, m });
        }
    }
    let n = p.v.sqrt();
    if n * n == p.v && n >= 2 && p.k.is_multiple_of(n - 1) {
        let m = p.k / (n - 1);
        if (2..=n).contains(&m) && latin_square_params(m, n) == Some(tuple) {
            tags.push(SrgFamilyTag::LatinSquare { m, n });
        }
    }
    let m = p.mu.sqrt();
    if m >= 2 && m * m == p.mu && p.k.is_multiple_of(m) {
        let n = p.k / m;
        if n >= 1 && steiner_graph_params(m, n) == Some(tuple) {
            tags.push(SrgFamilyTag::SteinerGraph { m, n });
        }
        if (p.k * (m - 1)).is_multiple_of(m) {
            let pts = p.k * (m - 1) / m + m;
            if block_graph_params(m, pts) == Some(tuple) {
                tags.push(SrgFamilyTag::SteinerSystemBlockGraph { m, n: pts });
            }
        }
    }
    tags
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SimsBranch {
    CompleteMultipartite,
    LatinSquare,
    Steiner,
    Sporadic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimsOutcome {
    pub branch: SimsBranch,
    pub m: u64,
    pub n: u64,
    /// Vertex bound for the sporadic branch.
    #[serde(serialize_with = "crate::ser::opt_bigint")]
    pub phi: Option<BigInt>,
    /// `v <= phi(m)`, reported for the sporadic branch.
    pub within_phi: Option<bool>,
}

fn integral_m_n(p: &SrgParams) -> Result<(u64, u64)> {
    let e = srg_eigenvalues(p)?;
    let (Some(m), Some(n)) = (e.m, e.n) else {
        return Err(Error::precondition(format!(
            "{p} has non-integral eigenvalues (conference case)"
        )));
    };
    let m: u64 = m
        .try_into()
        .map_err(|_| Error::precondition(format!("{p}: smallest eigenvalue is not negative")))?;
    if m < 2 {
        return Err(Error::precondition(format!(
            "{p}: smallest eigenvalue -{m} is above -2"
        )));
    }
    Ok((m, n.try_into().expect("n = r - s is positive")))
}

/// Places `p` in the complete multipartite, Latin square, Steiner or
/// sporadic branch, checking `v <= phi(m)` in the last case.
pub fn sims_classify(p: &SrgParams) -> Result<SimsOutcome> {
    let (m, n) = integral_m_n(p)?;
    let tags = recognize_srg_family(p);
    let branch = if tags
        .iter()
        .any(|t| matches!(t, SrgFamilyTag::CompleteMultipartite { m: cm, .. } if *cm == m))
    {
        SimsBranch::CompleteMultipartite
    } else if tags
        .iter()
        .any(|t| matches!(t, SrgFamilyTag::LatinSquare { m: lm, .. } if *lm == m))
    {
        SimsBranch::LatinSquare
    } else if tags
        .iter()
        .any(|t| matches!(t, SrgFamilyTag::SteinerGraph { m: sm, .. } if *sm == m))
    {
        SimsBranch::Steiner
    } else {
        SimsBranch::Sporadic
    };
    let (phi, within_phi) = if branch == SimsBranch::Sporadic {
        let phi = srg_bounds(&BigInt::from(m), &BigInt::from(p.mu.max(1)))?.phi;
        let within = BigInt::from(p.v) <= phi;
        (Some(phi), Some(within))
    } else {
        (None, None)
    };
    Ok(SimsOutcome {
        branch,
        m,
        n,
        phi,
        within_phi,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ClawVerdict {
    Holds,
    Violated,
    /// `mu = m(m-1)` or `mu = m^2`: the bound does not apply.
    Exempt {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsCheck {
    pub m: u64,
    pub n: u64,
    #[serde(serialize_with = "crate::ser::bigint")]
    pub mu_bound: BigInt,
    pub mu_bound_ok: bool,
    #[serde(serialize_with = "crate::ser::rational")]
    pub claw_f: BigRational,
    pub claw: ClawVerdict,
}

impl BoundsCheck {
    pub fn all_ok(&self) -> bool {
        self.mu_bound_ok && self.claw != ClawVerdict::Violated
    }
}

/// mu-bound and claw bound for a primitive `p` with integral `s = -m <= -2`.
pub fn check_bounds(p: &SrgParams) -> Result<BoundsCheck> {
    if !p.is_primitive() {
        return Err(Error::precondition(format!("{p} is not primitive")));
    }
    let (m, n) = integral_m_n(p)?;
    let (mb, mi) = (BigInt::from(m), BigInt::from(p.mu));
    let bound = mu_bound(&mb);
    let f = claw_f(&mb, &mi);
    let claw = if p.mu == m * (m - 1) {
        ClawVerdict::Exempt {
            reason: "mu = m(m-1)".into(),
        }
    } else if p.mu == m * m {
        ClawVerdict::Exempt {
            reason: "mu = m^2".into(),
        }
    } else if BigRational::from_integer(BigInt::from(n)) <= f {
        ClawVerdict::Holds
    } else {
        ClawVerdict::Violated
    };
    Ok(BoundsCheck {
        m,
        n,
        mu_bound_ok: mi <= bound,
        mu_bound: bound,
        claw_f: f,
        claw,
    })
}

impl SrgEigen {
    /// Smallest eigenvalue is integral.
    pub fn integral(&self) -> bool {
        self.m.is_some()
    }

    pub fn m_is_at_least_two(&self) -> bool {
        self.m.as_ref().is_some_and(|m| m >= &BigInt::from(2))
    }

    pub fn r_positive(&self) -> bool {
        self.r.as_rational().is_some_and(|r| r.is_positive())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_family, FamilySpec};

    fn p(s: &str) -> SrgParams {
        s.parse().unwrap()
    }

    #[test]
    fn params_validation() {
        assert!("25,8,3,2".parse::<SrgParams>().is_ok());
        assert!("25,8,3,3".parse::<SrgParams>().is_err());
        assert!("5,5,0,0".parse::<SrgParams>().is_err());
        assert!("5,2,0".parse::<SrgParams>().is_err());
    }

    #[test]
    fn from_graph() {
        let grid = build_family(&FamilySpec::Grid { p: 5, q: 5 }).unwrap();
        assert_eq!(srg_from_graph(&grid), Some(p("25,8,3,2")));
        let t10 = build_family(&FamilySpec::Triangular { n: 10 }).unwrap();
        assert_eq!(srg_from_graph(&t10), Some(p("45,16,8,4")));
        let c5 = build_family(&FamilySpec::Cycle { n: 5 }).unwrap();
        assert_eq!(srg_from_graph(&c5), Some(p("5,2,0,1")));
        let c6 = build_family(&FamilySpec::Cycle { n: 6 }).unwrap();
        assert_eq!(srg_from_graph(&c6), None);
    }

    #[test]
    fn eigenvalues() {
        let e = srg_eigenvalues(&p("25,8,3,2")).unwrap();
        assert_eq!(
            (e.r.to_string(), e.s.to_string()),
            ("3".into(), "-2".into())
        );
        assert_eq!((e.m, e.n), (Some(2.into()), Some(5.into())));
        let e = srg_eigenvalues(&p("45,16,8,4")).unwrap();
        assert_eq!(
            (e.r.to_string(), e.s.to_string()),
            ("6".into(), "-2".into())
        );
        let e = srg_eigenvalues(&p("5,2,0,1")).unwrap();
        assert_eq!(e.r.to_string(), "(-1+sqrt(5))/2");
        assert_eq!(e.s.to_string(), "(-1-sqrt(5))/2");
        assert!(e.m.is_none());
        let e = srg_eigenvalues(&p("10,1,0,0")).unwrap();
        assert!(e.degenerate);
    }

    #[test]
    fn recognition() {
        assert_eq!(
            recognize_srg_family(&p("25,8,3,2")),
            vec![SrgFamilyTag::LatinSquare { m: 2, n: 5 }]
        );
        assert_eq!(
            recognize_srg_family(&p("45,16,8,4")),
            vec![
                SrgFamilyTag::SteinerGraph { m: 2, n: 8 },
                SrgFamilyTag::SteinerSystemBlockGraph { m: 2, n: 10 }
            ]
        );
        assert_eq!(
            recognize_srg_family(&p("5,2,0,1")),
            vec![SrgFamilyTag::Conference { mu: 1 }]
        );
        // the octahedron is also T(4), the line graph of K4
        assert_eq!(
            recognize_srg_family(&p("6,4,2,4")),
            vec![
                SrgFamilyTag::CompleteMultipartite { t: 3, m: 2 },
                SrgFamilyTag::SteinerGraph { m: 2, n: 2 },
                SrgFamilyTag::SteinerSystemBlockGraph { m: 2, n: 4 }
            ]
        );
        assert!(recognize_srg_family(&p("10,3,0,1")).is_empty());
    }

    #[test]
    fn grids_are_latin_squares() {
        for n in 3..=8 {
            let g = build_family(&FamilySpec::Grid { p: n, q: n }).unwrap();
            let tags = recognize_srg_family(&srg_from_graph(&g).unwrap());
            assert!(tags.contains(&SrgFamilyTag::LatinSquare { m: 2, n: n as u64 }));
            // 3x3 rook graph is Paley(9)
            assert_eq!(tags.len(), if n == 3 { 2 } else { 1 });
        }
    }

    #[test]
    fn conference_tag_matches_parameter_form() {
        for mu in 1..30u64 {
            let v = 4 * mu + 1;
            if let Ok(params) = SrgParams::new(v, 2 * mu, mu - 1, mu) {
                assert!(recognize_srg_family(&params).contains(&SrgFamilyTag::Conference { mu }));
            }
        }
    }

    #[test]
    fn sims() {
        assert_eq!(
            sims_classify(&p("25,8,3,2")).unwrap().branch,
            SimsBranch::LatinSquare
        );
        assert_eq!(
            sims_classify(&p("6,4,2,4")).unwrap().branch,
            SimsBranch::CompleteMultipartite
        );
        let pet = sims_classify(&p("10,3,0,1")).unwrap();
        assert_eq!(pet.branch, SimsBranch::Sporadic);
        assert_eq!((pet.phi, pet.within_phi), (Some(66.into()), Some(true)));
        assert_eq!(
            sims_classify(&p("45,16,8,4")).unwrap().branch,
            SimsBranch::Steiner
        );
        assert!(matches!(
            sims_classify(&p("5,2,0,1")),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn bounds() {
        let b = check_bounds(&p("10,3,0,1")).unwrap();
        assert!(b.mu_bound_ok);
        assert_eq!(b.claw, ClawVerdict::Holds);
        assert_eq!(
            (b.n, b.claw_f.clone()),
            (3, BigRational::from_integer(3.into()))
        );
        let b = check_bounds(&p("25,8,3,2")).unwrap();
        assert!(matches!(b.claw, ClawVerdict::Exempt { .. }));
        // s = -2 with mu = 9 > 8
        let b = check_bounds(&p("58,27,16,9")).unwrap();
        assert_eq!(b.m, 2);
        assert!(!b.mu_bound_ok);
        assert!(matches!(
            check_bounds(&p("6,4,2,4")),
            Err(Error::Precondition(_))
        ));
    }
}
