//! Exact real scalars: rationals, quadratic surds and certified intervals.
//!
//! Every comparison in a verdict path goes through [`ExactScalar::cmp_exact`],
//! which is exact for rationals and same-discriminant surds and otherwise
//! refines enclosures until the answer is decided or the refinement cap is
//! hit.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::{dyadic_width, refine_bracket, IsolatedRoot, Poly};

/// Maximum number of enclosure refinements before a comparison is declared
/// undecidable. Each round adds [`BITS_PER_ROUND`] bits of precision, so the
/// final round works at `2^-256`.
pub const REFINEMENT_CAP: u32 = 256;
const BITS_PER_ROUND: u32 = 8;

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Rational lower/upper enclosure producer, indexed by requested bits.
pub type Refiner = Arc<dyn Fn(u32) -> (BigRational, BigRational) + Send + Sync>;

/// `(p + q*sqrt(d)) / e` with `e > 0`, `gcd(p, q, e) = 1`, `q != 0` and `d > 1`
/// square-free.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadSurd {
    p: BigInt,
    q: BigInt,
    d: BigInt,
    e: BigInt,
}

/// A real number known through shrinking rational enclosures.
#[derive(Clone)]
pub struct CertifiedReal {
    lo: BigRational,
    hi: BigRational,
    refine: Option<Refiner>,
}

#[derive(Clone)]
pub enum ExactScalar {
    Rational(BigRational),
    Surd(QuadSurd),
    Interval(CertifiedReal),
}

/// Splits `n > 0` as `f^2 * d` with `d` square-free.
fn square_free_split(n: &BigInt) -> (BigInt, BigInt) {
    let mut d = n.clone();
    let mut f = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= d {
        let sq = &p * &p;
        while (&d % &sq).is_zero() {
            d /= &sq;
            f *= &p;
        }
        p += if p == BigInt::from(2) {
            BigInt::one()
        } else {
            BigInt::from(2)
        };
    }
    (f, d)
}

/// Enclosure of `sqrt(d)` of width at most `2^-bits` for `d >= 0`.
fn sqrt_enclosure(d: &BigInt, bits: u32) -> (BigRational, BigRational) {
    let scale = BigInt::one() << (2 * bits as usize);
    let s = (d * &scale).sqrt();
    let denom = BigInt::one() << bits as usize;
    let lo = BigRational::new(s.clone(), denom.clone());
    let exact = &s * &s == d * &scale;
    let hi = if exact {
        lo.clone()
    } else {
        BigRational::new(s + 1, denom)
    };
    (lo, hi)
}

impl QuadSurd {
    /// Builds `(p + q*sqrt(d)) / e`, collapsing to a rational when possible.
    pub fn new(p: BigInt, q: BigInt, d: BigInt, e: BigInt) -> Result<ExactScalar> {
        if e.is_zero() {
            return Err(Error::domain("surd with zero denominator"));
        }
        if d.is_negative() {
            return Err(Error::domain("surd with negative radicand"));
        }
        if q.is_zero() || d.is_zero() {
            return Ok(ExactScalar::Rational(BigRational::new(p, e)));
        }
        let (f, d) = square_free_split(&d);
        let q = q * f;
        if d.is_one() {
            return Ok(ExactScalar::Rational(BigRational::new(p + q, e)));
        }
        let (mut p, mut q, mut e) = (p, q, e);
        if e.is_negative() {
            p = -p;
            q = -q;
            e = -e;
        }
        let g = p.gcd(&q).gcd(&e);
        Ok(ExactScalar::Surd(QuadSurd {
            p: p / &g,
            q: q / &g,
            d,
            e: e / &g,
        }))
    }

    /// Builds `a + c*sqrt(d)` from rational parts.
    fn from_parts(a: BigRational, c: BigRational, d: &BigInt) -> ExactScalar {
        let e = a.denom().lcm(c.denom());
        let p = (&a * BigRational::from_integer(e.clone())).to_integer();
        let q = (&c * BigRational::from_integer(e.clone())).to_integer();
        QuadSurd::new(p, q, d.clone(), e).expect("denominators are nonzero")
    }

    /// `(rational part, coefficient of sqrt(d))`.
    fn parts(&self) -> (BigRational, BigRational) {
        (
            BigRational::new(self.p.clone(), self.e.clone()),
            BigRational::new(self.q.clone(), self.e.clone()),
        )
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }
    pub fn q(&self) -> &BigInt {
        &self.q
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }
    pub fn e(&self) -> &BigInt {
        &self.e
    }

    pub fn conjugate(&self) -> QuadSurd {
        QuadSurd {
            q: -self.q.clone(),
            ..self.clone()
        }
    }

    fn signum(&self) -> i8 {
        // sign of p + q sqrt(d)
        let sp = self.p.signum();
        let sq = self.q.signum();
        if sp == sq || sp.is_zero() {
            return if sq.is_positive() { 1 } else { -1 };
        }
        let lhs = &self.p * &self.p;
        let rhs = &self.q * &self.q * &self.d;
        match lhs.cmp(&rhs) {
            Ordering::Greater => {
                if sp.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Ordering::Less => {
                if sq.is_positive() {
                    1
                } else {
                    -1
                }
            }
            Ordering::Equal => unreachable!("d is not a perfect square"),
        }
    }

    pub fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        // Extra bits absorb the scaling by q/e.
        let extra = self.q.bits() as u32 + 2;
        let (slo, shi) = sqrt_enclosure(&self.d, bits + extra);
        let (a, c) = self.parts();
        let x = &a + &c * &slo;
        let y = &a + &c * &shi;
        if x <= y {
            (x, y)
        } else {
            (y, x)
        }
    }
}

impl CertifiedReal {
    pub fn new(lo: BigRational, hi: BigRational, refine: Option<Refiner>) -> Self {
        debug_assert!(lo <= hi);
        CertifiedReal { lo, hi, refine }
    }

    /// A simple root of `poly` inside `bracket`, refinable on demand.
    pub fn from_root(poly: Arc<Poly>, bracket: IsolatedRoot) -> Self {
        let lo = bracket.lo().clone();
        let hi = bracket.hi().clone();
        let refine: Refiner = Arc::new(move |bits| {
            let r = refine_bracket(&poly, &bracket, &dyadic_width(bits));
            (r.lo().clone(), r.hi().clone())
        });
        CertifiedReal {
            lo,
            hi,
            refine: Some(refine),
        }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }
    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        match &self.refine {
            Some(f) => {
                let (lo, hi) = f(bits);
                // Intersect with the stored bounds; both are valid enclosures.
                let lo = if lo > self.lo { lo } else { self.lo.clone() };
                let hi = if hi < self.hi { hi } else { self.hi.clone() };
                (lo, hi)
            }
            None => (self.lo.clone(), self.hi.clone()),
        }
    }

    /// Tightens the stored bounds to width `<= 2^-bits` where refinement allows.
    pub fn refined(&self, bits: u32) -> CertifiedReal {
        let (lo, hi) = self.enclosure(bits);
        CertifiedReal {
            lo,
            hi,
            refine: self.refine.clone(),
        }
    }
}

impl fmt::Debug for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CertifiedReal")
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .field("refinable", &self.refine.is_some())
            .finish()
    }
}

fn interval_mul(
    a: (BigRational, BigRational),
    b: (BigRational, BigRational),
) -> (BigRational, BigRational) {
    let cands = [&a.0 * &b.0, &a.0 * &b.1, &a.1 * &b.0, &a.1 * &b.1];
    let lo = cands.iter().min().unwrap().clone();
    let hi = cands.iter().max().unwrap().clone();
    (lo, hi)
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar::Rational(BigRational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        ExactScalar::Rational(int(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        ExactScalar::Rational(BigRational::from_integer(n))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExactScalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    pub fn as_surd(&self) -> Option<&QuadSurd> {
        match self {
            ExactScalar::Surd(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, ExactScalar::Interval(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ExactScalar::Rational(_) => "rational",
            ExactScalar::Surd(_) => "surd",
            ExactScalar::Interval(_) => "interval",
        }
    }

    /// Rational enclosure; exact values return a degenerate interval.
    pub fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        match self {
            ExactScalar::Rational(r) => (r.clone(), r.clone()),
            ExactScalar::Surd(s) => s.enclosure(bits),
            ExactScalar::Interval(c) => c.enclosure(bits),
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.enclosure(64);
        let mid = (lo + hi) / int(2);
        mid.to_f64().unwrap_or(f64::NAN)
    }

    fn surd_parts(&self) -> Option<(BigRational, BigRational, BigInt)> {
        match self {
            ExactScalar::Rational(r) => Some((r.clone(), BigRational::zero(), BigInt::zero())),
            ExactScalar::Surd(s) => {
                let (a, c) = s.parts();
                Some((a, c, s.d.clone()))
            }
            ExactScalar::Interval(_) => None,
        }
    }

    /// Exact sign when available without refinement.
    fn exact_signum(&self) -> Option<i8> {
        match self {
            ExactScalar::Rational(r) => Some(if r.is_zero() {
                0
            } else if r.is_positive() {
                1
            } else {
                -1
            }),
            ExactScalar::Surd(s) => Some(s.signum()),
            ExactScalar::Interval(_) => None,
        }
    }

    /// Sign, refining interval enclosures up to the cap.
    pub fn signum(&self) -> Result<i8> {
        if let Some(s) = self.exact_signum() {
            return Ok(s);
        }
        for round in 0..=REFINEMENT_CAP / BITS_PER_ROUND {
            let (lo, hi) = self.enclosure(BITS_PER_ROUND * (round + 1));
            if lo.is_positive() {
                return Ok(1);
            }
            if hi.is_negative() {
                return Ok(-1);
            }
            if lo.is_zero() && hi.is_zero() {
                return Ok(0);
            }
        }
        Err(Error::Undecidable {
            steps: REFINEMENT_CAP,
        })
    }

    pub fn cmp_exact(&self, other: &ExactScalar) -> Result<Ordering> {
        let diff = self.sub(other)?;
        Ok(match diff.signum()? {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        })
    }

    pub fn eq_exact(&self, other: &ExactScalar) -> Result<bool> {
        Ok(self.cmp_exact(other)? == Ordering::Equal)
    }

    pub fn neg(&self) -> ExactScalar {
        match self {
            ExactScalar::Rational(r) => ExactScalar::Rational(-r),
            ExactScalar::Surd(s) => ExactScalar::Surd(QuadSurd {
                p: -s.p.clone(),
                q: -s.q.clone(),
                ..s.clone()
            }),
            ExactScalar::Interval(c) => {
                let inner = c.clone();
                let refine: Refiner = Arc::new(move |bits| {
                    let (lo, hi) = inner.enclosure(bits);
                    (-hi, -lo)
                });
                ExactScalar::Interval(CertifiedReal::new(
                    -c.hi.clone(),
                    -c.lo.clone(),
                    Some(refine),
                ))
            }
        }
    }

    pub fn add(&self, other: &ExactScalar) -> Result<ExactScalar> {
        self.binary(other, Op::Add)
    }

    pub fn sub(&self, other: &ExactScalar) -> Result<ExactScalar> {
        self.binary(other, Op::Sub)
    }

    pub fn mul(&self, other: &ExactScalar) -> Result<ExactScalar> {
        self.binary(other, Op::Mul)
    }

    pub fn div(&self, other: &ExactScalar) -> Result<ExactScalar> {
        if other.signum()? == 0 {
            return Err(Error::domain("division by zero"));
        }
        self.binary(other, Op::Div)
    }

    pub fn add_rational(&self, r: &BigRational) -> ExactScalar {
        self.add(&ExactScalar::Rational(r.clone()))
            .expect("addition cannot fail")
    }

    pub fn mul_rational(&self, r: &BigRational) -> ExactScalar {
        self.mul(&ExactScalar::Rational(r.clone()))
            .expect("multiplication cannot fail")
    }

    pub fn pow(&self, e: u32) -> ExactScalar {
        let mut acc = ExactScalar::from_int(1);
        for _ in 0..e {
            acc = acc.mul(self).expect("multiplication cannot fail");
        }
        acc
    }

    fn binary(&self, other: &ExactScalar, op: Op) -> Result<ExactScalar> {
        if let (Some((a1, c1, d1)), Some((a2, c2, d2))) = (self.surd_parts(), other.surd_parts()) {
            let d = if d1.is_zero() { d2.clone() } else { d1.clone() };
            if d1.is_zero() || d2.is_zero() || d1 == d2 {
                let d = if d.is_zero() { BigInt::one() } else { d };
                let dr = BigRational::from_integer(d.clone());
                let (a, c) = match op {
                    Op::Add => (a1 + a2, c1 + c2),
                    Op::Sub => (a1 - a2, c1 - c2),
                    Op::Mul => (&a1 * &a2 + &c1 * &c2 * &dr, &a1 * &c2 + &a2 * &c1),
                    Op::Div => {
                        let norm = &a2 * &a2 - &c2 * &c2 * &dr;
                        if norm.is_zero() {
                            return Err(Error::domain("division by zero"));
                        }
                        let (ia, ic) = (&a2 / &norm, -&c2 / &norm);
                        (&a1 * &ia + &c1 * &ic * &dr, &a1 * &ic + &ia * &c1)
                    }
                };
                if c.is_zero() {
                    return Ok(ExactScalar::Rational(a));
                }
                return Ok(QuadSurd::from_parts(a, c, &d));
            }
        }
        Ok(ExactScalar::Interval(self.interval_binary(other, op)))
    }

    fn interval_binary(&self, other: &ExactScalar, op: Op) -> CertifiedReal {
        let (x, y) = (self.clone(), other.clone());
        let compute = move |bits: u32| -> (BigRational, BigRational) {
            let a = x.enclosure(bits + 4);
            let b = y.enclosure(bits + 4);
            match op {
                Op::Add => (a.0 + b.0, a.1 + b.1),
                Op::Sub => (a.0 - b.1, a.1 - b.0),
                Op::Mul => interval_mul(a, b),
                Op::Div => {
                    // Tighten the divisor until it excludes zero; it is known nonzero.
                    let mut b = b;
                    let mut extra = bits + 4;
                    while b.0 <= BigRational::zero() && b.1 >= BigRational::zero() {
                        extra += BITS_PER_ROUND;
                        b = y.enclosure(extra);
                    }
                    let inv = (BigRational::one() / &b.1, BigRational::one() / &b.0);
                    interval_mul(a, inv)
                }
            }
        };
        let (lo, hi) = compute(BITS_PER_ROUND);
        CertifiedReal::new(lo, hi, Some(Arc::new(compute)))
    }

    /// Interval view with width at most `2^-bits` where refinement allows.
    pub fn to_interval(&self, bits: u32) -> CertifiedReal {
        match self {
            ExactScalar::Interval(c) => c.refined(bits),
            _ => {
                let (lo, hi) = self.enclosure(bits);
                let me = self.clone();
                CertifiedReal::new(lo, hi, Some(Arc::new(move |b| me.enclosure(b))))
            }
        }
    }

    /// Sort key helper for descending lists of mixed scalars.
    pub fn sort_descending(values: &mut [ExactScalar]) -> Result<()> {
        let mut err = None;
        values.sort_by(|a, b| match b.cmp_exact(a) {
            Ok(o) => o,
            Err(e) => {
                err = Some(e);
                Ordering::Equal
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

impl From<BigRational> for ExactScalar {
    fn from(r: BigRational) -> Self {
        ExactScalar::Rational(r)
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        ExactScalar::from_int(n)
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = if self.q.is_one() {
            String::new()
        } else if self.q == -BigInt::one() {
            "-".to_string()
        } else {
            format!("{}*", self.q)
        };
        let num = if self.p.is_zero() {
            format!("{q}sqrt({})", self.d)
        } else if self.q.is_negative() {
            format!("{}{q}sqrt({})", self.p, self.d)
        } else {
            format!("{}+{q}sqrt({})", self.p, self.d)
        };
        if self.e.is_one() {
            write!(f, "{num}")
        } else if self.p.is_zero() {
            write!(f, "{num}/{}", self.e)
        } else {
            write!(f, "({num})/{}", self.e)
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Rational(r) => write!(f, "{r}"),
            ExactScalar::Surd(s) => write!(f, "{s}"),
            ExactScalar::Interval(c) => {
                write!(f, "~{:.12}", ExactScalar::Interval(c.clone()).to_f64())
            }
        }
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("kind", self.kind())?;
        match self {
            ExactScalar::Rational(r) => {
                map.serialize_entry("value", &r.to_string())?;
            }
            ExactScalar::Surd(s) => {
                map.serialize_entry("value", &s.to_string())?;
                map.serialize_entry("p", &s.p.to_string())?;
                map.serialize_entry("q", &s.q.to_string())?;
                map.serialize_entry("d", &s.d.to_string())?;
                map.serialize_entry("e", &s.e.to_string())?;
            }
            ExactScalar::Interval(c) => {
                map.serialize_entry("lo", &c.lo.to_string())?;
                map.serialize_entry("hi", &c.hi.to_string())?;
            }
        }
        map.serialize_entry("approx", &self.to_f64())?;
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surd(p: i64, q: i64, d: i64, e: i64) -> ExactScalar {
        QuadSurd::new(p.into(), q.into(), d.into(), e.into()).unwrap()
    }

    #[test]
    fn surd_normalizes() {
        // (2 + 2*sqrt(20)) / 4 = (1 + 2 sqrt 5)/2
        let s = surd(2, 2, 20, 4);
        let q = s.as_surd().unwrap();
        assert_eq!(
            (q.p(), q.q(), q.d(), q.e()),
            (&1.into(), &2.into(), &5.into(), &2.into())
        );
        assert!(matches!(surd(3, 1, 16, 1), ExactScalar::Rational(_)));
        assert_eq!(surd(3, 1, 16, 1).as_integer(), Some(BigInt::from(7)));
    }

    #[test]
    fn golden_ratio_arithmetic() {
        let theta = surd(0, 1, 5, 1); // sqrt 5
        let b = ExactScalar::from_int(2)
            .div(&theta.add_rational(&int(1)))
            .unwrap();
        assert_eq!(b.to_string(), "(-1+sqrt(5))/2");
        let sq = b.mul(&b).unwrap();
        // b^2 = 1 - b
        assert!(sq
            .eq_exact(&ExactScalar::from_int(1).sub(&b).unwrap())
            .unwrap());
    }

    #[test]
    fn mixed_discriminants_compare_by_refinement() {
        let a = surd(0, 1, 2, 1);
        let b = surd(0, 1, 3, 1);
        assert_eq!(a.cmp_exact(&b).unwrap(), Ordering::Less);
        let sum = a.add(&b).unwrap();
        assert!(matches!(sum, ExactScalar::Interval(_)));
        assert_eq!(
            sum.cmp_exact(&ExactScalar::from(frac(314, 100))).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            sum.cmp_exact(&ExactScalar::from(frac(315, 100))).unwrap(),
            Ordering::Less
        );
    }

    #[test]
    fn undecidable_equality_between_intervals() {
        let a = surd(0, 1, 2, 1);
        let b = surd(0, 1, 3, 1);
        let x = a.add(&b).unwrap();
        let y = b.add(&a).unwrap();
        assert_eq!(
            x.cmp_exact(&y),
            Err(Error::Undecidable {
                steps: REFINEMENT_CAP
            })
        );
    }

    #[test]
    fn sqrt_enclosure_brackets() {
        let (lo, hi) = sqrt_enclosure(&BigInt::from(5), 30);
        assert!(&lo * &lo <= int(5) && &hi * &hi >= int(5));
        assert!(hi - lo <= dyadic_width(30));
    }
}
