//! Univariate polynomials over the rationals, Sturm chains and real-root
//! isolation.
//!
//! Everything here is exact: coefficients are `BigRational`, root brackets
//! have rational endpoints and refinement is plain bisection driven by exact
//! sign evaluation.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense polynomial, coefficients stored from the constant term upwards.
/// The leading coefficient is never zero; the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly::new(vec![BigRational::zero(), BigRational::one()])
    }

    /// `x - r`.
    pub fn linear_root(r: &BigRational) -> Self {
        Poly::new(vec![-r.clone(), BigRational::one()])
    }

    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Poly::new(
            coeffs
                .iter()
                .cloned()
                .map(BigRational::from_integer)
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &BigRational) -> i8 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, s: &BigRational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        self.scale(&(BigRational::one() / l))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Euclidean division. Panics on division by the zero polynomial.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.degree();
        let lead_inv = BigRational::one() / divisor.lead();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic gcd.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.monic()
    }

    /// Removes repeated factors: `p / gcd(p, p')`, made monic.
    pub fn squarefree_part(&self) -> Poly {
        if self.degree() == 0 {
            return self.monic();
        }
        let g = Poly::gcd(self, &self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Integer coefficients with content 1 and positive leading coefficient.
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if self.lead().is_negative() {
            g = -g;
        }
        for c in ints.iter_mut() {
            *c = &*c / &g;
        }
        ints
    }

    /// Same polynomial rescaled to primitive integer coefficients.
    pub fn primitive_part(&self) -> Poly {
        Poly::from_bigints(&self.integer_coeffs())
    }

    /// Upper bound on the absolute value of every real root (Cauchy).
    pub fn root_bound(&self) -> BigRational {
        let lead = self.lead().abs();
        let mut m = BigRational::zero();
        for c in &self.coeffs[..self.coeffs.len().saturating_sub(1)] {
            let v = c.abs() / &lead;
            if v > m {
                m = v;
            }
        }
        m + BigRational::one()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ if a.is_one() => {}
                _ => write!(f, "{a}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Sturm sequence of a squarefree polynomial.
#[derive(Clone, Debug)]
pub struct SturmChain {
    seq: Vec<Poly>,
}

impl SturmChain {
    pub fn new(p: &Poly) -> Self {
        let mut seq = vec![p.clone(), p.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            // Positive rescaling keeps the sign pattern while taming coefficient growth.
            let r = r.neg();
            if r.is_zero() {
                break;
            }
            let content = r.lead().abs();
            seq.push(r.scale(&(BigRational::one() / content)));
        }
        seq.retain(|p| !p.is_zero());
        SturmChain { seq }
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.seq {
            let s = p.sign_at(x);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }
}

/// A real root of a squarefree polynomial: either an exact rational or an
/// open bracket `(lo, hi)` with nonzero opposite signs at the endpoints.
#[derive(Clone, Debug)]
pub enum IsolatedRoot {
    Exact(BigRational),
    Bracket { lo: BigRational, hi: BigRational },
}

impl IsolatedRoot {
    pub fn lo(&self) -> &BigRational {
        match self {
            IsolatedRoot::Exact(r) => r,
            IsolatedRoot::Bracket { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> &BigRational {
        match self {
            IsolatedRoot::Exact(r) => r,
            IsolatedRoot::Bracket { hi, .. } => hi,
        }
    }
}

/// Isolates every real root of `p`, which must be squarefree and nonconstant.
/// Roots come back in increasing order.
pub fn isolate_real_roots(p: &Poly) -> Vec<IsolatedRoot> {
    if p.degree() == 0 {
        return Vec::new();
    }
    let chain = SturmChain::new(p);
    let bound = p.root_bound();
    let mut out = Vec::new();
    isolate_rec(p, &chain, -bound.clone(), bound, &mut out);
    out
}

fn isolate_rec(
    p: &Poly,
    chain: &SturmChain,
    a: BigRational,
    b: BigRational,
    out: &mut Vec<IsolatedRoot>,
) {
    let n = chain.count_roots(&a, &b);
    if n == 0 {
        return;
    }
    if n == 1 {
        if p.sign_at(&b) == 0 {
            out.push(IsolatedRoot::Exact(b));
        } else {
            out.push(clean_bracket(p, chain, a, b));
        }
        return;
    }
    let mid = (&a + &b) / rat(2);
    isolate_rec(p, chain, a, mid.clone(), out);
    isolate_rec(p, chain, mid, b, out);
}

/// Given `(a, b]` holding exactly one root with `p(b) != 0`, shrinks the left
/// end until `p(a) != 0` (or the root is hit exactly).
fn clean_bracket(p: &Poly, chain: &SturmChain, mut a: BigRational, b: BigRational) -> IsolatedRoot {
    let mut hi = b;
    while p.sign_at(&a) == 0 {
        let mid = (&a + &hi) / rat(2);
        if p.sign_at(&mid) == 0 {
            return IsolatedRoot::Exact(mid);
        }
        if chain.count_roots(&a, &mid) == 0 {
            a = mid;
        } else {
            hi = mid;
        }
    }
    IsolatedRoot::Bracket { lo: a, hi }
}

/// Bisects a bracket until its width is at most `width`.
pub fn refine_bracket(p: &Poly, root: &IsolatedRoot, width: &BigRational) -> IsolatedRoot {
    let (mut lo, mut hi) = match root {
        IsolatedRoot::Exact(_) => return root.clone(),
        IsolatedRoot::Bracket { lo, hi } => (lo.clone(), hi.clone()),
    };
    let s_lo = p.sign_at(&lo);
    let two = rat(2);
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / &two;
        let s = p.sign_at(&mid);
        if s == 0 {
            return IsolatedRoot::Exact(mid);
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    IsolatedRoot::Bracket { lo, hi }
}

/// `2^-bits` as a rational.
pub fn dyadic_width(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits as usize)
}

/// `10^-digits` as a rational.
pub fn decimal_width(digits: u32) -> BigRational {
    BigRational::new(
        BigInt::one(),
        num_traits::pow(BigInt::from(10), digits as usize),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn division_round_trips() {
        let a = Poly::from_i64(&[-6, 11, -6, 1]); // (x-1)(x-2)(x-3)
        let b = Poly::from_i64(&[-2, 1]);
        let (q, rem) = a.div_rem(&b);
        assert!(rem.is_zero());
        assert_eq!(q, Poly::from_i64(&[3, -4, 1]));
        assert_eq!(q.mul(&b), a);
    }

    #[test]
    fn squarefree_removes_repeats() {
        // (x-1)^2 (x+2)
        let p = Poly::from_i64(&[2, -3, 0, 1]);
        assert_eq!(p.squarefree_part(), Poly::from_i64(&[-2, 1, 1]));
    }

    #[test]
    fn sturm_counts_roots() {
        let p = Poly::from_i64(&[-2, 0, 1]); // x^2 - 2
        let chain = SturmChain::new(&p);
        assert_eq!(chain.count_roots(&r(-10, 1), &r(10, 1)), 2);
        assert_eq!(chain.count_roots(&r(0, 1), &r(10, 1)), 1);
        assert_eq!(chain.count_roots(&r(3, 2), &r(10, 1)), 0);
    }

    #[test]
    fn isolation_finds_exact_and_irrational_roots() {
        // (x - 1/2)(x^2 - 5)
        let p = Poly::new(vec![r(5, 2), r(-5, 1), r(-1, 2), r(1, 1)]);
        let roots = isolate_real_roots(&p);
        assert_eq!(roots.len(), 3);
        let w = decimal_width(12);
        let refined: Vec<_> = roots.iter().map(|x| refine_bracket(&p, x, &w)).collect();
        let five_root = refined[2].clone();
        assert!(five_root.lo() * five_root.lo() < r(5, 1));
        assert!(five_root.hi() * five_root.hi() > r(5, 1));
        assert!(five_root.hi() - five_root.lo() <= w);
    }

    #[test]
    fn integer_coeffs_are_primitive() {
        let p = Poly::new(vec![r(1, 2), r(-3, 4), r(-1, 4)]);
        let ints = p.integer_coeffs();
        assert_eq!(
            ints,
            vec![BigInt::from(-2), BigInt::from(3), BigInt::from(1)]
        );
    }
}
