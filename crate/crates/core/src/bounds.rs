//! Scalar bound polynomials: the valency thresholds `F(b)`, `G(b)` and the
//! strongly regular bounds in terms of the smallest eigenvalue `-m`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{frac, int, ExactScalar};

/// `F(b) = 16b^10 + 80b^9 + 192b^8 + 256b^7 + 192b^6 + 72b^5 + 20b^4 + 24b^3 + 8b^2 + 1`.
pub fn f_poly() -> Poly {
    Poly::from_i64(&[1, 0, 8, 24, 20, 72, 192, 256, 192, 80, 16])
}

/// `G(b) = (4b^5 + 4b^4 + 4b^3 + 1)^2`, expanded; the leading term is `16b^10`.
pub fn g_poly() -> Poly {
    Poly::from_i64(&[1, 0, 0, 8, 8, 8, 16, 32, 48, 32, 16])
}

/// `F` in its factored form `(1 + b w)(1 + (1 + b) w)` with `w = 4b^4 + 8b^3 + 8b^2`.
pub fn f_factored(b: &BigRational) -> BigRational {
    let w = Poly::from_i64(&[0, 0, 8, 8, 4]).eval(b);
    let one = BigRational::one();
    (&one + b * &w) * (&one + (&one + b) * &w)
}

/// `(F(b), G(b))` for a rational `b >= 1`.
pub fn homogeneity_bounds(b: &BigRational) -> Result<(BigRational, BigRational)> {
    if b < &BigRational::one() {
        return Err(Error::domain(format!("b = {b} is below 1")));
    }
    Ok((f_poly().eval(b), g_poly().eval(b)))
}

/// `(F(b), G(b))` for any exact scalar `b >= 1` (surd values stay exact).
pub fn homogeneity_bounds_scalar(b: &ExactScalar) -> Result<(ExactScalar, ExactScalar)> {
    if let Some(r) = b.as_rational() {
        let (f, g) = homogeneity_bounds(r)?;
        return Ok((f.into(), g.into()));
    }
    if b.cmp_exact(&ExactScalar::from_int(1))? == std::cmp::Ordering::Less {
        return Err(Error::domain(format!("b = {b} is below 1")));
    }
    Ok((eval_scalar(&f_poly(), b)?, eval_scalar(&g_poly(), b)?))
}

/// Horner evaluation of a rational polynomial at an exact scalar.
pub fn eval_scalar(p: &Poly, x: &ExactScalar) -> Result<ExactScalar> {
    let mut acc = ExactScalar::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(x)?.add_rational(c);
    }
    Ok(acc)
}

/// The three strongly regular bounds for smallest eigenvalue `-m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SrgBounds {
    /// `m^3 (2m - 3)`.
    #[serde(serialize_with = "crate::ser::bigint")]
    pub mu_bound: BigInt,
    /// `f(m, mu) = m(m-1)(mu+1)/2 + m - 1`.
    #[serde(serialize_with = "crate::ser::rational")]
    pub claw_f: BigRational,
    /// Bound on the number of vertices outside the infinite families.
    #[serde(serialize_with = "crate::ser::bigint")]
    pub phi: BigInt,
}

pub fn mu_bound(m: &BigInt) -> BigInt {
    m * m * m * (BigInt::from(2) * m - 3)
}

pub fn claw_f(m: &BigInt, mu: &BigInt) -> BigRational {
    let m_r = BigRational::from_integer(m.clone());
    let mu_r = BigRational::from_integer(mu.clone());
    frac(1, 2) * &m_r * (&m_r - int(1)) * (mu_r + int(1)) + m_r - int(1)
}

/// `phi(m)` from the expanded degree-10 polynomial.
pub fn phi_simplified(m: &BigInt) -> BigRational {
    let coeffs = [
        frac(1, 1),
        frac(-1, 2),
        frac(-5, 2),
        frac(-1, 2),
        frac(1, 1),
        frac(4, 1),
        frac(-4, 1),
        frac(-7, 2),
        frac(15, 2),
        frac(-9, 2),
        frac(1, 1),
    ];
    Poly::new(coeffs.to_vec()).eval(&BigRational::from_integer(m.clone()))
}

/// `phi(m)` as the unexpanded right-hand side of the vertex bound, obtained by
/// substituting the mu-bound and the claw bound on `r` into
/// `v = mu + m - r + 2rm + rm(m-1)(1+r)/mu`.
pub fn phi_unsimplified(m: &BigInt) -> BigRational {
    let m_r = BigRational::from_integer(m.clone());
    let one = BigRational::one();
    let mb = BigRational::from_integer(mu_bound(m));
    let lhs = &mb + &m_r;
    let first = int(2) * &m_r - &one + &m_r * &m_r * (&m_r - &one) * (&m_r - &one);
    let second = &m_r * (&m_r - &one) / int(2) * (&mb + &one) - &one;
    lhs + first * second
}

pub fn srg_bounds(m: &BigInt, mu: &BigInt) -> Result<SrgBounds> {
    if m < &BigInt::from(2) {
        return Err(Error::domain(format!("m = {m} must be at least 2")));
    }
    if !mu.is_positive() {
        return Err(Error::domain(format!("mu = {mu} must be positive")));
    }
    let simplified = phi_simplified(m);
    let expanded = phi_unsimplified(m);
    if simplified != expanded || !simplified.is_integer() {
        return Err(Error::Internal(format!(
            "phi({m}) forms disagree: {simplified} vs {expanded}"
        )));
    }
    Ok(SrgBounds {
        mu_bound: mu_bound(m),
        claw_f: claw_f(m, mu),
        phi: simplified.to_integer(),
    })
}
