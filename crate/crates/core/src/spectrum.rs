//! Exact spectra of integer polynomials and of intersection arrays.
//!
//! Roots are extracted in three passes: integer roots of the monic integer
//! transform (which covers every rational root), real quadratic factors
//! (promoted to surds), and whatever is left as refinable intervals.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::array::IntersectionArray;
use crate::error::{Error, Result};
use crate::poly::{isolate_real_roots, refine_bracket, IsolatedRoot, Poly};
use crate::scalar::{frac, int, CertifiedReal, ExactScalar, QuadSurd};

/// Distinct eigenvalues `theta_0 > theta_1 > ... > theta_D`.
#[derive(Clone, Debug, Serialize)]
#[serde(transparent)]
pub struct EigenvalueList(Vec<ExactScalar>);

impl EigenvalueList {
    /// Wraps `values`, checking that they are strictly decreasing.
    pub fn new(values: Vec<ExactScalar>) -> Result<Self> {
        for w in values.windows(2) {
            if w[0].cmp_exact(&w[1])? != std::cmp::Ordering::Greater {
                return Err(Error::Internal(format!(
                    "eigenvalues not strictly decreasing: {} then {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(EigenvalueList(values))
    }

    pub fn values(&self) -> &[ExactScalar] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `theta_i`.
    pub fn theta(&self, i: usize) -> &ExactScalar {
        &self.0[i]
    }

    pub fn last(&self) -> &ExactScalar {
        self.0.last().expect("eigenvalue list is never empty")
    }

    pub fn all_exact(&self) -> bool {
        self.0.iter().all(ExactScalar::is_exact)
    }
}

/// Bits needed for an enclosure of width `<= 10^-digits`.
pub fn bits_for_digits(digits: u32) -> u32 {
    digits * 4 + 1
}

/// Characteristic polynomial of the tridiagonal matrix with rows
/// `(c_i, a_i, b_i)`, via the three-term recurrence on leading minors.
pub fn tridiagonal_char_poly(ia: &IntersectionArray) -> Poly {
    let d = ia.diameter();
    let mut prev = Poly::one();
    let mut cur = Poly::from_i64(&[-ia.a(0), 1]);
    for i in 1..=d {
        let diag = Poly::from_i64(&[-ia.a(i), 1]);
        let off = int((ia.b(i - 1) * ia.c(i)) as i64);
        let next = diag.mul(&cur).sub(&prev.scale(&off));
        prev = cur;
        cur = next;
    }
    cur
}

/// All distinct real roots of `p`, in decreasing order.
///
/// Rational roots are exact; roots of real quadratic factors over the
/// rationals come back as surds; the rest are intervals of width at most
/// `10^-precision` that can be refined further.
pub fn real_roots(p: &Poly, precision: u32) -> Result<Vec<ExactScalar>> {
    if p.is_zero() {
        return Err(Error::domain("the zero polynomial has no isolated roots"));
    }
    if p.degree() == 0 {
        return Ok(Vec::new());
    }
    let sf = p.squarefree_part();
    let a = sf.integer_coeffs();
    let n = a.len() - 1;
    let lead = a[n].clone();
    // g(y) = lead^(n-1) p(y / lead) is monic with integer coefficients; its
    // rational roots are integers.
    let mut g_coeffs = Vec::with_capacity(n + 1);
    for (i, ai) in a.iter().enumerate() {
        if i == n {
            g_coeffs.push(BigInt::one());
        } else {
            g_coeffs.push(ai * num_traits::pow(lead.clone(), n - 1 - i));
        }
    }
    let g = Poly::from_bigints(&g_coeffs);
    let scale_back = BigRational::new(BigInt::one(), lead.clone());

    enum Found {
        Exact(BigRational),
        Surd(ExactScalar),
        Open(IsolatedRoot),
    }

    let mut found: Vec<Found> = Vec::new();
    let half = frac(1, 2);
    let mut residual = g.clone();
    for root in isolate_real_roots(&g) {
        match root {
            IsolatedRoot::Exact(r) => {
                residual = residual.div_rem(&Poly::linear_root(&r)).0;
                found.push(Found::Exact(r));
            }
            br @ IsolatedRoot::Bracket { .. } => {
                let br = refine_bracket(&g, &br, &half);
                if let IsolatedRoot::Exact(r) = br {
                    residual = residual.div_rem(&Poly::linear_root(&r)).0;
                    found.push(Found::Exact(r));
                    continue;
                }
                let mut hit = None;
                let lo = br.lo().ceil().to_integer();
                let hi = br.hi().floor().to_integer();
                let mut k = lo;
                while k <= hi {
                    let kr = BigRational::from_integer(k.clone());
                    if g.eval(&kr).is_zero() {
                        hit = Some(kr);
                        break;
                    }
                    k += 1;
                }
                match hit {
                    Some(r) => {
                        residual = residual.div_rem(&Poly::linear_root(&r)).0;
                        found.push(Found::Exact(r));
                    }
                    None => found.push(Found::Open(br)),
                }
            }
        }
    }

    // Pair up open roots into rational quadratic factors.
    let open_idx: Vec<usize> = found
        .iter()
        .enumerate()
        .filter(|(_, f)| matches!(f, Found::Open(_)))
        .map(|(i, _)| i)
        .collect();
    if open_idx.len() >= 2 {
        let bound = residual.root_bound();
        let w = BigRational::one() / (bound * int(4) + int(4));
        let mut refined: Vec<Option<IsolatedRoot>> = found
            .iter()
            .map(|f| match f {
                Found::Open(br) => Some(refine_bracket(&residual, br, &w)),
                _ => None,
            })
            .collect();
        let mut paired = vec![false; found.len()];
        for (pos, &i) in open_idx.iter().enumerate() {
            if paired[i] {
                continue;
            }
            for &j in &open_idx[pos + 1..] {
                if paired[j] || paired[i] {
                    continue;
                }
                let (ri, rj) = (refined[i].clone().unwrap(), refined[j].clone().unwrap());
                if let Some((s, prod)) = quadratic_factor(&residual, &ri, &rj) {
                    let quad = Poly::from_bigints(&[prod.clone(), -s.clone(), BigInt::one()]);
                    residual = residual.div_rem(&quad).0;
                    let disc = &s * &s - BigInt::from(4) * &prod;
                    // i < j in increasing order, so j is the larger root.
                    let plus =
                        QuadSurd::new(s.clone(), BigInt::one(), disc.clone(), BigInt::from(2))?;
                    let minus = QuadSurd::new(s, -BigInt::one(), disc, BigInt::from(2))?;
                    found[j] = Found::Surd(plus);
                    found[i] = Found::Surd(minus);
                    paired[i] = true;
                    paired[j] = true;
                    refined[i] = None;
                    refined[j] = None;
                }
            }
        }
    }

    let residual = Arc::new(residual);
    let bits = bits_for_digits(precision);
    let mut out = Vec::with_capacity(found.len());
    for f in found {
        let y = match f {
            Found::Exact(r) => ExactScalar::Rational(r),
            Found::Surd(s) => s,
            Found::Open(br) => {
                ExactScalar::Interval(CertifiedReal::from_root(residual.clone(), br))
            }
        };
        let x = if lead.is_one() {
            y
        } else {
            y.mul_rational(&scale_back)
        };
        let x = match x {
            ExactScalar::Interval(c) => ExactScalar::Interval(c.refined(bits)),
            other => other,
        };
        out.push(x);
    }
    out.reverse();
    Ok(out)
}

/// Looks for integers `s, p` with `y^2 - s*y + p` dividing `h` and vanishing
/// at both bracketed roots.
fn quadratic_factor(h: &Poly, ri: &IsolatedRoot, rj: &IsolatedRoot) -> Option<(BigInt, BigInt)> {
    let sum_lo = (ri.lo() + rj.lo()).ceil().to_integer();
    let sum_hi = (ri.hi() + rj.hi()).floor().to_integer();
    let prods = [
        ri.lo() * rj.lo(),
        ri.lo() * rj.hi(),
        ri.hi() * rj.lo(),
        ri.hi() * rj.hi(),
    ];
    let prod_lo = prods.iter().min().unwrap().ceil().to_integer();
    let prod_hi = prods.iter().max().unwrap().floor().to_integer();
    let mut s = sum_lo;
    while s <= sum_hi {
        let mut p = prod_lo.clone();
        while p <= prod_hi {
            let disc = &s * &s - BigInt::from(4) * &p;
            if disc.is_positive() {
                let quad = Poly::from_bigints(&[p.clone(), -s.clone(), BigInt::one()]);
                if h.div_rem(&quad).1.is_zero() {
                    return Some((s, p));
                }
            }
            p += 1;
        }
        s += 1;
    }
    None
}

/// Distinct eigenvalues of a distance-regular graph with array `ia`.
pub fn eigenvalues(ia: &IntersectionArray, precision: u32) -> Result<EigenvalueList> {
    let report = ia.basic_feasibility();
    if !report.pass {
        return Err(Error::input(format!(
            "infeasible intersection array {ia}: {:?}",
            report.witness
        )));
    }
    let roots = real_roots(&tridiagonal_char_poly(ia), precision)?;
    if roots.len() != ia.diameter() + 1 {
        return Err(Error::Internal(format!(
            "expected {} distinct eigenvalues for {ia}, found {}",
            ia.diameter() + 1,
            roots.len()
        )));
    }
    EigenvalueList::new(roots)
}

/// `b = b_1 / (theta_1 + 1)`.
pub fn b_parameter(ia: &IntersectionArray) -> Result<ExactScalar> {
    if ia.diameter() < 2 {
        return Err(Error::precondition("b parameter needs diameter at least 2"));
    }
    let ev = eigenvalues(ia, 30)?;
    b_from_theta1(ia, ev.theta(1))
}

pub(crate) fn b_from_theta1(ia: &IntersectionArray, theta1: &ExactScalar) -> Result<ExactScalar> {
    let denom = theta1.add_rational(&BigRational::one());
    if denom.signum()? == 0 {
        return Err(Error::Internal(
            "theta_1 = -1 for a connected graph of diameter >= 2".into(),
        ));
    }
    ExactScalar::from_int(ia.b(1) as i64).div(&denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ia(s: &str) -> IntersectionArray {
        s.parse().unwrap()
    }

    fn ints(list: &EigenvalueList) -> Vec<i64> {
        list.values()
            .iter()
            .map(|x| i64::try_from(x.as_integer().expect("integral eigenvalue")).unwrap())
            .collect()
    }

    #[test]
    fn johnson_10_5_spectrum_is_integral() {
        let ev = eigenvalues(&ia("25,16,9,4,1;1,4,9,16,25"), 10).unwrap();
        assert_eq!(ints(&ev), vec![25, 15, 7, 1, -3, -5]);
    }

    #[test]
    fn hamming_5_3_spectrum() {
        // oracle: (q-1)D - q i
        let ev = eigenvalues(&ia("10,8,6,4,2;1,2,3,4,5"), 10).unwrap();
        let expected: Vec<i64> = (0..=5).map(|i| 2 * 5 - 3 * i).collect();
        assert_eq!(ints(&ev), expected);
    }

    #[test]
    fn icosahedron_has_surd_eigenvalues() {
        let ev = eigenvalues(&ia("5,2,1;1,2,5"), 10).unwrap();
        assert_eq!(ev.theta(0).as_integer(), Some(5.into()));
        assert_eq!(ev.theta(1).to_string(), "sqrt(5)");
        assert_eq!(ev.theta(2).as_integer(), Some((-1).into()));
        assert_eq!(ev.theta(3).to_string(), "-sqrt(5)");
    }

    #[test]
    fn b_parameter_examples() {
        assert_eq!(
            b_parameter(&ia("25,16,9,4,1;1,4,9,16,25"))
                .unwrap()
                .as_integer(),
            Some(1.into())
        );
        assert_eq!(
            b_parameter(&ia("45,28,15,6,1;1,6,15,28,45"))
                .unwrap()
                .as_integer(),
            Some(1.into())
        );
        assert_eq!(
            b_parameter(&ia("5,2,1;1,2,5")).unwrap().to_string(),
            "(-1+sqrt(5))/2"
        );
        assert!(matches!(
            b_parameter(&ia("3;1")),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn infeasible_array_is_an_input_error() {
        assert!(matches!(
            eigenvalues(&ia("2,2;1,1"), 5),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn non_monic_roots_map_back() {
        // 6x^2 - 5x + 1 = (2x - 1)(3x - 1)
        let roots = real_roots(&Poly::from_i64(&[1, -5, 6]), 10).unwrap();
        let r: Vec<String> = roots.iter().map(|x| x.to_string()).collect();
        assert_eq!(r, vec!["1/2", "1/3"]);
        // 2x^2 - 1: roots +-1/sqrt 2
        let roots = real_roots(&Poly::from_i64(&[-1, 0, 2]), 10).unwrap();
        assert_eq!(roots[0].to_string(), "sqrt(2)/2");
    }

    #[test]
    fn cubic_without_rational_roots_stays_interval() {
        // x^3 - 3x + 1 has three irrational real roots and no quadratic factor.
        let roots = real_roots(&Poly::from_i64(&[1, -3, 0, 1]), 12).unwrap();
        assert_eq!(roots.len(), 3);
        for r in &roots {
            let ExactScalar::Interval(c) = r else {
                panic!("expected interval, got {r}")
            };
            assert!(c.width() <= crate::poly::decimal_width(12));
        }
        let approx: Vec<f64> = roots.iter().map(|r| r.to_f64()).collect();
        assert!((approx[0] - 1.532088886237956).abs() < 1e-12);
    }

    #[test]
    fn quartic_with_two_quadratic_factors() {
        // (x^2 - 2)(x^2 - 3x + 1)
        let p = Poly::from_i64(&[-2, 0, 1]).mul(&Poly::from_i64(&[1, -3, 1]));
        let roots = real_roots(&p, 10).unwrap();
        let s: Vec<String> = roots.iter().map(|x| x.to_string()).collect();
        assert_eq!(
            s,
            vec!["(3+sqrt(5))/2", "sqrt(2)", "(3-sqrt(5))/2", "-sqrt(2)"]
        );
    }
}
