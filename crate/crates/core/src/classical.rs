//! Classical parameters `(D, b, alpha, beta)`: arrays, eigenvalues,
//! recognition, the beta lower bound, the fundamental bound and the
//! classifiers for classical and tight graphs.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::json;

use crate::array::IntersectionArray;
use crate::bounds::{eval_scalar, f_poly};
use crate::error::{Error, Result};
use crate::homogeneous::{
    recognize_named_family, ClassificationOutcome, Evidence, NamedFamily, Provenance,
};
use crate::scalar::ExactScalar;
use crate::spectrum::{b_from_theta1, eigenvalues, EigenvalueList};

/// `[i]_b`: `i` when `b = 1`, else `(b^i - 1)/(b - 1)`.
pub fn gaussian_binomial(i: u32, b: i64) -> BigInt {
    if b == 1 {
        return BigInt::from(i);
    }
    let b = BigInt::from(b);
    (num_traits::pow(b.clone(), i as usize) - 1) / (b - 1)
}

fn gauss_q(i: u32, b: i64) -> BigRational {
    BigRational::from_integer(gaussian_binomial(i, b))
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

fn show(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ClassicalParams {
    pub d: u32,
    pub b: i64,
    #[serde(serialize_with = "crate::ser::rational")]
    pub alpha: BigRational,
    #[serde(serialize_with = "crate::ser::rational")]
    pub beta: BigRational,
}

impl ClassicalParams {
    pub fn new(d: u32, b: i64, alpha: BigRational, beta: BigRational) -> Result<Self> {
        if d < 3 {
            return Err(Error::input(format!(
                "classical parameters need D >= 3, got {d}"
            )));
        }
        if b == 0 || b == -1 {
            return Err(Error::input(format!("b = {b} is excluded")));
        }
        Ok(ClassicalParams { d, b, alpha, beta })
    }

    pub fn from_ints(d: u32, b: i64, alpha: i64, beta: i64) -> Result<Self> {
        ClassicalParams::new(d, b, rat(alpha), rat(beta))
    }

    fn bi(&self, i: u32) -> BigRational {
        (gauss_q(self.d, self.b) - gauss_q(i, self.b))
            * (&self.beta - &self.alpha * gauss_q(i, self.b))
    }

    fn ci(&self, i: u32) -> BigRational {
        gauss_q(i, self.b)
            * (BigRational::one() + &self.alpha * gauss_q(i.saturating_sub(1), self.b))
    }

    pub fn valency(&self) -> BigRational {
        &self.beta * gauss_q(self.d, self.b)
    }

    /// `a_1 = 0` exactly when `beta = 1 - alpha b [D-1]`.
    pub fn a1_vanishes(&self) -> bool {
        self.beta == BigRational::one() - &self.alpha * rat(self.b) * gauss_q(self.d - 1, self.b)
    }
}

impl fmt::Display for ClassicalParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{})",
            self.d,
            self.b,
            show(&self.alpha),
            show(&self.beta)
        )
    }
}

impl FromStr for ClassicalParams {
    type Err = Error;

    /// `"D,b,alpha,beta"`; alpha and beta may be fractions `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '(' && *c != ')')
            .collect();
        let parts: Vec<&str> = cleaned.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("expected D,b,alpha,beta in {s:?}")));
        }
        let bad = |t: &str| Error::Parse(format!("bad classical parameter {t:?}"));
        let d = parts[0].parse().map_err(|_| bad(parts[0]))?;
        let b = parts[1].parse().map_err(|_| bad(parts[1]))?;
        let alpha = parts[2].parse().map_err(|_| bad(parts[2]))?;
        let beta = parts[3].parse().map_err(|_| bad(parts[3]))?;
        ClassicalParams::new(d, b, alpha, beta)
    }
}

fn to_u64(r: &BigRational) -> Option<u64> {
    if r.is_integer() && r.is_positive() {
        r.to_integer().to_u64()
    } else {
        None
    }
}

/// The array generated by `cp`; non-positive or non-integral entries are infeasible.
pub fn classical_array(cp: &ClassicalParams) -> Result<IntersectionArray> {
    let mut b = Vec::with_capacity(cp.d as usize);
    let mut c = Vec::with_capacity(cp.d as usize);
    for i in 0..cp.d {
        let v = cp.bi(i);
        b.push(
            to_u64(&v)
                .ok_or_else(|| Error::Infeasible(format!("b_{i} = {} for {cp}", show(&v))))?,
        );
    }
    for i in 1..=cp.d {
        let v = cp.ci(i);
        c.push(
            to_u64(&v)
                .ok_or_else(|| Error::Infeasible(format!("c_{i} = {} for {cp}", show(&v))))?,
        );
    }
    let ia = IntersectionArray::new(b, c).map_err(|e| Error::Infeasible(e.to_string()))?;
    if (0..=cp.d as usize).any(|i| ia.a(i) < 0) {
        return Err(Error::Infeasible(format!("negative a_i for {cp}")));
    }
    Ok(ia)
}

/// `theta_i = [D-i](beta - alpha [i]) - [i]`, listed in decreasing order.
pub fn classical_eigenvalues(cp: &ClassicalParams) -> Result<EigenvalueList> {
    let theta: Vec<BigRational> = (0..=cp.d)
        .map(|i| {
            gauss_q(cp.d - i, cp.b) * (&cp.beta - &cp.alpha * gauss_q(i, cp.b)) - gauss_q(i, cp.b)
        })
        .collect();
    if cp.b > 0 && theta.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::Internal(format!(
            "eigenvalues of {cp} are not in natural order"
        )));
    }
    let mut sorted = theta;
    sorted.sort_by(|a, b| b.cmp(a));
    sorted.dedup();
    EigenvalueList::new(sorted.into_iter().map(ExactScalar::from).collect())
}

/// All `(D, b, alpha, beta)` with integer `b` in `[-k, k] \ {0, -1}` that
/// reproduce every `b_i` and `c_i` of `ia`.
pub fn recognize_classical(ia: &IntersectionArray) -> Vec<ClassicalParams> {
    let d = ia.diameter();
    if d < 3 {
        return Vec::new();
    }
    let k = ia.valency() as i64;
    let c2 = rat(ia.c(2) as i64);
    let (c2_int, c3) = (ia.c(2) as i128, ia.c(3) as i128);
    // c_3 = [3](1 + alpha [2]) with alpha (1 + b) = c_2 - 1 - b
    let c3_matches = |b: i128| (1 + b + b * b).checked_mul(c2_int - b) == Some(c3);
    let mut out = Vec::new();
    for b in -k..=k {
        if b == 0 || b == -1 || !c3_matches(b as i128) {
            continue;
        }
        let alpha = &c2 / rat(1 + b) - BigRational::one();
        let qd = gauss_q(d as u32, b);
        if qd.is_zero() {
            continue;
        }
        let beta = rat(k) / qd;
        let cp = ClassicalParams {
            d: d as u32,
            b,
            alpha,
            beta,
        };
        let matches = (0..d).all(|i| cp.bi(i as u32) == rat(ia.b(i) as i64))
            && (1..=d).all(|i| cp.ci(i as u32) == rat(ia.c(i) as i64));
        if matches {
            out.push(cp);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BetaBound {
    /// `beta >= 1 + alpha [D-1]`.
    pub ok: bool,
    pub equality: bool,
    pub a_d: i64,
    /// Equality holds exactly when `a_D = 0`.
    pub consistent: bool,
}

pub fn beta_bound_check(cp: &ClassicalParams) -> Result<BetaBound> {
    if cp.b <= 0 {
        return Err(Error::precondition(format!(
            "beta bound needs b > 0, got {}",
            cp.b
        )));
    }
    let bound = BigRational::one() + &cp.alpha * gauss_q(cp.d - 1, cp.b);
    let ia = classical_array(cp)?;
    let a_d = ia.a(cp.d as usize);
    let equality = cp.beta == bound;
    Ok(BetaBound {
        ok: cp.beta >= bound,
        equality,
        a_d,
        consistent: equality == (a_d == 0),
    })
}

/// Both sides of the fundamental bound and the derived local eigenvalues.
#[derive(Clone, Debug, Serialize)]
pub struct TightReport {
    pub theta1: ExactScalar,
    pub theta_d: ExactScalar,
    pub lhs: ExactScalar,
    pub rhs: ExactScalar,
    pub equality: bool,
    pub tight: bool,
    pub bipartite: bool,
    pub a_d: i64,
    /// `-1 - b_1/(theta_D + 1)`.
    pub local_r: Option<ExactScalar>,
    /// `-1 - b_1/(theta_1 + 1)`.
    pub local_s: Option<ExactScalar>,
}

/// `(theta_1 + k/(a_1+1))(theta_D + k/(a_1+1))` against `-k a_1 b_1/(a_1+1)^2`.
pub fn fundamental_bound(ia: &IntersectionArray) -> Result<TightReport> {
    let d = ia.diameter();
    if d < 3 {
        return Err(Error::precondition(format!(
            "fundamental bound needs D >= 3, got {d}"
        )));
    }
    let ev = eigenvalues(ia, 30)?;
    let (theta1, theta_d) = (ev.theta(1).clone(), ev.last().clone());
    let (k, a1, b1) = (ia.valency() as i64, ia.a(1), ia.b(1) as i64);
    let shift = BigRational::new(k.into(), (a1 + 1).into());
    let lhs = theta1
        .add_rational(&shift)
        .mul(&theta_d.add_rational(&shift))?;
    let rhs = ExactScalar::from(BigRational::new(
        (-k * a1 * b1).into(),
        ((a1 + 1) * (a1 + 1)).into(),
    ));
    let equality = lhs.eq_exact(&rhs)?;
    let bipartite = ia.is_bipartite();
    let local = |theta: &ExactScalar| -> Result<Option<ExactScalar>> {
        let den = theta.add_rational(&BigRational::one());
        if den.signum()? == 0 {
            return Ok(None);
        }
        Ok(Some(
            ExactScalar::from_int(b1)
                .div(&den)?
                .neg()
                .add_rational(&rat(-1)),
        ))
    };
    Ok(TightReport {
        local_r: local(&theta_d)?,
        local_s: local(&theta1)?,
        theta1,
        theta_d,
        lhs,
        rhs,
        equality,
        tight: equality && !bipartite,
        bipartite,
        a_d: ia.a(d),
    })
}

fn ev(rule: &str, values: serde_json::Value) -> Evidence {
    Evidence {
        rule: rule.to_string(),
        values,
    }
}

/// Branches for a 1-homogeneous graph with classical parameters, `a_1 > 0`,
/// `D >= 5` and `b >= 1`: (i) `alpha = 0`, (ii)-(v) named families,
/// (vi) `D <= 9`, `alpha > 0`, `b >= 2`.
pub fn classify_thm_6_2(
    cp: &ClassicalParams,
    homogeneity: Provenance,
) -> Result<ClassificationOutcome> {
    let d = cp.d as usize;
    if d < 5 {
        return Err(Error::Scope(format!(
            "classification needs D >= 5, got {d}"
        )));
    }
    if cp.b < 1 {
        return Err(Error::precondition(format!(
            "classification needs b >= 1, got {}",
            cp.b
        )));
    }
    homogeneity.require()?;
    let ia = classical_array(cp)?;
    if ia.a(1) <= 0 {
        return Err(Error::precondition(format!("{cp} gives a_1 = 0")));
    }
    let mut evidence = vec![
        ev(
            "classical-parameters",
            json!({"params": cp.to_string(), "array": ia.to_string()}),
        ),
        ev("homogeneity", json!({"provenance": homogeneity})),
    ];
    let alpha_times = &cp.alpha * rat(1 + cp.b);
    evidence.push(ev(
        "alpha-integrality",
        json!({"alpha_times_1_plus_b": show(&alpha_times), "integer": alpha_times.is_integer(), "alpha_nonnegative": !cp.alpha.is_negative()}),
    ));
    let mut matches: Vec<(String, String)> = Vec::new();
    if cp.alpha.is_zero() {
        matches.push(("i".into(), "alpha = 0".into()));
    }
    let named = recognize_named_family(&ia);
    if let Some((branch, name)) = thm_1_1_named_branch(&named, d) {
        matches.push((branch, name));
    }
    evidence.push(ev(
        "named-family",
        json!({"matches": named.iter().map(|n| n.to_string()).collect::<Vec<_>>()}),
    ));
    if cp.alpha.is_positive() && cp.b >= 2 {
        let b = cp.b;
        let bd = gaussian_binomial(cp.d, b);
        let bd1 = gaussian_binomial(cp.d - 1, b);
        let lower = BigRational::new(
            bd * bd1 * BigInt::from(b - 1) * BigInt::from(b - 1),
            BigInt::from((b + 1) * (b - 1) * (b - 1)),
        );
        let f = f_poly().eval(&rat(b));
        let k = cp.valency();
        evidence.push(ev(
            "valency-lower-bound",
            json!({"k": show(&k), "lower": show(&lower), "F(b)": show(&f), "lower_exceeds_F": lower > f, "D_at_most_9": d <= 9}),
        ));
        evidence.push(ev(
            "refinement-advisory",
            json!({"note": footnote_advisory(cp.d, b)}),
        ));
        if d <= 9 {
            matches.push((
                "vi".into(),
                format!("D <= 9, alpha > 0, b >= 2 (D = {d}, b = {b})"),
            ));
        }
    }
    Ok(ClassificationOutcome::assemble(
        "6.2",
        matches,
        evidence,
        homogeneity,
    ))
}

/// Advisory sharpening of `D <= 9` for particular `(D, b)`.
fn footnote_advisory(d: u32, b: i64) -> String {
    if (d == 8 && b >= 6) || (d == 9 && b >= 3) {
        format!("(D,b) = ({d},{b}) also exceeds F(b); advisory only")
    } else {
        "no sharper diameter bound recorded".into()
    }
}

/// Branch (ii)-(v) of the 1-homogeneous classification from named-family tags.
pub(crate) fn thm_1_1_named_branch(named: &[NamedFamily], d: usize) -> Option<(String, String)> {
    let d = d as u32;
    for fam in named {
        let branch = match fam {
            NamedFamily::Johnson { n, d: dd } if *n == 2 * d && *dd == d => "ii",
            NamedFamily::HalvedCube { l } if *l == 2 * d || *l == 2 * d + 1 => "iii",
            NamedFamily::FoldedJohnson { n } if *n == 4 * d => "iv",
            NamedFamily::FoldedHalvedCube { l } if *l == 4 * d => "v",
            _ => continue,
        };
        return Some((branch.into(), fam.to_string()));
    }
    None
}

/// Tight graphs with `D >= 5`: (i) `J(2D, D)`, (ii) halved `2D`-cube,
/// (iii) locally connected with `k <= F(b)`.
pub fn classify_thm_7_2(
    ia: &IntersectionArray,
    homogeneity: Provenance,
) -> Result<ClassificationOutcome> {
    let d = ia.diameter();
    if d < 5 {
        return Err(Error::Scope(format!(
            "classification needs D >= 5, got {d}"
        )));
    }
    let report = fundamental_bound(ia)?;
    if !report.tight {
        return Err(Error::precondition(format!("{ia} is not tight")));
    }
    let b = b_from_theta1(ia, &report.theta1)?;
    let f = eval_scalar(&f_poly(), &b)?;
    let k = ExactScalar::from_int(ia.valency() as i64);
    let within = k.cmp_exact(&f)? != std::cmp::Ordering::Greater;
    let mut evidence = vec![
        ev(
            "fundamental-bound",
            json!({"lhs": report.lhs.to_string(), "rhs": report.rhs.to_string(), "tight": true}),
        ),
        ev(
            "tight-structure",
            json!({"a1": ia.a(1), "a_D": report.a_d, "a1_positive": ia.a(1) > 0, "a_D_zero": report.a_d == 0}),
        ),
        ev(
            "local-eigenvalues",
            json!({"r": report.local_r.as_ref().map(|x| x.to_string()), "s": report.local_s.as_ref().map(|x| x.to_string())}),
        ),
        ev(
            "b-parameter",
            json!({"b": b.to_string(), "at_least_1": b.cmp_exact(&ExactScalar::from_int(1))?.is_ge()}),
        ),
        ev(
            "valency-bound",
            json!({"k": ia.valency(), "F(b)": f.to_string(), "k_at_most_F": within}),
        ),
        ev("homogeneity", json!({"provenance": homogeneity})),
    ];
    let named = recognize_named_family(ia);
    evidence.push(ev(
        "named-family",
        json!({"matches": named.iter().map(|n| n.to_string()).collect::<Vec<_>>()}),
    ));
    let d32 = d as u32;
    let mut matches = Vec::new();
    for fam in &named {
        match fam {
            NamedFamily::Johnson { n, d: dd } if *n == 2 * d32 && *dd == d32 => {
                matches.push(("i".into(), fam.to_string()))
            }
            NamedFamily::HalvedCube { l } if *l == 2 * d32 => {
                matches.push(("ii".into(), fam.to_string()))
            }
            _ => {}
        }
    }
    if within {
        matches.push(("iii".into(), "locally connected with k <= F(b)".into()));
    }
    Ok(ClassificationOutcome::assemble(
        "7.2",
        matches,
        evidence,
        homogeneity,
    ))
}
