//! `CAB_i` partitions of local graphs: empirical checks on a graph, the
//! recursion expressing their parameters through the local eigenvalues,
//! the quotient matrices `Q_i`, and the closed forms at level 2.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{
    check_distance_regular, pairs_at_distance, DistanceTable, Graph, PairSelection,
};
use crate::poly::Poly;
use crate::scalar::ExactScalar;
use crate::spectrum::real_roots;
use crate::srg::{srg_eigenvalues, SrgParams};

/// Parameters `(gamma, alpha, beta, delta)` of one `CAB_i` level.
///
/// At `i = D` the `B` cell (and possibly `A`) is empty; the missing
/// parameters are reported as zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CabLevelParams {
    pub level: usize,
    #[serde(serialize_with = "crate::ser::rational")]
    pub gamma: BigRational,
    #[serde(serialize_with = "crate::ser::rational")]
    pub alpha: BigRational,
    #[serde(serialize_with = "crate::ser::rational")]
    pub beta: BigRational,
    #[serde(serialize_with = "crate::ser::rational")]
    pub delta: BigRational,
    /// All four values are integers; false flags infeasible inputs.
    pub integral: bool,
}

impl CabLevelParams {
    pub fn new(
        level: usize,
        gamma: BigRational,
        alpha: BigRational,
        beta: BigRational,
        delta: BigRational,
    ) -> Self {
        let integral = [&gamma, &alpha, &beta, &delta]
            .iter()
            .all(|x| x.is_integer());
        CabLevelParams {
            level,
            gamma,
            alpha,
            beta,
            delta,
            integral,
        }
    }

    pub fn from_ints(level: usize, v: [i64; 4]) -> Self {
        let r = |x: i64| BigRational::from_integer(x.into());
        CabLevelParams::new(level, r(v[0]), r(v[1]), r(v[2]), r(v[3]))
    }

    pub fn tuple(&self) -> [&BigRational; 4] {
        [&self.gamma, &self.alpha, &self.beta, &self.delta]
    }
}

/// Local strongly regular data `(k, a1, lambda', mu')` with eigenvalues `a1 > r > s`.
#[derive(Clone, Debug, Serialize)]
pub struct LocalSrgData {
    pub k: i64,
    pub a1: i64,
    pub lambda_p: i64,
    pub mu_p: i64,
    pub r: ExactScalar,
    pub s: ExactScalar,
}

impl LocalSrgData {
    /// From the parameters `(v', k', lambda', mu') = (k, a1, lambda', mu')` of a local graph.
    pub fn from_local(p: &SrgParams) -> Result<Self> {
        let e = srg_eigenvalues(p)?;
        Ok(LocalSrgData {
            k: p.v as i64,
            a1: p.k as i64,
            lambda_p: p.lambda as i64,
            mu_p: p.mu as i64,
            r: e.r,
            s: e.s,
        })
    }

    pub fn params(&self) -> Result<SrgParams> {
        SrgParams::new(
            self.k as u64,
            self.a1 as u64,
            self.lambda_p as u64,
            self.mu_p as u64,
        )
    }

    /// `r + s = lambda' - mu'`, rational even when `r`, `s` are surds.
    pub fn r_plus_s(&self) -> BigRational {
        rat(self.lambda_p - self.mu_p)
    }
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

/// Pair whose `CAB_i` partition is not equitable or whose parameters differ
/// from those of the lexicographically first pair at that distance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CabWitness {
    pub level: usize,
    pub x: u32,
    pub y: u32,
    /// `"not_equitable"` or `"parameters_differ"`.
    pub reason: &'static str,
    /// Vertex of the local graph at `y` whose counts disagree, when not equitable.
    pub vertex: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum CabOutcome {
    Holds {
        levels: Vec<CabLevelParams>,
    },
    Fails {
        levels: Vec<CabLevelParams>,
        witness: CabWitness,
    },
}

impl CabOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, CabOutcome::Holds { .. })
    }

    /// Levels verified before any failure.
    pub fn levels(&self) -> &[CabLevelParams] {
        match self {
            CabOutcome::Holds { levels } | CabOutcome::Fails { levels, .. } => levels,
        }
    }
}

/// Counts matrix `m[c][d]`: neighbours in cell `d` of a cell-`c` vertex of
/// the local graph at `y`, cells being `C, A, B` by distance to `x`.
/// `Err(z)` names the first vertex whose counts break equitability.
fn cab_counts(
    g: &Graph,
    dist_x: &[u8],
    y: u32,
    i: usize,
) -> std::result::Result<[[u64; 3]; 3], u32> {
    let mut m = [[0u64; 3]; 3];
    let mut seen = [false; 3];
    let cell = |z: u32| dist_x[z as usize] as usize + 1 - i;
    for &z in g.neighbors(y) {
        let cz = cell(z);
        let mut row = [0u64; 3];
        for &w in g.neighbors(z) {
            if w != y && g.adjacent(w, y) {
                row[cell(w)] += 1;
            }
        }
        if !seen[cz] {
            seen[cz] = true;
            m[cz] = row;
        } else if m[cz] != row {
            return Err(z);
        }
    }
    Ok(m)
}

fn level_from_counts(level: usize, m: &[[u64; 3]; 3]) -> CabLevelParams {
    let r = |x: u64| BigRational::from_integer(x.into());
    CabLevelParams::new(level, r(m[0][0]), r(m[1][0]), r(m[1][2]), r(m[2][1]))
}

/// Verifies the `CAB_i` property for `1 <= i <= i_max` over every ordered pair.
pub fn cab_partition_check(g: &Graph, i_max: usize) -> Result<CabOutcome> {
    let outcome = check_distance_regular(g)?;
    let Some(ia) = outcome.array() else {
        return Err(Error::precondition("graph is not distance-regular"));
    };
    if ia.a(1) <= 0 {
        return Err(Error::precondition("a1 = 0: local graphs are edgeless"));
    }
    let d = ia.diameter();
    if i_max == 0 || i_max > d {
        return Err(Error::input(format!("level bound {i_max} outside 1..={d}")));
    }
    let table = DistanceTable::new(g);
    let mut levels = Vec::new();
    for i in 1..=i_max {
        let pairs = pairs_at_distance(&table, i as u32, PairSelection::Exhaustive);
        let (x0, y0) = pairs[0];
        let reference = match cab_counts(g, &table.row(x0), y0, i) {
            Ok(m) => m,
            Err(z) => {
                let witness = CabWitness {
                    level: i,
                    x: x0,
                    y: y0,
                    reason: "not_equitable",
                    vertex: Some(z),
                };
                return Ok(CabOutcome::Fails { levels, witness });
            }
        };
        let failure = pairs.par_iter().skip(1).find_map_first(|&(x, y)| {
            match cab_counts(g, &table.row(x), y, i) {
                Ok(m) if m == reference => None,
                Ok(_) => Some(CabWitness {
                    level: i,
                    x,
                    y,
                    reason: "parameters_differ",
                    vertex: None,
                }),
                Err(z) => Some(CabWitness {
                    level: i,
                    x,
                    y,
                    reason: "not_equitable",
                    vertex: Some(z),
                }),
            }
        });
        if let Some(witness) = failure {
            return Ok(CabOutcome::Fails { levels, witness });
        }
        levels.push(level_from_counts(i, &reference));
    }
    Ok(CabOutcome::Holds { levels })
}

/// Levels from the recursion, plus the predicted `b_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CabFormula {
    pub levels: Vec<CabLevelParams>,
    #[serde(serialize_with = "crate::ser::rationals")]
    pub predicted_b: Vec<BigRational>,
}

/// One step of the recursion from `delta_{i-1}` and `c_i`; returns the level and `b_i`.
fn recursion_step(
    local: &LocalSrgData,
    level: usize,
    delta_prev: &BigRational,
    c: &BigRational,
) -> Result<(CabLevelParams, BigRational)> {
    let (k, a1, mu) = (rat(local.k), rat(local.a1), rat(local.mu_p));
    let gap = &a1 - delta_prev;
    if gap.is_zero() {
        return Err(Error::Singularity {
            level,
            detail: "a1 equals delta of the previous level".into(),
        });
    }
    let den = &gap * (&a1 - local.r_plus_s() + delta_prev) - &mu * (&k - c);
    if den.is_zero() {
        return Err(Error::Singularity {
            level,
            detail: "denominator of b_i vanishes".into(),
        });
    }
    let b = &k - c - c * &gap * &gap / den;
    let a_i = &k - c - &b;
    if a_i.is_zero() {
        return Err(Error::Singularity {
            level,
            detail: "a_i = 0 leaves alpha_i undefined".into(),
        });
    }
    let alpha = c * &gap / a_i;
    let beta = &mu * &b / &gap;
    let delta = &mu * (&k - c) / &gap - &beta;
    Ok((
        CabLevelParams::new(level, delta_prev.clone(), alpha, beta, delta),
        b,
    ))
}

/// Runs the recursion with `delta_0 = 0` over `c_1, ..., c_j`.
pub fn cab_formula_params(local: &LocalSrgData, c: &[i64]) -> Result<CabFormula> {
    if local.a1 < 2 {
        return Err(Error::precondition(format!("a1 = {} is below 2", local.a1)));
    }
    if local.mu_p <= 0 {
        return Err(Error::precondition("local graph is disconnected (mu' = 0)"));
    }
    let mut delta = BigRational::zero();
    let mut levels = Vec::with_capacity(c.len());
    let mut predicted_b = Vec::with_capacity(c.len());
    let trace = rat(local.a1) - local.r_plus_s();
    for (idx, &ci) in c.iter().enumerate() {
        let (lvl, b) = recursion_step(local, idx + 1, &delta, &rat(ci))?;
        let identity = &lvl.alpha + &lvl.beta + &lvl.delta - &lvl.gamma;
        if identity != trace {
            return Err(Error::Internal(format!(
                "trace identity fails at level {}",
                idx + 1
            )));
        }
        delta = lvl.delta.clone();
        levels.push(lvl);
        predicted_b.push(b);
    }
    Ok(CabFormula {
        levels,
        predicted_b,
    })
}

/// `Q_i` with its characteristic polynomial and distinct eigenvalues.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientReport {
    #[serde(serialize_with = "crate::ser::rational_matrix")]
    pub matrix: Vec<Vec<BigRational>>,
    #[serde(serialize_with = "crate::ser::rational")]
    pub trace: BigRational,
    pub char_poly: String,
    /// Distinct eigenvalues, descending.
    pub spectrum: Vec<ExactScalar>,
    /// Spectrum equals `{a1, r, s}`, when local data was supplied.
    pub matches_local: Option<bool>,
}

/// `Q_i = [[gamma, a1-gamma, 0], [alpha, a1-beta-alpha, beta], [0, delta, a1-delta]]`
/// for `1 <= i <= D-1`.
pub fn quotient_matrix(
    level: &CabLevelParams,
    a1: i64,
    diameter: usize,
    local: Option<&LocalSrgData>,
) -> Result<QuotientReport> {
    if level.level == diameter {
        return Err(Error::domain("Q_i undefined at i = D"));
    }
    if level.level == 0 || level.level > diameter {
        return Err(Error::domain(format!(
            "level {} outside 1..D-1 (D = {diameter})",
            level.level
        )));
    }
    let a = rat(a1);
    let z = BigRational::zero();
    let (g, al, be, de) = (&level.gamma, &level.alpha, &level.beta, &level.delta);
    let m = vec![
        vec![g.clone(), &a - g, z.clone()],
        vec![al.clone(), &a - be - al, be.clone()],
        vec![z, de.clone(), &a - de],
    ];
    let trace = &m[0][0] + &m[1][1] + &m[2][2];
    let minor = |i: usize, j: usize| &m[i][i] * &m[j][j] - &m[i][j] * &m[j][i];
    let minors = minor(0, 1) + minor(0, 2) + minor(1, 2);
    let det = &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
    let p = Poly::new(vec![-det, minors, -trace.clone(), BigRational::one()]);
    let spectrum = real_roots(&p, 12)?;
    let matches_local = match local {
        Some(l) => {
            let expected = [ExactScalar::from_int(l.a1), l.r.clone(), l.s.clone()];
            let mut ok = spectrum.len() == 3;
            if ok {
                for (x, y) in spectrum.iter().zip(&expected) {
                    ok &= x.eq_exact(y)?;
                }
            }
            Some(ok)
        }
        None => None,
    };
    Ok(QuotientReport {
        matrix: m,
        trace,
        char_poly: p.to_string(),
        spectrum,
        matches_local,
    })
}

/// Level-2 parameters `(gamma_2, alpha_2, beta_2, delta_2)` and `b_2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cab2 {
    pub level: CabLevelParams,
    #[serde(serialize_with = "crate::ser::rational")]
    pub b2: BigRational,
}

/// Closed forms at level 2, using `delta_1 = mu'` and `lambda' = mu' + r + s`.
pub fn cab2_closed_form(local: &LocalSrgData, c2: i64) -> Result<Cab2> {
    let (k, a1, lp, mu, c) = (
        rat(local.k),
        rat(local.a1),
        rat(local.lambda_p),
        rat(local.mu_p),
        rat(c2),
    );
    let gap = &a1 - &mu;
    if gap.is_zero() {
        return Err(Error::Singularity {
            level: 2,
            detail: "a1 = mu'".into(),
        });
    }
    let den = (&a1 + rat(2) * &mu - lp) * &gap - &mu * (&k - &c);
    if den.is_zero() {
        return Err(Error::Singularity {
            level: 2,
            detail: "denominator of b_2 vanishes".into(),
        });
    }
    let b2 = &k - &c - &c * &gap * &gap / den;
    let a2 = &k - &c - &b2;
    if a2.is_zero() {
        return Err(Error::Singularity {
            level: 2,
            detail: "a_2 = 0 leaves alpha_2 undefined".into(),
        });
    }
    let alpha = &c * &gap / &a2;
    let beta = &mu * &b2 / &gap;
    let delta = &mu * &a2 / &gap;
    Ok(Cab2 {
        level: CabLevelParams::new(2, mu.clone(), alpha, beta, delta),
        b2,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalKind {
    LatinSquare,
    Steiner,
}

/// `(alpha_2, beta_2, delta_2, a_2, b_2, c_2)` predicted for a graph that is
/// locally `LS_m(n)` or locally `S_m(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cab2Prediction {
    #[serde(serialize_with = "crate::ser::rational")]
    pub alpha2: BigRational,
    #[serde(serialize_with = "crate::ser::rational")]
    pub beta2: BigRational,
    #[serde(serialize_with = "crate::ser::rational")]
    pub delta2: BigRational,
    #[serde(serialize_with = "crate::ser::rational")]
    pub a2: BigRational,
    #[serde(serialize_with = "crate::ser::rational")]
    pub b2: BigRational,
    #[serde(serialize_with = "crate::ser::rational")]
    pub c2: BigRational,
}

impl Cab2Prediction {
    pub fn as_tuple(&self) -> [&BigRational; 6] {
        [
            &self.alpha2,
            &self.beta2,
            &self.delta2,
            &self.a2,
            &self.b2,
            &self.c2,
        ]
    }
}

pub fn predict_cab2(kind: LocalKind, m: i64, n: i64) -> Result<Cab2Prediction> {
    if m < 2 {
        return Err(Error::domain(format!("m = {m} is below 2")));
    }
    if n <= m {
        return Err(Error::domain(format!("n = {n} must exceed m = {m}")));
    }
    let (alpha2, beta2, delta2, a2, b2, c2) = match kind {
        LocalKind::LatinSquare => (
            rat(m),
            rat((m - 1) * (n - m * m + m)),
            rat(m * m * (m - 1)),
            rat(m * m * (n - m)),
            rat((n - m) * (n - m * m + m)),
            rat(m * m),
        ),
        LocalKind::Steiner => (
            rat(m + 1),
            rat((m - 1) * (n - m * m + 1)),
            rat(m * m * m),
            rat(m * m * (n - m)),
            BigRational::new(((m - 1) * (n - m) * (n - m * m + 1)).into(), m.into()),
            rat(m * (m + 1)),
        ),
    };
    Ok(Cab2Prediction {
        alpha2,
        beta2,
        delta2,
        a2,
        b2,
        c2,
    })
}

/// `(4b^2 + 1)(mu' + 1)`.
pub fn c2_bound(b: &ExactScalar, mu_p: i64) -> Result<ExactScalar> {
    if b.signum()? <= 0 {
        return Err(Error::precondition("b must be positive"));
    }
    Ok(b.mul(b)?
        .mul_rational(&rat(4))
        .add_rational(&BigRational::one())
        .mul_rational(&rat(mu_p + 1)))
}

/// Common neighbours of `x`, `y`, `z` for adjacent `x`, `y` and `z` at
/// distance 2 from both, if the count is constant over all such triples.
/// `None` when no triple exists or the count varies.
pub fn triple_intersection_gamma(g: &Graph) -> Option<u64> {
    let table = DistanceTable::new(g);
    let n = g.n() as u32;
    let counts: Vec<Option<(u64, u64)>> = (0..n)
        .into_par_iter()
        .map(|x| {
            let dx = table.row(x);
            let mut found: Option<u64> = None;
            for &y in g.neighbors(x) {
                let dy = table.row(y);
                for z in 0..n {
                    if dx[z as usize] != 2 || dy[z as usize] != 2 {
                        continue;
                    }
                    let c = g
                        .neighbors(z)
                        .iter()
                        .filter(|&&w| g.adjacent(w, x) && g.adjacent(w, y))
                        .count() as u64;
                    match found {
                        None => found = Some(c),
                        Some(f) if f != c => return Some((f, c)),
                        _ => {}
                    }
                }
            }
            found.map(|f| (f, f))
        })
        .collect();
    let mut value = None;
    for (a, b) in counts.into_iter().flatten() {
        if a != b || *value.get_or_insert(a) != a {
            return None;
        }
    }
    value
}

impl CabFormula {
    /// Predicted `b_i` as integers, if all are integral and positive.
    pub fn integral_b(&self) -> Option<Vec<BigInt>> {
        self.predicted_b
            .iter()
            .map(|b| (b.is_integer() && b.is_positive()).then(|| b.to_integer()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_family, FamilySpec};

    fn grid_data() -> LocalSrgData {
        LocalSrgData::from_local(&"25,8,3,2".parse().unwrap()).unwrap()
    }

    fn t10_data() -> LocalSrgData {
        LocalSrgData::from_local(&"45,16,8,4".parse().unwrap()).unwrap()
    }

    fn ints(levels: &[CabLevelParams]) -> Vec<[i64; 4]> {
        levels
            .iter()
            .map(|l| l.tuple().map(|x| i64::try_from(x.to_integer()).unwrap()))
            .collect()
    }

    #[test]
    fn recursion_on_grid_data() {
        let f = cab_formula_params(&grid_data(), &[1, 4, 9, 16]).unwrap();
        assert_eq!(
            ints(&f.levels),
            vec![[0, 1, 4, 2], [2, 2, 3, 4], [4, 3, 2, 6], [6, 4, 1, 8]]
        );
        assert_eq!(f.predicted_b, [16, 9, 4, 1].map(rat).to_vec());
        assert!(f.levels.iter().all(|l| l.integral));
    }

    #[test]
    fn recursion_on_triangular_data() {
        let f = cab_formula_params(&t10_data(), &[1, 6]).unwrap();
        assert_eq!(ints(&f.levels)[1], [4, 3, 5, 8]);
        assert_eq!(f.predicted_b[1], rat(15));
        assert_eq!(f.levels[0].delta, rat(4));
    }

    #[test]
    fn closed_form_agrees_with_recursion() {
        for (data, c2) in [
            (grid_data(), 4),
            (t10_data(), 6),
            (grid_data(), 3),
            (t10_data(), 5),
        ] {
            let rec = cab_formula_params(&data, &[1, c2]).unwrap();
            let cf = cab2_closed_form(&data, c2).unwrap();
            assert_eq!(cf.level, rec.levels[1]);
            assert_eq!(cf.b2, rec.predicted_b[1]);
        }
        let cf = cab2_closed_form(&grid_data(), 4).unwrap();
        assert_eq!((ints(&[cf.level])[0], cf.b2), ([2, 2, 3, 4], rat(9)));
    }

    #[test]
    fn singular_recursion() {
        // a1 = 2 with mu' = 2: the local graph is C4 and delta_1 = a1
        let c4 = LocalSrgData::from_local(&"4,2,0,2".parse().unwrap()).unwrap();
        let err = cab_formula_params(&c4, &[1, 2]).unwrap_err();
        assert!(
            matches!(err, Error::Singularity { level: 2, .. }),
            "{err:?}"
        );
    }

    #[test]
    fn predictions() {
        let t = |k, m, n| predict_cab2(k, m, n).unwrap().as_tuple().map(|x| x.clone());
        assert_eq!(
            t(LocalKind::LatinSquare, 2, 5),
            [2, 3, 4, 12, 9, 4].map(rat)
        );
        assert_eq!(t(LocalKind::Steiner, 2, 8), [3, 5, 8, 24, 15, 6].map(rat));
        assert_eq!(
            t(LocalKind::LatinSquare, 3, 9),
            [3, 6, 18, 54, 18, 9].map(rat)
        );
        assert!(predict_cab2(LocalKind::LatinSquare, 3, 3).is_err());
    }

    #[test]
    fn quotient_matrices() {
        let q = quotient_matrix(
            &CabLevelParams::from_ints(2, [2, 2, 3, 4]),
            8,
            5,
            Some(&grid_data()),
        )
        .unwrap();
        let expect: Vec<Vec<BigRational>> = [[2, 6, 0], [2, 3, 3], [0, 4, 4]]
            .iter()
            .map(|r| r.map(rat).to_vec())
            .collect();
        assert_eq!(q.matrix, expect);
        assert_eq!(
            q.spectrum.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            ["8", "3", "-2"]
        );
        assert_eq!(q.matches_local, Some(true));
        let q = quotient_matrix(&CabLevelParams::from_ints(1, [0, 1, 4, 2]), 8, 5, None).unwrap();
        assert_eq!(q.trace, rat(9));
        for row in &q.matrix {
            assert_eq!(row.iter().sum::<BigRational>(), rat(8));
        }
        let err =
            quotient_matrix(&CabLevelParams::from_ints(5, [8, 0, 0, 0]), 8, 5, None).unwrap_err();
        assert_eq!(err, Error::domain("Q_i undefined at i = D"));
    }

    #[test]
    fn surd_local_spectrum() {
        let ico = LocalSrgData::from_local(&"5,2,0,1".parse().unwrap()).unwrap();
        let f = cab_formula_params(&ico, &[1, 2]).unwrap();
        let q = quotient_matrix(&f.levels[0], 2, 3, Some(&ico)).unwrap();
        assert_eq!(q.matches_local, Some(true));
    }

    #[test]
    fn c2_bounds() {
        let one = ExactScalar::from_int(1);
        assert_eq!(c2_bound(&one, 2).unwrap().to_string(), "15");
        assert_eq!(c2_bound(&one, 4).unwrap().to_string(), "25");
        assert_eq!(
            c2_bound(&ExactScalar::from_int(3), 0).unwrap().to_string(),
            "37"
        );
        assert!(c2_bound(&ExactScalar::from_int(0), 1).is_err());
    }

    #[test]
    fn empirical_levels_on_johnson() {
        let g = build_family(&FamilySpec::Johnson { n: 10, d: 5 }).unwrap();
        let out = cab_partition_check(&g, 5).unwrap();
        assert!(out.holds());
        assert_eq!(
            ints(&out.levels()[..4]),
            vec![[0, 1, 4, 2], [2, 2, 3, 4], [4, 3, 2, 6], [6, 4, 1, 8]]
        );
        assert_eq!(out.levels()[4].gamma, rat(8));
        let rec = cab_formula_params(&grid_data(), &[1, 4, 9, 16]).unwrap();
        assert_eq!(out.levels()[..4], rec.levels[..]);
        for lvl in &out.levels()[..4] {
            assert_eq!(
                quotient_matrix(lvl, 8, 5, Some(&grid_data()))
                    .unwrap()
                    .matches_local,
                Some(true)
            );
        }
        assert_eq!(triple_intersection_gamma(&g), Some(2));
    }

    #[test]
    fn empirical_preconditions_and_failures() {
        let pet = build_family(&FamilySpec::Petersen).unwrap();
        assert!(matches!(
            cab_partition_check(&pet, 1),
            Err(Error::Precondition(_))
        ));
        let h = build_family(&FamilySpec::Hamming { d: 5, q: 3 }).unwrap();
        assert!(cab_partition_check(&h, 1).unwrap().holds());
        // the 4x4 rook graph is distance-regular with a1 = 2, CAB_1 holds
        let rook = build_family(&FamilySpec::Grid { p: 4, q: 4 }).unwrap();
        assert!(cab_partition_check(&rook, 2).unwrap().holds());
    }
}
