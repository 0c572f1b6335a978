//! Adjacency spectra with exact eigenvalues.
//!
//! The minimal polynomial comes from Berlekamp-Massey on a seeded Krylov
//! sequence `u^T A^i v` and is certified by checking `mu(A) e_x = 0` for every
//! vertex `x`. Multiplicities solve the power-sum system
//! `sum_f m_f p_j(f) = tr(A^j)`, where `f` runs over the rational roots, the
//! quadratic factors and the remaining factor of `mu`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{CheckedAdd, CheckedMul, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use super::Graph;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::ExactScalar;
use crate::spectrum::real_roots;

#[derive(Clone, Copy, Debug)]
pub struct SpectrumOptions {
    /// Decimal digits for irrational eigenvalues.
    pub precision: u32,
    /// Largest order handled with full certification.
    pub exact_cap: usize,
    /// Above the cap, certify and count on sampled vertices instead of failing.
    pub sampled_fallback: bool,
    pub seed: u64,
    /// Vertices used above the cap.
    pub sample_size: usize,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            precision: 12,
            exact_cap: 5000,
            sampled_fallback: false,
            seed: 0x5eed,
            sample_size: 64,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumEntry {
    pub value: ExactScalar,
    /// `None` when the power sums could not separate the remaining factor.
    pub multiplicity: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphSpectrum {
    /// Distinct eigenvalues, decreasing.
    pub entries: Vec<SpectrumEntry>,
    /// Minimal polynomial and multiplicities are certified.
    pub exact: bool,
    pub method: &'static str,
    pub minimal_polynomial: String,
}

impl GraphSpectrum {
    pub fn values(&self) -> Vec<ExactScalar> {
        self.entries.iter().map(|e| e.value.clone()).collect()
    }

    pub fn multiplicities(&self) -> Vec<Option<u64>> {
        self.entries.iter().map(|e| e.multiplicity).collect()
    }

    pub fn smallest(&self) -> Option<&ExactScalar> {
        self.entries.last().map(|e| &e.value)
    }
}

pub fn graph_spectrum(g: &Graph, opts: &SpectrumOptions) -> Result<GraphSpectrum> {
    let n = g.n();
    if n == 0 {
        return Ok(GraphSpectrum {
            entries: Vec::new(),
            exact: true,
            method: "empty",
            minimal_polynomial: "1".into(),
        });
    }
    let sampled = n > opts.exact_cap;
    if sampled && !opts.sampled_fallback {
        return Err(Error::Resource(format!(
            "{n} vertices exceed the exact spectrum cap of {}; enable the sampled fallback",
            opts.exact_cap
        )));
    }
    let check_vertices: Vec<u32> = if sampled {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opts.seed ^ 0xa5a5);
        let mut v: Vec<u32> = (0..opts.sample_size.max(1))
            .map(|_| rng.gen_range(0..n as u32))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    } else {
        (0..n as u32).collect()
    };

    let mut found = None;
    for attempt in 0..4u64 {
        let mu = krylov_minimal_polynomial(g, opts.seed.wrapping_add(attempt))?;
        if let Some(traces) = certify(g, &mu, &check_vertices) {
            found = Some((mu, traces));
            break;
        }
    }
    let (mu, traces) =
        found.ok_or_else(|| Error::Internal("minimal polynomial certification failed".into()))?;
    let traces: Vec<BigRational> = if sampled {
        let scale = BigRational::new(BigInt::from(n), BigInt::from(check_vertices.len()));
        traces
            .into_iter()
            .map(|t| BigRational::from_integer(t) * &scale)
            .collect()
    } else {
        traces.into_iter().map(BigRational::from_integer).collect()
    };

    let roots = real_roots(&mu, opts.precision)?;
    if roots.len() != mu.degree() {
        return Err(Error::Internal(format!(
            "minimal polynomial {mu} has non-real roots"
        )));
    }
    let (groups, members) = root_groups(&mu, &roots);
    let mults = solve_multiplicities(&groups, &traces, sampled);
    let exact = !sampled && mults.is_some();
    let entries = roots
        .into_iter()
        .zip(members)
        .map(|(value, gi)| SpectrumEntry {
            value,
            multiplicity: mults.as_ref().map(|m| m[gi]),
        })
        .collect();
    Ok(GraphSpectrum {
        entries,
        exact,
        method: if sampled {
            "sampled-trace"
        } else {
            "certified-minimal-polynomial"
        },
        minimal_polynomial: mu.to_string(),
    })
}

fn krylov_minimal_polynomial(g: &Graph, seed: u64) -> Result<Poly> {
    let n = g.n();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let u: Vec<BigInt> = (0..n)
        .map(|_| BigInt::from(rng.gen_range(-1000i64..=1000)))
        .collect();
    let mut w: Vec<BigInt> = (0..n)
        .map(|_| BigInt::from(rng.gen_range(-1000i64..=1000)))
        .collect();
    let mut seq: Vec<BigRational> = Vec::new();
    let limit = 2 * n + 2;
    loop {
        let s: BigInt = u.iter().zip(&w).map(|(a, b)| a * b).sum();
        seq.push(BigRational::from_integer(s));
        let (conn, len) = berlekamp_massey(&seq);
        if seq.len() >= 2 * len + 8 || seq.len() >= limit {
            let mut coeffs = vec![BigRational::zero(); len + 1];
            for (i, c) in conn.iter().enumerate().take(len + 1) {
                coeffs[len - i] = c.clone();
            }
            return Ok(Poly::new(coeffs));
        }
        w = (0..n as u32)
            .map(|v| g.neighbors(v).iter().map(|&x| &w[x as usize]).sum())
            .collect();
    }
}

/// Connection polynomial `C` (with `C[0] = 1`) and linear complexity.
fn berlekamp_massey(s: &[BigRational]) -> (Vec<BigRational>, usize) {
    let mut c = vec![BigRational::one()];
    let mut b = vec![BigRational::one()];
    let mut len = 0usize;
    let mut shift = 1usize;
    let mut last = BigRational::one();
    for k in 0..s.len() {
        let mut d = s[k].clone();
        for i in 1..=len.min(c.len() - 1) {
            d += &c[i] * &s[k - i];
        }
        if d.is_zero() {
            shift += 1;
            continue;
        }
        let factor = &d / &last;
        let mut next = c.clone();
        if next.len() < b.len() + shift {
            next.resize(b.len() + shift, BigRational::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            next[i + shift] -= &factor * bi;
        }
        if 2 * len <= k {
            b = c;
            len = k + 1 - len;
            last = d;
            shift = 1;
        } else {
            shift += 1;
        }
        c = next;
    }
    c.resize(len + 1, BigRational::zero());
    (c, len)
}

/// Checks `mu(A) e_x = 0` on `vertices`, returning `sum_x (A^j e_x)_x` for
/// `j < deg mu` when every check passes.
fn certify(g: &Graph, mu: &Poly, vertices: &[u32]) -> Option<Vec<BigInt>> {
    let coeffs = mu.integer_coeffs();
    let deg = mu.degree();
    let small: Option<Vec<i128>> = coeffs.iter().map(|c| c.to_i128()).collect();
    let results: Vec<Option<Vec<BigInt>>> = vertices
        .par_iter()
        .map(|&x| {
            if let Some(small) = &small {
                if let Some(r) = chain::<i128>(g, x, small, deg) {
                    return r.map(|t| t.into_iter().map(BigInt::from).collect());
                }
            }
            chain::<BigInt>(g, x, &coeffs, deg).expect("bigint arithmetic cannot overflow")
        })
        .collect();
    let mut traces = vec![BigInt::zero(); deg];
    for r in results {
        for (t, v) in traces.iter_mut().zip(r?) {
            *t += v;
        }
    }
    Some(traces)
}

/// Outer `None`: overflow. Inner `None`: `mu(A) e_x != 0`.
fn chain<T>(g: &Graph, x: u32, coeffs: &[T], deg: usize) -> Option<Option<Vec<T>>>
where
    T: Clone + Zero + CheckedAdd + CheckedMul + PartialEq + OneLike,
{
    let n = g.n();
    let mut w = vec![T::zero(); n];
    w[x as usize] = T::one_like();
    let mut acc: Vec<T> = w
        .iter()
        .map(|v| v.checked_mul(&coeffs[0]))
        .collect::<Option<_>>()?;
    let mut diag = Vec::with_capacity(deg);
    for j in 1..=deg {
        diag.push(w[x as usize].clone());
        let mut next = vec![T::zero(); n];
        for (v, slot) in next.iter_mut().enumerate() {
            let mut s = T::zero();
            for &u in g.neighbors(v as u32) {
                s = s.checked_add(&w[u as usize])?;
            }
            *slot = s;
        }
        w = next;
        for (a, v) in acc.iter_mut().zip(&w) {
            *a = a.checked_add(&v.checked_mul(&coeffs[j])?)?;
        }
    }
    Some(acc.iter().all(Zero::is_zero).then_some(diag))
}

trait OneLike {
    fn one_like() -> Self;
}

impl OneLike for i128 {
    fn one_like() -> Self {
        1
    }
}

impl OneLike for BigInt {
    fn one_like() -> Self {
        BigInt::one()
    }
}

/// Power sums `p_0..p_{count-1}` of the roots of a polynomial.
fn power_sums(f: &Poly, count: usize) -> Vec<BigRational> {
    let f = f.monic();
    let d = f.degree();
    let a = f.coeffs();
    let coef = |i: usize| -> BigRational { a[d - i].clone() };
    let mut p = vec![BigRational::from_integer(BigInt::from(d))];
    for j in 1..count {
        let mut s = BigRational::zero();
        for i in 1..j.min(d + 1) {
            s += coef(i) * &p[j - i];
        }
        if j <= d {
            s += coef(j) * BigRational::from_integer(BigInt::from(j));
        }
        p.push(-s);
    }
    p
}

/// Splits the roots of `mu` into factor groups; returns each group's factor
/// and the group index of every root.
fn root_groups(mu: &Poly, roots: &[ExactScalar]) -> (Vec<Poly>, Vec<usize>) {
    let mut groups: Vec<Poly> = Vec::new();
    let mut keys: Vec<Option<(BigInt, BigInt, BigInt, BigInt)>> = Vec::new();
    let mut member = Vec::with_capacity(roots.len());
    let mut residual = mu.monic();
    let mut residual_group = None;
    for r in roots {
        match r {
            ExactScalar::Rational(q) => {
                residual = residual.div_rem(&Poly::linear_root(q)).0;
                groups.push(Poly::linear_root(q));
                keys.push(None);
                member.push(groups.len() - 1);
            }
            ExactScalar::Surd(s) => {
                let key = (s.p().clone(), s.q().abs(), s.d().clone(), s.e().clone());
                if let Some(i) = keys.iter().position(|k| k.as_ref() == Some(&key)) {
                    member.push(i);
                    continue;
                }
                let e = BigRational::from_integer(s.e().clone());
                let sum = BigRational::from_integer(BigInt::from(2) * s.p()) / &e;
                let prod =
                    BigRational::from_integer(s.p() * s.p() - s.q() * s.q() * s.d()) / (&e * &e);
                let quad = Poly::new(vec![prod, -sum, BigRational::one()]);
                residual = residual.div_rem(&quad).0;
                groups.push(quad);
                keys.push(Some(key));
                member.push(groups.len() - 1);
            }
            ExactScalar::Interval(_) => {
                let i = *residual_group.get_or_insert_with(|| {
                    groups.push(Poly::one());
                    keys.push(None);
                    groups.len() - 1
                });
                member.push(i);
            }
        }
    }
    if let Some(i) = residual_group {
        groups[i] = residual;
    }
    (groups, member)
}

/// Solves for one multiplicity per group, then checks every available trace.
/// All trace rows take part in the elimination: the first `g` alone can be
/// singular once a group holds several conjugate roots.
fn solve_multiplicities(
    groups: &[Poly],
    traces: &[BigRational],
    rounded: bool,
) -> Option<Vec<u64>> {
    let g = groups.len();
    let rows = traces.len().max(g);
    let sums: Vec<Vec<BigRational>> = groups.iter().map(|f| power_sums(f, rows)).collect();
    // row j of the system sum_f m_f p_j(f) = T_j
    let mut m: Vec<Vec<BigRational>> = (0..traces.len())
        .map(|j| {
            (0..g)
                .map(|f| sums[f][j].clone())
                .chain([traces[j].clone()])
                .collect()
        })
        .collect();
    for col in 0..g {
        let piv = (col..m.len()).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..m.len() {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    let sol: Vec<BigRational> = m[..g].iter().map(|row| row[g].clone()).collect();
    if rounded {
        return sol
            .iter()
            .map(|x| x.round().to_integer().to_u64())
            .collect();
    }
    for (j, t) in traces.iter().enumerate() {
        let lhs: BigRational = (0..g).map(|f| &sol[f] * &sums[f][j]).sum();
        if &lhs != t {
            return None;
        }
    }
    sol.iter()
        .map(|x| {
            if x.is_integer() && !x.is_negative() {
                x.to_integer().to_u64()
            } else {
                None
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::test_graphs::*;
    use super::*;

    fn summary(s: &GraphSpectrum) -> Vec<(String, u64)> {
        s.entries
            .iter()
            .map(|e| (e.value.to_string(), e.multiplicity.unwrap()))
            .collect()
    }

    fn pairs(v: &[(&str, u64)]) -> Vec<(String, u64)> {
        v.iter().map(|(a, b)| (a.to_string(), *b)).collect()
    }

    #[test]
    fn octahedron() {
        let g = Graph::from_edges(
            6,
            &[
                (0, 2),
                (0, 3),
                (0, 4),
                (0, 5),
                (1, 2),
                (1, 3),
                (1, 4),
                (1, 5),
                (2, 4),
                (2, 5),
                (3, 4),
                (3, 5),
            ],
        )
        .unwrap();
        let s = graph_spectrum(&g, &SpectrumOptions::default()).unwrap();
        assert!(s.exact);
        assert_eq!(summary(&s), pairs(&[("4", 1), ("0", 3), ("-2", 2)]));
    }

    #[test]
    fn five_by_five_grid() {
        let s = graph_spectrum(&grid(5, 5), &SpectrumOptions::default()).unwrap();
        assert_eq!(summary(&s), pairs(&[("8", 1), ("3", 8), ("-2", 16)]));
    }

    #[test]
    fn pentagon_keeps_surds() {
        let s = graph_spectrum(&cycle(5), &SpectrumOptions::default()).unwrap();
        assert_eq!(
            summary(&s),
            pairs(&[("2", 1), ("(-1+sqrt(5))/2", 2), ("(-1-sqrt(5))/2", 2)])
        );
    }

    #[test]
    fn conjugate_surds_share_a_multiplicity() {
        let g = crate::families::build_family(&crate::families::FamilySpec::Icosahedron).unwrap();
        let s = graph_spectrum(&g, &SpectrumOptions::default()).unwrap();
        assert!(s.exact);
        assert_eq!(
            summary(&s),
            pairs(&[("5", 1), ("sqrt(5)", 3), ("-1", 5), ("-sqrt(5)", 3)])
        );
    }

    #[test]
    fn heptagon_has_cubic_eigenvalues() {
        // 2cos(2 pi k / 7) are roots of x^3 + x^2 - 2x - 1
        let s = graph_spectrum(&cycle(7), &SpectrumOptions::default()).unwrap();
        assert_eq!(s.entries.len(), 4);
        assert!(s.exact);
        assert_eq!(s.multiplicities(), vec![Some(1), Some(2), Some(2), Some(2)]);
        let approx = s.entries[1].value.to_f64();
        assert!((approx - 2.0 * (2.0 * std::f64::consts::PI / 7.0).cos()).abs() < 1e-10);
    }

    #[test]
    fn disconnected_and_trivial_graphs() {
        let g = Graph::from_adjacency(vec![vec![]; 3]).unwrap();
        let s = graph_spectrum(&g, &SpectrumOptions::default()).unwrap();
        assert_eq!(summary(&s), pairs(&[("0", 3)]));
        let g = Graph::from_edges(5, &[(0, 1), (2, 3), (3, 4), (2, 4)]).unwrap();
        let s = graph_spectrum(&g, &SpectrumOptions::default()).unwrap();
        assert_eq!(summary(&s), pairs(&[("2", 1), ("1", 1), ("-1", 3)]));
    }

    #[test]
    fn cap_is_enforced() {
        let opts = SpectrumOptions {
            exact_cap: 5,
            ..Default::default()
        };
        assert!(matches!(
            graph_spectrum(&petersen(), &opts),
            Err(Error::Resource(_))
        ));
        let opts = SpectrumOptions {
            exact_cap: 5,
            sampled_fallback: true,
            ..Default::default()
        };
        let s = graph_spectrum(&petersen(), &opts).unwrap();
        assert!(!s.exact);
        // vertex-transitive, so sampled traces are exact anyway
        assert_eq!(summary(&s), pairs(&[("3", 1), ("1", 5), ("-2", 4)]));
    }

    #[test]
    fn matches_numeric_diagonalization() {
        let g = petersen();
        let n = g.n();
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| {
            if g.adjacent(i as u32, j as u32) {
                1.0
            } else {
                0.0
            }
        });
        let mut numeric: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
        numeric.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let s = graph_spectrum(&g, &SpectrumOptions::default()).unwrap();
        let mut expanded = Vec::new();
        for e in &s.entries {
            for _ in 0..e.multiplicity.unwrap() {
                expanded.push(e.value.to_f64());
            }
        }
        for (a, b) in expanded.iter().zip(&numeric) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}
