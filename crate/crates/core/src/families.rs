//! Constructors for the named graph families and antipodal folding.
//!
//! Vertices are numbered by the lexicographic rank of their combinatorial
//! label (subsets as increasing tuples, words with the first coordinate most
//! significant), so the same spec always yields the same adjacency lists.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{DistanceTable, Graph, UNREACHABLE};

/// Default bound on the order of a constructed graph.
pub const DEFAULT_VERTEX_CAP: usize = 2_000_000;

/// Environment variable overriding [`DEFAULT_VERTEX_CAP`].
pub const VERTEX_CAP_ENV: &str = "DRG_LAB_VERTEX_CAP";

/// Above this order, folding validates antipodality on sampled vertices only.
pub const EXHAUSTIVE_FOLD_LIMIT: usize = 10_000;

pub fn vertex_cap() -> usize {
    std::env::var(VERTEX_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_VERTEX_CAP)
}

/// Orthogonal array `OA(m, n)`: `m` rows of `n^2` symbols from `0..n`, any two
/// rows containing every ordered symbol pair exactly once.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrthogonalArray {
    rows: Vec<Vec<u32>>,
    n: u32,
}

impl OrthogonalArray {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::input("orthogonal array needs at least two rows"));
        }
        let len = rows[0].len();
        let n = (len as f64).sqrt().round() as u32;
        if (n as usize) * (n as usize) != len || n < 2 {
            return Err(Error::input(format!(
                "row length {len} is not a square n^2 with n >= 2"
            )));
        }
        if rows.len() > n as usize + 1 {
            return Err(Error::input(format!(
                "{} rows exceed the maximum n + 1 = {}",
                rows.len(),
                n + 1
            )));
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != len {
                return Err(Error::input(format!(
                    "row {r} has length {}, expected {len}",
                    row.len()
                )));
            }
            if let Some(&s) = row.iter().find(|&&s| s >= n) {
                return Err(Error::input(format!(
                    "row {r} contains symbol {s} outside 0..{n}"
                )));
            }
        }
        for a in 0..rows.len() {
            for b in a + 1..rows.len() {
                let mut seen = vec![false; len];
                for col in 0..len {
                    let key = (rows[a][col] * n + rows[b][col]) as usize;
                    if std::mem::replace(&mut seen[key], true) {
                        return Err(Error::input(format!(
                            "rows {a} and {b} repeat the symbol pair ({}, {}): not an orthogonal array of index 1",
                            rows[a][col], rows[b][col]
                        )));
                    }
                }
            }
        }
        Ok(OrthogonalArray { rows, n })
    }

    /// Rows, columns and the cyclic group table `i + j mod n`, truncated to `m <= 3` rows.
    pub fn cyclic(m: u32, n: u32) -> Result<Self> {
        if !(2..=3).contains(&m) {
            return Err(Error::input(format!(
                "the cyclic construction covers m = 2 or 3 only (got m = {m}); supply orthogonal array data for larger m"
            )));
        }
        if n < m {
            return Err(Error::input(format!("need n >= m, got m = {m}, n = {n}")));
        }
        let cells: Vec<(u32, u32)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        let mut rows = vec![
            cells.iter().map(|c| c.0).collect::<Vec<_>>(),
            cells.iter().map(|c| c.1).collect::<Vec<_>>(),
        ];
        if m == 3 {
            rows.push(cells.iter().map(|c| (c.0 + c.1) % n).collect());
        }
        OrthogonalArray::new(rows)
    }

    pub fn m(&self) -> u32 {
        self.rows.len() as u32
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }
}

/// Blocks of a Steiner system `S(2, m, v)`: equal-size blocks with every pair
/// of points in exactly one block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SteinerSystem {
    blocks: Vec<Vec<u32>>,
    points: usize,
}

impl SteinerSystem {
    pub fn new(mut blocks: Vec<Vec<u32>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::input("no blocks given"));
        }
        for b in blocks.iter_mut() {
            b.sort_unstable();
            if b.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::input(format!("block {b:?} repeats a point")));
            }
        }
        let m = blocks[0].len();
        if m < 2 {
            return Err(Error::input("blocks must have at least two points"));
        }
        if let Some(b) = blocks.iter().find(|b| b.len() != m) {
            return Err(Error::input(format!(
                "block {b:?} has size {}, expected {m}",
                b.len()
            )));
        }
        let mut pts: Vec<u32> = blocks.iter().flatten().copied().collect();
        pts.sort_unstable();
        pts.dedup();
        let index: HashMap<u32, usize> = pts.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let v = pts.len();
        let mut cover = vec![0u8; v * v];
        for b in &blocks {
            for (i, &p) in b.iter().enumerate() {
                for &q in &b[i + 1..] {
                    let (a, c) = (index[&p], index[&q]);
                    if cover[a * v + c] == 1 {
                        return Err(Error::input(format!(
                            "points {p} and {q} lie in more than one block (pair axiom violated)"
                        )));
                    }
                    cover[a * v + c] = 1;
                }
            }
        }
        for a in 0..v {
            for c in a + 1..v {
                if cover[a * v + c] == 0 {
                    return Err(Error::input(format!(
                        "points {} and {} lie in no common block (pair axiom violated)",
                        pts[a], pts[c]
                    )));
                }
            }
        }
        blocks.sort();
        Ok(SteinerSystem { blocks, points: v })
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn block_size(&self) -> usize {
        self.blocks[0].len()
    }

    pub fn points(&self) -> usize {
        self.points
    }
}

/// The constructible families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    Johnson {
        n: u32,
        d: u32,
    },
    Hamming {
        d: u32,
        q: u32,
    },
    Hypercube {
        l: u32,
    },
    HalvedCube {
        l: u32,
    },
    /// Folded `J(n, n/2)`.
    FoldedJohnson {
        n: u32,
    },
    /// Folded halved `l`-cube, `l` even.
    FoldedHalvedCube {
        l: u32,
    },
    Grid {
        p: u32,
        q: u32,
    },
    CompleteMultipartite {
        t: u32,
        m: u32,
    },
    CocktailParty {
        t: u32,
    },
    Triangular {
        n: u32,
    },
    LatinSquareGraph {
        oa: OrthogonalArray,
    },
    SteinerBlockGraph {
        system: SteinerSystem,
    },
    Cycle {
        n: u32,
    },
    Complete {
        n: u32,
    },
    Icosahedron,
    Petersen,
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

impl FamilySpec {
    /// Closed-form number of vertices (`None` on overflow).
    pub fn order(&self) -> Option<u64> {
        use FamilySpec::*;
        match self {
            Johnson { n, d } => binomial(*n as u64, *d as u64),
            Hamming { d, q } => (*q as u64).checked_pow(*d),
            Hypercube { l } => 2u64.checked_pow(*l),
            HalvedCube { l } => 2u64.checked_pow(l.checked_sub(1)?),
            FoldedJohnson { n } => binomial(*n as u64, (*n / 2) as u64).map(|b| b / 2),
            FoldedHalvedCube { l } => 2u64.checked_pow(l.checked_sub(2)?),
            Grid { p, q } => Some(*p as u64 * *q as u64),
            CompleteMultipartite { t, m } => Some(*t as u64 * *m as u64),
            CocktailParty { t } => Some(2 * *t as u64),
            Triangular { n } => binomial(*n as u64, 2),
            LatinSquareGraph { oa } => Some((oa.n() as u64).pow(2)),
            SteinerBlockGraph { system } => Some(system.blocks().len() as u64),
            Cycle { n } | Complete { n } => Some(*n as u64),
            Icosahedron => Some(12),
            Petersen => Some(10),
        }
    }

    fn validate(&self) -> Result<()> {
        use FamilySpec::*;
        let bad = |msg: String| Err(Error::input(msg));
        match self {
            Johnson { n, d } if *d == 0 || d >= n => {
                bad(format!("Johnson J({n},{d}) needs 1 <= d < n"))
            }
            Hamming { d, q } if *d == 0 || *q < 2 => {
                bad(format!("Hamming H({d},{q}) needs D >= 1, q >= 2"))
            }
            Hypercube { l } if *l == 0 => bad("hypercube needs l >= 1".into()),
            HalvedCube { l } if *l < 2 => bad("halved cube needs l >= 2".into()),
            FoldedJohnson { n } if *n < 4 || n % 2 == 1 => {
                bad(format!("folded Johnson needs even n >= 4, got {n}"))
            }
            FoldedHalvedCube { l } if *l < 4 || l % 2 == 1 => {
                bad(format!("folded halved cube needs even l >= 4, got {l}"))
            }
            Grid { p, q } if *p == 0 || *q == 0 => bad("grid sides must be positive".into()),
            CompleteMultipartite { t, m } if *t == 0 || *m == 0 => {
                bad("complete multipartite needs t, m >= 1".into())
            }
            CocktailParty { t } if *t == 0 => bad("cocktail party needs t >= 1".into()),
            Triangular { n } if *n < 2 => bad("triangular graph needs n >= 2".into()),
            Cycle { n } if *n < 3 => bad("cycle needs n >= 3".into()),
            Complete { n } if *n == 0 => bad("complete graph needs n >= 1".into()),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FamilySpec::*;
        match self {
            Johnson { n, d } => write!(f, "Johnson J({n},{d})"),
            Hamming { d, q } => write!(f, "Hamming H({d},{q})"),
            Hypercube { l } => write!(f, "{l}-cube"),
            HalvedCube { l } => write!(f, "halved {l}-cube"),
            FoldedJohnson { n } => write!(f, "folded Johnson J({n},{})", n / 2),
            FoldedHalvedCube { l } => write!(f, "folded halved {l}-cube"),
            Grid { p, q } => write!(f, "{p}x{q} grid"),
            CompleteMultipartite { t, m } => write!(f, "K_{{{t}x{m}}}"),
            CocktailParty { t } => write!(f, "cocktail party CP({t})"),
            Triangular { n } => write!(f, "triangular T({n})"),
            LatinSquareGraph { oa } => write!(f, "Latin square graph LS_{}({})", oa.m(), oa.n()),
            SteinerBlockGraph { system } => {
                write!(
                    f,
                    "block graph of S(2,{},{})",
                    system.block_size(),
                    system.points()
                )
            }
            Cycle { n } => write!(f, "cycle C{n}"),
            Complete { n } => write!(f, "complete K{n}"),
            Icosahedron => write!(f, "icosahedron"),
            Petersen => write!(f, "Petersen"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    /// `name[:a[,b]]`, e.g. `johnson:10,5`, `halved-cube:11`,
    /// `latin-square:2,5` (cyclic construction), `icosahedron`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (name, args) = s.split_once(':').unwrap_or((s.as_str(), ""));
        let nums: Vec<u32> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad family parameter {t:?}")))
                })
                .collect::<Result<_>>()?
        };
        let want = |k: usize| -> Result<()> {
            if nums.len() == k {
                Ok(())
            } else {
                Err(Error::Parse(format!(
                    "family {name:?} takes {k} parameter(s), got {}",
                    nums.len()
                )))
            }
        };
        use FamilySpec::*;
        let spec = match name.replace('_', "-").as_str() {
            "johnson" => want(2).map(|_| Johnson {
                n: nums[0],
                d: nums[1],
            })?,
            "hamming" => want(2).map(|_| Hamming {
                d: nums[0],
                q: nums[1],
            })?,
            "hypercube" | "cube" => want(1).map(|_| Hypercube { l: nums[0] })?,
            "halved-cube" => want(1).map(|_| HalvedCube { l: nums[0] })?,
            "folded-johnson" => want(1).map(|_| FoldedJohnson { n: nums[0] })?,
            "folded-halved-cube" => want(1).map(|_| FoldedHalvedCube { l: nums[0] })?,
            "grid" => want(2).map(|_| Grid {
                p: nums[0],
                q: nums[1],
            })?,
            "complete-multipartite" => want(2).map(|_| CompleteMultipartite {
                t: nums[0],
                m: nums[1],
            })?,
            "cocktail-party" => want(1).map(|_| CocktailParty { t: nums[0] })?,
            "triangular" => want(1).map(|_| Triangular { n: nums[0] })?,
            "latin-square" => {
                want(2)?;
                LatinSquareGraph {
                    oa: OrthogonalArray::cyclic(nums[0], nums[1])?,
                }
            }
            "cycle" => want(1).map(|_| Cycle { n: nums[0] })?,
            "complete" => want(1).map(|_| Complete { n: nums[0] })?,
            "icosahedron" => want(0).map(|_| Icosahedron)?,
            "petersen" => want(0).map(|_| Petersen)?,
            other => return Err(Error::Parse(format!("unknown family {other:?}"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Builds the graph of `spec`, refusing orders above [`vertex_cap`].
pub fn build_family(spec: &FamilySpec) -> Result<Graph> {
    build_family_with_cap(spec, vertex_cap())
}

pub fn build_family_with_cap(spec: &FamilySpec, cap: usize) -> Result<Graph> {
    spec.validate()?;
    let order = spec
        .order()
        .ok_or_else(|| Error::Resource(format!("{spec} is too large to count")))?;
    // folded graphs materialize their parent first
    let materialized = match spec {
        FamilySpec::FoldedJohnson { .. } | FamilySpec::FoldedHalvedCube { .. } => {
            order.saturating_mul(2)
        }
        _ => order,
    };
    if materialized > cap as u64 {
        return Err(Error::Resource(format!(
            "{spec} needs {materialized} vertices, above the cap of {cap} (set {VERTEX_CAP_ENV} to raise it)"
        )));
    }
    use FamilySpec::*;
    Ok(match spec {
        Johnson { n, d } => johnson(*n, *d),
        Hamming { d, q } => hamming(*d, *q),
        Hypercube { l } => hamming(*l, 2),
        HalvedCube { l } => halved_cube(*l),
        FoldedJohnson { n } => {
            let parent = johnson(*n, n / 2);
            let ranker = SubsetRanker::new(*n, n / 2);
            let full = (1u64 << n) - 1;
            fold_by_involution(&parent, |x| ranker.rank(ranker.unrank_mask(x) ^ full))?
        }
        FoldedHalvedCube { l } => {
            let parent = halved_cube(*l);
            let mask = (1u64 << l) - 1;
            // even-weight words w have rank w >> 1
            fold_by_involution(&parent, |x| {
                let w = even_word(x);
                ((w ^ mask) >> 1) as u32
            })?
        }
        Grid { p, q } => from_predicate((p * q) as usize, |a, b| a / q == b / q || a % q == b % q),
        CompleteMultipartite { t: _, m } => from_predicate(order as usize, |a, b| a / m != b / m),
        CocktailParty { t: _ } => from_predicate(order as usize, |a, b| a / 2 != b / 2),
        Triangular { n } => johnson(*n, 2),
        LatinSquareGraph { oa } => latin_square_graph(oa),
        SteinerBlockGraph { system } => {
            let blocks = system.blocks();
            from_predicate(blocks.len(), |a, b| {
                let (x, y) = (&blocks[a as usize], &blocks[b as usize]);
                x.iter().filter(|p| y.binary_search(p).is_ok()).count() == 1
            })
        }
        Cycle { n } => from_predicate(*n as usize, |a, b| (a + 1) % n == b || (b + 1) % n == a),
        Complete { n } => from_predicate(*n as usize, |_, _| true),
        Icosahedron => icosahedron(),
        Petersen => {
            let pairs = subsets(5, 2);
            from_predicate(10, |a, b| pairs[a as usize] & pairs[b as usize] == 0)
        }
    })
}

/// Dense construction from a symmetric adjacency predicate (small graphs).
fn from_predicate(n: usize, adj: impl Fn(u32, u32) -> bool + Sync) -> Graph {
    let lists = (0..n as u32)
        .into_par_iter()
        .map(|a| (0..n as u32).filter(|&b| a != b && adj(a, b)).collect())
        .collect();
    Graph::from_sorted_unchecked(lists)
}

/// `k`-subsets of `0..n` as bitmasks (bit `i` = element `i`), in lexicographic
/// order of their increasing tuples.
fn subsets(n: u32, k: u32) -> Vec<u64> {
    let mut out = Vec::new();
    let mut comb: Vec<u32> = (0..k).collect();
    loop {
        out.push(comb.iter().fold(0u64, |m, &i| m | 1 << i));
        let mut i = k as i64 - 1;
        while i >= 0 && comb[i as usize] == n - k + i as u32 {
            i -= 1;
        }
        if i < 0 {
            return out;
        }
        let i = i as usize;
        comb[i] += 1;
        for j in i + 1..k as usize {
            comb[j] = comb[j - 1] + 1;
        }
    }
}

/// Rank lookup for `k`-subsets of `0..n`.
struct SubsetRanker {
    masks: Vec<u64>,
    dense: Option<Vec<u32>>,
    sparse: HashMap<u64, u32>,
}

impl SubsetRanker {
    fn new(n: u32, k: u32) -> Self {
        let masks = subsets(n, k);
        if n <= 24 {
            let mut dense = vec![u32::MAX; 1 << n];
            for (i, &m) in masks.iter().enumerate() {
                dense[m as usize] = i as u32;
            }
            SubsetRanker {
                masks,
                dense: Some(dense),
                sparse: HashMap::new(),
            }
        } else {
            let sparse = masks
                .iter()
                .enumerate()
                .map(|(i, &m)| (m, i as u32))
                .collect();
            SubsetRanker {
                masks,
                dense: None,
                sparse,
            }
        }
    }

    fn rank(&self, mask: u64) -> u32 {
        match &self.dense {
            Some(d) => d[mask as usize],
            None => self.sparse[&mask],
        }
    }

    fn unrank_mask(&self, r: u32) -> u64 {
        self.masks[r as usize]
    }
}

fn johnson(n: u32, d: u32) -> Graph {
    let ranker = SubsetRanker::new(n, d);
    let lists = ranker
        .masks
        .par_iter()
        .map(|&a| {
            let mut nb = Vec::with_capacity((d * (n - d)) as usize);
            for i in 0..n {
                if a >> i & 1 == 0 {
                    continue;
                }
                for j in 0..n {
                    if a >> j & 1 == 1 {
                        continue;
                    }
                    nb.push(ranker.rank(a ^ (1 << i) ^ (1 << j)));
                }
            }
            nb.sort_unstable();
            nb
        })
        .collect();
    Graph::from_sorted_unchecked(lists)
}

fn hamming(d: u32, q: u32) -> Graph {
    let n = (q as usize).pow(d);
    let lists = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut nb = Vec::with_capacity((d * (q - 1)) as usize);
            let mut place = 1usize;
            for _ in 0..d {
                let digit = x / place % q as usize;
                for s in 0..q as usize {
                    if s != digit {
                        nb.push((x - digit * place + s * place) as u32);
                    }
                }
                place *= q as usize;
            }
            nb.sort_unstable();
            nb
        })
        .collect();
    Graph::from_sorted_unchecked(lists)
}

/// Even-weight word of rank `r` (ranks follow numeric order).
fn even_word(r: u32) -> u64 {
    let hi = (r as u64) << 1;
    if hi.count_ones().is_multiple_of(2) {
        hi
    } else {
        hi | 1
    }
}

fn halved_cube(l: u32) -> Graph {
    let n = 1usize << (l - 1);
    let lists = (0..n as u32)
        .into_par_iter()
        .map(|r| {
            let w = even_word(r);
            let mut nb = Vec::with_capacity((l * (l - 1) / 2) as usize);
            for i in 0..l {
                for j in i + 1..l {
                    nb.push(((w ^ (1 << i) ^ (1 << j)) >> 1) as u32);
                }
            }
            nb.sort_unstable();
            nb
        })
        .collect();
    Graph::from_sorted_unchecked(lists)
}

fn latin_square_graph(oa: &OrthogonalArray) -> Graph {
    let n2 = (oa.n() * oa.n()) as usize;
    let mut columns: Vec<Vec<u32>> = (0..n2)
        .map(|c| oa.rows().iter().map(|r| r[c]).collect())
        .collect();
    columns.sort();
    from_predicate(n2, |a, b| {
        columns[a as usize]
            .iter()
            .zip(&columns[b as usize])
            .filter(|(x, y)| x == y)
            .count()
            == 1
    })
}

fn icosahedron() -> Graph {
    // apex 0, upper ring 1..=5, lower ring 6..=10, apex 11
    let mut edges = Vec::new();
    for i in 0..5u32 {
        let (u, u_next) = (1 + i, 1 + (i + 1) % 5);
        let (w, w_next) = (6 + i, 6 + (i + 1) % 5);
        edges.extend([
            (0, u),
            (u, u_next),
            (u, w),
            (u, w_next),
            (w, w_next),
            (w, 11),
        ]);
    }
    Graph::from_edges(12, &edges).expect("icosahedron edges are valid")
}

/// Quotient by the fixed-point-free involution `sigma`, which must be an
/// automorphism mapping each vertex to its unique vertex at maximal
/// distance. Antipodality is checked from every vertex up to
/// [`EXHAUSTIVE_FOLD_LIMIT`] vertices and from 32 seeded vertices above.
pub fn fold_by_involution(g: &Graph, sigma: impl Fn(u32) -> u32 + Sync) -> Result<Graph> {
    let n = g.n() as u32;
    let images: Vec<u32> = (0..n).into_par_iter().map(&sigma).collect();
    for x in 0..n {
        let y = images[x as usize];
        if y >= n || y == x || images[y as usize] != x {
            return Err(Error::input(format!(
                "not antipodal: pairing map is not a fixed-point-free involution at {x}"
            )));
        }
    }
    let broken = (0..n).into_par_iter().find_first(|&x| {
        let sx = images[x as usize];
        let mut mapped: Vec<u32> = g.neighbors(x).iter().map(|&w| images[w as usize]).collect();
        mapped.sort_unstable();
        mapped != g.neighbors(sx)
    });
    if let Some(x) = broken {
        return Err(Error::input(format!(
            "not antipodal: pairing map is not an automorphism at vertex {x}"
        )));
    }
    let checks: Vec<u32> = if (n as usize) <= EXHAUSTIVE_FOLD_LIMIT {
        (0..n).collect()
    } else {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xf01d);
        (0..32).map(|_| rng.gen_range(0..n)).collect()
    };
    let bad = checks.par_iter().find_first(|&&x| {
        let d = g.bfs_distances(x);
        if d.contains(&UNREACHABLE) {
            return true;
        }
        let far = *d.iter().max().unwrap();
        far < 2
            || d.iter().filter(|&&v| v == far).count() != 1
            || d[images[x as usize] as usize] != far
    });
    if let Some(&x) = bad {
        return Err(Error::input(format!(
            "not antipodal: vertex {x} does not have its image as unique farthest vertex"
        )));
    }
    let mut class = vec![0u32; n as usize];
    let mut reps = Vec::with_capacity(n as usize / 2);
    for x in 0..n {
        if x < images[x as usize] {
            class[x as usize] = reps.len() as u32;
            class[images[x as usize] as usize] = reps.len() as u32;
            reps.push(x);
        }
    }
    let lists = reps
        .par_iter()
        .map(|&r| {
            let mut nb: Vec<u32> = g
                .neighbors(r)
                .iter()
                .chain(g.neighbors(images[r as usize]))
                .map(|&w| class[w as usize])
                .collect();
            nb.sort_unstable();
            nb.dedup();
            nb
        })
        .collect();
    Ok(Graph::from_sorted_unchecked(lists))
}

/// Quotient of a connected graph by the relation "equal or at distance D"
/// (D the diameter), which must be an equivalence with classes of one size
/// at least 2. Classes are numbered by their smallest vertex.
pub fn antipodal_quotient(g: &Graph) -> Result<Graph> {
    let n = g.n();
    if n < 2 || !g.is_connected() {
        return Err(Error::input(
            "not antipodal: graph must be connected with at least two vertices",
        ));
    }
    let table = DistanceTable::new(g);
    let rows: Vec<Vec<u8>> = (0..n as u32)
        .into_par_iter()
        .map(|x| table.row(x).into_owned())
        .collect();
    let diameter = rows.iter().map(|r| *r.iter().max().unwrap()).max().unwrap();
    if diameter < 2 {
        return Err(Error::input("not antipodal: diameter below 2"));
    }
    let classes: Vec<Vec<u32>> = rows
        .iter()
        .enumerate()
        .map(|(x, r)| {
            (0..n as u32)
                .filter(|&y| y as usize == x || r[y as usize] == diameter)
                .collect()
        })
        .collect();
    let size = classes[0].len();
    for (x, cl) in classes.iter().enumerate() {
        if cl.len() != size || size < 2 {
            return Err(Error::input(format!(
                "not antipodal: class of vertex {x} has size {}",
                cl.len()
            )));
        }
        if let Some(&y) = cl.iter().find(|&&y| classes[y as usize] != *cl) {
            return Err(Error::input(format!(
                "not antipodal: vertices {x} and {y} are at distance {diameter} but their classes differ"
            )));
        }
    }
    let mut class_id = vec![u32::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if class_id[x] == u32::MAX {
            for &y in &classes[x] {
                class_id[y as usize] = reps.len() as u32;
            }
            reps.push(x);
        }
    }
    let lists = reps
        .iter()
        .map(|&r| {
            let mut nb: Vec<u32> = classes[r]
                .iter()
                .flat_map(|&y| g.neighbors(y).iter().map(|&w| class_id[w as usize]))
                .collect();
            nb.sort_unstable();
            nb.dedup();
            nb
        })
        .collect::<Vec<Vec<u32>>>();
    if lists
        .iter()
        .enumerate()
        .any(|(i, l)| l.binary_search(&(i as u32)).is_ok())
    {
        return Err(Error::input(
            "not antipodal: a class contains adjacent vertices",
        ));
    }
    Ok(Graph::from_sorted_unchecked(lists))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::IntersectionArray;
    use crate::graphs::check_distance_regular;

    fn ia(s: &str) -> IntersectionArray {
        s.parse().unwrap()
    }

    fn array_of(g: &Graph) -> IntersectionArray {
        check_distance_regular(g)
            .unwrap()
            .array()
            .cloned()
            .expect("distance-regular")
    }

    fn spec(s: &str) -> FamilySpec {
        s.parse().unwrap()
    }

    #[test]
    fn johnson_10_5() {
        let g = build_family(&spec("johnson:10,5")).unwrap();
        assert_eq!(g.n(), 252);
        assert_eq!(g.regular_degree(), Some(25));
        assert_eq!(array_of(&g), ia("25,16,9,4,1;1,4,9,16,25"));
    }

    #[test]
    fn halved_cubes() {
        let g = build_family(&spec("halved-cube:10")).unwrap();
        assert_eq!(g.n(), 512);
        assert_eq!(array_of(&g), ia("45,28,15,6,1;1,6,15,28,45"));
        let g = build_family(&spec("halved-cube:11")).unwrap();
        assert_eq!(g.n(), 1024);
        assert_eq!(array_of(&g), ia("55,36,21,10,3;1,6,15,28,45"));
    }

    #[test]
    fn hamming_and_small_families() {
        let g = build_family(&spec("hamming:5,3")).unwrap();
        assert_eq!((g.n(), array_of(&g)), (243, ia("10,8,6,4,2;1,2,3,4,5")));
        assert_eq!(
            array_of(&build_family(&spec("petersen")).unwrap()),
            ia("3,2;1,1")
        );
        assert_eq!(
            array_of(&build_family(&spec("icosahedron")).unwrap()),
            ia("5,2,1;1,2,5")
        );
        assert_eq!(
            array_of(&build_family(&spec("cycle:6")).unwrap()),
            ia("2,1,1;1,1,2")
        );
        assert_eq!(
            array_of(&build_family(&spec("cocktail-party:3")).unwrap()),
            ia("4,1;1,4")
        );
        assert_eq!(
            array_of(&build_family(&spec("complete-multipartite:3,3")).unwrap()),
            ia("6,2;1,6")
        );
        assert_eq!(
            array_of(&build_family(&spec("triangular:6")).unwrap()),
            ia("8,3;1,4")
        );
        assert_eq!(
            array_of(&build_family(&spec("grid:4,4")).unwrap()),
            ia("6,3;1,2")
        );
        assert_eq!(
            array_of(&build_family(&spec("complete:5")).unwrap()),
            ia("4;1")
        );
        assert_eq!(
            array_of(&build_family(&spec("hypercube:4")).unwrap()),
            ia("4,3,2,1;1,2,3,4")
        );
    }

    #[test]
    fn orders_match_closed_forms() {
        for s in [
            "johnson:9,3",
            "hamming:3,4",
            "halved-cube:7",
            "folded-johnson:8",
            "folded-halved-cube:8",
            "grid:3,5",
        ] {
            let sp = spec(s);
            assert_eq!(
                build_family(&sp).unwrap().n() as u64,
                sp.order().unwrap(),
                "{s}"
            );
        }
    }

    #[test]
    fn folded_johnson_12() {
        let g = build_family(&spec("folded-johnson:12")).unwrap();
        assert_eq!(g.n(), 462);
        assert_eq!(array_of(&g), ia("36,25,16;1,4,18"));
        let parent = build_family(&spec("johnson:12,6")).unwrap();
        assert_eq!(
            array_of(&antipodal_quotient(&parent).unwrap()),
            ia("36,25,16;1,4,18")
        );
    }

    #[test]
    fn folded_halved_cube_matches_fold_rule() {
        let g = build_family(&spec("folded-halved-cube:8")).unwrap();
        let parent = array_of(&build_family(&spec("halved-cube:8")).unwrap());
        assert_eq!(array_of(&g), parent.folded().unwrap());
    }

    #[test]
    fn antipodal_quotient_examples() {
        let c6 = build_family(&spec("cycle:6")).unwrap();
        assert_eq!(array_of(&antipodal_quotient(&c6).unwrap()), ia("2;1"));
        let q4 = antipodal_quotient(&build_family(&spec("hypercube:4")).unwrap()).unwrap();
        assert_eq!(q4.n(), 8);
        assert_eq!(array_of(&q4), ia("4,3;1,4"));
        for l in 3..=7 {
            let q =
                antipodal_quotient(&build_family(&FamilySpec::Hypercube { l }).unwrap()).unwrap();
            assert_eq!(q.n(), 1 << (l - 1));
        }
        let pet = build_family(&spec("petersen")).unwrap();
        assert!(antipodal_quotient(&pet).is_err());
    }

    #[test]
    fn fold_rejects_bad_maps() {
        let c6 = build_family(&spec("cycle:6")).unwrap();
        assert!(fold_by_involution(&c6, |x| x).is_err());
        assert!(fold_by_involution(&c6, |x| x ^ 1).is_err());
        assert!(fold_by_involution(&c6, |x| (x + 3) % 6).is_ok());
    }

    #[test]
    fn steiner_block_graphs() {
        let fano = vec![
            vec![0, 1, 2],
            vec![0, 3, 4],
            vec![0, 5, 6],
            vec![1, 3, 5],
            vec![1, 4, 6],
            vec![2, 3, 6],
            vec![2, 4, 5],
        ];
        let g = build_family(&FamilySpec::SteinerBlockGraph {
            system: SteinerSystem::new(fano).unwrap(),
        })
        .unwrap();
        assert_eq!((g.n(), g.regular_degree()), (7, Some(6)));
        let err = SteinerSystem::new(vec![vec![0, 1, 2], vec![0, 1, 3]]).unwrap_err();
        assert!(err.to_string().contains("pair axiom"));
        assert!(SteinerSystem::new(vec![vec![0, 1, 2], vec![3, 4]]).is_err());
    }

    #[test]
    fn latin_square_graphs() {
        let g = build_family(&spec("latin-square:2,5")).unwrap();
        assert_eq!(
            array_of(&g),
            array_of(&build_family(&spec("grid:5,5")).unwrap())
        );
        let g = build_family(&spec("latin-square:3,4")).unwrap();
        // LS_3(4): (16, 9, 4, 6)
        assert_eq!(array_of(&g), ia("9,4;1,6"));
        assert!(OrthogonalArray::cyclic(4, 5).is_err());
        assert!(OrthogonalArray::new(vec![vec![0, 0, 1, 1], vec![0, 0, 1, 1]]).is_err());
    }

    #[test]
    fn vertex_cap_is_enforced() {
        let err = build_family_with_cap(&spec("johnson:20,10"), 1000).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
    }

    #[test]
    fn spec_parsing() {
        assert!("johnson:10".parse::<FamilySpec>().is_err());
        assert!("johnson:5,5".parse::<FamilySpec>().is_err());
        assert!("folded-johnson:11".parse::<FamilySpec>().is_err());
        assert!("nonsense".parse::<FamilySpec>().is_err());
        assert_eq!(spec("Halved_Cube:10"), FamilySpec::HalvedCube { l: 10 });
        assert_eq!(spec("johnson:10,5").to_string(), "Johnson J(10,5)");
    }
}
