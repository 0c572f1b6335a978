use rayon::prelude::*;
use serde::Serialize;

use super::{pairs_at_distance, DistanceTable, Graph, PairSelection, UNREACHABLE};
use crate::array::IntersectionArray;
use crate::error::{Error, Result};

/// Induced subgraph with the parent id of each of its vertices.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// `map[i]` is the parent vertex behind local vertex `i`.
    pub map: Vec<u32>,
}

/// Pair `(x, y)` whose counts `(c, a, b)` differ from the reference at that
/// distance (or whose distance never occurs from the reference vertex).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DrgWitness {
    pub x: u32,
    pub y: u32,
    pub distance: u32,
    pub expected: Option<[u64; 3]>,
    pub found: [u64; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum DrgOutcome {
    DistanceRegular { array: IntersectionArray },
    NotDistanceRegular { witness: DrgWitness },
}

impl DrgOutcome {
    pub fn array(&self) -> Option<&IntersectionArray> {
        match self {
            DrgOutcome::DistanceRegular { array } => Some(array),
            DrgOutcome::NotDistanceRegular { .. } => None,
        }
    }
}

/// `(c, a, b)` counts of `y` relative to the BFS layers in `dist`.
fn layer_counts(g: &Graph, dist: &[u32], y: u32) -> [u64; 3] {
    let dy = dist[y as usize];
    let mut out = [0u64; 3];
    for &w in g.neighbors(y) {
        let dw = dist[w as usize];
        if dw + 1 == dy {
            out[0] += 1;
        } else if dw == dy {
            out[1] += 1;
        } else {
            out[2] += 1;
        }
    }
    out
}

/// Checks distance-regularity over every ordered pair.
pub fn check_distance_regular(g: &Graph) -> Result<DrgOutcome> {
    let sources: Vec<u32> = (0..g.n() as u32).collect();
    check_distance_regular_from(g, &sources)
}

/// Checks the pairs `(x, y)` with `x` in `sources` (all `y`); the first
/// source fixes the reference counts. With every vertex as a source this is
/// the exhaustive check; a subset gives a sampled refutation test.
pub fn check_distance_regular_from(g: &Graph, sources: &[u32]) -> Result<DrgOutcome> {
    let n = g.n();
    if n < 2 {
        return Err(Error::input(
            "distance-regularity needs at least two vertices",
        ));
    }
    let Some(&first) = sources.first() else {
        return Err(Error::input("no source vertices given"));
    };
    if sources.iter().any(|&s| s as usize >= n) {
        return Err(Error::input("source vertex out of range"));
    }
    let dist0 = g.bfs_distances(first);
    if dist0.contains(&UNREACHABLE) {
        return Err(Error::input("graph is disconnected"));
    }
    let diameter = *dist0.iter().max().unwrap() as usize;
    let mut reference: Vec<Option<[u64; 3]>> = vec![None; diameter + 1];
    for y in 0..n as u32 {
        let d = dist0[y as usize] as usize;
        let found = layer_counts(g, &dist0, y);
        match reference[d] {
            None => reference[d] = Some(found),
            Some(r) if r != found => {
                return Ok(DrgOutcome::NotDistanceRegular {
                    witness: DrgWitness {
                        x: first,
                        y,
                        distance: d as u32,
                        expected: Some(r),
                        found,
                    },
                })
            }
            Some(_) => {}
        }
    }
    let witness = sources[1..].par_iter().find_map_first(|&x| {
        let dist = g.bfs_distances(x);
        (0..n as u32).find_map(|y| {
            let d = dist[y as usize];
            let found = layer_counts(g, &dist, y);
            let expected = reference.get(d as usize).copied().flatten();
            (expected != Some(found)).then_some(DrgWitness {
                x,
                y,
                distance: d,
                expected,
                found,
            })
        })
    });
    if let Some(witness) = witness {
        return Ok(DrgOutcome::NotDistanceRegular { witness });
    }
    let b = (0..diameter).map(|i| reference[i].unwrap()[2]).collect();
    let c = (1..=diameter).map(|i| reference[i].unwrap()[0]).collect();
    Ok(DrgOutcome::DistanceRegular {
        array: IntersectionArray::new(b, c)?,
    })
}

/// Subgraph induced on the neighbourhood of `x`.
pub fn local_graph(g: &Graph, x: u32) -> InducedSubgraph {
    let map = g.neighbors(x).to_vec();
    InducedSubgraph {
        graph: g.induced(&map),
        map,
    }
}

pub(crate) fn common_neighbors(g: &Graph, x: u32, y: u32) -> Vec<u32> {
    let (a, b) = (g.neighbors(x), g.neighbors(y));
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Subgraph induced on the common neighbours of `x` and `y`, which must be at
/// distance 2.
pub fn mu_graph(g: &Graph, x: u32, y: u32) -> Result<InducedSubgraph> {
    let n = g.n() as u32;
    if x >= n || y >= n {
        return Err(Error::input("vertex out of range"));
    }
    let map = common_neighbors(g, x, y);
    if x == y || g.adjacent(x, y) || map.is_empty() {
        return Err(Error::input(format!(
            "vertices {x} and {y} are not at distance 2"
        )));
    }
    Ok(InducedSubgraph {
        graph: g.induced(&map),
        map,
    })
}

/// Size of a largest independent set, by branch and bound with a greedy
/// clique-cover bound.
pub fn max_coclique_size(g: &Graph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    let words = n.div_ceil(64);
    let mut adj = vec![vec![0u64; words]; n];
    for v in 0..n {
        for &w in g.neighbors(v as u32) {
            adj[v][w as usize >> 6] |= 1 << (w & 63);
        }
    }
    let mut all = vec![0u64; words];
    for v in 0..n {
        all[v >> 6] |= 1 << (v & 63);
    }
    let mut best = 0;
    coclique_search(&adj, all, 0, &mut best);
    best
}

fn popcount(set: &[u64]) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

fn first_bit(set: &[u64]) -> Option<usize> {
    set.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

/// Number of cliques in a greedy clique cover of `set`; an independent set
/// meets each clique at most once.
fn clique_cover_bound(adj: &[Vec<u64>], set: &[u64]) -> usize {
    let mut rest = set.to_vec();
    let mut cliques = 0;
    while let Some(v) = first_bit(&rest) {
        cliques += 1;
        rest[v >> 6] &= !(1 << (v & 63));
        let mut cand: Vec<u64> = rest.iter().zip(&adj[v]).map(|(r, a)| r & a).collect();
        while let Some(w) = first_bit(&cand) {
            rest[w >> 6] &= !(1 << (w & 63));
            for (c, a) in cand.iter_mut().zip(&adj[w]) {
                *c &= a;
            }
        }
    }
    cliques
}

fn coclique_search(adj: &[Vec<u64>], mut cand: Vec<u64>, size: usize, best: &mut usize) {
    loop {
        let count = popcount(&cand);
        if count == 0 {
            *best = (*best).max(size);
            return;
        }
        if size + count <= *best || size + clique_cover_bound(adj, &cand) <= *best {
            return;
        }
        let v = first_bit(&cand).unwrap();
        cand[v >> 6] &= !(1 << (v & 63));
        let with_v: Vec<u64> = cand.iter().zip(&adj[v]).map(|(c, a)| c & !a).collect();
        coclique_search(adj, with_v, size + 1, best);
    }
}

/// Regularity data for the mu-graphs of a distance-regular graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct C2Report {
    pub c2: u64,
    /// Every inspected mu-graph is regular of the same valency.
    pub regular: bool,
    pub kappa: Option<u64>,
    /// Every inspected mu-graph is complete.
    pub terwilliger: bool,
    /// Largest coclique found in any inspected mu-graph.
    pub t_max: usize,
    pub pairs_checked: usize,
    pub selection: PairSelection,
}

pub fn c2_regularity_report(g: &Graph, selection: PairSelection) -> Result<C2Report> {
    let table = DistanceTable::new(g);
    let mut pairs = pairs_at_distance(&table, 2, selection);
    if selection == PairSelection::Exhaustive {
        pairs.retain(|&(x, y)| x < y);
    }
    if pairs.is_empty() {
        return Err(Error::input("no vertices at distance 2 (diameter below 2)"));
    }
    struct PairData {
        size: u64,
        degree: Option<u64>,
        complete: bool,
        coclique: usize,
    }
    let data: Vec<PairData> = pairs
        .par_iter()
        .map(|&(x, y)| {
            let mu = mu_graph(g, x, y).expect("pair at distance 2");
            let size = mu.graph.n() as u64;
            let degree = mu.graph.regular_degree().map(|d| d as u64);
            PairData {
                size,
                degree,
                complete: degree == Some(size - 1),
                coclique: max_coclique_size(&mu.graph),
            }
        })
        .collect();
    let c2 = data[0].size;
    if let Some((i, bad)) = data.iter().enumerate().find(|(_, d)| d.size != c2) {
        let (x, y) = pairs[i];
        return Err(Error::input(format!(
            "not distance-regular: mu-graph of ({x},{y}) has {} vertices, expected {c2}",
            bad.size
        )));
    }
    let kappa = data[0]
        .degree
        .filter(|&k| data.iter().all(|d| d.degree == Some(k)));
    Ok(C2Report {
        c2,
        regular: kappa.is_some(),
        kappa,
        terwilliger: data.iter().all(|d| d.complete),
        t_max: data.iter().map(|d| d.coclique).max().unwrap(),
        pairs_checked: pairs.len(),
        selection,
    })
}

/// `(s, t)` when `g` is the disjoint union of `t + 1` cliques of size `s`.
pub fn clique_union_structure(g: &Graph) -> Option<(usize, usize)> {
    let n = g.n();
    if n == 0 {
        return None;
    }
    let mut seen = vec![false; n];
    let mut size = None;
    let mut components = 0;
    for v in 0..n {
        if seen[v] {
            continue;
        }
        components += 1;
        let comp = g.bfs_distances(v as u32);
        let members: Vec<u32> = (0..n as u32)
            .filter(|&w| comp[w as usize] != UNREACHABLE)
            .collect();
        let s = members.len();
        if members.iter().any(|&w| g.degree(w) != s - 1) {
            return None;
        }
        if *size.get_or_insert(s) != s {
            return None;
        }
        for w in members {
            seen[w as usize] = true;
        }
    }
    size.map(|s| (s, components - 1))
}
