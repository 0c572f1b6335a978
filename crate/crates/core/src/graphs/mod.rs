//! Immutable simple graphs and the combinatorial machinery run on them.

mod partition;
mod regular;
mod spectrum;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use partition::{
    distance_partition, equitable_quotient, EquitableWitness, QuotientOutcome, VertexPartition,
};
pub(crate) use regular::common_neighbors;
pub use regular::{
    c2_regularity_report, check_distance_regular, check_distance_regular_from,
    clique_union_structure, local_graph, max_coclique_size, mu_graph, C2Report, DrgOutcome,
    DrgWitness, InducedSubgraph,
};
pub use spectrum::{graph_spectrum, GraphSpectrum, SpectrumEntry, SpectrumOptions};

/// Distance marker for vertices unreachable from the BFS source.
pub const UNREACHABLE: u32 = u32::MAX;

/// Graphs up to this order also carry dense bitset rows.
pub const BITSET_LIMIT: usize = 16_384;

pub const GRAPH_FORMAT: &str = "drg-graph-v1";

/// Simple undirected graph in compressed sparse row form.
///
/// Neighbour lists are strictly increasing. Graphs with at most
/// [`BITSET_LIMIT`] vertices also keep one bitset row per vertex for
/// constant-time adjacency queries.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    nbrs: Vec<u32>,
    words: usize,
    rows: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    format: String,
    n: usize,
    adj: Vec<Vec<u32>>,
}

impl Graph {
    /// Builds a graph from adjacency lists, sorting each list and rejecting
    /// loops, repeated neighbours, out-of-range ids and asymmetry.
    pub fn from_adjacency(mut adj: Vec<Vec<u32>>) -> Result<Graph> {
        let n = adj.len();
        if n > u32::MAX as usize {
            return Err(Error::Resource(format!(
                "{n} vertices exceed the u32 id space"
            )));
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            for w in list.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::input(format!(
                        "vertex {v} lists neighbour {} twice",
                        w[0]
                    )));
                }
            }
            if let Some(&last) = list.last() {
                if last as usize >= n {
                    return Err(Error::input(format!(
                        "vertex {v} has out-of-range neighbour {last}"
                    )));
                }
            }
            if list.binary_search(&(v as u32)).is_ok() {
                return Err(Error::input(format!("loop at vertex {v}")));
            }
        }
        for (v, list) in adj.iter().enumerate() {
            for &w in list {
                if adj[w as usize].binary_search(&(v as u32)).is_err() {
                    return Err(Error::input(format!(
                        "asymmetric adjacency: {v} -> {w} but not {w} -> {v}"
                    )));
                }
            }
        }
        Ok(Self::from_sorted_unchecked(adj))
    }

    /// Builds a graph from an edge list on `n` vertices.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Graph> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::input(format!(
                    "edge ({u},{v}) out of range for {n} vertices"
                )));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        Graph::from_adjacency(adj)
    }

    /// Caller guarantees sorted, symmetric, loop-free lists.
    pub(crate) fn from_sorted_unchecked(adj: Vec<Vec<u32>>) -> Graph {
        let n = adj.len();
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let total: usize = adj.iter().map(Vec::len).sum();
        let mut nbrs = Vec::with_capacity(total);
        for list in &adj {
            nbrs.extend_from_slice(list);
            offsets.push(nbrs.len());
        }
        let (words, rows) = if n <= BITSET_LIMIT {
            let words = n.div_ceil(64);
            let mut rows = vec![0u64; words * n];
            for (v, list) in adj.iter().enumerate() {
                for &w in list {
                    rows[v * words + (w as usize >> 6)] |= 1u64 << (w & 63);
                }
            }
            (words, rows)
        } else {
            (0, Vec::new())
        };
        Graph {
            offsets,
            nbrs,
            words,
            rows,
        }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.nbrs.len() / 2
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        let v = v as usize;
        &self.nbrs[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: u32) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_bitsets(&self) -> bool {
        self.words > 0 || self.n() == 0
    }

    /// Bitset row of `v`, when available.
    pub fn bitset_row(&self, v: u32) -> Option<&[u64]> {
        if self.words == 0 {
            return None;
        }
        let start = v as usize * self.words;
        Some(&self.rows[start..start + self.words])
    }

    pub fn adjacent(&self, u: u32, v: u32) -> bool {
        if self.words > 0 {
            self.rows[u as usize * self.words + (v as usize >> 6)] >> (v & 63) & 1 == 1
        } else {
            self.neighbors(u).binary_search(&v).is_ok()
        }
    }

    /// Common valency, if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let n = self.n();
        if n == 0 {
            return Some(0);
        }
        let k = self.degree(0);
        (1..n as u32).all(|v| self.degree(v) == k).then_some(k)
    }

    pub fn adjacency_lists(&self) -> Vec<Vec<u32>> {
        (0..self.n() as u32)
            .map(|v| self.neighbors(v).to_vec())
            .collect()
    }

    /// Breadth-first distances from `x`; unreachable vertices get [`UNREACHABLE`].
    pub fn bfs_distances(&self, x: u32) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.n()];
        self.bfs_into(x, &mut dist);
        dist
    }

    pub(crate) fn bfs_into(&self, x: u32, dist: &mut [u32]) {
        dist.fill(UNREACHABLE);
        let mut queue = VecDeque::with_capacity(self.n());
        dist[x as usize] = 0;
        queue.push_back(x);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize] + 1;
            for &w in self.neighbors(u) {
                if dist[w as usize] == UNREACHABLE {
                    dist[w as usize] = du;
                    queue.push_back(w);
                }
            }
        }
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.bfs_distances(0).iter().all(|&d| d != UNREACHABLE)
    }

    /// Subgraph induced on `vertices` (relabelled `0..len` in the given order).
    pub fn induced(&self, vertices: &[u32]) -> Graph {
        let mut index = std::collections::HashMap::with_capacity(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            index.insert(v, i as u32);
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut list: Vec<u32> = self
                    .neighbors(v)
                    .iter()
                    .filter_map(|w| index.get(w).copied())
                    .collect();
                list.sort_unstable();
                list
            })
            .collect();
        Graph::from_sorted_unchecked(adj)
    }

    pub fn to_json(&self) -> String {
        let file = GraphFile {
            format: GRAPH_FORMAT.to_string(),
            n: self.n(),
            adj: self.adjacency_lists(),
        };
        serde_json::to_string(&file).expect("graph serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Graph> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("graph file: {e}")))?;
        if file.format != GRAPH_FORMAT {
            return Err(Error::Parse(format!(
                "unsupported graph format {:?}",
                file.format
            )));
        }
        if file.adj.len() != file.n {
            return Err(Error::input(format!(
                "n = {} but {} adjacency rows",
                file.n,
                file.adj.len()
            )));
        }
        for (v, list) in file.adj.iter().enumerate() {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::input(format!(
                    "adjacency row {v} is not strictly increasing"
                )));
            }
        }
        Graph::from_adjacency(file.adj)
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n(), self.edge_count())
    }
}

/// All-pairs distances, stored densely for graphs small enough and
/// recomputed per source otherwise.
pub struct DistanceTable<'g> {
    graph: &'g Graph,
    dense: Option<Vec<u8>>,
}

/// Largest order for which [`DistanceTable`] stores all pairs.
pub const DENSE_DISTANCE_LIMIT: usize = 8192;

impl<'g> DistanceTable<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        use rayon::prelude::*;
        let n = graph.n();
        if n > DENSE_DISTANCE_LIMIT {
            return DistanceTable { graph, dense: None };
        }
        let mut dense = vec![u8::MAX; n * n];
        dense
            .par_chunks_mut(n.max(1))
            .enumerate()
            .for_each(|(x, row)| {
                let d = graph.bfs_distances(x as u32);
                for (slot, dist) in row.iter_mut().zip(d) {
                    *slot = if dist >= u8::MAX as u32 {
                        u8::MAX
                    } else {
                        dist as u8
                    };
                }
            });
        DistanceTable {
            graph,
            dense: Some(dense),
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    /// Distances from `x`, with `u8::MAX` for unreachable (or absurdly far) vertices.
    pub fn row(&self, x: u32) -> std::borrow::Cow<'_, [u8]> {
        let n = self.graph.n();
        match &self.dense {
            Some(d) => std::borrow::Cow::Borrowed(&d[x as usize * n..(x as usize + 1) * n]),
            None => std::borrow::Cow::Owned(
                self.graph
                    .bfs_distances(x)
                    .into_iter()
                    .map(|d| {
                        if d >= u8::MAX as u32 {
                            u8::MAX
                        } else {
                            d as u8
                        }
                    })
                    .collect(),
            ),
        }
    }

    pub fn distance(&self, x: u32, y: u32) -> Option<u32> {
        let d = match &self.dense {
            Some(d) => d[x as usize * self.graph.n() + y as usize],
            None => self.row(x)[y as usize],
        };
        (d != u8::MAX).then_some(d as u32)
    }
}

/// Which vertex pairs an empirical check visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum PairSelection {
    Exhaustive,
    Sampled { seed: u64, count: usize },
}

/// Ordered pairs `(x, y)` at distance `i`, either all of them in
/// lexicographic order or `count` seeded random draws (source uniform, then
/// target uniform among the vertices at distance `i`).
pub fn pairs_at_distance(
    table: &DistanceTable<'_>,
    i: u32,
    selection: PairSelection,
) -> Vec<(u32, u32)> {
    use rand::{Rng, SeedableRng};
    use rayon::prelude::*;
    let n = table.graph().n() as u32;
    match selection {
        PairSelection::Exhaustive => (0..n)
            .into_par_iter()
            .flat_map_iter(|x| {
                let row = table.row(x);
                (0..n)
                    .filter(|&y| row[y as usize] as u32 == i)
                    .map(|y| (x, y))
                    .collect::<Vec<_>>()
            })
            .collect(),
        PairSelection::Sampled { seed, count } => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut out = Vec::with_capacity(count);
            let mut misses = 0usize;
            while out.len() < count && n > 0 {
                let x = rng.gen_range(0..n);
                let row = table.row(x);
                let targets: Vec<u32> = (0..n).filter(|&y| row[y as usize] as u32 == i).collect();
                if targets.is_empty() {
                    misses += 1;
                    if misses > 64 + 4 * count {
                        break;
                    }
                    continue;
                }
                out.push((x, targets[rng.gen_range(0..targets.len())]));
            }
            out
        }
    }
}

#[cfg(test)]
pub(crate) mod test_graphs {
    use super::Graph;

    pub fn cycle(n: u32) -> Graph {
        let edges: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n as usize, &edges).unwrap()
    }

    pub fn complete(n: u32) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Graph::from_edges(n as usize, &edges).unwrap()
    }

    /// Kneser graph K(5,2).
    pub fn petersen() -> Graph {
        let mut pairs = Vec::new();
        for a in 0..5u32 {
            for b in a + 1..5 {
                pairs.push((1u32 << a) | (1 << b));
            }
        }
        let mut edges = Vec::new();
        for i in 0..10 {
            for j in i + 1..10 {
                if pairs[i] & pairs[j] == 0 {
                    edges.push((i as u32, j as u32));
                }
            }
        }
        Graph::from_edges(10, &edges).unwrap()
    }

    pub fn k4_minus_edge() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
    }

    /// `p x q` rook's graph.
    pub fn grid(p: u32, q: u32) -> Graph {
        let mut edges = Vec::new();
        for a in 0..p * q {
            for b in a + 1..p * q {
                if a / q == b / q || a % q == b % q {
                    edges.push((a, b));
                }
            }
        }
        Graph::from_edges((p * q) as usize, &edges).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::test_graphs::*;
    use super::*;

    #[test]
    fn bfs_examples() {
        assert_eq!(cycle(6).bfs_distances(0), vec![0, 1, 2, 3, 2, 1]);
        let p = petersen();
        for x in 0..10 {
            assert_eq!(*p.bfs_distances(x).iter().max().unwrap(), 2);
        }
        assert_eq!(complete(4).bfs_distances(2), vec![1, 1, 0, 1]);
        let two = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(two.bfs_distances(0)[2], UNREACHABLE);
        assert!(!two.is_connected());
    }

    #[test]
    fn validation_rejects_bad_adjacency() {
        assert!(Graph::from_adjacency(vec![vec![1], vec![]]).is_err());
        assert!(Graph::from_adjacency(vec![vec![0]]).is_err());
        assert!(Graph::from_adjacency(vec![vec![1, 1], vec![0]]).is_err());
        assert!(Graph::from_adjacency(vec![vec![2], vec![]]).is_err());
    }

    #[test]
    fn json_round_trip_and_validation() {
        let p = petersen();
        let text = p.to_json();
        assert!(text.starts_with("{\"format\":\"drg-graph-v1\""));
        assert_eq!(Graph::from_json(&text).unwrap(), p);
        assert!(Graph::from_json(r#"{"format":"drg-graph-v1","n":2,"adj":[[1],[]]}"#).is_err());
        assert!(Graph::from_json(r#"{"format":"other","n":0,"adj":[]}"#).is_err());
        assert!(
            Graph::from_json(r#"{"format":"drg-graph-v1","n":3,"adj":[[2,1],[0],[0]]}"#).is_err()
        );
    }

    #[test]
    fn bitset_rows_match_lists() {
        let g = grid(4, 5);
        for u in 0..20 {
            for v in 0..20 {
                assert_eq!(g.adjacent(u, v), g.neighbors(u).contains(&v));
            }
        }
    }

    #[test]
    fn sampled_pairs_are_deterministic() {
        let g = petersen();
        let t = DistanceTable::new(&g);
        let a = pairs_at_distance(&t, 2, PairSelection::Sampled { seed: 7, count: 20 });
        let b = pairs_at_distance(&t, 2, PairSelection::Sampled { seed: 7, count: 20 });
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
        assert!(a.iter().all(|&(x, y)| t.distance(x, y) == Some(2)));
        assert_eq!(
            pairs_at_distance(&t, 1, PairSelection::Exhaustive).len(),
            30
        );
    }
}
