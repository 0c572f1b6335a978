use serde::Serialize;

use super::{Graph, UNREACHABLE};
use crate::error::{Error, Result};

/// Ordered list of disjoint, nonempty vertex cells with a label per cell.
/// The ground set is the union of the cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexPartition {
    cells: Vec<Vec<u32>>,
    labels: Vec<String>,
}

impl VertexPartition {
    /// Cells are sorted internally; empty or overlapping cells are rejected.
    pub fn new(mut cells: Vec<Vec<u32>>, labels: Vec<String>) -> Result<Self> {
        if cells.len() != labels.len() {
            return Err(Error::input(format!(
                "{} cells but {} labels",
                cells.len(),
                labels.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for (i, cell) in cells.iter_mut().enumerate() {
            if cell.is_empty() {
                return Err(Error::input(format!("cell {i} is empty")));
            }
            cell.sort_unstable();
            for &v in cell.iter() {
                if !seen.insert(v) {
                    return Err(Error::input(format!("vertex {v} lies in two cells")));
                }
            }
        }
        Ok(VertexPartition { cells, labels })
    }

    /// Cells labelled by their index.
    pub fn unlabelled(cells: Vec<Vec<u32>>) -> Result<Self> {
        let labels = (0..cells.len()).map(|i| i.to_string()).collect();
        VertexPartition::new(cells, labels)
    }

    pub fn cells(&self) -> &[Vec<u32>] {
        &self.cells
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    /// Cell index per vertex of an `n`-vertex graph (`u32::MAX` outside the ground set).
    pub fn cell_of(&self, n: usize) -> Result<Vec<u32>> {
        let mut out = vec![u32::MAX; n];
        for (i, cell) in self.cells.iter().enumerate() {
            for &v in cell {
                if v as usize >= n {
                    return Err(Error::input(format!(
                        "vertex {v} out of range for {n} vertices"
                    )));
                }
                out[v as usize] = i as u32;
            }
        }
        Ok(out)
    }
}

/// First vertex whose neighbour counts disagree with the first vertex of its cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquitableWitness {
    pub cell: usize,
    /// Smallest vertex of the cell, whose counts serve as reference.
    pub reference: u32,
    pub vertex: u32,
    pub target_cell: usize,
    pub reference_count: u64,
    pub vertex_count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum QuotientOutcome {
    Equitable { matrix: Vec<Vec<u64>> },
    NotEquitable { witness: EquitableWitness },
}

impl QuotientOutcome {
    pub fn matrix(&self) -> Option<&Vec<Vec<u64>>> {
        match self {
            QuotientOutcome::Equitable { matrix } => Some(matrix),
            QuotientOutcome::NotEquitable { .. } => None,
        }
    }

    pub fn is_equitable(&self) -> bool {
        matches!(self, QuotientOutcome::Equitable { .. })
    }
}

/// Tests whether `p` is equitable in the subgraph induced on its ground set.
///
/// On success returns the matrix of counts `c_ij`: the number of neighbours
/// in cell `j` of any vertex in cell `i`.
pub fn equitable_quotient(g: &Graph, p: &VertexPartition) -> Result<QuotientOutcome> {
    let cell_of = p.cell_of(g.n())?;
    Ok(quotient_kernel(g, &cell_of, p.cells()))
}

/// Cells are scanned in order and their vertices in increasing order, so the
/// witness is the lexicographically smallest `(cell, vertex)` violation.
pub(crate) fn quotient_kernel(g: &Graph, cell_of: &[u32], cells: &[Vec<u32>]) -> QuotientOutcome {
    let nc = cells.len();
    let mut matrix = vec![vec![0u64; nc]; nc];
    let mut row = vec![0u64; nc];
    for (i, cell) in cells.iter().enumerate() {
        for (pos, &v) in cell.iter().enumerate() {
            row.fill(0);
            for &w in g.neighbors(v) {
                let c = cell_of[w as usize];
                if c != u32::MAX {
                    row[c as usize] += 1;
                }
            }
            if pos == 0 {
                matrix[i].copy_from_slice(&row);
            } else if row != matrix[i] {
                let j = (0..nc).find(|&j| row[j] != matrix[i][j]).unwrap();
                return QuotientOutcome::NotEquitable {
                    witness: EquitableWitness {
                        cell: i,
                        reference: cell[0],
                        vertex: v,
                        target_cell: j,
                        reference_count: matrix[i][j],
                        vertex_count: row[j],
                    },
                };
            }
        }
    }
    QuotientOutcome::Equitable { matrix }
}

/// Nonempty cells `D^h_j(x, y) = {z : d(x,z) = j, d(y,z) = h}` ordered
/// lexicographically by `(j, h)` and labelled `"(j,h)"`.
pub fn distance_partition(g: &Graph, x: u32, y: u32) -> Result<VertexPartition> {
    let n = g.n();
    if x as usize >= n || y as usize >= n {
        return Err(Error::input(format!(
            "vertex out of range for {n} vertices"
        )));
    }
    let dx = g.bfs_distances(x);
    if dx.contains(&UNREACHABLE) {
        return Err(Error::input("graph is disconnected"));
    }
    let dy = g.bfs_distances(y);
    let mut keyed: std::collections::BTreeMap<(u32, u32), Vec<u32>> = Default::default();
    for z in 0..n {
        keyed.entry((dx[z], dy[z])).or_default().push(z as u32);
    }
    let labels = keyed.keys().map(|(j, h)| format!("({j},{h})")).collect();
    VertexPartition::new(keyed.into_values().collect(), labels)
}

#[cfg(test)]
mod tests {
    use super::super::test_graphs::*;
    use super::*;

    #[test]
    fn distance_partition_examples() {
        let c6 = cycle(6);
        let p = distance_partition(&c6, 0, 1).unwrap();
        assert_eq!(p.sizes(), vec![1; 6]);
        let k4 = complete(4);
        let p = distance_partition(&k4, 0, 1).unwrap();
        assert_eq!(p.labels(), &["(0,1)", "(1,0)", "(1,1)"]);
        assert_eq!(p.cells(), &[vec![0], vec![1], vec![2, 3]]);
        let pet = petersen();
        let y = pet.neighbors(0)[0];
        let p = distance_partition(&pet, 0, y).unwrap();
        assert_eq!(p.sizes(), vec![1, 1, 2, 2, 4]);
        let disc = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(distance_partition(&disc, 0, 1).is_err());
    }

    #[test]
    fn quotient_examples() {
        let pet = petersen();
        let d = pet.bfs_distances(0);
        let cells: Vec<Vec<u32>> = (0..3)
            .map(|i| (0..10).filter(|&z| d[z as usize] == i).collect())
            .collect();
        let q = equitable_quotient(&pet, &VertexPartition::unlabelled(cells).unwrap()).unwrap();
        assert_eq!(
            q.matrix().unwrap(),
            &vec![vec![0, 3, 0], vec![1, 0, 2], vec![0, 1, 2]]
        );

        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let q = equitable_quotient(
            &p3,
            &VertexPartition::unlabelled(vec![vec![0, 2], vec![1]]).unwrap(),
        )
        .unwrap();
        assert_eq!(q.matrix().unwrap(), &vec![vec![0, 1], vec![2, 0]]);

        // K4 minus the edge {2,3}: degree-3 vertices {0,1}, degree-2 vertices {2,3}
        let g = k4_minus_edge();
        let q = equitable_quotient(
            &g,
            &VertexPartition::unlabelled(vec![vec![2, 3], vec![0, 1]]).unwrap(),
        )
        .unwrap();
        assert_eq!(q.matrix().unwrap(), &vec![vec![0, 2], vec![2, 1]]);
    }

    #[test]
    fn witness_is_smallest_violation() {
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let q = equitable_quotient(
            &p3,
            &VertexPartition::unlabelled(vec![vec![0, 1, 2]]).unwrap(),
        )
        .unwrap();
        assert_eq!(
            q,
            QuotientOutcome::NotEquitable {
                witness: EquitableWitness {
                    cell: 0,
                    reference: 0,
                    vertex: 1,
                    target_cell: 0,
                    reference_count: 1,
                    vertex_count: 2
                }
            }
        );
    }

    #[test]
    fn counts_ignore_vertices_outside_the_ground_set() {
        let g = cycle(6);
        let q = equitable_quotient(
            &g,
            &VertexPartition::unlabelled(vec![vec![0], vec![1]]).unwrap(),
        )
        .unwrap();
        assert_eq!(q.matrix().unwrap(), &vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn partition_validation() {
        assert!(VertexPartition::unlabelled(vec![vec![0], vec![]]).is_err());
        assert!(VertexPartition::unlabelled(vec![vec![0, 1], vec![1]]).is_err());
    }
}
