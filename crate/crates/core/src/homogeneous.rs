//! 1-homogeneity, regular near polygons, named-family recognition from
//! arrays, local spectral checks and the classifier for 1-homogeneous
//! graphs with `a_1 > 0` and `D >= 5`.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::array::IntersectionArray;
use crate::bounds::{eval_scalar, f_poly};
use crate::cab::{c2_bound, cab_partition_check};
use crate::classical::{
    classical_array, recognize_classical, thm_1_1_named_branch, ClassicalParams,
};
use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::graphs::{
    check_distance_regular, clique_union_structure, graph_spectrum, local_graph, pairs_at_distance,
    DistanceTable, Graph, PairSelection, SpectrumOptions,
};
use crate::scalar::ExactScalar;
use crate::spectrum::{b_parameter, eigenvalues};
use crate::srg::{recognize_srg_family, srg_eigenvalues, srg_from_graph, SrgFamilyTag, SrgParams};

/// Pair whose distance partition is not equitable, or whose quotient
/// differs from that of the first pair checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomogeneityWitness {
    pub x: u32,
    pub y: u32,
    /// `"not_equitable"` or `"parameters_differ"`.
    pub reason: &'static str,
    /// Label `"(j,h)"` of the offending cell, when not equitable.
    pub cell: Option<String>,
    /// Reference vertex of the cell and the vertex disagreeing with it.
    pub vertices: Option<(u32, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomogeneityReport {
    pub level: u32,
    pub holds: bool,
    /// Cell labels `"(j,h)"` of the reference pair, in lexicographic order.
    pub cells: Vec<String>,
    /// Quotient matrix over `cells`, present when the property holds.
    pub matrix: Option<Vec<Vec<u64>>>,
    pub witness: Option<HomogeneityWitness>,
    pub mode: PairSelection,
    pub pairs_checked: usize,
}

struct PairQuotient {
    keys: Vec<(u8, u8)>,
    matrix: Vec<u64>,
}

enum PairResult {
    Equitable(PairQuotient),
    Broken {
        key: (u8, u8),
        reference: u32,
        vertex: u32,
    },
}

/// Quotient of the distance partition of `(x, y)`. Cells are identified by
/// `(d(x,z), d(y,z))`, indexed densely through `slot`.
fn pair_quotient(g: &Graph, dx: &[u8], dy: &[u8], width: usize) -> PairResult {
    let n = g.n();
    let mut slot = vec![u32::MAX; width * width];
    let mut keys = Vec::new();
    for z in 0..n {
        let key = dx[z] as usize * width + dy[z] as usize;
        if slot[key] == u32::MAX {
            slot[key] = 0;
            keys.push((dx[z], dy[z]));
        }
    }
    keys.sort_unstable();
    for (idx, &(j, h)) in keys.iter().enumerate() {
        slot[j as usize * width + h as usize] = idx as u32;
    }
    let nc = keys.len();
    let mut matrix = vec![0u64; nc * nc];
    let mut first = vec![u32::MAX; nc];
    let mut row = vec![0u64; nc];
    for z in 0..n as u32 {
        let c = slot[dx[z as usize] as usize * width + dy[z as usize] as usize] as usize;
        row.fill(0);
        for &w in g.neighbors(z) {
            row[slot[dx[w as usize] as usize * width + dy[w as usize] as usize] as usize] += 1;
        }
        if first[c] == u32::MAX {
            first[c] = z;
            matrix[c * nc..(c + 1) * nc].copy_from_slice(&row);
        } else if matrix[c * nc..(c + 1) * nc] != row[..] {
            return PairResult::Broken {
                key: keys[c],
                reference: first[c],
                vertex: z,
            };
        }
    }
    PairResult::Equitable(PairQuotient { keys, matrix })
}

fn label((j, h): (u8, u8)) -> String {
    format!("({j},{h})")
}

/// Checks that the partition by `(d(x,.), d(y,.))` is equitable for every
/// selected pair at distance `i`, with parameters independent of the pair.
pub fn check_i_homogeneous(
    g: &Graph,
    i: u32,
    selection: PairSelection,
) -> Result<HomogeneityReport> {
    if !g.is_connected() {
        return Err(Error::input("graph is disconnected"));
    }
    let table = DistanceTable::new(g);
    let width = table.row(0).iter().copied().max().unwrap_or(0) as usize + 1;
    let pairs = pairs_at_distance(&table, i, selection);
    if pairs.is_empty() {
        return Err(Error::input(format!("no pair of vertices at distance {i}")));
    }
    let broken = |x: u32, y: u32, key, reference, vertex| HomogeneityWitness {
        x,
        y,
        reason: "not_equitable",
        cell: Some(label(key)),
        vertices: Some((reference, vertex)),
    };
    let report = |holds, cells, matrix, witness| HomogeneityReport {
        level: i,
        holds,
        cells,
        matrix,
        witness,
        mode: selection,
        pairs_checked: pairs.len(),
    };
    let (x0, y0) = pairs[0];
    let reference = match pair_quotient(g, &table.row(x0), &table.row(y0), width) {
        PairResult::Equitable(q) => q,
        PairResult::Broken {
            key,
            reference,
            vertex,
        } => {
            return Ok(report(
                false,
                Vec::new(),
                None,
                Some(broken(x0, y0, key, reference, vertex)),
            ));
        }
    };
    let cells: Vec<String> = reference.keys.iter().copied().map(label).collect();
    let failure = pairs.par_iter().skip(1).find_map_first(|&(x, y)| {
        match pair_quotient(g, &table.row(x), &table.row(y), width) {
            PairResult::Equitable(q)
                if q.keys == reference.keys && q.matrix == reference.matrix =>
            {
                None
            }
            PairResult::Equitable(_) => Some(HomogeneityWitness {
                x,
                y,
                reason: "parameters_differ",
                cell: None,
                vertices: None,
            }),
            PairResult::Broken {
                key,
                reference,
                vertex,
            } => Some(broken(x, y, key, reference, vertex)),
        }
    });
    if let Some(w) = failure {
        return Ok(report(false, cells, None, Some(w)));
    }
    let nc = cells.len();
    let matrix = reference.matrix.chunks(nc).map(<[u64]>::to_vec).collect();
    Ok(report(true, cells, Some(matrix), None))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CabEquivalence {
    pub one_homogeneous: bool,
    pub cab: bool,
    pub agree: bool,
}

/// Runs the exhaustive 1-homogeneity check and the full CAB check side by side.
pub fn cab_equivalence_check(g: &Graph) -> Result<CabEquivalence> {
    let d = g.bfs_distances(0).into_iter().max().unwrap_or(0) as usize;
    let cab = cab_partition_check(g, d)?.holds();
    let one_homogeneous = check_i_homogeneous(g, 1, PairSelection::Exhaustive)?.holds;
    Ok(CabEquivalence {
        one_homogeneous,
        cab,
        agree: one_homogeneous == cab,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NearPolygonReport {
    pub near_polygon: bool,
    /// `2D` when `a_D = c_D a_1`, else `2D + 1`.
    pub gon: Option<usize>,
    /// `(s, t)`: lines of size `s + 1`, `t + 1` lines per point.
    pub order: Option<(u64, u64)>,
    /// `"dual polar"` when `c_2 >= 3`, `"Hamming"` when `c_2 = 2`, `c_3 = 3`.
    pub refinement: Option<&'static str>,
    /// First `i` with `a_i != c_i a_1`.
    pub failing_index: Option<usize>,
}

/// Regular near polygon test `a_i = c_i a_1` for `i < D`, optionally checked
/// against an observed local clique structure `(s, t)`.
pub fn near_polygon_analysis(
    ia: &IntersectionArray,
    local_structure: Option<(usize, usize)>,
) -> NearPolygonReport {
    let d = ia.diameter();
    let a1 = ia.a(1);
    let failing_index = (1..d).find(|&i| ia.a(i) != ia.c(i) as i64 * a1);
    let s = (a1 + 1) as u64;
    let k = ia.valency();
    let mut near_polygon = failing_index.is_none() && k.is_multiple_of(s);
    if let Some((ls, lt)) = local_structure {
        near_polygon &= ls as u64 == s && (lt as u64 + 1) * s == k;
    }
    if !near_polygon {
        return NearPolygonReport {
            near_polygon,
            gon: None,
            order: None,
            refinement: None,
            failing_index,
        };
    }
    let gon = if ia.a(d) == ia.c(d) as i64 * a1 {
        2 * d
    } else {
        2 * d + 1
    };
    let refinement = if d >= 2 && ia.c(2) >= 3 {
        Some("dual polar")
    } else if d >= 3 && ia.c(2) == 2 && ia.c(3) == 3 {
        Some("Hamming")
    } else {
        None
    };
    NearPolygonReport {
        near_polygon,
        gon: Some(gon),
        order: Some((s, k / s - 1)),
        refinement,
        failing_index,
    }
}

/// Named families recognisable from an intersection array.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum NamedFamily {
    Johnson { n: u32, d: u32 },
    Hamming { d: u32, q: u32 },
    HalvedCube { l: u32 },
    FoldedJohnson { n: u32 },
    FoldedHalvedCube { l: u32 },
    CocktailParty { t: u32 },
    Schlafli,
    Gosset,
}

impl NamedFamily {
    pub fn family_spec(&self) -> Option<FamilySpec> {
        Some(match *self {
            NamedFamily::Johnson { n, d } => FamilySpec::Johnson { n, d },
            NamedFamily::Hamming { d, q } => FamilySpec::Hamming { d, q },
            NamedFamily::HalvedCube { l } => FamilySpec::HalvedCube { l },
            NamedFamily::FoldedJohnson { n } => FamilySpec::FoldedJohnson { n },
            NamedFamily::FoldedHalvedCube { l } => FamilySpec::FoldedHalvedCube { l },
            NamedFamily::CocktailParty { t } => FamilySpec::CocktailParty { t },
            NamedFamily::Schlafli | NamedFamily::Gosset => return None,
        })
    }
}

impl fmt::Display for NamedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedFamily::Schlafli => write!(f, "Schläfli graph"),
            NamedFamily::Gosset => write!(f, "Gosset graph"),
            other => write!(f, "{}", other.family_spec().expect("constructible family")),
        }
    }
}

fn classical_int(d: u32, alpha: i64, beta: i64) -> Option<IntersectionArray> {
    classical_array(&ClassicalParams::from_ints(d, 1, alpha, beta).ok()?).ok()
}

/// Matches `ia` against Johnson, Hamming and halved-cube arrays (classical
/// parameters with `b = 1`), the folds of Johnson and halved-cube arrays,
/// and the cocktail party, Schläfli and Gosset arrays.
pub fn recognize_named_family(ia: &IntersectionArray) -> Vec<NamedFamily> {
    let d = ia.diameter() as u32;
    let mut out = Vec::new();
    for cp in recognize_classical(ia) {
        if cp.b != 1 || !cp.alpha.is_integer() || !cp.beta.is_integer() {
            continue;
        }
        let (alpha, beta) = (cp.alpha.to_integer(), cp.beta.to_integer());
        let Ok(beta) = u32::try_from(beta) else {
            continue;
        };
        if alpha == 1.into() && beta >= d {
            out.push(NamedFamily::Johnson { n: d + beta, d });
        } else if alpha == 0.into() && beta >= 1 {
            out.push(NamedFamily::Hamming { d, q: beta + 1 });
        } else if alpha == 2.into() && beta == 2 * d - 1 {
            out.push(NamedFamily::HalvedCube { l: 2 * d });
        } else if alpha == 2.into() && beta == 2 * d + 1 {
            out.push(NamedFamily::HalvedCube { l: 2 * d + 1 });
        }
    }
    // folded J(2n, n) has diameter floor(n/2); folded halved l-cube floor(l/4)
    for n in [2 * d, 2 * d + 1] {
        if let Some(parent) = classical_int(n, 1, n as i64) {
            if parent.folded().as_ref() == Ok(ia) {
                out.push(NamedFamily::FoldedJohnson { n: 2 * n });
            }
        }
    }
    for l in [4 * d, 4 * d + 2] {
        if let Some(parent) = classical_int(l / 2, 2, l as i64 - 1) {
            if parent.folded().as_ref() == Ok(ia) {
                out.push(NamedFamily::FoldedHalvedCube { l });
            }
        }
    }
    if d == 2 {
        let t = (ia.valency() + 2) / 2;
        if t >= 2 && ia.b_seq() == [2 * t - 2, 1] && ia.c_seq() == [1, 2 * t - 2] {
            out.push(NamedFamily::CocktailParty { t: t as u32 });
        }
        if ia.b_seq() == [16, 5] && ia.c_seq() == [1, 8] {
            out.push(NamedFamily::Schlafli);
        }
    }
    if ia.b_seq() == [27, 10, 1] && ia.c_seq() == [1, 10, 27] {
        out.push(NamedFamily::Gosset);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalSpectralReport {
    /// Common parameters of all local graphs, if they are strongly regular and identical.
    pub local_srg: Option<SrgParams>,
    /// Reported when local graphs are not mutually parameter-identical SRGs.
    pub not_locally_srg: bool,
    pub local_connected: bool,
    pub b: ExactScalar,
    pub smallest_local_eigenvalue: ExactScalar,
    /// `-1 - b`.
    pub lower_bound: ExactScalar,
    pub lower_bound_ok: bool,
    pub lower_bound_equality: bool,
    pub c2: u64,
    pub mu_prime: Option<u64>,
    /// `c_2 >= mu' + 1`.
    pub c2_ok: Option<bool>,
    /// `c_2 = mu' + 1`, the Terwilliger case.
    pub terwilliger_equality: Option<bool>,
    /// `(4b^2 + 1)(mu' + 1)`.
    pub c2_bound: Option<ExactScalar>,
    /// Local graph is a conference graph: the graph should be a Taylor graph.
    pub conference_local: bool,
    /// Local graph is an `n x n` grid and `c_2 = 4`: `J(2n, n)` or its fold.
    pub grid_local_c2_4: bool,
    pub grid_rule_candidates: Vec<String>,
}

/// Local eigenvalue bound, `c_2` against `mu'`, and the conference and grid rules.
pub fn local_spectral_checks(g: &Graph) -> Result<LocalSpectralReport> {
    let outcome = check_distance_regular(g)?;
    let ia = outcome
        .array()
        .ok_or_else(|| Error::precondition("graph is not distance-regular"))?
        .clone();
    if ia.diameter() < 3 {
        return Err(Error::precondition(format!(
            "local spectral checks need D >= 3, got {}",
            ia.diameter()
        )));
    }
    let params: Vec<Option<SrgParams>> = (0..g.n() as u32)
        .into_par_iter()
        .map(|x| srg_from_graph(&local_graph(g, x).graph))
        .collect();
    let local_srg = match params.first() {
        Some(Some(p)) if params.iter().all(|q| q.as_ref() == Some(p)) => Some(*p),
        _ => None,
    };
    let local0 = local_graph(g, 0).graph;
    let spectrum = graph_spectrum(&local0, &SpectrumOptions::default())?;
    let smallest = spectrum
        .smallest()
        .cloned()
        .ok_or_else(|| Error::Internal("empty local graph".into()))?;
    let b = b_parameter(&ia)?;
    let lower = b.neg().add_rational(&crate::scalar::int(-1));
    let order = smallest.cmp_exact(&lower)?;
    let c2 = ia.c(2);
    let mu = local_srg.map(|p| p.mu);
    let tags = local_srg
        .map(|p| recognize_srg_family(&p))
        .unwrap_or_default();
    let conference_local = tags
        .iter()
        .any(|t| matches!(t, SrgFamilyTag::Conference { .. }));
    let grid_n = tags.iter().find_map(|t| match t {
        SrgFamilyTag::LatinSquare { m: 2, n } => Some(*n),
        _ => None,
    });
    let grid_local_c2_4 = grid_n.is_some() && c2 == 4;
    let grid_rule_candidates = match grid_n {
        Some(p) if c2 == 4 => vec![
            FamilySpec::Johnson {
                n: 2 * p as u32,
                d: p as u32,
            }
            .to_string(),
            FamilySpec::FoldedJohnson { n: 2 * p as u32 }.to_string(),
        ],
        _ => Vec::new(),
    };
    let c2_bound = match mu {
        Some(m) if b.signum()? > 0 => Some(c2_bound(&b, m as i64)?),
        _ => None,
    };
    Ok(LocalSpectralReport {
        local_srg,
        not_locally_srg: local_srg.is_none(),
        local_connected: local0.is_connected(),
        b,
        smallest_local_eigenvalue: smallest,
        lower_bound: lower,
        lower_bound_ok: order.is_ge(),
        lower_bound_equality: order.is_eq(),
        c2,
        mu_prime: mu,
        c2_ok: mu.map(|m| c2 > m),
        terwilliger_equality: mu.map(|m| c2 == m + 1),
        c2_bound,
        conference_local,
        grid_local_c2_4,
        grid_rule_candidates,
    })
}

/// How 1-homogeneity of the classified graph is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Verified,
    Asserted,
    Refuted,
}

impl Provenance {
    pub(crate) fn require(self) -> Result<()> {
        match self {
            Provenance::Refuted => Err(Error::precondition("graph is not 1-homogeneous")),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evidence {
    pub rule: String,
    pub values: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationOutcome {
    pub theorem: String,
    /// Roman numeral of the first matching branch, `"c2=1"`, or `"contradiction"`.
    pub branch: String,
    pub name: String,
    /// Further branches that also match, in order.
    pub also: Vec<String>,
    /// Sorted by rule.
    pub evidence: Vec<Evidence>,
    pub homogeneity: Provenance,
}

pub const CONTRADICTION: &str = "contradiction";

impl ClassificationOutcome {
    pub(crate) fn assemble(
        theorem: &str,
        matches: Vec<(String, String)>,
        mut evidence: Vec<Evidence>,
        homogeneity: Provenance,
    ) -> Self {
        evidence.sort_by(|a, b| a.rule.cmp(&b.rule));
        let mut it = matches.into_iter();
        let (branch, name) = it
            .next()
            .unwrap_or_else(|| (CONTRADICTION.into(), "contradiction - check inputs".into()));
        ClassificationOutcome {
            theorem: theorem.into(),
            branch,
            name,
            also: it.map(|(b, _)| b).collect(),
            evidence,
            homogeneity,
        }
    }

    pub fn is_contradiction(&self) -> bool {
        self.branch == CONTRADICTION
    }
}

/// Local structure observed on a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalObservation {
    pub connected: bool,
    pub srg: Option<SrgParams>,
    /// `(s, t)` when the local graph is `t + 1` disjoint `s`-cliques.
    pub clique_structure: Option<(usize, usize)>,
}

/// Inputs for [`classify_thm_1_1`].
#[derive(Clone, Debug)]
pub struct EvidenceBundle {
    pub ia: IntersectionArray,
    pub homogeneity: Provenance,
    pub local: Option<LocalObservation>,
    pub b: Option<ExactScalar>,
}

impl EvidenceBundle {
    /// Array-only bundle with 1-homogeneity asserted.
    pub fn from_array(ia: IntersectionArray) -> Self {
        EvidenceBundle {
            ia,
            homogeneity: Provenance::Asserted,
            local: None,
            b: None,
        }
    }

    /// Computes the array, verifies 1-homogeneity exhaustively (or with the
    /// given sampling) and records the local structure at vertex 0.
    pub fn from_graph(g: &Graph, selection: PairSelection) -> Result<Self> {
        let outcome = check_distance_regular(g)?;
        let ia = outcome
            .array()
            .ok_or_else(|| Error::precondition("graph is not distance-regular"))?
            .clone();
        let holds = check_i_homogeneous(g, 1, selection)?.holds;
        let homogeneity = match (holds, selection) {
            (false, _) => Provenance::Refuted,
            (true, PairSelection::Exhaustive) => Provenance::Verified,
            (true, PairSelection::Sampled { .. }) => Provenance::Asserted,
        };
        let local = local_graph(g, 0).graph;
        let obs = LocalObservation {
            connected: local.is_connected(),
            srg: srg_from_graph(&local),
            clique_structure: clique_union_structure(&local),
        };
        Ok(EvidenceBundle {
            ia,
            homogeneity,
            local: Some(obs),
            b: None,
        })
    }
}

fn ev(rule: &str, values: serde_json::Value) -> Evidence {
    Evidence {
        rule: rule.to_string(),
        values,
    }
}

/// Branches for 1-homogeneous graphs with `D >= 5`, `a_1 > 0`: either
/// `c_2 = 1`, or `b >= 1` and (i) regular near `2D`-gon, (ii) `J(2D, D)`,
/// (iii) halved `l`-cube with `l` in `{2D, 2D+1}`, (iv) folded `J(4D, 2D)`,
/// (v) folded halved `4D`-cube, (vi) `k <= F(b)`.
pub fn classify_thm_1_1(bundle: &EvidenceBundle) -> Result<ClassificationOutcome> {
    let ia = &bundle.ia;
    let d = ia.diameter();
    if d < 5 {
        return Err(Error::Scope(format!(
            "classification needs D >= 5, got {d}"
        )));
    }
    let a1 = ia.a(1);
    if a1 <= 0 {
        return Err(Error::precondition("classification needs a1 > 0"));
    }
    bundle.homogeneity.require()?;
    let mut evidence = vec![
        ev(
            "array",
            json!({"ia": ia.to_string(), "D": d, "a1": a1, "c2": ia.c(2), "k": ia.valency()}),
        ),
        ev("homogeneity", json!({"provenance": bundle.homogeneity})),
    ];
    if ia.c(2) == 1 {
        return Ok(ClassificationOutcome::assemble(
            "1.1",
            vec![("c2=1".into(), "c2 = 1".into())],
            evidence,
            bundle.homogeneity,
        ));
    }
    let ev_list = eigenvalues(ia, 30)?;
    let theta1 = ev_list.theta(1).clone();
    let b = match &bundle.b {
        Some(b) => b.clone(),
        None => crate::spectrum::b_from_theta1(ia, &theta1)?,
    };
    let one = ExactScalar::from_int(1);
    let b_ok = b.cmp_exact(&one)?.is_ge();
    evidence.push(ev("b-parameter", json!({"b": b.to_string(), "b1": ia.b(1), "theta1": theta1.to_string(), "at_least_1": b_ok})));
    if !b_ok {
        return Ok(ClassificationOutcome::assemble(
            "1.1",
            Vec::new(),
            evidence,
            bundle.homogeneity,
        ));
    }

    let mut matches: Vec<(String, String)> = Vec::new();
    let clique = bundle.local.as_ref().and_then(|l| l.clique_structure);
    let np = near_polygon_analysis(ia, clique);
    let (disconnected, source) = match &bundle.local {
        Some(l) => (!l.connected, "graph"),
        None => (np.near_polygon, "array"),
    };
    evidence.push(ev(
        "local-structure",
        json!({"locally_disconnected": disconnected, "source": source}),
    ));
    if disconnected {
        let quad = ExactScalar::from_int(ia.b(1) as i64 - 1);
        evidence.push(ev(
            "quadrangle-eigenvalue",
            json!({"theta1": theta1.to_string(), "b1_minus_1": ia.b(1) - 1, "holds": theta1.cmp_exact(&quad)?.is_le()}),
        ));
        evidence.push(ev(
            "near-polygon",
            json!({"near_polygon": np.near_polygon, "gon": np.gon, "order": np.order, "refinement": np.refinement}),
        ));
        if np.near_polygon && np.gon == Some(2 * d) {
            matches.push(("i".into(), format!("regular near {}-gon", 2 * d)));
        }
    }
    let named = recognize_named_family(ia);
    evidence.push(ev(
        "named-family",
        json!({"matches": named.iter().map(|n| n.to_string()).collect::<Vec<_>>()}),
    ));
    if let Some(hit) = thm_1_1_named_branch(&named, d) {
        if hit.0 == "iii" {
            let ell = match named
                .iter()
                .find(|n| matches!(n, NamedFamily::HalvedCube { .. }))
            {
                Some(NamedFamily::HalvedCube { l }) => *l,
                _ => unreachable!(),
            };
            evidence.push(ev("halved-cube-ell", json!({"ell": ell})));
        }
        matches.push(hit);
    }
    let cp_lookup = named
        .iter()
        .filter(|n| !matches!(n, NamedFamily::Hamming { .. }))
        .map(|n| n.to_string())
        .collect::<Vec<_>>();
    evidence.push(ev(
        "cocktail-party-mu-graph-lookup",
        json!({"matches": cp_lookup}),
    ));
    if let Some(p) = bundle.local.as_ref().and_then(|l| l.srg) {
        evidence.push(cab2_exclusion(&p, ia)?);
    }
    let f = eval_scalar(&f_poly(), &b)?;
    let k = ExactScalar::from_int(ia.valency() as i64);
    let within = k.cmp_exact(&f)?.is_le();
    evidence.push(ev(
        "valency-bound",
        json!({"k": ia.valency(), "F(b)": f.to_string(), "k_at_most_F": within}),
    ));
    if within {
        matches.push(("vi".into(), "valency bounded: k <= F(b)".into()));
    }
    Ok(ClassificationOutcome::assemble(
        "1.1",
        matches,
        evidence,
        bundle.homogeneity,
    ))
}

/// For a local `LS_m(n)` or block graph of `S(2, m, n)` with `m >= 3`,
/// `c_2` must avoid `m^2` (resp. `m(m+1)`) once `k` exceeds it.
fn cab2_exclusion(local: &SrgParams, ia: &IntersectionArray) -> Result<Evidence> {
    let e = srg_eigenvalues(local)?;
    let m = e.m.as_ref().and_then(|m| u64::try_from(m.clone()).ok());
    let c2 = ia.c(2);
    let k = ia.valency();
    let mut checks = Vec::new();
    if let Some(m) = m.filter(|&m| m >= 3) {
        for tag in recognize_srg_family(local) {
            let forbidden = match tag {
                SrgFamilyTag::LatinSquare { m: lm, .. } if lm == m => m * m,
                SrgFamilyTag::SteinerSystemBlockGraph { m: sm, .. } if sm == m => m * (m + 1),
                _ => continue,
            };
            if k > forbidden {
                checks.push(json!({"tag": tag.to_string(), "forbidden_c2": forbidden, "consistent": c2 != forbidden}));
            }
        }
    }
    Ok(ev(
        "cab2-exclusion",
        json!({"m": m, "c2": c2, "checks": checks}),
    ))
}
