//! `drg-lab`: command-line front end for `drg-core`.
//!
//! Every subcommand writes one JSON document to stdout (keys sorted, tagged
//! with [`SCHEMA`]) and diagnostics to stderr. Exit codes: 0 success or the
//! checked property holds, 1 the property fails (witness in the JSON), 2 input
//! or usage error.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use drg_core::bounds::{homogeneity_bounds, mu_bound, phi_simplified};
use drg_core::cab::{
    cab_formula_params, cab_partition_check, quotient_matrix, CabOutcome, LocalSrgData,
};
use drg_core::classical::{
    classify_thm_6_2, classify_thm_7_2, fundamental_bound, recognize_classical,
};
use drg_core::families::{build_family, FamilySpec, OrthogonalArray, SteinerSystem};
use drg_core::graphs::{
    check_distance_regular, graph_spectrum, local_graph, Graph, PairSelection, SpectrumOptions,
};
use drg_core::homogeneous::{
    check_i_homogeneous, classify_thm_1_1, recognize_named_family, ClassificationOutcome,
    EvidenceBundle, Provenance,
};
use drg_core::srg::{
    check_bounds, recognize_srg_family, sims_classify, srg_eigenvalues, srg_from_graph, SrgParams,
};
use drg_core::{b_parameter, eigenvalues, Error, IntersectionArray};
use num_bigint::BigInt;
use num_rational::BigRational;

pub const SCHEMA: &str = "drg-lab-v1";

/// Decimal digits used when printing irrational eigenvalues.
const PRECISION: u32 = 12;

#[derive(Parser, Debug)]
#[command(name = "drg-lab", version, about = "Distance-regular graph toolkit")]
struct Cli {
    /// Cap the number of worker threads.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Sampling {
    /// Check K seeded random pairs instead of all pairs.
    #[arg(long, value_name = "K", requires = "seed")]
    sample: Option<usize>,
    #[arg(long, value_name = "S", requires = "sample")]
    seed: Option<u64>,
}

impl Sampling {
    fn selection(self) -> PairSelection {
        match (self.sample, self.seed) {
            (Some(count), Some(seed)) => PairSelection::Sampled { seed, count },
            _ => PairSelection::Exhaustive,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct a family member and write it as a drg-graph-v1 file.
    Build {
        /// Family string, e.g. `johnson:10,5`, `halved-cube:11`, `petersen`.
        #[arg(required_unless_present_any = ["oa", "blocks"], conflicts_with_all = ["oa", "blocks"])]
        family: Option<String>,
        /// Latin square graph from an orthogonal array (JSON rows).
        #[arg(long, value_name = "FILE", conflicts_with = "blocks")]
        oa: Option<PathBuf>,
        /// Block graph of a Steiner system (JSON block list).
        #[arg(long, value_name = "FILE")]
        blocks: Option<PathBuf>,
        /// Write the graph here and print a summary instead of the graph.
        #[arg(long, short, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Distance-regularity, intersection array and derived parameters.
    Analyze {
        file: PathBuf,
        /// Also compute the adjacency spectrum of the graph itself.
        #[arg(long)]
        spectrum: bool,
    },
    /// i-homogeneity check.
    Homog {
        file: PathBuf,
        #[arg(long = "i", value_name = "N")]
        level: u32,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// CAB partitions of the local graph, levels 1..=J.
    Cab {
        file: PathBuf,
        #[arg(long, value_name = "J")]
        upto: usize,
    },
    /// Run the classification theorems on a graph or an intersection array.
    Classify {
        #[arg(required_unless_present = "ia", conflicts_with = "ia")]
        file: Option<PathBuf>,
        /// Intersection array `b0,...;c1,...`; 1-homogeneity is then assumed.
        #[arg(long, value_name = "ARRAY")]
        ia: Option<String>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Strongly regular parameter analysis.
    Srg {
        #[arg(long, value_name = "V,K,L,M")]
        params: String,
    },
    /// Valency bounds F(b), G(b) and the strongly regular bounds in m.
    Bounds {
        /// Rational b, e.g. `1` or `3/2`.
        #[arg(long, required_unless_present = "m")]
        b: Option<String>,
        /// Smallest local eigenvalue is -m.
        #[arg(long)]
        m: Option<u64>,
        #[arg(long, requires = "m")]
        mu: Option<u64>,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line `argv` (program name first).
pub fn run<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return CliOutput {
                    code: 0,
                    stdout: rendered,
                    stderr: String::new(),
                };
            }
            let doc = json!({"schema": SCHEMA, "error": {"kind": "usage", "message": first_line(&rendered)}});
            return CliOutput {
                code: 2,
                stdout: render(&doc),
                stderr: rendered,
            };
        }
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command)),
            Err(e) => Err(Error::Input(format!("cannot build thread pool: {e}"))),
        },
        None => dispatch(cli.command),
    };
    match result {
        Ok(Reply::Json(code, doc)) => CliOutput {
            code,
            stdout: render(&doc),
            stderr: String::new(),
        },
        Ok(Reply::Raw(text)) => CliOutput {
            code: 0,
            stdout: text,
            stderr: String::new(),
        },
        Err(e) => {
            let doc = json!({"schema": SCHEMA, "error": {"kind": error_kind(&e), "message": e.to_string()}});
            CliOutput {
                code: 2,
                stdout: render(&doc),
                stderr: format!("drg-lab: {e}\n"),
            }
        }
    }
}

enum Reply {
    Json(i32, Value),
    Raw(String),
}

/// First paragraph of a clap error, on one line.
fn first_line(s: &str) -> String {
    let para: Vec<&str> = s
        .lines()
        .take_while(|l| !l.trim().is_empty())
        .map(str::trim)
        .collect();
    para.join(" ").trim_start_matches("error: ").to_string()
}

fn render(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Input(_) => "input",
        Error::Parse(_) => "parse",
        Error::Domain(_) => "domain",
        Error::Precondition(_) => "precondition",
        Error::Scope(_) => "scope",
        Error::Singularity { .. } => "singularity",
        Error::Infeasible(_) => "infeasible",
        Error::Undecidable { .. } => "undecidable",
        Error::Resource(_) => "resource",
        Error::Internal(_) => "internal",
    }
}

fn error_value(e: &Error) -> Value {
    json!({"error": {"kind": error_kind(e), "message": e.to_string()}})
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types always serialize")
}

fn envelope(command: &str, body: Value) -> Value {
    let mut map = match body {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    map.insert("schema".into(), SCHEMA.into());
    map.insert("command".into(), command.into());
    Value::Object(map)
}

/// Integers as JSON numbers when they fit, otherwise as decimal strings.
fn int_value(n: &BigInt) -> Value {
    match i64::try_from(n) {
        Ok(v) => v.into(),
        Err(_) => n.to_string().into(),
    }
}

fn rational_value(r: &BigRational) -> Value {
    if r.is_integer() {
        int_value(r.numer())
    } else {
        r.to_string().into()
    }
}

fn read_file(path: &Path) -> drg_core::Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> drg_core::Result<Graph> {
    Graph::from_json(&read_file(path)?)
}

/// Accepts either a bare list of lists or an object with a `rows`/`blocks` key.
fn read_int_rows(path: &Path, key: &str) -> drg_core::Result<Vec<Vec<u32>>> {
    let text = read_file(path)?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let rows = match value {
        Value::Object(mut m) => m.remove(key).unwrap_or(Value::Null),
        other => other,
    };
    serde_json::from_value(rows).map_err(|e| {
        Error::Parse(format!(
            "{}: expected {key} as integer lists: {e}",
            path.display()
        ))
    })
}

fn dispatch(command: Command) -> drg_core::Result<Reply> {
    match command {
        Command::Build {
            family,
            oa,
            blocks,
            out,
        } => cmd_build(family, oa, blocks, out),
        Command::Analyze { file, spectrum } => cmd_analyze(&file, spectrum),
        Command::Homog {
            file,
            level,
            sampling,
        } => cmd_homog(&file, level, sampling),
        Command::Cab { file, upto } => cmd_cab(&file, upto),
        Command::Classify { file, ia, sampling } => {
            cmd_classify(file.as_deref(), ia.as_deref(), sampling)
        }
        Command::Srg { params } => cmd_srg(&params),
        Command::Bounds { b, m, mu } => cmd_bounds(b.as_deref(), m, mu),
    }
}

fn cmd_build(
    family: Option<String>,
    oa: Option<PathBuf>,
    blocks: Option<PathBuf>,
    out: Option<PathBuf>,
) -> drg_core::Result<Reply> {
    let spec = match (family, oa, blocks) {
        (Some(f), _, _) => f.parse::<FamilySpec>()?,
        (None, Some(path), _) => FamilySpec::LatinSquareGraph {
            oa: OrthogonalArray::new(read_int_rows(&path, "rows")?)?,
        },
        (None, None, Some(path)) => FamilySpec::SteinerBlockGraph {
            system: SteinerSystem::new(read_int_rows(&path, "blocks")?)?,
        },
        (None, None, None) => return Err(Error::Input("no family given".into())),
    };
    let g = build_family(&spec)?;
    let text = g.to_json();
    match out {
        None => Ok(Reply::Raw(text + "\n")),
        Some(path) => {
            std::fs::write(&path, text + "\n")
                .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
            let body = json!({
                "family": spec.to_string(),
                "v": g.n(),
                "edges": g.edge_count(),
                "out": path.display().to_string(),
            });
            Ok(Reply::Json(0, envelope("build", body)))
        }
    }
}

fn cmd_analyze(file: &Path, with_spectrum: bool) -> drg_core::Result<Reply> {
    let g = load_graph(file)?;
    let mut body = Map::new();
    body.insert("v".into(), g.n().into());
    body.insert("edges".into(), g.edge_count().into());
    body.insert("connected".into(), g.is_connected().into());
    body.insert(
        "k".into(),
        g.regular_degree().map_or(Value::Null, Value::from),
    );
    if with_spectrum {
        let spec = graph_spectrum(&g, &SpectrumOptions::default())?;
        body.insert("spectrum".into(), to_value(&spec));
    }
    let outcome = check_distance_regular(&g)?;
    let Some(ia) = outcome.array() else {
        body.insert("distance_regular".into(), false.into());
        body.insert("drg".into(), to_value(&outcome));
        return Ok(Reply::Json(1, envelope("analyze", Value::Object(body))));
    };
    body.insert("distance_regular".into(), true.into());
    body.insert("ia".into(), ia.to_string().into());
    body.insert("diameter".into(), ia.diameter().into());
    body.insert("bipartite".into(), ia.is_bipartite().into());
    body.insert("feasibility".into(), to_value(&ia.basic_feasibility()));
    body.insert(
        "eigenvalues".into(),
        to_value(&eigenvalues(ia, PRECISION)?.values()),
    );
    body.insert(
        "b".into(),
        b_parameter(ia).map_or(Value::Null, |b| b.to_string().into()),
    );
    body.insert(
        "srg".into(),
        srg_from_graph(&g).map_or(Value::Null, |p| p.to_string().into()),
    );
    body.insert(
        "named_families".into(),
        recognize_named_family(ia)
            .iter()
            .map(|n| Value::from(n.to_string()))
            .collect(),
    );
    body.insert(
        "classical".into(),
        recognize_classical(ia)
            .iter()
            .map(|c| Value::from(c.to_string()))
            .collect(),
    );
    if g.n() > 0 {
        let local = local_graph(&g, 0).graph;
        body.insert(
            "local".into(),
            json!({
                "v": local.n(),
                "connected": local.is_connected(),
                "srg": srg_from_graph(&local).map(|p| p.to_string()),
            }),
        );
    }
    Ok(Reply::Json(0, envelope("analyze", Value::Object(body))))
}

fn cmd_homog(file: &Path, level: u32, sampling: Sampling) -> drg_core::Result<Reply> {
    let g = load_graph(file)?;
    let report = check_i_homogeneous(&g, level, sampling.selection())?;
    let code = if report.holds { 0 } else { 1 };
    Ok(Reply::Json(code, envelope("homog", to_value(&report))))
}

fn cmd_cab(file: &Path, upto: usize) -> drg_core::Result<Reply> {
    let g = load_graph(file)?;
    let outcome = cab_partition_check(&g, upto)?;
    let mut body = Map::new();
    body.insert("cab".into(), to_value(&outcome));
    body.insert("holds".into(), outcome.holds().into());
    if let CabOutcome::Holds { levels } = &outcome {
        // cab_partition_check has already established distance-regularity.
        let drg = check_distance_regular(&g)?;
        let ia = drg
            .array()
            .ok_or_else(|| Error::Internal("distance-regularity lost".into()))?;
        let local = srg_from_graph(&local_graph(&g, 0).graph)
            .filter(|p| p.is_primitive())
            .map(|p| LocalSrgData::from_local(&p))
            .transpose()?;
        let a1 = ia.a(1);
        let quotients: Vec<Value> = levels
            .iter()
            .filter(|l| l.level >= 1 && l.level < ia.diameter())
            .map(|l| {
                quotient_matrix(l, a1, ia.diameter(), local.as_ref())
                    .map_or_else(|e| error_value(&e), |q| to_value(&q))
            })
            .collect();
        body.insert("quotients".into(), quotients.into());
        if let Some(local) = &local {
            body.insert("local_srg".into(), to_value(local));
            let cs: Vec<i64> = (1..=upto).map(|i| ia.c(i) as i64).collect();
            match cab_formula_params(local, &cs) {
                Ok(formula) => {
                    let agrees =
                        formula
                            .levels
                            .iter()
                            .zip(levels)
                            .all(|(p, m)| p.tuple() == m.tuple())
                            && formula.predicted_b.iter().enumerate().all(|(j, b)| {
                                *b == BigRational::from_integer((ia.b(j + 1)).into())
                            });
                    body.insert("formula".into(), to_value(&formula));
                    body.insert("formula_agrees".into(), agrees.into());
                }
                Err(e) => {
                    body.insert("formula".into(), error_value(&e));
                }
            }
        }
    }
    let code = if outcome.holds() { 0 } else { 1 };
    Ok(Reply::Json(code, envelope("cab", Value::Object(body))))
}

fn outcome_or_error(r: &drg_core::Result<ClassificationOutcome>) -> Value {
    match r {
        Ok(o) => to_value(o),
        Err(e) => error_value(e),
    }
}

fn cmd_classify(
    file: Option<&Path>,
    ia_text: Option<&str>,
    sampling: Sampling,
) -> drg_core::Result<Reply> {
    let bundle = match (file, ia_text) {
        (_, Some(text)) => EvidenceBundle::from_array(text.parse::<IntersectionArray>()?),
        (Some(path), None) => {
            let g = load_graph(path)?;
            if check_distance_regular(&g)?.array().is_none() {
                let body = json!({"distance_regular": false, "input": "graph"});
                return Ok(Reply::Json(1, envelope("classify", body)));
            }
            EvidenceBundle::from_graph(&g, sampling.selection())?
        }
        (None, None) => return Err(Error::Input("classify needs a graph file or --ia".into())),
    };
    let ia = &bundle.ia;
    let feas = ia.basic_feasibility();
    if !feas.pass {
        let body = json!({"ia": ia.to_string(), "feasibility": to_value(&feas)});
        return Ok(Reply::Json(1, envelope("classify", body)));
    }
    let mut body = Map::new();
    body.insert("ia".into(), ia.to_string().into());
    body.insert(
        "input".into(),
        if file.is_some() && ia_text.is_none() {
            "graph"
        } else {
            "array"
        }
        .into(),
    );
    if bundle.homogeneity == Provenance::Refuted {
        body.insert("homogeneity".into(), to_value(&bundle.homogeneity));
        return Ok(Reply::Json(1, envelope("classify", Value::Object(body))));
    }

    let thm_1_1 = classify_thm_1_1(&bundle);
    let tight = fundamental_bound(ia);
    let thm_7_2 = match &tight {
        Ok(t) if t.tight => Some(classify_thm_7_2(ia, bundle.homogeneity)),
        _ => None,
    };
    let classical = recognize_classical(ia);
    let thm_6_2: Vec<(String, drg_core::Result<ClassificationOutcome>)> = classical
        .iter()
        .map(|cp| (cp.to_string(), classify_thm_6_2(cp, bundle.homogeneity)))
        .collect();

    body.insert(
        "classical".into(),
        classical
            .iter()
            .map(|c| Value::from(c.to_string()))
            .collect(),
    );
    body.insert(
        "fundamental_bound".into(),
        tight.as_ref().map_or_else(error_value, to_value),
    );
    let mut theorems = Map::new();
    theorems.insert("1.1".into(), outcome_or_error(&thm_1_1));
    theorems.insert(
        "7.2".into(),
        thm_7_2.as_ref().map_or(Value::Null, outcome_or_error),
    );
    theorems.insert(
        "6.2".into(),
        thm_6_2
            .iter()
            .map(|(p, r)| json!({"params": p, "outcome": outcome_or_error(r)}))
            .collect(),
    );
    body.insert("theorems".into(), Value::Object(theorems));

    let primary = std::iter::once(&thm_1_1)
        .chain(thm_7_2.as_ref())
        .chain(thm_6_2.iter().map(|(_, r)| r))
        .find_map(|r| r.as_ref().ok());
    let Some(primary) = primary else {
        let e = thm_1_1
            .as_ref()
            .err()
            .cloned()
            .unwrap_or_else(|| Error::Scope("no classification applies".into()));
        body.insert("error".into(), error_value(&e)["error"].clone());
        return Ok(Reply::Json(2, envelope("classify", Value::Object(body))));
    };
    if let Value::Object(fields) = to_value(primary) {
        body.extend(fields);
    }
    let code = if primary.is_contradiction() { 1 } else { 0 };
    Ok(Reply::Json(code, envelope("classify", Value::Object(body))))
}

fn cmd_srg(params: &str) -> drg_core::Result<Reply> {
    let p: SrgParams = params.parse()?;
    let eig = srg_eigenvalues(&p)?;
    let tags = recognize_srg_family(&p);
    let bounds = check_bounds(&p);
    let violated = matches!(&bounds, Ok(b) if !b.all_ok());
    let body = json!({
        "params": p.to_string(),
        "primitive": p.is_primitive(),
        "eigenvalues": to_value(&eig),
        "families": tags.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "family_tags": to_value(&tags),
        "sims": sims_classify(&p).map_or_else(|e| error_value(&e), |s| to_value(&s)),
        "bounds": bounds.as_ref().map_or_else(error_value, to_value),
    });
    Ok(Reply::Json(
        if violated { 1 } else { 0 },
        envelope("srg", body),
    ))
}

fn parse_rational(s: &str) -> drg_core::Result<BigRational> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))
}

fn cmd_bounds(b: Option<&str>, m: Option<u64>, mu: Option<u64>) -> drg_core::Result<Reply> {
    let mut body = Map::new();
    if let Some(b) = b {
        let b = parse_rational(b)?;
        let (f, g) = homogeneity_bounds(&b)?;
        body.insert("b".into(), rational_value(&b));
        body.insert("F".into(), rational_value(&f));
        body.insert("G".into(), rational_value(&g));
    }
    if let Some(m) = m {
        let m_big = BigInt::from(m);
        body.insert("m".into(), m.into());
        body.insert("mu_bound".into(), int_value(&mu_bound(&m_big)));
        body.insert("phi".into(), rational_value(&phi_simplified(&m_big)));
        if let Some(mu) = mu {
            body.insert("mu".into(), mu.into());
            body.insert(
                "claw_f".into(),
                rational_value(&drg_core::bounds::claw_f(&m_big, &BigInt::from(mu))),
            );
        }
    }
    Ok(Reply::Json(0, envelope("bounds", Value::Object(body))))
}
