use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use qrank_core::analysis::{
    attack_sensitivity, damping_sweep, parse_grid, summarize, Provenance, Ranker, RankingSummary,
    Reported,
};
use qrank_core::export::{
    comparison_table, rank_rows, write_comparison_csv, write_rank_csv, write_series_csv,
    write_sweep_csv,
};
use qrank_core::{
    benchmark_graph, classical_pagerank, generate_binary_tree, generate_hierarchical,
    generate_scale_free, google_matrix, hyperlink_matrix, parse_edge_list, parse_pajek,
    patch_dangling, power_method, quantum_pagerank, quantum_series, Benchmark, Convergence,
    DirectedGraph, Error, PowerConfig, PowerIteration, RootOrientation, StochasticMatrix,
};
use serde::Serialize;

use crate::args::{Command, Format, InputArgs, OutputArgs, RankerChoice, WalkArgs};

/// A failed run, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    NotFound(String),
    Parse(String),
    Invalid(String),
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::NotFound(_) => 2,
            Self::Parse(_) => 3,
            Self::Invalid(_) => 4,
            Self::Internal(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotFound(m) | Self::Parse(m) | Self::Invalid(m) | Self::Internal(m) => {
                f.write_str(m)
            }
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::EigenFailure | Error::LossOfOrthogonality(_) => Self::Internal(e.to_string()),
            Error::Csv(_) => Self::Parse(e.to_string()),
            _ => Self::Invalid(e.to_string()),
        }
    }
}

fn internal(e: impl fmt::Display) -> Failure {
    Failure::Internal(e.to_string())
}

type Outcome<T = ()> = std::result::Result<T, Failure>;

struct Loaded {
    graph: DirectedGraph,
    /// Set when the network came from the seeded generator.
    seed: Option<u64>,
}

fn load(input: &InputArgs) -> Outcome<Loaded> {
    let src = &input.source;
    if let Some(path) = &src.input {
        let text = fs::read_to_string(path).map_err(|e| match e.kind() {
            io::ErrorKind::NotFound => {
                Failure::NotFound(format!("{}: file not found", path.display()))
            }
            _ => Failure::Internal(format!("{}: {e}", path.display())),
        })?;
        let parsed = if is_pajek(path) {
            parse_pajek(&text)
        } else {
            parse_edge_list(&text)
        };
        let graph = parsed.map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
        return Ok(Loaded { graph, seed: None });
    }
    if let Some(name) = &src.benchmark {
        let which: Benchmark = name.parse()?;
        return Ok(Loaded {
            graph: benchmark_graph(which),
            seed: None,
        });
    }
    let spec = src.generator.as_deref().unwrap_or_default();
    let bad = || Failure::Invalid(format!("generator `{spec}` is not family:size"));
    let (family, size) = spec.split_once(':').ok_or_else(bad)?;
    let size: u64 = size.trim().parse().map_err(|_| bad())?;
    let small = |s: u64| u32::try_from(s).map_err(|_| bad());
    let (graph, seed) = match family.trim() {
        "scalefree" => (
            generate_scale_free(usize::try_from(size).map_err(|_| bad())?, input.seed)?,
            Some(input.seed),
        ),
        "hierarchical" => (
            generate_hierarchical(small(size)?, RootOrientation::default())?,
            None,
        ),
        "tree" => (generate_binary_tree(small(size)?)?, None),
        other => {
            return Err(Failure::Invalid(format!(
                "unknown generator family `{other}`"
            )))
        }
    };
    Ok(Loaded { graph, seed })
}

fn is_pajek(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("net"))
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Outcome {
    match path {
        Some(p) => {
            fs::write(p, bytes).map_err(|e| Failure::Internal(format!("{}: {e}", p.display())))
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(internal)
        }
    }
}

fn json<T: Serialize>(value: &T) -> Outcome<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(internal)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> qrank_core::Result<()>) -> Outcome<Vec<u8>> {
    let mut buf = Vec::new();
    f(&mut buf).map_err(internal)?;
    Ok(buf)
}

fn rankers(choice: RankerChoice, walk: &WalkArgs) -> Vec<Ranker> {
    let quantum = Ranker::Quantum {
        steps: walk.steps,
        backend: walk.backend.into(),
    };
    match choice {
        RankerChoice::Classical => vec![Ranker::Classical],
        RankerChoice::Quantum => vec![quantum],
        RankerChoice::Both => vec![Ranker::Classical, quantum],
    }
}

fn check_alpha(alpha: f64) -> Outcome {
    if (0.0..1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha).into())
    }
}

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Gen { input, output } => {
            let g = load(&input)?.graph;
            let text = match output.as_deref() {
                Some(p) if is_pajek(p) => g.to_pajek(),
                _ => g.to_edge_list(),
            };
            emit(output.as_deref(), text.as_bytes())
        }
        Command::Rank {
            input,
            output,
            alpha,
            bare,
            unpatched,
            tol,
            max_iter,
            start,
        } => rank(
            &input,
            &output,
            alpha,
            bare,
            unpatched,
            start,
            PowerConfig { tol, max_iter },
        ),
        Command::Qrank {
            input,
            output,
            walk,
            alpha,
            offset,
        } => {
            let loaded = load(&input)?;
            if !(0.0..=1.0).contains(&alpha) {
                return Err(Error::InvalidAlpha(alpha).into());
            }
            let gm = google_matrix(StochasticMatrix::from_graph(&loaded.graph), alpha)?;
            let series = quantum_series(&gm, offset, walk.steps, walk.backend.into())?;
            let bytes = match output.format {
                Format::Csv => csv_bytes(|b| write_series_csv(b, &series))?,
                Format::Json => {
                    let ranker = Ranker::Quantum {
                        steps: walk.steps,
                        backend: walk.backend.into(),
                    };
                    json(&Reported {
                        result: &series,
                        provenance: Provenance::new(&loaded.graph, &ranker, alpha, loaded.seed),
                    })?
                }
            };
            emit(output.output.as_deref(), &bytes)
        }
        Command::Sweep {
            input,
            output,
            walk,
            grid,
            ranker,
        } => {
            let loaded = load(&input)?;
            let grid = parse_grid(&grid)?;
            let chosen = rankers(ranker, &walk);
            if output.format == Format::Csv && chosen.len() > 1 {
                return Err(Failure::Invalid(
                    "a CSV sweep holds one ranker; pick one or use --format json".into(),
                ));
            }
            let mut sweeps = Vec::new();
            for r in &chosen {
                sweeps.push(SweepOut {
                    ranker: r.to_string(),
                    steps: r.steps(),
                    graph_hash: loaded.graph.content_hash(),
                    seed: loaded.seed,
                    sweep: damping_sweep(&loaded.graph, &grid, r)?,
                });
            }
            let bytes = match output.format {
                Format::Csv => csv_bytes(|b| write_sweep_csv(b, &sweeps[0].sweep))?,
                Format::Json => json(&sweeps)?,
            };
            emit(output.output.as_deref(), &bytes)
        }
        Command::Attack {
            input,
            output,
            walk,
            alpha,
            k,
            ranker,
        } => {
            let loaded = load(&input)?;
            check_alpha(alpha)?;
            let mut reports = Vec::new();
            for r in rankers(ranker, &walk) {
                reports.push(Reported {
                    result: attack_sensitivity(&loaded.graph, k, &r, alpha)?,
                    provenance: Provenance::new(&loaded.graph, &r, alpha, loaded.seed),
                });
            }
            let bytes = match output.format {
                Format::Json => json(&reports)?,
                Format::Csv => csv_table(
                    &[
                        "ranker",
                        "k",
                        "rank_correlation",
                        "mean_displacement",
                        "max_displacement",
                        "removed",
                    ],
                    reports.iter().map(|r| {
                        vec![
                            r.provenance.ranker.clone(),
                            k.to_string(),
                            r.result.rank_correlation.to_string(),
                            r.result.mean_displacement.to_string(),
                            r.result.max_displacement.to_string(),
                            join(&r.result.removed),
                        ]
                    }),
                )?,
            };
            emit(output.output.as_deref(), &bytes)
        }
        Command::Analyze {
            input,
            output,
            walk,
            alpha,
            delta,
            ranker,
        } => {
            let loaded = load(&input)?;
            check_alpha(alpha)?;
            let mut reports: Vec<Reported<RankingSummary>> = Vec::new();
            for r in rankers(ranker, &walk) {
                let p = r.rank(&loaded.graph, alpha)?;
                reports.push(Reported {
                    result: summarize(&p, delta)?,
                    provenance: Provenance::new(&loaded.graph, &r, alpha, loaded.seed),
                });
            }
            let bytes = match output.format {
                Format::Json => json(&reports)?,
                Format::Csv => csv_table(
                    &[
                        "ranker",
                        "ipr",
                        "exponent",
                        "intercept",
                        "r_squared",
                        "fit_start",
                        "fit_end",
                        "class_count",
                        "largest_tail_class",
                        "spread",
                    ],
                    reports.iter().map(|r| {
                        let s = &r.result;
                        let fit = |f: fn(&qrank_core::analysis::PowerLawFit) -> String| {
                            s.power_law.as_ref().map(f).unwrap_or_default()
                        };
                        vec![
                            r.provenance.ranker.clone(),
                            s.ipr.to_string(),
                            fit(|p| p.exponent.to_string()),
                            fit(|p| p.intercept.to_string()),
                            fit(|p| p.r_squared.to_string()),
                            fit(|p| p.fitted_range.start.to_string()),
                            fit(|p| p.fitted_range.end.to_string()),
                            s.degeneracy.class_count.to_string(),
                            s.degeneracy.largest_tail_class.to_string(),
                            s.spread.to_string(),
                        ]
                    }),
                )?,
            };
            emit(output.output.as_deref(), &bytes)
        }
        Command::Compare {
            input,
            output,
            walk,
            alpha,
        } => {
            let loaded = load(&input)?;
            check_alpha(alpha)?;
            let g = &loaded.graph;
            let classical = classical_pagerank(g, alpha)?;
            let quantum = quantum_pagerank(g, alpha, walk.steps, walk.backend.into())?.average;
            let rows = comparison_table(g, &classical, &quantum)?;
            let bytes = match output.format {
                Format::Csv => csv_bytes(|b| write_comparison_csv(b, &rows))?,
                Format::Json => json(&rows)?,
            };
            emit(output.output.as_deref(), &bytes)
        }
    }
}

#[derive(Serialize)]
struct SweepOut {
    ranker: String,
    steps: Option<usize>,
    graph_hash: String,
    seed: Option<u64>,
    #[serde(flatten)]
    sweep: qrank_core::analysis::FidelitySweep,
}

#[derive(Serialize)]
struct RankOut<'a> {
    rows: Vec<qrank_core::export::RankRow>,
    iterations: usize,
    status: &'a Convergence,
    matrix: &'static str,
    alpha: Option<f64>,
    graph_hash: String,
    seed: Option<u64>,
}

fn rank(
    input: &InputArgs,
    output: &OutputArgs,
    alpha: f64,
    bare: bool,
    unpatched: bool,
    start_node: Option<usize>,
    cfg: PowerConfig,
) -> Outcome {
    let loaded = load(input)?;
    let g = &loaded.graph;
    let n = g.node_count();
    let start = match start_node {
        None => vec![1.0 / n as f64; n],
        Some(s) if s < n => (0..n).map(|i| if i == s { 1.0 } else { 0.0 }).collect(),
        Some(s) => {
            return Err(Error::NodeOutOfRange {
                node: s,
                node_count: n,
            }
            .into())
        }
    };
    let (result, matrix): (PowerIteration, _) = if bare && unpatched {
        (
            power_method(&hyperlink_matrix(g), &start, &cfg)?,
            "hyperlink",
        )
    } else if bare {
        (
            power_method(&patch_dangling(&hyperlink_matrix(g)), &start, &cfg)?,
            "stochastic",
        )
    } else {
        let gm = google_matrix(StochasticMatrix::from_graph(g), alpha)?;
        (power_method(&gm, &start, &cfg)?, "google")
    };

    match &result.status {
        Convergence::Converged => {}
        Convergence::DegenerateLimit => {
            eprintln!("note: iteration converged to the zero vector; scores are not normalized")
        }
        Convergence::Periodic { period, .. } => eprintln!(
            "note: iteration is periodic with period {period}; scores are the last iterate"
        ),
        Convergence::NotConverged => eprintln!(
            "note: no convergence after {} iterations; scores are the last iterate",
            result.iterations
        ),
    }

    let bytes = match output.format {
        Format::Csv => csv_bytes(|b| write_rank_csv(b, g, &result.vector))?,
        Format::Json => json(&RankOut {
            rows: rank_rows(g, &result.vector),
            iterations: result.iterations,
            status: &result.status,
            matrix,
            alpha: (!bare).then_some(alpha),
            graph_hash: g.content_hash(),
            seed: loaded.seed,
        })?,
    };
    emit(output.output.as_deref(), &bytes)
}

fn join(nodes: &[usize]) -> String {
    nodes
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn csv_table(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Outcome<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(internal)?;
    for row in rows {
        w.write_record(&row).map_err(internal)?;
    }
    w.into_inner().map_err(internal)
}
