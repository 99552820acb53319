use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::DirectedGraph;
use crate::error::{Error, Result};

/// Event probabilities and degree offsets of the directed preferential
/// attachment process.
///
/// At every step one of three events happens:
/// * with probability `new_node_out` a new node gets an arc to an existing
///   node chosen by in-degree;
/// * with probability `existing` an arc is added between two existing nodes,
///   source chosen by out-degree and target by in-degree;
/// * with probability `new_node_in` an existing node chosen by out-degree gets
///   an arc to a new node.
///
/// Degrees are offset by `delta_in` / `delta_out` before sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttachmentMix {
    pub new_node_out: f64,
    pub existing: f64,
    pub new_node_in: f64,
    pub delta_in: f64,
    pub delta_out: f64,
}

impl Default for AttachmentMix {
    fn default() -> Self {
        Self {
            new_node_out: 0.41,
            existing: 0.54,
            new_node_in: 0.05,
            delta_in: 0.2,
            delta_out: 0.0,
        }
    }
}

impl AttachmentMix {
    fn validate(&self) -> Result<()> {
        let p = [self.new_node_out, self.existing, self.new_node_in];
        let ok = p.iter().all(|x| x.is_finite() && *x >= 0.0)
            && (p.iter().sum::<f64>() - 1.0).abs() < 1e-9
            && self.delta_in >= 0.0
            && self.delta_out >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidProbabilities(p))
        }
    }
}

/// Directed scale-free graph with the default attachment mix.
pub fn generate_scale_free(nodes: usize, seed: u64) -> Result<DirectedGraph> {
    generate_scale_free_with(nodes, seed, &AttachmentMix::default())
}

/// Directed scale-free graph grown from a 3-cycle until it has `nodes` nodes.
/// Multi-arcs are collapsed and self-loops dropped afterwards.
pub fn generate_scale_free_with(
    nodes: usize,
    seed: u64,
    mix: &AttachmentMix,
) -> Result<DirectedGraph> {
    mix.validate()?;
    if nodes < 3 {
        return Err(Error::InvalidParameter(format!(
            "scale-free graphs need at least 3 nodes, got {nodes}"
        )));
    }
    if mix.new_node_out + mix.new_node_in == 0.0 {
        return Err(Error::InvalidProbabilities([
            mix.new_node_out,
            mix.existing,
            mix.new_node_in,
        ]));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // One entry per arc endpoint, so uniform sampling is degree-proportional.
    let mut sources: Vec<usize> = vec![0, 1, 2];
    let mut targets: Vec<usize> = vec![1, 2, 0];
    let mut count = 3;

    while count < nodes {
        let r: f64 = rng.random();
        let (v, w) = if r < mix.new_node_out {
            let v = count;
            count += 1;
            let w = pick(&mut rng, &targets, count, mix.delta_in);
            (v, w)
        } else if r < mix.new_node_out + mix.existing {
            let v = pick(&mut rng, &sources, count, mix.delta_out);
            let w = pick(&mut rng, &targets, count, mix.delta_in);
            (v, w)
        } else {
            let v = pick(&mut rng, &sources, count, mix.delta_out);
            let w = count;
            count += 1;
            (v, w)
        };
        sources.push(v);
        targets.push(w);
    }

    DirectedGraph::new_dropping_loops(count, sources.into_iter().zip(targets))
}

/// Samples a node with probability proportional to `degree + delta`, where the
/// degree is the multiplicity in `endpoints` and nodes are `0..node_count`.
fn pick<R: Rng>(rng: &mut R, endpoints: &[usize], node_count: usize, delta: f64) -> usize {
    if delta > 0.0 {
        let bias = node_count as f64 * delta;
        if rng.random::<f64>() < bias / (bias + endpoints.len() as f64) {
            return rng.random_range(0..node_count);
        }
    }
    endpoints[rng.random_range(0..endpoints.len())]
}

/// Direction of the arcs joining replica bottom layers to the global root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RootOrientation {
    #[default]
    TowardRoot,
    AwayFromRoot,
}

/// Directed hierarchical graph of generation `n` with `3^n` nodes.
///
/// Generation 1 is the 3-cycle `0 -> 1 -> 2 -> 0`. Generation `k + 1` holds
/// three copies of generation `k` at offsets `0`, `3^k` and `2 * 3^k`; every
/// bottom-layer node of the two new copies is joined to node 0. A node is in
/// the bottom layer when no base-3 digit of its index within the copy is 0.
pub fn generate_hierarchical(
    generation: u32,
    orientation: RootOrientation,
) -> Result<DirectedGraph> {
    if !(1..=6).contains(&generation) {
        return Err(Error::InvalidParameter(format!(
            "hierarchical generation must be in 1..=6, got {generation}"
        )));
    }
    let mut arcs: Vec<(usize, usize)> = vec![(0, 1), (1, 2), (2, 0)];
    let mut size = 3usize;
    for level in 1..generation {
        let base = arcs.clone();
        for copy in 1..3 {
            let offset = copy * size;
            arcs.extend(base.iter().map(|&(s, d)| (s + offset, d + offset)));
            for local in (0..size).filter(|&v| is_bottom_layer(v, level)) {
                let node = offset + local;
                arcs.push(match orientation {
                    RootOrientation::TowardRoot => (node, 0),
                    RootOrientation::AwayFromRoot => (0, node),
                });
            }
        }
        size *= 3;
    }
    DirectedGraph::new(size, arcs)
}

fn is_bottom_layer(mut v: usize, digits: u32) -> bool {
    for _ in 0..digits {
        if v.is_multiple_of(3) {
            return false;
        }
        v /= 3;
    }
    true
}

/// Complete binary tree with `levels` levels, arcs pointing from child to
/// parent. Node 0 is the root and the children of `i` are `2i + 1`, `2i + 2`.
pub fn generate_binary_tree(levels: u32) -> Result<DirectedGraph> {
    if !(1..=20).contains(&levels) {
        return Err(Error::InvalidParameter(format!(
            "binary tree levels must be in 1..=20, got {levels}"
        )));
    }
    let n = (1usize << levels) - 1;
    DirectedGraph::new(n, (1..n).map(|c| (c, (c - 1) / 2)))
}

/// The small worked-example networks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Benchmark {
    /// Two nodes, one arc; node 1 is dangling.
    Fig1a,
    /// Same graph as `Fig1a`; the dangling patch lives at the matrix level.
    Fig1b,
    /// Directed 4-cycle.
    Fig1c,
    /// Four nodes, reducible: nodes 2 and 3 never link back to 0 and 1.
    Fig1d,
    /// Seven nodes without any nontrivial automorphism.
    Fig2b,
}

impl Benchmark {
    pub const ALL: [Benchmark; 5] = [
        Benchmark::Fig1a,
        Benchmark::Fig1b,
        Benchmark::Fig1c,
        Benchmark::Fig1d,
        Benchmark::Fig2b,
    ];
}

impl FromStr for Benchmark {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fig1a" => Ok(Benchmark::Fig1a),
            "fig1b" => Ok(Benchmark::Fig1b),
            "fig1c" => Ok(Benchmark::Fig1c),
            "fig1d" => Ok(Benchmark::Fig1d),
            "fig2b" => Ok(Benchmark::Fig2b),
            _ => Err(Error::UnknownBenchmark(s.to_string())),
        }
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Benchmark::Fig1a => "fig1a",
            Benchmark::Fig1b => "fig1b",
            Benchmark::Fig1c => "fig1c",
            Benchmark::Fig1d => "fig1d",
            Benchmark::Fig2b => "fig2b",
        };
        f.write_str(name)
    }
}

pub fn benchmark_graph(which: Benchmark) -> DirectedGraph {
    let (n, arcs): (usize, &[(usize, usize)]) = match which {
        Benchmark::Fig1a | Benchmark::Fig1b => (2, &[(0, 1)]),
        Benchmark::Fig1c => (4, &[(0, 1), (1, 2), (2, 3), (3, 0)]),
        Benchmark::Fig1d => (4, &[(0, 1), (0, 2), (0, 3), (1, 0), (1, 3), (2, 3), (3, 2)]),
        Benchmark::Fig2b => (
            7,
            &[
                (0, 1),
                (0, 2),
                (1, 3),
                (1, 6),
                (2, 3),
                (3, 4),
                (4, 0),
                (4, 5),
                (5, 6),
                (6, 2),
            ],
        ),
    };
    DirectedGraph::new(n, arcs.iter().copied()).expect("benchmark graphs are valid")
}
