//! Directed graph model, file ingestion and network generators.

mod generators;
mod parse;

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use generators::{
    benchmark_graph, generate_binary_tree, generate_hierarchical, generate_scale_free,
    generate_scale_free_with, AttachmentMix, Benchmark, RootOrientation,
};
pub use parse::{parse_edge_list, parse_pajek};

/// A simple directed graph on nodes `0..node_count`.
///
/// Arcs are kept sorted by `(src, dst)` without duplicates or self-loops, so
/// two graphs with the same arc set compare equal regardless of how they were
/// built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    node_count: usize,
    arcs: Vec<(usize, usize)>,
    /// CSR offsets into `arcs` by source node.
    offsets: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl DirectedGraph {
    /// Builds a graph from an arc list. Duplicate arcs are collapsed; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn new(node_count: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::NoNodes);
        }
        let mut arcs: Vec<(usize, usize)> = arcs.into_iter().collect();
        for &(s, d) in &arcs {
            for node in [s, d] {
                if node >= node_count {
                    return Err(Error::NodeOutOfRange { node, node_count });
                }
            }
            if s == d {
                return Err(Error::SelfLoop { node: s });
            }
        }
        arcs.sort_unstable();
        arcs.dedup();
        let offsets = csr_offsets(node_count, &arcs);
        Ok(Self {
            node_count,
            arcs,
            offsets,
            labels: None,
        })
    }

    /// Like [`DirectedGraph::new`] but silently drops self-loops.
    pub(crate) fn new_dropping_loops(
        node_count: usize,
        arcs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        Self::new(node_count, arcs.into_iter().filter(|(s, d)| s != d))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.node_count {
            return Err(Error::DimensionMismatch {
                left: labels.len(),
                right: self.node_count,
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Arcs sorted by `(src, dst)`.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of `node`, falling back to its index.
    pub fn label(&self, node: usize) -> String {
        match &self.labels {
            Some(l) => l[node].clone(),
            None => node.to_string(),
        }
    }

    /// Targets of the arcs leaving `node`, ascending.
    pub fn successors(&self, node: usize) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.arcs[self.offsets[node]..self.offsets[node + 1]]
            .iter()
            .map(|&(_, d)| d)
    }

    pub fn out_degree(&self, node: usize) -> Result<usize> {
        if node >= self.node_count {
            return Err(Error::NodeOutOfRange {
                node,
                node_count: self.node_count,
            });
        }
        Ok(self.offsets[node + 1] - self.offsets[node])
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.node_count];
        for &(_, d) in &self.arcs {
            deg[d] += 1;
        }
        deg
    }

    pub fn has_arc(&self, src: usize, dst: usize) -> bool {
        src < self.node_count
            && self.arcs[self.offsets[src]..self.offsets[src + 1]]
                .binary_search(&(src, dst))
                .is_ok()
    }

    /// Induced subgraph on the nodes not in `victims`, reindexed contiguously
    /// in ascending original order.
    pub fn remove_nodes(&self, victims: &[usize]) -> Result<ReducedGraph> {
        let mut removed = vec![false; self.node_count];
        for &v in victims {
            if v >= self.node_count {
                return Err(Error::NodeOutOfRange {
                    node: v,
                    node_count: self.node_count,
                });
            }
            removed[v] = true;
        }
        let original_index: Vec<usize> = (0..self.node_count).filter(|&i| !removed[i]).collect();
        if original_index.is_empty() {
            return Err(Error::NoNodes);
        }
        let mut new_index = vec![usize::MAX; self.node_count];
        for (new, &old) in original_index.iter().enumerate() {
            new_index[old] = new;
        }
        let arcs = self
            .arcs
            .iter()
            .filter(|&&(s, d)| !removed[s] && !removed[d])
            .map(|&(s, d)| (new_index[s], new_index[d]));
        let mut graph = DirectedGraph::new(original_index.len(), arcs)?;
        if let Some(labels) = &self.labels {
            graph.labels = Some(original_index.iter().map(|&i| labels[i].clone()).collect());
        }
        Ok(ReducedGraph {
            graph,
            original_index,
        })
    }

    /// Canonical edge-list text: arcs sorted by `(src, dst)`, preceded by a
    /// node-count directive and label directives when labels are present.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# nodes: {}", self.node_count).unwrap();
        if let Some(labels) = &self.labels {
            for (i, l) in labels.iter().enumerate() {
                writeln!(out, "# label: {i} {l}").unwrap();
            }
        }
        for &(s, d) in &self.arcs {
            writeln!(out, "{s} {d}").unwrap();
        }
        out
    }

    /// Pajek `*Vertices`/`*Arcs` text with 1-based ids.
    pub fn to_pajek(&self) -> String {
        let mut out = String::new();
        writeln!(out, "*Vertices {}", self.node_count).unwrap();
        if let Some(labels) = &self.labels {
            for (i, l) in labels.iter().enumerate() {
                writeln!(out, "{} \"{}\"", i + 1, l).unwrap();
            }
        }
        writeln!(out, "*Arcs").unwrap();
        for &(s, d) in &self.arcs {
            writeln!(out, "{} {}", s + 1, d + 1).unwrap();
        }
        out
    }

    /// Hex SHA-256 of the canonical edge list.
    pub fn content_hash(&self) -> String {
        Sha256::digest(self.to_edge_list().as_bytes()).iter().fold(
            String::with_capacity(64),
            |mut s, b| {
                write!(s, "{b:02x}").unwrap();
                s
            },
        )
    }
}

fn csr_offsets(node_count: usize, sorted_arcs: &[(usize, usize)]) -> Vec<usize> {
    let mut offsets = vec![0; node_count + 1];
    for &(s, _) in sorted_arcs {
        offsets[s + 1] += 1;
    }
    for i in 0..node_count {
        offsets[i + 1] += offsets[i];
    }
    offsets
}

/// Result of [`DirectedGraph::remove_nodes`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedGraph {
    pub graph: DirectedGraph,
    /// `original_index[new] = old`.
    pub original_index: Vec<usize>,
}
