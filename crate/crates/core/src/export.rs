//! CSV writers and readers for rank vectors, quantum series, fidelity
//! sweeps and classical/quantum comparisons.
//!
//! Floats are written in Rust's shortest round-trip form, so reading a file
//! back gives bit-identical values.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::analysis::{rank_positions, FidelitySweep};
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::quantum::QuantumRankSeries;
use crate::rank::RankVector;

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(false).from_writer(w)
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(r)
}

fn parse_f64(field: &str, line: usize) -> Result<f64> {
    field.parse().map_err(|_| Error::MalformedLine {
        line,
        reason: format!("`{field}` is not a number"),
    })
}

fn parse_usize(field: &str, line: usize) -> Result<usize> {
    field.parse().map_err(|_| Error::MalformedLine {
        line,
        reason: format!("`{field}` is not an index"),
    })
}

fn line_of(rec: &csv::StringRecord) -> usize {
    rec.position().map_or(0, |p| p.line() as usize)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankRow {
    pub node_index: usize,
    pub label: String,
    pub score: f64,
}

/// Rows of `p` by descending score, ties broken by node index.
pub fn rank_rows(g: &DirectedGraph, p: &RankVector) -> Vec<RankRow> {
    p.ordering()
        .into_iter()
        .map(|i| RankRow {
            node_index: i,
            label: g.label(i),
            score: p[i],
        })
        .collect()
}

/// Writes `node_index,label,score`.
pub fn write_rank_csv<W: Write>(w: W, g: &DirectedGraph, p: &RankVector) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["node_index", "label", "score"])?;
    for row in rank_rows(g, p) {
        out.write_record([row.node_index.to_string(), row.label, row.score.to_string()])?;
    }
    out.flush().map_err(|e| Error::Csv(e.to_string()))
}

pub fn read_rank_csv<R: Read>(r: R) -> Result<Vec<RankRow>> {
    let mut rows = Vec::new();
    for rec in reader(r).records() {
        let rec = rec?;
        let line = line_of(&rec);
        if rec.len() != 3 {
            return Err(Error::MalformedLine {
                line,
                reason: "expected node_index,label,score".into(),
            });
        }
        rows.push(RankRow {
            node_index: parse_usize(&rec[0], line)?,
            label: rec[1].to_string(),
            score: parse_f64(&rec[2], line)?,
        });
    }
    Ok(rows)
}

/// Reassembles a rank vector from rows in any order.
pub fn rank_vector_from_rows(rows: &[RankRow]) -> Result<RankVector> {
    let n = rows.len();
    let mut values = vec![None; n];
    for row in rows {
        let slot = values
            .get_mut(row.node_index)
            .ok_or(Error::NodeOutOfRange {
                node: row.node_index,
                node_count: n,
            })?;
        *slot = Some(row.score);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| Error::InvalidParameter(format!("node {i} missing from rank rows")))
        })
        .collect::<Result<Vec<_>>>()?;
    RankVector::new(values)
}

/// Writes `m,node_0,...` with one row per recorded step and a final `avg`
/// row.
pub fn write_series_csv<W: Write>(w: W, s: &QuantumRankSeries) -> Result<()> {
    let mut out = writer(w);
    let n = s.node_count();
    let header = std::iter::once("m".to_string()).chain((0..n).map(|i| format!("node_{i}")));
    out.write_record(header)?;
    for (r, row) in s.instantaneous.iter().enumerate() {
        let fields =
            std::iter::once((s.offset + r).to_string()).chain(row.iter().map(f64::to_string));
        out.write_record(fields)?;
    }
    let avg =
        std::iter::once("avg".to_string()).chain(s.average.values().iter().map(f64::to_string));
    out.write_record(avg)?;
    out.flush().map_err(|e| Error::Csv(e.to_string()))
}

pub fn read_series_csv<R: Read>(r: R) -> Result<QuantumRankSeries> {
    let mut rdr = reader(r);
    let n = rdr.headers()?.len().saturating_sub(1);
    let mut offset = None;
    let mut rows = Vec::new();
    let mut average = None;
    for rec in rdr.records() {
        let rec = rec?;
        let line = line_of(&rec);
        if average.is_some() {
            return Err(Error::MalformedLine {
                line,
                reason: "rows after the avg row".into(),
            });
        }
        let values = rec
            .iter()
            .skip(1)
            .map(|f| parse_f64(f, line))
            .collect::<Result<Vec<_>>>()?;
        if values.len() != n {
            return Err(Error::MalformedLine {
                line,
                reason: format!("expected {n} values"),
            });
        }
        if &rec[0] == "avg" {
            average = Some(RankVector::new(values)?);
        } else {
            let m = parse_usize(&rec[0], line)?;
            let expected = *offset.get_or_insert(m) + rows.len();
            if m != expected {
                return Err(Error::MalformedLine {
                    line,
                    reason: format!("expected step {expected}, found {m}"),
                });
            }
            rows.push(values);
        }
    }
    let average = average.ok_or_else(|| Error::Csv("missing avg row".into()))?;
    Ok(QuantumRankSeries {
        offset: offset.unwrap_or(0),
        instantaneous: rows,
        average,
    })
}

/// Writes the fidelity matrix with the damping grid as header row and first
/// column.
pub fn write_sweep_csv<W: Write>(w: W, s: &FidelitySweep) -> Result<()> {
    let mut out = writer(w);
    let header =
        std::iter::once("alpha".to_string()).chain(s.alpha_grid.iter().map(f64::to_string));
    out.write_record(header)?;
    for (a, row) in s.alpha_grid.iter().zip(&s.pairwise_fidelity) {
        out.write_record(std::iter::once(a.to_string()).chain(row.iter().map(f64::to_string)))?;
    }
    out.flush().map_err(|e| Error::Csv(e.to_string()))
}

/// Returns the damping grid and the fidelity matrix.
pub fn read_sweep_csv<R: Read>(r: R) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let mut rdr = reader(r);
    let grid = rdr
        .headers()?
        .iter()
        .skip(1)
        .map(|f| parse_f64(f, 1))
        .collect::<Result<Vec<_>>>()?;
    let mut matrix = Vec::with_capacity(grid.len());
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = line_of(&rec);
        let values = rec
            .iter()
            .map(|f| parse_f64(f, line))
            .collect::<Result<Vec<_>>>()?;
        if values.len() != grid.len() + 1 || grid.get(k) != Some(&values[0]) {
            return Err(Error::MalformedLine {
                line,
                reason: "row does not match the header grid".into(),
            });
        }
        matrix.push(values[1..].to_vec());
    }
    if matrix.len() != grid.len() {
        return Err(Error::DimensionMismatch {
            left: matrix.len(),
            right: grid.len(),
        });
    }
    Ok((grid, matrix))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub node: usize,
    pub label: String,
    pub classical: f64,
    pub quantum_avg: f64,
    pub classical_rank: usize,
    pub quantum_rank: usize,
}

/// Side-by-side table ordered by classical rank.
pub fn comparison_table(
    g: &DirectedGraph,
    classical: &RankVector,
    quantum: &RankVector,
) -> Result<Vec<ComparisonRow>> {
    if classical.len() != quantum.len() || classical.len() != g.node_count() {
        return Err(Error::DimensionMismatch {
            left: classical.len(),
            right: quantum.len(),
        });
    }
    let cr = rank_positions(classical);
    let qr = rank_positions(quantum);
    let mut rows: Vec<ComparisonRow> = (0..g.node_count())
        .map(|i| ComparisonRow {
            node: i,
            label: g.label(i),
            classical: classical[i],
            quantum_avg: quantum[i],
            classical_rank: cr[i],
            quantum_rank: qr[i],
        })
        .collect();
    rows.sort_by_key(|r| r.classical_rank);
    Ok(rows)
}

pub fn write_comparison_csv<W: Write>(w: W, rows: &[ComparisonRow]) -> Result<()> {
    let mut out = writer(w);
    out.write_record([
        "node",
        "label",
        "classical",
        "quantum_avg",
        "classical_rank",
        "quantum_rank",
    ])?;
    for r in rows {
        out.write_record([
            r.node.to_string(),
            r.label.clone(),
            r.classical.to_string(),
            r.quantum_avg.to_string(),
            r.classical_rank.to_string(),
            r.quantum_rank.to_string(),
        ])?;
    }
    out.flush().map_err(|e| Error::Csv(e.to_string()))
}

pub fn read_comparison_csv<R: Read>(r: R) -> Result<Vec<ComparisonRow>> {
    let mut rows = Vec::new();
    for rec in reader(r).records() {
        let rec = rec?;
        let line = line_of(&rec);
        if rec.len() != 6 {
            return Err(Error::MalformedLine {
                line,
                reason: "expected six columns".into(),
            });
        }
        rows.push(ComparisonRow {
            node: parse_usize(&rec[0], line)?,
            label: rec[1].to_string(),
            classical: parse_f64(&rec[2], line)?,
            quantum_avg: parse_f64(&rec[3], line)?,
            classical_rank: parse_usize(&rec[4], line)?,
            quantum_rank: parse_usize(&rec[5], line)?,
        });
    }
    Ok(rows)
}
