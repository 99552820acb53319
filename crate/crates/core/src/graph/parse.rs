use std::collections::HashMap;

use super::DirectedGraph;
use crate::error::{Error, Result};

fn malformed(line: usize, reason: impl Into<String>) -> Error {
    Error::MalformedLine {
        line,
        reason: reason.into(),
    }
}

/// Parses a whitespace-separated edge list.
///
/// Lines starting with `#` are comments, except for the two directives written
/// by [`DirectedGraph::to_edge_list`]: `# nodes: N` fixes the node count and
/// `# label: i text` attaches a label to integer node `i`.
///
/// If every token is an integer and the ids cover `0..N` they are used as-is.
/// Otherwise tokens are treated as labels and nodes are numbered in order of
/// first appearance.
pub fn parse_edge_list(text: &str) -> Result<DirectedGraph> {
    let mut declared_nodes: Option<usize> = None;
    let mut label_directives: Vec<(usize, String)> = Vec::new();
    let mut pairs: Vec<(usize, &str, &str)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim_start();
            if let Some(rest) = comment.strip_prefix("nodes:") {
                let n = rest
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| malformed(line_no, "bad node-count directive"))?;
                declared_nodes = Some(n);
            } else if let Some(rest) = comment.strip_prefix("label:") {
                let rest = rest.trim_start();
                let (id, label) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                let id = id
                    .parse::<usize>()
                    .map_err(|_| malformed(line_no, "bad label directive"))?;
                label_directives.push((id, label.trim().to_string()));
            }
            continue;
        }
        let mut tokens = line.split_whitespace();
        match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(s), Some(d), None) => pairs.push((line_no, s, d)),
            _ => return Err(malformed(line_no, "expected `src dst`")),
        }
    }

    let numeric: Option<Vec<(usize, usize, usize)>> = pairs
        .iter()
        .map(|&(l, s, d)| Some((l, s.parse().ok()?, d.parse().ok()?)))
        .collect();

    let (node_count, arcs, labels) = match numeric {
        Some(ids) if is_contiguous(&ids, declared_nodes) => {
            let max = ids.iter().map(|&(_, s, d)| s.max(d) + 1).max().unwrap_or(0);
            let n = declared_nodes.unwrap_or(max);
            if n < max {
                let line = ids.iter().find(|&&(_, s, d)| s.max(d) >= n).unwrap().0;
                return Err(malformed(
                    line,
                    format!("node id exceeds declared count {n}"),
                ));
            }
            let arcs: Vec<(usize, usize, usize)> = ids;
            let labels = if label_directives.is_empty() {
                None
            } else {
                let mut labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
                for (id, label) in label_directives {
                    if id >= n {
                        return Err(Error::NodeOutOfRange {
                            node: id,
                            node_count: n,
                        });
                    }
                    labels[id] = label;
                }
                Some(labels)
            };
            (n, arcs, labels)
        }
        _ => {
            let mut index: HashMap<&str, usize> = HashMap::new();
            let mut labels: Vec<String> = Vec::new();
            let mut id_of = |tok| {
                *index.entry(tok).or_insert_with(|| {
                    labels.push(tok.to_string());
                    labels.len() - 1
                })
            };
            let arcs: Vec<(usize, usize, usize)> = pairs
                .iter()
                .map(|&(l, s, d)| (l, id_of(s), id_of(d)))
                .collect();
            (labels.len(), arcs, Some(labels))
        }
    };

    if node_count == 0 {
        return Err(Error::NoNodes);
    }
    if let Some(&(line, _, _)) = arcs.iter().find(|&&(_, s, d)| s == d) {
        return Err(malformed(line, "self-loop"));
    }
    let graph = DirectedGraph::new(node_count, arcs.into_iter().map(|(_, s, d)| (s, d)))?;
    match labels {
        Some(l) => graph.with_labels(l),
        None => Ok(graph),
    }
}

fn is_contiguous(ids: &[(usize, usize, usize)], declared: Option<usize>) -> bool {
    if declared.is_some() {
        return true;
    }
    let max = ids.iter().map(|&(_, s, d)| s.max(d) + 1).max().unwrap_or(0);
    let mut seen = vec![false; max];
    for &(_, s, d) in ids {
        seen[s] = true;
        seen[d] = true;
    }
    seen.into_iter().all(|b| b)
}

#[derive(PartialEq)]
enum Section {
    Preamble,
    Vertices,
    Arcs,
}

/// Parses the `*Vertices` / `*Arcs` subset of the Pajek `.net` format.
///
/// Ids are 1-based on disk and 0-based in the returned graph. Lines starting
/// with `%` are comments; arc weights and vertex coordinates are ignored.
pub fn parse_pajek(text: &str) -> Result<DirectedGraph> {
    let mut section = Section::Preamble;
    let mut node_count: Option<usize> = None;
    let mut labels: Vec<Option<String>> = Vec::new();
    let mut arcs: Vec<(usize, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if let Some(header) = line.strip_prefix('*') {
            let mut words = header.split_whitespace();
            let keyword = words.next().unwrap_or("").to_ascii_lowercase();
            match keyword.as_str() {
                "vertices" => {
                    let n = words
                        .next()
                        .and_then(|w| w.parse::<usize>().ok())
                        .ok_or_else(|| malformed(line_no, "bad *Vertices count"))?;
                    if n == 0 {
                        return Err(Error::NoNodes);
                    }
                    node_count = Some(n);
                    labels = vec![None; n];
                    section = Section::Vertices;
                }
                "arcs" => {
                    if node_count.is_none() {
                        return Err(Error::MissingVerticesHeader);
                    }
                    section = Section::Arcs;
                }
                other => {
                    return Err(malformed(line_no, format!("unsupported section *{other}")));
                }
            }
            continue;
        }
        match section {
            Section::Preamble => return Err(Error::MissingVerticesHeader),
            Section::Vertices => {
                let n = node_count.unwrap();
                let (id_tok, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
                let id = parse_id(id_tok, line_no)?;
                if id == 0 || id > n {
                    return Err(Error::UndeclaredVertex { line: line_no, id });
                }
                if labels[id - 1].is_some() {
                    return Err(Error::DuplicateVertex { line: line_no, id });
                }
                labels[id - 1] =
                    Some(vertex_label(rest.trim(), line_no)?.unwrap_or_else(|| id.to_string()));
            }
            Section::Arcs => {
                let n = node_count.unwrap();
                let mut tokens = line.split_whitespace();
                let (s, d) = match (tokens.next(), tokens.next()) {
                    (Some(s), Some(d)) => (parse_id(s, line_no)?, parse_id(d, line_no)?),
                    _ => return Err(malformed(line_no, "expected `src dst`")),
                };
                for id in [s, d] {
                    if id == 0 || id > n {
                        return Err(Error::UndeclaredVertex { line: line_no, id });
                    }
                }
                if s == d {
                    return Err(malformed(line_no, "self-loop"));
                }
                arcs.push((s - 1, d - 1));
            }
        }
    }

    let n = node_count.ok_or(Error::MissingVerticesHeader)?;
    let graph = DirectedGraph::new(n, arcs)?;
    if labels.iter().any(Option::is_some) {
        let labels = labels
            .into_iter()
            .enumerate()
            .map(|(i, l)| l.unwrap_or_else(|| (i + 1).to_string()))
            .collect();
        graph.with_labels(labels)
    } else {
        Ok(graph)
    }
}

fn parse_id(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| malformed(line, format!("`{tok}` is not a vertex id")))
}

fn vertex_label(rest: &str, line: usize) -> Result<Option<String>> {
    if rest.is_empty() {
        return Ok(None);
    }
    if let Some(quoted) = rest.strip_prefix('"') {
        let end = quoted
            .find('"')
            .ok_or_else(|| malformed(line, "unterminated label"))?;
        return Ok(Some(quoted[..end].to_string()));
    }
    Ok(rest.split_whitespace().next().map(str::to_string))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_node_web() {
        let g = parse_edge_list("0 1\n").unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.arcs(), &[(0, 1)]);
        assert!(g.labels().is_none());
    }

    #[test]
    fn empty_input_has_no_nodes() {
        assert_eq!(parse_edge_list(""), Err(Error::NoNodes));
        assert_eq!(parse_edge_list("# only a comment\n\n"), Err(Error::NoNodes));
    }

    #[test]
    fn string_labels_in_first_appearance_order() {
        let g = parse_edge_list("a b\nb a\n").unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.arcs(), &[(0, 1), (1, 0)]);
        assert_eq!(g.labels().unwrap(), &["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        assert_eq!(
            parse_edge_list("0 1\n1\n"),
            Err(Error::MalformedLine {
                line: 2,
                reason: "expected `src dst`".into()
            })
        );
        assert!(matches!(
            parse_edge_list("0 1\n1 2 3\n"),
            Err(Error::MalformedLine { line: 2, .. })
        ));
    }

    #[test]
    fn self_loop_is_rejected_with_line() {
        assert!(matches!(
            parse_edge_list("0 1\n1 1\n"),
            Err(Error::MalformedLine { line: 2, .. })
        ));
    }

    #[test]
    fn sparse_integer_ids_are_reindexed() {
        let g = parse_edge_list("10 20\n20 5\n").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.arcs(), &[(0, 1), (1, 2)]);
        assert_eq!(g.labels().unwrap(), &["10", "20", "5"]);
    }

    #[test]
    fn node_directive_keeps_isolated_nodes() {
        let g = parse_edge_list("# nodes: 4\n0 1\n").unwrap();
        assert_eq!(g.node_count(), 4);
        let single = parse_edge_list("# nodes: 1\n").unwrap();
        assert_eq!(single.node_count(), 1);
        assert!(parse_edge_list("# nodes: 1\n0 3\n").is_err());
    }

    #[test]
    fn minimal_pajek() {
        let g = parse_pajek("*Vertices 2\n1 \"home\"\n2 \"page\"\n*Arcs\n1 2\n").unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.arcs(), &[(0, 1)]);
        assert_eq!(g.labels().unwrap(), &["home", "page"]);
    }

    #[test]
    fn pajek_errors() {
        assert_eq!(
            parse_pajek("*Vertices 2\n*Arcs\n3 1\n"),
            Err(Error::UndeclaredVertex { line: 3, id: 3 })
        );
        assert_eq!(
            parse_pajek("*Arcs\n1 2\n"),
            Err(Error::MissingVerticesHeader)
        );
        assert_eq!(parse_pajek("1 2\n"), Err(Error::MissingVerticesHeader));
        assert_eq!(parse_pajek(""), Err(Error::MissingVerticesHeader));
        assert_eq!(
            parse_pajek("*Vertices 2\n1 \"a\"\n1 \"b\"\n"),
            Err(Error::DuplicateVertex { line: 3, id: 1 })
        );
        assert!(matches!(
            parse_pajek("*Vertices 2\n*Edges\n1 2\n"),
            Err(Error::MalformedLine { line: 2, .. })
        ));
    }

    #[test]
    fn pajek_ignores_weights_and_comments() {
        let g = parse_pajek("% exported\n*vertices 3\n*arcs\n1 2 0.5\n2 3 1\n3 1\n").unwrap();
        assert_eq!(g.arcs(), &[(0, 1), (1, 2), (2, 0)]);
        assert!(g.labels().is_none());
    }
}
