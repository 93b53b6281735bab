//! Reading and writing graphs.
//!
//! Edge list: UTF-8 text, one `u v` pair of non-negative integer ids per
//! line, `#` starts a comment, any whitespace separates tokens. A line with a
//! single id declares a vertex without edges. Ids that do not form a dense
//! range `0..k` are remapped in increasing order and the mapping is returned.
//!
//! Matrix Market: `coordinate pattern` matrices, `symmetric` (lower triangle
//! stored, as usual) or `general` (every entry must have its mirror), 1-based.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    EdgeList,
    MatrixMarket,
}

impl Format {
    /// `.mtx` files are Matrix Market, everything else an edge list.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("mtx") => Format::MatrixMarket,
            _ => Format::EdgeList,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// `mapping[i]` is the original id of vertex `i`, present only when the
    /// input ids were not already `0..k`.
    pub mapping: Option<Vec<u64>>,
}

pub fn load_graph<R: BufRead>(source: R, format: Format) -> Result<LoadedGraph> {
    match format {
        Format::EdgeList => read_edge_list(source),
        Format::MatrixMarket => read_matrix_market(source).map(|graph| LoadedGraph {
            graph,
            mapping: None,
        }),
    }
}

pub fn load_graph_file(path: &Path) -> Result<LoadedGraph> {
    let file = std::fs::File::open(path)?;
    load_graph(std::io::BufReader::new(file), Format::from_path(path))
}

/// Whitespace-separated tokens with their 1-based byte columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_ascii_whitespace()
        .map(move |tok| (tok.as_ptr() as usize - line.as_ptr() as usize + 1, tok))
}

fn parse_id(tok: &str, line: usize, column: usize) -> Result<u64> {
    tok.parse::<u64>().map_err(|_| Error::Parse {
        line,
        column,
        message: format!("expected a non-negative integer, found `{tok}`"),
    })
}

fn read_edge_list<R: BufRead>(source: R) -> Result<LoadedGraph> {
    let mut edges: Vec<(u64, u64)> = Vec::new();
    let mut ids: BTreeSet<u64> = BTreeSet::new();
    for (idx, line) in source.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let content = match line.find('#') {
            Some(p) => &line[..p],
            None => &line[..],
        };
        let toks: Vec<(usize, &str)> = tokens(content).collect();
        match toks.as_slice() {
            [] => {}
            [(c, a)] => {
                ids.insert(parse_id(a, lineno, *c)?);
            }
            [(ca, a), (cb, b)] => {
                let u = parse_id(a, lineno, *ca)?;
                let v = parse_id(b, lineno, *cb)?;
                if u == v {
                    return Err(Error::SelfLoop {
                        vertex: u,
                        line: Some(lineno),
                    });
                }
                ids.insert(u);
                ids.insert(v);
                edges.push((u, v));
            }
            [_, _, (c, tok), ..] => {
                return Err(Error::Parse {
                    line: lineno,
                    column: *c,
                    message: format!("unexpected third token `{tok}`"),
                })
            }
        }
    }
    let dense = ids.iter().enumerate().all(|(i, &id)| i as u64 == id);
    let n = ids.len();
    if dense {
        let graph = Graph::from_edges(n, edges.iter().map(|&(u, v)| (u as usize, v as usize)))?;
        return Ok(LoadedGraph {
            graph,
            mapping: None,
        });
    }
    let mapping: Vec<u64> = ids.into_iter().collect();
    let index = |id: u64| mapping.binary_search(&id).expect("id was collected");
    let graph = Graph::from_edges(n, edges.iter().map(|&(u, v)| (index(u), index(v))))?;
    Ok(LoadedGraph {
        graph,
        mapping: Some(mapping),
    })
}

fn read_matrix_market<R: BufRead>(source: R) -> Result<Graph> {
    let mut lines = source.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        column: 1,
        message: "empty input".into(),
    })?;
    let header = header?;
    let fields: Vec<String> = header
        .split_ascii_whitespace()
        .map(|s| s.to_ascii_lowercase())
        .collect();
    if fields.first().map(String::as_str) != Some("%%matrixmarket") {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "missing %%MatrixMarket banner".into(),
        });
    }
    let expect = ["matrix", "coordinate", "pattern"];
    for (i, want) in expect.iter().enumerate() {
        if fields.get(i + 1).map(String::as_str) != Some(*want) {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: format!("only `matrix coordinate pattern` is supported, expected `{want}`"),
            });
        }
    }
    let symmetric = match fields.get(4).map(String::as_str) {
        Some("symmetric") => true,
        Some("general") => false,
        other => {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: format!("unsupported symmetry `{}`", other.unwrap_or("")),
            })
        }
    };

    let mut size: Option<(usize, usize)> = None;
    let mut entries: Vec<(u64, u64)> = Vec::new();
    let mut last_line = 1;
    for (idx, line) in lines {
        let lineno = idx + 1;
        last_line = lineno;
        let line = line?;
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let toks: Vec<(usize, &str)> = tokens(&line).collect();
        match size {
            None => {
                if toks.len() != 3 {
                    return Err(Error::Parse {
                        line: lineno,
                        column: 1,
                        message: "size line must be `rows cols entries`".into(),
                    });
                }
                let rows = parse_id(toks[0].1, lineno, toks[0].0)?;
                let cols = parse_id(toks[1].1, lineno, toks[1].0)?;
                let nnz = parse_id(toks[2].1, lineno, toks[2].0)?;
                if rows != cols {
                    return Err(Error::Parse {
                        line: lineno,
                        column: toks[1].0,
                        message: format!("matrix must be square, got {rows}x{cols}"),
                    });
                }
                size = Some((rows as usize, nnz as usize));
                entries.reserve((nnz as usize).min(1 << 20));
            }
            Some((n, _)) => {
                if toks.len() != 2 {
                    let column = toks.get(2).map_or(1, |t| t.0);
                    return Err(Error::Parse {
                        line: lineno,
                        column,
                        message: "pattern entries must be `row col`".into(),
                    });
                }
                let i = parse_id(toks[0].1, lineno, toks[0].0)?;
                let j = parse_id(toks[1].1, lineno, toks[1].0)?;
                for (value, col) in [(i, toks[0].0), (j, toks[1].0)] {
                    if value == 0 || value > n as u64 {
                        return Err(Error::Parse {
                            line: lineno,
                            column: col,
                            message: format!("index {value} outside 1..={n}"),
                        });
                    }
                }
                if i == j {
                    return Err(Error::SelfLoop {
                        vertex: i - 1,
                        line: Some(lineno),
                    });
                }
                entries.push((i - 1, j - 1));
            }
        }
    }
    let (n, nnz) = size.ok_or(Error::Parse {
        line: last_line,
        column: 1,
        message: "missing size line".into(),
    })?;
    if entries.len() != nnz {
        return Err(Error::Parse {
            line: last_line,
            column: 1,
            message: format!("declared {nnz} entries, found {}", entries.len()),
        });
    }
    if !symmetric {
        let set: BTreeSet<(u64, u64)> = entries.iter().copied().collect();
        if let Some(&(r, c)) = entries.iter().find(|&&(r, c)| !set.contains(&(c, r))) {
            return Err(Error::Asymmetric { row: r + 1, col: c + 1 });
        }
    }
    Graph::from_edges(n, entries.iter().map(|&(i, j)| (i as usize, j as usize)))
}

/// Writes `g` as an edge list that [`load_graph`] reads back identically.
/// Isolated vertices are written as single-id lines.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "# vertices {} edges {}", g.vertex_count(), g.edge_count())?;
    for v in 0..g.vertex_count() {
        if g.degree(v) == 0 {
            writeln!(out, "{v}")?;
        }
    }
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

/// Writes `g` as a symmetric pattern Matrix Market file.
pub fn write_matrix_market<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "%%MatrixMarket matrix coordinate pattern symmetric")?;
    writeln!(out, "{} {} {}", g.vertex_count(), g.vertex_count(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "{} {}", v + 1, u + 1)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn edge_list(text: &str) -> Result<LoadedGraph> {
        load_graph(text.as_bytes(), Format::EdgeList)
    }

    #[test]
    fn path_from_edge_list() {
        let lg = edge_list("0 1\n1 2").unwrap();
        assert_eq!(lg.graph, generators::path(3));
        assert!(lg.mapping.is_none());
    }

    #[test]
    fn comments_and_whitespace() {
        let lg = edge_list("# header\n  0\t1   # trailing\n\n1 2\n").unwrap();
        assert_eq!(lg.graph.edge_count(), 2);
    }

    #[test]
    fn self_loop_reports_line() {
        match edge_list("0 1\n3 3\n") {
            Err(Error::SelfLoop { vertex: 3, line: Some(2) }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_error_position() {
        match edge_list("0 1\n1 x\n") {
            Err(Error::Parse { line: 2, column: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match edge_list("0 1 2\n") {
            Err(Error::Parse { line: 1, column: 5, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sparse_ids_are_remapped() {
        let lg = edge_list("10 20\n20 5\n").unwrap();
        assert_eq!(lg.mapping, Some(vec![5, 10, 20]));
        assert!(lg.graph.has_edge(1, 2));
        assert!(lg.graph.has_edge(0, 2));
        assert_eq!(lg.graph.edge_count(), 2);
    }

    #[test]
    fn isolated_vertex_lines() {
        let lg = edge_list("0 1\n2\n").unwrap();
        assert_eq!(lg.graph.vertex_count(), 3);
        assert_eq!(lg.graph.degree(2), 0);
        assert_eq!(edge_list("").unwrap().graph.vertex_count(), 0);
    }

    #[test]
    fn matrix_market_symmetric() {
        let text = "%%MatrixMarket matrix coordinate pattern symmetric\n% c\n3 3 2\n2 1\n3 2\n";
        let g = load_graph(text.as_bytes(), Format::MatrixMarket).unwrap().graph;
        assert_eq!(g, generators::path(3));
    }

    #[test]
    fn matrix_market_general_must_mirror() {
        let ok = "%%MatrixMarket matrix coordinate pattern general\n2 2 2\n1 2\n2 1\n";
        assert_eq!(load_graph(ok.as_bytes(), Format::MatrixMarket).unwrap().graph.edge_count(), 1);
        let bad = "%%MatrixMarket matrix coordinate pattern general\n3 3 2\n1 2\n3 1\n";
        assert!(matches!(
            load_graph(bad.as_bytes(), Format::MatrixMarket),
            Err(Error::Asymmetric { row: 1, col: 2 })
        ));
    }

    #[test]
    fn matrix_market_rejects() {
        let real = "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n2 1 1.0\n";
        assert!(matches!(load_graph(real.as_bytes(), Format::MatrixMarket), Err(Error::Parse { .. })));
        let looped = "%%MatrixMarket matrix coordinate pattern symmetric\n2 2 1\n2 2\n";
        assert!(matches!(
            load_graph(looped.as_bytes(), Format::MatrixMarket),
            Err(Error::SelfLoop { line: Some(3), .. })
        ));
        let count = "%%MatrixMarket matrix coordinate pattern symmetric\n2 2 2\n2 1\n";
        assert!(matches!(load_graph(count.as_bytes(), Format::MatrixMarket), Err(Error::Parse { .. })));
    }

    #[test]
    fn round_trips() {
        let g = generators::disjoint_union(&generators::petersen(), &Graph::empty(2));
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        assert_eq!(load_graph(&buf[..], Format::EdgeList).unwrap().graph, g);

        let mut buf = Vec::new();
        write_matrix_market(&g, &mut buf).unwrap();
        assert_eq!(load_graph(&buf[..], Format::MatrixMarket).unwrap().graph, g);
    }
}
