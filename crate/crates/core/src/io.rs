//! Graph ingestion and serialization: DIMACS `.col` and plain edge lists.

use std::io::{BufRead, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    /// `c` comments, one `p edge n m` header, `e u v` edges.
    Dimacs,
    /// One `u v` pair per line, `#` comments; n is the largest label seen.
    Edgelist,
}

impl GraphFormat {
    /// `.col` and `.dimacs` are DIMACS; anything else is an edge list.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("col") | Some("dimacs") => GraphFormat::Dimacs,
            _ => GraphFormat::Edgelist,
        }
    }
}

impl FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "dimacs" | "col" => Ok(GraphFormat::Dimacs),
            "edgelist" | "el" => Ok(GraphFormat::Edgelist),
            other => Err(format!("unknown graph format `{other}`")),
        }
    }
}

pub fn load_graph<R: BufRead>(source: R, format: GraphFormat) -> Result<Graph> {
    match format {
        GraphFormat::Dimacs => read_dimacs(source),
        GraphFormat::Edgelist => read_edgelist(source),
    }
}

pub fn load_graph_file(path: &Path, format: Option<GraphFormat>) -> Result<Graph> {
    let file = std::fs::File::open(path)?;
    let format = format.unwrap_or_else(|| GraphFormat::from_path(path));
    load_graph(std::io::BufReader::new(file), format)
}

fn parse_label(token: &str, line: usize) -> Result<usize> {
    token.parse::<usize>().map_err(|_| Error::Parse {
        line,
        message: format!("expected a vertex label, found `{token}`"),
    })
}

fn read_dimacs<R: BufRead>(source: R) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            None | Some("c") => continue,
            Some("p") => {
                if n.is_some() {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "duplicate problem line".into(),
                    });
                }
                let fields: Vec<&str> = tokens.collect();
                if fields.len() != 3 || !matches!(fields[0], "edge" | "col") {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "expected `p edge <n> <m>`".into(),
                    });
                }
                n = Some(parse_label(fields[1], line_no)?);
                // The declared edge count is advisory; many published instances get it wrong.
                parse_label(fields[2], line_no)?;
            }
            Some("e") => {
                let n = n.ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: "edge before problem line".into(),
                })?;
                let fields: Vec<&str> = tokens.collect();
                if fields.len() != 2 {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "expected `e <u> <v>`".into(),
                    });
                }
                let u = parse_label(fields[0], line_no)?;
                let v = parse_label(fields[1], line_no)?;
                edges.push(check_edge(u, v, n, line_no)?);
            }
            Some(other) => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unknown line type `{other}`"),
                })
            }
        }
    }
    let n = n.ok_or_else(|| Error::Parse {
        line: 0,
        message: "missing problem line".into(),
    })?;
    Ok(Graph::from_normalized(n, edges))
}

fn read_edgelist<R: BufRead>(source: R) -> Result<Graph> {
    let mut n = 0usize;
    let mut edges = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let content = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = content.split_whitespace().collect();
        match fields.len() {
            0 => continue,
            2 => {
                let u = parse_label(fields[0], line_no)?;
                let v = parse_label(fields[1], line_no)?;
                let edge = check_edge(u, v, usize::MAX, line_no)?;
                n = n.max(u).max(v);
                edges.push(edge);
            }
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: "expected `<u> <v>`".into(),
                })
            }
        }
    }
    Ok(Graph::from_normalized(n, edges))
}

fn check_edge(u: usize, v: usize, n: usize, line: usize) -> Result<(u32, u32)> {
    for vertex in [u, v] {
        if vertex == 0 || vertex > n || vertex > u32::MAX as usize {
            return Err(Error::VertexOutOfRange { line, vertex, n });
        }
    }
    if u == v {
        return Err(Error::SelfLoop { line, vertex: u });
    }
    let (a, b) = ((u - 1) as u32, (v - 1) as u32);
    Ok((a.min(b), a.max(b)))
}

pub fn write_dimacs<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "p edge {} {}", g.n(), g.num_edges())?;
    for &(u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1)?;
    }
    Ok(())
}

/// Writes an edge list. Trailing isolated vertices are not representable.
pub fn write_edgelist<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    for &(u, v) in g.edges() {
        writeln!(out, "{} {}", u + 1, v + 1)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, format: GraphFormat) -> Result<Graph> {
        load_graph(text.as_bytes(), format)
    }

    #[test]
    fn dimacs_path() {
        let g = parse("c a path\np edge 3 2\ne 1 2\ne 2 3\n", GraphFormat::Dimacs).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.max_degree(), 2);
    }

    #[test]
    fn edgelist_triangle() {
        let g = parse("# triangle\n1 2\n  2   3 \n3 1 # closing edge\n", GraphFormat::Edgelist).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.num_edges(), 3);
        assert_eq!(g.max_degree(), 2);
    }

    #[test]
    fn dimacs_isolated_vertices_survive() {
        let g = parse("p edge 5 1\ne 1 2\n", GraphFormat::Dimacs).unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.degree(4), 0);
    }

    #[test]
    fn self_loop_rejected() {
        let err = parse("p edge 2 1\ne 1 1\n", GraphFormat::Dimacs).unwrap_err();
        assert!(matches!(err, Error::SelfLoop { line: 2, vertex: 1 }), "{err}");
        let err = parse("2 2\n", GraphFormat::Edgelist).unwrap_err();
        assert!(matches!(err, Error::SelfLoop { line: 1, .. }));
    }

    #[test]
    fn out_of_range_rejected() {
        let err = parse("p edge 3 1\ne 1 4\n", GraphFormat::Dimacs).unwrap_err();
        assert!(matches!(
            err,
            Error::VertexOutOfRange {
                line: 2,
                vertex: 4,
                n: 3
            }
        ));
        let err = parse("0 1\n", GraphFormat::Edgelist).unwrap_err();
        assert!(matches!(err, Error::VertexOutOfRange { vertex: 0, .. }));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse("p edge 3 1\n\ne 1 x\n", GraphFormat::Dimacs).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse("e 1 2\n", GraphFormat::Dimacs).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse("1 2 3\n", GraphFormat::Edgelist).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(GraphFormat::from_path(Path::new("k3.col")), GraphFormat::Dimacs);
        assert_eq!(GraphFormat::from_path(Path::new("c5.el")), GraphFormat::Edgelist);
    }
}
