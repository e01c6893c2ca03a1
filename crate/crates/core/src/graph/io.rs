//! Plain-text graph files.
//!
//! ```text
//! n 3
//! w 0 1
//! w 1 2.5
//! w 2 1
//! e 0 1
//! e 1 2
//! ```
//!
//! Indices are 0-based, edges are written with `i < j` in lexicographic
//! order. Lines starting with `#` are comments. The reader accepts edges in
//! any order and either orientation.

use std::io::{BufRead, Write};

use super::{Graph, GraphError};

pub fn write_graph<W: Write>(g: &Graph, out: W) -> std::io::Result<()> {
    write_graph_with_header(g, &[], out)
}

/// Writes `header` lines as `# ` comments before the canonical body.
pub fn write_graph_with_header<W: Write>(g: &Graph, header: &[String], out: W) -> std::io::Result<()> {
    let mut out = std::io::BufWriter::new(out);
    for line in header {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "n {}", g.n())?;
    for (i, w) in g.weights().iter().enumerate() {
        writeln!(out, "w {i} {w}")?;
    }
    for (a, b) in g.edges() {
        writeln!(out, "e {a} {b}")?;
    }
    out.flush()
}

struct Tokens<'a> {
    line_no: usize,
    line: &'a str,
}

impl<'a> Tokens<'a> {
    fn err(&self, column: usize, message: impl Into<String>) -> GraphError {
        GraphError::Parse { line: self.line_no, column, message: message.into() }
    }

    /// Whitespace-separated fields with their 1-based columns.
    fn fields(&self) -> Vec<(usize, &'a str)> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, c) in self.line.char_indices() {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    out.push((s + 1, &self.line[s..i]));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push((s + 1, &self.line[s..]));
        }
        out
    }

    fn index(&self, field: (usize, &str), n: usize) -> Result<u32, GraphError> {
        let v: u64 = field.1.parse().map_err(|_| self.err(field.0, format!("`{}` is not an index", field.1)))?;
        if v as usize >= n {
            return Err(self.err(field.0, format!("index {v} out of range for n = {n}")));
        }
        Ok(v as u32)
    }
}

pub fn read_graph<R: BufRead>(input: R) -> Result<Graph, GraphError> {
    let mut n: Option<usize> = None;
    let mut weights: Vec<Option<f64>> = Vec::new();
    let mut edges = Vec::new();
    let mut last_line = 0;
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let t = Tokens { line_no: idx + 1, line: &line };
        last_line = idx + 1;
        let fields = t.fields();
        if fields.is_empty() || fields[0].1.starts_with('#') {
            continue;
        }
        let (col, tag) = fields[0];
        let Some(count) = n else {
            if tag != "n" || fields.len() != 2 {
                return Err(t.err(col, "expected header `n <count>`"));
            }
            let c: usize = fields[1].1.parse().map_err(|_| t.err(fields[1].0, "bad vertex count"))?;
            n = Some(c);
            weights = vec![None; c];
            continue;
        };
        match tag {
            "w" if fields.len() == 3 => {
                let v = t.index(fields[1], count)?;
                let w: f64 = fields[2].1.parse().map_err(|_| t.err(fields[2].0, "bad weight"))?;
                if !(w.is_finite() && w > 0.0) {
                    return Err(t.err(fields[2].0, format!("weight {w} must be positive")));
                }
                if weights[v as usize].replace(w).is_some() {
                    return Err(t.err(fields[1].0, format!("weight of vertex {v} given twice")));
                }
            }
            "e" if fields.len() == 3 => {
                let a = t.index(fields[1], count)?;
                let b = t.index(fields[2], count)?;
                if a == b {
                    return Err(t.err(fields[1].0, format!("self-loop at {a}")));
                }
                edges.push((a.min(b), a.max(b), t.line_no));
            }
            _ => return Err(t.err(col, format!("unrecognised record `{}`", line.trim()))),
        }
    }
    let Some(count) = n else {
        return Err(GraphError::Parse { line: last_line, column: 1, message: "missing header `n <count>`".into() });
    };
    let weights = weights
        .into_iter()
        .enumerate()
        .map(|(i, w)| {
            w.ok_or_else(|| GraphError::Parse {
                line: last_line,
                column: 1,
                message: format!("no weight line for vertex {i} (of {count})"),
            })
        })
        .collect::<Result<Vec<f64>, _>>()?;
    let mut sorted = edges.clone();
    sorted.sort_unstable();
    if let Some(pair) = sorted.windows(2).find(|p| p[0].0 == p[1].0 && p[0].1 == p[1].1) {
        return Err(GraphError::Parse {
            line: pair[1].2.max(pair[0].2),
            column: 1,
            message: format!("duplicate edge ({}, {})", pair[0].0, pair[0].1),
        });
    }
    let plain: Vec<(u32, u32)> = edges.iter().map(|&(a, b, _)| (a, b)).collect();
    Graph::from_edges(weights, &plain)
}

impl std::str::FromStr for Graph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        read_graph(s.as_bytes())
    }
}

impl std::fmt::Display for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut buf = Vec::new();
        write_graph(self, &mut buf).map_err(|_| std::fmt::Error)?;
        f.write_str(std::str::from_utf8(&buf).map_err(|_| std::fmt::Error)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_written_file() {
        let g: Graph = "# comment\nn 3\nw 0 1\nw 2 2.5\nw 1 1\ne 2 1\n\ne 0 1\n".parse().unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(g.weight(2), 2.5);
        assert_eq!(g.to_string(), "n 3\nw 0 1\nw 1 1\nw 2 2.5\ne 0 1\ne 1 2\n");
    }

    #[test]
    fn structured_errors() {
        let err = "n 3\nw 0 1\nw 1 1\nw 2 1\ne 0 3\n".parse::<Graph>().unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 5, column: 5, .. }), "{err}");
        let err = "n 2\nw 0 1\n".parse::<Graph>().unwrap_err();
        assert!(matches!(err, GraphError::Parse { .. }));
        let err = "w 0 1\n".parse::<Graph>().unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, column: 1, .. }));
        let err = "n 2\nw 0 1\nw 1 1\ne 0 1\ne 1 0\n".parse::<Graph>().unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 5, .. }), "{err}");
        let err = "n 2\nw 0 1\nw 1 x\n".parse::<Graph>().unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, column: 5, .. }), "{err}");
        let err = "n 2\nw 0 1\nw 1 1\nq 1 1\n".parse::<Graph>().unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 4, .. }));
    }
}
