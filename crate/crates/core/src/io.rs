//! Edge-list and label-file formats.
//!
//! Edge list: one `u v [w]` per line, whitespace separated, `w` defaulting to
//! 1.0. Label file: one `vertex_name cluster_index` per line. Both accept `#`
//! comments and blank lines. Vertex names are arbitrary tokens; vertices are
//! numbered densely in order of first appearance.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

pub fn load_edge_list(path: &Path, directed: bool) -> Result<Graph> {
    parse_edge_list(&read(path)?, directed)
}

pub fn parse_edge_list(text: &str, directed: bool) -> Result<Graph> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut id = |name: &str| -> usize {
        *index.entry(name.to_string()).or_insert_with(|| {
            names.push(name.to_string());
            names.len() - 1
        })
    };
    let mut seen: HashMap<(usize, usize), (usize, usize, f64, usize)> = HashMap::new();
    for (line, fields) in content_lines(text) {
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::Parse {
                line,
                msg: format!("expected `u v [w]`, found {} fields", fields.len()),
            });
        }
        let w = match fields.get(2) {
            Some(s) => s.parse::<f64>().map_err(|_| Error::Parse {
                line,
                msg: format!("weight `{s}` is not a number"),
            })?,
            None => 1.0,
        };
        if !w.is_finite() || w < 0.0 {
            return Err(Error::Parse { line, msg: format!("negative or non-finite weight {w}") });
        }
        if fields[0] == fields[1] {
            return Err(Error::Parse { line, msg: format!("self-loop at `{}`", fields[0]) });
        }
        let (u, v) = (id(fields[0]), id(fields[1]));
        if let Some(&(pu, pv, pw, pline)) = seen.get(&(u.min(v), u.max(v))) {
            if directed && (pu, pv) != (u, v) {
                return Err(Error::Parse {
                    line,
                    msg: format!("anti-parallel pair with line {pline}"),
                });
            }
            if pw != w {
                return Err(Error::Parse {
                    line,
                    msg: format!("edge repeats line {pline} with a different weight"),
                });
            }
        } else {
            seen.insert((u.min(v), u.max(v)), (u, v, w, line));
        }
        edges.push((u, v, w));
    }
    Graph::new(names.len(), directed, edges)?.with_labels(names)
}

pub fn load_labels(path: &Path, g: &Graph) -> Result<Partition> {
    parse_labels(&read(path)?, g)
}

/// Reads a ground-truth partition keyed by vertex name.
///
/// Cluster indices are kept as given (their order matters for digraph
/// objectives); they must cover `0..k` with every vertex assigned.
pub fn parse_labels(text: &str, g: &Graph) -> Result<Partition> {
    let index: HashMap<String, usize> = (0..g.n_vertices()).map(|u| (g.label(u), u)).collect();
    let mut assignment: Vec<Option<usize>> = vec![None; g.n_vertices()];
    for (line, fields) in content_lines(text) {
        if fields.len() != 2 {
            return Err(Error::Parse { line, msg: "expected `vertex_name cluster_index`".into() });
        }
        let &u = index.get(fields[0]).ok_or_else(|| Error::Parse {
            line,
            msg: format!("vertex `{}` does not appear in the graph", fields[0]),
        })?;
        let c = fields[1].parse::<usize>().map_err(|_| Error::Parse {
            line,
            msg: format!("cluster index `{}` is not a nonnegative integer", fields[1]),
        })?;
        if assignment[u].replace(c).is_some_and(|prev| prev != c) {
            return Err(Error::Parse { line, msg: format!("vertex `{}` labelled twice", fields[0]) });
        }
    }
    let assignment = assignment
        .into_iter()
        .enumerate()
        .map(|(u, c)| {
            c.ok_or_else(|| Error::InvalidPartition(format!("vertex `{}` has no label", g.label(u))))
        })
        .collect::<Result<Vec<_>>>()?;
    Partition::from_assignment(assignment)
}

pub fn format_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", g.label(e.u), g.label(e.v), e.w);
    }
    out
}

pub fn format_labels(g: &Graph, p: &Partition) -> String {
    let mut out = String::new();
    for (u, &c) in p.assignment().iter().enumerate() {
        let _ = writeln!(out, "{} {}", g.label(u), c);
    }
    out
}

pub fn write_edge_list(path: &Path, g: &Graph) -> Result<()> {
    fs::write(path, format_edge_list(g)).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub fn write_labels(path: &Path, g: &Graph, p: &Partition) -> Result<()> {
    fs::write(path, format_labels(g, p)).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_weight() {
        let g = parse_edge_list("0 1\n1 2\n", false).unwrap();
        assert_eq!(g.n_vertices(), 3);
        assert_eq!(g.n_edges(), 2);
        assert!(g.edges().iter().all(|e| e.w == 1.0));
    }

    #[test]
    fn named_vertices() {
        let g = parse_edge_list("# food web\na b 2.5  # trailing\n", false).unwrap();
        assert_eq!(g.n_vertices(), 2);
        assert_eq!(g.edges()[0].w, 2.5);
        assert_eq!(g.labels().unwrap(), &["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_edge_list("0 1\n1 0\n", true).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(err.to_string().contains("anti-parallel"));
        let err = parse_edge_list("0 1\n\n1 2 x\n", false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_edge_list("0 1 -2\n", false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_edge_list("0\n", false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_edge_list("3 3\n", false).unwrap_err();
        assert!(err.to_string().contains("self-loop"));
    }

    #[test]
    fn labels_by_name() {
        let g = parse_edge_list("x y\ny z\n", false).unwrap();
        let p = parse_labels("z 1\nx 0\ny 0\n", &g).unwrap();
        assert_eq!(p.assignment(), &[0, 0, 1]);
        assert!(parse_labels("x 0\ny 0\n", &g).is_err());
        assert!(parse_labels("x 0\ny 0\nw 1\n", &g).is_err());
        assert!(parse_labels("x 0\ny 0\nz 2\n", &g).is_err());
    }

    #[test]
    fn missing_file_names_path() {
        let err = load_edge_list(Path::new("/nonexistent/graph.txt"), false).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/graph.txt"));
    }
}
