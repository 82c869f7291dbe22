//! Plain-text instance files.
//!
//! ```text
//! # comment
//! n m k r
//! s_1 ... s_k
//! l_0 ... l_{n-1}      (labels 1..k)
//! u v w                (m lines)
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Instance, Labeling, WeightedGraph};

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    parse_instance(&fs::read_to_string(path)?)
}

pub fn save_instance(instance: &Instance, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_instance(instance))?;
    Ok(())
}

pub fn format_instance(instance: &Instance) -> String {
    let g = instance.graph();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {} {} {}",
        g.node_count(),
        g.edge_count(),
        instance.k(),
        instance.r()
    );
    let join = |it: &mut dyn Iterator<Item = usize>| {
        it.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    let _ = writeln!(out, "{}", join(&mut instance.terminals().iter().copied()));
    let _ = writeln!(
        out,
        "{}",
        join(&mut instance.initial().as_slice().iter().map(|&l| l + 1))
    );
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", e.u, e.v, e.weight);
    }
    out
}

fn fields<T: FromStr>(line: usize, text: &str, want: usize, what: &str) -> Result<Vec<T>> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    if parts.len() != want {
        return Err(Error::Parse {
            line,
            msg: format!("expected {want} {what}, found {}", parts.len()),
        });
    }
    parts
        .iter()
        .map(|p| {
            p.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("cannot parse {p:?} in {what}"),
            })
        })
        .collect()
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let mut next = |what: &str| {
        lines.next().ok_or_else(|| Error::Parse {
            line: text.lines().count() + 1,
            msg: format!("unexpected end of file, expected {what}"),
        })
    };

    let (ln, header) = next("header")?;
    let h: Vec<usize> = fields(ln, header, 4, "header fields `n m k r`")?;
    let (n, m, k, r) = (h[0], h[1], h[2], h[3]);
    if k < 2 {
        return Err(Error::Parse {
            line: ln,
            msg: format!("k = {k}, need at least 2"),
        });
    }

    let (ln, text_t) = next("terminal line")?;
    let terminals: Vec<usize> = fields(ln, text_t, k, "terminal ids")?;
    if let Some(&s) = terminals.iter().find(|&&s| s >= n) {
        return Err(Error::Parse {
            line: ln,
            msg: format!("terminal {s} out of range for n = {n}"),
        });
    }
    let terminal_line = ln;

    let (ln, text_l) = next("label line")?;
    let labels: Vec<usize> = fields(ln, text_l, n, "labels")?;
    if let Some((v, &l)) = labels.iter().enumerate().find(|(_, &l)| l < 1 || l > k) {
        return Err(Error::Parse {
            line: ln,
            msg: format!("label {l} of node {v} outside 1..{k}"),
        });
    }
    for (i, &s) in terminals.iter().enumerate() {
        if labels[s] != i + 1 {
            return Err(Error::Parse {
                line: terminal_line,
                msg: format!(
                    "terminal {s} of partition {} has label {}",
                    i + 1,
                    labels[s]
                ),
            });
        }
    }

    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, text_e) = next("edge line")?;
        let parts: Vec<&str> = text_e.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(Error::Parse {
                line: ln,
                msg: format!("expected `u v w`, found {} fields", parts.len()),
            });
        }
        let bad = |p: &str| Error::Parse {
            line: ln,
            msg: format!("cannot parse {p:?}"),
        };
        let u: usize = parts[0].parse().map_err(|_| bad(parts[0]))?;
        let v: usize = parts[1].parse().map_err(|_| bad(parts[1]))?;
        let w: f64 = parts[2].parse().map_err(|_| bad(parts[2]))?;
        let msg = if u >= n || v >= n {
            Some(format!("edge ({u}, {v}) out of range for n = {n}"))
        } else if u == v {
            Some(format!("self-loop at node {u}"))
        } else if !w.is_finite() || w < 0.0 {
            Some(format!("weight {w} must be finite and non-negative"))
        } else {
            None
        };
        if let Some(msg) = msg {
            return Err(Error::Parse { line: ln, msg });
        }
        edges.push((u, v, w));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::Parse {
            line: ln,
            msg: format!("trailing content after {m} edges"),
        });
    }

    let graph = WeightedGraph::new(n, edges)?;
    let initial = Labeling::new(labels.into_iter().map(|l| l - 1).collect(), k)?;
    Instance::new(graph, initial, terminals, r)
}

/// Reads an unweighted simple graph from `u v` lines (`#` comments allowed).
/// The node count is one more than the largest id; self-loops and repeated
/// edges are dropped.
pub fn load_plain_edgelist(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    parse_plain_edgelist(&fs::read_to_string(path)?)
}

pub fn parse_plain_edgelist(text: &str) -> Result<WeightedGraph> {
    let mut pairs = std::collections::BTreeSet::new();
    let mut n = 0;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let uv: Vec<usize> = fields(idx + 1, line, 2, "node ids")?;
        n = n.max(uv[0] + 1).max(uv[1] + 1);
        if uv[0] != uv[1] {
            pairs.insert((uv[0].min(uv[1]), uv[0].max(uv[1])));
        }
    }
    WeightedGraph::new(n, pairs.into_iter().map(|(u, v)| (u, v, 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::t1;

    fn parse_err_line(text: &str) -> usize {
        match parse_instance(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn plain_edgelist() {
        let g = parse_plain_edgelist("# triangle\n0 1\n1 2\n2 0\n1 0\n2 2\n").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.total_weight(), 3.0);
        assert!(parse_plain_edgelist("0 1 2\n").is_err());
    }

    #[test]
    fn round_trip_t1() {
        let inst = t1(1);
        let back = parse_instance(&format_instance(&inst)).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn round_trip_through_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t1.inst");
        let inst = t1(3);
        save_instance(&inst, &path).unwrap();
        assert_eq!(load_instance(&path).unwrap(), inst);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\n\n3 2 2 1\n0 2\n# labels\n1 1 2\n0 1 1.5\n1 2 0.25\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.graph().edge_count(), 2);
        assert_eq!(inst.initial().as_slice(), &[0, 0, 1]);
        assert_eq!(inst.initial_cut(), 0.25);
    }

    #[test]
    fn parallel_edges_merge() {
        let inst = parse_instance("2 2 2 0\n0 1\n1 2\n0 1 1\n1 0 2\n").unwrap();
        assert_eq!(inst.graph().weight(0, 1), 3.0);
    }

    #[test]
    fn terminal_label_mismatch() {
        assert_eq!(parse_err_line("3 0 2 1\n0 2\n1 1 1\n"), 2);
    }

    #[test]
    fn negative_weight() {
        assert_eq!(parse_err_line("3 1 2 1\n0 2\n1 1 2\n# e\n0 1 -1\n"), 5);
    }

    #[test]
    fn malformed_inputs() {
        assert_eq!(parse_err_line("3 1 2\n"), 1);
        assert_eq!(parse_err_line("3 0 2 1\n0 2\n1 3 2\n"), 3);
        assert_eq!(parse_err_line("3 0 2 1\n0 5\n1 1 2\n"), 2);
        assert_eq!(parse_err_line("3 1 2 1\n0 2\n1 1 2\n0 0 1\n"), 4);
        assert_eq!(parse_err_line("3 1 2 1\n0 2\n1 1 2\n0 1 x\n"), 4);
        assert_eq!(parse_err_line("3 2 2 1\n0 2\n1 1 2\n0 1 1\n"), 5);
        assert_eq!(parse_err_line("3 0 2 1\n0 2\n1 1 2\n0 1 1\n"), 4);
    }
}
