//! TSPLIB-style files: HCP edge lists, explicit binary TSP matrices and tours.
//!
//! Writers are byte-deterministic (fixed key order, `\n` line endings, ASCII).
//! Readers accept `KEY: value` and `KEY : value`, repeated COMMENT lines and
//! unknown keys, and report the offending line on any error.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Tour, Vertex};

/// An HCP instance as stored on disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HcpFile {
    pub name: String,
    pub comment: Option<String>,
    pub graph: Graph,
}

pub fn hcp_to_string(g: &Graph, comment: Option<&str>) -> String {
    let mut s = String::with_capacity(32 + 12 * g.m());
    let _ = writeln!(s, "NAME : {}", g.name());
    s.push_str("TYPE : HCP\n");
    let _ = writeln!(s, "COMMENT : {}", comment.unwrap_or("Hamiltonian cycle problem"));
    let _ = writeln!(s, "DIMENSION : {}", g.n());
    s.push_str("EDGE_DATA_FORMAT : EDGE_LIST\n");
    s.push_str("EDGE_DATA_SECTION\n");
    for &(u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s.push_str("-1\nEOF\n");
    s
}

pub fn write_hcp(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, hcp_to_string(g, None))?;
    Ok(())
}

pub fn write_hcp_with_comment(g: &Graph, comment: &str, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, hcp_to_string(g, Some(comment)))?;
    Ok(())
}

pub fn read_hcp(path: impl AsRef<Path>) -> Result<Graph> {
    read_hcp_file(path).map(|f| f.graph)
}

pub fn read_hcp_file(path: impl AsRef<Path>) -> Result<HcpFile> {
    let path = path.as_ref();
    parse_hcp(&fs::read_to_string(path)?, path)
}

/// Splits `KEY : value` (or a bare `KEY`) into trimmed parts.
fn header(line: &str) -> (&str, &str) {
    match line.split_once(':') {
        Some((k, v)) => (k.trim(), v.trim()),
        None => (line.trim(), ""),
    }
}

fn parse_dimension(path: &Path, line: usize, value: &str) -> Result<usize> {
    match value.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(Error::parse(path, line, format!("bad DIMENSION {value:?}"))),
    }
}

fn parse_vertex(path: &Path, line: usize, tok: &str, n: usize) -> Result<Vertex> {
    let v: i64 = tok.parse().map_err(|_| Error::parse(path, line, format!("not an integer: {tok:?}")))?;
    if v < 1 || v as u64 > n as u64 {
        return Err(Error::parse(path, line, format!("vertex {v} outside 1..={n}")));
    }
    Ok(v as Vertex)
}

pub fn parse_hcp(text: &str, path: &Path) -> Result<HcpFile> {
    let mut name = None;
    let mut comments: Vec<String> = Vec::new();
    let mut n = None;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut section_line = 0;
    for (no, line) in lines.by_ref() {
        if line.trim().is_empty() {
            continue;
        }
        let (key, value) = header(line);
        match key {
            "NAME" => name = Some(value.to_string()),
            "COMMENT" => comments.push(value.to_string()),
            "TYPE" if value != "HCP" => return Err(Error::parse(path, no, format!("TYPE is {value:?}, expected HCP"))),
            "DIMENSION" => n = Some(parse_dimension(path, no, value)?),
            "EDGE_DATA_FORMAT" if value != "EDGE_LIST" => {
                return Err(Error::parse(path, no, format!("unsupported EDGE_DATA_FORMAT {value:?}")));
            }
            "EDGE_DATA_SECTION" => {
                section_line = no;
                break;
            }
            "EOF" => return Err(Error::parse(path, no, "EOF before EDGE_DATA_SECTION")),
            _ => {}
        }
    }
    if section_line == 0 {
        return Err(Error::parse(path, text.lines().count(), "missing EDGE_DATA_SECTION"));
    }
    let n = n.ok_or_else(|| Error::parse(path, section_line, "DIMENSION must precede EDGE_DATA_SECTION"))?;

    let mut edges: Vec<Edge> = Vec::new();
    let mut pending: Option<Vertex> = None;
    let mut terminated = false;
    let mut last = section_line;
    'section: for (no, line) in lines.by_ref() {
        last = no;
        for tok in line.split_whitespace() {
            if tok == "-1" {
                if pending.is_some() {
                    return Err(Error::parse(path, no, "edge with a single endpoint"));
                }
                terminated = true;
                break 'section;
            }
            if tok == "EOF" {
                break 'section;
            }
            let v = parse_vertex(path, no, tok, n)?;
            match pending.take() {
                None => pending = Some(v),
                Some(u) if u == v => return Err(Error::parse(path, no, format!("self-loop at {u}"))),
                Some(u) => edges.push((u, v)),
            }
        }
    }
    if !terminated {
        return Err(Error::parse(path, last.max(1), "edge section not terminated by -1"));
    }
    for (no, line) in lines {
        match line.trim() {
            "" | "EOF" => {}
            other => return Err(Error::parse(path, no, format!("unexpected content after terminator: {other:?}"))),
        }
    }
    let name = name.unwrap_or_else(|| path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned()));
    let graph = Graph::new(name.clone(), n, edges).map_err(|e| Error::parse(path, section_line, e.to_string()))?;
    let comment = if comments.is_empty() { None } else { Some(comments.join("\n")) };
    Ok(HcpFile { name, comment, graph })
}

/// The binary TSP form of a graph: 0 on edges, 1 on non-edges, 0 diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryTspMatrix {
    name: String,
    n: usize,
    entries: Vec<u8>,
}

impl BinaryTspMatrix {
    pub fn from_entries(name: impl Into<String>, n: usize, entries: Vec<u8>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidParameters(format!("{} entries for dimension {n}", entries.len())));
        }
        for i in 0..n {
            if entries[i * n + i] != 0 {
                return Err(Error::InvalidParameters(format!("nonzero diagonal at {}", i + 1)));
            }
            for j in 0..n {
                let e = entries[i * n + j];
                if e > 1 || e != entries[j * n + i] {
                    return Err(Error::InvalidParameters(format!("entry ({}, {}) breaks 0/1 symmetry", i + 1, j + 1)));
                }
            }
        }
        Ok(BinaryTspMatrix { name: name.into(), n, entries })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Distance between 1-based cities `i` and `j`.
    pub fn entry(&self, i: Vertex, j: Vertex) -> u8 {
        self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn to_graph(&self) -> Graph {
        let n = self.n;
        let edges = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).filter(|&(i, j)| self.entry(i, j) == 0);
        Graph::new(self.name.clone(), n, edges).expect("matrix edges are valid")
    }
}

pub fn graph_to_tsp(g: &Graph) -> BinaryTspMatrix {
    let n = g.n();
    let mut entries = vec![1u8; n * n];
    for i in 0..n {
        entries[i * n + i] = 0;
    }
    for &(u, v) in g.edges() {
        entries[(u - 1) * n + (v - 1)] = 0;
        entries[(v - 1) * n + (u - 1)] = 0;
    }
    BinaryTspMatrix { name: g.name().to_string(), n, entries }
}

/// Sum of the `n` wrapping distances along `t`.
pub fn tour_length(m: &BinaryTspMatrix, t: &Tour) -> Result<u64> {
    if t.len() != m.n {
        return Err(Error::InvalidCertificate { expected: m.n, got: t.len() });
    }
    Ok(t.edges().map(|(u, v)| u64::from(m.entry(u, v))).sum())
}

pub fn tsp_to_string(m: &BinaryTspMatrix) -> String {
    let mut s = String::with_capacity(128 + 2 * m.n * m.n);
    let _ = writeln!(s, "NAME : {}", m.name);
    s.push_str("TYPE : TSP\n");
    s.push_str("COMMENT : binary TSP, 0 on edges and 1 elsewhere\n");
    let _ = writeln!(s, "DIMENSION : {}", m.n);
    s.push_str("EDGE_WEIGHT_TYPE : EXPLICIT\n");
    s.push_str("EDGE_WEIGHT_FORMAT : FULL_MATRIX\n");
    s.push_str("EDGE_WEIGHT_SECTION\n");
    for row in m.entries.chunks(m.n) {
        for (j, &e) in row.iter().enumerate() {
            if j > 0 {
                s.push(' ');
            }
            s.push(char::from(b'0' + e));
        }
        s.push('\n');
    }
    s.push_str("EOF\n");
    s
}

pub fn write_tsp(m: &BinaryTspMatrix, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, tsp_to_string(m))?;
    Ok(())
}

pub fn read_tsp(path: impl AsRef<Path>) -> Result<BinaryTspMatrix> {
    let path = path.as_ref();
    parse_tsp(&fs::read_to_string(path)?, path)
}

pub fn parse_tsp(text: &str, path: &Path) -> Result<BinaryTspMatrix> {
    let mut name = String::new();
    let mut n = None;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut section_line = 0;
    for (no, line) in lines.by_ref() {
        if line.trim().is_empty() {
            continue;
        }
        let (key, value) = header(line);
        match key {
            "NAME" => name = value.to_string(),
            "TYPE" if value != "TSP" => return Err(Error::parse(path, no, format!("TYPE is {value:?}, expected TSP"))),
            "DIMENSION" => n = Some(parse_dimension(path, no, value)?),
            "EDGE_WEIGHT_TYPE" if value != "EXPLICIT" => {
                return Err(Error::parse(path, no, format!("unsupported EDGE_WEIGHT_TYPE {value:?}")));
            }
            "EDGE_WEIGHT_FORMAT" if value != "FULL_MATRIX" => {
                return Err(Error::parse(path, no, format!("unsupported EDGE_WEIGHT_FORMAT {value:?}")));
            }
            "EDGE_WEIGHT_SECTION" => {
                section_line = no;
                break;
            }
            _ => {}
        }
    }
    if section_line == 0 {
        return Err(Error::parse(path, text.lines().count(), "missing EDGE_WEIGHT_SECTION"));
    }
    let n = n.ok_or_else(|| Error::parse(path, section_line, "DIMENSION must precede EDGE_WEIGHT_SECTION"))?;
    let mut entries = Vec::with_capacity(n * n);
    let mut last = section_line;
    for (no, line) in lines {
        last = no;
        if line.trim() == "EOF" {
            break;
        }
        for tok in line.split_whitespace() {
            if entries.len() == n * n {
                return Err(Error::parse(path, no, "more than DIMENSION^2 weights"));
            }
            match tok {
                "0" => entries.push(0),
                "1" => entries.push(1),
                _ => return Err(Error::parse(path, no, format!("weight {tok:?} is not 0 or 1"))),
            }
        }
    }
    if entries.len() != n * n {
        return Err(Error::parse(path, last, format!("expected {} weights, found {}", n * n, entries.len())));
    }
    BinaryTspMatrix::from_entries(name, n, entries).map_err(|e| Error::parse(path, section_line, e.to_string()))
}

pub fn tour_to_string(name: &str, t: &Tour) -> String {
    let mut s = String::with_capacity(64 + 8 * t.len());
    let _ = writeln!(s, "NAME : {name}");
    s.push_str("TYPE : TOUR\n");
    let _ = writeln!(s, "DIMENSION : {}", t.len());
    s.push_str("TOUR_SECTION\n");
    for v in t.order() {
        let _ = writeln!(s, "{v}");
    }
    s.push_str("-1\nEOF\n");
    s
}

pub fn write_tour(name: &str, t: &Tour, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, tour_to_string(name, t))?;
    Ok(())
}

pub fn read_tour(path: impl AsRef<Path>, n: usize) -> Result<Tour> {
    let path = path.as_ref();
    parse_tour(&fs::read_to_string(path)?, path, n)
}

/// Parses a TOUR_SECTION file. A bare whitespace-separated vertex list ended
/// by `-1` is accepted too, since several solvers emit nothing else.
pub fn parse_tour(text: &str, path: &Path, n: usize) -> Result<Tour> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();
    let has_header = text.lines().any(|l| l.trim() == "TOUR_SECTION");
    let mut section_line = 0;
    if has_header {
        for (no, line) in lines.by_ref() {
            let (key, value) = header(line);
            match key {
                "DIMENSION" => {
                    let d = parse_dimension(path, no, value)?;
                    if d != n {
                        return Err(Error::parse(
                            path,
                            no,
                            format!("tour DIMENSION {d} but instance has {n} vertices"),
                        ));
                    }
                }
                "TYPE" if value != "TOUR" => {
                    return Err(Error::parse(path, no, format!("TYPE is {value:?}, expected TOUR")));
                }
                "TOUR_SECTION" => {
                    section_line = no;
                    break;
                }
                _ => {}
            }
        }
    }
    let mut seen = vec![false; n + 1];
    let mut order = Vec::with_capacity(n);
    let mut terminated = false;
    let mut last = section_line;
    'section: for (no, line) in lines.by_ref() {
        last = no;
        for tok in line.split_whitespace() {
            if tok == "-1" {
                terminated = true;
                break 'section;
            }
            if tok == "EOF" {
                break 'section;
            }
            let v = parse_vertex(path, no, tok, n)?;
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::parse(path, no, format!("vertex {v} repeated")));
            }
            order.push(v);
        }
    }
    if !terminated {
        return Err(Error::parse(path, last.max(1), "tour not terminated by -1"));
    }
    if order.len() != n {
        return Err(Error::parse(path, last, format!("tour lists {} of {n} vertices", order.len())));
    }
    Tour::new(order).map_err(|e| Error::parse(path, last, e.to_string()))
}

/// Parses a tour given as its `n` edges, one `i j` pair per line.
pub fn parse_edge_list_tour(text: &str, path: &Path, n: usize) -> Result<Tour> {
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n + 1];
    let mut count = 0;
    let mut last = 0;
    for (no, line) in text.lines().enumerate().map(|(i, l)| (i + 1, l)) {
        last = no;
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            [] => continue,
            ["-1"] | ["EOF"] => break,
            [a, b] => {
                let (u, v) = (parse_vertex(path, no, a, n)?, parse_vertex(path, no, b, n)?);
                if u == v || adj[u].contains(&v) {
                    return Err(Error::parse(path, no, format!("bad tour edge ({u}, {v})")));
                }
                adj[u].push(v);
                adj[v].push(u);
                if adj[u].len() > 2 || adj[v].len() > 2 {
                    return Err(Error::parse(path, no, "vertex of tour degree above 2"));
                }
                count += 1;
            }
            _ => return Err(Error::parse(path, no, format!("expected an edge, found {line:?}"))),
        }
    }
    if count != n || adj[1..].iter().any(|a| a.len() != 2) {
        return Err(Error::parse(path, last, format!("edge list is not a single {n}-cycle")));
    }
    let mut order = vec![1];
    let (mut prev, mut cur) = (1, adj[1][0]);
    while cur != 1 {
        order.push(cur);
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        (prev, cur) = (cur, next);
    }
    if order.len() != n {
        return Err(Error::parse(path, last, "edge list splits into several cycles"));
    }
    Tour::new(order).map_err(|e| Error::parse(path, last, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("test")
    }

    #[test]
    fn c4_layout() {
        let g = Graph::cycle(4).unwrap().with_name("C4");
        let text = hcp_to_string(&g, None);
        let expected = "NAME : C4\nTYPE : HCP\nCOMMENT : Hamiltonian cycle problem\nDIMENSION : 4\n\
                        EDGE_DATA_FORMAT : EDGE_LIST\nEDGE_DATA_SECTION\n1 2\n1 4\n2 3\n3 4\n-1\nEOF\n";
        assert_eq!(text, expected);
        let back = parse_hcp(&text, p()).unwrap();
        assert_eq!(back.graph, g);
        assert_eq!(hcp_to_string(&back.graph, None), text);
    }

    #[test]
    fn hcp_errors_carry_lines() {
        let zero = "NAME: x\nTYPE: HCP\nDIMENSION: 3\nEDGE_DATA_SECTION\n1 2\n0 3\n-1\nEOF\n";
        match parse_hcp(zero, p()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("{other:?}"),
        }
        let unterminated = "NAME: x\nDIMENSION: 3\nEDGE_DATA_SECTION\n1 2\n2 3\n";
        assert!(matches!(parse_hcp(unterminated, p()), Err(Error::Parse { .. })));
        let range = "NAME: x\nDIMENSION: 3\nEDGE_DATA_SECTION\n1 4\n-1\n";
        assert!(matches!(parse_hcp(range, p()), Err(Error::Parse { line: 4, .. })));
        let no_dim = "NAME: x\nEDGE_DATA_SECTION\n1 2\n-1\n";
        assert!(parse_hcp(no_dim, p()).is_err());
    }

    #[test]
    fn tolerant_reader() {
        let text = "NAME:x\nCOMMENT : a\nCOMMENT : b\nTYPE : HCP\nDIMENSION:3\nFOO : bar\nEDGE_DATA_SECTION\n2 1 3 2\n1 3\n-1\n";
        let f = parse_hcp(text, p()).unwrap();
        assert_eq!(f.comment.as_deref(), Some("a\nb"));
        assert_eq!(f.graph.edges(), &[(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn c4_matrix_and_lengths() {
        let m = graph_to_tsp(&Graph::cycle(4).unwrap());
        assert_eq!(m.entry(1, 2), 0);
        assert_eq!(m.entry(1, 3), 1);
        assert_eq!(tour_length(&m, &Tour::identity(4)).unwrap(), 0);
        assert_eq!(tour_length(&m, &Tour::new(vec![1, 3, 2, 4]).unwrap()).unwrap(), 2);
        assert!(tour_length(&m, &Tour::identity(5)).is_err());
        let back = parse_tsp(&tsp_to_string(&m), p()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn edgeless_triangle() {
        let g = Graph::new("E3", 3, []).unwrap();
        let m = graph_to_tsp(&g);
        assert_eq!(tour_length(&m, &Tour::identity(3)).unwrap(), 3);
        assert_eq!(m.to_graph(), g);
    }

    #[test]
    fn tours() {
        let t = Tour::new(vec![3, 1, 4, 2, 5]).unwrap();
        let text = tour_to_string("x", &t);
        assert_eq!(parse_tour(&text, p(), 5).unwrap(), t);
        assert!(parse_tour(&text, p(), 6).is_err());
        assert_eq!(parse_tour("1\n2\n3\n-1\n", p(), 3).unwrap(), Tour::identity(3));
        assert!(parse_tour("TOUR_SECTION\n1\n2\n2\n-1\n", p(), 3).is_err());
        assert!(parse_tour("TOUR_SECTION\n1\n2\n", p(), 3).is_err());
        assert!(parse_tour("TOUR_SECTION\n1\n2\n-1\n", p(), 3).is_err());
    }

    #[test]
    fn edge_list_tours() {
        assert_eq!(parse_edge_list_tour("1 2\n3 2\n3 4\n4 1\n", p(), 4).unwrap(), Tour::identity(4));
        assert!(parse_edge_list_tour("1 2\n2 1\n3 4\n4 3\n", p(), 4).is_err());
        assert!(parse_edge_list_tour("1 2\n2 3\n3 1\n4 5\n5 6\n6 4\n", p(), 6).is_err());
    }
}
