//! Source problems, their solutions, and the plain-text input formats.
//!
//! All formats are line based; `#` starts a comment and blank lines are
//! ignored.
//!
//! * COL3: first line the vertex count, then one `u v` edge per line.
//! * QN: the board size.
//! * SSP: first line the universe size `u` (elements are `1..=u`), then one
//!   subset per line as space-separated elements.
//! * II: first line the cube count `k`, then one line of six colours in
//!   `1..=k` per cube, in the face order top, bottom, front, back, right, left.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{normalize, Edge, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SourceKind {
    Col3,
    Ii,
    Qn,
    Ssp,
}

impl SourceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SourceKind::Col3 => "COL3",
            SourceKind::Ii => "II",
            SourceKind::Qn => "QN",
            SourceKind::Ssp => "SSP",
        }
    }
}

impl fmt::Display for SourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SourceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "COL3" | "COL" => Ok(SourceKind::Col3),
            "II" => Ok(SourceKind::Ii),
            "QN" => Ok(SourceKind::Qn),
            "SSP" => Ok(SourceKind::Ssp),
            _ => Err(Error::InvalidParameters(format!("unknown source problem {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SourceProblem {
    Col3 { n: usize, edges: Vec<Edge> },
    Ii { cubes: Vec<[u8; 6]> },
    Qn { n: usize },
    Ssp { universe: usize, subsets: Vec<Vec<usize>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceSolution {
    /// Colour in `1..=3` per vertex.
    Colouring(Vec<u8>),
    /// Column (1-based) of the queen in each row.
    Queens(Vec<usize>),
    Split {
        left: Vec<usize>,
        right: Vec<usize>,
    },
    /// Orientation index in `0..24` per cube.
    Stacking(Vec<usize>),
}

/// Face positions: top, bottom, front, back, right, left. Opposite faces are
/// the pairs (0, 1), (2, 3) and (4, 5).
pub const SIDES: [usize; 4] = [2, 3, 4, 5];

/// The 24 rotations of a cube. Entry `r[p]` is the original face that ends up
/// at position `p`.
pub fn orientations() -> &'static [[usize; 6]] {
    static ALL: OnceLock<Vec<[usize; 6]>> = OnceLock::new();
    ALL.get_or_init(|| {
        // Quarter turns about the vertical and the left-right axes.
        let yaw = [0, 1, 5, 4, 2, 3];
        let pitch = [2, 3, 1, 0, 4, 5];
        let compose = |a: &[usize; 6], b: &[usize; 6]| -> [usize; 6] { std::array::from_fn(|p| a[b[p]]) };
        let mut all = vec![[0, 1, 2, 3, 4, 5]];
        let mut i = 0;
        while i < all.len() {
            for g in [&yaw, &pitch] {
                let next = compose(&all[i], g);
                if !all.contains(&next) {
                    all.push(next);
                }
            }
            i += 1;
        }
        all
    })
}

impl SourceProblem {
    pub fn kind(&self) -> SourceKind {
        match self {
            SourceProblem::Col3 { .. } => SourceKind::Col3,
            SourceProblem::Ii { .. } => SourceKind::Ii,
            SourceProblem::Qn { .. } => SourceKind::Qn,
            SourceProblem::Ssp { .. } => SourceKind::Ssp,
        }
    }

    pub fn col3(g: &Graph) -> Self {
        SourceProblem::Col3 { n: g.n(), edges: g.edges().to_vec() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameters(msg));
        match self {
            SourceProblem::Col3 { n, edges } => Graph::new("COL3", *n, edges.iter().copied()).map(|_| ()),
            SourceProblem::Qn { n } if *n == 0 => bad("board size must be positive".into()),
            SourceProblem::Qn { .. } => Ok(()),
            SourceProblem::Ssp { universe, subsets } => {
                if *universe == 0 {
                    return bad("empty universe".into());
                }
                match subsets.iter().flatten().find(|&&e| e == 0 || e > *universe) {
                    Some(e) => bad(format!("element {e} outside 1..={universe}")),
                    None => Ok(()),
                }
            }
            SourceProblem::Ii { cubes } => {
                let k = cubes.len();
                if k == 0 {
                    return bad("no cubes".into());
                }
                match cubes.iter().flatten().find(|&&c| c == 0 || c as usize > k) {
                    Some(c) => bad(format!("colour {c} outside 1..={k}")),
                    None => Ok(()),
                }
            }
        }
    }

    /// Checks a proposed solution against the instance.
    pub fn check(&self, sol: &SourceSolution) -> Result<()> {
        let fail = |msg: String| Err(Error::Decode(msg));
        match (self, sol) {
            (SourceProblem::Col3 { n, edges }, SourceSolution::Colouring(c)) => {
                if c.len() != *n || c.iter().any(|&x| !(1..=3).contains(&x)) {
                    return fail("colouring has the wrong shape".into());
                }
                match edges.iter().find(|&&(u, v)| c[u - 1] == c[v - 1]) {
                    Some((u, v)) => fail(format!("edge ({u}, {v}) is monochromatic")),
                    None => Ok(()),
                }
            }
            (SourceProblem::Qn { n }, SourceSolution::Queens(cols)) => {
                if cols.len() != *n || cols.iter().any(|&c| c == 0 || c > *n) {
                    return fail("placement has the wrong shape".into());
                }
                for r1 in 0..*n {
                    for r2 in r1 + 1..*n {
                        let (c1, c2) = (cols[r1], cols[r2]);
                        if c1 == c2 || c1.abs_diff(c2) == r2 - r1 {
                            return fail(format!("queens in rows {} and {} attack", r1 + 1, r2 + 1));
                        }
                    }
                }
                Ok(())
            }
            (SourceProblem::Ssp { universe, subsets }, SourceSolution::Split { left, right }) => {
                let mut side = vec![0u8; universe + 1];
                for (elems, s) in [(left, 1u8), (right, 2u8)] {
                    for &e in elems {
                        if e == 0 || e > *universe || side[e] != 0 {
                            return fail(format!("element {e} misplaced in the split"));
                        }
                        side[e] = s;
                    }
                }
                if left.is_empty() || right.is_empty() || side[1..].contains(&0) {
                    return fail("split is not a partition into two nonempty sides".into());
                }
                match subsets.iter().find(|s| !(s.iter().any(|&e| side[e] == 1) && s.iter().any(|&e| side[e] == 2))) {
                    Some(s) => fail(format!("subset {s:?} is not split")),
                    None => Ok(()),
                }
            }
            (SourceProblem::Ii { cubes }, SourceSolution::Stacking(orient)) => {
                let k = cubes.len();
                if orient.len() != k || orient.iter().any(|&r| r >= 24) {
                    return fail("stacking has the wrong shape".into());
                }
                let rots = orientations();
                for &side in &SIDES {
                    let mut seen = vec![false; k + 1];
                    for (cube, &r) in cubes.iter().zip(orient) {
                        seen[cube[rots[r][side]] as usize] = true;
                    }
                    if seen[1..].contains(&false) {
                        return fail(format!("face position {side} misses a colour"));
                    }
                }
                Ok(())
            }
            _ => fail(format!("solution does not match a {} instance", self.kind())),
        }
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn numbers(path: &Path, no: usize, line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| Error::parse(path, no, format!("not a non-negative integer: {t:?}"))))
        .collect()
}

fn single(path: &Path, no: usize, line: &str) -> Result<usize> {
    match numbers(path, no, line)?.as_slice() {
        [x] => Ok(*x),
        _ => Err(Error::parse(path, no, "expected a single integer")),
    }
}

pub fn parse_source(kind: SourceKind, text: &str, path: &Path) -> Result<SourceProblem> {
    let mut lines = content_lines(text);
    let (first_no, first) = lines.next().ok_or_else(|| Error::parse(path, 1, "empty input"))?;
    let head = single(path, first_no, first)?;
    let problem = match kind {
        SourceKind::Qn => {
            if let Some((no, _)) = lines.next() {
                return Err(Error::parse(path, no, "trailing content after the board size"));
            }
            SourceProblem::Qn { n: head }
        }
        SourceKind::Col3 => {
            let mut edges = Vec::new();
            for (no, line) in lines {
                match numbers(path, no, line)?.as_slice() {
                    [u, v] if (1..=head).contains(u) && (1..=head).contains(v) && u != v => {
                        edges.push(normalize(*u, *v))
                    }
                    _ => return Err(Error::parse(path, no, format!("bad edge line {line:?}"))),
                }
            }
            edges.sort_unstable();
            edges.dedup();
            SourceProblem::Col3 { n: head, edges }
        }
        SourceKind::Ssp => {
            let mut subsets = Vec::new();
            for (no, line) in lines {
                let mut s = numbers(path, no, line)?;
                if let Some(e) = s.iter().find(|&&e| e == 0 || e > head) {
                    return Err(Error::parse(path, no, format!("element {e} outside 1..={head}")));
                }
                s.sort_unstable();
                s.dedup();
                subsets.push(s);
            }
            SourceProblem::Ssp { universe: head, subsets }
        }
        SourceKind::Ii => {
            let mut cubes = Vec::new();
            for (no, line) in lines {
                let faces = numbers(path, no, line)?;
                if faces.len() != 6 || faces.iter().any(|&c| c == 0 || c > head) {
                    return Err(Error::parse(path, no, format!("expected six colours in 1..={head}")));
                }
                cubes.push(std::array::from_fn(|i| faces[i] as u8));
            }
            if cubes.len() != head {
                return Err(Error::parse(path, first_no, format!("declared {head} cubes, found {}", cubes.len())));
            }
            SourceProblem::Ii { cubes }
        }
    };
    problem.validate().map_err(|e| Error::parse(path, first_no, e.to_string()))?;
    Ok(problem)
}

pub fn source_to_string(p: &SourceProblem) -> String {
    let mut s = format!("# {}\n", p.kind());
    let mut line = |items: &mut dyn Iterator<Item = String>| {
        s.push_str(&items.collect::<Vec<_>>().join(" "));
        s.push('\n');
    };
    match p {
        SourceProblem::Qn { n } => line(&mut std::iter::once(n.to_string())),
        SourceProblem::Col3 { n, edges } => {
            line(&mut std::iter::once(n.to_string()));
            for (u, v) in edges {
                line(&mut [u, v].into_iter().map(|x| x.to_string()));
            }
        }
        SourceProblem::Ssp { universe, subsets } => {
            line(&mut std::iter::once(universe.to_string()));
            for sub in subsets {
                line(&mut sub.iter().map(|x| x.to_string()));
            }
        }
        SourceProblem::Ii { cubes } => {
            line(&mut std::iter::once(cubes.len().to_string()));
            for c in cubes {
                line(&mut c.iter().map(|x| x.to_string()));
            }
        }
    }
    s
}

impl fmt::Display for SourceSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[usize]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        match self {
            SourceSolution::Colouring(c) => {
                let c: Vec<usize> = c.iter().map(|&x| x as usize).collect();
                write!(f, "colouring: {}", join(&c))
            }
            SourceSolution::Queens(q) => write!(f, "queen columns by row: {}", join(q)),
            SourceSolution::Split { left, right } => write!(f, "split: {{{}}} | {{{}}}", join(left), join(right)),
            SourceSolution::Stacking(o) => {
                let rots = orientations();
                writeln!(f, "orientations: {}", join(o))?;
                let faces: Vec<String> = o.iter().map(|&r| format!("{:?}", SIDES.map(|s| rots[r][s]))).collect();
                write!(f, "side faces (front back right left) per cube: {}", faces.join(" "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_four_rotations() {
        let rots = orientations();
        assert_eq!(rots.len(), 24);
        for r in rots {
            // Opposite faces stay opposite.
            for p in [0, 2, 4] {
                assert_eq!(r[p] ^ 1, r[p + 1]);
            }
        }
    }

    #[test]
    fn parse_and_print() {
        let p = Path::new("x");
        let ii = parse_source(SourceKind::Ii, "# two cubes\n2\n1 2 1 2 1 2\n2 2 2 1 1 1 # tail\n", p).unwrap();
        assert_eq!(parse_source(SourceKind::Ii, &source_to_string(&ii), p).unwrap(), ii);
        assert!(parse_source(SourceKind::Ii, "2\n1 2 3 1 1 1\n1 1 1 1 1 1\n", p).is_err());
        let ssp = parse_source(SourceKind::Ssp, "3\n1 2\n3 2 2\n", p).unwrap();
        assert_eq!(ssp, SourceProblem::Ssp { universe: 3, subsets: vec![vec![1, 2], vec![2, 3]] });
        assert!(parse_source(SourceKind::Ssp, "2\n1 3\n", p).is_err());
        let col = parse_source(SourceKind::Col3, "3\n1 2\n2 3\n", p).unwrap();
        assert_eq!(parse_source(SourceKind::Col3, &source_to_string(&col), p).unwrap(), col);
        assert!(matches!(parse_source(SourceKind::Col3, "3\n1 1\n", p), Err(Error::Parse { line: 2, .. })));
        assert_eq!(parse_source(SourceKind::Qn, "8\n", p).unwrap(), SourceProblem::Qn { n: 8 });
        assert!(parse_source(SourceKind::Qn, "0\n", p).is_err());
    }

    #[test]
    fn solution_checks() {
        let k3 = SourceProblem::col3(&Graph::complete(3).unwrap());
        assert!(k3.check(&SourceSolution::Colouring(vec![1, 2, 3])).is_ok());
        assert!(k3.check(&SourceSolution::Colouring(vec![1, 2, 2])).is_err());
        let q4 = SourceProblem::Qn { n: 4 };
        assert!(q4.check(&SourceSolution::Queens(vec![2, 4, 1, 3])).is_ok());
        assert!(q4.check(&SourceSolution::Queens(vec![1, 3, 2, 4])).is_err());
        let ssp = SourceProblem::Ssp { universe: 2, subsets: vec![vec![1, 2]] };
        assert!(ssp.check(&SourceSolution::Split { left: vec![1], right: vec![2] }).is_ok());
        assert!(ssp.check(&SourceSolution::Split { left: vec![1, 2], right: vec![] }).is_err());
        let one = SourceProblem::Ii { cubes: vec![[1; 6]] };
        assert!(one.check(&SourceSolution::Stacking(vec![7])).is_ok());
        assert!(one.check(&SourceSolution::Queens(vec![1])).is_err());
    }
}
