//! CNF encodings of the source problems and the matching assignment decoders.

use crate::error::{Error, Result};
use crate::graph::Graph;

use super::cnf::{CnfBuilder, CnfFormula};
use super::source::{orientations, SourceProblem, SourceSolution, SIDES};

/// Colour `c` in `1..=3` of vertex `v`.
fn col_var(v: usize, c: usize) -> i32 {
    (3 * (v - 1) + c) as i32
}

fn queen_var(n: usize, r: usize, c: usize) -> i32 {
    ((r - 1) * n + c) as i32
}

/// The distinct side views of a cube, each with the first orientation
/// showing it.
fn side_views(cube: &[u8; 6]) -> Vec<([u8; 4], usize)> {
    let mut views: Vec<([u8; 4], usize)> = Vec::new();
    for (r, rot) in orientations().iter().enumerate() {
        let v = SIDES.map(|s| cube[rot[s]]);
        if !views.iter().any(|(w, _)| *w == v) {
            views.push((v, r));
        }
    }
    views
}

/// Variable layout of the stacking encoding: one variable per distinct view
/// of each cube, then one per (cube, side, colour) shown.
struct StackingVars {
    views: Vec<Vec<([u8; 4], usize)>>,
    view_base: Vec<usize>,
    shown_base: usize,
    k: usize,
}

impl StackingVars {
    fn new(cubes: &[[u8; 6]]) -> Self {
        let views: Vec<_> = cubes.iter().map(side_views).collect();
        let mut view_base = Vec::with_capacity(cubes.len());
        let mut next = 0;
        for v in &views {
            view_base.push(next);
            next += v.len();
        }
        StackingVars { views, view_base, shown_base: next, k: cubes.len() }
    }

    fn view(&self, cube: usize, j: usize) -> i32 {
        (self.view_base[cube] + j + 1) as i32
    }

    fn shown(&self, cube: usize, side: usize, colour: u8) -> i32 {
        (self.shown_base + (cube * 4 + side) * self.k + colour as usize) as i32
    }

    fn count(&self) -> usize {
        self.shown_base + 4 * self.k * self.k
    }
}

pub fn encode_col3(g: &Graph) -> CnfFormula {
    let mut b = CnfBuilder::with_vars(3 * g.n());
    for v in g.vertices() {
        b.exactly_one(&[col_var(v, 1), col_var(v, 2), col_var(v, 3)]);
    }
    for &(u, v) in g.edges() {
        for c in 1..=3 {
            b.clause(vec![-col_var(u, c), -col_var(v, c)]);
        }
    }
    b.finish()
}

pub fn encode_nqueens(n: usize) -> Result<CnfFormula> {
    if n == 0 {
        return Err(Error::InvalidParameters("board size must be positive".into()));
    }
    let mut b = CnfBuilder::with_vars(n * n);
    for r in 1..=n {
        let row: Vec<i32> = (1..=n).map(|c| queen_var(n, r, c)).collect();
        b.exactly_one(&row);
    }
    for c in 1..=n {
        let col: Vec<i32> = (1..=n).map(|r| queen_var(n, r, c)).collect();
        b.at_most_one(&col);
    }
    let cells = || (1..=n).flat_map(|r| (1..=n).map(move |c| (r, c)));
    for d in 0..2 * n - 1 {
        // Diagonals r - c = d - (n - 1) and anti-diagonals r + c = d + 2.
        let diag: Vec<i32> = cells().filter(|&(r, c)| r + n - 1 == c + d).map(|(r, c)| queen_var(n, r, c)).collect();
        let anti: Vec<i32> = cells().filter(|&(r, c)| r + c == d + 2).map(|(r, c)| queen_var(n, r, c)).collect();
        for line in [diag, anti] {
            if line.len() > 1 {
                b.at_most_one(&line);
            }
        }
    }
    Ok(b.finish())
}

pub fn encode_setsplit(universe: usize, subsets: &[Vec<usize>]) -> Result<CnfFormula> {
    SourceProblem::Ssp { universe, subsets: subsets.to_vec() }.validate()?;
    let mut b = CnfBuilder::with_vars(universe);
    let all: Vec<usize> = (1..=universe).collect();
    for s in std::iter::once(&all).chain(subsets) {
        let mut s = s.clone();
        s.sort_unstable();
        s.dedup();
        b.clause(s.iter().map(|&e| e as i32).collect());
        b.clause(s.iter().map(|&e| -(e as i32)).collect());
    }
    Ok(b.finish())
}

pub fn encode_instant_insanity(cubes: &[[u8; 6]]) -> Result<CnfFormula> {
    SourceProblem::Ii { cubes: cubes.to_vec() }.validate()?;
    let k = cubes.len();
    let vars = StackingVars::new(cubes);
    let mut b = CnfBuilder::with_vars(vars.count());
    for cube in 0..k {
        b.clause((0..vars.views[cube].len()).map(|j| vars.view(cube, j)).collect());
        for (j, (view, _)) in vars.views[cube].iter().enumerate() {
            for (side, &colour) in view.iter().enumerate() {
                b.clause(vec![-vars.view(cube, j), vars.shown(cube, side, colour)]);
            }
        }
    }
    for side in 0..4 {
        for colour in 1..=k as u8 {
            let lits: Vec<i32> = (0..k).map(|cube| vars.shown(cube, side, colour)).collect();
            b.exactly_one(&lits);
        }
    }
    Ok(b.finish())
}

pub fn encode(p: &SourceProblem) -> Result<CnfFormula> {
    p.validate()?;
    match p {
        SourceProblem::Col3 { n, edges } => Ok(encode_col3(&Graph::new("COL3", *n, edges.iter().copied())?)),
        SourceProblem::Qn { n } => encode_nqueens(*n),
        SourceProblem::Ssp { universe, subsets } => encode_setsplit(*universe, subsets),
        SourceProblem::Ii { cubes } => encode_instant_insanity(cubes),
    }
}

/// Reads the source solution off a satisfying assignment of [`encode`]`(p)`.
pub fn decode_assignment(p: &SourceProblem, assignment: &[bool]) -> Result<SourceSolution> {
    let val = |v: i32| assignment.get(v as usize - 1).copied().unwrap_or(false);
    let first = |mut it: std::ops::RangeInclusive<usize>, f: &dyn Fn(usize) -> i32, what: &str| {
        it.find(|&x| val(f(x))).ok_or_else(|| Error::Decode(format!("no {what} selected")))
    };
    let sol = match p {
        SourceProblem::Col3 { n, .. } => SourceSolution::Colouring(
            (1..=*n).map(|v| first(1..=3, &|c| col_var(v, c), "colour").map(|c| c as u8)).collect::<Result<_>>()?,
        ),
        SourceProblem::Qn { n } => SourceSolution::Queens(
            (1..=*n).map(|r| first(1..=*n, &|c| queen_var(*n, r, c), "column")).collect::<Result<_>>()?,
        ),
        SourceProblem::Ssp { universe, .. } => {
            let (left, right) = (1..=*universe).partition(|&e| val(e as i32));
            SourceSolution::Split { left, right }
        }
        SourceProblem::Ii { cubes } => {
            let vars = StackingVars::new(cubes);
            let picked = (0..cubes.len()).map(|c| {
                let j = first(0..=vars.views[c].len() - 1, &|j| vars.view(c, j), "orientation")?;
                Ok(vars.views[c][j].1)
            });
            SourceSolution::Stacking(picked.collect::<Result<_>>()?)
        }
    };
    p.check(&sol)?;
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force satisfying assignment, for formulas with few variables.
    fn model(f: &CnfFormula) -> Option<Vec<bool>> {
        let n = f.num_vars();
        (0..1u64 << n).map(|m| (0..n).map(|i| m >> i & 1 == 1).collect::<Vec<_>>()).find(|a| f.is_satisfied(a))
    }

    #[test]
    fn col3_small() {
        let k3 = Graph::complete(3).unwrap();
        let a = model(&encode_col3(&k3)).unwrap();
        assert!(decode_assignment(&SourceProblem::col3(&k3), &a).is_ok());
        assert!(model(&encode_col3(&Graph::complete(4).unwrap())).is_none());
    }

    #[test]
    fn queens_small() {
        for (n, sat) in [(1, true), (2, false), (3, false), (4, true)] {
            let f = encode_nqueens(n).unwrap();
            let m = model(&f);
            assert_eq!(m.is_some(), sat, "n={n}");
            if let Some(a) = m {
                assert!(decode_assignment(&SourceProblem::Qn { n }, &a).is_ok());
            }
        }
    }

    #[test]
    fn setsplit_small() {
        assert!(model(&encode_setsplit(2, &[vec![1, 2]]).unwrap()).is_some());
        assert!(model(&encode_setsplit(1, &[vec![1]]).unwrap()).is_none());
        assert!(model(&encode_setsplit(3, &[vec![]]).unwrap()).is_none());
        assert!(encode_setsplit(0, &[]).is_err());
    }

    #[test]
    fn insanity_sizes() {
        let f = encode_instant_insanity(&[[1; 6]]).unwrap();
        assert_eq!(f.num_vars(), 1 + 4);
        let two = [[1, 2, 1, 2, 1, 2], [2, 2, 1, 1, 1, 1]];
        assert!(model(&encode_instant_insanity(&two).unwrap()).is_none());
        let p = SourceProblem::Ii { cubes: vec![[1, 1, 1, 1, 2, 2], [2, 2, 1, 1, 1, 1]] };
        let a = model(&encode(&p).unwrap()).unwrap();
        assert!(decode_assignment(&p, &a).is_ok());
        assert!(encode_instant_insanity(&[[1, 1, 1, 1, 1, 3]]).is_err());
    }
}
