use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A CNF formula over variables `1..=num_vars`; literal `-v` negates `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        if num_vars == 0 {
            return Err(Error::InvalidParameters("a formula needs at least one variable".into()));
        }
        for (i, c) in clauses.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::InvalidParameters(format!("clause {} is empty", i + 1)));
            }
            if let Some(l) = c.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > num_vars) {
                return Err(Error::InvalidParameters(format!("literal {l} outside 1..={num_vars}")));
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn num_literals(&self) -> usize {
        self.clauses.iter().map(Vec::len).sum()
    }

    /// `assignment[v - 1]` is the value of variable `v`.
    pub fn is_satisfied(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.num_vars
            && self.clauses.iter().all(|c| c.iter().any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0)))
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let _ = write!(s, "{l} ");
            }
            s.push_str("0\n");
        }
        s
    }

    pub fn parse_dimacs(text: &str, path: &Path) -> Result<Self> {
        let mut num_vars = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for (no, line) in text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())) {
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                match parts.as_slice() {
                    ["cnf", v, _] => num_vars = v.parse().ok(),
                    _ => return Err(Error::parse(path, no, "bad problem line")),
                }
                continue;
            }
            for tok in line.split_whitespace() {
                let l: i32 = tok.parse().map_err(|_| Error::parse(path, no, format!("bad literal {tok:?}")))?;
                if l == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else {
                    current.push(l);
                }
            }
        }
        if !current.is_empty() {
            clauses.push(current);
        }
        let n = num_vars.ok_or_else(|| Error::parse(path, 1, "missing `p cnf` line"))?;
        CnfFormula::new(n, clauses).map_err(|e| Error::parse(path, 1, e.to_string()))
    }
}

/// Accumulates clauses while handing out fresh variables.
#[derive(Debug, Default)]
pub struct CnfBuilder {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

/// Below this many literals at-most-one is encoded pairwise, otherwise with
/// the sequential counter.
const SEQUENTIAL_AMO_FROM: usize = 6;

impl CnfBuilder {
    pub fn with_vars(num_vars: usize) -> Self {
        CnfBuilder { num_vars, clauses: Vec::new() }
    }

    pub fn fresh(&mut self) -> i32 {
        self.num_vars += 1;
        self.num_vars as i32
    }

    /// An empty clause is turned into the contradiction `y ∧ ¬y` on a fresh `y`.
    pub fn clause(&mut self, lits: Vec<i32>) {
        if lits.is_empty() {
            let y = self.fresh();
            self.clauses.push(vec![y]);
            self.clauses.push(vec![-y]);
        } else {
            self.clauses.push(lits);
        }
    }

    pub fn at_most_one(&mut self, lits: &[i32]) {
        if lits.len() < SEQUENTIAL_AMO_FROM {
            for (i, &a) in lits.iter().enumerate() {
                for &b in &lits[i + 1..] {
                    self.clauses.push(vec![-a, -b]);
                }
            }
            return;
        }
        let k = lits.len();
        let s: Vec<i32> = (0..k - 1).map(|_| self.fresh()).collect();
        self.clauses.push(vec![-lits[0], s[0]]);
        for i in 1..k - 1 {
            self.clauses.push(vec![-lits[i], s[i]]);
            self.clauses.push(vec![-s[i - 1], s[i]]);
            self.clauses.push(vec![-lits[i], -s[i - 1]]);
        }
        self.clauses.push(vec![-lits[k - 1], -s[k - 2]]);
    }

    pub fn exactly_one(&mut self, lits: &[i32]) {
        self.clause(lits.to_vec());
        self.at_most_one(lits);
    }

    pub fn finish(self) -> CnfFormula {
        CnfFormula::new(self.num_vars.max(1), self.clauses).expect("builder emits well-formed clauses")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn satisfiable(f: &CnfFormula) -> bool {
        let n = f.num_vars();
        (0..1u32 << n).any(|m| f.is_satisfied(&(0..n).map(|i| m >> i & 1 == 1).collect::<Vec<_>>()))
    }

    #[test]
    fn amo_encodings_agree_with_counting() {
        for k in 1..=8 {
            let mut b = CnfBuilder::with_vars(k);
            let lits: Vec<i32> = (1..=k as i32).collect();
            b.at_most_one(&lits);
            let f = b.finish();
            let aux = f.num_vars() - k;
            for m in 0..1u32 << k {
                let main: Vec<bool> = (0..k).map(|i| m >> i & 1 == 1).collect();
                let ok = (0..1u32 << aux).any(|a| {
                    let mut full = main.clone();
                    full.extend((0..aux).map(|i| a >> i & 1 == 1));
                    f.is_satisfied(&full)
                });
                assert_eq!(ok, m.count_ones() <= 1, "k={k} m={m:b}");
            }
        }
    }

    #[test]
    fn empty_clause_is_a_contradiction() {
        let mut b = CnfBuilder::with_vars(1);
        b.clause(vec![]);
        assert!(!satisfiable(&b.finish()));
    }

    #[test]
    fn dimacs_round_trip() {
        let f = CnfFormula::new(3, vec![vec![1, -2], vec![3], vec![-1, 2, -3]]).unwrap();
        assert_eq!(CnfFormula::parse_dimacs(&f.to_dimacs(), Path::new("x")).unwrap(), f);
        assert!(CnfFormula::new(2, vec![vec![3]]).is_err());
        assert!(CnfFormula::new(2, vec![vec![]]).is_err());
    }
}
