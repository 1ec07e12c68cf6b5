//! Generators for the benchmark instance families.
//!
//! Every generator is a pure function of its parameters and seed. Instance
//! names follow the `<FAMILY>_<vertex count>` convention used in published
//! result tables (`GPN_122`, `SN_124`, ...).

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{normalize, Edge, Graph, PlantedInstance, Tour, Vertex};

mod sheehan;

pub use sheehan::{gen_sheehan, gen_sheehan_with_cycle, sheehan_admissible, sheehan_edge_count};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Family {
    /// GP(p, 2) with p ≡ 1 (mod 6): exactly p Hamiltonian cycles.
    Gpn,
    /// GP(p, 2) with p ≡ 3 (mod 6): exactly 3 Hamiltonian cycles.
    Gp3,
    /// GP(p, 2) with p ≡ 5 (mod 6) plus one edge.
    Gp0,
    Sheehan,
    Snark,
    SnarkModified,
    RandomRegular,
    PlantedCubic,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Gpn,
        Family::Gp3,
        Family::Gp0,
        Family::Sheehan,
        Family::Snark,
        Family::SnarkModified,
        Family::RandomRegular,
        Family::PlantedCubic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Gpn => "GPN",
            Family::Gp3 => "GP3",
            Family::Gp0 => "GP0",
            Family::Sheehan => "SHEEHAN",
            Family::Snark => "SNARK",
            Family::SnarkModified => "SNARK_MODIFIED",
            Family::RandomRegular => "RANDOM_REGULAR",
            Family::PlantedCubic => "PLANTED_CUBIC",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase().replace('-', "_");
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == up)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown family {s:?}")))
    }
}

/// A family plus its integer parameters. Unused parameters stay `None`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    #[serde(default)]
    pub p: Option<usize>,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub d: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl FamilySpec {
    pub fn new(family: Family) -> Self {
        FamilySpec { family, p: None, k: None, n: None, d: None, seed: None }
    }

    fn need(&self, value: Option<usize>, what: &str) -> Result<usize> {
        value.ok_or_else(|| Error::InvalidParameters(format!("{} needs parameter {what}", self.family)))
    }

    /// Checks the congruence and parity constraints of each family.
    pub fn validate(&self) -> Result<()> {
        match self.family {
            Family::Gpn | Family::Gp3 | Family::Gp0 => {
                let p = self.need(self.p, "p")?;
                check_gp_class(self.family, p)
            }
            Family::Snark | Family::SnarkModified => check_snark(self.need(self.k, "k")?),
            Family::RandomRegular => {
                let (n, d) = (self.need(self.n, "n")?, self.need(self.d, "d")?);
                check_regular(n, d)
            }
            Family::PlantedCubic => check_planted(self.need(self.n, "n")?),
            Family::Sheehan => {
                let n = self.need(self.n, "n")?;
                if sheehan_admissible(n) {
                    Ok(())
                } else {
                    Err(Error::InvalidParameters(format!("no Sheehan graph on {n} vertices")))
                }
            }
        }
    }

    /// Builds the instance and its known properties.
    pub fn generate(&self) -> Result<(Graph, ExpectedProperties)> {
        self.validate()?;
        let seed = self.seed;
        match self.family {
            Family::Gpn | Family::Gp3 | Family::Gp0 => gen_gp_benchmark(self.family, self.p.unwrap(), seed),
            Family::Sheehan => gen_sheehan(self.n.unwrap()),
            Family::Snark => {
                let g = gen_flower_snark(self.k.unwrap())?;
                Ok((g, ExpectedProperties::non_hamiltonian()))
            }
            Family::SnarkModified => gen_modified_flower_snark(self.k.unwrap(), seed),
            Family::RandomRegular => {
                let g = gen_random_regular(self.n.unwrap(), self.d.unwrap(), seed.unwrap_or(0))?;
                Ok((g, ExpectedProperties::unknown()))
            }
            Family::PlantedCubic => {
                let inst = gen_planted_cubic(self.n.unwrap(), seed.unwrap_or(0))?;
                Ok((inst.graph, ExpectedProperties::hamiltonian(None)))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hamiltonicity {
    Yes,
    No,
    Unknown,
}

/// What is known about an instance before any solver runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedProperties {
    pub hamiltonian: Hamiltonicity,
    pub hc_count: Option<u64>,
    /// Zero whenever the graph is Hamiltonian.
    pub optimal_tsp_length: Option<u64>,
}

impl ExpectedProperties {
    pub fn hamiltonian(hc_count: Option<u64>) -> Self {
        ExpectedProperties { hamiltonian: Hamiltonicity::Yes, hc_count, optimal_tsp_length: Some(0) }
    }

    pub fn non_hamiltonian() -> Self {
        ExpectedProperties { hamiltonian: Hamiltonicity::No, hc_count: Some(0), optimal_tsp_length: None }
    }

    pub fn unknown() -> Self {
        ExpectedProperties { hamiltonian: Hamiltonicity::Unknown, hc_count: None, optimal_tsp_length: None }
    }
}

impl fmt::Display for ExpectedProperties {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ham = match self.hamiltonian {
            Hamiltonicity::Yes => "yes",
            Hamiltonicity::No => "no",
            Hamiltonicity::Unknown => "unknown",
        };
        let count = self.hc_count.map_or("unknown".to_string(), |c| c.to_string());
        let opt = self.optimal_tsp_length.map_or("unknown".to_string(), |c| c.to_string());
        write!(f, "hamiltonian={ham} hc_count={count} optimal_tsp_length={opt}")
    }
}

/// GP(p, k): outer cycle `u_i`, spokes `u_i v_i`, inner star `v_i v_{i+k}`.
/// `u_i` is labelled `i + 1` and `v_i` is labelled `p + i + 1`.
pub fn gen_generalized_petersen(p: usize, k: usize) -> Result<Graph> {
    if p < 3 || k == 0 || 2 * k >= p {
        return Err(Error::InvalidParameters(format!("GP(p, k) needs p >= 3 and 1 <= k < p/2, got p={p}, k={k}")));
    }
    let u = |i: usize| i % p + 1;
    let v = |i: usize| p + i % p + 1;
    let edges = (0..p).flat_map(|i| [(u(i), u(i + 1)), (u(i), v(i)), (v(i), v(i + k))]);
    Graph::new(format!("GP_{p}_{k}"), 2 * p, edges)
}

fn check_gp_class(family: Family, p: usize) -> Result<()> {
    let want = match family {
        Family::Gpn => 1,
        Family::Gp3 => 3,
        Family::Gp0 => 5,
        _ => unreachable!("not a generalized Petersen class"),
    };
    if p < 5 || p % 6 != want {
        return Err(Error::InvalidParameters(format!("{family} needs p ≡ {want} (mod 6) and p >= 5, got p={p}")));
    }
    Ok(())
}

/// One of the three GP(p, 2) benchmark classes, named `<CLASS>_<2p>`.
///
/// GP0 graphs are hypohamiltonian and one extra edge makes them Hamiltonian:
/// the lexicographically smallest absent pair `(u_0, u_2)` by default, or a
/// uniformly drawn absent pair with at least one outer endpoint when `seed`
/// is given. Chords between two inner vertices are excluded because some of
/// them (e.g. `(v_0, v_3)`) leave the graph non-Hamiltonian.
pub fn gen_gp_benchmark(family: Family, p: usize, seed: Option<u64>) -> Result<(Graph, ExpectedProperties)> {
    check_gp_class(family, p)?;
    let g = gen_generalized_petersen(p, 2)?;
    let name = format!("{}_{}", family, 2 * p);
    let (g, props) = match family {
        Family::Gpn => (g, ExpectedProperties::hamiltonian(Some(p as u64))),
        Family::Gp3 => (g, ExpectedProperties::hamiltonian(Some(3))),
        _ => {
            let (a, b) = chord(&g, seed, |(u, _)| u <= p)?;
            (g.add_edge(a, b)?, ExpectedProperties::hamiltonian(None))
        }
    };
    Ok((g.with_name(name), props))
}

/// The edge added to a hypohamiltonian base graph: the smallest absent pair,
/// or with a seed a uniform choice among the absent pairs accepted by `allowed`.
pub fn chord(g: &Graph, seed: Option<u64>, allowed: impl Fn(Edge) -> bool) -> Result<Edge> {
    let pick = match seed {
        None => g.first_non_edge(),
        Some(s) => {
            let pool: Vec<Edge> = g.non_edges().into_iter().filter(|&e| allowed(e)).collect();
            pool.choose(&mut ChaCha8Rng::seed_from_u64(s)).copied()
        }
    };
    pick.ok_or_else(|| Error::InvalidParameters(format!("{} is complete", g.name())))
}

fn check_snark(k: usize) -> Result<()> {
    if k < 5 || k.is_multiple_of(2) {
        return Err(Error::InvalidParameters(format!("flower snark needs odd k >= 5, got k={k}")));
    }
    Ok(())
}

/// Isaacs flower snark J_k on 4k vertices.
///
/// Gadget i is a star centred at `a_i` with leaves `b_i, c_i, d_i`. The `b`
/// vertices form a k-cycle and the `c`, `d` vertices one 2k-cycle
/// `c_0 .. c_{k-1} d_0 .. d_{k-1}`. Labels are gadget-major:
/// `a_i = 4i+1, b_i = 4i+2, c_i = 4i+3, d_i = 4i+4`.
pub fn gen_flower_snark(k: usize) -> Result<Graph> {
    check_snark(k)?;
    let a = |i: usize| 4 * (i % k) + 1;
    let b = |i: usize| 4 * (i % k) + 2;
    let c = |i: usize| 4 * (i % k) + 3;
    let d = |i: usize| 4 * (i % k) + 4;
    let mut edges = Vec::with_capacity(6 * k);
    for i in 0..k {
        edges.extend([(a(i), b(i)), (a(i), c(i)), (a(i), d(i)), (b(i), b(i + 1))]);
        if i + 1 < k {
            edges.extend([(c(i), c(i + 1)), (d(i), d(i + 1))]);
        } else {
            edges.extend([(c(i), d(0)), (d(i), c(0))]);
        }
    }
    Graph::new(format!("J_{k}"), 4 * k, edges)
}

/// Flower snark plus one edge (`(a_0, a_1)` unless `seed` picks another),
/// named `SN_<4k>`.
pub fn gen_modified_flower_snark(k: usize, seed: Option<u64>) -> Result<(Graph, ExpectedProperties)> {
    let g = gen_flower_snark(k)?;
    let (u, v) = chord(&g, seed, |_| true)?;
    let g = g.add_edge(u, v)?.with_name(format!("SN_{}", 4 * k));
    Ok((g, ExpectedProperties::hamiltonian(None)))
}

fn check_regular(n: usize, d: usize) -> Result<()> {
    if n == 0 || d >= n || (n * d) % 2 == 1 {
        return Err(Error::InvalidParameters(format!("no simple {d}-regular graph on {n} vertices")));
    }
    Ok(())
}

/// Attempts per reseed in the pairing model.
const PAIRING_RETRIES: usize = 1000;
const PAIRING_RESEEDS: usize = 64;

/// Uniform simple d-regular graph via the pairing (configuration) model.
///
/// `n·d` stubs are shuffled and paired; pairings with a loop or a repeated
/// pair are rejected. After [`PAIRING_RETRIES`] rejections the stream is
/// reseeded from itself.
pub fn gen_random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    check_regular(n, d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<Vertex> = (1..=n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    for _ in 0..PAIRING_RESEEDS {
        for _ in 0..PAIRING_RETRIES {
            stubs.shuffle(&mut rng);
            if let Some(edges) = simple_pairing(&stubs) {
                return Graph::new(format!("RR_{n}_{d}"), n, edges);
            }
        }
        rng = ChaCha8Rng::seed_from_u64(rng.gen());
    }
    Err(Error::GenerationFailed(format!(
        "pairing model rejected {} pairings for n={n}, d={d}",
        PAIRING_RETRIES * PAIRING_RESEEDS
    )))
}

fn simple_pairing(stubs: &[Vertex]) -> Option<Vec<Edge>> {
    let mut edges: Vec<Edge> = stubs.chunks_exact(2).map(|p| normalize(p[0], p[1])).collect();
    if edges.iter().any(|&(u, v)| u == v) {
        return None;
    }
    edges.sort_unstable();
    if edges.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(edges)
}

fn check_planted(n: usize) -> Result<()> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::InvalidParameters(format!("planted cubic graph needs even n >= 4, got n={n}")));
    }
    Ok(())
}

/// Random Hamiltonian cubic graph with a known cycle: a random n-cycle plus
/// a uniform perfect matching that avoids the cycle's edges.
pub fn gen_planted_cubic(n: usize, seed: u64) -> Result<PlantedInstance> {
    gen_planted_regular(n, 1, seed)
}

/// Planted n-cycle plus `matchings` edge-disjoint random perfect matchings,
/// giving a `(2 + matchings)`-regular Hamiltonian graph.
pub fn gen_planted_regular(n: usize, matchings: usize, seed: u64) -> Result<PlantedInstance> {
    check_planted(n)?;
    if matchings == 0 || matchings + 2 >= n {
        return Err(Error::InvalidParameters(format!("{matchings} matchings do not fit on {n} vertices")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cycle: Vec<Vertex> = (1..=n).collect();
    cycle.shuffle(&mut rng);
    let mut edges: Vec<Edge> = (0..n).map(|i| normalize(cycle[i], cycle[(i + 1) % n])).collect();
    let mut present: std::collections::HashSet<Edge> = edges.iter().copied().collect();

    let mut verts: Vec<Vertex> = (1..=n).collect();
    for _ in 0..matchings {
        let mut placed = false;
        for _ in 0..PAIRING_RETRIES * PAIRING_RESEEDS {
            verts.shuffle(&mut rng);
            let pairs: Vec<Edge> = verts.chunks_exact(2).map(|p| normalize(p[0], p[1])).collect();
            if pairs.iter().all(|e| !present.contains(e)) {
                present.extend(pairs.iter().copied());
                edges.extend(pairs);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::GenerationFailed(format!("no disjoint perfect matching found for n={n}")));
        }
    }
    let name = if matchings == 1 { format!("PC_{n}") } else { format!("PR{}_{n}", matchings + 2) };
    let graph = Graph::new(name, n, edges)?;
    PlantedInstance::new(graph, Tour::new(cycle)?)
}
