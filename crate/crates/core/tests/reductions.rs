mod common;

use hcpforge::reducer::{decode_hc, orientations, reduce_cnf_to_hcp, SIDES};
use hcpforge::solver::enumerate_hcs;
use hcpforge::{count_hc, CnfFormula, SolveBudget};
use rand::Rng;

use common::{cube_side_views, rng};

fn satisfiable(f: &CnfFormula) -> bool {
    (0u32..1 << f.num_vars()).any(|m| f.is_satisfied(&(0..f.num_vars()).map(|i| m >> i & 1 == 1).collect::<Vec<_>>()))
}

/// Random three-variable formulas: the reduced graph is Hamiltonian exactly
/// when the formula is satisfiable, and every cycle decodes to a model.
#[test]
fn three_variable_formulas() {
    let mut r = rng(7);
    let mut seen = [0; 2];
    for _ in 0..150 {
        let clauses: Vec<Vec<i32>> = (0..r.gen_range(1..=7))
            .map(|_| {
                (0..r.gen_range(1..=3))
                    .map(|_| {
                        let v = r.gen_range(1..=3);
                        if r.gen_bool(0.5) {
                            v
                        } else {
                            -v
                        }
                    })
                    .collect()
            })
            .collect();
        let f = CnfFormula::new(3, clauses).unwrap();
        let (g, cert) = reduce_cnf_to_hcp(&f);
        let sat = satisfiable(&f);
        seen[usize::from(sat)] += 1;
        assert_eq!(count_hc(&g, Some(1)).unwrap() > 0, sat, "{f:?}");
        for t in enumerate_hcs(&g, Some(20), &SolveBudget::unlimited()).unwrap() {
            assert!(f.is_satisfied(&decode_hc(&cert, &t).unwrap().assignment));
        }
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}

#[test]
fn dimacs_round_trip() {
    let f = CnfFormula::new(4, vec![vec![1, -2], vec![3], vec![-4, 2, 1]]).unwrap();
    let back = CnfFormula::parse_dimacs(&f.to_dimacs(), std::path::Path::new("f.cnf")).unwrap();
    assert_eq!(back, f);
}

#[test]
fn cube_orientations_are_the_rotations() {
    // Distinct faces make each orientation's side view unique.
    let cube = [1, 2, 3, 4, 5, 6];
    let mut got: Vec<[u8; 4]> = orientations().iter().map(|o| SIDES.map(|s| cube[o[s]])).collect();
    let mut want = cube_side_views(&cube);
    got.sort_unstable();
    want.sort_unstable();
    assert_eq!(got.len(), 24);
    assert_eq!(got, want);
}
