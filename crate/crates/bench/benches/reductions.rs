use criterion::{criterion_group, criterion_main, Criterion};
use hcpforge::graph::Graph;
use hcpforge::reducer::{encode_nqueens, reduce_cnf_to_hcp, reduce_source, SourceProblem};
use hcpforge::solver::{find_hc_exact, SolveBudget};

fn reductions(c: &mut Criterion) {
    let q8 = encode_nqueens(8).unwrap();
    c.bench_function("reduce QN 8", |b| b.iter(|| reduce_cnf_to_hcp(&q8)));
    let (g, _) = reduce_source(&SourceProblem::Qn { n: 5 }).unwrap();
    c.bench_function("solve reduced QN 5", |b| b.iter(|| find_hc_exact(&g, &SolveBudget::unlimited())));
    let (k4, _) = reduce_source(&SourceProblem::col3(&Graph::complete(4).unwrap())).unwrap();
    c.bench_function("refute reduced COL3 K4", |b| b.iter(|| find_hc_exact(&k4, &SolveBudget::unlimited())));
}

criterion_group!(benches, reductions);
criterion_main!(benches);
