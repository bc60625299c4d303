use asymlin::bilinear_ops::{bilin_norm, precompact_class, BilinearOp};
use asymlin::rational::{int, ratio, Matrix};
use asymlin::{AsymNorm, Caps, Exec};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn operator(d: usize) -> BilinearOp {
    let mut gens: Vec<Vec<_>> = (0..d).map(|i| (0..d).map(|j| int(if i == j { 2 } else { 0 })).collect()).collect();
    gens.push(vec![int(-1); d]);
    gens.extend((0..d).map(|i| (0..d).map(|j| int(if i == j { -1 } else { 1 })).collect()));
    let p = AsymNorm::new(d, gens).unwrap();
    let q = AsymNorm::l_inf(2);
    let tensor: Vec<Matrix> = (0..2)
        .map(|k| (0..d).map(|a| (0..d).map(|b| ratio((a * 3 + b * 5 + k * 7) as i64 % 9 - 4, 3)).collect()).collect())
        .collect();
    BilinearOp::new(tensor, p.clone(), p, q).unwrap()
}

fn bench(c: &mut Criterion) {
    let caps = Caps::default();
    let mut group = c.benchmark_group("bilin_norm");
    group.sample_size(10);
    for d in [2, 3] {
        let t = operator(d);
        for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
            group.bench_with_input(BenchmarkId::new(name, d), &t, |b, t| b.iter(|| bilin_norm(t, &caps, exec).unwrap()));
        }
    }
    group.finish();

    let q = AsymNorm::new(2, vec![vec![int(1), int(0)], vec![int(0), int(1)], vec![int(-1), int(-1)]]).unwrap();
    let skew = AsymNorm::new(1, vec![vec![int(2)], vec![int(-1)]]).unwrap();
    let t = BilinearOp::new(vec![vec![vec![ratio(3, 2)]], vec![vec![int(-1)]]], skew, AsymNorm::l_inf(1), q).unwrap();
    let mut group = c.benchmark_group("precompact_class");
    group.sample_size(10);
    for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        group.bench_function(name, |b| b.iter(|| precompact_class(&t, &ratio(1, 8), &caps, exec, 0).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
