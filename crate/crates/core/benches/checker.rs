use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rado_lab::checker::find_mono_solution_batch;
use rado_lab::{find_mono_solution, Color, Coloring, EquationParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_colorings(count: usize, n: u64) -> Vec<Coloring> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    (0..count)
        .map(|_| Coloring::from_fn(n, |_| if rng.gen() { Color::Red } else { Color::Blue }))
        .collect()
}

fn single(c: &mut Criterion) {
    let mut group = c.benchmark_group("find_mono_solution");
    for (m, n) in [(3u32, 64u64), (5, 256), (9, 1024)] {
        let params = EquationParams::new(m, 1, 2).unwrap();
        // Blocks avoid solutions for longer than random colorings do.
        let x = rado_lab::coloring::lemma1_coloring(m, 1, 2).unwrap();
        let x = Coloring::from_fn(n, |v| x.get(v).unwrap_or(Color::Blue));
        group.bench_with_input(BenchmarkId::new("blocks", format!("m{m}_n{n}")), &x, |b, x| {
            b.iter(|| find_mono_solution(x, &params))
        });
    }
    group.finish();
}

fn batch(c: &mut Criterion) {
    let params = EquationParams::new(4, 3, 3).unwrap();
    let xs = random_colorings(512, 96);
    let max = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut group = c.benchmark_group("batch_512_n96");
    group.throughput(Throughput::Elements(xs.len() as u64));
    let mut counts = vec![1];
    if rado_lab::parallel_enabled() {
        counts.push(max.max(4));
    }
    for threads in counts {
        group.bench_with_input(BenchmarkId::from_parameter(threads), &threads, |b, &t| {
            b.iter(|| find_mono_solution_batch(&xs, &params, t))
        });
    }
    group.finish();
}

criterion_group!(benches, single, batch);
criterion_main!(benches);
