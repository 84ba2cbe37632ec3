use criterion::{criterion_group, criterion_main, Criterion};

use dsusy::par;
use dsusy::scenarios::builtin;
use dsusy::suites::generator_derivations;
use dsusy::superfields::Engine;

/// Operator reconstruction of every generator bracket on the D = 3 Killing
/// background, once through the rayon map and once in sequence.
fn operator_brackets(c: &mut Criterion) {
    let sc = builtin("flat-d3-killing", 0).expect("built-in");
    let bg = &sc.background;
    let engine = Engine::new(bg);
    let gens = generator_derivations(bg.dim(), bg.spinor_dim(), true);
    let pairs: Vec<(usize, usize)> = (0..gens.len())
        .flat_map(|a| (a..gens.len()).map(move |b| (a, b)))
        .collect();
    let work = |&(a, b): &(usize, usize)| {
        engine
            .bracket_operator(&gens[a], &gens[b], 2, 4)
            .expect("flat-type background")
    };

    let mut group = c.benchmark_group("operator-brackets");
    group.sample_size(10);
    group.bench_function(
        if par::is_parallel() {
            "rayon"
        } else {
            "map (parallel feature off)"
        },
        |b| b.iter(|| par::map(&pairs, work)),
    );
    group.bench_function("sequential", |b| {
        b.iter(|| par::sequential_map(&pairs, work))
    });
    group.finish();
}

criterion_group!(benches, operator_brackets);
criterion_main!(benches);
