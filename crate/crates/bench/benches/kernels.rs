use criterion::{black_box, criterion_group, criterion_main, Criterion};
use eiscong::cohomology::h1_stabilized;
use eiscong::congruence::series_congruence_ideal;
use eiscong::cyclo::ideal_from_generators;
use eiscong::eisenstein::{default_precision, eisenstein_normalized};
use eiscong::reptheory::{oracle_max_congruence, predict_max_congruence};
use eiscong::{CyclotomicNumber, DirichletCharacter, LocalRing};

fn cyclotomic(c: &mut Criterion) {
    let x = CyclotomicNumber::from_int_poly(60, &[3, -1, 4, 1, -5, 9, 2, -6, 5, 3, -5, 8, 9, -7, 9, 3]);
    let y = CyclotomicNumber::from_int_poly(60, &[2, 7, -1, 8, 2, 8]);
    c.bench_function("cyclo_mul_n60", |b| b.iter(|| black_box(&x) * black_box(&y)));
    c.bench_function("cyclo_inverse_n60", |b| b.iter(|| black_box(&x).inverse().unwrap()));

    let gens = [
        CyclotomicNumber::from_int(20, 125),
        CyclotomicNumber::from_int_poly(20, &[1, -1]),
        CyclotomicNumber::from_int_poly(20, &[2, 0, 1]),
    ];
    c.bench_function("ideal_hnf_n20", |b| b.iter(|| ideal_from_generators(20, black_box(&gens)).unwrap()));

    let ring = LocalRing::new(20, 5, 12).unwrap();
    let z = CyclotomicNumber::from_int_poly(20, &[25, -5, 0, 1, 5]);
    c.bench_function("local_valuations_n20_p5", |b| b.iter(|| ring.valuations(black_box(&z))));
}

fn congruence(c: &mut Criterion) {
    let chi = DirichletCharacter::new(11, 5, &[1]).unwrap();
    let e = eisenstein_normalized(4, &chi, default_precision(4)).unwrap();
    c.bench_function("series_ideal_k4_chi11", |b| b.iter(|| series_congruence_ideal(black_box(&e.series), 5, 12).unwrap()));

    let chi = DirichletCharacter::new(25, 20, &[1]).unwrap();
    c.bench_function("predict_oracle_p5_cond25_k5", |b| {
        b.iter(|| {
            let pr = predict_max_congruence(5, black_box(&chi), 5).unwrap();
            let or = oracle_max_congruence(5, &chi, 5, 12).unwrap();
            (pr, or)
        })
    });

    let triv = DirichletCharacter::trivial(1);
    c.bench_function("h1_stabilized_k12_p5", |b| b.iter(|| h1_stabilized(12, black_box(&triv), 5, 8).unwrap()));
}

criterion_group!(benches, cyclotomic, congruence);
criterion_main!(benches);
