use criterion::{criterion_group, criterion_main, Criterion};
use looptop::annulus::{modulus, orthogonality_residual, Annulus, Circle};
use looptop::profile::{build_profile, verify_bounds, ProfileParams};
use num_complex::Complex64;

fn eccentric() -> Annulus {
    Annulus::new(
        Circle::new(Complex64::new(0.0, 0.0), 2.0).unwrap(),
        Circle::new(Complex64::new(0.4, 0.3), 0.6).unwrap(),
    )
    .unwrap()
}

fn annulus(c: &mut Criterion) {
    let ann = eccentric();
    c.bench_function("modulus", |b| b.iter(|| modulus(&ann).unwrap()));
    c.bench_function("orthogonality 1000 crossings", |b| {
        b.iter(|| orthogonality_residual(&ann, 1000).unwrap())
    });
}

fn profile(c: &mut Criterion) {
    let p = build_profile(ProfileParams::new(2.0, 0.1, 0.05)).unwrap();
    c.bench_function("profile bounds 10^4 samples", |b| b.iter(|| verify_bounds(&p, 10_000).unwrap()));
}

criterion_group!(benches, annulus, profile);
criterion_main!(benches);
