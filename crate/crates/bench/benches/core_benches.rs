use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use gkf_core::gaussian_volumes::{gamma, GaussSet};
use gkf_core::kinematics::NuTable;
use gkf_core::lk_algebra::{change_basis, sigma_values};
use gkf_core::simulation::{estimate_lhs, Law, McConfig};
use gkf_core::{Basis, ModelSet, PiScalar, ValuationVector};

fn basis_change(c: &mut Criterion) {
    let mut group = c.benchmark_group("change_basis");
    for n in [10usize, 40] {
        let coeffs = (0..=n).map(|i| PiScalar::from_int(i as i64 + 1)).collect();
        let v = ValuationVector::new(n, Basis::Mu, coeffs).unwrap();
        group.bench_with_input(BenchmarkId::new("mu_to_nu", n), &v, |b, v| {
            b.iter(|| change_basis(black_box(v), Basis::Nu).unwrap())
        });
    }
    group.finish();
}

fn nu_extract(c: &mut Criterion) {
    let mut group = c.benchmark_group("nu_table");
    for n in [10usize, 40] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| NuTable::extract(black_box(n)))
        });
    }
    group.finish();
}

fn set_sigma(c: &mut Criterion) {
    let tube = ModelSet::SubsphereTube { n: 1000, d: 3, s: 2.0 };
    c.bench_function("sigma_values/tube_1000", |b| b.iter(|| sigma_values(black_box(&tube)).unwrap()));
    let ball = GaussSet::CenteredBall { d: 3, rho: 1.5 };
    c.bench_function("gamma/ball_3_k8", |b| b.iter(|| gamma(black_box(&ball), 8).unwrap()));
}

fn monte_carlo(c: &mut Criterion) {
    let a = ModelSet::UnitSphere { n: 2 };
    let d = GaussSet::HalfSpace { d: 1, u: 1.0 };
    let config = McConfig::new(2_000, 5);
    let mut group = c.benchmark_group("estimate_lhs");
    group.sample_size(10);
    group.bench_function("chi_pi_infinity", |b| {
        b.iter(|| estimate_lhs(&a, &d, 0, Law::PiInfinity, black_box(&config)).unwrap())
    });
    group.bench_function("chi_pi_200", |b| {
        b.iter(|| estimate_lhs(&a, &d, 0, Law::PiN(200), black_box(&config)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, basis_change, nu_extract, set_sigma, monte_carlo);
criterion_main!(benches);
