//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

mod common;

use std::f64::consts::FRAC_PI_2;
use std::time::Instant;

use gkf_core::gaussian_volumes::{gamma, gamma_fd_oracle, gkf_predict, GaussSet};
use gkf_core::kinematics::{
    gkf_coefficient, p_chi, p_chi_sigma, p_sigma, p_tau, tube_volume_identity, KinematicTensor,
};
use gkf_core::lk_algebra::{abs_sigma, change_basis, Basis, ModelSet, ValuationVector};
use gkf_core::scalar_ring::{factorial, omega, rat, PiScalar, Rational};
use gkf_core::simulation::{
    accumulate, chi_intersection, estimate_lhs, kinematic_inequality_check, nu_convergence, pi_n_sweep,
    poincare_test, sample_pi_infinity, volume_fraction, Law, LinearMapSample, McConfig, RngStream,
};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use statrs::function::gamma::gamma_ur;

use common::{report, MeshLadder};

fn nu_identity(f: &mut Vec<String>) {
    let start = Instant::now();
    let mut bad = Vec::new();
    for n in 0..=40 {
        let from_table = p_chi(n).convert(Basis::Sigma, Basis::Sigma).expect("conversion");
        if from_table != p_chi_sigma(n) {
            bad.push(n);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        f,
        "1 nu identity",
        bad.is_empty() && secs < 10.0,
        format!("N = 0..=40 exact, mismatches {bad:?}, {secs:.2} s"),
    );
}

fn operator_consistency(f: &mut Vec<String>) {
    let mut bad = Vec::new();
    for n in 1..=40usize {
        for k in 0..=n {
            let lhs = p_tau(n, k).and_then(|t| t.convert(Basis::Sigma, Basis::Sigma)).expect("tau");
            let mut rhs = KinematicTensor::zero(n, Basis::Sigma, Basis::Sigma);
            rhs.add_assign(
                &p_sigma(n, n - k).expect("sigma"),
                &PiScalar::int_half_pow(4 * n as u64, k as i64),
            );
            if lhs != rhs {
                bad.push((n, k));
            }
        }
    }
    report(f, "2 tau/sigma operators", bad.is_empty(), format!("N ≤ 40, all k, mismatches {bad:?}"));
}

fn random_scalar(rng: &mut ChaCha8Rng) -> PiScalar {
    let q = rat(rng.random_range(-20..=20), rng.random_range(1..=9));
    let mut x = &PiScalar::from_rational(q) * &PiScalar::pi_half_pow(rng.random_range(-2..=2));
    if rng.random_bool(0.3) {
        x = &x * &PiScalar::sqrt_int(rng.random_range(2..=7));
    }
    if rng.random_bool(0.3) {
        x = &x + &PiScalar::from_rational(rat(rng.random_range(-5..=5), 1));
    }
    x
}

fn round_trips(f: &mut Vec<String>) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for n in [5usize, 10, 20, 40] {
        for from in Basis::ALL {
            for _ in 0..100 {
                let coeffs = (0..=n).map(|_| random_scalar(&mut rng)).collect();
                let v = ValuationVector::new(n, from, coeffs).expect("length");
                for to in Basis::ALL.into_iter().filter(|b| *b != from) {
                    let back = change_basis(&v, to).and_then(|w| change_basis(&w, from)).expect("convert");
                    checked += 1;
                    if back != v {
                        bad.push((n, from, to));
                    }
                }
            }
        }
    }
    report(
        f,
        "3 basis round trips",
        bad.is_empty(),
        format!("{checked} round trips, mismatches {}, {:.1} s", bad.len(), start.elapsed().as_secs_f64()),
    );
}

fn coefficient_bridge(f: &mut Vec<String>) {
    let mut bad = Vec::new();
    for k in 0..=20usize {
        // 2^{−k} (2π)^{k/2} / (k! ω_k), assembled separately
        let kk = k as i64;
        let num = &(&PiScalar::from_rational(Rational::new(1.into(), num_pow2(k)))
            * &PiScalar::int_half_pow(2, kk))
            * &PiScalar::pi_half_pow(kk);
        let den = omega(k as u64).scale(&Rational::from_integer(factorial(k as u64)));
        let lhs = num.div_monomial(&den).expect("monomial");
        if lhs != gkf_coefficient(k) {
            bad.push(k);
        }
    }
    report(f, "4 coefficient bridge", bad.is_empty(), format!("k ≤ 20 exact, mismatches {bad:?}"));
}

fn num_pow2(k: usize) -> num_bigint::BigInt {
    num_bigint::BigInt::from(1) << k
}

fn tube_identity(f: &mut Vec<String>) {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (n, d, s) in [(20usize, 2usize, 1.0), (30, 3, 0.8)] {
        for r in [0.2, 0.5] {
            let set = ModelSet::SubsphereTube { n, d, s };
            let t = tube_volume_identity(n, r, &set).expect("identity");
            worst = worst.max((t.lhs - t.rhs).abs() / t.lhs.abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        f,
        "5 tube identity",
        worst < 1e-8 && secs < 30.0,
        format!("max relative difference {worst:.3e}, {secs:.2} s"),
    );
}

fn gamma_oracle(f: &mut Vec<String>) {
    let mut sets: Vec<GaussSet> = [0.0, 1.0, 2.0].iter().map(|&u| GaussSet::HalfSpace { d: 1, u }).collect();
    sets.extend([(1, 1.0), (2, 1.0), (3, 2.0)].iter().map(|&(d, rho)| GaussSet::CenteredBall { d, rho }));
    let mut worst: f64 = 0.0;
    for set in &sets {
        let g = gamma(set, 4).expect("gamma");
        for k in 0..=4 {
            let fd = gamma_fd_oracle(set, k, 0.25).expect("oracle");
            worst = worst.max((fd - g.values[k]).abs());
        }
    }
    report(f, "6 gamma vs finite differences", worst < 1e-6, format!("max |difference| {worst:.3e}"));
}

fn theorem_chi(f: &mut Vec<String>) {
    let a = ModelSet::UnitSphere { n: 2 };
    let mut ok = true;
    let mut parts = Vec::new();
    for (i, u) in [0.0, 0.5, 1.0, 2.0].into_iter().enumerate() {
        let d = GaussSet::HalfSpace { d: 1, u };
        let mut cfg = McConfig::new(100_000, 7);
        cfg.stream = RngStream::new(7, i as u64);
        let r = estimate_lhs(&a, &d, 0, Law::PiInfinity, &cfg).expect("estimate");
        let predicted = gkf_predict(&a, &d, 0).expect("predict").to_f64();
        let oracle = if u == 0.0 { 1.0 } else { gamma_ur(1.5, u * u / 2.0) };
        let gap = (predicted - oracle).abs();
        ok &= r.z_score.abs() < 3.0 && gap < 1e-10;
        parts.push(format!("u={u}: z={:.2}, |pred−oracle|={gap:.1e}", r.z_score));
    }
    report(f, "7 Euler characteristic under Π_∞", ok, parts.join("; "));
}

fn theorem_volume(f: &mut Vec<String>) {
    let sets = [
        GaussSet::HalfSpace { d: 1, u: 0.0 },
        GaussSet::HalfSpace { d: 1, u: 1.0 },
        GaussSet::HalfSpace { d: 2, u: 2.0 },
        GaussSet::CenteredBall { d: 1, rho: 1.0 },
        GaussSet::CenteredBall { d: 2, rho: 1.0 },
        GaussSet::CenteredBall { d: 3, rho: 2.0 },
        GaussSet::Origin { d: 2 },
        GaussSet::FullSpace { d: 2 },
    ];
    let domains = [ModelSet::UnitSphere { n: 2 }, ModelSet::UnitCap { n: 3, theta: 1.1 }];
    let mut ok = true;
    let mut worst_z: f64 = 0.0;
    let mut count = 0;
    for (ia, a) in domains.iter().enumerate() {
        let n = a.unit_dim().expect("unit set");
        for (id, d) in sets.iter().enumerate() {
            let stream = RngStream::new(8, (10 * ia + id) as u64);
            let m = accumulate(100_000, stream, 1, |rng| {
                let fmap = sample_pi_infinity(n, d.dim(), rng).expect("sample");
                volume_fraction(a, d, &fmap, rng, 1).expect("fraction")
            });
            let g0 = gamma(d, 0).expect("gamma").values[0];
            let z = if m.stderr() > 0.0 {
                (m.mean() - g0) / m.stderr()
            } else if m.mean() == g0 {
                0.0
            } else {
                f64::INFINITY
            };
            ok &= z.abs() < 3.0;
            worst_z = worst_z.max(z.abs());
            count += 1;
        }
    }
    report(f, "8 volume fraction vs γ_0", ok, format!("{count} pairs, max |z| {worst_z:.2}"));
}

fn pi_n_limit(f: &mut Vec<String>) {
    let start = Instant::now();
    let a = ModelSet::UnitSphere { n: 2 };
    let d = GaussSet::CenteredBall { d: 2, rho: 1.0 };
    let cfg = McConfig::new(100_000, 9);
    let rows = pi_n_sweep(&a, &d, 0, &[50, 200, 1000], &cfg).expect("sweep");
    let inf = &rows[3].report;
    let dist: Vec<f64> = rows[..3].iter().map(|r| (r.report.estimate - inf.estimate).abs()).collect();
    let mut ok = true;
    for i in 1..3 {
        ok &= dist[i] <= dist[i - 1] || dist[i] <= rows[i].report.stderr;
    }
    let last = &rows[2].report;
    ok &= (last.estimate - inf.estimate).abs() <= 3.0 * (last.stderr + inf.stderr);
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 300.0;
    let summary: Vec<String> = rows
        .iter()
        .map(|r| {
            let label = match r.law {
                Law::PiN(n) => format!("N={n}"),
                Law::PiInfinity => "∞".to_string(),
            };
            format!("{label}: {:.4}±{:.4}", r.report.estimate, r.report.stderr)
        })
        .collect();
    report(f, "9 Π_N approaches Π_∞", ok, format!("{}, {secs:.1} s", summary.join(", ")));
}

fn poincare(f: &mut Vec<String>) {
    let single = poincare_test(1000, 1, 100_000, RngStream::new(10, 0), 1).expect("poincare");
    let mut ok = single.ks < 0.01;
    let average = |big_n: usize| -> f64 {
        (0..10)
            .map(|seed| {
                poincare_test(big_n, 1, 1_000_000, RngStream::new(1000 + seed, 0), 1).expect("poincare").ks
            })
            .sum::<f64>()
            / 10.0
    };
    let (low, high) = (average(100), average(10_000));
    ok &= low > high;
    report(
        f,
        "10 Poincaré limit",
        ok,
        format!("KS(N=1000) = {:.4}; mean KS N=100: {low:.5}, N=10^4: {high:.5}", single.ks),
    );
}

fn nu_limit(f: &mut Vec<String>) {
    let d = GaussSet::CenteredBall { d: 2, rho: 1.0 };
    let rows = nu_convergence(&d, 2, &[100, 400, 1600, 2000]).expect("nu");
    let mut ok = true;
    let mut parts = Vec::new();
    for k in 0..=2 {
        let r: Vec<_> = rows.iter().filter(|r| r.k == k).collect();
        let decreasing = r[1].abs_err < r[0].abs_err && r[2].abs_err < r[1].abs_err;
        let rel = r[3].rel_err;
        ok &= decreasing && rel < 0.05;
        parts.push(format!(
            "k={k}: errors {:.2e} {:.2e} {:.2e}, limit {:.4e}, relative error at 2000 {rel:.3e}",
            r[0].abs_err, r[1].abs_err, r[2].abs_err, r[3].limit
        ));
    }
    report(f, "11 nu convergence", ok, parts.join("; "));
}

fn kinematic_inequality(f: &mut Vec<String>) {
    let n = 20;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let max_r = FRAC_PI_2 * (n as f64).sqrt();
    let mut ok = true;
    let mut parts = Vec::new();
    let mut i = 0u64;
    while parts.len() < 10 {
        let c = ModelSet::GeodesicBall { n, r: rng.random_range(0.05..=max_r) };
        let d = ModelSet::GeodesicBall { n, r: rng.random_range(0.05..=max_r) };
        let k = rng.random_range(0..=n);
        // skip pairs whose mean is below what 10^5 rotations can resolve
        let (sc, sd) = (abs_sigma(&c).expect("sigma"), abs_sigma(&d).expect("sigma"));
        if 0.5 * (0..=k).map(|j| sc[j] * sd[k - j]).sum::<f64>() < 1e-3 {
            continue;
        }
        let r = kinematic_inequality_check(&c, &d, k, n, 100_000, RngStream::new(12, i), 1).expect("check");
        i += 1;
        ok &= r.holds;
        parts.push(format!("k={k}: {:.3e}≤{:.3e}", r.lhs, r.rhs));
    }
    report(f, "12 kinematic inequality", ok, parts.join(", "));
}

fn mesh_oracle(f: &mut Vec<String>) {
    let ladder = MeshLadder::new(7, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let a = ModelSet::UnitSphere { n: 2 };
    let mut mismatches = 0;
    for _ in 0..1000 {
        let dim = rng.random_range(1..=3);
        let rho: f64 = rng.random_range(0.2..2.5);
        let entries = DMatrix::from_fn(dim, 3, |_, _| rng.sample::<f64, _>(StandardNormal));
        let fmap = LinearMapSample { entries, origin: Law::PiInfinity };
        let quadratic = chi_intersection(&a, &GaussSet::CenteredBall { d: dim, rho }, &fmap).expect("chi");
        let mesh = ladder.chi(|x| fmap.apply(x).iter().map(|v| v * v).sum::<f64>() <= rho * rho);
        if mesh != Some(quadratic) {
            mismatches += 1;
        }
    }
    report(f, "13 mesh oracle", mismatches == 0, format!("1000 random maps, mismatches {mismatches}"));
}

fn main() {
    let mut failures = Vec::new();
    let start = Instant::now();
    nu_identity(&mut failures);
    operator_consistency(&mut failures);
    round_trips(&mut failures);
    coefficient_bridge(&mut failures);
    tube_identity(&mut failures);
    gamma_oracle(&mut failures);
    theorem_chi(&mut failures);
    theorem_volume(&mut failures);
    pi_n_limit(&mut failures);
    poincare(&mut failures);
    nu_limit(&mut failures);
    kinematic_inequality(&mut failures);
    mesh_oracle(&mut failures);
    println!("acceptance: {} of 13 passed in {:.1} s", 13 - failures.len(), start.elapsed().as_secs_f64());
    if !failures.is_empty() {
        println!("failed: {}", failures.join(", "));
        std::process::exit(1);
    }
}
