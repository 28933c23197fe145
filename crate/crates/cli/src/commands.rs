use serde_json::Value as Json;

use gkf_core::gaussian_volumes::{gamma, gamma_fd_oracle, gkf_predict, GaussSet};
use gkf_core::kinematics::{
    gkf_coefficient, nu_table, p_chi, p_chi_sigma, p_sigma, p_tau, tube_volume_identity, KinematicTensor,
};
use gkf_core::lk_algebra::{change_basis, euclidean_ball_mu, evaluate, EXACT_MAX_N};
use gkf_core::scalar_ring::{alpha, omega};
use gkf_core::simulation::{
    estimate_lhs, nu_convergence, pi_n_sweep, poincare_test, predict, sigma_counterpart, Gate, Law, McConfig,
    McReport, RngStream,
};
use gkf_core::{Basis, ModelSet, PiScalar, Rational, ValuationVector, Value};

use crate::descriptor::{parse_gauss_set, parse_unit_set};
use crate::error::CliError;
use crate::report::{int, num, text, Table};
use crate::{Command, ConvergeKind, Outcome, RunConfig, TableKind};

pub fn dispatch(cmd: &Command, config: &RunConfig) -> Result<Outcome, CliError> {
    match cmd {
        Command::Tables { what, max, n } => tables(*what, *max, *n).map(pass),
        Command::Convert { n, from, to, coeffs } => convert(*n, *from, *to, coeffs).map(pass),
        Command::Nu { n, k_max, set } => nu(*n, *k_max, set.as_deref()).map(pass),
        Command::Predict { a, d, m, big_n } => predict_cmd(a, d, *m, *big_n).map(pass),
        Command::Simulate { a, d, m, samples, big_n, points } => {
            simulate(a, d, *m, *samples, *big_n, *points, config)
        }
        Command::Converge { kind, a, d, m, k_max, dim, n_list, samples } => match kind {
            ConvergeKind::Nu => converge_nu(d.as_deref(), *k_max, n_list).map(pass),
            ConvergeKind::Poincare => converge_poincare(*dim, n_list, *samples, config),
            ConvergeKind::Pin => converge_pin(a.as_deref(), d.as_deref(), *m, n_list, *samples, config),
        },
        Command::Check { max_n } => check(*max_n),
    }
}

fn pass(table: Table) -> Outcome {
    Outcome { tables: vec![table], failed: false }
}

fn exact_cell(v: &Value) -> Json {
    match v {
        Value::Exact(x) => text(x.to_string()),
        Value::Float(_) => Json::Null,
    }
}

fn scalar_row(index: usize, x: &PiScalar) -> Vec<Json> {
    vec![int(index as i64), num(x.to_f64()), text(x.to_string())]
}

fn require<'a>(flag: &str, v: Option<&'a str>) -> Result<&'a str, CliError> {
    v.ok_or_else(|| CliError::Argument(format!("--{flag} is required here")))
}

fn tables(what: TableKind, max: usize, n: Option<usize>) -> Result<Table, CliError> {
    let mut t = match what {
        TableKind::Mu => Table::new("mu", &["k", "value", "exact"]),
        TableKind::Gkf => Table::new("gkf", &["k", "value", "exact"]),
        TableKind::Omega => Table::new("omega", &["n", "value", "exact"]),
        TableKind::Alpha => Table::new("alpha", &["n", "value", "exact"]),
    };
    match what {
        TableKind::Omega => (0..=max).for_each(|i| t.push(scalar_row(i, &omega(i as u64)))),
        TableKind::Alpha => (0..=max).for_each(|i| t.push(scalar_row(i, &alpha(i as u64)))),
        TableKind::Gkf => (0..=max).for_each(|k| t.push(scalar_row(k, &gkf_coefficient(k)))),
        TableKind::Mu => {
            let dim = n.unwrap_or(max);
            (0..=max.min(dim)).for_each(|k| t.push(scalar_row(k, &euclidean_ball_mu(dim, k))));
        }
    }
    Ok(t)
}

fn parse_rational(raw: &str) -> Result<Rational, CliError> {
    raw.trim()
        .parse::<Rational>()
        .map_err(|_| CliError::Argument(format!("coefficient `{raw}` is not a rational")))
}

fn convert(n: usize, from: Basis, to: Basis, coeffs: &[String]) -> Result<Table, CliError> {
    if n > EXACT_MAX_N {
        return Err(gkf_core::GkfError::ExactLimit { n, limit: EXACT_MAX_N }.into());
    }
    let c = coeffs
        .iter()
        .map(|s| parse_rational(s).map(PiScalar::from_rational))
        .collect::<Result<Vec<_>, _>>()?;
    let v = change_basis(&ValuationVector::new(n, from, c)?, to)?;
    let mut t = Table::new("coefficients", &["i", "value", "exact"]);
    for (i, x) in v.coeffs().iter().enumerate() {
        t.push(scalar_row(i, x));
    }
    Ok(t)
}

fn nu(n: usize, k_max: Option<usize>, set: Option<&str>) -> Result<Table, CliError> {
    let k_max = k_max.unwrap_or(n);
    if k_max > n {
        return Err(CliError::Argument(format!("--k-max {k_max} exceeds N = {n}")));
    }
    match set {
        None => {
            if n > EXACT_MAX_N {
                return Err(gkf_core::GkfError::ExactLimit { n, limit: EXACT_MAX_N }.into());
            }
            let table = nu_table(n);
            let mut t = Table::new("nu_table", &["k", "i", "value", "exact"]);
            for k in 0..=k_max {
                for (i, x) in table.row(k).iter().enumerate().take(k + 1) {
                    t.push(vec![int(k as i64), int(i as i64), num(x.to_f64()), text(x.to_string())]);
                }
            }
            Ok(t)
        }
        Some(desc) => {
            let d = parse_gauss_set(desc)?;
            let set = sigma_counterpart(&d, n)?;
            let mut t = Table::new("nu_values", &["k", "value", "exact"]);
            for k in 0..=k_max {
                let v = evaluate(&ValuationVector::unit(n, Basis::Nu, k), &set)?;
                t.push(vec![int(k as i64), num(v.to_f64()), exact_cell(&v)]);
            }
            Ok(t)
        }
    }
}

fn law_cells(law: Law) -> [Json; 2] {
    match law {
        Law::PiInfinity => [text("pi_infinity"), Json::Null],
        Law::PiN(n) => [text("pi_n"), int(n as i64)],
    }
}

fn predict_cmd(a: &str, d: &str, m: usize, big_n: Option<usize>) -> Result<Table, CliError> {
    let a = parse_unit_set(a)?;
    let d = parse_gauss_set(d)?;
    let mut t = Table::new("prediction", &["law", "big_n", "m", "value", "exact"]);
    let [law, n_cell] = law_cells(big_n.map_or(Law::PiInfinity, Law::PiN));
    let (value, exact) = match big_n {
        None => {
            let v = gkf_predict(&a, &d, m)?;
            (v.to_f64(), exact_cell(&v))
        }
        Some(n) => (predict(&a, &d, m, Law::PiN(n))?, Json::Null),
    };
    t.push(vec![law, n_cell, int(m as i64), num(value), exact]);
    Ok(t)
}

const MC_COLUMNS: [&str; 10] = [
    "law",
    "big_n",
    "estimate",
    "stderr",
    "n_samples",
    "prediction",
    "z_score",
    "seed",
    "stream_id",
    "status",
];

fn gate_name(g: Gate) -> &'static str {
    match g {
        Gate::Pass => "PASS",
        Gate::Warn => "WARN",
        Gate::Fail => "FAIL",
    }
}

fn mc_row(law: Law, r: &McReport) -> Vec<Json> {
    let [l, n] = law_cells(law);
    vec![
        l,
        n,
        num(r.estimate),
        num(r.stderr),
        int(r.n_samples as i64),
        num(r.prediction),
        num(r.z_score),
        Json::from(r.seed),
        Json::from(r.stream_id),
        text(gate_name(r.status)),
    ]
}

fn mc_config(samples: usize, points: usize, config: &RunConfig) -> McConfig {
    McConfig {
        n_samples: samples,
        stream: RngStream::new(config.seed, 0),
        workers: config.workers,
        points_per_draw: points,
    }
}

fn simulate(
    a: &str,
    d: &str,
    m: usize,
    samples: usize,
    big_n: Option<usize>,
    points: usize,
    config: &RunConfig,
) -> Result<Outcome, CliError> {
    let a = parse_unit_set(a)?;
    let d = parse_gauss_set(d)?;
    let law = big_n.map_or(Law::PiInfinity, Law::PiN);
    let report = estimate_lhs(&a, &d, m, law, &mc_config(samples, points, config))?;
    let mut t = Table::new("simulation", &MC_COLUMNS);
    t.push(mc_row(law, &report));
    Ok(Outcome { tables: vec![t], failed: report.status == Gate::Fail })
}

fn converge_nu(d: Option<&str>, k_max: usize, n_list: &[usize]) -> Result<Table, CliError> {
    let d = parse_gauss_set(require("d", d)?)?;
    let rows = nu_convergence(&d, k_max, n_list)?;
    let mut t = Table::new("nu_convergence", &["big_n", "k", "nu", "limit", "abs_err", "rel_err"]);
    for r in rows {
        t.push(vec![
            int(r.big_n as i64),
            int(r.k as i64),
            num(r.nu),
            num(r.limit),
            num(r.abs_err),
            num(r.rel_err),
        ]);
    }
    Ok(t)
}

fn converge_poincare(
    dim: usize,
    n_list: &[usize],
    samples: usize,
    config: &RunConfig,
) -> Result<Outcome, CliError> {
    let mut t = Table::new(
        "poincare",
        &["big_n", "d", "ks", "moment_estimate", "moment_stderr", "moment_prediction", "z_score", "status"],
    );
    let mut failed = false;
    for (i, &big_n) in n_list.iter().enumerate() {
        let r = poincare_test(big_n, dim, samples, RngStream::new(config.seed, i as u64), config.workers)?;
        let m = &r.second_moment;
        failed |= m.status == Gate::Fail;
        t.push(vec![
            int(big_n as i64),
            int(dim as i64),
            num(r.ks),
            num(m.estimate),
            num(m.stderr),
            num(m.prediction),
            num(m.z_score),
            text(gate_name(m.status)),
        ]);
    }
    Ok(Outcome { tables: vec![t], failed })
}

fn converge_pin(
    a: Option<&str>,
    d: Option<&str>,
    m: usize,
    n_list: &[usize],
    samples: usize,
    config: &RunConfig,
) -> Result<Outcome, CliError> {
    let a = parse_unit_set(require("a", a)?)?;
    let d = parse_gauss_set(require("d", d)?)?;
    let rows = pi_n_sweep(&a, &d, m, n_list, &mc_config(samples, 1, config))?;
    let mut t = Table::new("pi_n_sweep", &MC_COLUMNS);
    let mut failed = false;
    for row in &rows {
        failed |= row.report.status == Gate::Fail;
        t.push(mc_row(row.law, &row.report));
    }
    Ok(Outcome { tables: vec![t], failed })
}

/// A fixed vector with irrational and π-power entries, so conversions
/// exercise every monomial type.
fn probe_vector(n: usize, basis: Basis) -> ValuationVector {
    let coeffs = (0..=n)
        .map(|i| {
            let q = Rational::new((i as i64 % 7 - 3).into(), (i as i64 + 2).into());
            let mut x = &PiScalar::from_rational(q) * &PiScalar::pi_half_pow(i as i64 % 3 - 1);
            if i % 4 == 1 {
                x = &x + &PiScalar::sqrt_int(2 + i as u64 % 5);
            }
            x
        })
        .collect();
    ValuationVector::new(n, basis, coeffs).expect("length matches")
}

fn check(max_n: usize) -> Result<Outcome, CliError> {
    if !(1..=EXACT_MAX_N).contains(&max_n) {
        return Err(CliError::Argument(format!("--max-n must be in 1..={EXACT_MAX_N}")));
    }
    let mut t = Table::new("checks", &["check", "passed", "detail"]);
    let mut failed = false;
    let mut record = |name: &str, ok: bool, detail: String| {
        failed |= !ok;
        t.push(vec![text(name), Json::Bool(ok), text(detail)]);
    };

    let mut bad = Vec::new();
    let mut count = 0usize;
    for n in 1..=max_n {
        for from in Basis::ALL {
            let v = probe_vector(n, from);
            for to in Basis::ALL.into_iter().filter(|b| *b != from) {
                count += 1;
                let back = change_basis(&v, to).and_then(|w| change_basis(&w, from))?;
                if back != v {
                    bad.push(format!("N={n} {}->{}", from.name(), to.name()));
                }
            }
        }
    }
    record("basis_round_trips", bad.is_empty(), format!("{count} round trips, failures {bad:?}"));

    let bad: Vec<usize> = (0..=max_n)
        .filter(|&n| p_chi(n).convert(Basis::Sigma, Basis::Sigma).map_or(true, |x| x != p_chi_sigma(n)))
        .collect();
    record("nu_identity", bad.is_empty(), format!("N = 0..={max_n}, failures {bad:?}"));

    let mut bad = Vec::new();
    for n in 1..=max_n {
        for k in 0..=n {
            let lhs = p_tau(n, k)?.convert(Basis::Sigma, Basis::Sigma)?;
            let mut rhs = KinematicTensor::zero(n, Basis::Sigma, Basis::Sigma);
            rhs.add_assign(&p_sigma(n, n - k)?, &PiScalar::int_half_pow(4 * n as u64, k as i64));
            if lhs != rhs {
                bad.push((n, k));
            }
        }
    }
    record("tau_sigma_operators", bad.is_empty(), format!("N = 1..={max_n}, failures {bad:?}"));

    let mut worst: f64 = 0.0;
    for (n, d, s, r) in [(20usize, 2usize, 1.0, 0.2), (20, 2, 1.0, 0.5), (30, 3, 0.8, 0.2)] {
        let id = tube_volume_identity(n, r, &ModelSet::SubsphereTube { n, d, s })?;
        worst = worst.max((id.lhs - id.rhs).abs() / id.lhs.abs());
    }
    record("tube_identity", worst < 1e-8, format!("max relative difference {worst:.3e}"));

    let mut sets: Vec<GaussSet> = [0.0, 1.0, 2.0].iter().map(|&u| GaussSet::HalfSpace { d: 1, u }).collect();
    sets.extend([(1, 1.0), (2, 1.0), (3, 2.0)].iter().map(|&(d, rho)| GaussSet::CenteredBall { d, rho }));
    let mut worst: f64 = 0.0;
    for set in &sets {
        let g = gamma(set, 4)?;
        for k in 0..=4 {
            worst = worst.max((gamma_fd_oracle(set, k, 0.25)? - g.values[k]).abs());
        }
    }
    record("gamma_finite_differences", worst < 1e-6, format!("max |difference| {worst:.3e}"));

    Ok(Outcome { tables: vec![t], failed })
}
