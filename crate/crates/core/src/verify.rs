//! Desk-scale verification suites. Each suite returns a structured report with one row per
//! checked case; the CLI and the acceptance tests share them.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::asymptotics::{
    asympt_1f1, asympt_2f1, kempf_normalized, log_mittag_leffler_asympt, rank1_kempf_coeffs,
    rank1_kempf_coeffs_f64, tyz_bounded_leading,
};
use crate::cone_measures::{log_conformal_volume, log_peirce_volume};
use crate::error::{Error, Result};
use crate::hyper_series::{hyper_pfq, mittag_leffler, ScaledSum, SeriesControl};
use crate::jack_poly::{log_fock_factor, pieri_row, DiagonalPoint, JackEngine, PointDomain};
use crate::jordan_core::{
    classified_table, dim_full_exact, log_gindikin_gamma_scalar, partitions_of, partitions_up_to,
    pochhammer_partition, JordanType, LogValue, Partition,
};
use crate::kepler_kernels::{
    bounded_threshold, kernel_coefficient_direct, kernel_coefficient_spectral, moment, moment_quadrature,
    KernelSpec,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub case: String,
    pub measured: f64,
    pub bound: f64,
    pub passed: bool,
    /// Extra numbers worth keeping next to the row.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub data: BTreeMap<String, f64>,
}

impl ReportRow {
    fn at_most(case: impl Into<String>, measured: f64, bound: f64) -> Self {
        ReportRow { case: case.into(), measured, bound, passed: measured <= bound, data: BTreeMap::new() }
    }

    fn with(mut self, key: &str, v: f64) -> Self {
        self.data.insert(key.into(), v);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub suite: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub rows: Vec<ReportRow>,
}

impl CriterionReport {
    fn new(id: u8, rows: Vec<ReportRow>) -> Self {
        let (_, suite, title) = SUITES[id as usize - 1];
        let passed = !rows.is_empty() && rows.iter().all(|r| r.passed);
        CriterionReport { id, suite, title, passed, rows }
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| !r.passed)
    }

    /// The passing row closest to its bound, or a failing row if there is one.
    pub fn worst(&self) -> Option<&ReportRow> {
        let key = |r: &ReportRow| match (r.passed, r.bound) {
            (false, _) => f64::INFINITY,
            (true, b) if b < 0.0 => b / r.measured,
            (true, b) if b > 0.0 => r.measured / b,
            (true, _) => r.measured,
        };
        self.rows.iter().max_by(|a, b| key(a).total_cmp(&key(b)))
    }
}

pub const SUITES: [(u8, &str, &str); 12] = [
    (1, "gamma-identities", "Peirce volume identity chains"),
    (2, "fock", "Fock expansion of the exponential"),
    (3, "binomial", "Binomial theorem"),
    (4, "dimensions", "Dimension sums and spin-factor harmonics"),
    (5, "kernel-spectral", "Kernel coefficients, direct vs spectral"),
    (6, "moments", "Moments, closed form vs quadrature"),
    (7, "asympt-1f1", "Large-argument 1F1"),
    (8, "asympt-2f1", "Large-weight 2F1"),
    (9, "kempf", "Rank-one Kempf/TYZ coefficients"),
    (10, "tyz-bounded", "Bounded TYZ leading order"),
    (11, "mittag-leffler", "Mittag-Leffler function"),
    (12, "pieri", "Pieri coefficients"),
];

pub fn suite_names() -> impl Iterator<Item = &'static str> {
    SUITES.iter().map(|s| s.1)
}

pub fn run_suite(name: &str) -> Result<CriterionReport> {
    let id = SUITES
        .iter()
        .find(|s| s.1 == name || s.0.to_string() == name)
        .map(|s| s.0)
        .ok_or_else(|| Error::Parameter(format!("unknown suite '{name}'")))?;
    run_criterion(id)
}

pub fn run_criterion(id: u8) -> Result<CriterionReport> {
    let rows = match id {
        1 => gamma_identities()?,
        2 => fock()?,
        3 => binomial()?,
        4 => dimensions()?,
        5 => kernel_spectral()?,
        6 => moments()?,
        7 => asympt_1f1_suite()?,
        8 => asympt_2f1_suite()?,
        9 => kempf()?,
        10 => tyz_bounded()?,
        11 => mittag_leffler_suite()?,
        12 => pieri()?,
        _ => return Err(Error::Parameter(format!("no criterion {id}"))),
    };
    Ok(CriterionReport::new(id, rows))
}

fn ty(name: &str) -> JordanType {
    JordanType::from_name(name).expect("built-in type name")
}

fn free(t: &[f64]) -> Result<DiagonalPoint> {
    DiagonalPoint::new(t.to_vec(), PointDomain::Free)
}

/// `|a/b - 1|` from log forms.
fn rel(a: LogValue, b: LogValue) -> f64 {
    if a.sign != b.sign {
        return f64::INFINITY;
    }
    (a.log_abs - b.log_abs).exp_m1().abs()
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Degree shells `sum_{|mu|=k} coeff(mu) E^mu(t)` for `k <= max`, exactly `max + 1` of them.
fn shells<F>(t: &[f64], jt: &JordanType, max: u32, mut coeff: F) -> Result<Vec<LogValue>>
where
    F: FnMut(&Partition) -> Result<LogValue>,
{
    let mut table = JackEngine::global().table(t, jt.alpha())?;
    let mut out = Vec::new();
    for k in 0..=max {
        table.extend_to(k)?;
        let mut s = ScaledSum::new();
        for mu in partitions_of(k, t.len()) {
            let c = coeff(&mu)?;
            if !c.is_zero() {
                s.add(c * log_fock_factor(&mu, jt)? * table.log_phi(&mu, jt.r));
            }
        }
        out.push(s.value());
    }
    Ok(out)
}

fn lg(x: f64) -> f64 {
    libm::lgamma(x)
}

fn gg(rank: usize, a: f64, x: f64) -> Result<f64> {
    if rank == 0 {
        return Ok(0.0);
    }
    Ok(log_gindikin_gamma_scalar(rank, a, x)?.log_abs)
}

/// Reduced conformal volume of `C^{m x n}` (zero-dimensional when either side vanishes).
fn conf_full(m: usize, n: usize) -> Result<f64> {
    let (lo, hi) = (m.min(n), m.max(n));
    if lo == 0 {
        return Ok(0.0);
    }
    log_conformal_volume(&JordanType::new(lo, 2.0, (hi - lo) as f64)?)
}

fn chain_row(case: String, chain: &[f64]) -> ReportRow {
    let scale = chain[0].abs().max(1.0);
    let dev = chain.iter().map(|v| (v - chain[0]).abs() / scale).fold(0.0, f64::max);
    ReportRow::at_most(case, dev, 1e-10).with("log_volume", chain[0])
}

fn gamma_identities() -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    let ln2 = 2f64.ln();
    for r in 2..=8usize {
        let jt = JordanType::new(r, 1.0, 0.0)?;
        let rf = r as f64;
        for ell in 1..r {
            let l = ell as f64;
            let pre = l * (rf - l) * ln2;
            let products: f64 = (1..=ell)
                .map(|i| {
                    let h = 0.5 * (i as f64 - 1.0);
                    lg(0.5 * (l + 1.0) - h) + lg(0.5 * l - h) - lg(0.5 * (rf + 1.0) - h) - lg(0.5 * rf - h)
                })
                .sum();
            let chain = [
                log_peirce_volume(&jt, ell)?,
                gg(ell, 1.0, 0.5 * (l + 1.0))? + gg(ell, 1.0, 0.5 * l)?
                    - gg(ell, 1.0, 0.5 * (rf + 1.0))?
                    - gg(ell, 1.0, 0.5 * rf)?,
                products,
                pre + (1..=ell).map(|i| lg(l + 1.0 - i as f64) - lg(rf + 1.0 - i as f64)).sum::<f64>(),
                pre + gg(ell, 2.0, l)? - gg(ell, 2.0, rf)?,
                pre + gg(r - ell, 2.0, rf - l)? - gg(r - ell, 2.0, rf)?,
                pre + conf_full(ell, r - ell)?,
            ];
            rows.push(chain_row(format!("sym:{r} ell={ell}"), &chain));
        }
    }
    for r in 1..=8usize {
        for s in r..=8usize {
            let jt = JordanType::new(r, 2.0, (s - r) as f64)?;
            let (rf, sf) = (r as f64, s as f64);
            for ell in 1..=r {
                let l = ell as f64;
                let chain = [
                    log_peirce_volume(&jt, ell)?,
                    2.0 * gg(ell, 2.0, l)? - gg(ell, 2.0, sf)? - gg(ell, 2.0, rf)?,
                    gg(ell, 2.0, l)? - gg(ell, 2.0, sf)? + gg(r - ell, 2.0, rf - l)? - gg(r - ell, 2.0, rf)?,
                    gg(s - ell, 2.0, sf - l)? - gg(s - ell, 2.0, sf)? + gg(r - ell, 2.0, rf - l)?
                        - gg(r - ell, 2.0, rf)?,
                    conf_full(ell, s - ell)? + conf_full(ell, r - ell)?,
                ];
                rows.push(chain_row(format!("full:{r},{s} ell={ell}"), &chain));
            }
        }
    }
    for n in 4..=12usize {
        let (r, eps) = (n / 2, n % 2);
        let jt = JordanType::new(r, 4.0, 2.0 * eps as f64)?;
        let (rf, ef, nf) = (r as f64, eps as f64, n as f64);
        for ell in 1..=r {
            let l = ell as f64;
            let chain = [
                log_peirce_volume(&jt, ell)?,
                gg(ell, 4.0, 2.0 * l - 1.0)? + gg(ell, 4.0, 2.0 * l)?
                    - gg(ell, 4.0, 2.0 * rf - 1.0 + 2.0 * ef)?
                    - gg(ell, 4.0, 2.0 * rf)?,
                (1..=ell)
                    .map(|i| {
                        let h = 2.0 * (i as f64 - 1.0);
                        lg(2.0 * l - 1.0 - h) + lg(2.0 * l - h) - lg(2.0 * rf - 1.0 + 2.0 * ef - h) - lg(2.0 * rf - h)
                    })
                    .sum(),
                (1..=2 * ell).map(|j| lg(2.0 * l + 1.0 - j as f64) - lg(2.0 * rf + ef + 1.0 - j as f64)).sum(),
                gg(2 * ell, 2.0, 2.0 * l)? - gg(2 * ell, 2.0, nf)?,
                gg(n - 2 * ell, 2.0, nf - 2.0 * l)? - gg(n - 2 * ell, 2.0, nf)?,
                conf_full(2 * ell, n - 2 * ell)?,
            ];
            rows.push(chain_row(format!("asym:{n} ell={ell}"), &chain));
        }
    }
    for d in 5..=16usize {
        let df = d as f64;
        let jt = JordanType::new(2, df - 2.0, 0.0)?;
        let chain = [
            log_peirce_volume(&jt, 1)?,
            gg(1, df - 2.0, 1.0)? + gg(1, df - 2.0, 0.5 * df - 1.0)? - gg(1, df - 2.0, 0.5 * df)? - gg(1, df - 2.0, df - 2.0)?,
            lg(1.0) + lg(0.5 * df - 1.0) - lg(0.5 * df) - lg(df - 2.0),
            gg(2, df - 4.0, 0.5 * df - 1.0)? - gg(2, df - 4.0, df - 2.0)?,
            log_conformal_volume(&JordanType::new(2, df - 4.0, 0.0)?)?,
        ];
        rows.push(chain_row(format!("spin:{d} ell=1"), &chain));
        rows.push(chain_row(format!("spin:{d} ell=2"), &[log_peirce_volume(&jt, 2)?, 0.0]));
    }
    let e16 = ty("exc:16");
    rows.push(chain_row(
        "exc:16 ell=1".into(),
        &[
            log_peirce_volume(&e16, 1)?,
            gg(1, 6.0, 3.0)? + gg(1, 6.0, 1.0)? - gg(1, 6.0, 8.0)? - gg(1, 6.0, 6.0)?,
            lg(3.0) + lg(1.0) - lg(8.0) - lg(6.0),
            gg(2, 4.0, 3.0)? - gg(2, 4.0, 8.0)?,
            log_conformal_volume(&ty("asym:5"))?,
        ],
    ));
    rows.push(chain_row(
        "exc:16 ell=2".into(),
        &[
            log_peirce_volume(&e16, 2)?,
            gg(2, 6.0, 4.0)? + gg(2, 6.0, 6.0)? - gg(2, 6.0, 8.0)? - gg(2, 6.0, 6.0)?,
            gg(2, 6.0, 4.0)? - gg(2, 6.0, 8.0)?,
            log_conformal_volume(&ty("spin:8"))?,
        ],
    ));
    let e27 = ty("exc:27");
    let tail = [
        lg(1.0) + lg(4.0) - lg(9.0) - lg(12.0),
        gg(2, 6.0, 4.0)? - gg(2, 6.0, 12.0)?,
        log_conformal_volume(&e16)?,
    ];
    let first = [
        gg(1, 8.0, 1.0)? + gg(1, 8.0, 4.0)? - gg(1, 8.0, 9.0)? - gg(1, 8.0, 12.0)?,
        gg(2, 8.0, 5.0)? + gg(2, 8.0, 8.0)? - gg(2, 8.0, 9.0)? - gg(2, 8.0, 12.0)?,
    ];
    for ell in 1..=2 {
        let mut chain = vec![log_peirce_volume(&e27, ell)?, first[ell - 1]];
        chain.extend_from_slice(&tail);
        rows.push(chain_row(format!("exc:27 ell={ell}"), &chain));
    }
    Ok(rows)
}

fn grid(values: &[f64], r: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![vec![]];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|p| {
                values.iter().filter_map(move |&v| {
                    if p.last().is_some_and(|&l| v > l) {
                        return None;
                    }
                    let mut q = p.clone();
                    q.push(v);
                    Some(q)
                })
            })
            .collect();
    }
    out
}

fn fmt_point(t: &[f64]) -> String {
    let parts: Vec<String> = t.iter().map(|v| format!("{v}")).collect();
    format!("({})", parts.join(","))
}

const FOCK_TYPES: [&str; 8] = ["r1", "sym:2", "full:2,2", "asym:4", "full:2,3", "sym:3", "full:3,3", "asym:6"];

fn named(name: &str) -> Result<JordanType> {
    if name == "r1" {
        JordanType::new(1, 1.0, 0.0)
    } else {
        JordanType::from_name(name)
    }
}

fn fock() -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for name in FOCK_TYPES {
        let jt = named(name)?;
        for t in grid(&[1.9, 1.1, 0.3], jt.r) {
            let sh = shells(&t, &jt, 20, |_| Ok(LogValue::ONE))?;
            let tr: f64 = t.iter().sum();
            let mut worst = 0.0f64;
            for (k, s) in sh.iter().enumerate() {
                let want = LogValue::exp(k as f64 * tr.ln() - lg(k as f64 + 1.0));
                worst = worst.max(rel(*s, want));
            }
            rows.push(ReportRow::at_most(format!("degree {name} t={}", fmt_point(&t)), worst, 1e-10));
            let mut sum = ScaledSum::new();
            sh.iter().for_each(|s| sum.add(*s));
            rows.push(
                ReportRow::at_most(format!("trunc20 {name} t={}", fmt_point(&t)), rel(sum.value(), LogValue::exp(tr)), 1e-8)
                    .with("sum_t", tr),
            );
        }
    }
    Ok(rows)
}

fn binomial() -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for name in ["r1", "sym:2", "full:2,2", "asym:4", "sym:3", "full:3,3", "asym:6", "exc:27"] {
        let jt = named(name)?;
        let dr = jt.d_over_r();
        for shift in [-0.5, 0.7, 2.3] {
            let lambda = dr + shift;
            for t in grid(&[0.5, 0.35, 0.1], jt.r) {
                let sh = shells(&t, &jt, 30, |mu| pochhammer_partition(dr - lambda, mu, jt.a, jt.r))?;
                let mut sum = ScaledSum::new();
                sh.iter().for_each(|s| sum.add(*s));
                let want = LogValue::exp(shift * t.iter().map(|x| (1.0 - x).ln()).sum::<f64>());
                rows.push(ReportRow::at_most(
                    format!("{name} lambda-d/r={shift} t={}", fmt_point(&t)),
                    rel(sum.value(), want),
                    1e-8,
                ));
            }
        }
    }
    Ok(rows)
}

fn binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Dimension of degree-`m` harmonic polynomials in `n >= 2` variables.
pub fn harmonic_dimension(n: u64, m: u64) -> BigInt {
    if n == 2 {
        return BigInt::from(if m == 0 { 1 } else { 2 });
    }
    BigInt::from(2 * m + n - 2) * factorial(m + n - 3) / (factorial(m) * factorial(n - 2))
}

fn dimensions() -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for e in classified_table() {
        let jt = JordanType::from_name(&e.name)?;
        let d = jt.d().round() as u64;
        if d > 16 {
            continue;
        }
        let mut bad = 0;
        for k in 0..=8u32 {
            let mut total = BigRational::zero();
            for mu in partitions_of(k, jt.r) {
                total += dim_full_exact(&mu, &jt)?;
            }
            if total != BigRational::from_integer(binom(d + k as u64 - 1, k as u64)) {
                bad += 1;
            }
        }
        rows.push(ReportRow::at_most(format!("{} sum_k, k<=8", e.name), bad as f64, 0.0));
    }
    for n in 3..=16u64 {
        let jt = JordanType::from_name(&format!("spin:{n}"))?;
        let mut bad = 0;
        for m in 0..=10u32 {
            let dm = dim_full_exact(&Partition::new(vec![m])?, &jt)?;
            if dm != BigRational::from_integer(harmonic_dimension(n, m as u64)) {
                bad += 1;
            }
        }
        rows.push(ReportRow::at_most(format!("spin:{n} d_(m) vs harmonics, m<=10"), bad as f64, 0.0));
    }
    Ok(rows)
}

const KERNEL_PAIRS: [(&str, usize); 10] = [
    ("sym:3", 1),
    ("sym:3", 2),
    ("full:2,3", 1),
    ("full:2,3", 2),
    ("spin:5", 1),
    ("asym:6", 2),
    ("exc:27", 1),
    ("exc:27", 2),
    ("exc:16", 1),
    ("exc:16", 2),
];

fn kernel_spectral() -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for (name, ell) in KERNEL_PAIRS {
        let jt = ty(name);
        let specs = [
            ("flat lambda=1", KernelSpec::flat(&jt, ell, 1.0, 2.5)?),
            ("bounded", KernelSpec::bounded(&jt, ell, bounded_threshold(&jt, ell)? + 2.5)?),
        ];
        for (label, spec) in specs {
            let mut worst = 0.0f64;
            for mu in partitions_up_to(12, ell) {
                let a = kernel_coefficient_direct(&spec, &mu)?;
                let b = kernel_coefficient_spectral(&spec, &mu)?;
                worst = worst.max(rel(a, b));
            }
            rows.push(ReportRow::at_most(format!("{name} ell={ell} {label}, |mu|<=12"), worst, 1e-10));
        }
    }
    Ok(rows)
}

fn moments() -> Result<Vec<ReportRow>> {
    let cases: Vec<(String, KernelSpec, f64)> = vec![
        ("spin:5 ell=1 flat lambda=1.5 nu=2".into(), KernelSpec::flat(&ty("spin:5"), 1, 1.5, 2.0)?, 1e-6),
        ("sym:3 ell=1 bounded nu=6".into(), KernelSpec::bounded(&ty("sym:3"), 1, 6.0)?, 1e-6),
        ("full:2,3 ell=1 flat lambda=0.7 nu=1.3".into(), KernelSpec::flat(&ty("full:2,3"), 1, 0.7, 1.3)?, 1e-6),
        ("sym:3 ell=2 flat lambda=1 nu=1.5".into(), KernelSpec::flat(&ty("sym:3"), 2, 1.0, 1.5)?, 1e-4),
        ("sym:3 ell=2 bounded nu=7".into(), KernelSpec::bounded(&ty("sym:3"), 2, 7.0)?, 1e-4),
        ("full:3,3 ell=2 bounded nu=9".into(), KernelSpec::bounded(&ty("full:3,3"), 2, 9.0)?, 1e-4),
        ("full:2,3 ell=2 flat lambda=2 nu=1".into(), KernelSpec::flat(&ty("full:2,3"), 2, 2.0, 1.0)?, 1e-4),
    ];
    let mut rows = Vec::new();
    for (label, spec, tol) in cases {
        let s0 = moment(&spec, &Partition::empty())?;
        let mut worst = 0.0f64;
        for mu in partitions_up_to(4, spec.rank.ell) {
            let formula = (moment(&spec, &mu)? / s0).to_f64();
            let quad = moment_quadrature(&spec, &mu)?;
            worst = worst.max((quad / formula - 1.0).abs());
        }
        rows.push(ReportRow::at_most(format!("{label}, |mu|<=4"), worst, tol));
    }
    Ok(rows)
}

const SCALES: [f64; 4] = [10.0, 20.0, 40.0, 80.0];

fn asympt_1f1_suite() -> Result<Vec<ReportRow>> {
    let cases = [("r1", 1.7, 3.2, vec![1.0]), ("sym:2", 1.8, 3.4, vec![1.0, 0.6]), ("full:2,2", 2.3, 3.9, vec![1.0, 0.6])];
    let mut rows = Vec::new();
    for (name, lambda, beta, dir) in cases {
        let jt = named(name)?;
        let mut errs = vec![Vec::new(); 3];
        for s in SCALES {
            let t = free(&dir.iter().map(|x| x * s).collect::<Vec<_>>())?;
            let lhs = converged(hyper_pfq(&[lambda], &[beta], &t, &jt, &SeriesControl::with_max_degree(2000))?)?;
            let lead = asympt_1f1(lambda, beta, &t, &jt, 0)?.log_value;
            for (k, e) in errs.iter_mut().enumerate() {
                let approx = asympt_1f1(lambda, beta, &t, &jt, k as u32)?.log_value;
                e.push((lhs.sub(approx) / lead).abs().to_f64());
            }
        }
        for (k, e) in errs.iter().enumerate() {
            let slope = loglog_slope(&SCALES, e);
            let mut row = ReportRow::at_most(format!("{name} slope order {k}"), slope, -(k as f64 + 0.7));
            for (s, v) in SCALES.iter().zip(e) {
                row = row.with(&format!("err s={s}"), *v);
            }
            rows.push(row);
        }
        let t = free(&dir.iter().map(|x| x * 80.0).collect::<Vec<_>>())?;
        let dr = jt.d_over_r();
        let lhs = converged(hyper_pfq(&[dr], &[beta], &t, &jt, &SeriesControl::with_max_degree(2000))?)?;
        let g = log_gindikin_gamma_scalar(jt.r, jt.a, dr)? / log_gindikin_gamma_scalar(jt.r, jt.a, beta)?;
        let rhs = LogValue::exp(t.t().iter().map(|x| x + (dr - beta) * x.ln()).sum());
        rows.push(ReportRow::at_most(format!("{name} lambda=d/r ratio at s=80"), rel(g * lhs, rhs), 1e-3));
    }
    Ok(rows)
}

fn converged(r: crate::hyper_series::SeriesResult) -> Result<LogValue> {
    if !r.converged {
        return Err(Error::Divergent(format!("reference series did not settle in {} degrees", r.degrees_used)));
    }
    Ok(r.log_value)
}

const WEIGHTS: [f64; 4] = [20.0, 40.0, 80.0, 160.0];

fn asympt_2f1_suite() -> Result<Vec<ReportRow>> {
    let cases = [("r1", 1.6, 2.9, vec![0.5]), ("sym:2", 1.9, 3.1, vec![0.5, 0.4]), ("full:2,2", 2.4, 3.3, vec![0.5, 0.4])];
    let mut rows = Vec::new();
    for (name, lambda, beta, y) in cases {
        let jt = named(name)?;
        let yp = free(&y)?;
        let (mut e0, mut e1) = (Vec::new(), Vec::new());
        for nu in WEIGHTS {
            let lhs = converged(hyper_pfq(&[lambda, nu], &[beta], &yp, &jt, &SeriesControl::with_max_degree(4000))?)?;
            e0.push(rel(lhs, asympt_2f1(lambda, beta, nu, &yp, &jt, 0)?.log_value));
            e1.push(rel(lhs, asympt_2f1(lambda, beta, nu, &yp, &jt, 1)?.log_value));
        }
        for i in 1..WEIGHTS.len() {
            let q = e0[i] / e0[i - 1];
            rows.push(ReportRow {
                case: format!("{name} err0 ratio nu {}->{}", WEIGHTS[i - 1], WEIGHTS[i]),
                measured: q,
                bound: 0.6,
                passed: (0.4..=0.6).contains(&q),
                data: BTreeMap::from([("err0".into(), e0[i]), ("err0_prev".into(), e0[i - 1])]),
            });
        }
        for (i, nu) in WEIGHTS.iter().enumerate() {
            rows.push(
                ReportRow::at_most(format!("{name} err1/err0 at nu={nu}"), e1[i] / e0[i], 0.2)
                    .with("err0", e0[i])
                    .with("err1", e1[i]),
            );
        }
    }
    Ok(rows)
}

/// Least-squares fit of `sum_{j<n} c_j x^j` through `(x, y)`.
fn poly_fit(xs: &[f64], ys: &[f64], n: usize) -> Result<Vec<f64>> {
    let m = DMatrix::from_fn(xs.len(), n, |i, j| xs[i].powi(j as i32));
    let v = DVector::from_column_slice(ys);
    let sol = m.svd(true, true).solve(&v, 1e-14).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(sol.iter().copied().collect())
}

fn kempf() -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    let lambdas = [Rational64::from(1), Rational64::from(2), Rational64::new(3, 2)];
    let mut bad = Vec::new();
    let mut count = 0;
    for e in classified_table() {
        let jt = JordanType::from_name(&e.name)?;
        if jt.p() > 12.0 {
            continue;
        }
        for lam in lambdas {
            count += 1;
            if !rank1_kempf_coeffs(&jt, lam)?[0].is_one() {
                bad.push(format!("{} lambda={lam}", e.name));
            }
        }
    }
    rows.push(ReportRow::at_most(format!("b_0 = 1 exactly ({count} type/lambda pairs, p<=12)"), bad.len() as f64, 0.0));
    let jt = ty("spin:6");
    let ts: Vec<f64> = (0..=15).map(|i| 0.5 + 0.1 * i as f64).collect();
    for lam in [1.0, 2.0] {
        let b = rank1_kempf_coeffs_f64(&jt, Rational64::from(lam as i64))?;
        let series = |x: f64| b.iter().enumerate().map(|(j, c)| c * x.powi(j as i32)).sum::<f64>();
        let (mut xs, mut ys, mut at160) = (Vec::new(), Vec::new(), Vec::new());
        for nu in [40.0, 80.0, 160.0] {
            for &t in &ts {
                let y = kempf_normalized(&jt, lam, nu, t)?.exp();
                let x = 1.0 / (nu * t.powf(lam));
                xs.push(x);
                ys.push(y);
                if nu == 160.0 {
                    at160.push((x, y));
                }
            }
        }
        let exact_res = at160.iter().map(|(x, y)| (y - series(*x)).abs()).fold(0.0, f64::max);
        rows.push(ReportRow::at_most(format!("spin:6 lambda={lam} residual with exact b_j, nu=160"), exact_res, 1e-3));
        let fit = poly_fit(&xs, &ys, b.len())?;
        let fitted = |x: f64| fit.iter().enumerate().map(|(j, c)| c * x.powi(j as i32)).sum::<f64>();
        let fit_res = at160.iter().map(|(x, y)| (y - fitted(*x)).abs()).fold(0.0, f64::max);
        let mut row = ReportRow::at_most(format!("spin:6 lambda={lam} least-squares fit residual, nu=160"), fit_res, 1e-3);
        for (j, (f, e)) in fit.iter().zip(&b).enumerate() {
            row = row.with(&format!("b{j} fit"), *f).with(&format!("b{j} exact"), *e);
        }
        rows.push(row);
    }
    Ok(rows)
}

fn tyz_bounded() -> Result<Vec<ReportRow>> {
    let nus = [50.0, 100.0, 200.0];
    let mut rows = Vec::new();
    for name in ["spin:5", "sym:2"] {
        let jt = ty(name);
        let spec = KernelSpec::bounded(&jt, 1, 50.0)?;
        for t in [0.3, 0.6] {
            let table = tyz_bounded_leading(&spec, &free(&[t])?, &nus)?;
            let devs: Vec<f64> = table.iter().map(|row| (row.ratio - 1.0).abs()).collect();
            let c = table.iter().zip(&devs).map(|(row, d)| row.nu * d).fold(0.0, f64::max);
            let mut row = ReportRow::at_most(format!("{name} t={t}: max nu|R-1|"), c, 10.0);
            for (tr, d) in table.iter().zip(&devs) {
                row = row.with(&format!("R({})", tr.nu), tr.ratio).with(&format!("|R-1| nu={}", tr.nu), *d);
            }
            rows.push(row);
            rows.push(ReportRow::at_most(format!("{name} t={t}: slope of |R-1|"), loglog_slope(&nus, &devs), -0.8));
        }
    }
    Ok(rows)
}

fn mittag_leffler_suite() -> Result<Vec<ReportRow>> {
    let ctl = SeriesControl::with_max_degree(2000);
    let mut rows = Vec::new();
    for s in [0.5, 5.0, 20.0, 100.0] {
        let e = mittag_leffler(1.0, 1.0, s, &ctl)?;
        rows.push(ReportRow::at_most(format!("E_(1,1)({s}) vs e^s"), rel(e.log_value, LogValue::exp(s)), 1e-13));
        let lead = log_mittag_leffler_asympt(1.0, 1.0, s)?;
        rows.push(ReportRow::at_most(format!("leading term at A=B=1, s={s}"), (lead.log_abs - s).abs(), 0.0));
    }
    let series = mittag_leffler(2.0, 1.0, 100.0, &ctl)?;
    let lead = log_mittag_leffler_asympt(2.0, 1.0, 100.0)?;
    rows.push(ReportRow::at_most("A=2, B=1, s=100 asymptotic ratio", rel(lead, series.log_value), 1e-3));
    let series = mittag_leffler(1.0, 2.0, 30.0, &ctl)?;
    let lead = log_mittag_leffler_asympt(1.0, 2.0, 30.0)?;
    rows.push(ReportRow::at_most("A=1, B=2, s=30 asymptotic ratio", rel(lead, series.log_value), 1e-12));
    Ok(rows)
}

fn pieri() -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for name in ["r1", "sym:2", "full:2,2", "spin:5", "sym:3", "full:3,3", "asym:6", "exc:27"] {
        let jt = named(name)?;
        let dr = jt.d_over_r();
        let mut worst = 0.0f64;
        for nu in partitions_up_to(6, jt.r) {
            let row = pieri_row(&nu, &jt)?;
            for gamma in [dr + 1.37, dr + 7.9] {
                let lhs = pochhammer_partition(gamma - 1.0, &nu, jt.a, jt.r)?.to_f64();
                let mut terms = Vec::new();
                for (mu, c) in &row {
                    terms.push(c * pochhammer_partition(gamma, mu, jt.a, jt.r)?.to_f64());
                }
                let scale = terms.iter().map(|x| x.abs()).fold(lhs.abs(), f64::max);
                worst = worst.max((lhs - terms.iter().sum::<f64>()).abs() / scale);
            }
        }
        rows.push(ReportRow::at_most(format!("{name} |nu|<=6, held-out gamma"), worst, 1e-10));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oracle_matches_binomial_difference() {
        for n in 3..=16u64 {
            for m in 0..=10u64 {
                let diff = binom(n + m - 1, m) - if m >= 2 { binom(n + m - 3, m - 2) } else { BigInt::zero() };
                assert_eq!(harmonic_dimension(n, m), diff, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn slope_of_power_law() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-2.5)).collect();
        assert!((loglog_slope(&xs, &ys) + 2.5).abs() < 1e-12);
    }

    #[test]
    fn ordered_grids() {
        assert_eq!(grid(&[2.0, 1.0], 2), vec![vec![2.0, 2.0], vec![2.0, 1.0], vec![1.0, 1.0]]);
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope").is_err());
        assert_eq!(suite_names().count(), 12);
    }
}
