//! Truncated matrix-argument hypergeometric series and Mittag-Leffler functions.

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::jack_poly::{log_fock_factor, DiagonalPoint, JackEngine};
use crate::jordan_core::{ln_gamma, partitions_of, pochhammer_partition, JordanType, LogValue, Partition};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    pub max_degree: u32,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl { max_degree: 400, abs_tol: 1e-300, rel_tol: 1e-16 }
    }
}

impl SeriesControl {
    pub fn with_max_degree(max_degree: u32) -> Self {
        SeriesControl { max_degree, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return param("series tolerances must be positive");
        }
        Ok(())
    }

    fn small(&self, shell: LogValue, total: LogValue) -> bool {
        shell.is_zero()
            || shell.log_abs <= self.abs_tol.ln().max(self.rel_tol.ln() + total.log_abs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub value: f64,
    /// The same sum kept in log form, finite even when `value` overflows.
    pub log_value: LogValue,
    /// Contribution of the last degree summed.
    pub last_shell: f64,
    pub converged: bool,
    pub degrees_used: u32,
}

/// Compensated sum of `LogValue` terms, rescaled to the largest magnitude seen.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ScaledSum {
    scale: f64,
    sum: f64,
    comp: f64,
}

impl ScaledSum {
    pub(crate) fn new() -> Self {
        ScaledSum { scale: f64::NEG_INFINITY, sum: 0.0, comp: 0.0 }
    }

    pub(crate) fn add(&mut self, v: LogValue) {
        if v.is_zero() {
            return;
        }
        if v.log_abs > self.scale {
            let f = if self.scale == f64::NEG_INFINITY { 0.0 } else { (self.scale - v.log_abs).exp() };
            self.sum *= f;
            self.comp *= f;
            self.scale = v.log_abs;
        }
        let x = v.sign as f64 * (v.log_abs - self.scale).exp();
        let t = self.sum + x;
        self.comp += if self.sum.abs() >= x.abs() { (self.sum - t) + x } else { (x - t) + self.sum };
        self.sum = t;
    }

    pub(crate) fn value(&self) -> LogValue {
        if self.scale == f64::NEG_INFINITY {
            return LogValue::ZERO;
        }
        LogValue::from_f64(self.sum + self.comp) * LogValue::exp(self.scale)
    }
}

/// Sums `sum_mu coeff(mu) Phi_mu(t)` by degree shells, `Phi_mu` normalized in rank `r`
/// with Jack parameter `2/a`. Only partitions with at most `len(t)` parts contribute.
pub(crate) fn sum_spherical_series<F>(
    t: &[f64],
    r: usize,
    a: f64,
    ctl: &SeriesControl,
    mut coeff: F,
) -> Result<SeriesResult>
where
    F: FnMut(&Partition) -> Result<LogValue>,
{
    ctl.validate()?;
    let mut table = JackEngine::global().table(t, 2.0 / a)?;
    let mut total = ScaledSum::new();
    let mut smalls = 0;
    let mut last = LogValue::ZERO;
    let mut used = 0;
    for k in 0..=ctl.max_degree {
        table.extend_to(k)?;
        let mut shell = ScaledSum::new();
        for mu in partitions_of(k, t.len()) {
            let c = coeff(&mu)?;
            if !c.is_zero() {
                shell.add(c * table.log_phi(&mu, r));
            }
        }
        last = shell.value();
        total.add(last);
        used = k + 1;
        if ctl.small(last, total.value()) {
            smalls += 1;
            if smalls == 2 {
                break;
            }
        } else {
            smalls = 0;
        }
    }
    let v = total.value();
    Ok(SeriesResult {
        value: v.to_f64(),
        log_value: v,
        last_shell: last.to_f64(),
        converged: smalls == 2,
        degrees_used: used,
    })
}

fn pfq_coefficient(num: &[f64], den: &[f64], mu: &Partition, jt: &JordanType) -> Result<LogValue> {
    let mut c = log_fock_factor(mu, jt)?;
    for &b in den {
        let p = pochhammer_partition(b, mu, jt.a, jt.r)?;
        if p.is_zero() {
            return param(format!("denominator parameter {b} gives (b)_{mu} = 0"));
        }
        c = c / p;
    }
    for &a in num {
        c = c * pochhammer_partition(a, mu, jt.a, jt.r)?;
    }
    Ok(c)
}

/// `pFq(num; den; t) = sum_mu prod (num_i)_mu / prod (den_j)_mu E^mu(t, e)`.
///
/// Accepts `p <= q + 1`; the `p = q + 1` case needs `max |t_i| < 1`.
pub fn hyper_pfq(
    num: &[f64],
    den: &[f64],
    t: &DiagonalPoint,
    jt: &JordanType,
    ctl: &SeriesControl,
) -> Result<SeriesResult> {
    t.check_rank(jt.r)?;
    if num.len() > den.len() + 1 {
        return Err(Error::Divergent(format!(
            "{}F{} has an empty domain of convergence; use the asymptotic expansions",
            num.len(),
            den.len()
        )));
    }
    if num.len() == den.len() + 1 && t.t().iter().any(|x| x.abs() >= 1.0) {
        return Err(Error::Divergent("pFq with p = q + 1 needs max |t_i| < 1".into()));
    }
    sum_spherical_series(t.t(), jt.r, jt.a, ctl, |mu| pfq_coefficient(num, den, mu, jt))
}

/// `E_{A,B}(s) = sum_m s^m / Gamma(A m + B)`; terms at Gamma poles vanish.
pub fn mittag_leffler(big_a: f64, big_b: f64, s: f64, ctl: &SeriesControl) -> Result<SeriesResult> {
    ctl.validate()?;
    if !(big_a > 0.0) {
        return param("Mittag-Leffler needs A > 0");
    }
    let ls = LogValue::from_f64(s);
    let mut total = ScaledSum::new();
    let mut smalls = 0;
    let mut last = LogValue::ZERO;
    let mut used = 0;
    for m in 0..=ctl.max_degree {
        used = m + 1;
        let Some((lg, sg)) = ln_gamma(big_a * m as f64 + big_b) else { continue };
        let pow = match (m, ls.sign) {
            (0, _) => LogValue::ONE,
            (_, 0) => LogValue::ZERO,
            (_, sg) => LogValue::new(ls.log_abs * m as f64, if sg < 0 && m % 2 == 1 { -1 } else { 1 }),
        };
        last = pow / LogValue::new(lg, sg);
        total.add(last);
        if ctl.small(last, total.value()) {
            smalls += 1;
            if smalls == 2 {
                break;
            }
        } else {
            smalls = 0;
        }
    }
    let v = total.value();
    Ok(SeriesResult {
        value: v.to_f64(),
        log_value: v,
        last_shell: last.to_f64(),
        converged: smalls == 2,
        degrees_used: used,
    })
}
