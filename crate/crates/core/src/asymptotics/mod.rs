//! Large-argument and large-weight expansions: `1F1`, `2F1`, Kempf/TYZ and Mittag-Leffler.
//!
//! Evaluators here never claim convergence. They return the truncated value together with
//! the magnitude of the first omitted shell.

mod exppoly;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use exppoly::{parse_rational, rank1_kempf_coeffs, rank1_kempf_coeffs_f64, rank1_operator, ExpPolyFunction};

use crate::error::{domain, param, Result};
use crate::hyper_series::{ScaledSum, SeriesControl};
use crate::jack_poly::{log_fock_factor, DiagonalPoint, JackEngine};
use crate::jordan_core::{
    log_gindikin_gamma_scalar, partitions_up_to, pochhammer_partition, JordanType, LogValue, Partition,
};
use crate::kepler_kernels::{kernel_diag, KernelSpec, Potential};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticValue {
    pub value: f64,
    pub log_value: LogValue,
    /// `|prefactor * shell(order + 1)|`, the error proxy.
    pub first_omitted: f64,
    pub order: u32,
}

/// `prefactor * sum_{|mu| <= order} c_mu E^mu(argument)` as a formal series.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticSeries {
    pub prefactor: String,
    pub log_prefactor: LogValue,
    pub argument: Vec<f64>,
    /// Coefficients through degree `order + 1`; the top degree only feeds the error proxy.
    pub terms: BTreeMap<Partition, LogValue>,
    pub order: u32,
    jt: JordanType,
}

impl AsymptoticSeries {
    fn build(
        prefactor: String,
        log_prefactor: LogValue,
        argument: Vec<f64>,
        num: &[f64],
        den: &[f64],
        jt: &JordanType,
        order: u32,
    ) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for mu in partitions_up_to(order + 1, argument.len()) {
            let mut c = LogValue::ONE;
            for &x in num {
                c = c * pochhammer_partition(x, &mu, jt.a, jt.r)?;
            }
            for &x in den {
                let p = pochhammer_partition(x, &mu, jt.a, jt.r)?;
                if p.is_zero() {
                    return param(format!("denominator parameter {x} gives (x)_{mu} = 0"));
                }
                c = c / p;
            }
            terms.insert(mu, c);
        }
        Ok(AsymptoticSeries { prefactor, log_prefactor, argument, terms, order, jt: jt.clone() })
    }

    /// Degree shells `sum_{|mu| = k} c_mu E^mu(argument)` for `k <= order + 1`.
    pub fn shells(&self) -> Result<Vec<LogValue>> {
        let flip = self.argument.iter().all(|&x| x < 0.0);
        let x: Vec<f64> = self.argument.iter().map(|&v| if flip { -v } else { v }).collect();
        let mut table = JackEngine::global().table(&x, self.jt.alpha())?;
        let mut out = Vec::new();
        for k in 0..=self.order + 1 {
            table.extend_to(k)?;
            let mut shell = ScaledSum::new();
            for (mu, c) in self.terms.range(Partition::new(vec![k])?..).take_while(|(m, _)| m.weight() == k) {
                if !c.is_zero() {
                    shell.add(*c * log_fock_factor(mu, &self.jt)? * table.log_phi(mu, self.jt.r));
                }
            }
            let v = shell.value();
            out.push(if flip && k % 2 == 1 { -v } else { v });
        }
        Ok(out)
    }

    pub fn evaluate(&self) -> Result<AsymptoticValue> {
        let shells = self.shells()?;
        let mut sum = ScaledSum::new();
        for s in &shells[..=self.order as usize] {
            sum.add(*s);
        }
        let v = sum.value() * self.log_prefactor;
        Ok(AsymptoticValue {
            value: v.to_f64(),
            log_value: v,
            first_omitted: (shells[self.order as usize + 1] * self.log_prefactor).abs().to_f64(),
            order: self.order,
        })
    }
}

fn check_tube(jt: &JordanType) -> Result<()> {
    if jt.b != 0.0 {
        return param(format!("{jt} is not of tube type; the expansions live on euclidean Jordan algebras"));
    }
    Ok(())
}

fn check_full_point(t: &DiagonalPoint, jt: &JordanType) -> Result<()> {
    if t.len() != jt.r {
        return domain(format!("expected {} eigenvalues, got {}", jt.r, t.len()));
    }
    Ok(())
}

/// The formal series for `Gamma_r(lambda)/Gamma_r(beta) 1F1(lambda; beta; t)` at large `t`:
/// `e^{tr t} N(t)^{lambda - beta} 2F0(d/r - lambda, beta - lambda; t^{-1})`.
pub fn asympt_1f1_series(lambda: f64, beta: f64, t: &DiagonalPoint, jt: &JordanType, order: u32) -> Result<AsymptoticSeries> {
    check_tube(jt)?;
    check_full_point(t, jt)?;
    if t.t().iter().any(|&x| !(x > 0.0)) {
        return domain("1F1 asymptotics need all t_i > 0");
    }
    let log_pre: f64 = t.t().iter().map(|&x| x + (lambda - beta) * x.ln()).sum();
    let inv: Vec<f64> = t.t().iter().map(|x| 1.0 / x).collect();
    AsymptoticSeries::build(
        "e^{tr t} N(t)^{lambda-beta}".into(),
        LogValue::exp(log_pre),
        inv,
        &[jt.d_over_r() - lambda, beta - lambda],
        &[],
        jt,
        order,
    )
}

/// Approximation of `1F1(lambda; beta; t)` truncated at `|mu| <= order`.
pub fn asympt_1f1(lambda: f64, beta: f64, t: &DiagonalPoint, jt: &JordanType, order: u32) -> Result<AsymptoticValue> {
    let series = asympt_1f1_series(lambda, beta, t, jt, order)?;
    let g = log_gindikin_gamma_scalar(jt.r, jt.a, beta)? / log_gindikin_gamma_scalar(jt.r, jt.a, lambda)?;
    scale(series.evaluate()?, g)
}

fn scale(v: AsymptoticValue, g: LogValue) -> Result<AsymptoticValue> {
    let lv = v.log_value * g;
    Ok(AsymptoticValue { value: lv.to_f64(), log_value: lv, first_omitted: v.first_omitted * g.abs().to_f64(), order: v.order })
}

/// The formal series for `Gamma_r(lambda) Gamma_r(nu)/Gamma_r(beta) 2F1(lambda, nu; beta; y)` at large `nu`.
pub fn asympt_2f1_series(
    lambda: f64,
    beta: f64,
    nu: f64,
    y: &DiagonalPoint,
    jt: &JordanType,
    order: u32,
) -> Result<AsymptoticSeries> {
    check_tube(jt)?;
    check_full_point(y, jt)?;
    if y.t().iter().any(|&v| !(1e-6..1.0).contains(&v)) {
        return domain("2F1 asymptotics need 1e-6 <= y_i < 1");
    }
    let dr = jt.d_over_r();
    if !(lambda > dr - 1.0 && beta > dr - 1.0) {
        return param(format!("2F1 asymptotics need lambda, beta > d/r - 1 = {}", dr - 1.0));
    }
    let e = lambda - beta;
    let log_pre: f64 = y.t().iter().map(|&v| e * v.ln() - (e + nu) * (1.0 - v).ln()).sum();
    let pre = log_gindikin_gamma_scalar(jt.r, jt.a, e + nu)? * LogValue::exp(log_pre);
    let arg: Vec<f64> = y.t().iter().map(|v| 1.0 - 1.0 / v).collect();
    AsymptoticSeries::build(
        "Gamma_r(lambda-beta+nu) N(y)^{lambda-beta} / N(e-y)^{lambda-beta+nu}".into(),
        pre,
        arg,
        &[dr - lambda, beta - lambda],
        &[dr + beta - lambda - nu],
        jt,
        order,
    )
}

/// Approximation of `2F1(lambda, nu; beta; y)` at large `nu`, truncated at `|mu| <= order`.
pub fn asympt_2f1(lambda: f64, beta: f64, nu: f64, y: &DiagonalPoint, jt: &JordanType, order: u32) -> Result<AsymptoticValue> {
    let series = asympt_2f1_series(lambda, beta, nu, y, jt, order)?;
    let (r, a) = (jt.r, jt.a);
    let g = log_gindikin_gamma_scalar(r, a, beta)?
        / (log_gindikin_gamma_scalar(r, a, lambda)? * log_gindikin_gamma_scalar(r, a, nu)?);
    scale(series.evaluate()?, g)
}

/// Leading term `(1/A) s^{(1-B)/A} e^{s^{1/A}}` of `E_{A,B}(s)`, in log form.
pub fn log_mittag_leffler_asympt(big_a: f64, big_b: f64, s: f64) -> Result<LogValue> {
    if !(big_a > 0.0 && s > 0.0) {
        return domain("Mittag-Leffler asymptotics need A > 0 and s > 0");
    }
    Ok(LogValue::exp(-big_a.ln() + (1.0 - big_b) / big_a * s.ln() + s.powf(1.0 / big_a)))
}

pub fn mittag_leffler_asympt(big_a: f64, big_b: f64, s: f64) -> Result<f64> {
    Ok(log_mittag_leffler_asympt(big_a, big_b, s)?.to_f64())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TyzRow {
    pub nu: f64,
    /// Normalized kernel divided by its predicted leading behaviour.
    pub ratio: f64,
    pub log_kernel: f64,
    pub degrees_used: u32,
}

fn tyz_control(nu: f64, t: &DiagonalPoint) -> SeriesControl {
    let tmax = t.t().iter().cloned().fold(0.0, f64::max);
    let peak = nu * tmax / (1.0 - tmax.min(0.95));
    SeriesControl::with_max_degree((4.0 * peak + 200.0).min(20_000.0) as u32)
}

fn kernel_log(spec: &KernelSpec, t: &DiagonalPoint, ctl: &SeriesControl) -> Result<(LogValue, u32)> {
    let k = kernel_diag(spec, t, ctl)?;
    if !k.converged {
        return Err(crate::Error::Divergent(format!("kernel series did not settle in {} degrees", k.degrees_used)));
    }
    Ok((k.log_value, k.degrees_used))
}

/// `N_c(c-t)^nu K^nu(sqrt t, sqrt t)` over `Gamma_l(nu - d''/l)/Gamma_l(nu - d/l) nu^{d''}` for each `nu`.
pub fn tyz_bounded_leading(spec: &KernelSpec, t: &DiagonalPoint, nu_list: &[f64]) -> Result<Vec<TyzRow>> {
    if spec.potential != Potential::Bounded {
        return param("tyz_bounded_leading needs the bounded potential");
    }
    let (ell, a) = (spec.rank.ell, spec.jt.a);
    if spec.rank.dsecond == 0.0 {
        return param("the top rank of a tube-type algebra has no TYZ correction");
    }
    if t.len() != ell || t.t().iter().any(|&x| !(x > 0.0 && x < 1.0)) {
        return domain(format!("need {ell} eigenvalues in (0, 1)"));
    }
    let l = ell as f64;
    let (d, dpp) = (spec.rank.d, spec.rank.dsecond);
    nu_list
        .iter()
        .map(|&nu| {
            let s = spec.with_nu(nu)?;
            let (k, used) = kernel_log(&s, t, &tyz_control(nu, t))?;
            let n_log: f64 = t.t().iter().map(|x| nu * (1.0 - x).ln()).sum();
            let lead = log_gindikin_gamma_scalar(ell, a, nu - dpp / l)?.log_abs
                - log_gindikin_gamma_scalar(ell, a, nu - d / l)?.log_abs
                + dpp * nu.ln();
            Ok(TyzRow { nu, ratio: (n_log + k.log_abs - lead).exp(), log_kernel: k.log_abs, degrees_used: used })
        })
        .collect()
}

/// `e^{-nu tr t} K^nu(sqrt t, sqrt t) / nu^{d_l}` for the flat potential with `lambda = 1`.
pub fn tyz_flat_leading(spec: &KernelSpec, t: &DiagonalPoint, nu_list: &[f64]) -> Result<Vec<TyzRow>> {
    if spec.potential != (Potential::Flat { lambda: 1.0 }) {
        return param("tyz_flat_leading needs the flat potential with lambda = 1");
    }
    let ell = spec.rank.ell;
    if t.len() != ell || t.t().iter().any(|&x| !(x > 0.0)) {
        return domain(format!("need {ell} positive eigenvalues"));
    }
    let tr: f64 = t.t().iter().sum();
    nu_list
        .iter()
        .map(|&nu| {
            let s = spec.with_nu(nu)?;
            let tmax = t.t().iter().cloned().fold(0.0, f64::max);
            let ctl = SeriesControl::with_max_degree((3.0 * nu * tmax + 200.0).min(20_000.0) as u32);
            let (k, used) = kernel_log(&s, t, &ctl)?;
            let ratio = (k.log_abs - nu * tr - spec.rank.d * nu.ln()).exp();
            Ok(TyzRow { nu, ratio, log_kernel: k.log_abs, degrees_used: used })
        })
        .collect()
}

/// `e^{-nu t^lambda} K^nu(sqrt t, sqrt t) / nu^{p-1}` on the rank-one Kepler manifold, in log form.
pub fn kempf_normalized(jt: &JordanType, lambda: f64, nu: f64, t: f64) -> Result<f64> {
    let spec = KernelSpec::new(jt, 1, Potential::Flat { lambda }, nu)?;
    let s = nu.powf(1.0 / lambda) * t;
    let peak = lambda * s.powf(lambda).max(1.0);
    let ctl = SeriesControl::with_max_degree((3.0 * peak + 60.0 * peak.sqrt() + 200.0).min(50_000.0) as u32);
    let pt = DiagonalPoint::new(vec![t], crate::jack_poly::PointDomain::Cone)?;
    let (k, _) = kernel_log(&spec, &pt, &ctl)?;
    Ok(k.log_abs - nu * t.powf(lambda) - (jt.p() - 1.0) * nu.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyper_series::{hyper_pfq, mittag_leffler};
    use crate::jack_poly::PointDomain;

    fn pt(t: &[f64]) -> DiagonalPoint {
        DiagonalPoint::new(t.to_vec(), PointDomain::Free).unwrap()
    }

    fn scalar_2f0(a: f64, b: f64, x: f64, order: u32) -> f64 {
        let (mut term, mut sum) = (1.0, 1.0);
        for n in 0..order {
            let n = n as f64;
            term *= (a + n) * (b + n) * x / (n + 1.0);
            sum += term;
        }
        sum
    }

    #[test]
    fn rank_one_is_kummer() {
        let jt = JordanType::new(1, 1.0, 0.0).unwrap();
        let (l, b, z) = (1.7, 3.2, 25.0);
        for order in 0..5 {
            let s = asympt_1f1_series(l, b, &pt(&[z]), &jt, order).unwrap().evaluate().unwrap();
            let want = z.exp() * z.powf(l - b) * scalar_2f0(1.0 - l, b - l, 1.0 / z, order);
            assert!((s.value / want - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn special_parameter_collapses() {
        let jt = JordanType::from_name("sym:2").unwrap();
        let t = [3.0, 5.0];
        let dr = jt.d_over_r();
        let s = asympt_1f1_series(dr, 4.1, &pt(&t), &jt, 3).unwrap().evaluate().unwrap();
        let want: f64 = t.iter().map(|x| x + (dr - 4.1) * x.ln()).sum();
        assert!((s.log_value.log_abs - want).abs() < 1e-13);
        assert_eq!(s.first_omitted, 0.0);
        let s0 = asympt_1f1_series(2.3, 4.1, &pt(&t), &jt, 0).unwrap();
        assert_eq!(s0.shells().unwrap()[0].to_f64(), 1.0);
    }

    #[test]
    fn refusals() {
        let jt = JordanType::from_name("sym:2").unwrap();
        assert!(asympt_1f1(1.0, 2.0, &pt(&[1.0, -1.0]), &jt, 1).is_err());
        assert!(asympt_2f1(2.0, 3.0, 10.0, &pt(&[0.3, 1.2]), &jt, 1).is_err());
        assert!(asympt_2f1(2.0, 3.0, 10.0, &pt(&[0.3, 1e-8]), &jt, 1).is_err());
        let non_tube = JordanType::from_name("full:2,3").unwrap();
        assert!(asympt_1f1(1.0, 2.0, &pt(&[1.0, 2.0]), &non_tube, 1).is_err());
    }

    #[test]
    fn large_argument_1f1_rank_two() {
        let jt = JordanType::from_name("full:2,2").unwrap();
        let t = pt(&[40.0, 30.0]);
        let lhs = hyper_pfq(&[2.3], &[3.9], &t, &jt, &SeriesControl::with_max_degree(600)).unwrap();
        let mut last = f64::INFINITY;
        for k in 0..3 {
            let v = asympt_1f1(2.3, 3.9, &t, &jt, k).unwrap();
            let err = (v.log_value / lhs.log_value).to_f64() - 1.0;
            assert!(err.abs() < last);
            last = err.abs();
        }
        assert!(last < 1e-4);
    }

    #[test]
    fn large_weight_2f1_rank_one() {
        let jt = JordanType::new(1, 1.0, 0.0).unwrap();
        let (l, b, y) = (1.6, 2.9, 0.3);
        let mut errs = Vec::new();
        for nu in [50.0, 100.0] {
            let lhs = hyper_pfq(&[l, nu], &[b], &pt(&[y]), &jt, &SeriesControl::with_max_degree(2000)).unwrap();
            let v = asympt_2f1(l, b, nu, &pt(&[y]), &jt, 1).unwrap();
            errs.push(((v.log_value / lhs.log_value).to_f64() - 1.0).abs());
        }
        // second-order remainder
        assert!(errs[1] < errs[0] / 3.0, "{errs:?}");
    }

    #[test]
    fn mittag_leffler_leading() {
        let s = 30.0;
        assert!((mittag_leffler_asympt(1.0, 1.0, s).unwrap() / s.exp() - 1.0).abs() < 1e-14);
        let e12 = (s.exp() - 1.0) / s;
        assert!((mittag_leffler_asympt(1.0, 2.0, s).unwrap() / e12 - 1.0).abs() < 1e-12);
        let series = mittag_leffler(2.0, 1.0, 100.0, &SeriesControl::default()).unwrap();
        let lead = log_mittag_leffler_asympt(2.0, 1.0, 100.0).unwrap();
        assert!(((lead / series.log_value).to_f64() - 1.0).abs() < 1e-3);
        assert!(mittag_leffler_asympt(1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn kempf_rank_one_matches_coefficients() {
        let jt = JordanType::from_name("spin:5").unwrap();
        let b = rank1_kempf_coeffs_f64(&jt, num_rational::Rational64::from(1)).unwrap();
        let (nu, t) = (80.0f64, 1.0f64);
        let x = nu * t;
        let want: f64 = b.iter().enumerate().map(|(j, c)| c / x.powi(j as i32)).sum();
        let got = kempf_normalized(&jt, 1.0, nu, t).unwrap().exp();
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }

    #[test]
    fn bounded_tyz_rank_one() {
        let jt = JordanType::from_name("sym:2").unwrap();
        let spec = KernelSpec::bounded(&jt, 1, 10.0).unwrap();
        let t = 0.3;
        let rows = tyz_bounded_leading(&spec, &pt(&[t]), &[50.0, 100.0, 200.0]).unwrap();
        // here D_1 = t d/dt + 1/2 and F = (nu-2)/t ((1-t)^{1-nu} - 1) in closed form
        for row in rows {
            let nu = row.nu;
            let want = 1.0 - (1.0 + (1.0 - t) / (2.0 * t)) / nu + (1.0 - t).powf(nu) / (2.0 * t * nu);
            assert!((row.ratio - want).abs() < 1e-12, "{row:?}");
        }
    }
}
