//! Moments and reproducing kernels of the weighted Bergman spaces on Kepler manifolds.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cone_measures::{eigenvalue_quadrature, log_radial_constant, DensityKind, RadialDensity};
use crate::error::{domain, param, Result};
use crate::hyper_series::{mittag_leffler, sum_spherical_series, SeriesControl, SeriesResult};
use crate::jack_poly::{log_fock_factor, spherical_phi, DiagonalPoint};
use crate::jordan_core::{
    derive_invariants, log_dim_full, log_gindikin_gamma, log_gindikin_gamma_scalar,
    partitions_up_to, pochhammer_partition, universal_eigenvalue, JordanType, KeplerRank,
    LogValue, Partition,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Potential {
    /// `phi(w) = (w|w)^lambda`
    Flat { lambda: f64 },
    /// `phi(w) = log Delta(w,w)^{-p}`
    Bounded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub jt: JordanType,
    pub rank: KeplerRank,
    pub potential: Potential,
    pub nu: f64,
}

/// Smallest admissible weight for the bounded potential: `Gamma_ell(nu - d_ell/ell)` must be pole-free.
pub fn bounded_threshold(jt: &JordanType, ell: usize) -> Result<f64> {
    let k = derive_invariants(jt, ell)?;
    Ok(0.5 * jt.a * (ell as f64 - 1.0) + k.d / ell as f64)
}

impl KernelSpec {
    pub fn new(jt: &JordanType, ell: usize, potential: Potential, nu: f64) -> Result<Self> {
        let rank = derive_invariants(jt, ell)?;
        match potential {
            Potential::Flat { lambda } if !(lambda > 0.0 && nu > 0.0) => {
                return param("flat potential needs lambda > 0 and nu > 0")
            }
            Potential::Bounded => {
                let th = bounded_threshold(jt, ell)?;
                if !(nu > th) {
                    return param(format!("bounded potential needs nu > {th}, got {nu}"));
                }
            }
            _ => {}
        }
        Ok(KernelSpec { jt: jt.clone(), rank, potential, nu })
    }

    pub fn flat(jt: &JordanType, ell: usize, lambda: f64, nu: f64) -> Result<Self> {
        Self::new(jt, ell, Potential::Flat { lambda }, nu)
    }

    pub fn bounded(jt: &JordanType, ell: usize, nu: f64) -> Result<Self> {
        Self::new(jt, ell, Potential::Bounded, nu)
    }

    pub fn with_nu(&self, nu: f64) -> Result<Self> {
        Self::new(&self.jt, self.rank.ell, self.potential, nu)
    }

    pub fn ell(&self) -> usize {
        self.rank.ell
    }

    /// The tube-type Peirce 2-space carrying the diagonal point.
    pub fn peirce_subtype(&self) -> Result<JordanType> {
        self.jt.peirce_subtype(self.rank.ell)
    }

    fn check_point(&self, t: &DiagonalPoint) -> Result<()> {
        if t.len() > self.rank.ell {
            return domain(format!("{} eigenvalues exceed ell = {}", t.len(), self.rank.ell));
        }
        let bounded = matches!(self.potential, Potential::Bounded);
        if t.t().iter().any(|&x| x < 0.0 || (bounded && x >= 1.0)) {
            return domain(format!("{:?} outside the kernel's domain", t.t()));
        }
        Ok(())
    }

    fn shifted(&self, mu: &Partition, s: f64) -> Vec<f64> {
        mu.padded(self.rank.ell).iter().map(|&m| m as f64 + s).collect()
    }
}

/// `sigma_mu` for the flat potential `(w|w)^lambda`.
pub fn moments_flat(spec: &KernelSpec, mu: &Partition) -> Result<LogValue> {
    let Potential::Flat { lambda } = spec.potential else {
        return param("moments_flat needs a flat potential");
    };
    let (ell, d) = (spec.rank.ell, spec.rank.d);
    let w = mu.weight() as f64;
    let g = log_gindikin_gamma(ell, spec.jt.a, &spec.shifted(mu, d / ell as f64))?;
    let tail = libm::lgamma(d + w / lambda) - libm::lgamma(d + w);
    let log = d * lambda.ln() - (d + w / lambda) * spec.nu.ln() + tail;
    Ok(log_radial_constant(&spec.jt, ell)? * g * LogValue::exp(log))
}

/// `sigma_mu` for the bounded potential `log Delta(w,w)^{-p}`.
pub fn moments_bounded(spec: &KernelSpec, mu: &Partition) -> Result<LogValue> {
    if spec.potential != Potential::Bounded {
        return param("moments_bounded needs the bounded potential");
    }
    let (ell, d, a) = (spec.rank.ell, spec.rank.d, spec.jt.a);
    let top = log_gindikin_gamma_scalar(ell, a, spec.nu - d / ell as f64)?
        * log_gindikin_gamma(ell, a, &spec.shifted(mu, d / ell as f64))?;
    let bottom = log_gindikin_gamma(ell, a, &spec.shifted(mu, spec.nu))?;
    Ok(log_radial_constant(&spec.jt, ell)? * top / bottom)
}

pub fn moment(spec: &KernelSpec, mu: &Partition) -> Result<LogValue> {
    match spec.potential {
        Potential::Flat { .. } => moments_flat(spec, mu),
        Potential::Bounded => moments_bounded(spec, mu),
    }
}

/// Moments `sigma_mu` for all `|mu| <= max_weight` with at most `ell` parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSequence {
    pub values: BTreeMap<Partition, LogValue>,
}

impl MomentSequence {
    pub fn compute(spec: &KernelSpec, max_weight: u32) -> Result<Self> {
        let values = partitions_up_to(max_weight, spec.rank.ell)
            .into_iter()
            .map(|mu| moment(spec, &mu).map(|s| (mu, s)))
            .collect::<Result<_>>()?;
        Ok(MomentSequence { values })
    }
}

/// `sigma_mu / sigma_0` by quadrature of `Phi_mu` against the radial density (`ell <= 2`).
pub fn moment_quadrature(spec: &KernelSpec, mu: &Partition) -> Result<f64> {
    let ell = spec.rank.ell;
    if mu.len() > ell {
        return domain(format!("{mu} has more than {ell} parts"));
    }
    let kind = match spec.potential {
        Potential::Flat { lambda } => DensityKind::FlatPotential { lambda, nu: spec.nu },
        Potential::Bounded => DensityKind::BoundedPotential { nu: spec.nu },
    };
    let rd = RadialDensity::new(kind, &spec.jt, ell)?;
    let a = spec.jt.a;
    let q = eigenvalue_quadrature(|t| spherical_phi(mu, t, a, ell).unwrap_or(f64::NAN), &rd)?;
    Ok(q.value)
}

/// Coefficient of `E_c^mu(t)` in the Peter-Weyl expansion of the kernel:
/// `(d'_ell/ell)_mu / sigma_mu * d_mu / d^c_mu`.
pub fn kernel_coefficient_direct(spec: &KernelSpec, mu: &Partition) -> Result<LogValue> {
    let sub = spec.peirce_subtype()?;
    let ell = spec.rank.ell;
    let poch = pochhammer_partition(spec.rank.dprime / ell as f64, mu, spec.jt.a, ell)?;
    let dims = LogValue::exp(log_dim_full(mu, &spec.jt)? - log_dim_full(mu, &sub)?);
    Ok(poch / moment(spec, mu)? * dims)
}

/// The same coefficient through the universal operator:
/// `C * A_mu * Gamma_ell(mu + d'_ell/ell) / sigma_mu`.
pub fn kernel_coefficient_spectral(spec: &KernelSpec, mu: &Partition) -> Result<LogValue> {
    let ell = spec.rank.ell;
    let g = log_gindikin_gamma(ell, spec.jt.a, &spec.shifted(mu, spec.rank.dprime / ell as f64))?;
    Ok(log_radial_constant(&spec.jt, ell)? * universal_eigenvalue(mu, &spec.jt, ell)? * g
        / moment(spec, mu)?)
}

/// Diagonal kernel value `K(sqrt t, sqrt t)` by direct Peter-Weyl summation.
pub fn kernel_diag(spec: &KernelSpec, t: &DiagonalPoint, ctl: &SeriesControl) -> Result<SeriesResult> {
    spec.check_point(t)?;
    let sub = spec.peirce_subtype()?;
    sum_spherical_series(t.t(), spec.rank.ell, spec.jt.a, ctl, |mu| {
        Ok(kernel_coefficient_direct(spec, mu)? * log_fock_factor(mu, &sub)?)
    })
}

/// Coefficient of `E_c^mu(t)` in the generating function `F_ell^nu`.
fn generating_coefficient(spec: &KernelSpec, mu: &Partition) -> Result<LogValue> {
    let (ell, d, dp, a) = (spec.rank.ell, spec.rank.d, spec.rank.dprime, spec.jt.a);
    let l = ell as f64;
    let w = mu.weight() as f64;
    let ratio = log_gindikin_gamma(ell, a, &spec.shifted(mu, dp / l))?
        / log_gindikin_gamma(ell, a, &spec.shifted(mu, d / l))?;
    match spec.potential {
        Potential::Flat { lambda } => {
            let log = d * (spec.nu / lambda).ln() + w / lambda * spec.nu.ln()
                + libm::lgamma(d + w)
                - libm::lgamma(d + w / lambda);
            Ok(ratio * LogValue::exp(log))
        }
        Potential::Bounded => {
            let pre = log_gindikin_gamma_scalar(ell, a, spec.nu)?
                / log_gindikin_gamma_scalar(ell, a, spec.nu - d / l)?;
            Ok(pre * ratio * pochhammer_partition(spec.nu, mu, a, ell)?)
        }
    }
}

fn generating_series(
    spec: &KernelSpec,
    t: &DiagonalPoint,
    ctl: &SeriesControl,
    with_operator: bool,
) -> Result<SeriesResult> {
    spec.check_point(t)?;
    let sub = spec.peirce_subtype()?;
    let ell = spec.rank.ell;
    sum_spherical_series(t.t(), ell, spec.jt.a, ctl, |mu| {
        let mut c = generating_coefficient(spec, mu)? * log_fock_factor(mu, &sub)?;
        if with_operator {
            c = c * universal_eigenvalue(mu, &spec.jt, ell)?;
        }
        Ok(c)
    })
}

/// Generating function `F_ell^nu(t)` of the flat potential, with `K = D_ell F`.
///
/// Rank one goes through the Mittag-Leffler function `E_{1/lambda, p-1}`.
pub fn closed_form_flat(spec: &KernelSpec, t: &DiagonalPoint, ctl: &SeriesControl) -> Result<SeriesResult> {
    let Potential::Flat { lambda } = spec.potential else {
        return param("closed_form_flat needs a flat potential");
    };
    spec.check_point(t)?;
    if spec.rank.ell == 1 {
        let d = spec.rank.d;
        let s = spec.nu.powf(1.0 / lambda) * t.t().first().copied().unwrap_or(0.0);
        let mut ml_ctl = *ctl;
        ml_ctl.max_degree = ml_ctl.max_degree.max(20_000);
        let mut res = mittag_leffler(1.0 / lambda, d, s, &ml_ctl)?;
        let pre = LogValue::exp(d * (spec.nu / lambda).ln());
        res.log_value = res.log_value * pre;
        res.value = res.log_value.to_f64();
        res.last_shell *= pre.to_f64();
        return Ok(res);
    }
    generating_series(spec, t, ctl, false)
}

/// Generating function `F_ell^nu(t)` of the bounded potential (a `2F1` on the Peirce 2-space).
pub fn closed_form_bounded(spec: &KernelSpec, t: &DiagonalPoint, ctl: &SeriesControl) -> Result<SeriesResult> {
    if spec.potential != Potential::Bounded {
        return param("closed_form_bounded needs the bounded potential");
    }
    generating_series(spec, t, ctl, false)
}

/// `D_ell F_ell^nu(t)`, with the universal operator applied through its eigenvalues `A_mu`.
pub fn closed_form_kernel(spec: &KernelSpec, t: &DiagonalPoint, ctl: &SeriesControl) -> Result<SeriesResult> {
    generating_series(spec, t, ctl, true)
}
