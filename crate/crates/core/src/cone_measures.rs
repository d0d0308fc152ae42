//! Radial densities on symmetric cones, Peirce/tripotent/conformal volumes and
//! the eigenvalue quadrature used to cross-check moment formulas.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::jack_poly::{DiagonalPoint, PointDomain};
use crate::jordan_core::{derive_invariants, log_gindikin_gamma_scalar, JordanType, KeplerRank, LogValue};
use crate::quadrature::{integrate, QuadResult};

/// `ln [Gamma_ell(a ell/2) / (Gamma_ell(d/r) Gamma_ell(a r/2))]`, the constant shared by
/// the radial densities, tripotent volumes and moments.
pub fn log_radial_constant(jt: &JordanType, ell: usize) -> Result<LogValue> {
    let a = jt.a;
    Ok(log_gindikin_gamma_scalar(ell, a, 0.5 * a * ell as f64)?
        / (log_gindikin_gamma_scalar(ell, a, jt.d_over_r())?
            * log_gindikin_gamma_scalar(ell, a, 0.5 * a * jt.r as f64)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DensityKind {
    Riemann,
    FlatPotential { lambda: f64, nu: f64 },
    BoundedPotential { nu: f64 },
    Invariant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialDensity {
    pub kind: DensityKind,
    pub jt: JordanType,
    pub rank: KeplerRank,
}

impl RadialDensity {
    pub fn new(kind: DensityKind, jt: &JordanType, ell: usize) -> Result<Self> {
        let rank = derive_invariants(jt, ell)?;
        match kind {
            DensityKind::Invariant if !jt.is_tube() => {
                return domain("the invariant measure needs a tube-type algebra (b = 0)")
            }
            DensityKind::FlatPotential { lambda, nu } if !(lambda > 0.0 && nu > 0.0) => {
                return domain("flat potential needs lambda > 0 and nu > 0")
            }
            _ => {}
        }
        Ok(RadialDensity { kind, jt: jt.clone(), rank })
    }

    fn log_shape(&self, t: &[f64]) -> f64 {
        let ell = self.rank.ell as f64;
        let ln_n: f64 = t.iter().map(|x| x.ln()).sum();
        let base = self.rank.dsecond / ell * ln_n;
        match self.kind {
            DensityKind::Riemann => base,
            DensityKind::FlatPotential { lambda, nu } => {
                let s: f64 = t.iter().sum();
                base + self.rank.d * (lambda - 1.0) * s.ln() - nu * s.powf(lambda)
            }
            DensityKind::BoundedPotential { nu } => {
                base + (nu - self.jt.p()) * t.iter().map(|x| (1.0 - x).ln()).sum::<f64>()
            }
            DensityKind::Invariant => {
                (0.5 * self.jt.a * self.jt.r as f64 - self.rank.dprime / ell) * ln_n
            }
        }
    }

    fn log_constant(&self) -> Result<f64> {
        let c = log_radial_constant(&self.jt, self.rank.ell)?.log_abs;
        Ok(match self.kind {
            DensityKind::Riemann => c + self.rank.d * PI.ln(),
            DensityKind::FlatPotential { lambda, .. } => c + (self.rank.d + 1.0) * lambda.ln(),
            DensityKind::BoundedPotential { .. } => c,
            DensityKind::Invariant => {
                log_tripotent_volume(&self.jt, self.rank.ell)? - self.rank.dprime * 2f64.ln()
            }
        })
    }

    fn check(&self, t: &[f64]) -> Result<()> {
        if t.len() != self.rank.ell {
            return domain(format!("expected {} eigenvalues, got {}", self.rank.ell, t.len()));
        }
        let bounded = matches!(self.kind, DensityKind::BoundedPotential { .. });
        if t.iter().any(|&x| !(x > 0.0) || (bounded && x >= 1.0)) {
            return domain(format!("{t:?} outside the density's domain"));
        }
        Ok(())
    }
}

/// Radial density against `dt` on the ordered eigenvalue simplex, without the
/// `prod |t_i - t_j|^a` Jacobian.
pub fn radial_density(rd: &RadialDensity, t: &DiagonalPoint) -> Result<f64> {
    rd.check(t.t())?;
    Ok((rd.log_constant()? + rd.log_shape(t.t())).exp())
}

/// Reduced Peirce-manifold volume `|M_ell| / pi^{d''_ell}`.
pub fn peirce_volume(jt: &JordanType, ell: usize) -> Result<f64> {
    Ok(log_peirce_volume(jt, ell)?.exp())
}

pub fn log_peirce_volume(jt: &JordanType, ell: usize) -> Result<f64> {
    let k = derive_invariants(jt, ell)?;
    let g = log_gindikin_gamma_scalar(ell, jt.a, k.dprime / ell as f64)?;
    Ok(g.log_abs + log_radial_constant(jt, ell)?.log_abs)
}

/// Volume `|S_ell|` of the manifold of rank-`ell` tripotents.
pub fn tripotent_volume(jt: &JordanType, ell: usize) -> Result<f64> {
    Ok(log_tripotent_volume(jt, ell)?.exp())
}

pub fn log_tripotent_volume(jt: &JordanType, ell: usize) -> Result<f64> {
    let k = derive_invariants(jt, ell)?;
    Ok(k.dprime * 2f64.ln() + log_radial_constant(jt, ell)?.log_abs + k.d * PI.ln())
}

/// `|S_ell|` assembled as `|M_ell| * |S_c|` with `|S_c| = (2 pi)^{d'} / Gamma_ell(d'/ell)`.
pub fn log_tripotent_volume_fibred(jt: &JordanType, ell: usize) -> Result<f64> {
    let k = derive_invariants(jt, ell)?;
    let m = log_peirce_volume(jt, ell)? + k.dsecond * PI.ln();
    let sc = k.dprime * (2.0 * PI).ln()
        - log_gindikin_gamma_scalar(ell, jt.a, k.dprime / ell as f64)?.log_abs;
    Ok(m + sc)
}

/// Reduced volume `|Z^| / pi^d = Gamma_r(d'/r) / Gamma_r(p)` of the compact dual.
pub fn conformal_volume(jt: &JordanType) -> Result<f64> {
    Ok(log_conformal_volume(jt)?.exp())
}

pub fn log_conformal_volume(jt: &JordanType) -> Result<f64> {
    Ok((log_gindikin_gamma_scalar(jt.r, jt.a, jt.dprime_over_r())?
        / log_gindikin_gamma_scalar(jt.r, jt.a, jt.p())?)
    .log_abs)
}

/// `k = (p - a ell)/2`: the Riemann radial density is `N_c(t)^k` times the invariant one.
pub fn invariant_density_exponent(jt: &JordanType, ell: usize) -> f64 {
    0.5 * (jt.p() - jt.a * ell as f64)
}

/// Exponent `a(r - ell) - k` of `N_c(u)` in the local form of the invariant holomorphic n-form.
pub fn n_form_exponent(jt: &JordanType, ell: usize) -> f64 {
    jt.a * (jt.r - ell) as f64 - invariant_density_exponent(jt, ell)
}

/// Ratio `int f rho V^a / int rho V^a` over the ordered eigenvalue simplex, `ell <= 2`,
/// where `V^a = prod_{i<j} (t_i - t_j)^a`. Constant density factors cancel and are dropped.
pub fn eigenvalue_quadrature<F>(f: F, rd: &RadialDensity) -> Result<QuadResult>
where
    F: Fn(&[f64]) -> f64,
{
    let ell = rd.rank.ell;
    if ell > 2 {
        return domain("eigenvalue quadrature is limited to ell <= 2");
    }
    let (bounded, scale) = match rd.kind {
        DensityKind::FlatPotential { lambda, nu } => (false, ((rd.rank.d + 4.0) / nu).powf(1.0 / lambda)),
        DensityKind::BoundedPotential { .. } => (true, 1.0),
        _ => return domain("only the potential densities are integrable over the cone"),
    };
    // maps u in (0,1) to the radial variable and returns (t, dt/du)
    let map = move |u: f64| -> (f64, f64) {
        if bounded {
            (u, 1.0)
        } else {
            (scale * u / (1.0 - u), scale / ((1.0 - u) * (1.0 - u)))
        }
    };
    let a = rd.jt.a;
    let (tol, inner_tol) = if ell == 1 { (1e-9, 0.0) } else { (1e-7, 1e-9) };
    let integral = |weighted: bool| -> Result<QuadResult> {
        let w = |t: &[f64]| if weighted { f(t) } else { 1.0 };
        if ell == 1 {
            integrate(
                |u| {
                    let (t, j) = map(u);
                    w(&[t]) * rd.log_shape(&[t]).exp() * j
                },
                0.0,
                1.0,
                1e-300,
                tol,
                4000,
            )
        } else {
            let mut inner_err: Option<crate::Error> = None;
            let outer = integrate(
                |u| {
                    let (t1, j) = map(u);
                    let inner = integrate(
                        |v| {
                            let t2 = t1 * v;
                            let x = [t1, t2];
                            w(&x) * rd.log_shape(&x).exp() * (t1 - t2).powf(a) * t1
                        },
                        0.0,
                        1.0,
                        1e-300,
                        inner_tol,
                        2000,
                    );
                    match inner {
                        Ok(q) => q.value * j,
                        Err(e) => {
                            inner_err.get_or_insert(e);
                            0.0
                        }
                    }
                },
                0.0,
                1.0,
                1e-300,
                tol,
                2000,
            )?;
            match inner_err {
                Some(e) => Err(e),
                None => Ok(outer),
            }
        }
    };
    let num = integral(true)?;
    let den = integral(false)?;
    let value = num.value / den.value;
    let error = value.abs() * (num.error / num.value.abs() + den.error / den.value.abs());
    Ok(QuadResult { value, error, evaluations: num.evaluations + den.evaluations })
}

/// Convenience constructor for a point in the density's domain.
pub fn density_point(rd: &RadialDensity, t: Vec<f64>) -> Result<DiagonalPoint> {
    let kind = match rd.kind {
        DensityKind::BoundedPotential { .. } => PointDomain::Bounded,
        _ => PointDomain::Cone,
    };
    DiagonalPoint::new(t, kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin_factor_riemann_density() {
        for n in 3..9usize {
            let jt = JordanType::from_name(&format!("spin:{}", n + 1)).unwrap();
            let rd = RadialDensity::new(DensityKind::Riemann, &jt, 1).unwrap();
            let t = 1.7;
            let v = radial_density(&rd, &density_point(&rd, vec![t]).unwrap()).unwrap();
            let want = 2.0 * PI.powi(n as i32) / libm::tgamma(n as f64) * t.powi(n as i32 - 1);
            assert!((v / want - 1.0).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn sphere_area_rank_one() {
        for d in 1..7usize {
            let jt = JordanType::new(1, 2.0, d as f64 - 1.0).unwrap();
            let s = tripotent_volume(&jt, 1).unwrap();
            let want = 2.0 * PI.powi(d as i32) / libm::tgamma(d as f64);
            assert!((s / want - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn volume_routes_agree() {
        for name in ["sym:4", "full:2,5", "asym:7", "spin:9", "exc:16", "exc:27"] {
            let jt = JordanType::from_name(name).unwrap();
            for ell in 1..=jt.r {
                let a = log_tripotent_volume(&jt, ell).unwrap();
                let b = log_tripotent_volume_fibred(&jt, ell).unwrap();
                assert!((a - b).abs() < 1e-11 * a.abs().max(1.0), "{name} {ell}");
            }
            assert!(conformal_volume(&jt).unwrap() > 0.0);
        }
        let tube = JordanType::from_name("sym:3").unwrap();
        assert!((peirce_volume(&tube, 3).unwrap() - 1.0).abs() < 1e-13);
        let disc = JordanType::new(1, 2.0, 0.0).unwrap();
        assert!((conformal_volume(&disc).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn riemann_over_invariant_is_norm_power() {
        for name in ["spin:5", "sym:3", "full:3,3", "asym:6", "exc:27"] {
            let jt = JordanType::from_name(name).unwrap();
            for ell in 1..=jt.r.min(2) {
                let rr = RadialDensity::new(DensityKind::Riemann, &jt, ell).unwrap();
                let ri = RadialDensity::new(DensityKind::Invariant, &jt, ell).unwrap();
                let k = invariant_density_exponent(&jt, ell);
                assert!((n_form_exponent(&jt, ell) - (0.5 * jt.a * (jt.r + 1 - ell) as f64 - 1.0)).abs() < 1e-14);
                for t in [[0.3, 0.1], [1.5, 0.9], [4.0, 2.5]] {
                    let p = density_point(&rr, t[..ell].to_vec()).unwrap();
                    let ratio = radial_density(&rr, &p).unwrap() / radial_density(&ri, &p).unwrap();
                    let n: f64 = t[..ell].iter().product();
                    assert!((ratio / n.powf(k) - 1.0).abs() < 1e-12, "{name} ell={ell}");
                }
            }
        }
    }

    #[test]
    fn rank_one_flat_quadrature() {
        let jt = JordanType::from_name("spin:5").unwrap();
        let p = jt.p();
        let rd = RadialDensity::new(DensityKind::FlatPotential { lambda: 1.0, nu: 2.5 }, &jt, 1).unwrap();
        for m in 0..5 {
            let q = eigenvalue_quadrature(|t| t[0].powi(m), &rd).unwrap();
            let want = (libm::lgamma(p - 1.0 + m as f64) - libm::lgamma(p - 1.0)).exp() / 2.5f64.powi(m);
            assert!((q.value / want - 1.0).abs() < 1e-8, "m={m}");
        }
    }
}
