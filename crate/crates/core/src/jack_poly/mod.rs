//! Spherical polynomials `Phi_mu` and Fischer-Fock components `E^mu` at diagonal
//! arguments, realized through Jack polynomials with parameter `alpha = 2/a`.

mod engine;
mod pieri;

pub use engine::{log_jack_p_at_ones, JackEngine, JackTable, MAX_VARS};
pub use pieri::{pieri_coefficients, pieri_row};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::jordan_core::{log_dim_full, pochhammer_partition, JordanType, LogValue, Partition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointDomain {
    /// `t_i > 0`
    Cone,
    /// `0 < t_i < 1`
    Bounded,
    Free,
}

/// Eigenvalue vector of an `L`-invariant point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalPoint {
    t: Vec<f64>,
    domain: PointDomain,
}

impl DiagonalPoint {
    pub fn new(t: Vec<f64>, kind: PointDomain) -> Result<Self> {
        if t.is_empty() {
            return domain("empty eigenvalue vector");
        }
        let ok = t.iter().all(|&x| match kind {
            PointDomain::Cone => x > 0.0 && x.is_finite(),
            PointDomain::Bounded => x > 0.0 && x < 1.0,
            PointDomain::Free => x.is_finite(),
        });
        if !ok {
            return domain(format!("{t:?} violates the {kind:?} domain"));
        }
        Ok(DiagonalPoint { t, domain: kind })
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn domain(&self) -> PointDomain {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Checks the point fits inside a rank-`r` algebra.
    pub fn check_rank(&self, r: usize) -> Result<()> {
        if self.t.len() > r {
            return domain(format!("{} eigenvalues exceed rank {r}", self.t.len()));
        }
        Ok(())
    }
}

/// `Phi_mu(t)`, normalized so that `Phi_mu(1^r) = 1`; `t` is padded with zeros to length `r`.
pub fn spherical_phi(mu: &Partition, t: &[f64], a: f64, r: usize) -> Result<f64> {
    Ok(log_spherical_phi(mu, t, a, r)?.to_f64())
}

pub fn log_spherical_phi(mu: &Partition, t: &[f64], a: f64, r: usize) -> Result<LogValue> {
    if t.len() > r || mu.len() > r {
        return domain(format!("point of length {} or {mu} exceeds rank {r}", t.len()));
    }
    if mu.len() > t.len() {
        return Ok(LogValue::ZERO);
    }
    let alpha = 2.0 / a;
    let p = JackEngine::global().jack_p(mu, t, alpha)?;
    Ok(LogValue::from_f64(p) / LogValue::exp(log_jack_p_at_ones(mu, r, alpha)))
}

/// `d_mu / (d/r)_mu`, the factor turning `Phi_mu` into `E^mu_e`.
pub fn log_fock_factor(mu: &Partition, jt: &JordanType) -> Result<LogValue> {
    let poch = pochhammer_partition(jt.d_over_r(), mu, jt.a, jt.r)?;
    Ok(LogValue::exp(log_dim_full(mu, jt)?) / poch)
}

/// Fischer-Fock reproducing-kernel component `E^mu(t, e)`.
pub fn fock_component(mu: &Partition, t: &[f64], jt: &JordanType) -> Result<f64> {
    Ok((log_fock_factor(mu, jt)? * log_spherical_phi(mu, t, jt.a, jt.r)?).to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan_core::partitions_of;
    use proptest::prelude::*;

    #[test]
    fn rank_one_fock_component() {
        let jt = JordanType::from_name("spin:5").unwrap();
        for m in 0..8u32 {
            let mu = Partition::new(vec![m]).unwrap();
            let v = fock_component(&mu, &[0.8], &jt).unwrap();
            let want = 0.8f64.powi(m as i32) / libm::tgamma(m as f64 + 1.0);
            assert!((v - want).abs() < 1e-14 * want.max(1e-300), "m={m}");
        }
    }

    #[test]
    fn phi_example() {
        let mu = Partition::new(vec![1]).unwrap();
        assert!((spherical_phi(&mu, &[0.3, 0.9], 1.0, 2).unwrap() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn point_domains() {
        assert!(DiagonalPoint::new(vec![0.5, 1.5], PointDomain::Bounded).is_err());
        assert!(DiagonalPoint::new(vec![-0.5], PointDomain::Cone).is_err());
        let p = DiagonalPoint::new(vec![-0.5, 2.0], PointDomain::Free).unwrap();
        assert!(p.check_rank(1).is_err());
    }

    proptest! {
        #[test]
        fn phi_is_symmetric_and_homogeneous(
            t in proptest::collection::vec(0.05f64..2.0, 3),
            c in 0.2f64..3.0,
            a in prop_oneof![Just(1.0), Just(2.0), Just(4.0), 0.5f64..6.0],
            k in 1u32..7,
        ) {
            for mu in partitions_of(k, 3) {
                let base = spherical_phi(&mu, &t, a, 3).unwrap();
                let perm = spherical_phi(&mu, &[t[2], t[0], t[1]], a, 3).unwrap();
                prop_assert!((base - perm).abs() <= 1e-13 * base.abs());
                let scaled: Vec<f64> = t.iter().map(|x| c * x).collect();
                let s = spherical_phi(&mu, &scaled, a, 3).unwrap();
                prop_assert!((s - c.powi(k as i32) * base).abs() <= 1e-12 * s.abs());
            }
        }

        #[test]
        fn degree_shells_sum_to_power(
            t in proptest::collection::vec(0.0f64..2.0, 1..4),
            a in prop_oneof![Just(1.0), Just(2.0), Just(4.0)],
            k in 0u32..9,
        ) {
            let jt = JordanType::new(3, a, 0.0).unwrap();
            let shell: f64 = partitions_of(k, t.len())
                .iter()
                .map(|mu| fock_component(mu, &t, &jt).unwrap())
                .sum();
            let s: f64 = t.iter().sum();
            let want = s.powi(k as i32) / libm::tgamma(k as f64 + 1.0);
            prop_assert!((shell - want).abs() <= 1e-12 * want.max(1e-300));
        }
    }
}
