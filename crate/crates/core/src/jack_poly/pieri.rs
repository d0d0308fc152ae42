use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{domain, Error, Result};
use crate::jack_poly::{log_fock_factor, JackEngine};
use crate::jordan_core::{JordanType, LogValue, Partition};

const MAX_WEIGHT: u32 = 12;
const MAX_CONDITION: f64 = 1e10;
const MAX_RANK: usize = 6;

/// Partitions `nu + eps` (or `nu - eps`) for `eps` in `{0,1}^r`.
fn strip_neighbours(nu: &Partition, r: usize, up: bool) -> Vec<Partition> {
    let base = nu.padded(r);
    let mut out = Vec::new();
    for mask in 0u32..(1 << r) {
        let mut v = base.clone();
        let mut ok = true;
        for (i, x) in v.iter_mut().enumerate() {
            if mask >> i & 1 == 1 {
                if up {
                    *x += 1;
                } else if *x == 0 {
                    ok = false;
                } else {
                    *x -= 1;
                }
            }
        }
        if ok && v.windows(2).all(|w| w[0] >= w[1]) {
            out.push(Partition::from_sorted(v));
        }
    }
    out.sort();
    out
}

/// Deterministic points of the open cone, coordinates in `[0.35, 1.25]`.
fn sample_points(count: usize, r: usize) -> Vec<Vec<f64>> {
    const STEPS: [f64; 8] = [
        0.414_213_562_373_095,
        0.732_050_807_568_877,
        0.236_067_977_499_790,
        0.645_751_311_064_591,
        0.316_624_790_355_400,
        0.605_551_275_463_989,
        0.123_105_625_617_661,
        0.358_898_943_540_674,
    ];
    (1..=count)
        .map(|k| (0..r).map(|i| 0.35 + 0.9 * (k as f64 * STEPS[i % STEPS.len()] + 0.1 * i as f64).fract()).collect())
        .collect()
}

/// Expands `N(e - x) E^mu(x)` in the `E^nu` by point evaluation and least squares.
fn expand(mu: &Partition, jt: &JordanType) -> Result<BTreeMap<Partition, f64>> {
    let targets = strip_neighbours(mu, jt.r, true);
    let top = mu.weight() + jt.r as u32;
    let points = sample_points(3 * targets.len() + 6, jt.r);
    let mut m = DMatrix::<f64>::zeros(points.len(), targets.len());
    let mut rhs = DVector::<f64>::zeros(points.len());
    let fock: Vec<LogValue> = targets.iter().map(|nu| log_fock_factor(nu, jt)).collect::<Result<_>>()?;
    let own = log_fock_factor(mu, jt)?;
    for (k, x) in points.iter().enumerate() {
        let mut table = JackEngine::global().table(x, jt.alpha())?;
        table.extend_to(top)?;
        let lhs = (own * table.log_phi(mu, jt.r)).to_f64() * x.iter().map(|v| 1.0 - v).product::<f64>();
        let row: Vec<f64> = targets.iter().zip(&fock).map(|(nu, f)| (*f * table.log_phi(nu, jt.r)).to_f64()).collect();
        let norm = row.iter().fold(lhs.abs(), |acc, v| acc.max(v.abs()));
        rhs[k] = lhs / norm;
        for (c, v) in row.iter().enumerate() {
            m[(k, c)] = v / norm;
        }
    }
    let scales: Vec<f64> = (0..targets.len()).map(|c| m.column(c).norm()).collect();
    for (c, s) in scales.iter().enumerate() {
        m.column_mut(c).scale_mut(1.0 / s);
    }
    let svd = m.clone().svd(true, true);
    let sv = &svd.singular_values;
    let condition = sv.max() / sv.min();
    if !(condition < MAX_CONDITION) {
        return Err(Error::IllConditioned { condition });
    }
    let sol = svd.solve(&rhs, 0.0).map_err(|e| Error::Domain(e.to_string()))?;
    let residual = (&m * &sol - &rhs).norm() / rhs.norm().max(f64::MIN_POSITIVE);
    if residual > 1e-11 {
        return Err(Error::IllConditioned { condition });
    }
    Ok(targets.into_iter().enumerate().map(|(c, nu)| (nu, sol[c] / scales[c])).collect())
}

/// Coefficients `C_nu^mu` of `N(e - x) E^mu(x) = sum_nu C_nu^mu E^nu(x)`, keyed by `nu`.
/// Only vertical strips `nu / mu` occur.
pub fn pieri_coefficients(mu: &Partition, jt: &JordanType) -> Result<BTreeMap<Partition, f64>> {
    if mu.weight() > MAX_WEIGHT {
        return domain(format!("|mu| = {} exceeds the Pieri guard {MAX_WEIGHT}", mu.weight()));
    }
    if mu.len() > jt.r {
        return domain(format!("{mu} has more than {} parts", jt.r));
    }
    if jt.r > MAX_RANK {
        return domain(format!("Pieri expansions are limited to rank {MAX_RANK}"));
    }
    expand(mu, jt)
}

/// Full row `{C_nu^mu}_mu` for a fixed `nu`; exposed for residual checks.
pub fn pieri_row(nu: &Partition, jt: &JordanType) -> Result<BTreeMap<Partition, f64>> {
    if nu.weight() > MAX_WEIGHT + jt.r as u32 || nu.len() > jt.r {
        return domain(format!("{nu} outside the Pieri guard"));
    }
    strip_neighbours(nu, jt.r, false)
        .into_iter()
        .map(|mu| Ok((mu.clone(), pieri_coefficients(&mu, jt)?.get(nu).copied().unwrap_or(0.0))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_coefficients() {
        let jt = JordanType::new(1, 2.0, 3.0).unwrap();
        for m in 0..8u32 {
            let c = pieri_coefficients(&Partition::new(vec![m]).unwrap(), &jt).unwrap();
            assert_eq!(c.len(), 2);
            assert!((c[&Partition::new(vec![m]).unwrap()] - 1.0).abs() < 1e-10);
            assert!((c[&Partition::new(vec![m + 1]).unwrap()] + (m + 1) as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn empty_partition_gives_elementary_symmetric_functions() {
        use crate::jordan_core::{dim_full, pochhammer_partition};
        for name in ["sym:3", "full:2,3", "asym:6", "exc:27", "spin:7"] {
            let jt = JordanType::from_name(name).unwrap();
            let c = pieri_coefficients(&Partition::empty(), &jt).unwrap();
            assert_eq!(c.len(), jt.r + 1);
            let mut binom = 1.0;
            for i in 0..=jt.r {
                let nu = Partition::new(vec![1; i]).unwrap();
                let want = if i % 2 == 0 { binom } else { -binom }
                    * pochhammer_partition(jt.d_over_r(), &nu, jt.a, jt.r).unwrap().to_f64()
                    / dim_full(&nu, &jt).unwrap();
                assert!((c[&nu] / want - 1.0).abs() < 1e-10, "{name} {nu}: {} vs {want}", c[&nu]);
                binom *= (jt.r - i) as f64 / (i + 1) as f64;
            }
        }
    }

    #[test]
    fn expansion_holds_at_fresh_points() {
        use crate::jack_poly::fock_component;
        let jt = JordanType::from_name("full:3,3").unwrap();
        let mu = Partition::new(vec![3, 1]).unwrap();
        let c = pieri_coefficients(&mu, &jt).unwrap();
        for x in [[0.21, 0.77, 1.9], [2.5, 0.1, 0.6]] {
            let lhs = x.iter().map(|v| 1.0 - v).product::<f64>() * fock_component(&mu, &x, &jt).unwrap();
            let rhs: f64 = c.iter().map(|(nu, v)| v * fock_component(nu, &x, &jt).unwrap()).sum();
            assert!((lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn guard() {
        let jt = JordanType::from_name("sym:2").unwrap();
        assert!(pieri_coefficients(&Partition::new(vec![13]).unwrap(), &jt).is_err());
    }
}
