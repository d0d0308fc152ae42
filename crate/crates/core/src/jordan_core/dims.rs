use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{log_gindikin_gamma, log_rising, pochhammer_partition, JordanType, LogValue, Partition};
use crate::error::{domain, param, Result};

fn check_len(mu: &Partition, r: usize) -> Result<()> {
    if mu.len() > r {
        return domain(format!("partition {mu} has more than {r} parts"));
    }
    Ok(())
}

/// `ln (x)_n` for real `n >= 0` and `x > 0`.
fn ln_rising_real(x: f64, n: f64) -> f64 {
    if n.fract() == 0.0 && n < 4096.0 {
        log_rising(x, n as u32).log_abs
    } else {
        libm::lgamma(x + n) - libm::lgamma(x)
    }
}

/// `ln d'_mu`, the dimension of the tube-type Peirce component.
pub fn log_dim_tube(mu: &Partition, a: f64, r: usize) -> Result<f64> {
    check_len(mu, r)?;
    let m = mu.padded(r);
    let h = 0.5 * a;
    let mut acc = 0.0;
    for i in 0..r {
        for j in i + 1..r {
            let diff = (m[i] - m[j]) as f64;
            let g = (j - i) as f64;
            acc += ((diff + h * g) / (h * g)).ln();
            let y = 1.0 + h * (g - 1.0);
            acc += ln_rising_real(diff + y, a - 1.0) - ln_rising_real(y, a - 1.0);
        }
    }
    Ok(acc)
}

pub fn dim_tube(mu: &Partition, a: f64, r: usize) -> Result<f64> {
    Ok(log_dim_tube(mu, a, r)?.exp())
}

fn half(a: u32) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(2))
}

fn int(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn rising_exact(x: &BigRational, n: u32) -> BigRational {
    let mut acc = BigRational::one();
    let mut t = x.clone();
    for _ in 0..n {
        acc *= &t;
        t += BigRational::one();
    }
    acc
}

/// Exact `d'_mu` for integer `a`.
pub fn dim_tube_exact(mu: &Partition, a: u32, r: usize) -> Result<BigRational> {
    check_len(mu, r)?;
    if a == 0 {
        return param("a must be positive");
    }
    let m = mu.padded(r);
    let h = half(a);
    let mut acc = BigRational::one();
    for i in 0..r {
        for j in i + 1..r {
            let diff = int((m[i] - m[j]) as u64);
            let hg = &h * int((j - i) as u64);
            acc *= (&diff + &hg) / &hg;
            let y = BigRational::one() + &h * int((j - i - 1) as u64);
            acc *= rising_exact(&(&diff + &y), a - 1) / rising_exact(&y, a - 1);
        }
    }
    Ok(acc)
}

/// `ln d_mu`, the dimension of the irreducible `K`-type indexed by `mu`.
pub fn log_dim_full(mu: &Partition, jt: &JordanType) -> Result<f64> {
    let tube = log_dim_tube(mu, jt.a, jt.r)?;
    let num = pochhammer_partition(jt.d_over_r(), mu, jt.a, jt.r)?;
    let den = pochhammer_partition(jt.dprime_over_r(), mu, jt.a, jt.r)?;
    Ok(tube + num.log_abs - den.log_abs)
}

pub fn dim_full(mu: &Partition, jt: &JordanType) -> Result<f64> {
    Ok(log_dim_full(mu, jt)?.exp())
}

/// Exact `d_mu`; requires integer `a` and `b`.
pub fn dim_full_exact(mu: &Partition, jt: &JordanType) -> Result<BigRational> {
    if !jt.is_integral() {
        return param("exact dimensions need integer a and b");
    }
    let (a, b) = (jt.a as u32, jt.b as u32);
    let mut acc = dim_tube_exact(mu, a, jt.r)?;
    let h = half(a);
    for (j, &mj) in mu.padded(jt.r).iter().enumerate() {
        let base = BigRational::one() + &h * int((jt.r - 1 - j) as u64);
        acc *= rising_exact(&(&base + int(mj as u64)), b) / rising_exact(&base, b);
    }
    debug_assert!(!acc.is_zero());
    Ok(acc)
}

/// Eigenvalue `A_mu` of the universal differential operator on the degree-`mu` component.
pub fn universal_eigenvalue(mu: &Partition, jt: &JordanType, ell: usize) -> Result<LogValue> {
    check_len(mu, ell)?;
    if ell == 0 || ell > jt.r {
        return domain(format!("ell = {ell} outside 1..={}", jt.r));
    }
    let a = jt.a;
    let l = ell as f64;
    let m: Vec<f64> = mu.padded(ell).iter().map(|&x| x as f64).collect();
    let shift = |s: f64| -> Vec<f64> { m.iter().map(|x| x + s).collect() };
    let num = log_gindikin_gamma(ell, a, &shift(jt.d_over_r()))?
        * log_gindikin_gamma(ell, a, &shift(0.5 * a * jt.r as f64))?;
    let den = log_gindikin_gamma(ell, a, &shift(1.0 + 0.5 * a * (l - 1.0)))?
        * log_gindikin_gamma(ell, a, &shift(0.5 * a * l))?;
    Ok(num / den)
}

/// `<lambda + (a/2)(ell-1)>^mu = prod_i (lambda + (a/2)(ell-1) + m_i - (a/2)(i-1))`.
pub fn bracket_eigenvalue(lambda: f64, mu: &Partition, a: f64, ell: usize) -> f64 {
    let base = lambda + 0.5 * a * (ell as f64 - 1.0);
    (0..ell).map(|i| base + mu.part(i) as f64 - 0.5 * a * i as f64).product()
}

/// Parameters `lambda` of the first-order factors `D_lambda` composing the universal operator.
pub fn universal_operator_parameters(jt: &JordanType, ell: usize) -> Result<Vec<f64>> {
    if !jt.is_integral() {
        return param("the factored operator needs integer a and b");
    }
    if ell == 0 || ell > jt.r {
        return domain(format!("ell = {ell} outside 1..={}", jt.r));
    }
    let h = 0.5 * jt.a;
    let mut out: Vec<f64> = (1..=jt.b as u32).map(|t| t as f64 + h * (jt.r - ell) as f64).collect();
    for j in ell + 1..=jt.r {
        let g = (j - ell) as f64;
        out.push(h * g);
        out.extend((1..jt.a as u32).map(|s| s as f64 + h * (g - 1.0)));
    }
    Ok(out)
}

pub fn universal_eigenvalue_factored(mu: &Partition, jt: &JordanType, ell: usize) -> Result<LogValue> {
    check_len(mu, ell)?;
    let mut acc = LogValue::ONE;
    for lam in universal_operator_parameters(jt, ell)? {
        acc = acc * LogValue::from_f64(bracket_eigenvalue(lam, mu, jt.a, ell));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan_core::{partitions_up_to, JordanType};
    use num_traits::ToPrimitive;

    #[test]
    fn small_dimensions() {
        let full22 = JordanType::from_name("full:2,2").unwrap();
        let one = Partition::new(vec![1]).unwrap();
        assert_eq!(dim_full_exact(&one, &full22).unwrap(), int(4));
        let sym3 = JordanType::from_name("sym:3").unwrap();
        // quadratic polynomials on 6-dim space split as 21 = d_(2) + d_(1,1)
        let d2 = dim_full_exact(&Partition::new(vec![2]).unwrap(), &sym3).unwrap();
        let d11 = dim_full_exact(&Partition::new(vec![1, 1]).unwrap(), &sym3).unwrap();
        assert_eq!(d2 + d11, int(21));
    }

    #[test]
    fn float_and_exact_agree() {
        for name in ["sym:3", "full:2,4", "asym:7", "spin:7", "exc:27"] {
            let jt = JordanType::from_name(name).unwrap();
            for mu in partitions_up_to(7, jt.r) {
                let e = dim_full_exact(&mu, &jt).unwrap().to_f64().unwrap();
                let f = dim_full(&mu, &jt).unwrap();
                assert!((e - f).abs() <= 1e-11 * e, "{name} {mu}: {e} vs {f}");
            }
        }
    }

    #[test]
    fn eigenvalue_routes_agree() {
        for name in ["sym:4", "full:3,5", "asym:7", "spin:6", "exc:16", "exc:27"] {
            let jt = JordanType::from_name(name).unwrap();
            for ell in 1..=jt.r {
                for mu in partitions_up_to(6, ell) {
                    let u = universal_eigenvalue(&mu, &jt, ell).unwrap();
                    let f = universal_eigenvalue_factored(&mu, &jt, ell).unwrap();
                    assert_eq!(u.sign, f.sign);
                    assert!((u.log_abs - f.log_abs).abs() < 1e-11, "{name} ell={ell} {mu}");
                }
            }
        }
    }

    #[test]
    fn top_rank_tube_eigenvalue_is_one() {
        let jt = JordanType::from_name("sym:3").unwrap();
        let mu = Partition::new(vec![3, 1]).unwrap();
        assert!(universal_eigenvalue(&mu, &jt, 3).unwrap().log_abs.abs() < 1e-12);
        assert!(universal_operator_parameters(&jt, 3).unwrap().is_empty());
    }
}
