//! Exact symbolic calculus on `e^{s^lambda} * sum_q c_q s^q` and the rank-one Kempf coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{param, Error, Result};
use crate::jordan_core::JordanType;

pub(crate) fn big(q: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

/// `e^{s^lambda} * sum_q c_q s^q`, or a plain generalized polynomial when `lambda` is `None`.
/// Exponents are exact rationals so that colliding powers merge exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpPolyFunction {
    lambda: Option<Rational64>,
    terms: BTreeMap<Rational64, BigRational>,
}

impl ExpPolyFunction {
    /// `s^gamma e^{s^lambda}`.
    pub fn exp_monomial(lambda: Rational64, gamma: Rational64) -> Result<Self> {
        if lambda <= Rational64::zero() {
            return param("exponential order must be positive");
        }
        Ok(ExpPolyFunction { lambda: Some(lambda), terms: BTreeMap::from([(gamma, BigRational::one())]) })
    }

    /// `s^q`.
    pub fn monomial(q: Rational64) -> Self {
        ExpPolyFunction { lambda: None, terms: BTreeMap::from([(q, BigRational::one())]) }
    }

    pub fn lambda(&self) -> Option<Rational64> {
        self.lambda
    }

    pub fn terms(&self) -> &BTreeMap<Rational64, BigRational> {
        &self.terms
    }

    pub fn coefficient(&self, q: Rational64) -> BigRational {
        self.terms.get(&q).cloned().unwrap_or_else(BigRational::zero)
    }

    fn push(terms: &mut BTreeMap<Rational64, BigRational>, q: Rational64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = terms.entry(q).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            terms.remove(&q);
        }
    }

    pub fn derivative(&self) -> Self {
        let mut out = BTreeMap::new();
        for (&q, c) in &self.terms {
            Self::push(&mut out, q - 1, c * big(q));
            if let Some(l) = self.lambda {
                Self::push(&mut out, q + l - 1, c * big(l));
            }
        }
        ExpPolyFunction { lambda: self.lambda, terms: out }
    }

    pub fn derivative_n(&self, k: u32) -> Self {
        (0..k).fold(self.clone(), |f, _| f.derivative())
    }

    /// Multiplication by `s^alpha`.
    pub fn mul_power(&self, alpha: Rational64) -> Self {
        let terms = self.terms.iter().map(|(&q, c)| (q + alpha, c.clone())).collect();
        ExpPolyFunction { lambda: self.lambda, terms }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = BTreeMap::new();
        for (&q, v) in &self.terms {
            Self::push(&mut out, q, v * c);
        }
        ExpPolyFunction { lambda: self.lambda, terms: out }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.lambda != other.lambda {
            return param("cannot add exp-polynomials with different exponentials");
        }
        let mut out = self.terms.clone();
        for (&q, c) in &other.terms {
            Self::push(&mut out, q, c.clone());
        }
        Ok(ExpPolyFunction { lambda: self.lambda, terms: out })
    }

    pub fn evaluate(&self, s: f64) -> f64 {
        let poly: f64 = self
            .terms
            .iter()
            .map(|(q, c)| c.to_f64().unwrap_or(f64::NAN) * s.powf(q.to_f64().unwrap_or(f64::NAN)))
            .sum();
        match self.lambda {
            Some(l) => poly * s.powf(l.to_f64().unwrap_or(f64::NAN)).exp(),
            None => poly,
        }
    }
}

impl fmt::Display for ExpPolyFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.terms.iter().rev().map(|(q, c)| format!("({c}) s^({q})")).collect();
        let body = if body.is_empty() { "0".to_string() } else { body.join(" + ") };
        match self.lambda {
            Some(l) => write!(f, "e^(s^({l})) [{body}]"),
            None => write!(f, "{body}"),
        }
    }
}

fn integral_params(jt: &JordanType) -> Result<(i64, i64)> {
    if !jt.is_integral() {
        return param(format!("{jt} has non-integral multiplicities; the operator chain needs integer a, b"));
    }
    Ok((jt.a.round() as i64, jt.b.round() as i64))
}

/// The rank-one operator chain
/// `s^{(1-r)a/2} d^b s^{(r-1)a/2+b} prod_{j=2}^r (D_j s + s D_j)/2`
/// with `D_j = s^{a-aj/2} d^a s^{aj/2-1}`.
pub fn rank1_operator(f: &ExpPolyFunction, jt: &JordanType) -> Result<ExpPolyFunction> {
    let (a, b) = integral_params(jt)?;
    let r = jt.r as i64;
    let half = Rational64::new(1, 2);
    let dj = |g: &ExpPolyFunction, j: i64| {
        g.mul_power(half * (a * j) - 1).derivative_n(a as u32).mul_power(Rational64::from(a) - half * (a * j))
    };
    let mut g = f.clone();
    for j in 2..=r {
        let left = dj(&g.mul_power(Rational64::one()), j);
        let right = dj(&g, j).mul_power(Rational64::one());
        g = left.add(&right)?.scale(&BigRational::new(1.into(), 2.into()));
    }
    Ok(g
        .mul_power(half * ((r - 1) * a) + b)
        .derivative_n(b as u32)
        .mul_power(half * ((1 - r) * a)))
}

/// Exact coefficients `b_0..b_{p-2}` of the rank-one Kempf expansion
/// `e^{-nu t^lambda} K(t) / nu^{p-1} ~ sum_j b_j / (nu t^lambda)^j`.
pub fn rank1_kempf_coeffs(jt: &JordanType, lambda: Rational64) -> Result<Vec<BigRational>> {
    let (a, b) = integral_params(jt)?;
    let deg = a * (jt.r as i64 - 1) + b;
    let gamma = -lambda * deg;
    let q = rank1_operator(&ExpPolyFunction::exp_monomial(lambda, gamma)?, jt)?;
    let mut poly = vec![BigRational::zero(); deg as usize + 1];
    for (&e, c) in q.terms() {
        let i = (e - gamma) / lambda;
        if !i.is_integer() || i.is_negative() || i > Rational64::from(deg) {
            return Err(Error::Domain(format!("unexpected power s^({e}) in the operator image")));
        }
        poly[i.to_integer() as usize] = c.clone();
    }
    let lead = big(lambda).pow(deg as i32);
    Ok((0..=deg as usize).map(|j| &poly[deg as usize - j] / &lead).collect())
}

pub fn rank1_kempf_coeffs_f64(jt: &JordanType, lambda: Rational64) -> Result<Vec<f64>> {
    Ok(rank1_kempf_coeffs(jt, lambda)?.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect())
}

/// Reads a positive rational such as `2`, `3/2` or `0.75`.
pub fn parse_rational(s: &str) -> Result<Rational64> {
    let bad = || Error::Parameter(format!("'{s}' is not a rational number"));
    let q = if let Some((n, d)) = s.split_once('/') {
        let (n, d): (i64, i64) = (n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?);
        if d == 0 {
            return Err(bad());
        }
        Rational64::new(n, d)
    } else if let Some((int, frac)) = s.trim().split_once('.') {
        if frac.len() > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10i64.pow(frac.len() as u32);
        let whole: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let f: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let sign = if int.starts_with('-') { -1 } else { 1 };
        Rational64::new(whole * den + sign * f, den)
    } else {
        Rational64::from(s.trim().parse::<i64>().map_err(|_| bad())?)
    };
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan_core::{classified_table, universal_eigenvalue, Partition};

    #[test]
    fn derivative_of_exp() {
        let f = ExpPolyFunction::exp_monomial(Rational64::from(2), Rational64::zero()).unwrap();
        let g = f.derivative_n(2);
        // (e^{s^2})'' = (2 + 4 s^2) e^{s^2}
        assert_eq!(g.coefficient(Rational64::zero()), BigRational::from_integer(2.into()));
        assert_eq!(g.coefficient(Rational64::from(2)), BigRational::from_integer(4.into()));
        assert_eq!(g.terms().len(), 2);
        let s = 0.7;
        assert!((g.evaluate(s) - (2.0 + 4.0 * s * s) * (s * s).exp()).abs() < 1e-12);
    }

    #[test]
    fn chain_acts_by_universal_eigenvalue() {
        for name in ["sym:3", "spin:6", "full:2,4", "asym:5", "exc:27", "spin:5"] {
            let jt = JordanType::from_name(name).unwrap();
            for m in 0..7i64 {
                let img = rank1_operator(&ExpPolyFunction::monomial(Rational64::from(m)), &jt).unwrap();
                assert!(img.terms().keys().all(|&q| q == Rational64::from(m)), "{name} m={m}: {img}");
                let c = img.coefficient(Rational64::from(m)).to_f64().unwrap();
                let mu = Partition::new(vec![m as u32]).unwrap();
                let want = universal_eigenvalue(&mu, &jt, 1).unwrap().to_f64();
                assert!((c / want - 1.0).abs() < 1e-12, "{name} m={m}: {c} vs {want}");
            }
        }
    }

    #[test]
    fn leading_kempf_coefficient_is_one() {
        for e in classified_table() {
            let jt = JordanType::from_name(&e.name).unwrap();
            if jt.p() > 12.0 {
                continue;
            }
            for lam in [Rational64::one(), Rational64::from(2), Rational64::new(3, 2)] {
                let b = rank1_kempf_coeffs(&jt, lam).unwrap();
                assert_eq!(b.len() as f64, jt.p() - 1.0);
                assert!(b[0].is_one(), "{} lambda={lam}", e.name);
            }
        }
    }

    #[test]
    fn degenerate_chains() {
        let jt = JordanType::new(1, 1.0, 0.0).unwrap();
        let b = rank1_kempf_coeffs(&jt, Rational64::new(5, 3)).unwrap();
        assert_eq!(b, vec![BigRational::one()]);
        // r = 1, lambda = 1: d^b s^b applied to s^{-b} e^s leaves only the top power
        let jt = JordanType::new(1, 1.0, 3.0).unwrap();
        let b = rank1_kempf_coeffs(&jt, Rational64::one()).unwrap();
        assert!(b[0].is_one() && b[1..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/2").unwrap(), Rational64::new(3, 2));
        assert_eq!(parse_rational("0.75").unwrap(), Rational64::new(3, 4));
        assert_eq!(parse_rational("2").unwrap(), Rational64::from(2));
        assert!(parse_rational("pi").is_err());
        assert!(parse_rational("1/0").is_err());
    }
}
