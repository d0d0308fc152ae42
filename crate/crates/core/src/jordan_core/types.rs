use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{domain, param, Error, Result};

/// Structure constants `(r, a, b)` of a simple Jordan triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JordanType {
    pub r: usize,
    pub a: f64,
    pub b: f64,
    pub classified: bool,
    pub name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedEntry {
    pub name: String,
    pub r: usize,
    pub a: u32,
    pub b: u32,
}

static TABLE: OnceLock<Vec<ClassifiedEntry>> = OnceLock::new();

/// Named instances of the classical and exceptional families.
pub fn classified_table() -> &'static [ClassifiedEntry] {
    TABLE.get_or_init(|| {
        serde_json::from_str(include_str!("../../data/classified_types.json"))
            .expect("bundled type table is valid JSON")
    })
}

fn is_int(x: f64) -> bool {
    x.fract() == 0.0
}

fn family_member(r: usize, a: f64, b: f64) -> bool {
    if !is_int(b) || b < 0.0 {
        return false;
    }
    if r == 1 {
        return true;
    }
    let ai = a as i64;
    match (is_int(a), ai, b as i64) {
        (true, 1, 0) | (true, 2, _) | (true, 4, 0) | (true, 4, 2) => true,
        (true, _, 0) if r == 2 && ai >= 1 => true,
        (true, 6, 4) if r == 2 => true,
        (true, 8, 0) if r == 3 => true,
        _ => false,
    }
}

impl JordanType {
    pub fn new(r: usize, a: f64, b: f64) -> Result<Self> {
        if r == 0 {
            return param("rank r must be at least 1");
        }
        if !(a > 0.0 && a.is_finite()) {
            return param(format!("a = {a} must be positive"));
        }
        if !(b >= 0.0 && b.is_finite()) {
            return param(format!("b = {b} must be nonnegative"));
        }
        Ok(JordanType { r, a, b, classified: family_member(r, a, b), name: None })
    }

    /// Parses `sym:r`, `full:r,s`, `asym:n`, `spin:d`, `exc:16`, `exc:27`.
    pub fn from_name(name: &str) -> Result<Self> {
        let bad = || Error::UnknownType(name.to_string());
        let (fam, arg) = name.split_once(':').ok_or_else(bad)?;
        let ints: Vec<usize> = arg
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        let (r, a, b) = match (fam, ints.as_slice()) {
            ("sym", [r]) if *r >= 1 => (*r, 1.0, 0.0),
            ("full", [r, s]) if *r >= 1 && r <= s => (*r, 2.0, (s - r) as f64),
            ("asym", [n]) if *n >= 2 => (n / 2, 4.0, 2.0 * (n % 2) as f64),
            ("spin", [d]) if *d >= 3 => (2, *d as f64 - 2.0, 0.0),
            ("exc", [16]) => (2, 6.0, 4.0),
            ("exc", [27]) => (3, 8.0, 0.0),
            _ => return Err(bad()),
        };
        let mut jt = JordanType::new(r, a, b)?;
        jt.classified = true;
        jt.name = Some(name.to_string());
        Ok(jt)
    }

    pub fn d(&self) -> f64 {
        self.r as f64 * self.d_over_r()
    }

    pub fn d_over_r(&self) -> f64 {
        1.0 + 0.5 * self.a * (self.r as f64 - 1.0) + self.b
    }

    /// Genus `p = 2 + a(r-1) + b`.
    pub fn p(&self) -> f64 {
        2.0 + self.a * (self.r as f64 - 1.0) + self.b
    }

    pub fn dprime_over_r(&self) -> f64 {
        1.0 + 0.5 * self.a * (self.r as f64 - 1.0)
    }

    pub fn dprime(&self) -> f64 {
        self.r as f64 * self.dprime_over_r()
    }

    pub fn is_tube(&self) -> bool {
        self.b == 0.0
    }

    pub fn is_integral(&self) -> bool {
        is_int(self.a) && is_int(self.b)
    }

    /// The tube-type Peirce 2-space of a rank-`ell` tripotent, type `(ell, a, 0)`.
    pub fn peirce_subtype(&self, ell: usize) -> Result<JordanType> {
        if ell == 0 || ell > self.r {
            return domain(format!("ell = {ell} outside 1..={}", self.r));
        }
        let mut sub = JordanType::new(ell, self.a, 0.0)?;
        sub.classified = self.classified && family_member(ell, self.a, 0.0);
        Ok(sub)
    }

    pub fn alpha(&self) -> f64 {
        2.0 / self.a
    }

    pub fn label(&self) -> String {
        match &self.name {
            Some(n) => n.clone(),
            None => format!("(r={}, a={}, b={})", self.r, self.a, self.b),
        }
    }
}

impl fmt::Display for JordanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Dimension data of the Kepler manifold of rank-`ell` elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeplerRank {
    pub ell: usize,
    /// `d_ell`, complex dimension of the manifold.
    pub d: f64,
    /// `d'_ell`, dimension of the Peirce 2-space.
    pub dprime: f64,
    /// `d''_ell`, dimension of the Peirce 1-space.
    pub dsecond: f64,
}

pub fn derive_invariants(jt: &JordanType, ell: usize) -> Result<KeplerRank> {
    if ell == 0 || ell > jt.r {
        return domain(format!("ell = {ell} outside 1..={}", jt.r));
    }
    let l = ell as f64;
    let dprime = l * (1.0 + 0.5 * jt.a * (l - 1.0));
    let dsecond = l * (jt.a * (jt.r as f64 - l) + jt.b);
    Ok(KeplerRank { ell, d: dprime + dsecond, dprime, dsecond })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_types() {
        let s = JordanType::from_name("spin:8").unwrap();
        assert_eq!((s.r, s.a, s.b), (2, 6.0, 0.0));
        assert_eq!(s.d(), 8.0);
        let e = JordanType::from_name("exc:16").unwrap();
        assert_eq!(e.d(), 16.0);
        assert_eq!(e.p(), 12.0);
        let f = JordanType::from_name("full:2,5").unwrap();
        assert_eq!(f.d(), 10.0);
        assert_eq!(JordanType::from_name("asym:7").unwrap().d(), 21.0);
        assert!(JordanType::from_name("spin:x").is_err());
        assert!(JordanType::from_name("full:3,2").is_err());
    }

    #[test]
    fn table_entries_match_names() {
        for e in classified_table() {
            let jt = JordanType::from_name(&e.name).unwrap();
            assert_eq!((jt.r, jt.a, jt.b), (e.r, e.a as f64, e.b as f64), "{}", e.name);
            assert!(JordanType::new(e.r, e.a as f64, e.b as f64).unwrap().classified);
        }
        assert!(!JordanType::new(3, 3.0, 0.0).unwrap().classified);
    }

    #[test]
    fn rank_one_manifold_dimension() {
        for e in classified_table() {
            let jt = JordanType::from_name(&e.name).unwrap();
            let k = derive_invariants(&jt, 1).unwrap();
            assert_eq!(k.d, jt.p() - 1.0);
            let top = derive_invariants(&jt, jt.r).unwrap();
            assert_eq!(top.d, jt.d());
            assert!((top.dprime / jt.r as f64 - (jt.p() - jt.d_over_r())).abs() < 1e-12);
        }
    }
}
