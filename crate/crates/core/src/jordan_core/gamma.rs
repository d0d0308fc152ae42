use std::f64::consts::PI;
use std::ops::{Div, Mul, Neg};

use serde::{Deserialize, Serialize};

use super::Partition;
use crate::error::{Error, Result};

/// A real number stored as `sign * exp(log_abs)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogValue {
    pub log_abs: f64,
    pub sign: i8,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue { log_abs: f64::NEG_INFINITY, sign: 0 };
    pub const ONE: LogValue = LogValue { log_abs: 0.0, sign: 1 };

    pub fn new(log_abs: f64, sign: i8) -> Self {
        if sign == 0 || log_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogValue { log_abs, sign: sign.signum() }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogValue { log_abs: x.abs().ln(), sign: if x > 0.0 { 1 } else { -1 } }
        }
    }

    pub fn exp(log: f64) -> Self {
        LogValue::new(log, 1)
    }

    pub fn to_f64(self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            self.sign as f64 * self.log_abs.exp()
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn powf(self, e: f64) -> Self {
        if self.sign < 0 {
            return LogValue::new(f64::NAN, 1);
        }
        if self.sign == 0 {
            return if e == 0.0 { Self::ONE } else { Self::ZERO };
        }
        LogValue::new(self.log_abs * e, 1)
    }

    pub fn abs(self) -> Self {
        LogValue::new(self.log_abs, self.sign.abs())
    }

    pub fn add(self, other: LogValue) -> LogValue {
        if self.sign == 0 {
            return other;
        }
        if other.sign == 0 {
            return self;
        }
        let (hi, lo) = if self.log_abs >= other.log_abs { (self, other) } else { (other, self) };
        let r = (lo.log_abs - hi.log_abs).exp();
        let m = if hi.sign == lo.sign { 1.0 + r } else { 1.0 - r };
        if m == 0.0 {
            return Self::ZERO;
        }
        LogValue::new(hi.log_abs + m.ln(), hi.sign)
    }

    pub fn sub(self, other: LogValue) -> LogValue {
        self.add(-other)
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, o: LogValue) -> LogValue {
        if self.sign == 0 || o.sign == 0 {
            return LogValue::ZERO;
        }
        LogValue::new(self.log_abs + o.log_abs, self.sign * o.sign)
    }
}

/// Division by zero yields an infinite magnitude.
impl Div for LogValue {
    type Output = LogValue;
    fn div(self, o: LogValue) -> LogValue {
        if self.sign == 0 {
            return LogValue::ZERO;
        }
        if o.sign == 0 {
            return LogValue::new(f64::INFINITY, self.sign);
        }
        LogValue::new(self.log_abs - o.log_abs, self.sign * o.sign)
    }
}

impl Neg for LogValue {
    type Output = LogValue;
    fn neg(self) -> LogValue {
        LogValue { log_abs: self.log_abs, sign: -self.sign }
    }
}

pub fn is_gamma_pole(x: f64) -> bool {
    let n = x.round();
    n <= 0.0 && (x - n).abs() <= 1e-12 * x.abs().max(1.0)
}

/// `(ln|Gamma(x)|, sign Gamma(x))`, or `None` at a pole.
pub fn ln_gamma(x: f64) -> Option<(f64, i8)> {
    if is_gamma_pole(x) {
        return None;
    }
    let (v, s) = libm::lgamma_r(x);
    Some((v, if s < 0 { -1 } else { 1 }))
}

/// `Gamma_r(s) = (2 pi)^{r(r-1)a/4} prod_j Gamma(s_j - (j-1)a/2)` for a vector argument.
pub fn log_gindikin_gamma(r: usize, a: f64, s: &[f64]) -> Result<LogValue> {
    if s.len() != r {
        return Err(Error::Parameter(format!("Gamma_r needs {r} arguments, got {}", s.len())));
    }
    let mut acc = LogValue::exp(0.25 * (r * r.saturating_sub(1)) as f64 * a * (2.0 * PI).ln());
    for (j, &sj) in s.iter().enumerate() {
        let arg = sj - 0.5 * a * j as f64;
        let (v, sg) = ln_gamma(arg).ok_or(Error::GammaPole { index: j, argument: arg })?;
        acc = acc * LogValue::new(v, sg);
    }
    Ok(acc)
}

pub fn log_gindikin_gamma_scalar(r: usize, a: f64, s: f64) -> Result<LogValue> {
    log_gindikin_gamma(r, a, &vec![s; r])
}

/// Rising factorial `(x)_n`.
pub fn log_rising(x: f64, n: u32) -> LogValue {
    if n == 0 {
        return LogValue::ONE;
    }
    if is_gamma_pole(x) {
        let k = -x.round();
        if n as f64 > k {
            return LogValue::ZERO;
        }
        let (a, _) = libm::lgamma_r(k + 1.0);
        let (b, _) = libm::lgamma_r(k - n as f64 + 1.0);
        return LogValue::new(a - b, if n.is_multiple_of(2) { 1 } else { -1 });
    }
    if n <= 256 {
        let mut log = 0.0;
        let mut prod = 1.0f64;
        for i in 0..n {
            prod *= x + i as f64;
            if !(1e-150..=1e150).contains(&prod.abs()) {
                log += prod.abs().ln();
                prod = prod.signum();
            }
        }
        return LogValue::new(log + prod.abs().ln(), if prod < 0.0 { -1 } else { 1 });
    }
    let (a, sa) = libm::lgamma_r(x + n as f64);
    let (b, sb) = libm::lgamma_r(x);
    LogValue::new(a - b, (sa * sb) as i8)
}

/// Generalized Pochhammer symbol `(s)_mu = prod_j (s - (j-1)a/2)_{m_j}` with `r` rows.
pub fn pochhammer_partition(s: f64, mu: &Partition, a: f64, r: usize) -> Result<LogValue> {
    if mu.len() > r {
        return Err(Error::Domain(format!("partition {mu} has more than {r} parts")));
    }
    let mut acc = LogValue::ONE;
    for (j, &m) in mu.parts().iter().enumerate() {
        acc = acc * log_rising(s - 0.5 * a * j as f64, m);
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}
