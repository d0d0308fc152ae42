use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use lru::LruCache;

use crate::error::{domain, Result};
use crate::jordan_core::{partitions_of, LogValue, Partition};

/// Largest number of variables supported by the evaluation tables.
pub const MAX_VARS: usize = 8;
const MAX_PART: u32 = u16::MAX as u32;
const DEFAULT_CACHE_MB: usize = 256;

pub(crate) fn pack(parts: &[u32]) -> u128 {
    parts.iter().enumerate().fold(0u128, |k, (i, &p)| k | ((p as u128) << (16 * i)))
}

#[derive(Clone, Copy)]
struct PsiEntry {
    key: u128,
    weight: u32,
    psi: f64,
}

/// `prod_{k < count} (alpha (start+k) + leg + 1) / (alpha (start+k) + leg + alpha)`.
fn arm_run(start: u32, count: u32, leg: f64, alpha: f64) -> f64 {
    let c1 = (leg + 1.0) / alpha;
    let c2 = leg / alpha + 1.0;
    if count <= 64 {
        let mut acc = 1.0;
        for k in 0..count {
            let a = (start + k) as f64;
            acc *= (a + c1) / (a + c2);
        }
        acc
    } else {
        let s = start as f64;
        let e = s + count as f64;
        (libm::lgamma(e + c1) - libm::lgamma(s + c1) - libm::lgamma(e + c2) + libm::lgamma(s + c2)).exp()
    }
}

/// Branching coefficient `psi_{lambda/mu}` for a horizontal strip `lambda/mu`.
pub(crate) fn psi(lam: &[u32], mu: &[u32], alpha: f64) -> f64 {
    let lp = |i: usize| lam.get(i).copied().unwrap_or(0);
    let mp = |i: usize| mu.get(i).copied().unwrap_or(0);
    let mut acc = 1.0;
    for i in 0..lam.len() {
        let gap = lam[i] - mp(i);
        if gap == 0 {
            continue;
        }
        // cells of row i outside the strip's columns sit in column runs (lam_{k+1}, mu_k]
        for k in i..lam.len() {
            let (lo, hi) = (lp(k + 1), mp(k));
            if hi <= lo {
                continue;
            }
            let leg = (k - i) as f64;
            let start = mp(i) - hi;
            acc *= arm_run(start, hi - lo, leg, alpha) / arm_run(start + gap, hi - lo, leg, alpha);
        }
    }
    acc
}

/// `ln P_lambda(1^n)` from the hook-content product.
pub fn log_jack_p_at_ones(lam: &Partition, n: usize, alpha: f64) -> f64 {
    if lam.len() > n {
        return f64::NEG_INFINITY;
    }
    let conj = lam.conjugate();
    let mut acc = 0.0;
    for (i, &row) in lam.parts().iter().enumerate() {
        for j in 0..row {
            let arm = (row - j - 1) as f64;
            let leg = (conj.part(j as usize) as usize - i - 1) as f64;
            acc += (n as f64 - i as f64 + alpha * j as f64).ln() - (alpha * arm + leg + 1.0).ln();
        }
    }
    acc
}

struct PsiCache {
    lru: LruCache<(Partition, u64), Arc<Vec<PsiEntry>>>,
    bytes: usize,
}

/// Shared memoization for Jack evaluation.
///
/// Branching coefficients are cached per `(lambda, alpha)` under a byte budget;
/// entries are immutable once inserted.
pub struct JackEngine {
    cache: Mutex<PsiCache>,
    budget: usize,
}

impl JackEngine {
    pub fn with_budget_mb(mb: usize) -> Self {
        JackEngine {
            cache: Mutex::new(PsiCache { lru: LruCache::unbounded(), bytes: 0 }),
            budget: mb.saturating_mul(1 << 20),
        }
    }

    /// Process-wide engine; its budget is read once from `CACHE_MB`.
    pub fn global() -> &'static JackEngine {
        static ENGINE: OnceLock<JackEngine> = OnceLock::new();
        ENGINE.get_or_init(|| {
            let mb = std::env::var("CACHE_MB")
                .ok()
                .and_then(|s| s.trim().parse().ok())
                .unwrap_or(DEFAULT_CACHE_MB);
            JackEngine::with_budget_mb(mb)
        })
    }

    pub fn cached_bytes(&self) -> usize {
        self.cache.lock().unwrap().bytes
    }

    fn psi_entries(&self, lam: &Partition, alpha: f64) -> Arc<Vec<PsiEntry>> {
        let key = (lam.clone(), alpha.to_bits());
        if let Some(hit) = self.cache.lock().unwrap().lru.get(&key) {
            return hit.clone();
        }
        let entries = Arc::new(build_psi_entries(lam.parts(), alpha));
        let size = entries.len() * std::mem::size_of::<PsiEntry>() + 64;
        if size <= self.budget {
            let mut c = self.cache.lock().unwrap();
            while c.bytes + size > self.budget {
                match c.lru.pop_lru() {
                    Some((_, v)) => c.bytes -= v.len() * std::mem::size_of::<PsiEntry>() + 64,
                    None => break,
                }
            }
            if c.lru.put(key, entries.clone()).is_none() {
                c.bytes += size;
            }
        }
        entries
    }

    /// Jack polynomial table at `x` with parameter `alpha`.
    pub fn table(&self, x: &[f64], alpha: f64) -> Result<JackTable<'_>> {
        JackTable::new(self, x, alpha, None)
    }

    /// `P_mu(x)` in the `P` normalization (monic leading monomial).
    pub fn jack_p(&self, mu: &Partition, x: &[f64], alpha: f64) -> Result<f64> {
        if mu.len() > x.len() {
            return Ok(0.0);
        }
        let mut t = JackTable::new(self, x, alpha, Some(mu.clone()))?;
        t.extend_to(mu.weight())?;
        Ok(t.log_p(mu).to_f64())
    }
}

fn build_psi_entries(lam: &[u32], alpha: f64) -> Vec<PsiEntry> {
    let l = lam.len();
    let mut out = Vec::new();
    if l == 0 {
        return out;
    }
    let lower: Vec<u32> = (0..l).map(|i| lam.get(i + 1).copied().unwrap_or(0)).collect();
    let mut mu = lower.clone();
    loop {
        out.push(PsiEntry {
            key: pack(&mu),
            weight: mu.iter().sum(),
            psi: psi(lam, &mu, alpha),
        });
        // odometer over mu_i in [lam_{i+1}, lam_i]
        let mut i = l;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if mu[i] < lam[i] {
                mu[i] += 1;
                break;
            }
            mu[i] = lower[i];
        }
    }
}

/// Values `P_lambda(x / s)` for all partitions with at most `n = len(x)` parts,
/// built degree by degree, where `s = max |x_i|`.
pub struct JackTable<'e> {
    engine: &'e JackEngine,
    alpha: f64,
    n: usize,
    log_scale: f64,
    powers: Vec<Vec<f64>>,
    bound: Option<Partition>,
    levels: Vec<HashMap<u128, f64>>,
    next_degree: u32,
}

impl<'e> JackTable<'e> {
    fn new(engine: &'e JackEngine, x: &[f64], alpha: f64, bound: Option<Partition>) -> Result<Self> {
        if x.is_empty() || x.len() > MAX_VARS {
            return domain(format!("Jack tables support 1..={MAX_VARS} variables, got {}", x.len()));
        }
        if !(alpha > 0.0) {
            return domain("Jack parameter must be positive");
        }
        if x.iter().any(|v| !v.is_finite()) {
            return domain("non-finite evaluation point");
        }
        let s = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let s = if s == 0.0 { 1.0 } else { s };
        Ok(JackTable {
            engine,
            alpha,
            n: x.len(),
            log_scale: s.ln(),
            powers: x.iter().map(|v| vec![1.0, v / s]).collect(),
            bound,
            levels: vec![HashMap::new(); x.len()],
            next_degree: 0,
        })
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> Option<u32> {
        self.next_degree.checked_sub(1)
    }

    fn pow(&mut self, j: usize, e: u32) -> f64 {
        let p = &mut self.powers[j];
        while p.len() <= e as usize {
            let v = p[p.len() - 1] * p[1];
            p.push(v);
        }
        p[e as usize]
    }

    /// Adds all degrees up to and including `k`.
    pub fn extend_to(&mut self, k: u32) -> Result<()> {
        if k > MAX_PART {
            return domain(format!("degree {k} exceeds table limit {MAX_PART}"));
        }
        while self.next_degree <= k {
            let deg = self.next_degree;
            for lam in partitions_of(deg, self.n) {
                if let Some(b) = &self.bound {
                    if !b.contains(&lam) {
                        continue;
                    }
                }
                self.fill(&lam);
            }
            self.next_degree += 1;
        }
        Ok(())
    }

    fn fill(&mut self, lam: &Partition) {
        let key = pack(lam.parts());
        let len = lam.len();
        if len == 0 {
            for lvl in &mut self.levels {
                lvl.insert(key, 1.0);
            }
            return;
        }
        let deg = lam.weight();
        let entries = if len < self.n { self.engine.psi_entries(lam, self.alpha) } else { Arc::new(Vec::new()) };
        for j in 0..self.n {
            self.pow(j, deg);
        }
        for j in len.max(1)..=self.n {
            let v = if j == 1 {
                self.powers[0][deg as usize]
            } else if j == len {
                // P_lam(x_1..x_j) = (x_1 ... x_j)^{lam_j} P_{lam - lam_j}(x_1..x_j)
                let col = lam.part(len - 1);
                let reduced: Vec<u32> = lam.parts().iter().map(|&p| p - col).filter(|&p| p > 0).collect();
                let base = self.levels[j - 1].get(&pack(&reduced)).copied().unwrap_or(0.0);
                (0..j).fold(base, |acc, i| acc * self.powers[i][col as usize])
            } else {
                let pw = &self.powers[j - 1];
                let mut sum = 0.0;
                let mut comp = 0.0;
                for e in entries.iter() {
                    let Some(&prev) = self.levels[j - 2].get(&e.key) else { continue };
                    let term = e.psi * prev * pw[(deg - e.weight) as usize];
                    let t = sum + term;
                    comp += if sum.abs() >= term.abs() { (sum - t) + term } else { (term - t) + sum };
                    sum = t;
                }
                sum + comp
            };
            self.levels[j - 1].insert(key, v);
        }
    }

    /// `P_mu(x)` as a log-magnitude with sign; zero if `mu` has too many parts.
    pub fn log_p(&self, mu: &Partition) -> LogValue {
        if mu.len() > self.n {
            return LogValue::ZERO;
        }
        match self.levels[self.n - 1].get(&pack(mu.parts())) {
            Some(&v) => LogValue::from_f64(v) * LogValue::exp(mu.weight() as f64 * self.log_scale),
            None => LogValue::new(f64::NAN, 1),
        }
    }

    /// `Phi_mu(x) = P_mu(x, 0, ..) / P_mu(1^r)`.
    pub fn log_phi(&self, mu: &Partition, r: usize) -> LogValue {
        self.log_p(mu) / LogValue::exp(log_jack_p_at_ones(mu, r, self.alpha))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn two_variable_p2() {
        let e = JackEngine::with_budget_mb(4);
        for alpha in [0.5, 1.0, 2.0, 3.7] {
            let v = e.jack_p(&p(&[2]), &[0.3, 1.7], alpha).unwrap();
            let want = 0.09 + 2.89 + 2.0 / (1.0 + alpha) * 0.51;
            assert!((v - want).abs() < 1e-14, "alpha={alpha}");
        }
    }

    #[test]
    fn schur_case_matches_bialternant() {
        // alpha = 1 gives Schur functions; s_(2,1)(x,y,z) via determinant ratio
        let e = JackEngine::with_budget_mb(4);
        let x = [0.7, 1.3, 2.1];
        let v = e.jack_p(&p(&[2, 1]), &x, 1.0).unwrap();
        let (a, b, c) = (x[0], x[1], x[2]);
        let want = (a + b) * (a + c) * (b + c);
        assert!((v - want).abs() < 1e-12);
    }

    #[test]
    fn hook_product_matches_recursion() {
        let e = JackEngine::with_budget_mb(4);
        for alpha in [0.5, 1.0, 2.0] {
            let mut t = e.table(&[1.0, 1.0, 1.0], alpha).unwrap();
            t.extend_to(7).unwrap();
            for mu in crate::jordan_core::partitions_up_to(7, 3) {
                let rec = t.log_p(&mu).log_abs;
                let hook = log_jack_p_at_ones(&mu, 3, alpha);
                assert!((rec - hook).abs() < 1e-12, "{mu} alpha={alpha}");
            }
        }
    }

    #[test]
    fn long_runs_use_gamma_closed_form() {
        let direct: f64 = (0..200).map(|k| (0.7 * (3 + k) as f64 + 2.0) / (0.7 * (3 + k) as f64 + 1.7)).product();
        assert!((arm_run(3, 200, 1.0, 0.7) / direct - 1.0).abs() < 1e-11);
    }

    #[test]
    fn cache_respects_budget() {
        let e = JackEngine::with_budget_mb(0);
        e.jack_p(&p(&[5, 3]), &[0.4, 0.9], 2.0).unwrap();
        assert_eq!(e.cached_bytes(), 0);
    }
}
