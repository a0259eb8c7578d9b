//! Spectral efficiency: exact bit budgets, the closed-form optimal active
//! fraction, the discrete optimal active count and the large-block limit.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::{bit_budget, IcmParams, ParamError};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeoptError {
    #[error("PSK order must be at least 2, got {0}")]
    PskOrder(u32),
    #[error("composition ratio must be positive and finite, got {0}")]
    Beta(f64),
    #[error("active fraction {alpha} outside (0, min(1, {beta})]")]
    AlphaDomain { alpha: f64, beta: f64 },
    #[error("no feasible active count for N={n}, beta={beta}")]
    Infeasible { n: u32, beta: f64 },
    #[error(transparent)]
    Params(#[from] ParamError),
}

/// `K = alpha N`, `I = beta N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeProblem {
    pub beta: f64,
    pub m: u32,
    pub n: u32,
}

impl SeProblem {
    pub fn new(n: u32, beta: f64, m: u32) -> Result<Self, SeoptError> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(SeoptError::Beta(beta));
        }
        if m < 2 {
            return Err(SeoptError::PskOrder(m));
        }
        Ok(Self { beta, m, n })
    }

    /// Composition total for this block size, `floor(beta N)`.
    pub fn composition_total(&self) -> u32 {
        (self.beta * self.n as f64 + 1e-9).floor() as u32
    }

    /// Largest admissible active count, `min(N, I)`.
    pub fn max_active(&self) -> u32 {
        self.n.min(self.composition_total())
    }

    /// Exact spectral efficiency with `K` active subcarriers.
    pub fn se_with(&self, k: u32) -> Result<f64, SeoptError> {
        let p = IcmParams::payload(self.n, k, self.composition_total(), self.m)?;
        Ok(se_exact(&p))
    }
}

/// Bits per subcarrier with floored index and composition budgets.
pub fn se_exact(p: &IcmParams) -> f64 {
    bit_budget(p).spectral_efficiency(p.n())
}

/// `alpha* = (M(beta+1) - sqrt(M^2 (beta-1)^2 + 4 M beta)) / (2 (M-1))`.
pub fn alpha_star<T: Real>(beta: T, m: u32) -> Result<T, SeoptError> {
    if m < 2 {
        return Err(SeoptError::PskOrder(m));
    }
    if !(beta.is_finite() && beta > T::zero()) {
        return Err(SeoptError::Beta(beta.as_f64()));
    }
    let m = T::of_u64(m as u64);
    let one = T::one();
    let two = T::of(2.0);
    let disc = m * m * (beta - one) * (beta - one) + T::of(4.0) * m * beta;
    Ok((m * (beta + one) - disc.sqrt()) / (two * (m - one)))
}

/// Optimal active count among `floor(alpha* N)` and `ceil(alpha* N)`
/// (clamped to `1..=min(N, I)`), by exact spectral efficiency; ties go to
/// the smaller count.
pub fn k_star(q: &SeProblem) -> Result<u32, SeoptError> {
    let hi = q.max_active();
    if q.n == 0 || hi == 0 {
        return Err(SeoptError::Infeasible {
            n: q.n,
            beta: q.beta,
        });
    }
    let target = alpha_star(q.beta, q.m)? * q.n as f64;
    let clamp = |x: f64| (x.max(1.0) as u32).clamp(1, hi);
    let lo_k = clamp(target.floor());
    let hi_k = clamp(target.ceil());
    let (a, b) = (q.se_with(lo_k)?, q.se_with(hi_k)?);
    Ok(if b > a { hi_k } else { lo_k })
}

fn xlog2x<T: Real>(x: T) -> T {
    if x <= T::zero() {
        T::zero()
    } else {
        x * x.log2()
    }
}

/// Large-block spectral efficiency
/// `H(alpha) + log2(beta^beta / alpha^alpha) - (beta-alpha) log2(beta-alpha) + alpha log2 M`.
pub fn se_asymptotic<T: Real>(beta: T, m: u32, alpha: T) -> Result<T, SeoptError> {
    if m < 2 {
        return Err(SeoptError::PskOrder(m));
    }
    if !(beta.is_finite() && beta > T::zero()) {
        return Err(SeoptError::Beta(beta.as_f64()));
    }
    let top = if beta < T::one() { beta } else { T::one() };
    if !(alpha > T::zero() && alpha <= top) {
        return Err(SeoptError::AlphaDomain {
            alpha: alpha.as_f64(),
            beta: beta.as_f64(),
        });
    }
    let entropy = -xlog2x(alpha) - xlog2x(T::one() - alpha);
    let m = T::of_u64(m as u64);
    Ok(entropy + xlog2x(beta) - xlog2x(alpha) - xlog2x(beta - alpha) + alpha * m.log2())
}

/// One output row of the optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeRow {
    pub n: u32,
    pub beta: f64,
    pub m: u32,
    pub alpha_star: f64,
    pub k_star: u32,
    pub eta_exact: f64,
    pub eta_asymptotic: f64,
}

pub fn optimize(q: &SeProblem) -> Result<SeRow, SeoptError> {
    let a = alpha_star(q.beta, q.m)?;
    let k = k_star(q)?;
    Ok(SeRow {
        n: q.n,
        beta: q.beta,
        m: q.m,
        alpha_star: a,
        k_star: k,
        eta_exact: q.se_with(k)?,
        eta_asymptotic: se_asymptotic(q.beta, q.m, a)?,
    })
}
