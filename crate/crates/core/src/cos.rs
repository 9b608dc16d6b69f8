//! The cosine engine: truncation range from central moments, term count
//! from the tail-integral bound, coefficients from CF evaluations, and
//! evaluation of the approximate density and CDF.

use crate::cf::CfSpec;
use crate::error::{Error, Result};

/// Tolerances and tuning knobs for a cosine build.
#[derive(Debug, Clone, PartialEq)]
pub struct ToleranceConfig {
    /// CDF sup-norm tolerance.
    pub eps: f64,
    /// Quantile tolerance for the adaptive refinement loop.
    pub delta: f64,
    /// Even moment order used by the truncation rule.
    pub moment_order: usize,
    /// Odd smoothness order used by the term-count rule.
    pub smoothness_order: usize,
    /// Fixed term count, bypassing the term-count rule.
    pub term_count_override: Option<usize>,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            eps: 5e-3,
            delta: 0.1,
            moment_order: 8,
            smoothness_order: 39,
            term_count_override: None,
        }
    }
}

impl ToleranceConfig {
    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_term_count_override(mut self, n: usize) -> Self {
        self.term_count_override = Some(n);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 0.5 && self.eps.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "eps must lie in (0, 1/2), got {}",
                self.eps
            )));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "delta must be positive, got {}",
                self.delta
            )));
        }
        if self.moment_order < 2 || self.moment_order % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "moment order must be even and >= 2, got {}",
                self.moment_order
            )));
        }
        if self.smoothness_order % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "smoothness order must be odd, got {}",
                self.smoothness_order
            )));
        }
        if self.term_count_override == Some(0) {
            return Err(Error::InvalidArgument("term count override must be positive".into()));
        }
        Ok(())
    }
}

/// Truncation interval together with the unclamped half width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationRange {
    pub a: f64,
    pub b: f64,
    /// The moment-rule half width before clamping to the support.
    pub half_width: f64,
}

/// a = (mu - ell) ∨ alpha, b = (mu + ell) ∧ beta with
/// ell = (2 E[(X-mu)^n] / eps)^{1/n}.
pub fn truncation_range(spec: &CfSpec, cfg: &ToleranceConfig) -> Result<TruncationRange> {
    cfg.validate()?;
    let moment = spec.central_moment(cfg.moment_order)?;
    let ell = (2.0 * moment / cfg.eps).powf(1.0 / cfg.moment_order as f64);
    if !ell.is_finite() || ell <= 0.0 {
        return Err(Error::DegenerateRange {
            a: f64::NAN,
            b: f64::NAN,
        });
    }
    let mu = spec.mean();
    let a = (mu - ell).max(spec.support().lower());
    let b = (mu + ell).min(spec.support().upper());
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::DegenerateRange { a, b });
    }
    Ok(TruncationRange { a, b, half_width: ell })
}

/// Smallest admissible term count for half range L = (b-a)/2, or the
/// configured override. Evaluated in logs; 2^{s+5/2} L^{s+2} overflows a
/// double well before s reaches its default.
pub fn choose_term_count(spec: &CfSpec, cfg: &ToleranceConfig, half_range: f64) -> Result<usize> {
    cfg.validate()?;
    if let Some(n) = cfg.term_count_override {
        return Ok(n);
    }
    if !(half_range > 0.0 && half_range.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "half range must be positive, got {half_range}"
        )));
    }
    let s = cfg.smoothness_order as f64;
    let integral = spec.abs_cf_tail_integral(cfg.smoothness_order)?;
    let ln2 = std::f64::consts::LN_2;
    let lnpi = std::f64::consts::PI.ln();
    let ln_bound = (integral.ln()
        + (s + 2.5) * ln2
        + (s + 2.0) * half_range.ln()
        + 12f64.ln()
        - s.ln()
        - (s + 1.0) * lnpi
        - cfg.eps.ln())
        / s;
    let bound = ln_bound.exp();
    if !bound.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "term-count bound is not finite (ln = {ln_bound})"
        )));
    }
    Ok((bound.ceil() as usize).max(1))
}

/// An immutable cosine expansion of a density on [a, b].
#[derive(Debug, Clone)]
pub struct CosApproximation {
    spec: CfSpec,
    a: f64,
    b: f64,
    half_width: f64,
    eps: f64,
    coeffs: Vec<f64>,
    term_count_overridden: bool,
}

impl CosApproximation {
    /// Build the expansion: range from the moment rule, term count from
    /// the tail-integral rule (or the override), one CF evaluation per
    /// coefficient.
    pub fn build(spec: &CfSpec, cfg: &ToleranceConfig) -> Result<Self> {
        let range = truncation_range(spec, cfg)?;
        let n = choose_term_count(spec, cfg, 0.5 * (range.b - range.a))?;
        let width = range.b - range.a;
        let mut coeffs = Vec::with_capacity(n + 1);
        // c_0 = (2/(b-a)) Re{phi(0)} with phi(0) = 1 exactly
        coeffs.push(2.0 / width);
        for k in 1..=n {
            let kf = k as f64;
            let u = kf * std::f64::consts::PI / width;
            let phase = -kf * range.a * std::f64::consts::PI / width;
            let v = spec.cf(u);
            coeffs.push(2.0 / width * (v.re * phase.cos() - v.im * phase.sin()));
        }
        Ok(Self {
            spec: spec.clone(),
            a: range.a,
            b: range.b,
            half_width: range.half_width,
            eps: cfg.eps,
            coeffs,
            term_count_overridden: cfg.term_count_override.is_some(),
        })
    }

    pub fn spec(&self) -> &CfSpec {
        &self.spec
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Unclamped moment-rule half width.
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn mean(&self) -> f64 {
        self.spec.mean()
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn term_count_overridden(&self) -> bool {
        self.term_count_overridden
    }

    /// The expansion density; zero outside [a, b]. Truncation can leave
    /// small negative lobes near the endpoints, which are returned as-is.
    pub fn density(&self, x: f64) -> f64 {
        if x < self.a || x > self.b {
            return 0.0;
        }
        let width = self.b - self.a;
        let base = std::f64::consts::PI * (x - self.a) / width;
        let mut acc = 0.5 * self.coeffs[0];
        for (k, &c) in self.coeffs.iter().enumerate().skip(1) {
            acc += c * (k as f64 * base).cos();
        }
        acc
    }

    /// Integral of the expansion density from a to y; 0 at or below a,
    /// exactly c_0 (b-a)/2 at or beyond b.
    pub fn cdf(&self, y: f64) -> f64 {
        if y <= self.a {
            return 0.0;
        }
        let width = self.b - self.a;
        if y >= self.b {
            // all sine terms vanish at b; skip their round-off
            return 0.5 * self.coeffs[0] * width;
        }
        let t = y - self.a;
        let base = std::f64::consts::PI * t / width;
        let mut acc = 0.5 * self.coeffs[0] * t;
        let scale = width / std::f64::consts::PI;
        for (k, &c) in self.coeffs.iter().enumerate().skip(1) {
            let kf = k as f64;
            acc += c * scale / kf * (kf * base).sin();
        }
        acc
    }
}
