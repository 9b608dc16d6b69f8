//! Characteristic functions: the built-in families, a user-supplied
//! escape hatch, and the moment machinery the truncation rule needs.
//!
//! Built-in cumulants are analytic. Central moments come from the
//! cumulant-to-moment recursion with the first cumulant zeroed, so the
//! truncation range never depends on numerical differentiation.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature;

/// Highest cumulant order carried by a spec.
pub const MAX_CUMULANT_ORDER: usize = 12;

/// Open support interval (alpha, beta); either endpoint may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportInterval {
    lower: f64,
    upper: f64,
}

impl SupportInterval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || lower >= upper {
            return Err(Error::InvalidSpec(format!(
                "support requires lower < upper, got ({lower}, {upper})"
            )));
        }
        Ok(Self { lower, upper })
    }

    pub fn whole_line() -> Self {
        Self {
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
        }
    }

    pub fn positive_half_line() -> Self {
        Self {
            lower: 0.0,
            upper: f64::INFINITY,
        }
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }
}

/// The distribution family behind a spec.
#[derive(Clone)]
pub enum Family {
    Normal {
        mean: f64,
        std_dev: f64,
    },
    TemperedStable {
        c: f64,
        d: f64,
        kappa: f64,
    },
    NormalInverseGaussian {
        gamma: f64,
        theta: f64,
        nu: f64,
    },
    /// User-supplied evaluator; support and cumulants are taken on trust.
    Custom {
        name: String,
        cf: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
    },
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Normal { mean, std_dev } => {
                write!(f, "Normal {{ mean: {mean}, std_dev: {std_dev} }}")
            }
            Family::TemperedStable { c, d, kappa } => {
                write!(f, "TemperedStable {{ c: {c}, d: {d}, kappa: {kappa} }}")
            }
            Family::NormalInverseGaussian { gamma, theta, nu } => {
                write!(f, "NormalInverseGaussian {{ gamma: {gamma}, theta: {theta}, nu: {nu} }}")
            }
            Family::Custom { name, .. } => write!(f, "Custom {{ name: {name:?} }}"),
        }
    }
}

/// How a moment report was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentMethod {
    AnalyticCumulant,
    FiniteDifference,
}

/// Mean and even central moments of a spec.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub mean: f64,
    pub central_moments: BTreeMap<usize, f64>,
    pub method: MomentMethod,
}

/// A distribution described by its characteristic function, with the
/// support interval and leading cumulants needed by the cosine engine.
#[derive(Debug, Clone)]
pub struct CfSpec {
    family: Family,
    support: SupportInterval,
    /// kappa_1 .. kappa_MAX, index 0 holding kappa_1.
    cumulants: Vec<f64>,
}

impl CfSpec {
    pub fn normal(mean: f64, std_dev: f64) -> Result<Self> {
        if !mean.is_finite() || !std_dev.is_finite() || std_dev <= 0.0 {
            return Err(Error::InvalidSpec(format!(
                "normal requires finite mean and std_dev > 0, got ({mean}, {std_dev})"
            )));
        }
        let mut cumulants = vec![0.0; MAX_CUMULANT_ORDER];
        cumulants[0] = mean;
        cumulants[1] = std_dev * std_dev;
        Ok(Self {
            family: Family::Normal { mean, std_dev },
            support: SupportInterval::whole_line(),
            cumulants,
        })
    }

    pub fn standard_normal() -> Self {
        Self::normal(0.0, 1.0).expect("standard normal parameters are valid")
    }

    /// Tempered stable on (0, ∞) with CF exp(cd - c(d^{1/kappa} - 2iu)^kappa).
    pub fn tempered_stable(c: f64, d: f64, kappa: f64) -> Result<Self> {
        if !c.is_finite() || !d.is_finite() || !kappa.is_finite() {
            return Err(Error::InvalidSpec("tempered stable parameters must be finite".into()));
        }
        if c <= 0.0 || d < 0.0 || kappa <= 0.0 || kappa >= 1.0 {
            return Err(Error::InvalidSpec(format!(
                "tempered stable requires c > 0, d >= 0, kappa in (0,1), got ({c}, {d}, {kappa})"
            )));
        }
        // kappa_n = -(-2)^n c kappa(kappa-1)...(kappa-n+1) d^{(kappa-n)/kappa};
        // infinite for d = 0 (pure stable), which truncation later rejects
        let mut cumulants = vec![0.0; MAX_CUMULANT_ORDER];
        let mut falling = 1.0;
        let mut sign_pow = 1.0;
        for n in 1..=MAX_CUMULANT_ORDER {
            falling *= kappa - (n as f64 - 1.0);
            sign_pow *= -2.0;
            cumulants[n - 1] = -sign_pow * c * falling * d.powf((kappa - n as f64) / kappa);
        }
        Ok(Self {
            family: Family::TemperedStable { c, d, kappa },
            support: SupportInterval::positive_half_line(),
            cumulants,
        })
    }

    /// Normal-inverse Gaussian on the whole line with CF
    /// exp(-nu(sqrt(gamma^2 - (theta+iu)^2) - sqrt(gamma^2 - theta^2))).
    pub fn nig(gamma: f64, theta: f64, nu: f64) -> Result<Self> {
        if !gamma.is_finite() || !theta.is_finite() || !nu.is_finite() {
            return Err(Error::InvalidSpec("NIG parameters must be finite".into()));
        }
        if gamma <= 0.0 || nu <= 0.0 || theta.abs() >= gamma {
            return Err(Error::InvalidSpec(format!(
                "NIG requires gamma > 0, nu > 0, |theta| < gamma, got ({gamma}, {theta}, {nu})"
            )));
        }
        // kappa_n = -nu g^(n)(theta) for g(z) = sqrt(gamma^2 - z^2), with
        // (gamma^2 - z^2) g^(n+1) = (2n-1) z g^(n) + n(n-2) g^(n-1)
        let w = gamma * gamma - theta * theta;
        let mut g = vec![0.0; MAX_CUMULANT_ORDER + 2];
        g[0] = w.sqrt();
        g[1] = -theta / w.sqrt();
        for n in 1..=MAX_CUMULANT_ORDER {
            let nf = n as f64;
            g[n + 1] = ((2.0 * nf - 1.0) * theta * g[n] + nf * (nf - 2.0) * g[n - 1]) / w;
        }
        let cumulants = (1..=MAX_CUMULANT_ORDER).map(|n| -nu * g[n]).collect();
        Ok(Self {
            family: Family::NormalInverseGaussian { gamma, theta, nu },
            support: SupportInterval::whole_line(),
            cumulants,
        })
    }

    /// Spec from a user-supplied CF evaluator. `cumulants` lists
    /// kappa_1, kappa_2, ... and must reach at least order 2; missing
    /// higher orders are treated as unavailable rather than zero.
    pub fn custom<F>(
        name: impl Into<String>,
        cf: F,
        support: SupportInterval,
        cumulants: Vec<f64>,
    ) -> Result<Self>
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        if cumulants.len() < 2 {
            return Err(Error::InvalidSpec(
                "custom spec needs at least the first two cumulants".into(),
            ));
        }
        if cumulants.iter().any(|k| k.is_nan()) {
            return Err(Error::InvalidSpec("custom cumulants must not be NaN".into()));
        }
        let mean = cumulants[0];
        if !(support.lower() < mean && mean < support.upper()) {
            return Err(Error::InvalidSpec(format!(
                "mean {mean} lies outside the declared support ({}, {})",
                support.lower(),
                support.upper()
            )));
        }
        if cumulants[1] <= 0.0 {
            return Err(Error::InvalidSpec("variance (second cumulant) must be positive".into()));
        }
        Ok(Self {
            family: Family::Custom {
                name: name.into(),
                cf: Arc::new(cf),
            },
            support,
            cumulants,
        })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn support(&self) -> SupportInterval {
        self.support
    }

    pub fn cumulants(&self) -> &[f64] {
        &self.cumulants
    }

    /// Short human-readable tag for diagnostics and CLI output.
    pub fn label(&self) -> String {
        match &self.family {
            Family::Normal { mean, std_dev } => format!("normal({mean},{std_dev})"),
            Family::TemperedStable { c, d, kappa } => format!("ts({c},{d},{kappa})"),
            Family::NormalInverseGaussian { gamma, theta, nu } => {
                format!("nig({gamma},{theta},{nu})")
            }
            Family::Custom { name, .. } => name.clone(),
        }
    }

    /// Evaluate the characteristic function at a real argument.
    pub fn cf_eval(&self, u: f64) -> Result<Complex64> {
        if !u.is_finite() {
            return Err(Error::InvalidArgument(format!("cf argument must be finite, got {u}")));
        }
        Ok(self.cf(u))
    }

    /// Internal evaluator; callers guarantee a finite argument.
    pub(crate) fn cf(&self, u: f64) -> Complex64 {
        if u == 0.0 {
            // exact unit value keeps the leading cosine coefficient exact
            return Complex64::new(1.0, 0.0);
        }
        match &self.family {
            Family::Normal { mean, std_dev } => {
                let s = std_dev * u;
                Complex64::new(0.0, mean * u).exp() * (-0.5 * s * s).exp()
            }
            Family::TemperedStable { c, d, kappa } => {
                // principal power; the base keeps a positive real part
                let base = Complex64::new(d.powf(1.0 / kappa), -2.0 * u);
                (Complex64::new(c * d, 0.0) - c * base.powf(*kappa)).exp()
            }
            Family::NormalInverseGaussian { gamma, theta, nu } => {
                let z = Complex64::new(*theta, u);
                let root = (Complex64::new(gamma * gamma, 0.0) - z * z).sqrt();
                (-nu * (root - (gamma * gamma - theta * theta).sqrt())).exp()
            }
            Family::Custom { cf, .. } => cf(u),
        }
    }

    /// ln |phi(u)|, closed-form for the built-ins.
    pub(crate) fn log_abs_cf(&self, u: f64) -> f64 {
        match &self.family {
            Family::Normal { std_dev, .. } => {
                let s = std_dev * u;
                -0.5 * s * s
            }
            Family::TemperedStable { c, d, kappa } => {
                let re_base = d.powf(1.0 / kappa);
                let r = re_base.hypot(2.0 * u);
                let th = (-2.0 * u).atan2(re_base);
                c * d - c * r.powf(*kappa) * (kappa * th).cos()
            }
            Family::NormalInverseGaussian { gamma, theta, nu } => {
                let z = Complex64::new(*theta, u);
                let root = (Complex64::new(gamma * gamma, 0.0) - z * z).sqrt();
                -nu * (root.re - (gamma * gamma - theta * theta).sqrt())
            }
            Family::Custom { cf, .. } => cf(u).norm().ln(),
        }
    }

    /// First cumulant.
    pub fn mean(&self) -> f64 {
        self.cumulants[0]
    }

    /// Second cumulant.
    pub fn variance(&self) -> f64 {
        self.cumulants[1]
    }

    /// E[(X - mean)^n] for even n, from the cumulant recursion with the
    /// first cumulant zeroed.
    pub fn central_moment(&self, n: usize) -> Result<f64> {
        if n < 2 || n % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "central moment order must be even and >= 2, got {n}"
            )));
        }
        if n > self.cumulants.len() {
            return Err(Error::InvalidArgument(format!(
                "central moment order {n} exceeds the {} cumulants available",
                self.cumulants.len()
            )));
        }
        Ok(self.central_moments_through(n)[n])
    }

    /// m_0..m_n with m_j = E[(X - mean)^j].
    fn central_moments_through(&self, n: usize) -> Vec<f64> {
        let mut m = vec![0.0; n + 1];
        m[0] = 1.0;
        for j in 1..=n {
            // m_j = sum_k C(j-1, k-1) kappa_k m_{j-k}, kappa_1 := 0
            let mut acc = 0.0;
            let mut binom = 1.0;
            for k in 1..=j {
                if k >= 2 {
                    acc += binom * self.cumulants[k - 1] * m[j - k];
                }
                binom *= (j - k) as f64 / k as f64;
            }
            m[j] = acc;
        }
        m
    }

    /// Mean plus the even central moments up to `max_order`.
    pub fn moment_report(&self, max_order: usize) -> Result<MomentReport> {
        if max_order < 2 || max_order % 2 != 0 || max_order > self.cumulants.len() {
            return Err(Error::InvalidArgument(format!(
                "moment report order must be even, >= 2 and <= {}, got {max_order}",
                self.cumulants.len()
            )));
        }
        let all = self.central_moments_through(max_order);
        let mut central_moments = BTreeMap::new();
        for order in (2..=max_order).step_by(2) {
            let v = all[order];
            if !(v > 0.0) {
                return Err(Error::InvalidSpec(format!(
                    "even central moment of order {order} must be positive, got {v}"
                )));
            }
            central_moments.insert(order, v);
        }
        Ok(MomentReport {
            mean: self.mean(),
            central_moments,
            method: MomentMethod::AnalyticCumulant,
        })
    }

    /// (1/pi) ∫_0^∞ u^{s+1} |phi(u)| du for odd s.
    ///
    /// Closed form for the normal family and for NIG with theta = 0;
    /// otherwise exponent-normalized Gauss–Laguerre with a node-doubling
    /// stability check.
    pub fn abs_cf_tail_integral(&self, s: usize) -> Result<f64> {
        if s % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "smoothness order s must be odd, got {s}"
            )));
        }
        match &self.family {
            Family::Normal { std_dev, .. } => Ok(normal_tail_integral(s, *std_dev)),
            Family::NormalInverseGaussian { gamma, theta, nu } if *theta == 0.0 => {
                Ok(nig_symmetric_tail_integral(s, *gamma, *nu))
            }
            _ => self.tail_integral_quadrature(s),
        }
    }

    /// Gauss–Laguerre evaluation of the tail integral after normalizing
    /// the decay exponent: fit |phi| ~ exp(-c u^q), substitute u = t^{1/q'}
    /// with q' snapped so the power of t is an integer, then rate-scale the
    /// nodes onto the integrand's support.
    fn tail_integral_quadrature(&self, s: usize) -> Result<f64> {
        let sp2 = (s + 2) as f64;
        let (u1, u2) = (50.0, 200.0);
        let (l1, l2) = (-self.log_abs_cf(u1), -self.log_abs_cf(u2));
        if !(l1 > 0.0 && l2 > l1) {
            return Err(Error::QuadratureNonConvergence(format!(
                "|cf| does not decay on [{u1}, {u2}]; tail integral undefined"
            )));
        }
        let q_fit = (l2 / l1).ln() / (u2 / u1).ln();
        let m = ((sp2 / q_fit).round().max(1.0)) as i64;
        let q = sp2 / m as f64;

        // integrand in t: t^{m-1} |phi(t^{1/q})|; locate its peak and the
        // point 45 nats below it on a log grid
        let log_g = |t: f64| (m as f64 - 1.0) * t.ln() + self.log_abs_cf(t.powf(1.0 / q));
        let mut t_peak = 1e-3;
        let mut g_peak = f64::NEG_INFINITY;
        let mut t = 1e-3;
        while t < 1e8 {
            let v = log_g(t);
            if v > g_peak {
                g_peak = v;
                t_peak = t;
            }
            t *= 1.0128; // ~180 points per decade
        }
        let mut t_hi = t_peak;
        while log_g(t_hi) > g_peak - 45.0 && t_hi < 1e9 {
            t_hi *= 1.0128;
        }

        let mut previous: Option<f64> = None;
        for order in [32usize, 64, 128] {
            let rule = quadrature::gauss_laguerre(order);
            let lambda = rule[order - 1].0 / t_hi;
            let terms: Vec<f64> = rule
                .iter()
                .map(|&(x, log_w)| log_w + x + log_g(x / lambda))
                .collect();
            let integral = (quadrature::log_sum_exp(&terms) - (q * lambda).ln()).exp();
            if let Some(prev) = previous {
                if (integral - prev).abs() <= 1e-6 * integral.abs() {
                    return Ok(integral / std::f64::consts::PI);
                }
            }
            previous = Some(integral);
        }
        Err(Error::QuadratureNonConvergence(
            "tail integral failed the node-doubling stability check".into(),
        ))
    }
}

/// ln n!
fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// ln Gamma(n + 1/2) = ln((2n)! sqrt(pi) / (4^n n!))
fn ln_gamma_half_integer(n: usize) -> f64 {
    ln_factorial(2 * n) + 0.5 * std::f64::consts::PI.ln()
        - n as f64 * 4.0f64.ln()
        - ln_factorial(n)
}

/// |phi| = exp(-(sigma u)^2 / 2) gives the Gaussian moment
/// (1/pi) Gamma((s+2)/2) / (2 (sigma^2/2)^{(s+2)/2}).
fn normal_tail_integral(s: usize, std_dev: f64) -> f64 {
    let half = (s + 1) / 2; // (s+2)/2 = half + 1/2
    let a = 0.5 * std_dev * std_dev;
    let exponent = ln_gamma_half_integer(half) - (half as f64 + 0.5) * a.ln();
    (exponent - 2.0f64.ln() - std::f64::consts::PI.ln()).exp()
}

/// Symmetric NIG (theta = 0): |phi(u)| = e^{nu gamma} e^{-nu sqrt(gamma^2+u^2)}
/// gives (1/pi) gamma^{s+2} e^{nu gamma} Gamma((s+2)/2) 2^{(s+1)/2} pi^{-1/2}
/// (nu gamma)^{-(s+1)/2} K_{(s+3)/2}(nu gamma).
fn nig_symmetric_tail_integral(s: usize, gamma: f64, nu: f64) -> f64 {
    let half = (s + 1) / 2; // (s+2)/2 = half + 1/2, (s+3)/2 = half + 1
    let z = nu * gamma;
    let k = quadrature::bessel_k_integer_order(half + 1, z);
    let ln_value = (s as f64 + 2.0) * gamma.ln()
        + z
        + ln_gamma_half_integer(half)
        + (half as f64) * 2.0f64.ln()
        - 0.5 * std::f64::consts::PI.ln()
        - (half as f64) * z.ln()
        + k.ln()
        - std::f64::consts::PI.ln();
    ln_value.exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts_paper() -> CfSpec {
        CfSpec::tempered_stable(1.0, 1.0, 0.75).unwrap()
    }

    fn nig_paper() -> CfSpec {
        CfSpec::nig(1.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn cf_at_zero_is_exactly_one() {
        for spec in [CfSpec::standard_normal(), ts_paper(), nig_paper()] {
            let v = spec.cf_eval(0.0).unwrap();
            assert_eq!(v, Complex64::new(1.0, 0.0), "{}", spec.label());
        }
    }

    #[test]
    fn cf_normal_at_one() {
        let v = CfSpec::standard_normal().cf_eval(1.0).unwrap();
        assert!((v.re - (-0.5f64).exp()).abs() < 1e-15);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn cf_nig_at_one() {
        // exp(-(sqrt(2) - 1)) = 0.66085980140682793
        let v = nig_paper().cf_eval(1.0).unwrap();
        assert!((v.re - 0.66085980140682793).abs() < 1e-14);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn cf_rejects_non_finite_argument() {
        assert!(CfSpec::standard_normal().cf_eval(f64::NAN).is_err());
        assert!(CfSpec::standard_normal().cf_eval(f64::INFINITY).is_err());
    }

    #[test]
    fn construction_rejects_bad_parameters() {
        assert!(CfSpec::normal(0.0, 0.0).is_err());
        assert!(CfSpec::normal(f64::NAN, 1.0).is_err());
        assert!(CfSpec::tempered_stable(0.0, 1.0, 0.75).is_err());
        assert!(CfSpec::tempered_stable(1.0, -1.0, 0.75).is_err());
        assert!(CfSpec::tempered_stable(1.0, 1.0, 1.0).is_err());
        assert!(CfSpec::nig(1.0, 1.0, 1.0).is_err());
        assert!(CfSpec::nig(-1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn tempered_stable_with_d_zero_constructs_but_has_no_moments() {
        let spec = CfSpec::tempered_stable(1.0, 0.0, 0.75).unwrap();
        assert!(!spec.mean().is_finite());
    }

    #[test]
    fn paper_moments() {
        let ts = ts_paper();
        assert!((ts.mean() - 1.5).abs() < 1e-14);
        assert!((ts.central_moment(2).unwrap() - 0.75).abs() < 1e-14);
        let skew = ts.cumulants()[2] / 0.75f64.powf(1.5);
        assert!((skew - 2.8867513459481287).abs() < 1e-12);
        let kurt = ts.central_moment(4).unwrap() / (0.75 * 0.75);
        assert!((kurt - 18.0).abs() < 1e-12);

        let nig = nig_paper();
        assert_eq!(nig.mean(), 0.0);
        assert!((nig.central_moment(2).unwrap() - 1.0).abs() < 1e-14);
        assert!((nig.cumulants()[2]).abs() < 1e-14);
        assert!((nig.central_moment(4).unwrap() - 6.0).abs() < 1e-12);

        let norm = CfSpec::standard_normal();
        assert_eq!(norm.mean(), 0.0);
        assert!((norm.central_moment(4).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn normal_eighth_central_moment_is_double_factorial() {
        // 7!! = 105, cross-checked by numerical integration of the density
        let v = CfSpec::standard_normal().central_moment(8).unwrap();
        assert!((v - 105.0).abs() < 1e-11);
    }

    #[test]
    fn ts_eighth_central_moment() {
        let v = ts_paper().central_moment(8).unwrap();
        assert!((v - 80993.14453125).abs() / 80993.14453125 < 1e-13);
    }

    #[test]
    fn nig_eighth_central_moment() {
        let v = nig_paper().central_moment(8).unwrap();
        assert!((v - 3885.0).abs() < 1e-9);
    }

    #[test]
    fn central_moment_rejects_bad_orders() {
        let spec = CfSpec::standard_normal();
        assert!(spec.central_moment(3).is_err());
        assert!(spec.central_moment(0).is_err());
        assert!(spec.central_moment(14).is_err());
    }

    #[test]
    fn moment_report_lists_even_orders() {
        let r = CfSpec::standard_normal().moment_report(8).unwrap();
        assert_eq!(r.method, MomentMethod::AnalyticCumulant);
        assert_eq!(
            r.central_moments.keys().copied().collect::<Vec<_>>(),
            vec![2, 4, 6, 8]
        );
        // order-2 central moment is the variance from the cumulants
        let spec = CfSpec::standard_normal();
        assert!((r.central_moments[&2] - spec.variance()).abs() <= 1e-10 * spec.variance());
    }

    #[test]
    fn tail_integral_normal_closed_form() {
        // s = 1: (1/pi) sqrt(pi/2)
        let v = CfSpec::standard_normal().abs_cf_tail_integral(1).unwrap();
        let expect = (std::f64::consts::PI / 2.0).sqrt() / std::f64::consts::PI;
        assert!((v - expect).abs() < 1e-14);
        // s = 39, frozen quadrature reference
        let v39 = CfSpec::standard_normal().abs_cf_tail_integral(39).unwrap();
        assert!((v39 - 1.2759410320621231e23).abs() / 1.2759410320621231e23 < 1e-11);
    }

    #[test]
    fn tail_integral_nig_closed_form_matches_reference() {
        let nig = nig_paper();
        let v1 = nig.abs_cf_tail_integral(1).unwrap();
        assert!((v1 - 1.4059015726582234).abs() < 1e-10);
        let v39 = nig.abs_cf_tail_integral(39).unwrap();
        assert!((v39 - 6.9720867222501045e47).abs() / 6.9720867222501045e47 < 1e-10);
    }

    #[test]
    fn tail_integral_quadrature_agrees_with_closed_forms() {
        // force the quadrature path through a custom spec wrapping the
        // same evaluators
        let normal = CfSpec::standard_normal();
        let custom = CfSpec::custom(
            "normal-again",
            {
                let inner = normal.clone();
                move |u| inner.cf(u)
            },
            SupportInterval::whole_line(),
            vec![0.0, 1.0],
        )
        .unwrap();
        for s in [1usize, 39] {
            let a = normal.abs_cf_tail_integral(s).unwrap();
            let b = custom.abs_cf_tail_integral(s).unwrap();
            assert!((a - b).abs() / a < 1e-6, "s={s}: {a} vs {b}");
        }
    }

    #[test]
    fn tail_integral_ts_quadrature() {
        let v1 = ts_paper().abs_cf_tail_integral(1).unwrap();
        assert!((v1 - 28.844705888568408).abs() / 28.844705888568408 < 1e-9);
        let v39 = ts_paper().abs_cf_tail_integral(39).unwrap();
        assert!((v39 - 1.7855891479277942e81).abs() / 1.7855891479277942e81 < 1e-9);
    }

    #[test]
    fn tail_integral_rejects_even_s() {
        assert!(CfSpec::standard_normal().abs_cf_tail_integral(2).is_err());
    }

    #[test]
    fn custom_spec_requires_consistent_mean() {
        let r = CfSpec::custom(
            "bad",
            |_| Complex64::new(1.0, 0.0),
            SupportInterval::positive_half_line(),
            vec![-1.0, 1.0],
        );
        assert!(r.is_err());
    }
}
