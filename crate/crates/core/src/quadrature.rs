//! Gauss–Legendre and Gauss–Laguerre rules, plus the modified Bessel
//! function of the second kind for integer orders.
//!
//! Nodes and weights are generated on demand by Newton iteration on the
//! orthogonal-polynomial recurrences; generation cost is negligible next
//! to the integrand evaluations they feed.

/// Gauss–Legendre nodes and weights on [-1, 1].
///
/// Newton iteration on P_n with the Chebyshev initial guess; symmetric
/// nodes are mirrored.
pub(crate) fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 2);
    let mut rule = vec![(0.0, 0.0); n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() <= 1e-15 * x.abs().max(1.0) {
                let (p2, d2) = legendre_with_derivative(n, x);
                dp = d2;
                x -= p2 / d2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule[i] = (-x, w);
        rule[n - 1 - i] = (x, w);
    }
    rule
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrate `f` over [lo, hi] with an `order`-point Gauss–Legendre rule.
pub(crate) fn integrate_legendre<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, order: usize) -> f64 {
    let rule = gauss_legendre(order);
    let c = 0.5 * (hi + lo);
    let h = 0.5 * (hi - lo);
    let mut acc = 0.0;
    for &(x, w) in &rule {
        acc += w * f(c + h * x);
    }
    acc * h
}

/// Gauss–Laguerre nodes and log-weights for the weight function e^{-x}.
///
/// Weights are returned as logarithms; at order 128 the largest node sits
/// near 485 and the raw weight underflows long before the log does.
pub(crate) fn gauss_laguerre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 2);
    let nf = n as f64;
    let mut rule = Vec::with_capacity(n);
    let mut x_prev2 = 0.0;
    let mut x_prev = 0.0;
    for i in 0..n {
        // classical initial guesses, then Newton on L_n
        let mut x = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => x_prev + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = i as f64 - 1.0;
                x_prev + (1.0 + 2.55 * ai) / (1.9 * ai) * (x_prev - x_prev2)
            }
        };
        for _ in 0..100 {
            let (l, d) = laguerre_with_derivative(n, x);
            let step = l / d;
            x -= step;
            if step.abs() <= 1e-14 * x.max(1.0) {
                break;
            }
        }
        // w_i = x_i / ((n+1)^2 L_{n+1}(x_i)^2), taken in logs
        let lnp1 = laguerre_value(n + 1, x);
        let log_w = x.ln() - 2.0 * ((nf + 1.0).ln() + lnp1.abs().ln());
        rule.push((x, log_w));
        x_prev2 = x_prev;
        x_prev = x;
    }
    rule
}

fn laguerre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut l0 = 1.0;
    let mut l1 = 1.0 - x;
    for k in 2..=n {
        let kf = k as f64;
        let l2 = ((2.0 * kf - 1.0 - x) * l1 - (kf - 1.0) * l0) / kf;
        l0 = l1;
        l1 = l2;
    }
    let d = n as f64 * (l1 - l0) / x;
    (l1, d)
}

fn laguerre_value(n: usize, x: f64) -> f64 {
    let mut l0 = 1.0;
    let mut l1 = 1.0 - x;
    for k in 2..=n {
        let kf = k as f64;
        let l2 = ((2.0 * kf - 1.0 - x) * l1 - (kf - 1.0) * l0) / kf;
        l0 = l1;
        l1 = l2;
    }
    l1
}

/// Sum of exp(terms) computed against the largest exponent.
pub(crate) fn log_sum_exp(terms: &[f64]) -> f64 {
    let mx = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !mx.is_finite() {
        return mx;
    }
    let s: f64 = terms.iter().map(|t| (t - mx).exp()).sum();
    mx + s.ln()
}

/// K_n(z), modified Bessel function of the second kind of integer order,
/// via K_n(z) = ∫_0^∞ e^{-z cosh t} cosh(n t) dt.
///
/// The integrand is smooth and unimodal; a fixed high-order rule over a
/// cutoff chosen from the exponent decay gives machine-precision results
/// for the small arguments and moderate orders used here.
pub(crate) fn bessel_k_integer_order(n: usize, z: f64) -> f64 {
    assert!(z > 0.0);
    let nf = n as f64;
    // exponent g(t) = n t - z cosh t peaks near t* = asinh(n/z)
    let t_star = if n == 0 { 0.0 } else { (nf / z).asinh() };
    let g = |t: f64| nf * t - z * t.cosh();
    let g_peak = g(t_star);
    let mut t_hi = t_star.max(1.0);
    while g(t_hi) > g_peak - 45.0 {
        t_hi += 1.0;
    }
    let f = |t: f64| (-z * t.cosh()).exp() * (nf * t).cosh();
    // split at the peak so the rule sees two one-sided slopes
    integrate_legendre(&f, 0.0, t_star.max(0.5), 96) + integrate_legendre(&f, t_star.max(0.5), t_hi, 96)
}
