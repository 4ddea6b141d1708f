//! Asymptotics of `I(λ) = ∫ e^{-λ f(x)} g(x) log‖x‖ dx` as `λ → ∞` for
//! phases `f = ‖x‖² + R(x)` with `R = O(‖x‖⁴)`, and a brute-force polar
//! quadrature oracle for the same integral.
//!
//! Expanding `e^{-λR} = Σ_j (-λR)^j / j!` and integrating monomials against
//! `e^{-λ‖x‖²} log‖x‖` gives
//! `I(λ) ~ Σ_k (a_k log λ + b_k) λ^{-m/2-k/2}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{gauss_legendre, integrate_panels, AdaptiveConfig};
use crate::scalar::{Lin3, Scalar};
use crate::series::{gauss_log_moment_reduced, gauss_moment_reduced, MultiIndex, TruncatedSeries};

/// One level `k` of the expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogEntry {
    pub k: u32,
    pub a: f64,
    pub b: f64,
}

/// `Σ_k (a_k log λ + b_k) λ^{-m/2-k/2}`, entries sorted by `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogExpansion {
    pub m: usize,
    pub entries: Vec<LogEntry>,
}

impl LogExpansion {
    pub fn entry(&self, k: u32) -> Option<&LogEntry> {
        self.entries.iter().find(|e| e.k == k)
    }
}

/// Exact form of a level: `a_k = π^{m/2} a`, `b_k = π^{m/2} (b.one + b.euler γ + b.ln2 ln 2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedEntry<S> {
    pub k: u32,
    pub a: S,
    pub b: Lin3<S>,
}

/// The expansion with the common factor `π^{m/2}` removed and the
/// transcendental constants kept symbolic.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedLogExpansion<S> {
    pub m: usize,
    pub entries: Vec<ReducedEntry<S>>,
}

impl<S: Scalar> ReducedLogExpansion<S> {
    pub fn to_float(&self) -> LogExpansion {
        let p = std::f64::consts::PI.powf(self.m as f64 / 2.0);
        LogExpansion {
            m: self.m,
            entries: self
                .entries
                .iter()
                .map(|e| LogEntry {
                    k: e.k,
                    a: p * e.a.to_f64(),
                    b: p * e.b.to_f64(),
                })
                .collect(),
        }
    }
}

fn negligible<S: Scalar>(c: &S) -> bool {
    c.is_zero() || c.to_f64().abs() < 1e-14
}

/// Checks the phase and returns `R = f - ‖x‖²`.
fn phase_remainder<S: Scalar>(f: &TruncatedSeries<S>) -> Result<TruncatedSeries<S>> {
    let m = f.m();
    let mut r = TruncatedSeries::zero(m, f.degree());
    for (alpha, c) in f.terms() {
        match alpha.total() {
            0 | 1 | 3 => {
                if !negligible(c) {
                    return Err(Error::InvalidPhase(format!(
                        "f has a nonzero term of degree {} at {alpha}",
                        alpha.total()
                    )));
                }
            }
            2 => {
                let expected = if alpha.0.contains(&2) { S::one() } else { S::zero() };
                if !negligible(&(c.clone() - expected)) {
                    return Err(Error::InvalidPhase(format!("quadratic part of f is not ‖x‖² (term {alpha})")));
                }
            }
            _ => r.insert(alpha.clone(), c.clone()),
        }
    }
    for i in 0..m {
        let mut a = vec![0; m];
        a[i] = 2;
        if f.coeff(&MultiIndex(a)).is_zero() {
            return Err(Error::InvalidPhase("quadratic part of f is not ‖x‖²".into()));
        }
    }
    Ok(r)
}

/// Exact-or-float core of [`expand_log_integral`].
pub fn expand_log_integral_reduced<S: Scalar>(
    f: &TruncatedSeries<S>,
    g: &TruncatedSeries<S>,
    order: u32,
) -> Result<ReducedLogExpansion<S>> {
    if f.m() != g.m() {
        return Err(Error::SeriesMismatch {
            m1: f.m(),
            d1: f.degree(),
            m2: g.m(),
            d2: g.degree(),
        });
    }
    let available = f.degree().min(g.degree());
    if available < 3 * order {
        return Err(Error::DegreeBudget {
            order,
            needed: 3 * order,
            available,
        });
    }
    let m = f.m();
    let remainder = phase_remainder(f)?.truncate(available);
    let g = g.truncate(available);

    let mut entries: Vec<ReducedEntry<S>> = (0..=order)
        .map(|k| ReducedEntry {
            k,
            a: S::zero(),
            b: Lin3::zero(),
        })
        .collect();
    let half = S::from_ratio(-1, 2);
    let mut term = g;
    for j in 0..=order.div_ceil(2) {
        if j > 0 {
            // (-1)^j R^j g / j!
            term = term.mul(&remainder)?.scale(&S::from_ratio(-1, j as i64));
        }
        for (alpha, c) in term.terms() {
            if !alpha.all_even() {
                continue;
            }
            let Some(k) = alpha.total().checked_sub(2 * j) else { continue };
            if k > order {
                continue;
            }
            let e = &mut entries[k as usize];
            e.a = e.a.clone() + c.clone() * gauss_moment_reduced::<S>(alpha) * half.clone();
            e.b.add_scaled(&gauss_log_moment_reduced::<S>(alpha), c);
        }
    }
    Ok(ReducedLogExpansion { m, entries })
}

/// Coefficients `(a_k, b_k)`, `k = 0..=N`, of
/// `∫ e^{-λf} g log‖x‖ dx ~ Σ_k (a_k log λ + b_k) λ^{-m/2-k/2}`.
///
/// The series must carry degree `D ≥ 3N`.
pub fn expand_log_integral(f: &TruncatedSeries<f64>, g: &TruncatedSeries<f64>, order: u32) -> Result<LogExpansion> {
    Ok(expand_log_integral_reduced(f, g, order)?.to_float())
}

/// `Σ_k (a_k log λ + b_k) λ^{-m/2-k/2}`.
pub fn evaluate_expansion(e: &LogExpansion, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    let l = lambda.ln();
    Ok(e.entries
        .iter()
        .map(|en| (en.a * l + en.b) * lambda.powf(-(e.m as f64) / 2.0 - en.k as f64 / 2.0))
        .sum())
}

/// Settings of [`quadrature_oracle`].
#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    /// Radius of the ball of integration.
    pub epsilon: f64,
    /// Multiply `g` by a `C²` bump equal to 1 on `B(ε/2)` and 0 outside `B(ε)`.
    pub bump: bool,
    /// Gauss–Legendre nodes per polar angle (doubled for the azimuth).
    pub angular_nodes: usize,
    /// Geometric radial panels `[ε 2^{-k-1}, ε 2^{-k}]` before the innermost one.
    pub radial_panels: usize,
    pub radial: AdaptiveConfig,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.5,
            bump: true,
            angular_nodes: 12,
            radial_panels: 40,
            radial: AdaptiveConfig {
                abs_tol: 1e-15,
                rel_tol: 1e-13,
                max_intervals: 2000,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub error: f64,
}

/// `1 - (6s⁵ - 15s⁴ + 10s³)` on `[0, 1]` in `s = 2r/ε - 1`.
pub fn bump(r: f64, epsilon: f64) -> f64 {
    let s = 2.0 * r / epsilon - 1.0;
    if s <= 0.0 {
        1.0
    } else if s >= 1.0 {
        0.0
    } else {
        1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s))
    }
}

/// Directions and weights of a product rule on `S^{m-1}` in hyperspherical
/// coordinates.
pub fn sphere_rule(m: usize, nodes: usize) -> Vec<(Vec<f64>, f64)> {
    assert!(m >= 1 && nodes >= 1);
    if m == 1 {
        return vec![(vec![1.0], 1.0), (vec![-1.0], 1.0)];
    }
    let (x, w) = gauss_legendre(nodes);
    let polar: Vec<(f64, f64)> = x
        .iter()
        .zip(&w)
        .map(|(&xi, &wi)| (std::f64::consts::FRAC_PI_2 * (xi + 1.0), std::f64::consts::FRAC_PI_2 * wi))
        .collect();
    let (xa, wa) = gauss_legendre(2 * nodes);
    let azimuth: Vec<(f64, f64)> = xa
        .iter()
        .zip(&wa)
        .map(|(&xi, &wi)| (std::f64::consts::PI * (xi + 1.0), std::f64::consts::PI * wi))
        .collect();

    let mut out = Vec::new();
    let mut idx = vec![0usize; m - 2];
    loop {
        let mut dir = vec![0.0; m];
        let mut weight = 1.0;
        let mut sin_prod = 1.0;
        for (i, &ix) in idx.iter().enumerate() {
            let (theta, wt) = polar[ix];
            dir[i] = sin_prod * theta.cos();
            weight *= wt * theta.sin().powi((m - 2 - i) as i32);
            sin_prod *= theta.sin();
        }
        for &(phi, wp) in &azimuth {
            let mut d = dir.clone();
            d[m - 2] = sin_prod * phi.cos();
            d[m - 1] = sin_prod * phi.sin();
            out.push((d, weight * wp));
        }
        // odometer over the polar indices
        let mut pos = 0;
        while pos < idx.len() {
            idx[pos] += 1;
            if idx[pos] < nodes {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == idx.len() {
            break;
        }
    }
    out
}

fn radial_breaks(epsilon: f64, panels: usize) -> Vec<f64> {
    let mut b: Vec<f64> = (0..=panels).map(|k| epsilon * 0.5f64.powi(k as i32)).collect();
    b.push(0.0);
    b.reverse();
    b
}

/// Direct polar quadrature of `∫_{B(ε)} e^{-λ f(x)} g(x) log‖x‖ dx`.
pub fn quadrature_oracle(
    f_eval: &dyn Fn(&[f64]) -> f64,
    g_eval: &dyn Fn(&[f64]) -> f64,
    m: usize,
    lambda: f64,
    cfg: &OracleConfig,
) -> Result<OracleResult> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    if !(cfg.epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {}", cfg.epsilon)));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    let breaks = radial_breaks(cfg.epsilon, cfg.radial_panels);
    let mut value = 0.0;
    let mut error = 0.0;
    let mut x = vec![0.0; m];
    for (dir, w) in sphere_rule(m, cfg.angular_nodes) {
        let radial = |r: f64| {
            if r <= 0.0 {
                return 0.0;
            }
            let x: Vec<f64> = dir.iter().map(|d| d * r).collect();
            let cut = if cfg.bump { bump(r, cfg.epsilon) } else { 1.0 };
            if cut == 0.0 {
                return 0.0;
            }
            let gv = g_eval(&x);
            if gv == 0.0 {
                return 0.0;
            }
            (-lambda * f_eval(&x)).exp() * gv * cut * r.ln() * r.powi(m as i32 - 1)
        };
        let res = integrate_panels(radial, &breaks, cfg.radial)?;
        value += w * res.value;
        error += w * res.error;
        x.iter_mut().for_each(|v| *v = 0.0);
    }
    Ok(OracleResult { value, error })
}
