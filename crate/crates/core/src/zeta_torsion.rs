//! Spectral zeta functions of heat-trace models, regularized determinants,
//! and analytic torsion.
//!
//! `ζ(s) = Γ(s)^{-1} ∫_0^∞ t^{s-1} (K(t) − h) dt` is continued to `s = 0` by
//! subtracting the small-time terms `c t^β (log t)^{0|1}` with `β ≤ 0` on
//! `(0, 1]`; they contribute `c/(s+β)` and `−c/(s+β)²`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{ExpansionTerm, SmallTimeExpansion};
use crate::quad::{integrate_panels, AdaptiveConfig};
use crate::rep_theory::{casimir_tau, Dimension, GWeight, Q};
use crate::scalar::EULER_GAMMA;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub lam: f64,
    pub mult: u64,
}

/// Sampled intertwining-trace integrand: one row shared by all shifts, or
/// one row per shift.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ContinuousValues {
    Shared(Vec<f64>),
    PerShift(Vec<Vec<f64>>),
}

/// Continuous-spectrum data: `grid` symmetric about 0, `shifts` the `c(σ)`
/// exponents, `c_zero[i]` the `Tr C̃(σ, ν, 0)` value paired with `shifts[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuousPart {
    pub grid: Vec<f64>,
    pub values: ContinuousValues,
    pub shifts: Vec<f64>,
    #[serde(default)]
    pub c_zero: Vec<f64>,
}

/// Discrete spectrum, kernel dimension and optional continuous part of one
/// operator.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SpectralData {
    #[serde(default)]
    pub eigenvalues: Vec<Eigenvalue>,
    #[serde(default)]
    pub h: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub continuous: Option<ContinuousPart>,
}

impl SpectralData {
    pub fn validate(&self) -> Result<()> {
        for e in &self.eigenvalues {
            if !(e.lam >= 0.0 && e.lam.is_finite()) {
                return Err(Error::InvalidSpectralData(format!("eigenvalue {} is not a nonnegative number", e.lam)));
            }
        }
        let Some(c) = &self.continuous else { return Ok(()) };
        let n = c.grid.len();
        if n < 2 {
            return Err(Error::InvalidSpectralData("grid needs at least two points".into()));
        }
        if c.grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidSpectralData("grid must be strictly increasing".into()));
        }
        let scale = c.grid[n - 1].abs().max(c.grid[0].abs());
        for i in 0..n {
            if (c.grid[i] + c.grid[n - 1 - i]).abs() > 1e-12 * scale {
                return Err(Error::InvalidSpectralData("grid is not symmetric about 0".into()));
            }
        }
        match &c.values {
            ContinuousValues::Shared(v) if v.len() != n => {
                return Err(Error::InvalidSpectralData(format!("{} values for {n} grid points", v.len())));
            }
            ContinuousValues::PerShift(rows) => {
                if rows.len() != c.shifts.len() {
                    return Err(Error::InvalidSpectralData(format!(
                        "{} value rows for {} shifts",
                        rows.len(),
                        c.shifts.len()
                    )));
                }
                if let Some(r) = rows.iter().find(|r| r.len() != n) {
                    return Err(Error::InvalidSpectralData(format!("{} values for {n} grid points", r.len())));
                }
            }
            _ => {}
        }
        if !c.c_zero.is_empty() && c.c_zero.len() != c.shifts.len() {
            return Err(Error::InvalidSpectralData(format!(
                "{} c_zero entries for {} shifts",
                c.c_zero.len(),
                c.shifts.len()
            )));
        }
        Ok(())
    }

    fn trace_unchecked(&self, t: f64) -> f64 {
        let mut total: f64 = self.eigenvalues.iter().map(|e| e.mult as f64 * (-t * e.lam).exp()).sum();
        if let Some(c) = &self.continuous {
            for (i, &shift) in c.shifts.iter().enumerate() {
                let damp = (-t * shift).exp();
                if let Some(cz) = c.c_zero.get(i) {
                    total += 0.25 * cz * damp;
                }
                let row = match &c.values {
                    ContinuousValues::Shared(v) => v,
                    ContinuousValues::PerShift(rows) => &rows[i],
                };
                let integral: f64 = c
                    .grid
                    .windows(2)
                    .zip(row.windows(2))
                    .map(|(g, v)| {
                        let f0 = (-t * g[0] * g[0]).exp() * v[0];
                        let f1 = (-t * g[1] * g[1]).exp() * v[1];
                        0.5 * (g[1] - g[0]) * (f0 + f1)
                    })
                    .sum();
                total -= damp * integral / (4.0 * std::f64::consts::PI);
            }
        }
        total
    }
}

/// `Σ mult e^{-tλ} + Σ_i (c_zero_i/4) e^{-t shift_i} − (1/4π) Σ_i e^{-t shift_i} ∫ e^{-tλ²} v_i(λ) dλ`
/// with the trapezoid rule on the grid.
pub fn regularized_trace_spectral(t: f64, data: &SpectralData) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
    }
    data.validate()?;
    Ok(data.trace_unchecked(t))
}

/// `e^{-t τ(Ω)}`, relating `e^{-tA_ν}` to `e^{-tΔ_p(τ)}`.
pub fn hodge_factor(tau: &GWeight, dim: &Dimension, t: f64) -> f64 {
    let c = casimir_tau(tau, dim);
    (-t * *c.numer() as f64 / *c.denom() as f64).exp()
}

/// Trace of `e^{-tΔ_p(τ)}` from the trace of `e^{-tA}`.
pub fn hodge_shift(trace: f64, tau: &GWeight, dim: &Dimension, t: f64) -> f64 {
    trace * hodge_factor(tau, dim, t)
}

/// Small-time expansion multiplied by `e^{-t τ(Ω)}`, kept through `beta_max`.
pub fn hodge_shift_expansion(e: &SmallTimeExpansion, tau: &GWeight, dim: &Dimension, beta_max: Q) -> SmallTimeExpansion {
    let c = casimir_tau(tau, dim);
    e.mul_exp(*c.numer() as f64 / *c.denom() as f64, beta_max)
}

/// Large-time behaviour of `K(t) − h` beyond `t_max`.
#[derive(Debug, Clone, PartialEq)]
pub enum TailModel {
    /// Exponential decay; the tail is dropped and only estimated.
    Exponential,
    /// `K(t) − h ≈ Σ c_j t^{-j/2}`, integrated in closed form.
    PowerLaw(Vec<(u32, f64)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZetaConfig {
    /// Below `t0` the remainder is replaced by the `β > 0` expansion terms.
    pub t0: f64,
    pub t_max: f64,
    pub tail: TailModel,
    pub quad: AdaptiveConfig,
    /// Largest tolerated `|c|` of a `t^0 log t` term.
    pub log_tolerance: f64,
}

impl Default for ZetaConfig {
    fn default() -> Self {
        Self {
            t0: 1e-4,
            t_max: 50.0,
            tail: TailModel::Exponential,
            quad: AdaptiveConfig {
                abs_tol: 1e-13,
                rel_tol: 1e-12,
                max_intervals: 4000,
            },
            log_tolerance: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaValues {
    pub zeta0: f64,
    pub zeta_prime0: f64,
    /// `|K(t_max) − h|`, a size indicator for the neglected tail.
    pub tail_estimate: f64,
}

fn unit_panels(a: f64, b: f64) -> Vec<f64> {
    let mut v = vec![a];
    let mut x = a.floor() + 1.0;
    while x < b {
        v.push(x);
        x += 1.0;
    }
    v.push(b);
    v
}

/// `ζ(0)` and `ζ′(0)` of the heat-trace model `K` with kernel dimension `h`
/// and small-time expansion `E` (valid on `(0, 1]`).
pub fn zeta_values(trace: &dyn Fn(f64) -> f64, e: &SmallTimeExpansion, h: f64, cfg: &ZetaConfig) -> Result<ZetaValues> {
    if !(cfg.t0 > 0.0 && cfg.t0 < 1.0 && cfg.t_max >= 1.0) {
        return Err(Error::InvalidParameter("need 0 < t0 < 1 <= t_max".into()));
    }
    let zero = Q::from_integer(0);
    let log_c = e.coeff(zero, true);
    if log_c.abs() > cfg.log_tolerance {
        return Err(Error::NotHolomorphic { coefficient: log_c });
    }
    let singular = SmallTimeExpansion::from_terms(
        e.terms()
            .iter()
            .filter(|t| t.beta <= zero)
            .copied()
            .chain(std::iter::once(ExpansionTerm::power(zero, -h))),
    );
    let regular: Vec<ExpansionTerm> = e.terms().iter().filter(|t| t.beta > zero).copied().collect();

    // ∫_{t0}^1 r(t) dt/t in y = log t
    let remainder = |y: f64| {
        let t = y.exp();
        trace(t) - h - singular.eval(t)
    };
    let inner = integrate_panels(remainder, &unit_panels(cfg.t0.ln(), 0.0), cfg.quad)?.value;
    // ∫_0^{t0} of the β > 0 terms
    let lt0 = cfg.t0.ln();
    let head: f64 = regular
        .iter()
        .map(|term| {
            let b = term.beta_f64();
            let p = cfg.t0.powf(b);
            if term.has_log {
                term.c * p * (lt0 / b - 1.0 / (b * b))
            } else {
                term.c * p / b
            }
        })
        .sum();
    // ∫_1^{t_max} (K − h) dt/t
    let outer_f = |y: f64| trace(y.exp()) - h;
    let outer = integrate_panels(outer_f, &unit_panels(0.0, cfg.t_max.ln()), cfg.quad)?.value;
    let tail = match &cfg.tail {
        TailModel::Exponential => 0.0,
        TailModel::PowerLaw(cs) => cs
            .iter()
            .filter(|(j, _)| *j > 0)
            .map(|&(j, c)| c * 2.0 / j as f64 * cfg.t_max.powf(-(j as f64) / 2.0))
            .sum(),
    };
    let poles: f64 = singular
        .terms()
        .iter()
        .filter(|t| t.beta < zero)
        .map(|t| {
            let b = t.beta_f64();
            if t.has_log {
                -t.c / (b * b)
            } else {
                t.c / b
            }
        })
        .sum();
    let a = singular.coeff(zero, false);
    let b0 = inner + head + outer + tail + poles;
    Ok(ZetaValues {
        zeta0: a,
        zeta_prime0: b0 + EULER_GAMMA * a,
        tail_estimate: (trace(cfg.t_max) - h).abs(),
    })
}

/// `det Δ = exp(−ζ′(0))`.
pub fn regularized_det(zeta_prime0: f64) -> f64 {
    (-zeta_prime0).exp()
}

/// `log T_X = Σ_{p=1}^{d} (−1)^{p+1} (p/2) log det_p`.
pub fn torsion_assembly(dets: &BTreeMap<usize, f64>, d: usize) -> Result<f64> {
    let mut total = 0.0;
    for p in 1..=d {
        let Some(&det) = dets.get(&p) else {
            return Err(Error::InvalidParameter(format!("missing determinant for p = {p}")));
        };
        if !(det > 0.0 && det.is_finite()) {
            return Err(Error::InvalidParameter(format!("determinant for p = {p} must be positive, got {det}")));
        }
        let sign = if p % 2 == 1 { 1.0 } else { -1.0 };
        total += sign * 0.5 * p as f64 * det.ln();
    }
    Ok(total)
}

/// Per-form result of [`torsion_from_spectra`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorsionReport {
    #[serde(rename = "zeta0")]
    pub zeta0: Vec<f64>,
    #[serde(rename = "zetaPrime0")]
    pub zeta_prime0: Vec<f64>,
    #[serde(rename = "logT")]
    pub log_t: f64,
}

/// Spectral data of the forms `p = 1..d`, each with an optional small-time
/// expansion of its (unshifted) trace.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct FormData {
    #[serde(flatten)]
    pub spectrum: SpectralData,
    #[serde(default)]
    pub expansion: Option<SmallTimeExpansion>,
}

/// `ζ_p(0)`, `ζ_p′(0)` and `log T_X(τ)` from per-form spectral data. Without
/// an explicit expansion a form's trace is taken to be smooth at `t = 0`
/// with value `K(0)`, as it is for finite spectral data.
pub fn torsion_from_spectra(forms: &[FormData], tau: &GWeight, dim: &Dimension, cfg: &ZetaConfig) -> Result<TorsionReport> {
    let d = dim.d();
    if forms.len() != d {
        return Err(Error::InvalidParameter(format!("need spectral data for p = 1..{d}, got {} forms", forms.len())));
    }
    tau.validate(dim)?;
    let mut zeta0 = Vec::with_capacity(d);
    let mut zeta_prime0 = Vec::with_capacity(d);
    let mut dets = BTreeMap::new();
    for (i, form) in forms.iter().enumerate() {
        form.spectrum.validate()?;
        let (e, form_cfg) = match &form.expansion {
            Some(e) => {
                e.validate(d)?;
                let top = e.max_beta().unwrap_or(Q::from_integer(0));
                (hodge_shift_expansion(e, tau, dim, top), cfg.clone())
            }
            // finite data are smooth at t = 0, so the cutoff can go much lower
            None => (
                SmallTimeExpansion::from_terms([ExpansionTerm::power(Q::from_integer(0), form.spectrum.trace_unchecked(0.0))]),
                ZetaConfig { t0: cfg.t0.min(1e-12), ..cfg.clone() },
            ),
        };
        let data = &form.spectrum;
        let trace = |t: f64| hodge_shift(data.trace_unchecked(t), tau, dim, t);
        let z = zeta_values(&trace, &e, form.spectrum.h as f64, &form_cfg)?;
        zeta0.push(z.zeta0);
        zeta_prime0.push(z.zeta_prime0);
        dets.insert(i + 1, regularized_det(z.zeta_prime0));
    }
    Ok(TorsionReport {
        log_t: torsion_assembly(&dets, d)?,
        zeta0,
        zeta_prime0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep_theory::GroupKind;

    fn circle_trace(t: f64) -> f64 {
        let mut s = 0.0;
        let mut j = 1.0f64;
        loop {
            let v = 2.0 * (-t * j * j).exp();
            s += v;
            if v < 1e-18 * s {
                break;
            }
            j += 1.0;
        }
        s
    }

    fn circle_expansion() -> SmallTimeExpansion {
        SmallTimeExpansion::from_terms([
            ExpansionTerm::power(Q::new(-1, 2), std::f64::consts::PI.sqrt()),
            ExpansionTerm::power(Q::from_integer(0), -1.0),
        ])
    }

    #[test]
    fn circle_model() {
        let z = zeta_values(&circle_trace, &circle_expansion(), 0.0, &ZetaConfig::default()).unwrap();
        assert!((z.zeta0 + 1.0).abs() < 1e-12);
        let two_log_2pi = 3.675_754_132_818_691;
        assert!((z.zeta_prime0 + two_log_2pi).abs() < 1e-9, "{}", z.zeta_prime0);
        assert!((regularized_det(z.zeta_prime0) - 39.478_417_604_357_43).abs() < 1e-6);
    }

    #[test]
    fn single_eigenvalue() {
        for a in [0.5, 2.0, 10.0] {
            let trace = move |t: f64| (-a * t).exp();
            let e = SmallTimeExpansion::from_terms(
                [1.0, -a, a * a / 2.0, -a * a * a / 6.0]
                    .into_iter()
                    .enumerate()
                    .map(|(k, c)| ExpansionTerm::power(Q::from_integer(k as i64), c)),
            );
            let z = zeta_values(&trace, &e, 0.0, &ZetaConfig::default()).unwrap();
            assert!((z.zeta0 - 1.0).abs() < 1e-12);
            assert!((z.zeta_prime0 + f64::ln(a)).abs() < 1e-8, "a={a}: {}", z.zeta_prime0);
        }
    }

    #[test]
    fn constant_trace_and_pure_term() {
        let e = SmallTimeExpansion::from_terms([ExpansionTerm::power(Q::from_integer(0), 3.0)]);
        let z = zeta_values(&|_| 3.0, &e, 3.0, &ZetaConfig::default()).unwrap();
        assert_eq!((z.zeta0, z.zeta_prime0), (0.0, 0.0));
        let e = SmallTimeExpansion::from_terms([ExpansionTerm::power(Q::new(-3, 2), 1.0)]);
        let trace = |t: f64| if t <= 1.0 { t.powf(-1.5) } else { 0.0 };
        let z = zeta_values(&trace, &e, 0.0, &ZetaConfig::default()).unwrap();
        assert!(z.zeta0.abs() < 1e-15);
        assert!((z.zeta_prime0 + 2.0 / 3.0).abs() < 1e-10);
        assert!((regularized_det(-2.0 / 3.0) - (2.0f64 / 3.0).exp()).abs() < 1e-15);
        assert_eq!(regularized_det(0.0), 1.0);
    }

    #[test]
    fn log_term_rejected() {
        let e = SmallTimeExpansion::from_terms([ExpansionTerm::log(Q::from_integer(0), 1e-6)]);
        assert!(matches!(
            zeta_values(&|t: f64| (-t).exp(), &e, 0.0, &ZetaConfig::default()),
            Err(Error::NotHolomorphic { .. })
        ));
    }

    #[test]
    fn spectral_trace() {
        let data = SpectralData {
            eigenvalues: vec![Eigenvalue { lam: 0.0, mult: 3 }],
            h: 3,
            continuous: None,
        };
        for t in [0.1, 1.0, 10.0] {
            assert_eq!(regularized_trace_spectral(t, &data).unwrap(), 3.0);
        }
        assert_eq!(regularized_trace_spectral(1.0, &SpectralData::default()).unwrap(), 0.0);
        let data = SpectralData {
            eigenvalues: (1..=10_000).map(|j| Eigenvalue { lam: (j * j) as f64, mult: 2 }).collect(),
            h: 0,
            continuous: None,
        };
        let v = regularized_trace_spectral(1.0, &data).unwrap();
        assert!((v - 0.772_637_204_826_652_2).abs() < 1e-15);
        assert!(regularized_trace_spectral(-1.0, &data).is_err());
    }

    #[test]
    fn continuous_part() {
        // constant integrand 1 on [-L, L]: ∫ e^{-tλ²} dλ ≈ √(π/t)
        let grid: Vec<f64> = (-4000..=4000).map(|i| i as f64 * 0.005).collect();
        let c = ContinuousPart {
            values: ContinuousValues::Shared(vec![1.0; grid.len()]),
            grid,
            shifts: vec![0.5],
            c_zero: vec![2.0],
        };
        let data = SpectralData {
            eigenvalues: vec![],
            h: 0,
            continuous: Some(c.clone()),
        };
        let t = 1.0;
        let expect = 0.5 * (-0.5f64).exp() - (-0.5f64).exp() * std::f64::consts::PI.sqrt() / (4.0 * std::f64::consts::PI);
        assert!((regularized_trace_spectral(t, &data).unwrap() - expect).abs() < 1e-12);
        let mut asym = c.clone();
        asym.grid[0] = -25.0;
        let bad = SpectralData {
            continuous: Some(asym),
            ..data.clone()
        };
        assert!(matches!(regularized_trace_spectral(t, &bad), Err(Error::InvalidSpectralData(_))));
    }

    #[test]
    fn hodge_examples() {
        let d3 = Dimension::from_d(3, GroupKind::SO0).unwrap();
        let triv = GWeight::trivial(&d3);
        assert_eq!(hodge_shift(2.5, &triv, &d3, 1.0), 2.5);
        let tau = GWeight::from_ints(&d3, &[1, 0]).unwrap();
        assert!((hodge_factor(&tau, &d3, 1.0) - (-3f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn torsion_matches_finite_spectra() {
        let dim = Dimension::from_d(3, GroupKind::SO0).unwrap();
        let tau = GWeight::from_ints(&dim, &[1, 0]).unwrap();
        let shift = {
            let c = casimir_tau(&tau, &dim);
            *c.numer() as f64 / *c.denom() as f64
        };
        assert!(shift != 0.0);
        let forms: Vec<FormData> = (1..=3)
            .map(|p| FormData {
                spectrum: SpectralData {
                    eigenvalues: vec![Eigenvalue { lam: 20.0 + p as f64, mult: p }, Eigenvalue { lam: 35.5, mult: 2 }],
                    h: 0,
                    continuous: None,
                },
                expansion: None,
            })
            .collect();
        let report = torsion_from_spectra(&forms, &tau, &dim, &ZetaConfig::default()).unwrap();
        for (i, form) in forms.iter().enumerate() {
            let exact: f64 = form.spectrum.eigenvalues.iter().map(|e| -(e.mult as f64) * (e.lam + shift).ln()).sum();
            assert!((report.zeta_prime0[i] - exact).abs() < 1e-8, "p={}: {} vs {exact}", i + 1, report.zeta_prime0[i]);
        }
    }

    #[test]
    fn torsion_examples() {
        let ones: BTreeMap<usize, f64> = (1..=3).map(|p| (p, 1.0)).collect();
        assert_eq!(torsion_assembly(&ones, 3).unwrap(), 0.0);
        let (a, b, c) = (2.0f64, 3.0f64, 5.0f64);
        let dets: BTreeMap<usize, f64> = [(1, a), (2, b), (3, c)].into_iter().collect();
        let expect = 0.5 * a.ln() - b.ln() + 1.5 * c.ln();
        assert!((torsion_assembly(&dets, 3).unwrap() - expect).abs() < 1e-15);
        let mut bad = dets.clone();
        bad.insert(2, 0.0);
        assert!(torsion_assembly(&bad, 3).is_err());
        bad.remove(&2);
        assert!(torsion_assembly(&bad, 3).is_err());
    }
}
