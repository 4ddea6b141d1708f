//! The four distributions on the geometric side of the trace formula,
//! evaluated on the heat kernel `h_t^ν`:
//!
//! * `I`: identity contribution (Plancherel polynomial),
//! * `H`: hyperbolic contribution (closed geodesics),
//! * `T`: invariant parabolic contribution,
//! * `T′`: weighted orbital integral `∫_N h_t^ν(n(x)) log‖x‖ dx`.
//!
//! `T′` is expanded with the stationary-phase engine applied to the heat
//! parametrix `t^{-d/2} e^{-r²/4t} Σ_i t^i a_i`, with `λ = 1/(4t)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{ExpansionTerm, SmallTimeExpansion};
use crate::geometry::{distance_from_norm, jacobian_inv_sqrt_series, k_character, k_character_series, r_over_sinh_series, r_squared_series};
use crate::plancherel::{check_t, identity_expansion, identity_term, WeightedSigma};
use crate::quad::{integrate_panels, AdaptiveConfig};
use crate::rep_theory::{casimir_sigma, dim_weyl_m, restrict_to_m, Dimension, GroupKind, KWeight, MWeight, Q};
use crate::scalar::{Lin3, Scalar};
use crate::special::gamma_half;
use crate::stationary_phase::expand_log_integral_reduced;
use crate::series::TruncatedSeries;

fn q_to_f64(q: Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// Explicit value of `tr σ(m_γ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterValue {
    pub sigma: MWeight,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// A closed geodesic: length `ℓ(γ)`, primitive length `ℓ(γ₀)`, and the
/// rotation angles `θ_1..θ_n` of the holonomy `m_γ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthSpectrumEntry {
    pub ell: f64,
    pub ell0: f64,
    #[serde(default)]
    pub angles: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub characters: Option<Vec<CharacterValue>>,
}

impl LengthSpectrumEntry {
    fn validate(&self, dim: &Dimension) -> Result<()> {
        if !(self.ell > 0.0 && self.ell0 > 0.0 && self.ell.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "lengths must be positive (ell = {}, ell0 = {})",
                self.ell, self.ell0
            )));
        }
        let ratio = self.ell / self.ell0;
        if ratio < 1.0 - 1e-9 || (ratio - ratio.round()).abs() > 1e-9 * ratio {
            return Err(Error::InvalidParameter(format!(
                "ell = {} is not a positive multiple of ell0 = {}",
                self.ell, self.ell0
            )));
        }
        if self.angles.len() != dim.n() {
            return Err(Error::DimensionMismatch(format!(
                "geodesic needs {} rotation angles, got {}",
                dim.n(),
                self.angles.len()
            )));
        }
        if self.angles.iter().any(|a| !(0.0..2.0 * PI).contains(a)) {
            return Err(Error::InvalidParameter("rotation angles must lie in [0, 2π)".into()));
        }
        Ok(())
    }

    /// `tr σ(m_γ)`: built in for `d = 3` (`e^{ikθ}`), otherwise looked up.
    pub fn character(&self, sigma: &MWeight, dim: &Dimension) -> Result<Complex64> {
        if let Some(chars) = &self.characters {
            if let Some(c) = chars.iter().find(|c| &c.sigma == sigma) {
                return Ok(Complex64::new(c.re, c.im));
            }
        }
        if dim.n() == 1 {
            let k = q_to_f64(sigma.coords()[0]);
            return Ok(Complex64::from_polar(1.0, k * self.angles[0]));
        }
        Err(Error::MissingCharacter(format!(
            "no value of tr σ(m_γ) for σ = {sigma} on the geodesic of length {}",
            self.ell
        )))
    }
}

/// Volume, cusp data and length spectrum of `Γ\H^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldData {
    pub dim: Dimension,
    pub volume: f64,
    pub kappa: u32,
    pub c1: f64,
    pub c2: f64,
    pub c_n: f64,
    pub spectrum: Vec<LengthSpectrumEntry>,
}

#[derive(Serialize, Deserialize)]
struct ManifoldJson {
    dim: usize,
    #[serde(default = "default_kind")]
    group_kind: GroupKind,
    volume: f64,
    #[serde(default)]
    kappa: u32,
    #[serde(rename = "C1", default)]
    c1: f64,
    #[serde(rename = "C2", default)]
    c2: f64,
    #[serde(default = "default_cn")]
    cn: f64,
    #[serde(default)]
    spectrum: Vec<LengthSpectrumEntry>,
}

fn default_kind() -> GroupKind {
    GroupKind::SO0
}

fn default_cn() -> f64 {
    1.0
}

impl ManifoldData {
    pub fn validate(&self) -> Result<()> {
        if !(self.volume > 0.0 && self.volume.is_finite()) {
            return Err(Error::InvalidParameter(format!("volume must be positive, got {}", self.volume)));
        }
        if self.kappa == 0 && (self.c1 != 0.0 || self.c2 != 0.0) {
            return Err(Error::InvalidParameter("a compact manifold (kappa = 0) has C1 = C2 = 0".into()));
        }
        if !(self.c_n > 0.0 && self.c_n.is_finite()) {
            return Err(Error::InvalidParameter(format!("c_n must be positive, got {}", self.c_n)));
        }
        for e in &self.spectrum {
            e.validate(&self.dim)?;
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, ManifoldParseError> {
        let raw: ManifoldJson = serde_json::from_str(text).map_err(ManifoldParseError::Json)?;
        let dim = Dimension::from_d(raw.dim, raw.group_kind).map_err(ManifoldParseError::Invalid)?;
        let m = Self {
            dim,
            volume: raw.volume,
            kappa: raw.kappa,
            c1: raw.c1,
            c2: raw.c2,
            c_n: raw.cn,
            spectrum: raw.spectrum,
        };
        m.validate().map_err(ManifoldParseError::Invalid)?;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ManifoldJson {
            dim: self.dim.d(),
            group_kind: self.dim.kind(),
            volume: self.volume,
            kappa: self.kappa,
            c1: self.c1,
            c2: self.c2,
            cn: self.c_n,
            spectrum: self.spectrum.clone(),
        })
        .expect("plain data serializes")
    }
}

/// Failure to load manifold data: syntax (with position) or content.
#[derive(Debug)]
pub enum ManifoldParseError {
    Json(serde_json::Error),
    Invalid(Error),
}

impl std::fmt::Display for ManifoldParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Json(e) => write!(f, "malformed manifold JSON at line {}, column {}: {e}", e.line(), e.column()),
            Self::Invalid(e) => write!(f, "invalid manifold data: {e}"),
        }
    }
}

impl std::error::Error for ManifoldParseError {}

/// `Θ_{σ,λ}(h_t^ν) = e^{t(c(σ) − λ²)}`.
pub fn character_heat(sigma: &MWeight, lambda: f64, t: f64, dim: &Dimension) -> Result<f64> {
    check_t(t)?;
    Ok((t * (q_to_f64(casimir_sigma(sigma, dim)) - lambda * lambda)).exp())
}

/// The `σ` with `[ν : σ] = 1`, each with weight 1.
pub fn identity_sigmas(nu: &KWeight, dim: &Dimension) -> Result<Vec<WeightedSigma>> {
    nu.validate(dim)?;
    Ok(restrict_to_m(nu).into_iter().map(|s| (s, 1)).collect())
}

/// The `σ` with `[ν : σ] = 1`, each weighted by `dim σ`.
pub fn parabolic_sigmas(nu: &KWeight, dim: &Dimension) -> Result<Vec<WeightedSigma>> {
    nu.validate(dim)?;
    Ok(restrict_to_m(nu)
        .into_iter()
        .map(|s| {
            let d = dim_weyl_m(&s, dim);
            (s, d)
        })
        .collect())
}

/// `L(γ, σ) = conj(tr σ(m_γ)) e^{-nℓ} / Π_j (1 − e^{-ℓ} e^{iθ_j})(1 − e^{-ℓ} e^{-iθ_j})`.
pub fn l_factor(entry: &LengthSpectrumEntry, sigma: &MWeight, dim: &Dimension) -> Result<Complex64> {
    let chi = entry.character(sigma, dim)?.conj();
    let q = (-entry.ell).exp();
    let det = entry.angles.iter().fold(Complex64::new(1.0, 0.0), |acc, &th| {
        let z = Complex64::from_polar(q, th);
        acc * (Complex64::new(1.0, 0.0) - z) * (Complex64::new(1.0, 0.0) - z.conj())
    });
    Ok(chi * (-(dim.n() as f64) * entry.ell).exp() / det)
}

/// `H(h_t) = Σ_σ Σ_γ (ℓ(γ₀)/2π) L(γ,σ) √(π/t) e^{t c(σ)} e^{-ℓ(γ)²/4t}` (real part).
pub fn hyperbolic_term(t: f64, manifold: &ManifoldData, sigmas: &[MWeight]) -> Result<f64> {
    check_t(t)?;
    let dim = &manifold.dim;
    let mut total = Complex64::new(0.0, 0.0);
    for sigma in sigmas {
        let c = q_to_f64(casimir_sigma(sigma, dim));
        for entry in &manifold.spectrum {
            let gauss = (PI / t).sqrt() * (t * c - entry.ell * entry.ell / (4.0 * t)).exp();
            total += l_factor(entry, sigma, dim)? * (entry.ell0 / (2.0 * PI) * gauss);
        }
    }
    Ok(total.re)
}

/// `T(h_t) = Σ_σ dim σ · (1/2π) √(π/t) e^{t c(σ)}`.
pub fn parabolic_t_term(t: f64, sigmas: &[WeightedSigma], dim: &Dimension) -> Result<f64> {
    check_t(t)?;
    Ok(sigmas
        .iter()
        .map(|(s, d)| *d as f64 / (2.0 * PI) * (PI / t).sqrt() * (t * q_to_f64(casimir_sigma(s, dim))).exp())
        .sum())
}

/// `T(h_t) = t^{-1/2} Σ_{j=0}^{J} b_j t^j`, `b_j = Σ_σ dim σ c(σ)^j / (2√π j!)`.
pub fn parabolic_t_expansion(sigmas: &[WeightedSigma], dim: &Dimension, order: usize) -> SmallTimeExpansion {
    let mut b = vec![0.0; order + 1];
    for (s, d) in sigmas {
        let c = q_to_f64(casimir_sigma(s, dim));
        let mut term = *d as f64 / (2.0 * PI.sqrt());
        for (j, slot) in b.iter_mut().enumerate() {
            if j > 0 {
                term *= c / j as f64;
            }
            *slot += term;
        }
    }
    SmallTimeExpansion::from_terms(
        b.into_iter()
            .enumerate()
            .filter(|(_, c)| *c != 0.0)
            .map(|(j, c)| ExpansionTerm::power(Q::new(2 * j as i64 - 1, 2), c)),
    )
}

/// Heat parametrix amplitudes: `a_i(x) = prefactor · coeffs[i](x)` on
/// `R^{d-1}`, for the K-type `ν`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatAmplitude<S> {
    pub nu: KWeight,
    pub dim: Dimension,
    pub prefactor: f64,
    pub coeffs: Vec<TruncatedSeries<S>>,
}

impl<S: Scalar> HeatAmplitude<S> {
    pub fn i_max(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

/// `(4π)^{-d/2}`.
pub fn heat_normalization(dim: &Dimension) -> f64 {
    (4.0 * PI).powf(-(dim.d() as f64) / 2.0)
}

/// Radial factor of `a_0^ν` in `u = ‖x‖²`: `tr ν(k(n(x))) · (r / sinh r)^n`.
pub fn leading_amplitude_radial<S: Scalar>(nu: &KWeight, dim: &Dimension, degree: u32) -> Result<TruncatedSeries<S>> {
    nu.validate(dim)?;
    let half = degree / 2;
    k_character_series::<S>(nu, half).mul(&jacobian_inv_sqrt_series::<S>(dim, half))
}

/// `a_0^ν(x) = (4π)^{-d/2} tr ν(k(n(x))) j(x)^{-1/2}` as a Taylor series of
/// total degree `D` on `R^{d-1}`.
pub fn leading_amplitude<S: Scalar>(nu: &KWeight, dim: &Dimension, degree: u32) -> Result<HeatAmplitude<S>> {
    let radial = leading_amplitude_radial::<S>(nu, dim, degree)?;
    Ok(HeatAmplitude {
        nu: nu.clone(),
        dim: *dim,
        prefactor: heat_normalization(dim),
        coeffs: vec![TruncatedSeries::compose_radial(&radial, dim.d() - 1, degree)?],
    })
}

/// `a_0^ν` at `‖x‖ = s`, evaluated directly.
pub fn leading_amplitude_value(nu: &KWeight, dim: &Dimension, s: f64) -> f64 {
    let r = distance_from_norm(s);
    let ros = if r < 1e-8 { 1.0 } else { r / r.sinh() };
    heat_normalization(dim) * k_character(nu, s) * ros.powi(dim.n() as i32)
}

/// All amplitudes of the exact scalar heat kernel on `H³`:
/// `a_i = (4π)^{-3/2} (r / sinh r) (−1)^i / i!`, `i = 0..=I_max`.
pub fn h3_amplitudes<S: Scalar>(degree: u32, i_max: usize) -> Result<HeatAmplitude<S>> {
    let dim = Dimension::new(1, GroupKind::SO0)?;
    let radial = r_over_sinh_series::<S>(degree / 2);
    let base = TruncatedSeries::compose_radial(&radial, 2, degree)?;
    let mut coeffs = Vec::with_capacity(i_max + 1);
    let mut c = S::one();
    for i in 0..=i_max {
        if i > 0 {
            c = c * S::from_ratio(-1, i as i64);
        }
        coeffs.push(base.scale(&c));
    }
    Ok(HeatAmplitude {
        nu: KWeight::trivial(&dim),
        dim,
        prefactor: heat_normalization(&dim),
        coeffs,
    })
}

/// `(4πt)^{-3/2} (r / sinh r) e^{-t} e^{-r²/4t}`, the heat kernel of the
/// Laplacian on `H³`.
pub fn h3_scalar_kernel(r: f64, t: f64) -> Result<f64> {
    check_t(t)?;
    if !(r >= 0.0) {
        return Err(Error::InvalidParameter(format!("r must be nonnegative, got {r}")));
    }
    let ros = if r < 1e-8 { 1.0 - r * r / 6.0 } else { r / r.sinh() };
    Ok((4.0 * PI * t).powf(-1.5) * ros * (-t - r * r / (4.0 * t)).exp())
}

/// Level `j` of `T′(h_t) ~ Σ_j (c_j log t + d_j) t^{(j-1)/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TprimeEntry {
    pub j: u32,
    pub c: f64,
    pub d: f64,
}

/// Exact level: `c_j = F · c`, `d_j = F · (d.one + d.euler γ + d.ln2 ln 2)`
/// with `F = prefactor · π^{m/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TprimeReducedEntry<S> {
    pub j: u32,
    pub c: S,
    pub d: Lin3<S>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TprimeExpansion {
    pub entries: Vec<TprimeEntry>,
}

impl TprimeExpansion {
    pub fn entry(&self, j: u32) -> Option<&TprimeEntry> {
        self.entries.iter().find(|e| e.j == j)
    }

    pub fn to_small_time(&self) -> SmallTimeExpansion {
        SmallTimeExpansion::from_terms(self.entries.iter().flat_map(|e| {
            let beta = Q::new(e.j as i64 - 1, 2);
            [ExpansionTerm::log(beta, e.c), ExpansionTerm::power(beta, e.d)]
        }))
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.entries
            .iter()
            .map(|e| (e.c * t.ln() + e.d) * t.powf((e.j as f64 - 1.0) / 2.0))
            .sum()
    }
}

/// Exact-or-float core of [`parabolic_tprime_expansion`].
pub fn parabolic_tprime_expansion_reduced<S: Scalar>(amp: &HeatAmplitude<S>, order: u32) -> Result<Vec<TprimeReducedEntry<S>>> {
    if order as usize > 2 * amp.i_max() + 1 {
        return Err(Error::InvalidParameter(format!(
            "order {order} needs amplitudes up to i = {}, only {} supplied",
            (order as usize).saturating_sub(1) / 2,
            amp.coeffs.len()
        )));
    }
    let m = amp.dim.d() - 1;
    let mut out: Vec<TprimeReducedEntry<S>> = (0..=order)
        .map(|j| TprimeReducedEntry {
            j,
            c: S::zero(),
            d: Lin3::zero(),
        })
        .collect();
    for (i, a) in amp.coeffs.iter().enumerate() {
        if a.m() != m {
            return Err(Error::DimensionMismatch(format!("amplitude a_{i} has {} variables, expected {m}", a.m())));
        }
        let Some(level) = (order as usize).checked_sub(2 * i) else { break };
        let level = level as u32;
        let degree = a.degree();
        let f = TruncatedSeries::compose_radial(&r_squared_series::<S>(degree / 2 + 1), m, degree)?;
        let e = expand_log_integral_reduced(&f, a, level)?;
        for entry in &e.entries {
            // λ^{-(m+k)/2} = 2^{m+k} t^{(m+k)/2},  log λ = −log t − 2 ln 2
            let j = entry.k as usize + 2 * i;
            let p = S::from_i64(1i64 << (m as u32 + entry.k));
            let slot = &mut out[j];
            slot.c = slot.c.clone() - entry.a.clone() * p.clone();
            slot.d.add_scaled(&entry.b, &p);
            slot.d.ln2 = slot.d.ln2.clone() - entry.a.clone() * p * S::from_i64(2);
        }
    }
    Ok(out)
}

/// Small-time expansion of `T′(h_t)` through level `N`, `t^{(N-1)/2}`.
pub fn parabolic_tprime_expansion<S: Scalar>(amp: &HeatAmplitude<S>, order: u32) -> Result<TprimeExpansion> {
    let m = amp.dim.d() - 1;
    let factor = amp.prefactor * PI.powf(m as f64 / 2.0);
    let reduced = parabolic_tprime_expansion_reduced(amp, order)?;
    Ok(TprimeExpansion {
        entries: reduced
            .iter()
            .map(|e| TprimeEntry {
                j: e.j,
                c: factor * e.c.to_f64(),
                d: factor * e.d.to_f64(),
            })
            .collect(),
    })
}

/// Radial heat-kernel model used for numerical `T′`.
#[derive(Debug, Clone, PartialEq)]
pub enum TprimeModel {
    /// Exact scalar kernel of `H³` (`d = 3`, trivial `ν`).
    ExactH3,
    /// `t^{-d/2} e^{-r²/4t} a_0^ν`.
    Leading(KWeight),
}

impl TprimeModel {
    /// Exact kernel when available, leading parametrix term otherwise.
    pub fn default_for(nu: &KWeight, dim: &Dimension) -> Self {
        if dim.n() == 1 && nu.coords().iter().all(|k| *k == Q::from_integer(0)) {
            Self::ExactH3
        } else {
            Self::Leading(nu.clone())
        }
    }

    /// Kernel value at `‖x‖ = s`.
    pub fn kernel(&self, dim: &Dimension, s: f64, t: f64) -> Result<f64> {
        let r = distance_from_norm(s);
        match self {
            Self::ExactH3 => {
                if dim.n() != 1 {
                    return Err(Error::InvalidParameter("the exact H³ kernel needs d = 3".into()));
                }
                h3_scalar_kernel(r, t)
            }
            Self::Leading(nu) => {
                Ok(t.powf(-(dim.d() as f64) / 2.0) * (-r * r / (4.0 * t)).exp() * leading_amplitude_value(nu, dim, s))
            }
        }
    }
}

/// `T′(h_t) = vol(S^{m-1}) ∫_0^∞ H_t(s) s^{m-1} log s ds` for a radial model,
/// integrated in the geodesic radius `r` with `s = 2 sinh(r/2)`.
pub fn tprime_numeric(t: f64, dim: &Dimension, model: &TprimeModel, cfg: AdaptiveConfig) -> Result<f64> {
    check_t(t)?;
    let m = dim.d() - 1;
    let area = 2.0 * PI.powf(m as f64 / 2.0) / gamma_half(m as u32);
    let integrand = |r: f64| -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        let s = 2.0 * (0.5 * r).sinh();
        let ds = (0.5 * r).cosh();
        match model.kernel(dim, s, t) {
            Ok(h) => h * s.powi(m as i32 - 1) * s.ln() * ds,
            Err(_) => f64::NAN,
        }
    };
    if let TprimeModel::ExactH3 = model {
        model.kernel(dim, 0.0, t)?;
    }
    // Gaussian scale √t near the origin, exponential growth m r/2 further out
    let scale = t.sqrt();
    let r_max = m as f64 * t + 2.0 * (t * 200.0).sqrt() + 1.0;
    let mut breaks = vec![0.0];
    breaks.extend((0..40).rev().map(|k| scale * 0.5f64.powi(k)).filter(|&b| b < r_max));
    let mut b = scale * 2.0;
    while b < r_max {
        breaks.push(b);
        b *= 2.0;
    }
    breaks.push(r_max);
    let res = integrate_panels(integrand, &breaks, cfg)?;
    if !res.value.is_finite() {
        return Err(Error::InvalidParameter("kernel model could not be evaluated".into()));
    }
    Ok(area * res.value)
}

/// The four contributions and `I + H + C₁T + C₂T′`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometricSide {
    pub t: f64,
    pub identity: f64,
    pub hyperbolic: f64,
    pub parabolic_t: f64,
    pub parabolic_tprime: f64,
    pub total: f64,
}

/// `Tr_reg(e^{-tA_ν}) = I(h_t) + H(h_t) + C₁ T(h_t) + C₂ T′(h_t)`.
pub fn geometric_side(t: f64, manifold: &ManifoldData, nu: &KWeight, model: &TprimeModel, cfg: AdaptiveConfig) -> Result<GeometricSide> {
    check_t(t)?;
    manifold.validate()?;
    let dim = &manifold.dim;
    let id_sigmas = identity_sigmas(nu, dim)?;
    let par_sigmas = parabolic_sigmas(nu, dim)?;
    let plain: Vec<MWeight> = id_sigmas.iter().map(|(s, _)| s.clone()).collect();
    let identity = identity_term(t, manifold.volume, &id_sigmas, dim, manifold.c_n)?;
    let hyperbolic = hyperbolic_term(t, manifold, &plain)?;
    let parabolic_t = parabolic_t_term(t, &par_sigmas, dim)?;
    let parabolic_tprime = if manifold.c2 != 0.0 { tprime_numeric(t, dim, model, cfg)? } else { 0.0 };
    Ok(GeometricSide {
        t,
        identity,
        hyperbolic,
        parabolic_t,
        parabolic_tprime,
        total: identity + hyperbolic + manifold.c1 * parabolic_t + manifold.c2 * parabolic_tprime,
    })
}

/// Amplitudes used by [`geometric_expansion`]: all orders of the exact
/// kernel for `d = 3`, trivial `ν`; only `a_0` otherwise.
pub fn default_amplitude(nu: &KWeight, dim: &Dimension, order: u32) -> Result<HeatAmplitude<f64>> {
    // the T′ expansion may use one level beyond `order`
    let degree = 3 * (order + 1);
    match TprimeModel::default_for(nu, dim) {
        TprimeModel::ExactH3 => h3_amplitudes(degree, order as usize / 2),
        TprimeModel::Leading(_) => leading_amplitude(nu, dim, degree),
    }
}

/// Small-time expansion of `I + C₁T + C₂T′` (the hyperbolic part is
/// `O(e^{-c/t})`), truncated at the largest exponent all parts determine.
pub fn geometric_expansion(manifold: &ManifoldData, nu: &KWeight, amp: &HeatAmplitude<f64>, order: usize) -> Result<SmallTimeExpansion> {
    manifold.validate()?;
    let dim = &manifold.dim;
    let half_d = Q::new(dim.d() as i64, 2);
    let mut beta_max = Q::from_integer(order as i64) - half_d;
    let mut total = identity_expansion(manifold.volume, &identity_sigmas(nu, dim)?, dim, manifold.c_n, order)?;
    if manifold.c1 != 0.0 {
        let j = (beta_max + Q::new(1, 2)).floor().to_integer().max(0) as usize;
        total = total.add(&parabolic_t_expansion(&parabolic_sigmas(nu, dim)?, dim, j).scale(manifold.c1));
    }
    if manifold.c2 != 0.0 {
        // level j sits at t^{(j-1)/2}
        let trusted = 2 * amp.i_max() as i64 + 1;
        let wanted = (beta_max * 2 + 1).floor().to_integer().max(0);
        let level = trusted.min(wanted);
        beta_max = beta_max.min(Q::new(level - 1, 2));
        total = total.add(&parabolic_tprime_expansion(amp, level as u32)?.to_small_time().scale(manifold.c2));
    }
    Ok(total.truncate(beta_max))
}
