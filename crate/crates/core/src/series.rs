//! Sparse truncated multivariate Taylor series and closed-form Gaussian and
//! Gaussian-log moments.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Lin3, Scalar};
use crate::special::{digamma_half, gamma_half_exact};

/// Exponent tuple `α = (α_1, ..., α_m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(m: usize) -> Self {
        Self(vec![0; m])
    }

    pub fn unit(m: usize, i: usize) -> Self {
        let mut a = vec![0; m];
        a[i] = 1;
        Self(a)
    }

    pub fn m(&self) -> usize {
        self.0.len()
    }

    /// `|α| = Σ α_i`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn all_even(&self) -> bool {
        self.0.iter().all(|a| a % 2 == 0)
    }

    fn plus(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Polynomial in `m` variables truncated at total degree `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<S> {
    m: usize,
    degree: u32,
    terms: BTreeMap<MultiIndex, S>,
}

impl<S: Scalar> TruncatedSeries<S> {
    pub fn zero(m: usize, degree: u32) -> Self {
        Self {
            m,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(m: usize, degree: u32, c: S) -> Self {
        let mut s = Self::zero(m, degree);
        s.insert(MultiIndex::zero(m), c);
        s
    }

    /// The coordinate function `x_i`.
    pub fn variable(m: usize, degree: u32, i: usize) -> Self {
        let mut s = Self::zero(m, degree);
        s.insert(MultiIndex::unit(m, i), S::one());
        s
    }

    /// Builds from `(α, c)` pairs; terms above the degree are dropped.
    pub fn from_terms(m: usize, degree: u32, terms: impl IntoIterator<Item = (MultiIndex, S)>) -> Result<Self> {
        let mut s = Self::zero(m, degree);
        for (alpha, c) in terms {
            if alpha.m() != m {
                return Err(Error::DimensionMismatch(format!(
                    "multi-index {alpha} has {} entries, series has m = {m}",
                    alpha.m()
                )));
            }
            s.accumulate(alpha, c);
        }
        Ok(s)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> S {
        self.terms.get(alpha).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.terms.iter()
    }

    /// Number of stored (nonzero) coefficients.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sets a coefficient (dropping it if zero or above the degree).
    pub fn insert(&mut self, alpha: MultiIndex, c: S) {
        if alpha.total() > self.degree || c.is_zero() {
            self.terms.remove(&alpha);
        } else {
            self.terms.insert(alpha, c);
        }
    }

    fn accumulate(&mut self, alpha: MultiIndex, c: S) {
        if alpha.total() > self.degree || c.is_zero() {
            return;
        }
        let v = self.coeff(&alpha) + c;
        self.insert(alpha, v);
    }

    /// Lowest total degree of a nonzero term (`None` for the zero series).
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::total).min()
    }

    /// Homogeneous part of total degree `k`.
    pub fn homogeneous(&self, k: u32) -> Self {
        Self {
            m: self.m,
            degree: self.degree,
            terms: self.terms.iter().filter(|(a, _)| a.total() == k).map(|(a, c)| (a.clone(), c.clone())).collect(),
        }
    }

    pub fn truncate(&self, degree: u32) -> Self {
        Self {
            m: self.m,
            degree,
            terms: self.terms.iter().filter(|(a, _)| a.total() <= degree).map(|(a, c)| (a.clone(), c.clone())).collect(),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.m != other.m || self.degree != other.degree {
            return Err(Error::SeriesMismatch {
                m1: self.m,
                d1: self.degree,
                m2: other.m,
                d2: other.degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.accumulate(a.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.m, self.degree);
        for (a, ca) in &self.terms {
            let room = self.degree - a.total();
            for (b, cb) in &other.terms {
                if b.total() <= room {
                    out.accumulate(a.plus(b), ca.clone() * cb.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.m, self.degree);
        if c.is_zero() {
            return out;
        }
        for (a, v) in &self.terms {
            out.insert(a.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.m, self.degree, S::one());
        for _ in 0..k {
            out = out.mul(self).expect("same shape");
        }
        out
    }

    /// Evaluates at a point, in floating point.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(a, c)| c.to_f64() * a.0.iter().zip(x).map(|(&e, &xi)| xi.powi(e as i32)).product::<f64>())
            .sum()
    }

    pub fn to_f64_series(&self) -> TruncatedSeries<f64> {
        let mut out = TruncatedSeries::<f64>::zero(self.m, self.degree);
        for (a, c) in &self.terms {
            out.insert(a.clone(), c.to_f64());
        }
        out
    }

    /// Substitutes `u = Σ x_i²` into a univariate series in `u`.
    pub fn compose_radial(u_series: &Self, m: usize, degree: u32) -> Result<Self> {
        if u_series.m != 1 {
            return Err(Error::DimensionMismatch(format!(
                "radial composition needs a univariate series, got m = {}",
                u_series.m
            )));
        }
        let mut u = Self::zero(m, degree);
        for i in 0..m {
            let mut a = vec![0; m];
            a[i] = 2;
            u.insert(MultiIndex(a), S::one());
        }
        let mut out = Self::zero(m, degree);
        let mut power = Self::constant(m, degree, S::one());
        let max_k = u_series.terms.keys().map(|a| a.0[0]).max().unwrap_or(0);
        for k in 0..=max_k.min(degree / 2) {
            if k > 0 {
                power = power.mul(&u)?;
            }
            let c = u_series.coeff(&MultiIndex(vec![k]));
            if !c.is_zero() {
                out = out.add(&power.scale(&c))?;
            }
        }
        Ok(out)
    }

    /// Univariate series from its coefficient list `[c_0, c_1, ...]`.
    pub fn univariate(coeffs: &[S], degree: u32) -> Self {
        let mut out = Self::zero(1, degree);
        for (k, c) in coeffs.iter().enumerate() {
            out.insert(MultiIndex(vec![k as u32]), c.clone());
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    m: usize,
    #[serde(rename = "D")]
    degree: u32,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    alpha: MultiIndex,
    c: f64,
}

impl Serialize for TruncatedSeries<f64> {
    fn serialize<Se: serde::Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        SeriesJson {
            m: self.m,
            degree: self.degree,
            terms: self.terms.iter().map(|(a, c)| TermJson { alpha: a.clone(), c: *c }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries<f64> {
    fn deserialize<De: serde::Deserializer<'de>>(d: De) -> std::result::Result<Self, De::Error> {
        let raw = SeriesJson::deserialize(d)?;
        let (m, degree) = (raw.m, raw.degree);
        Self::from_terms(m, degree, raw.terms.into_iter().map(|t| (t.alpha, t.c))).map_err(serde::de::Error::custom)
    }
}

/// `G_α / π^{m/2}` as an exact value, zero when some `α_i` is odd.
///
/// `G_α = ∫ e^{-‖y‖²} y^α dy = Π Γ((α_i + 1)/2)`.
pub fn gauss_moment_reduced<S: Scalar>(alpha: &MultiIndex) -> S {
    if !alpha.all_even() {
        return S::zero();
    }
    alpha
        .0
        .iter()
        .fold(S::one(), |acc, &a| acc * gamma_half_exact::<S>(a + 1).0)
}

/// `G_α = ∫_{R^m} e^{-‖y‖²} y^α dy`.
pub fn gauss_moment(alpha: &MultiIndex) -> f64 {
    gauss_moment_reduced::<f64>(alpha) * std::f64::consts::PI.powf(alpha.m() as f64 / 2.0)
}

/// `L_α / π^{m/2}` in the basis `{1, γ, ln 2}`.
///
/// `L_α = ∫ e^{-‖y‖²} y^α log‖y‖ dy = ½ ψ((m + |α|)/2) G_α`.
pub fn gauss_log_moment_reduced<S: Scalar>(alpha: &MultiIndex) -> Lin3<S> {
    let g = gauss_moment_reduced::<S>(alpha);
    if g.is_zero() {
        return Lin3::zero();
    }
    let twice = alpha.m() as u32 + alpha.total();
    digamma_half::<S>(twice).scale(&(g * S::from_ratio(1, 2)))
}

/// `L_α = ∫_{R^m} e^{-‖y‖²} y^α log‖y‖ dy`.
pub fn gauss_log_moment(alpha: &MultiIndex) -> f64 {
    gauss_log_moment_reduced::<f64>(alpha).to_f64() * std::f64::consts::PI.powf(alpha.m() as f64 / 2.0)
}

/// `∫ e^{-λ‖x‖²} x^α log‖x‖ dx = λ^{-(m+|α|)/2} (L_α − ½ G_α log λ)`.
pub fn scaled_log_moment(alpha: &MultiIndex, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    let e = (alpha.m() as f64 + alpha.total() as f64) / 2.0;
    Ok(lambda.powf(-e) * (gauss_log_moment(alpha) - 0.5 * gauss_moment(alpha) * lambda.ln()))
}

/// All multi-indices of length `m` and total degree exactly `k`.
pub fn multi_indices(m: usize, k: u32) -> Vec<MultiIndex> {
    fn rec(m: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if cur.len() + 1 == m {
            cur.push(left);
            out.push(MultiIndex(cur.clone()));
            cur.pop();
            return;
        }
        for a in (0..=left).rev() {
            cur.push(a);
            rec(m, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    rec(m, k, &mut Vec::with_capacity(m), &mut out);
    out
}
