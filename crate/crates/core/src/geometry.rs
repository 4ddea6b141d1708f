//! The nilpotent slice `n(x)`, hyperbolic distance along it, the Jacobian of
//! the exponential map and the rotation part of the Cartan decomposition.
//!
//! Matrices act on `R^{d+1}` with the form `J = diag(I_d, -1)`. Coordinates
//! `0..m` (with `m = d - 1`) carry `x`, coordinate `m` is the remaining
//! spatial direction and coordinate `d` is timelike.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::rep_theory::{plane_rotation_weights, Dimension, KWeight};
use crate::scalar::Scalar;
use crate::series::{MultiIndex, TruncatedSeries};

/// `Y(x)` with block sizes `(m, 1, 1)`: `[[0, -x, x], [xᵀ, 0, 0], [xᵀ, 0, 0]]`.
pub fn y_matrix(x: &[f64]) -> DMatrix<f64> {
    let m = x.len();
    let mut y = DMatrix::zeros(m + 2, m + 2);
    for (i, &xi) in x.iter().enumerate() {
        y[(i, m)] = -xi;
        y[(i, m + 1)] = xi;
        y[(m, i)] = xi;
        y[(m + 1, i)] = xi;
    }
    y
}

/// `n(x) = I + Y(x) + ½ Y(x)²`.
pub fn n_matrix(x: &[f64]) -> DMatrix<f64> {
    let y = y_matrix(x);
    let y2 = &y * &y;
    DMatrix::identity(x.len() + 2, x.len() + 2) + y + y2 * 0.5
}

fn norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0f64, |acc, &v| acc.hypot(v))
}

/// `r(x) = arcosh(1 + ‖x‖²/2)`.
pub fn hyp_distance(x: &[f64]) -> f64 {
    distance_from_norm(norm(x))
}

/// `arcosh(1 + s²/2)` for `s = ‖x‖ ≥ 0`, accurate near `s = 0`.
pub fn distance_from_norm(s: f64) -> f64 {
    if s > 1e100 {
        // 2 asinh(s/2) = 2 ln s + s^{-2}·2 + ...
        return 2.0 * s.ln();
    }
    let v = 0.5 * s * s;
    if v < 1e-4 {
        // arcosh(1 + v) = √(2v) ₂F₁(½, ½; 3/2; −v/2)
        let z = -0.5 * v;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 0..30 {
            let k = k as f64;
            term *= (k + 0.5) * (k + 0.5) / ((k + 1.5) * (k + 1.0)) * z;
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        return (2.0 * v).sqrt() * sum;
    }
    (v + (v * (v + 2.0)).sqrt()).ln_1p()
}

fn hypergeometric_g<S: Scalar>(degree: u32) -> Vec<S> {
    // G(u) = Σ g_k u^k,  g_k = ((½)_k)² / ((3/2)_k k!) (−¼)^k,  r = √u G(u)
    let mut g = vec![S::one()];
    for k in 0..degree as i64 {
        let prev = g.last().expect("nonempty").clone();
        let ratio = S::from_ratio((2 * k + 1) * (2 * k + 1), 2 * (2 * k + 3) * (k + 1)) * S::from_ratio(-1, 4);
        g.push(prev * ratio);
    }
    g
}

fn binomial_minus_half<S: Scalar>(degree: u32, x: S) -> Vec<S> {
    // (1 + x u)^{-1/2}
    let mut c = vec![S::one()];
    for k in 0..degree as i64 {
        let prev = c.last().expect("nonempty").clone();
        c.push(prev * S::from_ratio(-(2 * k + 1), 2 * (k + 1)) * x.clone());
    }
    c
}

/// Taylor series of `r² = arcosh(1 + u/2)²` in `u = ‖x‖²` through degree `D`.
pub fn r_squared_series<S: Scalar>(degree: u32) -> TruncatedSeries<S> {
    let g = TruncatedSeries::univariate(&hypergeometric_g::<S>(degree), degree);
    let g2 = g.mul(&g).expect("same shape");
    let mut out = TruncatedSeries::zero(1, degree);
    for (a, c) in g2.terms() {
        out.insert(MultiIndex(vec![a.0[0] + 1]), c.clone());
    }
    out
}

/// Series of `(1 + u/4)^{-1/2} = cos(φ/2)` where `φ` is the rotation angle of
/// `k(n(x))`.
pub fn cos_half_angle_series<S: Scalar>(degree: u32) -> TruncatedSeries<S> {
    TruncatedSeries::univariate(&binomial_minus_half(degree, S::from_ratio(1, 4)), degree)
}

/// Series of `r / sinh r` in `u`; uses `sinh r = √u √(1 + u/4)`.
pub fn r_over_sinh_series<S: Scalar>(degree: u32) -> TruncatedSeries<S> {
    let g = TruncatedSeries::univariate(&hypergeometric_g::<S>(degree), degree);
    g.mul(&cos_half_angle_series(degree)).expect("same shape")
}

/// `j = (sinh r / r)^{d-1}`, the Jacobian of the exponential map of `H^d`.
pub fn jacobian(r: f64, dim: &Dimension) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::InvalidParameter(format!("r must be nonnegative, got {r}")));
    }
    Ok(sinh_over_r(r).powi(dim.d() as i32 - 1))
}

pub(crate) fn sinh_over_r(r: f64) -> f64 {
    if r < 1e-4 {
        let r2 = r * r;
        1.0 + r2 / 6.0 * (1.0 + r2 / 20.0)
    } else {
        r.sinh() / r
    }
}

/// Series of `j^{-1/2} = (r / sinh r)^n` in `u`.
pub fn jacobian_inv_sqrt_series<S: Scalar>(dim: &Dimension, degree: u32) -> TruncatedSeries<S> {
    r_over_sinh_series::<S>(degree).pow(dim.n() as u32)
}

/// Rotation part `k(g) = (g gᵀ)^{-1/2} g = U Vᵀ` of the Cartan
/// decomposition, from the singular value decomposition `g = U Σ Vᵀ`.
pub fn cartan_k(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if !g.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix is not square", g.nrows(), g.ncols())));
    }
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
    }
    let svd = g.clone().svd(true, true);
    let max = svd.singular_values.max();
    if svd.singular_values.iter().any(|&s| !(s > 1e-14 * max.max(f64::MIN_POSITIVE))) {
        return Err(Error::Singular);
    }
    match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => Ok(u * v_t),
        _ => Err(Error::Singular),
    }
}

/// Angle `φ = 2 arctan(‖x‖/2)` of the plane rotation `k(n(x))`.
pub fn rotation_angle(s: f64) -> f64 {
    2.0 * (0.5 * s).atan()
}

/// `tr ν(k(n(x)))` as a function of `s = ‖x‖`.
pub fn k_character(nu: &KWeight, s: f64) -> f64 {
    let phi = rotation_angle(s);
    plane_rotation_weights(nu)
        .iter()
        .map(|(m, &mult)| mult as f64 * (phi * (*m.numer() as f64) / (*m.denom() as f64)).cos())
        .sum()
}

/// Series in `u` of `tr ν(k(n(x))) = Σ_w mult(w) T_{2|w|}(cos(φ/2))` with
/// Chebyshev polynomials `T_j`.
pub fn k_character_series<S: Scalar>(nu: &KWeight, degree: u32) -> TruncatedSeries<S> {
    let weights = plane_rotation_weights(nu);
    let max_j = weights
        .keys()
        .map(|w| (num_traits::Signed::abs(w) * 2i64).to_integer() as usize)
        .max()
        .unwrap_or(0);
    let c = cos_half_angle_series::<S>(degree);
    let mut cheb = vec![TruncatedSeries::constant(1, degree, S::one()), c.clone()];
    while cheb.len() <= max_j {
        let k = cheb.len();
        let next = c.mul(&cheb[k - 1]).expect("same shape").scale(&S::from_i64(2)).sub(&cheb[k - 2]).expect("same shape");
        cheb.push(next);
    }
    let mut out = TruncatedSeries::zero(1, degree);
    for (w, &mult) in &weights {
        let j = (num_traits::Signed::abs(w) * 2i64).to_integer() as usize;
        out = out.add(&cheb[j].scale(&S::from_i64(mult as i64))).expect("same shape");
    }
    out
}
