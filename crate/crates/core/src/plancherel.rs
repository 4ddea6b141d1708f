//! The Plancherel polynomial `P_σ(z)` of the principal series and the
//! identity contribution `I(h_t^ν)` to the trace formula.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expansion::{ExpansionTerm, SmallTimeExpansion};
use crate::rep_theory::{casimir_sigma, rho_vector, Dimension, MWeight, Q};
use crate::scalar::{rational_to_f64, Scalar};
use crate::special::gamma_half_exact;

fn big(q: Q) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

/// `P_σ(z) = -c_n Π_{α>0} ⟨z e_1 + Λ(σ) + ρ_M, α⟩ / ⟨ρ_G, α⟩`, an even
/// polynomial of degree `2n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlancherelPolynomial {
    m_weight: MWeight,
    dim: Dimension,
    c_n: f64,
    /// exact coefficients of `w^k`, `w = z²`, without the factor `c_n`
    exact: Vec<BigRational>,
}

impl PlancherelPolynomial {
    pub fn build(sigma: &MWeight, dim: &Dimension, c_n: f64) -> Result<Self> {
        if !(c_n > 0.0 && c_n.is_finite()) {
            return Err(Error::InvalidParameter(format!("c_n must be positive, got {c_n}")));
        }
        sigma.validate(dim)?;
        let rho: Vec<BigRational> = rho_vector(dim).into_iter().map(big).collect();
        let v: Vec<BigRational> = sigma.coords().iter().zip(&rho[1..]).map(|(k, r)| big(*k) + r).collect();

        // roots e_i ± e_j, 2 ≤ i < j: constants
        let mut constant = -BigRational::one();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                let (ri, rj) = (&rho[i + 1], &rho[j + 1]);
                constant = constant * (&v[i] - &v[j]) * (&v[i] + &v[j]) / ((ri - rj) * (ri + rj));
            }
        }
        // roots e_1 ± e_j: (z - v_j)(z + v_j) = w - v_j²
        let mut poly = vec![BigRational::one()];
        for (j, vj) in v.iter().enumerate() {
            let rj = &rho[j + 1];
            constant /= (&rho[0] - rj) * (&rho[0] + rj);
            let c0 = -(vj * vj);
            let mut next = vec![BigRational::zero(); poly.len() + 1];
            for (k, p) in poly.iter().enumerate() {
                next[k + 1] += p;
                next[k] += p * &c0;
            }
            poly = next;
        }
        let exact = poly.into_iter().map(|p| p * &constant).collect();
        Ok(Self {
            m_weight: sigma.clone(),
            dim: *dim,
            c_n,
            exact,
        })
    }

    pub fn m_weight(&self) -> &MWeight {
        &self.m_weight
    }

    pub fn dim(&self) -> &Dimension {
        &self.dim
    }

    pub fn c_n(&self) -> f64 {
        self.c_n
    }

    /// Degree in `z`.
    pub fn degree(&self) -> usize {
        let top = self.exact.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
        2 * top
    }

    /// Exact coefficients of `z^{2k}` divided by `c_n`.
    pub fn exact_coeffs(&self) -> &[BigRational] {
        &self.exact
    }

    /// Coefficients of `z^{2k}`, `k = 0..=n`.
    pub fn coeffs(&self) -> Vec<f64> {
        self.exact.iter().map(|c| self.c_n * rational_to_f64(c)).collect()
    }

    /// Exact coefficients `q_k` of `P_σ(iλ) / c_n = Σ q_k λ^{2k}`.
    pub fn imag_axis_coeffs(&self) -> Vec<BigRational> {
        self.exact
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { c.clone() } else { -c.clone() })
            .collect()
    }

    /// Horner evaluation at complex `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let w = z * z;
        self.coeffs().iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c)
    }

    /// `P_σ(iλ)`, which is real.
    pub fn eval_imag(&self, lambda: f64) -> f64 {
        let w = -lambda * lambda;
        self.coeffs().iter().rev().fold(0.0, |acc, &c| acc * w + c)
    }
}

/// `σ` together with its multiplicity in the sum.
pub type WeightedSigma = (MWeight, u64);

fn check_vol(vol: f64) -> Result<()> {
    if !(vol >= 0.0 && vol.is_finite()) {
        return Err(Error::InvalidParameter(format!("volume must be nonnegative, got {vol}")));
    }
    Ok(())
}

/// Exact coefficients `e_j` with `I(h_t) = vol · c_n · √π · Σ_j e_j t^{-d/2+j}`,
/// `j = 0..=order`.
pub fn identity_expansion_reduced(sigmas: &[WeightedSigma], dim: &Dimension, order: usize) -> Result<Vec<BigRational>> {
    let n = dim.n();
    let mut out = vec![BigRational::zero(); order + 1];
    for (sigma, mult) in sigmas {
        let p = PlancherelPolynomial::build(sigma, dim, 1.0)?;
        let q = p.imag_axis_coeffs();
        let c = big(casimir_sigma(sigma, dim));
        let mult = BigRational::from_integer(BigInt::from(*mult));
        for (j, slot) in out.iter_mut().enumerate() {
            for (k, qk) in q.iter().enumerate() {
                // t^{-k-1/2} · t^i with i = j - n + k
                let Some(i) = (j + k).checked_sub(n) else { continue };
                let gamma = gamma_half_exact::<BigRational>(2 * k as u32 + 1).0;
                let mut ci = BigRational::one();
                for l in 1..=i as i64 {
                    ci = ci * &c / BigRational::from_integer(BigInt::from(l));
                }
                *slot += &mult * qk * gamma * ci;
            }
        }
    }
    Ok(out)
}

/// Small-time expansion `Σ_{j=0}^{N} a_j t^{-d/2+j}` of the identity term.
pub fn identity_expansion(
    vol: f64,
    sigmas: &[WeightedSigma],
    dim: &Dimension,
    c_n: f64,
    order: usize,
) -> Result<SmallTimeExpansion> {
    check_vol(vol)?;
    let reduced = identity_expansion_reduced(sigmas, dim, order)?;
    let scale = vol * c_n * std::f64::consts::PI.sqrt();
    let half_d = Q::new(dim.d() as i64, 2);
    Ok(SmallTimeExpansion::from_terms(
        reduced
            .iter()
            .enumerate()
            .map(|(j, e)| ExpansionTerm::power(Q::from_integer(j as i64) - half_d, scale * rational_to_f64(e)))
            .filter(|term| term.c != 0.0),
    ))
}

/// `I(h_t) = vol Σ_σ mult · e^{t c(σ)} ∫ e^{-tλ²} P_σ(iλ) dλ`, with the
/// Gaussian integrals in closed form.
pub fn identity_term(t: f64, vol: f64, sigmas: &[WeightedSigma], dim: &Dimension, c_n: f64) -> Result<f64> {
    check_t(t)?;
    check_vol(vol)?;
    let mut total = 0.0;
    for (sigma, mult) in sigmas {
        let p = PlancherelPolynomial::build(sigma, dim, c_n)?;
        let c = casimir_sigma(sigma, dim);
        let c = *c.numer() as f64 / *c.denom() as f64;
        let integral: f64 = p
            .imag_axis_coeffs()
            .iter()
            .enumerate()
            .map(|(k, qk)| {
                let (g, _) = gamma_half_exact::<f64>(2 * k as u32 + 1);
                c_n * qk.to_f64() * g * std::f64::consts::PI.sqrt() * t.powf(-(k as f64) - 0.5)
            })
            .sum();
        total += *mult as f64 * (t * c).exp() * integral;
    }
    Ok(vol * total)
}

pub(crate) fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
    }
    Ok(())
}
