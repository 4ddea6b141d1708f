//! Gamma and digamma at integers and half-integers, by exact recursion from
//! `Γ(1/2) = √π`, `Γ(1) = 1`, `ψ(1/2) = -γ - 2 ln 2`, `ψ(1) = -γ`.

use crate::scalar::{Lin3, Scalar};

/// `Γ(h/2)` for a positive integer `h`, split as `rational · π^{e/2}` with
/// `e ∈ {0, 1}`. Returns `(rational, sqrt_pi_power)`.
pub fn gamma_half_exact<S: Scalar>(twice: u32) -> (S, u32) {
    assert!(twice > 0, "gamma pole at 0");
    if twice.is_multiple_of(2) {
        let k = twice / 2;
        ((1..k as i64).fold(S::one(), |acc, j| acc * S::from_i64(j)), 0)
    } else {
        // Γ(a + 1/2) = (1/2)(3/2)...(a - 1/2) √π
        let a = (twice - 1) / 2;
        let v = (0..a as i64).fold(S::one(), |acc, j| acc * S::from_ratio(2 * j + 1, 2));
        (v, 1)
    }
}

/// `Γ(h/2)` as a float.
pub fn gamma_half(twice: u32) -> f64 {
    let (q, e) = gamma_half_exact::<f64>(twice);
    q * std::f64::consts::PI.sqrt().powi(e as i32)
}

/// `ψ(h/2)` for a positive integer `h`, in the basis `{1, γ, ln 2}`.
pub fn digamma_half<S: Scalar>(twice: u32) -> Lin3<S> {
    assert!(twice > 0, "digamma pole at 0");
    let mut out = Lin3::<S>::zero();
    out.euler = -S::one();
    if twice.is_multiple_of(2) {
        // ψ(k) = -γ + H_{k-1}
        let k = twice / 2;
        for j in 1..k as i64 {
            out.one = out.one.clone() + S::from_ratio(1, j);
        }
    } else {
        // ψ(a + 1/2) = -γ - 2 ln 2 + Σ_{j=1}^{a} 2/(2j-1)
        let a = (twice - 1) / 2;
        out.ln2 = S::from_i64(-2);
        for j in 1..=a as i64 {
            out.one = out.one.clone() + S::from_ratio(2, 2 * j - 1);
        }
    }
    out
}
