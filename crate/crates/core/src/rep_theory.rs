//! Highest-weight data for `G = SO0(d,1)` or `Spin(d,1)`, `K = SO(d)` or
//! `Spin(d)`, and `M = SO(d-1)` or `Spin(d-1)`, with `d = 2n + 1`.
//!
//! Weights are stored as exact rationals (integers or half-integers), in the
//! coordinates `e_1, ..., e_{n+1}` of the `D_{n+1}` root system. `G`-weights
//! use all `n + 1` coordinates, `K`- and `M`-weights use `e_2, ..., e_{n+1}`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact weight coordinate.
pub type Q = Rational64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    SO0,
    Spin,
}

/// `d = 2n + 1` together with the choice of group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dimension {
    n: usize,
    kind: GroupKind,
}

impl Dimension {
    pub fn new(n: usize, kind: GroupKind) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive (d >= 3)".into()));
        }
        Ok(Self { n, kind })
    }

    /// Builds the dimension from the odd manifold dimension `d`.
    pub fn from_d(d: usize, kind: GroupKind) -> Result<Self> {
        if d < 3 || d.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!("d must be odd and >= 3, got {d}")));
        }
        Self::new((d - 1) / 2, kind)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        2 * self.n + 1
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }
}

/// A weight coordinate vector with the JSON encoding used on the wire:
/// integers as numbers, everything else as `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coords(pub Vec<Q>);

impl Serialize for Coords {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for q in &self.0 {
            if q.is_integer() {
                seq.serialize_element(q.numer())?;
            } else {
                seq.serialize_element(&format!("{}/{}", q.numer(), q.denom()))?;
            }
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Coords {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Str(String),
        }
        let raw = Vec::<Repr>::deserialize(d)?;
        raw.into_iter()
            .map(|r| match r {
                Repr::Int(v) => Ok(Q::from_integer(v)),
                Repr::Str(s) => parse_rational(&s).map_err(de::Error::custom),
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Coords)
    }
}

/// Parses `"3"`, `"-1/2"`, `"1.5"`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::InvalidWeight(format!("cannot parse {s:?} as a rational"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Q::new(p, q));
    }
    if let Ok(v) = s.parse::<i64>() {
        return Ok(Q::from_integer(v));
    }
    // decimal halves such as "1.5"
    let v: f64 = s.parse().map_err(|_| bad())?;
    let twice = (2.0 * v).round();
    if (2.0 * v - twice).abs() > 1e-12 {
        return Err(bad());
    }
    Ok(Q::new(twice as i64, 2))
}

/// Parses a comma-separated weight such as `"2,1/2"`.
pub fn parse_coords(s: &str) -> Result<Vec<Q>> {
    s.split(',').map(parse_rational).collect()
}

impl fmt::Display for Coords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, q) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, ")")
    }
}

fn check_integrality(k: &[Q], kind: GroupKind) -> Result<()> {
    let all_int = k.iter().all(|q| q.is_integer());
    let all_half = k.iter().all(|q| (*q * 2).is_integer() && !q.is_integer());
    if all_int || (all_half && kind == GroupKind::Spin) {
        return Ok(());
    }
    if all_half {
        return Err(Error::InvalidWeight("half-integral weights need group_kind = Spin".into()));
    }
    Err(Error::InvalidWeight(format!(
        "entries {} must be all integers or all half-integers",
        Coords(k.to_vec())
    )))
}

fn check_len(k: &[Q], expected: usize, what: &str) -> Result<()> {
    if k.len() != expected {
        return Err(Error::DimensionMismatch(format!(
            "{what} weight needs {expected} entries, got {}",
            k.len()
        )));
    }
    Ok(())
}

fn non_increasing(k: &[Q]) -> bool {
    k.windows(2).all(|w| w[0] >= w[1])
}

/// Highest weight of a finite-dimensional representation of `G`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GWeight(Coords);

/// Highest weight of an irreducible representation of `K`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KWeight(Coords);

/// Highest weight of an irreducible representation of `M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MWeight(Coords);

impl GWeight {
    /// `k_1 ≥ ... ≥ k_n ≥ |k_{n+1}|`.
    pub fn new(dim: &Dimension, k: Vec<Q>) -> Result<Self> {
        check_len(&k, dim.n + 1, "G")?;
        check_integrality(&k, dim.kind)?;
        let n = dim.n;
        if !non_increasing(&k[..n]) || k[n - 1] < k[n].abs() {
            return Err(Error::InvalidWeight(format!("{} is not dominant for G", Coords(k))));
        }
        Ok(Self(Coords(k)))
    }

    pub fn from_ints(dim: &Dimension, k: &[i64]) -> Result<Self> {
        Self::new(dim, k.iter().map(|&v| Q::from_integer(v)).collect())
    }

    pub fn trivial(dim: &Dimension) -> Self {
        Self(Coords(vec![Q::zero(); dim.n + 1]))
    }

    pub fn coords(&self) -> &[Q] {
        &self.0 .0
    }

    pub fn validate(&self, dim: &Dimension) -> Result<()> {
        Self::new(dim, self.0 .0.clone()).map(|_| ())
    }
}

impl KWeight {
    /// `k_2 ≥ ... ≥ k_{n+1} ≥ 0`.
    pub fn new(dim: &Dimension, k: Vec<Q>) -> Result<Self> {
        check_len(&k, dim.n, "K")?;
        check_integrality(&k, dim.kind)?;
        if !non_increasing(&k) || k[dim.n - 1] < Q::zero() {
            return Err(Error::InvalidWeight(format!("{} is not dominant for K", Coords(k))));
        }
        Ok(Self(Coords(k)))
    }

    pub fn from_ints(dim: &Dimension, k: &[i64]) -> Result<Self> {
        Self::new(dim, k.iter().map(|&v| Q::from_integer(v)).collect())
    }

    pub fn trivial(dim: &Dimension) -> Self {
        Self(Coords(vec![Q::zero(); dim.n]))
    }

    pub fn coords(&self) -> &[Q] {
        &self.0 .0
    }

    pub fn validate(&self, dim: &Dimension) -> Result<()> {
        Self::new(dim, self.0 .0.clone()).map(|_| ())
    }
}

impl MWeight {
    /// `k_2 ≥ ... ≥ k_n ≥ |k_{n+1}|`.
    pub fn new(dim: &Dimension, k: Vec<Q>) -> Result<Self> {
        check_len(&k, dim.n, "M")?;
        check_integrality(&k, dim.kind)?;
        let n = dim.n;
        if !non_increasing(&k[..n - 1]) || (n >= 2 && k[n - 2] < k[n - 1].abs()) {
            return Err(Error::InvalidWeight(format!("{} is not dominant for M", Coords(k))));
        }
        Ok(Self(Coords(k)))
    }

    pub fn from_ints(dim: &Dimension, k: &[i64]) -> Result<Self> {
        Self::new(dim, k.iter().map(|&v| Q::from_integer(v)).collect())
    }

    pub fn trivial(dim: &Dimension) -> Self {
        Self(Coords(vec![Q::zero(); dim.n]))
    }

    pub fn coords(&self) -> &[Q] {
        &self.0 .0
    }

    pub fn validate(&self, dim: &Dimension) -> Result<()> {
        Self::new(dim, self.0 .0.clone()).map(|_| ())
    }
}

impl fmt::Display for GWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Display for KWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Display for MWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `(ρ_1, ..., ρ_{n+1})` with `ρ_j = n + 1 - j`.
pub fn rho_vector(dim: &Dimension) -> Vec<Q> {
    (1..=dim.n + 1).map(|j| Q::from_integer((dim.n + 1 - j) as i64)).collect()
}

/// The action of the nontrivial element of `W(A)`: flips the sign of `k_{n+1}`.
pub fn weyl_flip(sigma: &MWeight) -> MWeight {
    let mut k = sigma.coords().to_vec();
    if let Some(last) = k.last_mut() {
        *last = -*last;
    }
    MWeight(Coords(k))
}

fn rho_norm_sq(rho: &[Q]) -> Q {
    rho.iter().map(|r| r * r).sum()
}

/// `c(σ) = Σ_{j≥2} (k_j(σ) + ρ_j)² − Σ_j ρ_j²`.
pub fn casimir_sigma(sigma: &MWeight, dim: &Dimension) -> Q {
    let rho = rho_vector(dim);
    let s: Q = sigma.coords().iter().zip(&rho[1..]).map(|(k, r)| (k + r) * (k + r)).sum();
    s - rho_norm_sq(&rho)
}

/// `τ(Ω) = Σ_j (k_j(τ) + ρ_j)² − Σ_j ρ_j²`.
pub fn casimir_tau(tau: &GWeight, dim: &Dimension) -> Q {
    let rho = rho_vector(dim);
    let s: Q = tau.coords().iter().zip(&rho).map(|(k, r)| (k + r) * (k + r)).sum();
    s - rho_norm_sq(&rho)
}

/// `τ ≅ τ_θ` iff `k_{n+1}(τ) = 0`.
pub fn is_theta_invariant(tau: &GWeight) -> bool {
    tau.coords().last().is_none_or(|k| k.is_zero())
}

fn same_class(a: &[Q], b: &[Q]) -> bool {
    match (a.first(), b.first()) {
        (Some(x), Some(y)) => (x - y).is_integer(),
        _ => true,
    }
}

/// `[ν : σ]` by the interlacing law for `SO(2n+1) ⊃ SO(2n)`:
/// `k_2(ν) ≥ k_2(σ) ≥ k_3(ν) ≥ ... ≥ k_{n+1}(ν) ≥ |k_{n+1}(σ)|`.
pub fn branching_multiplicity(nu: &KWeight, sigma: &MWeight) -> Result<u32> {
    let (a, b) = (nu.coords(), sigma.coords());
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "K-weight has {} entries, M-weight has {}",
            a.len(),
            b.len()
        )));
    }
    if !same_class(a, b) {
        return Ok(0);
    }
    let n = a.len();
    for j in 0..n {
        if b[j].abs() > a[j] {
            return Ok(0);
        }
        if j + 1 < n && b[j] < a[j + 1] {
            return Ok(0);
        }
    }
    Ok(1)
}

/// All `σ ∈ M̂` with `[ν : σ] = 1`, in lexicographic order.
pub fn restrict_to_m(nu: &KWeight) -> Vec<MWeight> {
    let a = nu.coords();
    let n = a.len();
    let ranges: Vec<(Q, Q)> = (0..n)
        .map(|j| if j + 1 < n { (a[j + 1], a[j]) } else { (-a[j], a[j]) })
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    enumerate_box(&ranges, &mut cur, &mut |v| out.push(MWeight(Coords(v.to_vec()))));
    out
}

fn enumerate_box(ranges: &[(Q, Q)], cur: &mut Vec<Q>, emit: &mut dyn FnMut(&[Q])) {
    if cur.len() == ranges.len() {
        emit(cur);
        return;
    }
    let (lo, hi) = ranges[cur.len()];
    let mut v = lo;
    while v <= hi {
        cur.push(v);
        enumerate_box(ranges, cur, emit);
        cur.pop();
        v += 1;
    }
}

fn weyl_product(shifted: &[Q], rho: &[Q], short_roots: bool) -> Q {
    let mut num = Q::from_integer(1);
    let mut den = Q::from_integer(1);
    let m = shifted.len();
    for i in 0..m {
        for j in i + 1..m {
            num *= (shifted[i] - shifted[j]) * (shifted[i] + shifted[j]);
            den *= (rho[i] - rho[j]) * (rho[i] + rho[j]);
        }
        if short_roots {
            num *= shifted[i];
            den *= rho[i];
        }
    }
    num / den
}

/// Weyl dimension formula for `M` (type `D_n` on `e_2, ..., e_{n+1}`).
pub fn dim_weyl_m(sigma: &MWeight, dim: &Dimension) -> u64 {
    let rho = &rho_vector(dim)[1..];
    let shifted: Vec<Q> = sigma.coords().iter().zip(rho).map(|(k, r)| k + r).collect();
    let v = weyl_product(&shifted, rho, false);
    debug_assert!(v.is_integer() && v.is_positive());
    v.to_integer() as u64
}

/// Weyl dimension formula for `K` (type `B_n`, `ρ_K = ρ_j + 1/2`).
pub fn dim_weyl_k(nu: &KWeight, dim: &Dimension) -> u64 {
    let half = Q::new(1, 2);
    let rho: Vec<Q> = rho_vector(dim)[1..].iter().map(|r| r + half).collect();
    let shifted: Vec<Q> = nu.coords().iter().zip(&rho).map(|(k, r)| k + r).collect();
    let v = weyl_product(&shifted, &rho, true);
    debug_assert!(v.is_integer() && v.is_positive());
    v.to_integer() as u64
}

/// Multiset of `SO(2)`-weights of `ν` restricted to the rotations in one
/// coordinate plane, via Gelfand–Tsetlin patterns for the chain
/// `SO(2n+1) ⊃ SO(2n) ⊃ SO(2n−1) ⊃ ... ⊃ SO(2)`.
///
/// `tr ν(R_φ) = Σ_m mult(m) e^{imφ}` for a rotation `R_φ` by angle `φ` in a
/// single plane.
pub fn plane_rotation_weights(nu: &KWeight) -> BTreeMap<Q, u64> {
    let mut out = BTreeMap::new();
    odd_orthogonal_weights(nu.coords(), &mut out);
    out
}

// SO(2k+1) with highest weight `lambda` (k entries, non-negative).
fn odd_orthogonal_weights(lambda: &[Q], out: &mut BTreeMap<Q, u64>) {
    let k = lambda.len();
    let ranges: Vec<(Q, Q)> = (0..k)
        .map(|j| if j + 1 < k { (lambda[j + 1], lambda[j]) } else { (-lambda[j], lambda[j]) })
        .collect();
    let mut cur = Vec::with_capacity(k);
    enumerate_box(&ranges, &mut cur, &mut |mu| even_orthogonal_weights(mu, out));
}

// SO(2k) with highest weight `mu` (k entries, last may be negative).
fn even_orthogonal_weights(mu: &[Q], out: &mut BTreeMap<Q, u64>) {
    let k = mu.len();
    if k == 1 {
        *out.entry(mu[0]).or_insert(0) += 1;
        return;
    }
    // SO(2k) ⊃ SO(2k-1): mu_1 ≥ κ_1 ≥ mu_2 ≥ ... ≥ κ_{k-1} ≥ |mu_k|
    let ranges: Vec<(Q, Q)> = (0..k - 1)
        .map(|j| {
            let lo = if j + 2 == k { mu[k - 1].abs() } else { mu[j + 1] };
            (lo, mu[j])
        })
        .collect();
    let mut cur = Vec::with_capacity(k - 1);
    enumerate_box(&ranges, &mut cur, &mut |kappa| odd_orthogonal_weights(kappa, out));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(dd: usize) -> Dimension {
        Dimension::from_d(dd, GroupKind::SO0).unwrap()
    }

    fn q(v: i64) -> Q {
        Q::from_integer(v)
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho_vector(&d(3)), vec![q(1), q(0)]);
        assert_eq!(rho_vector(&d(5)), vec![q(2), q(1), q(0)]);
        assert_eq!(rho_vector(&d(7)), vec![q(3), q(2), q(1), q(0)]);
    }

    #[test]
    fn flip_examples() {
        let dm = d(5);
        let s = MWeight::from_ints(&dm, &[2, 1]).unwrap();
        assert_eq!(weyl_flip(&s).coords(), &[q(2), q(-1)]);
        let s = MWeight::from_ints(&dm, &[3, 0]).unwrap();
        assert_eq!(weyl_flip(&s), s);
        let s = MWeight::from_ints(&dm, &[1, -1]).unwrap();
        assert_eq!(weyl_flip(&s).coords(), &[q(1), q(1)]);
    }

    #[test]
    fn casimir_examples() {
        let d3 = d(3);
        assert_eq!(casimir_sigma(&MWeight::from_ints(&d3, &[0]).unwrap(), &d3), q(-1));
        assert_eq!(casimir_sigma(&MWeight::from_ints(&d3, &[1]).unwrap(), &d3), q(0));
        let d5 = d(5);
        assert_eq!(casimir_sigma(&MWeight::from_ints(&d5, &[0, 0]).unwrap(), &d5), q(-4));
        assert_eq!(casimir_tau(&GWeight::trivial(&d3), &d3), q(0));
        assert_eq!(casimir_tau(&GWeight::from_ints(&d3, &[1, 0]).unwrap(), &d3), q(3));
        assert_eq!(casimir_tau(&GWeight::from_ints(&d3, &[1, 1]).unwrap(), &d3), q(4));
    }

    #[test]
    fn branching_examples() {
        let d3 = d(3);
        let nu1 = KWeight::from_ints(&d3, &[1]).unwrap();
        let s0 = MWeight::from_ints(&d3, &[0]).unwrap();
        let s2 = MWeight::from_ints(&d3, &[2]).unwrap();
        assert_eq!(branching_multiplicity(&nu1, &s0).unwrap(), 1);
        assert_eq!(branching_multiplicity(&nu1, &s2).unwrap(), 0);
        assert_eq!(branching_multiplicity(&KWeight::trivial(&d3), &s0).unwrap(), 1);
        let bad = MWeight::from_ints(&d(5), &[0, 0]).unwrap();
        assert!(matches!(
            branching_multiplicity(&nu1, &bad),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn weyl_dimensions() {
        let d3 = d(3);
        for k in -4..=4 {
            assert_eq!(dim_weyl_m(&MWeight::from_ints(&d3, &[k]).unwrap(), &d3), 1);
        }
        let d5 = d(5);
        assert_eq!(dim_weyl_m(&MWeight::trivial(&d5), &d5), 1);
        assert_eq!(dim_weyl_m(&MWeight::from_ints(&d5, &[1, 0]).unwrap(), &d5), 4);
        // SO(5): vector 5, adjoint 10; SO(7): vector 7, spinor-free adjoint 21
        assert_eq!(dim_weyl_k(&KWeight::from_ints(&d5, &[1, 0]).unwrap(), &d5), 5);
        assert_eq!(dim_weyl_k(&KWeight::from_ints(&d5, &[1, 1]).unwrap(), &d5), 10);
        let d7 = d(7);
        assert_eq!(dim_weyl_k(&KWeight::from_ints(&d7, &[1, 1, 0]).unwrap(), &d7), 21);
        // spin representation of Spin(5) has dimension 4
        let s5 = Dimension::from_d(5, GroupKind::Spin).unwrap();
        let half = Q::new(1, 2);
        assert_eq!(dim_weyl_k(&KWeight::new(&s5, vec![half, half]).unwrap(), &s5), 4);
    }

    // Weight count of SO(4) vector rep: the weights ±e_2, ±e_3 of (1,0).
    #[test]
    fn so4_vector_by_weight_enumeration() {
        let d5 = d(5);
        let sigma = MWeight::from_ints(&d5, &[1, 0]).unwrap();
        // weights of the SO(4) vector representation: ±e_i, i = 2,3
        let weights = [[1, 0], [-1, 0], [0, 1], [0, -1]];
        assert_eq!(weights.len() as u64, dim_weyl_m(&sigma, &d5));
    }

    #[test]
    fn theta_invariance() {
        let d3 = d(3);
        assert!(is_theta_invariant(&GWeight::from_ints(&d3, &[1, 0]).unwrap()));
        assert!(!is_theta_invariant(&GWeight::from_ints(&d3, &[1, 1]).unwrap()));
        assert!(is_theta_invariant(&GWeight::trivial(&d3)));
    }

    #[test]
    fn weight_validation() {
        let d5 = d(5);
        assert!(KWeight::from_ints(&d5, &[1, 2]).is_err());
        assert!(KWeight::from_ints(&d5, &[1, -1]).is_err());
        assert!(MWeight::from_ints(&d5, &[1, -1]).is_ok());
        assert!(MWeight::from_ints(&d5, &[1, -2]).is_err());
        assert!(GWeight::from_ints(&d5, &[1, 1]).is_err());
        let half = Q::new(1, 2);
        assert!(MWeight::new(&d5, vec![half, half]).is_err());
        let s5 = Dimension::from_d(5, GroupKind::Spin).unwrap();
        assert!(MWeight::new(&s5, vec![half, -half]).is_ok());
        assert!(MWeight::new(&s5, vec![half, q(0)]).is_err());
    }

    #[test]
    fn restriction_dimension_count() {
        for dd in [3usize, 5, 7] {
            let dm = d(dd);
            let n = dm.n();
            // a handful of dominant K-weights per dimension
            let samples: Vec<Vec<i64>> = match n {
                1 => (0..6).map(|k| vec![k]).collect(),
                2 => vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![2, 1], vec![3, 3], vec![4, 2]],
                _ => vec![vec![0, 0, 0], vec![1, 0, 0], vec![1, 1, 1], vec![2, 1, 0], vec![3, 2, 2]],
            };
            for s in samples {
                let nu = KWeight::from_ints(&dm, &s).unwrap();
                let total: u64 = restrict_to_m(&nu).iter().map(|s| dim_weyl_m(s, &dm)).sum();
                assert_eq!(total, dim_weyl_k(&nu, &dm), "nu={nu}");
                let gt: u64 = plane_rotation_weights(&nu).values().sum();
                assert_eq!(gt, dim_weyl_k(&nu, &dm), "nu={nu}");
            }
        }
    }

    #[test]
    fn plane_weights_so3() {
        let d3 = d(3);
        let w = plane_rotation_weights(&KWeight::from_ints(&d3, &[2]).unwrap());
        let keys: Vec<Q> = w.keys().copied().collect();
        assert_eq!(keys, (-2..=2).map(q).collect::<Vec<_>>());
        assert!(w.values().all(|&m| m == 1));
    }

    #[test]
    fn coords_json() {
        let c = Coords(vec![q(2), Q::new(-1, 2)]);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"[2,"-1/2"]"#);
        let back: Coords = serde_json::from_str(r#"[2, "-1/2"]"#).unwrap();
        assert_eq!(back, c);
        assert_eq!(parse_coords("3, 1.5").unwrap(), vec![q(3), Q::new(3, 2)]);
        assert!(parse_rational("x").is_err());
    }
}
