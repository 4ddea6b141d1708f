//! Property tests for the structural invariants of each module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use selberg_heat::expansion::{ExpansionTerm, SmallTimeExpansion};
use selberg_heat::geometry::{cartan_k, hyp_distance, n_matrix, r_squared_series};
use selberg_heat::plancherel::{identity_expansion_reduced, identity_term, identity_expansion, PlancherelPolynomial};
use selberg_heat::rep_theory::{
    branching_multiplicity, casimir_sigma, casimir_tau, dim_weyl_m, weyl_flip, Dimension, GWeight, GroupKind, KWeight,
    MWeight, Q,
};
use selberg_heat::series::{multi_indices, MultiIndex, TruncatedSeries};
use selberg_heat::stationary_phase::expand_log_integral_reduced;
use selberg_heat::zeta_torsion::{zeta_values, ZetaConfig};

fn so(d: usize) -> Dimension {
    Dimension::from_d(d, GroupKind::SO0).unwrap()
}

/// Random M-weight for `d ∈ {3, 5, 7}` with entries of size at most 5.
fn m_weight() -> impl Strategy<Value = (Dimension, MWeight)> {
    prop_oneof![Just(3usize), Just(5), Just(7)].prop_flat_map(|d| {
        let n = (d - 1) / 2;
        (prop::collection::vec(0i64..=5, n), any::<bool>()).prop_map(move |(mut k, neg)| {
            k.sort_unstable_by(|a, b| b.cmp(a));
            if neg {
                k[n - 1] = -k[n - 1];
            }
            let dim = so(d);
            let w = MWeight::from_ints(&dim, &k).unwrap();
            (dim, w)
        })
    })
}

fn big(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn random_series(m: usize, degree: u32, coeffs: &[i64]) -> TruncatedSeries<BigRational> {
    let terms = (0..=degree)
        .flat_map(|k| multi_indices(m, k))
        .zip(coeffs.iter().cycle())
        .map(|(a, &c)| (a, BigRational::new(c.into(), 3.into())));
    TruncatedSeries::from_terms(m, degree, terms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weyl_flip_is_an_involution((_, w) in m_weight()) {
        prop_assert_eq!(weyl_flip(&weyl_flip(&w)), w);
    }

    #[test]
    fn casimir_is_flip_invariant((dim, w) in m_weight()) {
        prop_assert_eq!(casimir_sigma(&w, &dim), casimir_sigma(&weyl_flip(&w), &dim));
    }

    #[test]
    fn so3_branching_counts_dimension(k in 0i64..40) {
        let d3 = so(3);
        let nu = KWeight::from_ints(&d3, &[k]).unwrap();
        let total: u64 = (-45..=45)
            .map(|s| MWeight::from_ints(&d3, &[s]).unwrap())
            .map(|s| branching_multiplicity(&nu, &s).unwrap() as u64 * dim_weyl_m(&s, &d3))
            .sum();
        prop_assert_eq!(total, 2 * k as u64 + 1);
    }

    #[test]
    fn plancherel_is_w_invariant_with_degree_2n((dim, w) in m_weight()) {
        let p = PlancherelPolynomial::build(&w, &dim, 1.0).unwrap();
        let q = PlancherelPolynomial::build(&weyl_flip(&w), &dim, 1.0).unwrap();
        prop_assert_eq!(p.exact_coeffs(), q.exact_coeffs());
        prop_assert_eq!(p.degree(), 2 * dim.n());
        prop_assert!(!p.exact_coeffs().last().unwrap().is_zero());
    }

    #[test]
    fn identity_expansion_truncation_is_stable((dim, w) in m_weight(), order in 0usize..6) {
        let sig = vec![(w, 1u64)];
        let short = identity_expansion_reduced(&sig, &dim, order).unwrap();
        let long = identity_expansion_reduced(&sig, &dim, order + 1).unwrap();
        prop_assert_eq!(&long[..short.len()], &short[..]);
    }

    #[test]
    fn distance_matches_reference_and_log_estimate(x in prop::collection::vec(-1e3f64..1e3, 1..5), scale in -8i32..3) {
        let x: Vec<f64> = x.iter().map(|v| v * 10f64.powi(scale)).collect();
        let s = x.iter().fold(0.0f64, |a, &v| a.hypot(v));
        let r = hyp_distance(&x);
        let reference = 2.0 * (s / 2.0).asinh();
        prop_assert!((r - reference).abs() <= 1e-14 * reference.max(f64::MIN_POSITIVE));
        prop_assert!(r >= (0.5 * s * s).ln_1p() * (1.0 - 1e-15));
    }

    #[test]
    fn cartan_rotation_is_special_orthogonal(x in prop::collection::vec(-5.0f64..5.0, 2..6)) {
        let k = cartan_k(&n_matrix(&x)).unwrap();
        let dev = (k.transpose() * &k - nalgebra::DMatrix::identity(k.nrows(), k.ncols())).norm();
        prop_assert!(dev <= 1e-12, "{}", dev);
        prop_assert!((k.determinant() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn series_product_is_associative(
        m in 1usize..4,
        a in prop::collection::vec(-9i64..9, 1..12),
        b in prop::collection::vec(-9i64..9, 1..12),
        c in prop::collection::vec(-9i64..9, 1..12),
    ) {
        let (f1, f2, f3) = (random_series(m, 5, &a), random_series(m, 5, &b), random_series(m, 5, &c));
        let left = f1.mul(&f2).unwrap().mul(&f3).unwrap();
        let right = f1.mul(&f2.mul(&f3).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn stationary_phase_is_stable_in_order(m in 1usize..3, g in prop::collection::vec(-9i64..9, 1..10)) {
        // radial phase r(x)² and an arbitrary (not necessarily even) amplitude
        let f = TruncatedSeries::compose_radial(&r_squared_series::<BigRational>(6), m, 12).unwrap();
        let g = random_series(m, 12, &g);
        let short = expand_log_integral_reduced(&f, &g, 2).unwrap();
        let long = expand_log_integral_reduced(&f, &g, 4).unwrap();
        prop_assert_eq!(&long.entries[..3], &short.entries[..]);
    }

    #[test]
    fn zeta_values_are_linear(a in 0.2f64..5.0, b in 0.2f64..5.0, wa in 0.1f64..3.0, wb in 0.1f64..3.0) {
        let exp_series = |rate: f64, w: f64| {
            SmallTimeExpansion::from_terms((0..6).map(|k| {
                ExpansionTerm::power(Q::from_integer(k), w * (-rate).powi(k as i32) / (1..=k).product::<i64>() as f64)
            }))
        };
        let cfg = ZetaConfig::default();
        let za = zeta_values(&|t: f64| wa * (-a * t).exp(), &exp_series(a, wa), 0.0, &cfg).unwrap();
        let zb = zeta_values(&|t: f64| wb * (-b * t).exp(), &exp_series(b, wb), 0.0, &cfg).unwrap();
        let sum = exp_series(a, wa).add(&exp_series(b, wb));
        let zs = zeta_values(&|t: f64| wa * (-a * t).exp() + wb * (-b * t).exp(), &sum, 0.0, &cfg).unwrap();
        prop_assert!((zs.zeta0 - za.zeta0 - zb.zeta0).abs() <= 1e-9);
        prop_assert!((zs.zeta_prime0 - za.zeta_prime0 - zb.zeta_prime0).abs() <= 1e-9);
    }
}

#[test]
fn trivial_tau_has_zero_casimir() {
    for d in [3, 5, 7, 9] {
        let dim = so(d);
        assert_eq!(casimir_tau(&GWeight::trivial(&dim), &dim), Q::from_integer(0));
    }
}

#[test]
fn even_data_gives_vanishing_odd_levels() {
    // f = r², g = (r/sinh r)·(1 + u) are both even, so odd k must vanish
    for m in 1..=3 {
        let f = TruncatedSeries::compose_radial(&r_squared_series::<BigRational>(6), m, 12).unwrap();
        let u = TruncatedSeries::univariate(&[big(1), big(1)], 6);
        let g = TruncatedSeries::compose_radial(&u, m, 12).unwrap();
        let e = expand_log_integral_reduced(&f, &g, 4).unwrap();
        for entry in e.entries.iter().filter(|e| e.k % 2 == 1) {
            assert!(entry.a.is_zero() && entry.b.is_zero(), "m={m} k={}", entry.k);
        }
    }
}

#[test]
fn homotopy_entries_are_polynomial_in_s() {
    // f_s = ‖x‖² + s·R with R = r² − ‖x‖²; level k must have degree ≤ k/2 in s,
    // so its (k/2 + 1)-th finite difference over s = 0, 1, 2, ... vanishes.
    let m = 2;
    let order = 6;
    let r2 = TruncatedSeries::compose_radial(&r_squared_series::<BigRational>(9), m, 18).unwrap();
    let quad: TruncatedSeries<BigRational> = r2.homogeneous(2);
    let remainder = r2.sub(&quad).unwrap();
    let g = TruncatedSeries::compose_radial(&TruncatedSeries::univariate(&[big(2), big(-1), big(3)], 9), m, 18).unwrap();
    let samples: Vec<_> = (0..=order as i64 / 2 + 1)
        .map(|s| {
            let f = quad.add(&remainder.scale(&big(s))).unwrap();
            expand_log_integral_reduced(&f, &g, order).unwrap()
        })
        .collect();
    for k in 0..=order as usize {
        let steps = k / 2 + 1;
        let mut a: Vec<BigRational> = samples.iter().map(|e| e.entries[k].a.clone()).collect();
        let mut b: Vec<_> = samples.iter().map(|e| e.entries[k].b.clone()).collect();
        for _ in 0..steps {
            a = a.windows(2).map(|w| &w[1] - &w[0]).collect();
            b = b.windows(2).map(|w| w[1].clone() + w[0].scale(&big(-1))).collect();
        }
        assert!(a.iter().all(Zero::is_zero), "level {k}: a not of degree ≤ {}", k / 2);
        assert!(b.iter().all(|v| v.is_zero()), "level {k}: b not of degree ≤ {}", k / 2);
    }
}

#[test]
fn identity_remainder_has_the_first_omitted_order() {
    for d in [3usize, 5] {
        let dim = so(d);
        let sig = vec![(MWeight::trivial(&dim), 1u64)];
        let e = identity_expansion(1.0, &sig, &dim, 1.0, 6).unwrap();
        let rem: Vec<f64> = [0.2, 0.1, 0.05]
            .iter()
            .map(|&t| identity_term(t, 1.0, &sig, &dim, 1.0).unwrap() - e.eval(t))
            .collect();
        let expected = 2f64.powf(7.0 - d as f64 / 2.0);
        for w in rem.windows(2) {
            let q = w[0] / w[1];
            assert!((q / expected - 1.0).abs() < 0.1, "d={d}: ratio {q}, expected {expected}");
        }
    }
}

#[test]
fn multi_index_degree_bound_holds_after_products() {
    let f = random_series(2, 4, &[1, -2, 3]);
    let g = f.mul(&f).unwrap();
    assert!(g.terms().all(|(a, _): (&MultiIndex, _)| a.total() <= 4));
}
