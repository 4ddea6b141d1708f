//! Small-time expansions `Σ c t^β (log t)^{0|1}` of heat traces.

use std::cmp::Ordering;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rep_theory::{parse_rational, Q};

/// One term `c · t^β` or `c · t^β · log t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionTerm {
    #[serde(serialize_with = "ser_q", deserialize_with = "de_q")]
    pub beta: Q,
    pub c: f64,
    #[serde(rename = "log", default)]
    pub has_log: bool,
}

fn ser_q<S: Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    if q.is_integer() {
        s.serialize_i64(*q.numer())
    } else {
        s.serialize_str(&format!("{}/{}", q.numer(), q.denom()))
    }
}

fn de_q<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Str(String),
    }
    match Repr::deserialize(d)? {
        Repr::Int(v) => Ok(Q::from_integer(v)),
        Repr::Str(s) => parse_rational(&s).map_err(serde::de::Error::custom),
    }
}

impl ExpansionTerm {
    pub fn power(beta: Q, c: f64) -> Self {
        Self { beta, c, has_log: false }
    }

    pub fn log(beta: Q, c: f64) -> Self {
        Self { beta, c, has_log: true }
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        (self.beta, self.has_log).cmp(&(other.beta, other.has_log))
    }

    pub fn beta_f64(&self) -> f64 {
        *self.beta.numer() as f64 / *self.beta.denom() as f64
    }

    pub fn eval(&self, t: f64) -> f64 {
        let v = self.c * t.powf(self.beta_f64());
        if self.has_log {
            v * t.ln()
        } else {
            v
        }
    }
}

/// Terms sorted by `(β, has_log)` with no repeated key.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SmallTimeExpansion {
    terms: Vec<ExpansionTerm>,
}

impl SmallTimeExpansion {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Sorts the terms, merges repeated `(β, has_log)` keys by summation and
    /// drops terms whose coefficient is exactly zero.
    pub fn from_terms(terms: impl IntoIterator<Item = ExpansionTerm>) -> Self {
        let mut v: Vec<ExpansionTerm> = terms.into_iter().collect();
        v.sort_by(|a, b| a.key_cmp(b));
        let mut out: Vec<ExpansionTerm> = Vec::with_capacity(v.len());
        for t in v {
            match out.last_mut() {
                Some(last) if last.key_cmp(&t) == Ordering::Equal => last.c += t.c,
                _ => out.push(t),
            }
        }
        out.retain(|t| t.c != 0.0);
        Self { terms: out }
    }

    pub fn terms(&self) -> &[ExpansionTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Checks ordering, finiteness, and `β ≥ -d/2`.
    pub fn validate(&self, d: usize) -> Result<()> {
        let floor = Q::new(-(d as i64), 2);
        for w in self.terms.windows(2) {
            if w[0].key_cmp(&w[1]) != Ordering::Less {
                return Err(Error::InvalidParameter("expansion terms must be strictly increasing".into()));
            }
        }
        for t in &self.terms {
            if !t.c.is_finite() {
                return Err(Error::InvalidParameter(format!("non-finite coefficient at t^{}", t.beta)));
            }
            if t.beta < floor {
                return Err(Error::InvalidParameter(format!("exponent {} below -d/2 = {floor}", t.beta)));
            }
        }
        Ok(())
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms.iter().map(|term| term.eval(t)).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(&other.terms).copied())
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::from_terms(self.terms.iter().map(|t| ExpansionTerm { c: t.c * c, ..*t }))
    }

    /// Coefficient of `t^β` (or `t^β log t`).
    pub fn coeff(&self, beta: Q, has_log: bool) -> f64 {
        self.terms
            .iter()
            .find(|t| t.beta == beta && t.has_log == has_log)
            .map_or(0.0, |t| t.c)
    }

    /// Largest exponent present.
    pub fn max_beta(&self) -> Option<Q> {
        self.terms.iter().map(|t| t.beta).max()
    }

    /// Drops every term with `β > beta_max`.
    pub fn truncate(&self, beta_max: Q) -> Self {
        Self {
            terms: self.terms.iter().filter(|t| t.beta <= beta_max).copied().collect(),
        }
    }

    /// Re-expands `e^{-c t} · E`, keeping exponents up to `beta_max`.
    pub fn mul_exp(&self, c: f64, beta_max: Q) -> Self {
        let mut out = Vec::new();
        for term in &self.terms {
            let mut coef = term.c;
            let mut i = 0i64;
            while term.beta + i <= beta_max {
                out.push(ExpansionTerm {
                    beta: term.beta + i,
                    c: coef,
                    has_log: term.has_log,
                });
                i += 1;
                coef *= -c / i as f64;
            }
        }
        Self::from_terms(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_and_sort() {
        let e = SmallTimeExpansion::from_terms([
            ExpansionTerm::power(Q::from_integer(0), 1.0),
            ExpansionTerm::log(Q::from_integer(0), 2.0),
            ExpansionTerm::power(Q::new(-1, 2), 3.0),
            ExpansionTerm::power(Q::from_integer(0), 0.5),
        ]);
        assert_eq!(e.terms().len(), 3);
        assert_eq!(e.coeff(Q::from_integer(0), false), 1.5);
        assert_eq!(e.coeff(Q::from_integer(0), true), 2.0);
        assert_eq!(e.terms()[0].beta, Q::new(-1, 2));
        assert!(e.validate(3).is_ok());
        let bad = SmallTimeExpansion::from_terms([ExpansionTerm::power(Q::from_integer(-2), 1.0)]);
        assert!(bad.validate(3).is_err());
    }

    #[test]
    fn exponential_shift() {
        // e^{-3t} · t^{-1/2} through t^{3/2}
        let e = SmallTimeExpansion::from_terms([ExpansionTerm::power(Q::new(-1, 2), 1.0)]);
        let s = e.mul_exp(3.0, Q::new(3, 2));
        let got: Vec<f64> = s.terms().iter().map(|t| t.c).collect();
        assert_eq!(got, vec![1.0, -3.0, 4.5]);
        let t: f64 = 1e-3;
        assert!((s.eval(t) - (-3.0 * t).exp() / t.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn json_shape() {
        let e = SmallTimeExpansion::from_terms([
            ExpansionTerm::power(Q::new(-3, 2), 1.0),
            ExpansionTerm::log(Q::from_integer(0), -0.5),
        ]);
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(s, r#"{"terms":[{"beta":"-3/2","c":1.0,"log":false},{"beta":0,"c":-0.5,"log":true}]}"#);
        let back: SmallTimeExpansion = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
    }
}
