//! Fock space: the basis `|μ⟩ = (1/𝔷(μ)) Π α_{-μ_i} v_∅`, the Heisenberg
//! operators `α_k`, and the diagonal Nakajima inner product.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exact::{parse_qrat, parse_trat, ExactError, Field, QRat, Rational, TPoly, TRat};
use crate::partitions::{Basis, Partition};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("energy mismatch: {0} vs {1}")]
    EnergyMismatch(u32, u32),
    #[error("partition {0} has size != {1}")]
    WrongSize(Partition, u32),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Coefficient field of a Fock vector: `Q(t1,t2)` or `Q(t1,t2)(q)`.
pub trait Scalar: Field + fmt::Display {
    fn from_trat(c: &TRat) -> Self;
    fn parse(s: &str) -> Result<Self, ExactError>;

    fn from_rational(c: Rational) -> Self {
        Self::from_trat(&TRat::rational(c))
    }
}

impl Scalar for TRat {
    fn from_trat(c: &TRat) -> Self {
        c.clone()
    }
    fn parse(s: &str) -> Result<Self, ExactError> {
        parse_trat(s)
    }
}

impl Scalar for QRat {
    fn from_trat(c: &TRat) -> Self {
        QRat::from_trat(c)
    }
    fn parse(s: &str) -> Result<Self, ExactError> {
        parse_qrat(s)
    }
}

/// Finite combination of basis vectors `|μ⟩`, `|μ| = n`.
#[derive(Clone, PartialEq, Debug)]
pub struct FockVector<C> {
    n: u32,
    coeffs: BTreeMap<Partition, C>,
}

impl<C: Scalar> FockVector<C> {
    pub fn zero(n: u32) -> Self {
        FockVector { n, coeffs: BTreeMap::new() }
    }

    pub fn vacuum() -> Self {
        Self::basis(Partition::empty())
    }

    pub fn basis(mu: Partition) -> Self {
        Self::term(mu, C::one())
    }

    pub fn term(mu: Partition, c: C) -> Self {
        let mut v = Self::zero(mu.size());
        v.add_term(mu, c);
        v
    }

    pub fn from_terms(n: u32, terms: impl IntoIterator<Item = (Partition, C)>) -> Result<Self, FockError> {
        let mut v = Self::zero(n);
        for (mu, c) in terms {
            if mu.size() != n {
                return Err(FockError::WrongSize(mu, n));
            }
            v.add_term(mu, c);
        }
        Ok(v)
    }

    /// Coordinates in the canonical basis order.
    pub fn from_coords(basis: &Basis, coords: &[C]) -> Self {
        let mut v = Self::zero(basis.n());
        for (mu, c) in basis.iter().zip(coords) {
            v.add_term(mu.clone(), c.clone());
        }
        v
    }

    pub fn coords(&self, basis: &Basis) -> Vec<C> {
        assert_eq!(basis.n(), self.n);
        basis.iter().map(|mu| self.coeff(mu)).collect()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn coeff(&self, mu: &Partition) -> C {
        self.coeffs.get(mu).cloned().unwrap_or_else(C::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &C)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, mu: Partition, c: C) {
        debug_assert_eq!(mu.size(), self.n);
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&mu) {
            Some(x) => {
                let v = x.clone() + c;
                if v.is_zero() {
                    self.coeffs.remove(&mu);
                } else {
                    *x = v;
                }
            }
            None => {
                self.coeffs.insert(mu, c);
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        FockVector { n: self.n, coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v.clone() * c)).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FockError> {
        if self.n != other.n {
            return Err(FockError::EnergyMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.add_term(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FockError> {
        self.add(&other.scale(&-C::one()))
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> FockVector<D> {
        let mut out = FockVector::zero(self.n);
        for (k, v) in &self.coeffs {
            out.add_term(k.clone(), f(v));
        }
        out
    }

    /// `α_k`, `k ≠ 0`. Creation (`k < 0`) sends `|μ⟩ ↦ |k|(m_{|k|}+1) |μ ∪ |k|⟩`;
    /// annihilation sends `|μ⟩ ↦ |μ ∖ k⟩` when `k` is a part and to zero otherwise.
    pub fn alpha(&self, k: i32) -> Self {
        assert!(k != 0, "alpha_0 is not part of the algebra");
        if k < 0 {
            let j = k.unsigned_abs();
            let mut out = Self::zero(self.n + j);
            for (mu, c) in &self.coeffs {
                let f = Rational::from_integer(((mu.multiplicity(j) + 1) as u64 * j as u64).into());
                out.add_term(mu.with_part(j), c.clone() * &C::from_rational(f));
            }
            out
        } else {
            let j = k as u32;
            if j > self.n {
                return Self::zero(0);
            }
            let mut out = Self::zero(self.n - j);
            for (mu, c) in &self.coeffs {
                if let Some(nu) = mu.without_part(j) {
                    out.add_term(nu, c.clone());
                }
            }
            out
        }
    }

    /// Applies `α_{k_1} α_{k_2} ⋯ α_{k_r}` (rightmost first).
    pub fn alpha_word(&self, word: &[i32]) -> Self {
        let target = self.n as i64 - word.iter().map(|&k| k as i64).sum::<i64>();
        let mut v = self.clone();
        for &k in word.iter().rev() {
            if v.is_zero() {
                break;
            }
            v = v.alpha(k);
        }
        if v.is_zero() {
            Self::zero(target.max(0) as u32)
        } else {
            v
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: serde_json::Map<String, serde_json::Value> =
            self.coeffs.iter().map(|(k, v)| (k.to_string(), v.to_string().into())).collect();
        serde_json::json!({ "n": self.n, "coeffs": coeffs })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, String> {
        let n = v.get("n").and_then(|x| x.as_u64()).ok_or("missing integer field 'n'")? as u32;
        let coeffs = v.get("coeffs").and_then(|x| x.as_object()).ok_or("missing object field 'coeffs'")?;
        let mut out = Self::zero(n);
        for (k, c) in coeffs {
            let mu: Partition = k.parse().map_err(|e| format!("{e}"))?;
            if mu.size() != n {
                return Err(format!("partition {mu} is not of size {n}"));
            }
            let c = c.as_str().ok_or_else(|| format!("coefficient of {k} must be a string"))?;
            out.add_term(mu, C::parse(c).map_err(|e| e.to_string())?);
        }
        Ok(out)
    }
}

impl<C: Scalar> Serialize for FockVector<C> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de, C: Scalar> Deserialize<'de> for FockVector<C> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        Self::from_json(&v).map_err(D::Error::custom)
    }
}

impl<C: Scalar> fmt::Display for FockVector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (mu, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})|{mu}>")?;
        }
        Ok(())
    }
}

/// `⟨μ|μ⟩ = (-1)^{|μ|-ℓ(μ)} / ((t1 t2)^{ℓ(μ)} 𝔷(μ))`.
pub fn norm(mu: &Partition) -> TRat {
    let l = mu.len();
    let sign = if (mu.size() as usize - l) % 2 == 0 { 1 } else { -1 };
    let den = TPoly::t1t2().powi(l as u32).scale(&mu.zmu_rational());
    TRat::new(TPoly::int(sign), den)
}

/// Norms of the canonical basis of energy `n`.
#[derive(Clone, Debug)]
pub struct GramData {
    pub n: u32,
    pub norms: Vec<TRat>,
}

impl GramData {
    pub fn new(basis: &Basis) -> Self {
        GramData { n: basis.n(), norms: basis.iter().map(norm).collect() }
    }
}

/// `Σ_μ a_μ b_μ ⟨μ|μ⟩`.
pub fn gram_pair<C: Scalar>(a: &FockVector<C>, b: &FockVector<C>) -> Result<C, FockError> {
    if a.n != b.n {
        return Err(FockError::EnergyMismatch(a.n, b.n));
    }
    let mut acc = C::zero();
    for (mu, x) in &a.coeffs {
        if let Some(y) = b.coeffs.get(mu) {
            acc = acc + x.clone() * y * &C::from_trat(&norm(mu));
        }
    }
    Ok(acc)
}

/// `D = -|2, 1^{n-2}⟩`, zero for `n < 2`.
pub fn divisor_class<C: Scalar>(n: u32) -> FockVector<C> {
    if n < 2 {
        return FockVector::zero(n);
    }
    FockVector::term(Partition::hook(n, 2), -C::one())
}

/// The unit `|1^n⟩`.
pub fn identity_class<C: Scalar>(n: u32) -> FockVector<C> {
    FockVector::basis(Partition::ones(n))
}

/// `(t1 t2)^{ℓ(μ)} |μ⟩`.
pub fn nakajima_at_origin<C: Scalar>(mu: &Partition) -> FockVector<C> {
    let c = TRat::from_poly(TPoly::t1t2().powi(mu.len() as u32));
    FockVector::term(mu.clone(), C::from_trat(&c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, Ring};

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    type V = FockVector<TRat>;

    #[test]
    fn alpha_examples() {
        let one = V::basis(p(&[1]));
        assert_eq!(one.alpha(-1), V::term(p(&[1, 1]), TRat::from_int(2)));
        assert_eq!(one.alpha(1), V::vacuum());
        assert_eq!(V::basis(p(&[2, 1])).alpha(2), one);
        assert!(V::basis(p(&[2, 1])).alpha(3).is_zero());
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm(&p(&[2])).to_string(), "-1/(2*t1*t2)");
        assert_eq!(norm(&p(&[1, 1])).to_string(), "1/(2*t1^2*t2^2)");
        assert_eq!(norm(&p(&[2, 1])).to_string(), "-1/(2*t1^2*t2^2)");
        assert_eq!(norm(&Partition::empty()), TRat::one());
    }

    #[test]
    fn divisor_and_origin_classes() {
        assert_eq!(divisor_class::<TRat>(3), V::term(p(&[2, 1]), TRat::from_int(-1)));
        assert_eq!(divisor_class::<TRat>(2), V::term(p(&[2]), TRat::from_int(-1)));
        assert!(divisor_class::<TRat>(1).is_zero());
        assert_eq!(nakajima_at_origin::<TRat>(&p(&[1])), V::term(p(&[1]), TRat::t1() * TRat::t2()));
    }

    #[test]
    fn json_roundtrip() {
        let v = V::term(p(&[2, 1]), TRat::from_int(-1));
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"coeffs":{"[2,1]":"-1"},"n":3}"#);
        let back: V = serde_json::from_str(r#"{"n": 3, "coeffs": {"[2,1]": "-1"}}"#).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<V>(r#"{"n": 2, "coeffs": {"[2,1]": "-1"}}"#).is_err());
    }

    #[test]
    fn gram_energy_mismatch() {
        assert!(gram_pair(&V::basis(p(&[1])), &V::basis(p(&[2]))).is_err());
        let x = V::term(p(&[2]), TRat::rational(rat(3, 1)));
        assert_eq!(gram_pair(&x, &V::basis(p(&[2]))).unwrap().to_string(), "-3/(2*t1*t2)");
    }
}
