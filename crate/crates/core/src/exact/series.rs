//! Truncated expansions: Taylor series in `q`, Laurent series in
//! `s = t1 + t2`, and Laurent series in `v = iu` after `q = -e^v`.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use super::frac::{QPoly, QRat, TRat};
use super::ring::{Rational, Ring};
use super::tpoly::TPoly;
use super::upoly::UPoly;
use super::ExactError;

/// Power series `c_0 + c_1 q + ... + c_N q^N + O(q^{N+1})`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSeries {
    coeffs: Vec<TRat>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        QSeries { coeffs: vec![TRat::zero(); order + 1] }
    }

    pub fn constant(c: TRat, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn from_coeffs(coeffs: Vec<TRat>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least the constant term");
        QSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[TRat] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> &TRat {
        &self.coeffs[d]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order());
        QSeries { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn scale(&self, c: &TRat) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|x| x.clone() * c).collect() }
    }

    /// `q d/dq`: multiplies the `q^d` coefficient by `d`.
    pub fn q_derivative(&self) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().enumerate().map(|(d, c)| c.clone() * &TRat::from_int(d as i64)).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&TRat) -> TRat) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Coefficients rendered as canonical strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    fn binop(a: &Self, b: &Self, f: impl Fn(&TRat, &TRat) -> TRat) -> Self {
        let n = a.coeffs.len().min(b.coeffs.len());
        QSeries { coeffs: (0..n).map(|k| f(&a.coeffs[k], &b.coeffs[k])).collect() }
    }

    fn add_ref(a: &Self, b: &Self) -> Self {
        Self::binop(a, b, |x, y| x.clone() + y)
    }

    fn sub_ref(a: &Self, b: &Self) -> Self {
        Self::binop(a, b, |x, y| x.clone() - y)
    }

    /// Cauchy product truncated to the smaller order.
    fn mul_ref(a: &Self, b: &Self) -> Self {
        let n = a.coeffs.len().min(b.coeffs.len());
        let mut out = vec![TRat::zero(); n];
        for i in 0..n {
            if a.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                if b.coeffs[j].is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].clone() + a.coeffs[i].clone() * &b.coeffs[j];
            }
        }
        QSeries { coeffs: out }
    }

    fn neg_ref(a: &Self) -> Self {
        QSeries { coeffs: a.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

crate::forward_binop!([] QSeries, Add, add, QSeries::add_ref);
crate::forward_binop!([] QSeries, Sub, sub, QSeries::sub_ref);
crate::forward_binop!([] QSeries, Mul, mul, QSeries::mul_ref);
crate::forward_neg!([] QSeries, QSeries::neg_ref);

impl Serialize for QSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string(&self.to_strings()).map_err(|_| fmt::Error)?)
    }
}

/// Taylor expansion of `f` at `q = 0` through `q^order`.
pub fn series_expand(f: &QRat, order: usize) -> Result<QSeries, ExactError> {
    let d0 = f.den().coeff(0);
    if d0.is_zero() {
        return Err(ExactError::PoleAtZero);
    }
    let inv_d0 = TRat::one() / TRat::from_poly(d0);
    let num = f.num();
    let den = f.den();
    let mut out: Vec<TRat> = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut acc = TRat::from_poly(num.coeff(k));
        for j in 1..=k.min(den.deg()) {
            let dj = den.coeff(j);
            if !dj.is_zero() && !out[k - j].is_zero() {
                acc = acc - out[k - j].clone() * &TRat::from_poly(dj);
            }
        }
        out.push(acc * &inv_d0);
    }
    Ok(QSeries { coeffs: out })
}

/// Laurent expansion in `s = t1 + t2` with coefficients in Q(t1).
///
/// The coefficient of `s^e` is stored at `coeffs[e + laurent_offset]`,
/// for `e` from `-laurent_offset` through `order`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SExpansion {
    coeffs: Vec<TRat>,
    order: usize,
    laurent_offset: usize,
}

impl SExpansion {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn laurent_offset(&self) -> usize {
        self.laurent_offset
    }

    /// Coefficient of `s^e` (zero outside the stored window below the order).
    pub fn coeff(&self, e: i64) -> TRat {
        let idx = e + self.laurent_offset as i64;
        if idx < 0 {
            return TRat::zero();
        }
        assert!(e <= self.order as i64, "coefficient beyond truncation order");
        self.coeffs[idx as usize].clone()
    }

    /// Re-substitute `s = t1 + t2`, giving the truncation as an element of Q(t1, t2).
    pub fn resubstitute(&self) -> TRat {
        let s = TRat::from_poly(TPoly::s());
        let mut acc = TRat::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = i as i64 - self.laurent_offset as i64;
            let p = if e >= 0 { s.pow(e as u32) } else { TRat::one() / s.pow((-e) as u32) };
            acc = acc + c.clone() * &p;
        }
        acc
    }
}

/// Rewrite `p(t1, t2)` as a polynomial in `s` with coefficients in Q[t1]
/// by `t2 = s - t1`.
fn to_s_poly(p: &TPoly) -> QPoly {
    let s_minus_t1 = UPoly::from_coeffs(vec![-TPoly::t1(), TPoly::one()]);
    let mut acc: QPoly = UPoly::zero();
    for ((a, b), c) in p.terms() {
        let term = s_minus_t1.powi(b as u32).scale(&TPoly::monomial(c, a, 0));
        acc = acc + term;
    }
    acc
}

/// Laurent expansion of `f` in `s = t1 + t2` through `s^order`.
pub fn s_expand(f: &TRat, order: usize) -> Result<SExpansion, ExactError> {
    let num = to_s_poly(f.num());
    let den = to_s_poly(f.den());
    if den.is_zero() {
        return Err(ExactError::ZeroDenominator("t2 = s - t1".into()));
    }
    let m = den.trailing_zeros();
    let den = den.shift_down(m);
    let offset = if num.is_zero() { 0 } else { m.saturating_sub(num.trailing_zeros()) };
    // f = s^{-m} num / den; coefficient of s^e is coefficient of s^{e+m} in num/den.
    let len = order + offset + 1;
    let start = m as i64 - offset as i64; // index into num/den series for e = -offset
    let total = start as usize + len;
    let inv_d0 = TRat::one() / TRat::from_poly(den.coeff(0));
    let mut ser: Vec<TRat> = Vec::with_capacity(total);
    for k in 0..total {
        let mut acc = TRat::from_poly(num.coeff(k));
        for j in 1..=k.min(den.deg()) {
            let dj = den.coeff(j);
            if !dj.is_zero() && !ser[k - j].is_zero() {
                acc = acc - ser[k - j].clone() * &TRat::from_poly(dj);
            }
        }
        ser.push(acc * &inv_d0);
    }
    Ok(SExpansion { coeffs: ser[start as usize..].to_vec(), order, laurent_offset: offset })
}

/// Laurent series in `v = iu`: coefficient of `v^(min_exp + i)` at `coeffs[i]`,
/// known through `v^order`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentU {
    min_exp: i64,
    coeffs: Vec<TRat>,
    order: i64,
}

impl LaurentU {
    pub fn new(min_exp: i64, coeffs: Vec<TRat>, order: i64) -> Self {
        let mut l = LaurentU { min_exp, coeffs, order };
        l.trim();
        l
    }

    fn trim(&mut self) {
        while self.coeffs.first().is_some_and(|c| c.is_zero()) {
            self.coeffs.remove(0);
            self.min_exp += 1;
        }
        let keep = (self.order - self.min_exp + 1).max(0) as usize;
        self.coeffs.truncate(keep);
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.min_exp = 0;
        }
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn coeff(&self, e: i64) -> TRat {
        let idx = e - self.min_exp;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            TRat::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    /// Nonzero `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> Vec<(i64, TRat)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.min_exp + i as i64, c.clone()))
            .collect()
    }

    pub fn scale(&self, c: &TRat) -> Self {
        LaurentU::new(self.min_exp, self.coeffs.iter().map(|x| x.clone() * c).collect(), self.order)
    }

    /// Multiply by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentU::new(self.min_exp + k, self.coeffs.clone(), self.order + k)
    }

    /// Product; the result is known through the smaller guaranteed order.
    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return LaurentU::new(0, vec![], (self.order + other.min_exp).min(other.order + self.min_exp));
        }
        let order = (self.order + other.min_exp).min(other.order + self.min_exp);
        let min_exp = self.min_exp + other.min_exp;
        let len = (order - min_exp + 1).max(0) as usize;
        let mut out = vec![TRat::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j < len {
                    out[i + j] = out[i + j].clone() + a.clone() * b;
                }
            }
        }
        LaurentU::new(min_exp, out, order)
    }

    /// Rewrites the series in `u` (`v = iu`): the coefficient of `u^k` is
    /// `c_k i^k`. Fails if an odd power carries a nonzero coefficient, since
    /// that coefficient would be imaginary.
    pub fn u_coefficients(&self) -> Result<Vec<(i64, TRat)>, ExactError> {
        let mut out = Vec::new();
        for (k, c) in self.terms() {
            if k.rem_euclid(2) == 1 {
                return Err(ExactError::ImaginaryCoefficient(k));
            }
            let sign = if (k / 2).rem_euclid(2) == 0 { 1 } else { -1 };
            out.push((k, c * TRat::from_int(sign)));
        }
        Ok(out)
    }
}

impl fmt::Display for LaurentU {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms().into_iter().map(|(k, c)| format!("({c})*v^{k}")).collect();
        if parts.is_empty() {
            write!(f, "O(v^{})", self.order + 1)
        } else {
            write!(f, "{} + O(v^{})", parts.join(" + "), self.order + 1)
        }
    }
}

fn factorial(m: usize) -> BigInt {
    (1..=m).fold(BigInt::from(1), |acc, k| acc * BigInt::from(k))
}

/// Coefficients of `p(-e^v)` for `v^0 .. v^(len-1)`.
fn exp_substitute(p: &QPoly, len: usize) -> Vec<TRat> {
    (0..len)
        .map(|m| {
            let mut acc = TPoly::zero();
            for (j, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let sign: i64 = if j % 2 == 0 { 1 } else { -1 };
                let jm = BigInt::from(j).pow(m as u32) * BigInt::from(sign);
                acc = acc + c.scale(&Rational::from_integer(jm));
            }
            TRat::from_poly(acc) / TRat::rational(Rational::from_integer(factorial(m)))
        })
        .collect()
}

/// Substitute `q = -e^v` and expand as a Laurent series in `v` through `v^order`.
pub fn laurent_u_substitute(f: &QRat, order: i64) -> Result<LaurentU, ExactError> {
    if f.num().is_zero() {
        return Ok(LaurentU::new(0, vec![], order));
    }
    let dn = f.num().deg();
    let dd = f.den().deg();
    // the vanishing orders at v = 0 are root multiplicities at q = -1, hence bounded by degree
    let probe = dn.max(dd) + 1;
    let nser = exp_substitute(f.num(), probe);
    let dser = exp_substitute(f.den(), probe);
    let a = nser.iter().position(|c| !c.is_zero()).ok_or(ExactError::ZeroDenominator("numerator series".into()))?;
    let r = dser
        .iter()
        .position(|c| !c.is_zero())
        .ok_or_else(|| ExactError::ZeroDenominator("q = -e^v at v = 0".into()))?;
    let lead = a as i64 - r as i64;
    if order < lead {
        return Ok(LaurentU::new(lead, vec![], order));
    }
    let len = (order - lead + 1) as usize;
    let nser = exp_substitute(f.num(), a + len);
    let dser = exp_substitute(f.den(), r + len);
    let inv = TRat::one() / &dser[r];
    let mut out: Vec<TRat> = Vec::with_capacity(len);
    for k in 0..len {
        let mut acc = nser[a + k].clone();
        for j in 1..=k {
            if !dser[r + j].is_zero() && !out[k - j].is_zero() {
                acc = acc - out[k - j].clone() * &dser[r + j];
            }
        }
        out.push(acc * &inv);
    }
    Ok(LaurentU::new(lead, out, order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ring::rat;

    fn qc(c: &[i64]) -> QRat {
        QRat::from_poly(UPoly::from_coeffs(c.iter().map(|&v| TPoly::int(v)).collect()))
    }

    fn consts(v: &[(i64, i64)]) -> Vec<TRat> {
        v.iter().map(|&(p, q)| TRat::rational(rat(p, q))).collect()
    }

    #[test]
    fn geometric_series() {
        let f = QRat::one() / qc(&[1, -1]);
        assert_eq!(series_expand(&f, 3).unwrap().coeffs(), &consts(&[(1, 1), (1, 1), (1, 1), (1, 1)])[..]);
    }

    #[test]
    fn long_division_example() {
        // -(1/2)(1-q)/(1+q)
        let f = QRat::from_rational(rat(-1, 2)) * qc(&[1, -1]) / qc(&[1, 1]);
        assert_eq!(
            series_expand(&f, 3).unwrap().coeffs(),
            &consts(&[(-1, 2), (1, 1), (-1, 1), (1, 1)])[..]
        );
    }

    #[test]
    fn jj_series_for_two() {
        // q/(1+q) + 2q^2/(1-q^2)
        let f = qc(&[0, 1]) / qc(&[1, 1]) + qc(&[0, 0, 2]) / qc(&[1, 0, -1]);
        let ones: Vec<(i64, i64)> = vec![(0, 1), (1, 1), (1, 1), (1, 1), (1, 1), (1, 1)];
        assert_eq!(series_expand(&f, 5).unwrap().coeffs(), &consts(&ones)[..]);
    }

    #[test]
    fn pole_at_zero_is_reported() {
        let f = QRat::one() / QRat::q();
        assert!(matches!(series_expand(&f, 2), Err(ExactError::PoleAtZero)));
    }

    #[test]
    fn s_expansion_examples() {
        let t1 = TRat::t1();
        let s = s_expand(&(TRat::t1() + TRat::t2()), 2).unwrap();
        assert_eq!(s.coeff(0), TRat::zero());
        assert_eq!(s.coeff(1), TRat::one());
        let p = s_expand(&(TRat::t1() * TRat::t2()), 2).unwrap();
        assert_eq!(p.coeff(0), -(t1.clone() * &t1));
        assert_eq!(p.coeff(1), t1.clone());
        let r = s_expand(&(TRat::one() / (TRat::t1() * TRat::t2())), 1).unwrap();
        assert_eq!(r.laurent_offset(), 0);
        assert_eq!(r.coeff(0), -(TRat::one() / (t1.clone() * &t1)));
        assert_eq!(r.coeff(1), -(TRat::one() / t1.pow(3)));
    }

    #[test]
    fn s_expansion_pole() {
        let f = TRat::t1() / (TRat::t1() + TRat::t2());
        let e = s_expand(&f, 1).unwrap();
        assert_eq!(e.laurent_offset(), 1);
        assert_eq!(e.coeff(-1), TRat::t1());
        assert_eq!(e.coeff(0), TRat::zero());
    }

    #[test]
    fn laurent_constant_and_tanh() {
        let c = QRat::from_rational(rat(7, 3));
        let l = laurent_u_substitute(&c, 4).unwrap();
        assert_eq!(l.terms(), vec![(0, TRat::rational(rat(7, 3)))]);

        // (1+q)/(1-q) = -tanh(v/2)
        let f = qc(&[1, 1]) / qc(&[1, -1]);
        let l = laurent_u_substitute(&f, 5).unwrap();
        assert_eq!(
            l.terms(),
            vec![
                (1, TRat::rational(rat(-1, 2))),
                (3, TRat::rational(rat(1, 24))),
                (5, TRat::rational(rat(-1, 240)))
            ]
        );
    }

    #[test]
    fn laurent_simple_pole() {
        // 1/(1+q) = 1/(1-e^v) = -1/v + 1/2 - v/12 + ...
        let f = QRat::one() / qc(&[1, 1]);
        let l = laurent_u_substitute(&f, 1).unwrap();
        assert_eq!(l.min_exp(), -1);
        assert_eq!(l.coeff(-1), TRat::rational(rat(-1, 1)));
        assert_eq!(l.coeff(0), TRat::rational(rat(1, 2)));
        assert_eq!(l.coeff(1), TRat::rational(rat(-1, 12)));
    }
}
