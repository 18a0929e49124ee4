//! Dense univariate polynomials over a generic ring.
//!
//! Nesting `UPoly<UPoly<Rational>>` gives the recursive representation used
//! for multivariate gcds: the gcd of the outer polynomials recurses into the
//! coefficient ring.

use super::ring::{Field, GcdDomain, Rational, Ring};

/// Polynomial `c[0] + c[1] x + ... + c[d] x^d`, with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UPoly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> UPoly<R> {
    pub fn from_coeffs(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: R) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(R::one())
    }

    /// `c * x^k`
    pub fn monomial(c: R, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![R::zero(); k + 1];
        coeffs[k] = c;
        UPoly { coeffs }
    }

    pub fn x() -> Self {
        Self::monomial(R::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn lc(&self) -> R {
        self.coeffs.last().cloned().unwrap_or_else(R::zero)
    }

    /// Number of leading factors of `x`.
    pub fn trailing_zeros(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn shift_down(&self, k: usize) -> Self {
        UPoly { coeffs: self.coeffs[k.min(self.coeffs.len())..].to_vec() }
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![R::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UPoly { coeffs }
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c).collect())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> UPoly<S> {
        UPoly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &R) -> R {
        let mut acc = R::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Substitute a polynomial for the variable.
    pub fn compose(&self, p: &UPoly<R>) -> UPoly<R> {
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * p) + &UPoly::constant(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * &R::from_int(k as i64))
                .collect(),
        )
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.degree().expect("pseudo-division by zero polynomial");
        let da = match self.degree() {
            Some(d) if d >= db => d,
            _ => return self.clone(),
        };
        let lb = b.lc();
        let mut r = self.clone();
        let mut steps = 0u32;
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.lc();
            r = &r.scale(&lb) - &b.scale(&lr).shift_up(dr - db);
            steps += 1;
        }
        let total = (da - db + 1) as u32;
        if total > steps {
            r = r.scale(&lb.pow(total - steps));
        }
        r
    }

    fn add_ref(a: &Self, b: &Self) -> Self {
        let n = a.coeffs.len().max(b.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(match (a.coeffs.get(k), b.coeffs.get(k)) {
                (Some(x), Some(y)) => x.clone() + y,
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::from_coeffs(out)
    }

    fn sub_ref(a: &Self, b: &Self) -> Self {
        let n = a.coeffs.len().max(b.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(match (a.coeffs.get(k), b.coeffs.get(k)) {
                (Some(x), Some(y)) => x.clone() - y,
                (Some(x), None) => x.clone(),
                (None, Some(y)) => -y.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::from_coeffs(out)
    }

    fn mul_ref(a: &Self, b: &Self) -> Self {
        if a.is_zero() || b.is_zero() {
            return Self::zero();
        }
        let mut out = vec![R::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let prod = x.clone() * y;
                let slot = std::mem::replace(&mut out[i + j], R::zero());
                out[i + j] = slot + &prod;
            }
        }
        Self::from_coeffs(out)
    }

    fn neg_ref(a: &Self) -> Self {
        UPoly { coeffs: a.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

crate::forward_binop!([R: Ring] UPoly<R>, Add, add, UPoly::add_ref);
crate::forward_binop!([R: Ring] UPoly<R>, Sub, sub, UPoly::sub_ref);
crate::forward_binop!([R: Ring] UPoly<R>, Mul, mul, UPoly::mul_ref);
crate::forward_neg!([R: Ring] UPoly<R>, UPoly::neg_ref);

impl<R: Ring> Ring for UPoly<R> {
    fn zero() -> Self {
        UPoly::zero()
    }
    fn one() -> Self {
        UPoly::one()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn from_int(v: i64) -> Self {
        UPoly::constant(R::from_int(v))
    }
}

impl<F: Field> UPoly<F> {
    /// Euclidean division over a field.
    pub fn div_rem(&self, b: &Self) -> (Self, Self) {
        let db = b.degree().expect("division by zero polynomial");
        let inv = b.lc().inv().expect("nonzero leading coefficient");
        let mut q = vec![F::zero(); self.coeffs.len().saturating_sub(db)];
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let c = r.lc() * &inv;
            r = &r - &b.scale(&c).shift_up(dr - db);
            q[dr - db] = c;
        }
        (Self::from_coeffs(q), r)
    }

    pub fn make_monic(&self) -> Self {
        match self.lc().inv() {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd_monic(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.make_monic()
    }
}

impl<R: GcdDomain> UPoly<R> {
    /// Gcd of the coefficients, carrying the sign of the leading coefficient.
    pub fn content(&self) -> R {
        let mut g = R::zero();
        for c in self.coeffs.iter().rev() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if self.lc().lead_sign() < 0 {
            -g
        } else {
            g
        }
    }

    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let c = self.content();
        self.div_scalar_exact(&c).expect("content divides every coefficient")
    }

    pub fn div_scalar_exact(&self, c: &R) -> Option<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a.div_exact(c)?);
        }
        Some(Self::from_coeffs(out))
    }

    /// Exact division; `None` if `b` does not divide `self`.
    pub fn div_exact_poly(&self, b: &Self) -> Option<Self> {
        let db = b.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let lb = b.lc();
        let mut r = self.clone();
        let mut q = vec![R::zero(); self.coeffs.len().saturating_sub(db)];
        while let Some(dr) = r.degree() {
            if dr < db {
                return None;
            }
            let c = r.lc().div_exact(&lb)?;
            r = &r - &b.scale(&c).shift_up(dr - db);
            q[dr - db] = c;
        }
        Some(Self::from_coeffs(q))
    }

    /// Subresultant polynomial remainder sequence on primitive inputs of
    /// positive degree; returns the primitive gcd.
    fn subresultant_gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = if a.deg() >= b.deg() { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        let mut g = R::one();
        let mut h = R::one();
        loop {
            let delta = (a.deg() - b.deg()) as u32;
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                return b.primitive_part();
            }
            if r.deg() == 0 {
                return Self::one();
            }
            let divisor = g.clone() * &h.pow(delta);
            a = b;
            b = r.div_scalar_exact(&divisor).expect("subresultant division is exact");
            g = a.lc();
            h = match delta {
                0 => h,
                1 => g.clone(),
                _ => g.pow(delta).div_exact(&h.pow(delta - 1)).expect("subresultant h update is exact"),
            };
        }
    }
}

impl<R: GcdDomain> GcdDomain for UPoly<R> {
    fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return if other.lead_sign() < 0 { -other.clone() } else { other.clone() };
        }
        if other.is_zero() {
            return if self.lead_sign() < 0 { -self.clone() } else { self.clone() };
        }
        let k = self.trailing_zeros().min(other.trailing_zeros());
        let a = self.shift_down(self.trailing_zeros());
        let b = other.shift_down(other.trailing_zeros());
        let ca = a.content();
        let cb = b.content();
        let cg = ca.gcd(&cb);
        if a.deg() == 0 || b.deg() == 0 {
            return UPoly::monomial(cg, k);
        }
        let pa = a.div_scalar_exact(&ca).expect("content divides");
        let pb = b.div_scalar_exact(&cb).expect("content divides");
        let g = Self::subresultant_gcd(&pa, &pb);
        g.scale(&cg).shift_up(k)
    }

    fn div_exact(&self, other: &Self) -> Option<Self> {
        self.div_exact_poly(other)
    }

    fn lead_sign(&self) -> i32 {
        self.coeffs.last().map_or(0, |c| c.lead_sign())
    }
}

impl UPoly<Rational> {
    /// Cyclotomic polynomial Φ_k(x).
    pub fn cyclotomic(k: usize) -> Self {
        assert!(k >= 1);
        let mut p = UPoly::monomial(Rational::one(), k) - UPoly::one();
        for d in 1..k {
            if k % d == 0 {
                p = p.div_rem(&Self::cyclotomic(d)).0;
            }
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ring::rat;

    fn qp(c: &[i64]) -> UPoly<Rational> {
        UPoly::from_coeffs(c.iter().map(|&v| rat(v, 1)).collect())
    }

    #[test]
    fn trims_trailing_zeros() {
        assert_eq!(qp(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(qp(&[0, 0]).is_zero());
    }

    #[test]
    fn euclid_and_subresultant_agree() {
        // (x+1)^2 (x-2) and (x+1)(x+3)
        let a = qp(&[1, 1]).powi(2) * qp(&[-2, 1]);
        let b = qp(&[1, 1]) * qp(&[3, 1]);
        assert_eq!(a.gcd_monic(&b), qp(&[1, 1]));
        assert_eq!(GcdDomain::gcd(&a, &b), qp(&[1, 1]));
    }

    #[test]
    fn exact_division_detects_remainders() {
        let a = qp(&[-1, 0, 1]);
        assert_eq!(a.div_exact_poly(&qp(&[1, 1])), Some(qp(&[-1, 1])));
        assert_eq!(a.div_exact_poly(&qp(&[2, 1])), None);
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(UPoly::cyclotomic(1), qp(&[-1, 1]));
        assert_eq!(UPoly::cyclotomic(2), qp(&[1, 1]));
        assert_eq!(UPoly::cyclotomic(3), qp(&[1, 1, 1]));
        assert_eq!(UPoly::cyclotomic(4), qp(&[1, 0, 1]));
        assert_eq!(UPoly::cyclotomic(6), qp(&[1, -1, 1]));
    }

    #[test]
    fn bivariate_gcd_recurses() {
        // polynomials in y with coefficients in Q[x]
        let x = || qp(&[0, 1]);
        let one = || qp(&[1]);
        // (y + x)(y - 1) and (y + x)(y + 2x)
        let ypx = UPoly::from_coeffs(vec![x(), one()]);
        let a = &ypx * &UPoly::from_coeffs(vec![-one(), one()]);
        let b = &ypx * &UPoly::from_coeffs(vec![x().scale(&rat(2, 1)), one()]);
        assert_eq!(GcdDomain::gcd(&a, &b), ypx);
    }
}
