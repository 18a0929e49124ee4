//! Reduced fractions over a gcd domain: the rational-function fields
//! Q(t1, t2) ([`TRat`]) and Q(t1, t2)(q) ([`QRat`]).

use std::fmt;

use super::ring::{Field, GcdDomain, Rational, Ring};
use super::tpoly::TPoly;
use super::upoly::UPoly;

/// Polynomial ring whose fractions have a canonical representative.
pub trait FracBase: GcdDomain {
    /// The rational `u` such that `self / u` has coprime integer coefficients
    /// and a positive leading coefficient in canonical order.
    fn unit_normal(&self) -> Rational;
    fn scale_rational(&self, c: &Rational) -> Self;
    fn as_rational(&self) -> Option<Rational>;
}

/// Polynomials in `q` with coefficients in Q[t1, t2].
pub type QPoly = UPoly<TPoly>;

impl FracBase for TPoly {
    fn unit_normal(&self) -> Rational {
        let c = self.rational_content();
        if self.canonical_sign() < 0 {
            -c
        } else {
            c
        }
    }
    fn scale_rational(&self, c: &Rational) -> Self {
        self.scale(c)
    }
    fn as_rational(&self) -> Option<Rational> {
        self.as_constant()
    }
}

impl FracBase for QPoly {
    fn unit_normal(&self) -> Rational {
        let mut g = Rational::zero();
        for c in self.coeffs() {
            g = g.gcd(&c.rational_content());
        }
        if self.lc().canonical_sign() < 0 {
            -g
        } else {
            g
        }
    }
    fn scale_rational(&self, c: &Rational) -> Self {
        self.map(|p| p.scale(c))
    }
    fn as_rational(&self) -> Option<Rational> {
        if self.is_constant() {
            self.coeff(0).as_constant()
        } else {
            None
        }
    }
}

/// Fraction `num / den` with `gcd(num, den) = 1` and `den` normalized by
/// [`FracBase::unit_normal`], so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Frac<P> {
    num: P,
    den: P,
}

/// Element of Q(t1, t2).
pub type TRat = Frac<TPoly>;
/// Element of Q(t1, t2)(q).
pub type QRat = Frac<QPoly>;

impl<P: FracBase> Frac<P> {
    /// Builds a reduced fraction; panics if `den` is zero.
    pub fn new(num: P, den: P) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Frac { num, den: P::one() };
        }
        if den.as_rational().is_some() {
            return Self::normalized(num, den);
        }
        let g = num.gcd(&den);
        if g.as_rational().is_some() {
            return Self::normalized(num, den);
        }
        let num = num.div_exact(&g).expect("gcd divides numerator");
        let den = den.div_exact(&g).expect("gcd divides denominator");
        Self::normalized(num, den)
    }

    /// Already coprime; fix the unit.
    fn normalized(num: P, den: P) -> Self {
        let u = den.unit_normal();
        if u.is_one() {
            return Frac { num, den };
        }
        let inv = Rational::one() / u;
        Frac { num: num.scale_rational(&inv), den: den.scale_rational(&inv) }
    }

    pub fn from_poly(p: P) -> Self {
        Frac { num: p, den: P::one() }
    }

    pub fn num(&self) -> &P {
        &self.num
    }

    pub fn den(&self) -> &P {
        &self.den
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn from_rational(c: Rational) -> Self {
        Frac { num: P::one().scale_rational(&c), den: P::one() }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.as_rational()
        } else {
            None
        }
    }

    fn add_ref(a: &Self, b: &Self) -> Self {
        if a.is_zero_frac() {
            return b.clone();
        }
        if b.is_zero_frac() {
            return a.clone();
        }
        if a.den == b.den {
            return Self::new(a.num.clone() + &b.num, a.den.clone());
        }
        if a.den.is_one() {
            return Self::normalized(a.num.clone() * &b.den + &b.num, b.den.clone());
        }
        if b.den.is_one() {
            return Self::normalized(b.num.clone() * &a.den + &a.num, a.den.clone());
        }
        let g = a.den.gcd(&b.den);
        let bd = b.den.div_exact(&g).expect("gcd divides");
        let ad = a.den.div_exact(&g).expect("gcd divides");
        let num = a.num.clone() * &bd + &(b.num.clone() * &ad);
        let den = a.den.clone() * &bd;
        Self::new(num, den)
    }

    fn neg_ref(a: &Self) -> Self {
        Frac { num: -a.num.clone(), den: a.den.clone() }
    }

    fn sub_ref(a: &Self, b: &Self) -> Self {
        Self::add_ref(a, &Self::neg_ref(b))
    }

    fn mul_ref(a: &Self, b: &Self) -> Self {
        if a.is_zero_frac() || b.is_zero_frac() {
            return Self::from_poly(P::zero());
        }
        if a.den.is_one() && b.den.is_one() {
            return Frac { num: a.num.clone() * &b.num, den: P::one() };
        }
        let g1 = a.num.gcd(&b.den);
        let g2 = b.num.gcd(&a.den);
        let an = a.num.div_exact(&g1).expect("gcd divides");
        let bd = b.den.div_exact(&g1).expect("gcd divides");
        let bn = b.num.div_exact(&g2).expect("gcd divides");
        let ad = a.den.div_exact(&g2).expect("gcd divides");
        Self::normalized(an * &bn, ad * &bd)
    }

    pub fn recip(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(Self::normalized(self.den.clone(), self.num.clone()))
        }
    }

    fn div_ref(a: &Self, b: &Self) -> Self {
        Self::mul_ref(a, &b.recip().expect("division by zero"))
    }

    fn is_zero_frac(&self) -> bool {
        self.num.is_zero()
    }
}

crate::forward_binop!([P: FracBase] Frac<P>, Add, add, Frac::add_ref);
crate::forward_binop!([P: FracBase] Frac<P>, Sub, sub, Frac::sub_ref);
crate::forward_binop!([P: FracBase] Frac<P>, Mul, mul, Frac::mul_ref);
crate::forward_binop!([P: FracBase] Frac<P>, Div, div, Frac::div_ref);
crate::forward_neg!([P: FracBase] Frac<P>, Frac::neg_ref);

impl<P: FracBase> Ring for Frac<P> {
    fn zero() -> Self {
        Frac { num: P::zero(), den: P::one() }
    }
    fn one() -> Self {
        Frac { num: P::one(), den: P::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn from_int(v: i64) -> Self {
        Frac { num: P::from_int(v), den: P::one() }
    }
}

impl<P: FracBase> Field for Frac<P> {
    fn inv(&self) -> Option<Self> {
        self.recip()
    }
}

impl TRat {
    pub fn t1() -> Self {
        Self::from_poly(TPoly::t1())
    }
    pub fn t2() -> Self {
        Self::from_poly(TPoly::t2())
    }
    pub fn rational(c: Rational) -> Self {
        Self::from_poly(TPoly::constant(c))
    }

    pub fn eval(&self, t1: &Rational, t2: &Rational) -> Option<Rational> {
        let d = self.den.eval(t1, t2);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(t1, t2) / d)
        }
    }

    pub fn eval_f64(&self, t1: f64, t2: f64) -> f64 {
        self.num.eval_f64(t1, t2) / self.den.eval_f64(t1, t2)
    }

    pub fn swap(&self) -> Self {
        Self::new(self.num.swap(), self.den.swap())
    }

    /// Substitute polynomials for `t1` and `t2`.
    pub fn substitute(&self, x1: &TPoly, x2: &TPoly) -> Self {
        Self::new(self.num.substitute(x1, x2), self.den.substitute(x1, x2))
    }

    pub fn as_poly(&self) -> Option<&TPoly> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn is_integral_poly(&self) -> bool {
        self.den.is_one() && self.num.has_integer_coeffs()
    }
}

impl From<TPoly> for TRat {
    fn from(p: TPoly) -> Self {
        TRat::from_poly(p)
    }
}

impl From<Rational> for TRat {
    fn from(c: Rational) -> Self {
        TRat::rational(c)
    }
}

impl QRat {
    /// The variable `q`.
    pub fn q() -> Self {
        Self::from_poly(UPoly::x())
    }

    pub fn from_trat(c: &TRat) -> Self {
        Frac { num: UPoly::constant(c.num.clone()), den: UPoly::constant(c.den.clone()) }
    }

    pub fn from_tpoly(p: TPoly) -> Self {
        Self::from_poly(UPoly::constant(p))
    }

    /// `(-q)^k`
    pub fn neg_q_pow(k: usize) -> Self {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        Self::from_poly(UPoly::monomial(TPoly::int(sign), k))
    }

    /// Value as an element of Q(t1, t2) when `q` does not occur.
    pub fn as_trat(&self) -> Option<TRat> {
        if self.num.is_constant() && self.den.is_constant() {
            Some(TRat::new(self.num.coeff(0), self.den.coeff(0)))
        } else {
            None
        }
    }

    pub fn is_q_free(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// Value at `q = 0`; `None` if the denominator vanishes there.
    pub fn at_q0(&self) -> Option<TRat> {
        let d = self.den.coeff(0);
        if d.is_zero() {
            None
        } else {
            Some(TRat::new(self.num.coeff(0), d))
        }
    }

    /// Apply a map to every `t`-coefficient (for specialization or swaps).
    pub fn map_t(&self, f: impl Fn(&TPoly) -> TPoly) -> Self {
        Self::new(self.num.map(&f), self.den.map(&f))
    }

    pub fn swap_t(&self) -> Self {
        self.map_t(TPoly::swap)
    }

    /// Specialize `t1`, `t2` to rationals; `None` if the denominator vanishes.
    pub fn specialize(&self, t1: &Rational, t2: &Rational) -> Option<Self> {
        let den = self.den.map(|c| TPoly::constant(c.eval(t1, t2)));
        if den.is_zero() {
            return None;
        }
        Some(Self::new(self.num.map(|c| TPoly::constant(c.eval(t1, t2))), den))
    }

    /// `q d/dq`
    pub fn q_derivative(&self) -> Self {
        let dn = self.num.derivative();
        let dd = self.den.derivative();
        let num = (dn * &self.den - self.num.clone() * &dd).shift_up(1);
        Self::new(num, self.den.clone() * &self.den)
    }

    /// Substitute a rational function of `q` for `q`.
    pub fn compose_q(&self, r: &QRat) -> QRat {
        fn horner(p: &QPoly, r: &QRat) -> QRat {
            let mut acc = QRat::zero();
            for c in p.coeffs().iter().rev() {
                acc = acc * r + QRat::from_tpoly(c.clone());
            }
            acc
        }
        horner(&self.num, r) / horner(&self.den, r)
    }
}

impl From<TRat> for QRat {
    fn from(c: TRat) -> Self {
        QRat::from_trat(&c)
    }
}

fn needs_parens(terms: usize) -> bool {
    terms > 1
}

impl fmt::Display for TRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        // clear numerator denominators so that "-1/2/(t1*t2)" prints as "-1/(2*t1*t2)"
        let l = Rational::from_integer(denominator_lcm(self.num.terms().into_iter().map(|(_, c)| c)));
        let (n, d) = (self.num.scale(&l), self.den.scale(&l));
        let num = n.to_string();
        let den = d.to_string();
        let num = if needs_parens(n.num_terms()) { format!("({num})") } else { num };
        let den_atomic = d.is_monomial()
            && d.leading_term().is_some_and(|(_, c)| c.is_one())
            && d.leading_term().is_some_and(|((a, b), _)| a == 0 || b == 0);
        if den_atomic {
            write!(f, "{num}/{den}")
        } else {
            write!(f, "{num}/({den})")
        }
    }
}

fn denominator_lcm(cs: impl Iterator<Item = Rational>) -> num_bigint::BigInt {
    use num_integer::Integer;
    cs.fold(num_bigint::BigInt::from(1), |l, c| l.lcm(c.denom()))
}

/// Terms of a polynomial in `q` over Q[t1, t2], ordered by `q` degree then
/// canonically in `t`.
fn qpoly_terms(p: &QPoly) -> Vec<(Rational, String)> {
    let mut out = Vec::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        for ((a, b), r) in c.terms() {
            let mut m = String::new();
            super::tpoly::write_monomial(&mut m, &[("t1", a), ("t2", b), ("q", k)]);
            out.push((r, m));
        }
    }
    out
}

pub(crate) fn render_qpoly(p: &QPoly) -> (String, usize) {
    let terms = qpoly_terms(p);
    let mut s = String::new();
    super::tpoly::write_terms(&mut s, &terms);
    (s, terms.len())
}

impl fmt::Display for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return f.write_str(&render_qpoly(&self.num).0);
        }
        let l = Rational::from_integer(denominator_lcm(
            self.num.coeffs().iter().flat_map(|c| c.terms().into_iter().map(|(_, r)| r)),
        ));
        let (num, nt) = render_qpoly(&self.num.scale_rational(&l));
        let (den, _) = render_qpoly(&self.den.scale_rational(&l));
        let num = if needs_parens(nt) { format!("({num})") } else { num };
        write!(f, "{num}/({den})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ring::rat;

    fn t1() -> TRat {
        TRat::t1()
    }
    fn t2() -> TRat {
        TRat::t2()
    }

    #[test]
    fn reduction_cancels_common_factors() {
        let s = t1() + t2();
        let x = (s.clone() * t1()) / (s.clone() * t2());
        assert_eq!(x, t1() / t2());
        assert_eq!(((t1() * t1() - t2() * t2()) / (t1() - t2())), s);
    }

    #[test]
    fn canonical_sign_of_denominator() {
        let x = TRat::one() / (-(t1() * t2() * TRat::from_int(2)));
        assert_eq!(x.to_string(), "-1/(2*t1*t2)");
        let y = TRat::one() / (t2() - t1());
        assert_eq!(y.to_string(), "-1/(t1 - t2)");
    }

    #[test]
    fn qrat_reduction_and_q0() {
        let q = QRat::q();
        let one = QRat::one();
        let x = (one.clone() - q.clone() * q.clone()) / (one.clone() - q.clone());
        assert_eq!(x, one.clone() + q.clone());
        let y = (one.clone() + q.clone()) / (one.clone() - q.clone());
        assert_eq!(y.at_q0(), Some(TRat::one()));
        assert_eq!(y.to_string(), "(-q - 1)/(q - 1)");
    }

    #[test]
    fn q_derivative_of_geometric_series() {
        let q = QRat::q();
        let g = QRat::one() / (QRat::one() - q.clone());
        // q d/dq 1/(1-q) = q/(1-q)^2
        let expected = q.clone() / ((QRat::one() - q.clone()) * (QRat::one() - q));
        assert_eq!(g.q_derivative(), expected);
    }

    #[test]
    fn specialization() {
        let x = QRat::from_trat(&(t1() / t2())) * QRat::q();
        assert_eq!(x.specialize(&rat(1, 2), &rat(3, 1)).unwrap(), QRat::from_rational(rat(1, 6)) * QRat::q());
        assert!(QRat::from_trat(&(t1() / t2())).specialize(&rat(1, 1), &rat(0, 1)).is_none());
    }
}
