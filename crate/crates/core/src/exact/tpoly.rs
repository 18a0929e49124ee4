//! Bivariate polynomials in the equivariant parameters `t1`, `t2`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use super::ring::{GcdDomain, Rational, Ring};
use super::upoly::UPoly;

/// Univariate polynomial in `t2` over Q.
pub type T2Poly = UPoly<Rational>;

/// Polynomial in `t1`, `t2` over Q.
///
/// Stored recursively as a polynomial in `t1` whose coefficients are
/// polynomials in `t2`; the term view ([`TPoly::terms`]) lists exponent pairs
/// in the canonical order (total degree descending, then `t1` exponent
/// descending).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TPoly(UPoly<T2Poly>);

impl TPoly {
    pub fn zero() -> Self {
        TPoly(UPoly::zero())
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        TPoly(UPoly::constant(UPoly::constant(c)))
    }

    pub fn int(v: i64) -> Self {
        Self::constant(Rational::from_int(v))
    }

    /// `c * t1^a * t2^b`
    pub fn monomial(c: Rational, a: usize, b: usize) -> Self {
        TPoly(UPoly::monomial(UPoly::monomial(c, b), a))
    }

    pub fn t1() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn t2() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    /// `t1 + t2`
    pub fn s() -> Self {
        Self::t1() + Self::t2()
    }

    /// `t1 * t2`
    pub fn t1t2() -> Self {
        Self::monomial(Rational::one(), 1, 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((usize, usize), Rational)>) -> Self {
        let mut acc = Self::zero();
        for ((a, b), c) in terms {
            acc = acc + Self::monomial(c, a, b);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn recursive(&self) -> &UPoly<T2Poly> {
        &self.0
    }

    pub fn from_recursive(p: UPoly<T2Poly>) -> Self {
        TPoly(p)
    }

    /// Nonzero terms in canonical order.
    pub fn terms(&self) -> Vec<((usize, usize), Rational)> {
        let mut out = Vec::new();
        for (a, inner) in self.0.coeffs().iter().enumerate() {
            for (b, c) in inner.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out.push(((a, b), c.clone()));
                }
            }
        }
        out.sort_by(|x, y| canonical_cmp(y.0, x.0));
        out
    }

    pub fn num_terms(&self) -> usize {
        self.0.coeffs().iter().map(|c| c.coeffs().iter().filter(|x| !x.is_zero()).count()).sum()
    }

    pub fn coeff(&self, a: usize, b: usize) -> Rational {
        self.0.coeff(a).coeff(b)
    }

    /// Leading term in canonical order.
    pub fn leading_term(&self) -> Option<((usize, usize), Rational)> {
        self.terms().into_iter().next()
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.leading_term().map(|((a, b), _)| a + b)
    }

    pub fn deg_t1(&self) -> usize {
        self.0.deg()
    }

    pub fn deg_t2(&self) -> usize {
        self.0.coeffs().iter().map(|c| c.deg()).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.0.is_constant() && self.0.coeff(0).is_constant()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.0.coeff(0).coeff(0))
        } else {
            None
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.num_terms() == 1
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.terms().iter().all(|(_, c)| c.denom() == &BigInt::from(1))
    }

    /// Positive gcd of all rational coefficients.
    pub fn rational_content(&self) -> Rational {
        let mut g = Rational::zero();
        for inner in self.0.coeffs() {
            for c in inner.coeffs() {
                g = g.gcd(c);
            }
        }
        g
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TPoly(self.0.map(|p| p.scale(c)))
    }

    pub fn eval(&self, t1: &Rational, t2: &Rational) -> Rational {
        self.0.map(|p| UPoly::constant(p.eval(t2))).eval(&UPoly::constant(t1.clone())).coeff(0)
    }

    pub fn eval_f64(&self, t1: f64, t2: f64) -> f64 {
        self.terms()
            .iter()
            .map(|((a, b), c)| rational_to_f64(c) * t1.powi(*a as i32) * t2.powi(*b as i32))
            .sum()
    }

    /// Exchange `t1` and `t2`.
    pub fn swap(&self) -> Self {
        Self::from_terms(self.terms().into_iter().map(|((a, b), c)| ((b, a), c)))
    }

    /// Substitute `t1 -> x1`, `t2 -> x2` for arbitrary polynomials.
    pub fn substitute(&self, x1: &TPoly, x2: &TPoly) -> TPoly {
        let mut acc = TPoly::zero();
        for ((a, b), c) in self.terms() {
            acc = acc + x1.powi(a as u32) * x2.powi(b as u32) * TPoly::constant(c);
        }
        acc
    }

    pub fn powi(&self, e: u32) -> Self {
        Ring::pow(self, e)
    }

    /// Partial derivative in `t1`.
    pub fn d_t1(&self) -> Self {
        TPoly(self.0.derivative())
    }

    /// Exact division by another polynomial.
    pub fn div_exact_poly(&self, other: &Self) -> Option<Self> {
        self.0.div_exact_poly(&other.0).map(TPoly)
    }

    /// Sign of the canonical leading coefficient.
    pub fn canonical_sign(&self) -> i32 {
        match self.leading_term() {
            None => 0,
            Some((_, c)) if c.is_negative() => -1,
            Some(_) => 1,
        }
    }

    fn add_ref(a: &Self, b: &Self) -> Self {
        TPoly(&a.0 + &b.0)
    }
    fn sub_ref(a: &Self, b: &Self) -> Self {
        TPoly(&a.0 - &b.0)
    }
    fn mul_ref(a: &Self, b: &Self) -> Self {
        TPoly(&a.0 * &b.0)
    }
    fn neg_ref(a: &Self) -> Self {
        TPoly(-&a.0)
    }
}

/// Canonical monomial order: total degree, then the `t1` exponent.
pub fn canonical_cmp(x: (usize, usize), y: (usize, usize)) -> Ordering {
    (x.0 + x.1).cmp(&(y.0 + y.1)).then(x.0.cmp(&y.0))
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

crate::forward_binop!([] TPoly, Add, add, TPoly::add_ref);
crate::forward_binop!([] TPoly, Sub, sub, TPoly::sub_ref);
crate::forward_binop!([] TPoly, Mul, mul, TPoly::mul_ref);
crate::forward_neg!([] TPoly, TPoly::neg_ref);

impl Ring for TPoly {
    fn zero() -> Self {
        TPoly::zero()
    }
    fn one() -> Self {
        TPoly::one()
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn from_int(v: i64) -> Self {
        TPoly::int(v)
    }
}

fn lagrange(points: &[Rational], values: &[Rational]) -> T2Poly {
    // Newton divided differences
    let n = points.len();
    let mut c = values.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            c[i] = (c[i].clone() - &c[i - 1]) / (points[i].clone() - &points[i - j]);
        }
    }
    let mut acc = T2Poly::constant(c[n - 1].clone());
    for i in (0..n - 1).rev() {
        let lin = UPoly::from_coeffs(vec![-points[i].clone(), Rational::one()]);
        acc = &(&acc * &lin) + &T2Poly::constant(c[i].clone());
    }
    acc
}

fn sample_points() -> impl Iterator<Item = Rational> {
    (0i64..).flat_map(|k| [k, -k - 1]).map(|k| Rational::from_integer(k.into()))
}

/// Gcd of primitive `a, b` (outer degree ≥ 1) by specializing the inner
/// variable, taking univariate gcds, and interpolating; the candidate is
/// confirmed by exact division. `None` if the candidate fails to divide.
fn gcd_by_interpolation(a: &UPoly<T2Poly>, b: &UPoly<T2Poly>) -> Option<UPoly<T2Poly>> {
    let (la, lb) = (a.lc(), b.lc());
    let gamma = la.gcd(&lb);
    let deg_y = |p: &UPoly<T2Poly>| p.coeffs().iter().map(|c| c.deg()).max().unwrap_or(0);
    let needed = gamma.deg() + deg_y(a).min(deg_y(b)) + 1;
    let mut best: Option<usize> = None;
    let mut pts: Vec<Rational> = Vec::new();
    let mut imgs: Vec<T2Poly> = Vec::new();
    for (tried, y) in sample_points().enumerate() {
        if tried > 4 * needed + 16 {
            return None;
        }
        if Ring::is_zero(&la.eval(&y)) || Ring::is_zero(&lb.eval(&y)) {
            continue;
        }
        let fa: T2Poly = a.map(|c| c.eval(&y));
        let fb: T2Poly = b.map(|c| c.eval(&y));
        let g = fa.gcd(&fb);
        let d = g.deg();
        if d == 0 {
            return Some(UPoly::one());
        }
        match best {
            Some(e) if d > e => continue,
            Some(e) if d == e => {}
            _ => {
                best = Some(d);
                pts.clear();
                imgs.clear();
            }
        }
        let g = g.scale(&(gamma.eval(&y) / g.lc()));
        pts.push(y);
        imgs.push(g);
        if pts.len() == needed {
            break;
        }
    }
    let d = best?;
    let coeffs: Vec<T2Poly> = (0..=d)
        .map(|i| lagrange(&pts, &imgs.iter().map(|g| g.coeff(i)).collect::<Vec<_>>()))
        .collect();
    let h = UPoly::from_coeffs(coeffs).primitive_part();
    if a.div_exact_poly(&h).is_some() && b.div_exact_poly(&h).is_some() {
        Some(h)
    } else {
        None
    }
}

impl GcdDomain for TPoly {
    fn gcd(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        if a.is_zero() || b.is_zero() {
            return TPoly(a.gcd(b));
        }
        let a0 = a.shift_down(a.trailing_zeros());
        let b0 = b.shift_down(b.trailing_zeros());
        if a0.deg() > 0 && b0.deg() > 0 {
            let (ca, cb) = (a0.content(), b0.content());
            let pa = a0.div_scalar_exact(&ca).expect("content divides");
            let pb = b0.div_scalar_exact(&cb).expect("content divides");
            if let Some(h) = gcd_by_interpolation(&pa, &pb) {
                let k = a.trailing_zeros().min(b.trailing_zeros());
                return TPoly(h.scale(&ca.gcd(&cb)).shift_up(k));
            }
        }
        TPoly(a.gcd(b))
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        self.div_exact_poly(other)
    }
    fn lead_sign(&self) -> i32 {
        self.0.lead_sign()
    }
}

impl From<Rational> for TPoly {
    fn from(c: Rational) -> Self {
        TPoly::constant(c)
    }
}

/// Writes a product of variable powers such as `t1^2*t2*q`; returns `false`
/// when every exponent is zero.
pub(crate) fn write_monomial(f: &mut String, vars: &[(&str, usize)]) -> bool {
    let mut first = true;
    for (name, e) in vars {
        if *e == 0 {
            continue;
        }
        if !first {
            f.push('*');
        }
        first = false;
        f.push_str(name);
        if *e > 1 {
            f.push('^');
            f.push_str(&e.to_string());
        }
    }
    !first
}

/// Renders a signed sum of `coefficient * monomial` terms.
pub(crate) fn write_terms(out: &mut String, terms: &[(Rational, String)]) {
    if terms.is_empty() {
        out.push('0');
        return;
    }
    for (i, (c, mono)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mono.is_empty() {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(mono);
        } else {
            out.push_str(&abs.to_string());
            out.push('*');
            out.push_str(mono);
        }
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(Rational, String)> = self
            .terms()
            .into_iter()
            .map(|((a, b), c)| {
                let mut m = String::new();
                write_monomial(&mut m, &[("t1", a), ("t2", b)]);
                (c, m)
            })
            .collect();
        let mut out = String::new();
        write_terms(&mut out, &terms);
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ring::rat;

    #[test]
    fn canonical_rendering() {
        let p = TPoly::monomial(rat(3, 1), 2, 1) - TPoly::constant(rat(1, 2));
        assert_eq!(p.to_string(), "3*t1^2*t2 - 1/2");
        let q = TPoly::t2() - TPoly::t1() * TPoly::t1() + TPoly::t1t2();
        assert_eq!(q.to_string(), "-t1^2 + t1*t2 + t2");
        assert_eq!(TPoly::zero().to_string(), "0");
    }

    #[test]
    fn gcd_of_products_of_linear_forms() {
        let a = (TPoly::t1() + TPoly::int(2) * TPoly::t2()) * TPoly::s() * TPoly::t1();
        let b = TPoly::s() * (TPoly::t1() - TPoly::t2()) * TPoly::t1();
        let g = a.gcd(&b);
        assert_eq!(g, TPoly::s() * TPoly::t1());
        assert_eq!(a.div_exact(&g).unwrap() * &g, a);
    }

    #[test]
    fn swap_and_eval() {
        let p = TPoly::monomial(rat(2, 1), 3, 1) + TPoly::t2();
        assert_eq!(p.swap(), TPoly::monomial(rat(2, 1), 1, 3) + TPoly::t1());
        assert_eq!(p.eval(&rat(1, 2), &rat(3, 1)), rat(2 * 3, 8) + rat(3, 1));
    }
}
