//! The class function `F(μ)`, the Fourier coefficients of `f'`, and the
//! first-order-in-`(t1+t2)` pairing of the fixed-point classes `(n)` and `(n-1,1)`.

use thiserror::Error;

use crate::exact::{s_expand, series_expand, QRat, QSeries, Rational, Ring, TPoly, TRat, UPoly};
use crate::fock::norm;
use crate::jack::{jack_vector, scaled_jack, JackError};
use crate::operators::md_cached;
use crate::partitions::{Basis, CharacterTable, Partition};

fn qr(k: i64) -> QRat {
    QRat::from_rational(Rational::from_integer(k.into()))
}

/// `F(μ) = -|μ| q/(1+q) - Σ_i μ_i² (-q)^{μ_i} / (1 - (-q)^{μ_i})`.
pub fn f_function(mu: &Partition) -> QRat {
    let q = QRat::q();
    let mut acc = -(qr(mu.size() as i64) * &q / &(QRat::one() + &q));
    for &m in mu.parts() {
        let x = QRat::neg_q_pow(m as usize);
        acc = acc - qr((m * m) as i64) * &x / &(QRat::one() - &x);
    }
    acc
}

pub fn f_function_series(mu: &Partition, order: usize) -> QSeries {
    series_expand(&f_function(mu), order).expect("regular at q = 0")
}

fn zpoly(terms: &[(usize, i64)]) -> UPoly<Rational> {
    terms
        .iter()
        .fold(UPoly::zero(), |acc, &(k, c)| acc + UPoly::monomial(Rational::from_integer(c.into()), k))
}

/// `(f', χ^λ)` in closed form, where `f(μ, z) = Σ_i z^{μ_i}` and `f' = z ∂_z f`.
pub fn fourier_fprime(lambda: &Partition) -> UPoly<Rational> {
    let parts = lambda.parts();
    match parts.len() {
        0 => UPoly::zero(),
        1 => zpoly(&(1..=parts[0] as usize).map(|k| (k, 1)).collect::<Vec<_>>()),
        l if parts[2..].iter().all(|&p| p == 1) => {
            let (a, b, c) = (parts[0] as usize, parts[1] as usize, l - 2);
            let sign = if c % 2 == 0 { 1 } else { -1 };
            zpoly(&[(a + c + 1, -sign), (b + c, sign)])
        }
        _ => UPoly::zero(),
    }
}

/// `Σ_μ χ^λ_μ f'(μ, z) / z(μ)` over the character table.
pub fn fourier_fprime_bruteforce(lambda: &Partition) -> UPoly<Rational> {
    let n = lambda.size();
    let table = CharacterTable::new(n);
    let mut acc = UPoly::zero();
    for mu in Basis::new(n).iter() {
        let chi = table.value(lambda, mu).expect("same size");
        if chi == 0 {
            continue;
        }
        let w = Rational::from_integer(chi.into()) / Rational::from_integer(mu.zmu());
        for &m in mu.parts() {
            acc = acc + UPoly::monomial(w.clone() * Rational::from_integer(m.into()), m as usize);
        }
    }
    acc
}

/// `γ_n(q) = q/(1+q) + n (-q)^n / (1 - (-q)^n)`.
pub fn gamma_closed_form(n: u32) -> QRat {
    let q = QRat::q();
    let x = QRat::neg_q_pow(n as usize);
    q.clone() / &(QRat::one() + &q) + qr(n as i64) * &x / &(QRat::one() - &x)
}

/// Coefficient of `q^d` (d ≥ 1) in `γ_n`: `(-1)^{d-1}` if `n ∤ d`, else `(n-1)(-1)^d`.
pub fn gamma_case_coefficient(n: u32, d: usize) -> Rational {
    let sign: i64 = if d % 2 == 0 { 1 } else { -1 };
    if d % n as usize == 0 {
        Rational::from_integer(((n as i64 - 1) * sign).into())
    } else {
        Rational::from_integer((-sign).into())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaWitness {
    pub n: u32,
    pub series: QSeries,
    pub closed_form: QRat,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JjFailure {
    #[error("n={n}: s^{s_order} q^{q_order} coefficient is {got}, expected {expected}")]
    Mismatch { n: u32, s_order: i64, q_order: usize, got: String, expected: String },
    #[error("n={n}: q^{q_order} coefficient of gamma is {got}, case formula gives {expected}")]
    CaseFormula { n: u32, q_order: usize, got: String, expected: String },
    #[error("n must be at least 2, got {0}")]
    BadSize(u32),
    #[error(transparent)]
    Jack(#[from] JackError),
}

/// `⟨J^(n) | M_D - M_D(0) | J^(n-1,1)⟩` for the scaled fixed-point classes.
pub fn jj_pairing(n: u32) -> Result<QRat, JjFailure> {
    if n < 2 {
        return Err(JjFailure::BadSize(n));
    }
    let a = scaled_jack(&jack_vector(&Partition::new(vec![n]).expect("valid"))?);
    let b = scaled_jack(&jack_vector(&Partition::new(vec![n - 1, 1]).expect("valid"))?);
    let md = md_cached(n);
    let basis = md.basis();
    let mut acc = QRat::zero();
    for (i, mu) in basis.iter().enumerate() {
        let am = a.coeff(mu);
        if am.is_zero() {
            continue;
        }
        let left = QRat::from_trat(&(am * &norm(mu)));
        for (j, nu) in basis.iter().enumerate() {
            let e = md.matrix().get(i, j);
            let delta = e.clone() - QRat::from_trat(&e.at_q0().expect("regular at q = 0"));
            let bn = b.coeff(nu);
            if delta.is_zero() || bn.is_zero() {
                continue;
            }
            acc = acc + left.clone() * &delta * &QRat::from_trat(&bn);
        }
    }
    Ok(acc)
}

/// Checks, through `q^order`, that the pairing vanishes at `s = 0` and that
/// its `s^1` coefficient is `(-1)^n t1^{2n} (n!)²/(n-1) · γ_n(q)`, and that the
/// coefficients of `γ_n` follow the case split on `n | d`.
pub fn jj_check(n: u32, order: usize) -> Result<GammaWitness, JjFailure> {
    let lhs = series_expand(&jj_pairing(n)?, order).expect("regular at q = 0");
    let closed_form = gamma_closed_form(n);
    let gamma = series_expand(&closed_form, order).expect("regular at q = 0");
    let fact: Rational = (1..=n).map(|k| Rational::from_integer(k.into())).product();
    let mut scale = fact.clone() * fact / Rational::from_integer((n - 1).into());
    if n % 2 == 1 {
        scale = -scale;
    }
    let prefactor = TRat::from_poly(TPoly::monomial(scale, 2 * n as usize, 0));
    for d in 0..=order {
        let g = gamma.coeff(d);
        if d >= 1 {
            let expected = TRat::rational(gamma_case_coefficient(n, d));
            if *g != expected {
                return Err(JjFailure::CaseFormula { n, q_order: d, got: g.to_string(), expected: expected.to_string() });
            }
        }
        let exp = s_expand(lhs.coeff(d), 1).expect("t2 = s - t1 is admissible");
        let lowest = -(exp.laurent_offset() as i64);
        for e in lowest..=1 {
            let got = exp.coeff(e);
            let want = if e == 1 { prefactor.clone() * g } else { TRat::zero() };
            if got != want {
                return Err(JjFailure::Mismatch { n, s_order: e, q_order: d, got: got.to_string(), expected: want.to_string() });
            }
        }
    }
    Ok(GammaWitness { n, series: gamma, closed_form })
}
