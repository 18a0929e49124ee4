//! Genus-0 invariants of the Hilbert scheme determined by the divisor
//! operator: small quantum products, 3-point series, WDVV reconstruction of
//! multipoint series, fixed-complex-structure invariants, and the
//! generating functions used to test them.

mod fixed;
mod fourier;
mod wdvv;

use thiserror::Error;

use crate::exact::linalg::Matrix;
use crate::exact::{series_expand, ExactError, QRat, QSeries, Rational, Ring, TPoly, TRat};
use crate::fock::{norm, FockError, FockVector, Scalar};
use crate::operators::{md_cached, OperatorMatrix};
use crate::partitions::{Basis, Partition};

pub use fixed::{fixed_structure, fixed_structure_split, gw_exponent, gw_transform, GwSeries};
pub use fourier::{
    f_function, f_function_series, fourier_fprime, fourier_fprime_bruteforce, gamma_closed_form, gamma_case_coefficient,
    jj_check, jj_pairing, GammaWitness, JjFailure,
};
pub use wdvv::{multipoint, multipoint_vectors, Insertion, Strategy};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InvariantError {
    #[error("Krylov matrix of D at |1^n> is singular (n={n}): D does not generate at this specialization")]
    SingularKrylov { n: u32 },
    #[error("specialization makes an entry of M_D singular")]
    BadSpecialization,
    #[error("need at least {0} insertions")]
    TooFewInsertions(usize),
    #[error("insertions of unequal size (expected {0})")]
    SizeMismatch(u32),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Exact invariant with its provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantSeries {
    pub n: u32,
    pub insertions: Vec<String>,
    pub value: QRat,
}

impl InvariantSeries {
    pub fn expand(&self, order: usize) -> Result<QSeries, ExactError> {
        series_expand(&self.value, order)
    }
}

/// The small quantum ring of `Hilb_n`, presented through `M_D`.
///
/// Every class `a` is written as `P_a(D)` by solving the Krylov system
/// `P_a(M_D)|1^n⟩ = a`; then `a * b = P_a(M_D) b`.
#[derive(Clone, Debug)]
pub struct QuantumRing {
    basis: Basis,
    md: Matrix<QRat>,
    norms: Vec<QRat>,
    krylov_inv: Matrix<QRat>,
}

impl QuantumRing {
    pub fn new(n: u32) -> Result<Self, InvariantError> {
        Self::from_operator(&md_cached(n))
    }

    /// `(t1, t2)` specialized to rationals, `q` kept exact.
    pub fn specialized(n: u32, t1: &Rational, t2: &Rational) -> Result<Self, InvariantError> {
        let md = md_cached(n).specialize(t1, t2).ok_or(InvariantError::BadSpecialization)?;
        let mut ring = Self::from_operator(&md)?;
        for (x, mu) in ring.norms.iter_mut().zip(ring.basis.iter()) {
            let v = norm(mu).eval(t1, t2).ok_or(InvariantError::BadSpecialization)?;
            *x = QRat::from_rational(v);
        }
        Ok(ring)
    }

    fn from_operator(md: &OperatorMatrix) -> Result<Self, InvariantError> {
        let basis = md.basis().clone();
        let n = basis.n();
        let dim = basis.len();
        let unit = basis.index_of(&Partition::ones(n)).expect("unit in basis");
        let mut cols = Vec::with_capacity(dim);
        let mut v = vec![QRat::zero(); dim];
        v[unit] = QRat::one();
        for _ in 0..dim {
            let next = md.matrix().mul_vec(&v);
            cols.push(std::mem::replace(&mut v, next));
        }
        let k = Matrix::from_columns(&cols);
        let krylov_inv = k.inverse().map_err(|_| InvariantError::SingularKrylov { n })?;
        let norms = basis.iter().map(|mu| QRat::from_trat(&norm(mu))).collect();
        Ok(QuantumRing { basis, md: md.matrix().clone(), norms, krylov_inv })
    }

    pub fn n(&self) -> u32 {
        self.basis.n()
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn md(&self) -> &Matrix<QRat> {
        &self.md
    }

    pub fn norm(&self, i: usize) -> &QRat {
        &self.norms[i]
    }

    /// Coefficients `c_k(q)` with `a = Σ_k c_k D^{*k}`.
    pub fn krylov_coeffs(&self, a: &[QRat]) -> Vec<QRat> {
        self.krylov_inv.mul_vec(a)
    }

    pub fn krylov_coeffs_of(&self, i: usize) -> Vec<QRat> {
        self.krylov_inv.column(i)
    }

    /// `D^{*k} * b = M_D^k b` in coordinates.
    pub fn d_power_times(&self, k: usize, b: &[QRat]) -> Vec<QRat> {
        let mut v = b.to_vec();
        for _ in 0..k {
            v = self.md.mul_vec(&v);
        }
        v
    }

    /// `a * b` in coordinates.
    pub fn multiply_coords(&self, a: &[QRat], b: &[QRat]) -> Vec<QRat> {
        let c = self.krylov_coeffs(a);
        let mut acc = vec![QRat::zero(); b.len()];
        let mut v = b.to_vec();
        for (i, ci) in c.iter().enumerate() {
            if i > 0 {
                v = self.md.mul_vec(&v);
            }
            if ci.is_zero() {
                continue;
            }
            for (x, y) in acc.iter_mut().zip(&v) {
                *x = x.clone() + ci.clone() * y;
            }
        }
        acc
    }

    pub fn multiply(&self, a: &FockVector<QRat>, b: &FockVector<QRat>) -> Result<FockVector<QRat>, InvariantError> {
        let n = self.n();
        if a.n() != n || b.n() != n {
            return Err(InvariantError::SizeMismatch(n));
        }
        let c = self.multiply_coords(&a.coords(&self.basis), &b.coords(&self.basis));
        Ok(FockVector::from_coords(&self.basis, &c))
    }

    /// `⟨a, b⟩ = Σ a_μ b_μ ⟨μ|μ⟩` in coordinates.
    pub fn gram(&self, a: &[QRat], b: &[QRat]) -> QRat {
        a.iter().zip(b).zip(&self.norms).fold(QRat::zero(), |acc, ((x, y), w)| {
            if x.is_zero() || y.is_zero() {
                acc
            } else {
                acc + x.clone() * y * w
            }
        })
    }

    pub fn unit_coords(&self, i: usize) -> Vec<QRat> {
        let mut v = vec![QRat::zero(); self.basis.len()];
        v[i] = QRat::one();
        v
    }

    fn index(&self, mu: &Partition) -> Result<usize, InvariantError> {
        self.basis.index_of(mu).ok_or(InvariantError::SizeMismatch(self.n()))
    }

    /// `⟨λ, μ, ν⟩ = ⟨λ * μ, ν⟩`.
    pub fn three_point(&self, lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<QRat, InvariantError> {
        let (i, j, k) = (self.index(lambda)?, self.index(mu)?, self.index(nu)?);
        let prod = self.multiply_coords(&self.unit_coords(i), &self.unit_coords(j));
        Ok(prod[k].clone() * &self.norms[k])
    }

    /// `⟨μ, D, ν⟩ = ⟨μ | M_D | ν⟩`.
    pub fn three_point_d(&self, mu: &Partition, nu: &Partition) -> Result<QRat, InvariantError> {
        let (i, j) = (self.index(mu)?, self.index(nu)?);
        Ok(self.norms[i].clone() * self.md.get(i, j))
    }
}

/// `⟨μ | M_D | ν⟩` as an invariant series.
pub fn three_point_d(mu: &Partition, nu: &Partition) -> Result<InvariantSeries, InvariantError> {
    if mu.size() != nu.size() {
        return Err(InvariantError::SizeMismatch(mu.size()));
    }
    let md = md_cached(mu.size());
    let value = QRat::from_trat(&norm(mu)) * md.entry(mu, nu);
    Ok(InvariantSeries { n: mu.size(), insertions: vec![mu.to_string(), "D".into(), nu.to_string()], value })
}

/// `ν^∨ = ν / ⟨ν|ν⟩`.
pub fn poincare_dual<C: Scalar>(nu: &Partition) -> FockVector<C> {
    let inv = norm(nu).recip().expect("norms are nonzero");
    FockVector::term(nu.clone(), C::from_trat(&inv))
}

/// For `1 ≤ d ≤ order`, the `q^d` coefficient of `(t1 t2)^{ℓ(μ)} ⟨μ|M_D|ν⟩` is a
/// polynomial divisible by `t1 + t2`.
pub fn divisibility_check(n: u32, order: usize) -> Result<(), String> {
    let md = md_cached(n);
    let s = TPoly::s();
    for (i, mu) in md.basis().iter().enumerate() {
        let scale = QRat::from_tpoly(TPoly::t1t2().powi(mu.len() as u32)) * &QRat::from_trat(&norm(mu));
        for (j, nu) in md.basis().iter().enumerate() {
            let ser = series_expand(&(scale.clone() * md.matrix().get(i, j)), order).map_err(|e| e.to_string())?;
            for d in 1..=order {
                let c = ser.coeff(d);
                let ok = c.as_poly().is_some_and(|p| p.div_exact_poly(&s).is_some());
                if !ok {
                    return Err(format!("n={n} <{mu}|M_D|{nu}> q^{d}: {c} is not a polynomial multiple of t1+t2"));
                }
            }
        }
    }
    Ok(())
}

/// Rational specializations with `t1 + t2 ≠ 0` and `t1/t2` away from small
/// rationals, for checks that only need generic parameters.
pub fn generic_points() -> Vec<(Rational, Rational)> {
    [(3, 10, 41, 100), (-7, 11, 5, 13), (17, 19, -2, 23)]
        .iter()
        .map(|&(a, b, c, d)| (Rational::new(a.into(), b.into()), Rational::new(c.into(), d.into())))
        .collect()
}

impl From<TRat> for InvariantSeries {
    fn from(t: TRat) -> Self {
        InvariantSeries { n: 0, insertions: Vec::new(), value: QRat::from_trat(&t) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_qrat;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn q(s: &str) -> QRat {
        parse_qrat(s).unwrap()
    }

    #[test]
    fn three_point_d_examples() {
        assert_eq!(three_point_d(&p(&[2]), &p(&[2])).unwrap().value, q("(t1+t2)*(1+q)/(2*t1*t2*(1-q))"));
        assert!(three_point_d(&p(&[1, 1]), &p(&[1, 1])).unwrap().value.is_zero());
        assert_eq!(three_point_d(&p(&[2]), &p(&[1, 1])).unwrap().value, q("1/(2*t1*t2)"));
    }

    #[test]
    fn products_for_two() {
        let r = QuantumRing::new(2).unwrap();
        let two = FockVector::basis(p(&[2]));
        let unit = FockVector::basis(p(&[1, 1]));
        assert_eq!(r.multiply(&unit, &two).unwrap(), two);
        let sq = r.multiply(&two, &two).unwrap();
        assert_eq!(sq.coeff(&p(&[2])), q("(t1+t2)*(1+q)/(1-q)"));
        assert_eq!(sq.coeff(&p(&[1, 1])), q("-t1*t2"));
        assert_eq!(r.three_point(&p(&[2]), &p(&[2]), &p(&[2])).unwrap(), q("-(t1+t2)*(1+q)/(2*t1*t2*(1-q))"));
        let classical = sq.map(|c| QRat::from_trat(&c.at_q0().unwrap()));
        assert_eq!(classical.coeff(&p(&[2])), q("t1+t2"));
    }

    #[test]
    fn poincare_duals() {
        assert_eq!(poincare_dual::<TRat>(&p(&[2])).coeff(&p(&[2])).to_string(), "-2*t1*t2");
        assert_eq!(poincare_dual::<TRat>(&p(&[1, 1])).coeff(&p(&[1, 1])).to_string(), "2*t1^2*t2^2");
        assert_eq!(poincare_dual::<TRat>(&p(&[1])).coeff(&p(&[1])).to_string(), "t1*t2");
    }

    #[test]
    fn divisibility_small() {
        for n in 1..=3 {
            divisibility_check(n, 6).unwrap();
        }
    }

    #[test]
    fn krylov_at_antidiagonal() {
        // at t2 = -t1 the operator is q-free with eigenvalues -t1 Σ contents,
        // which first collide at n = 6 ((4,1,1) and (3,3))
        let one = Rational::from_integer(1.into());
        let neg = -one.clone();
        assert!(QuantumRing::specialized(5, &one, &neg).is_ok());
        assert!(matches!(QuantumRing::specialized(6, &one, &neg), Err(InvariantError::SingularKrylov { n: 6 })));
    }
}
