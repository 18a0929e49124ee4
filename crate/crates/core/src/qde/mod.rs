//! The quantum differential equation `q dψ/dq = M_D(q) ψ`.
//!
//! At `q = 0` the equation has a fundamental solution `Ψ = Y(q) q^{M_D(0)}`
//! with `Y(0) = I`; `Y` is found order by order in the eigenbasis of
//! `M_D(0)`, where the Sylvester equation is diagonal. Away from `q = 0`
//! the equation is integrated numerically (see [`monodromy`]).

pub mod monodromy;

use std::fmt;

use thiserror::Error;

use crate::exact::linalg::Matrix;
use crate::exact::{rational_to_f64, series_expand, ExactError, QPoly, QRat, Rational, Ring, TPoly, TRat, UPoly};
use crate::jack::eigenbasis;
use crate::operators::md_cached;
use crate::partitions::Basis;

pub use monodromy::{
    charpoly, commutator_probe, composition_probe, invariance_probe, monodromy_probe, residue_eigenvalues,
    spectrum_distance, CommutatorReport, CompositionReport, InvarianceReport, Loop, MonodromyError, MonodromyReport,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QdeError {
    #[error("resonance at q^{d}: eigenvalues {i} and {j} of M_D(0) differ by {d}")]
    Resonance { d: usize, i: usize, j: usize },
    #[error("specialization makes M_D or its eigenbasis singular")]
    BadSpecialization,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// `Y(q) = Σ_d Y_d q^d` through `q^order`, kept in the eigenbasis of `M_D(0)`:
/// `Y_d = P Z_d P^{-1}` with `P^{-1} M_D(0) P = Λ` diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct FundamentalSolution {
    pub n: u32,
    pub order: usize,
    pub basis: Basis,
    /// `M_e`, the `q^e` coefficient of `M_D`, for `e = 0..=order`; `M_0` is the residue.
    pub coefficients: Vec<Matrix<TRat>>,
    pub eigenvalues: Vec<TRat>,
    pub p: Matrix<TRat>,
    pub p_inv: Matrix<TRat>,
    pub z: Vec<Matrix<TRat>>,
}

/// Where an identity of [`FundamentalSolution::residual_check`] fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidualFailure {
    NotEigenbasis,
    NotInverse,
    Entry { d: usize, row: usize, col: usize },
}

impl fmt::Display for ResidualFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidualFailure::NotEigenbasis => write!(f, "M_D(0) P != P diag(eigenvalues)"),
            ResidualFailure::NotInverse => write!(f, "P P^-1 != I"),
            ResidualFailure::Entry { d, row, col } => write!(f, "residual nonzero at q^{d}, entry ({row},{col})"),
        }
    }
}

fn first_nonzero(m: &Matrix<TRat>) -> Option<(usize, usize)> {
    (0..m.rows()).flat_map(|i| (0..m.cols()).map(move |j| (i, j))).find(|&(i, j)| !m.get(i, j).is_zero())
}

impl FundamentalSolution {
    pub fn residue(&self) -> &Matrix<TRat> {
        &self.coefficients[0]
    }

    /// `Y_d` in the Nakajima basis.
    pub fn y(&self, d: usize) -> Matrix<TRat> {
        self.p.matmul(&self.z[d]).matmul(&self.p_inv)
    }

    /// Verifies `q Y' + Y M_0 = M_D Y` through `q^order`.
    ///
    /// Checks `M_0 P = P Λ` and `P P^{-1} = I`, then the conjugated identity
    /// `d Z_d + Z_d Λ - Λ Z_d = Σ_{e=1}^{d} (P^{-1} M_e P) Z_{d-e}`; together they
    /// give the identity for `Y_d = P Z_d P^{-1}` without expanding it.
    pub fn residual_check(&self) -> Result<(), ResidualFailure> {
        let dim = self.basis.len();
        let lambda = Matrix::from_fn(dim, dim, |i, j| if i == j { self.eigenvalues[i].clone() } else { TRat::zero() });
        if !self.residue().matmul(&self.p).sub(&self.p.matmul(&lambda)).is_zero() {
            return Err(ResidualFailure::NotEigenbasis);
        }
        if self.p.matmul(&self.p_inv) != Matrix::identity(dim) {
            return Err(ResidualFailure::NotInverse);
        }
        let rotated: Vec<Matrix<TRat>> = self.coefficients.iter().map(|m| self.p_inv.matmul(m).matmul(&self.p)).collect();
        for d in 0..=self.order {
            let zd = &self.z[d];
            let mut r = zd.scale(&TRat::from_int(d as i64)).add(&zd.matmul(&lambda)).sub(&lambda.matmul(zd));
            for e in 1..=d {
                r = r.sub(&rotated[e].matmul(&self.z[d - e]));
            }
            if let Some((row, col)) = first_nonzero(&r) {
                return Err(ResidualFailure::Entry { d, row, col });
            }
        }
        Ok(())
    }

    /// The same identity evaluated directly on `Y_d` in the Nakajima basis.
    pub fn residual_check_expanded(&self) -> Result<(), ResidualFailure> {
        let y: Vec<Matrix<TRat>> = (0..=self.order).map(|d| self.y(d)).collect();
        for d in 0..=self.order {
            let mut r = y[d].scale(&TRat::from_int(d as i64)).add(&y[d].matmul(self.residue()));
            for e in 0..=d {
                r = r.sub(&self.coefficients[e].matmul(&y[d - e]));
            }
            if let Some((row, col)) = first_nonzero(&r) {
                return Err(ResidualFailure::Entry { d, row, col });
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mat = |m: &Matrix<TRat>| -> Vec<Vec<String>> {
            (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect()).collect()
        };
        serde_json::json!({
            "n": self.n,
            "order": self.order,
            "basis": self.basis.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "residue": mat(self.residue()),
            "Y": (0..=self.order).map(|d| mat(&self.y(d))).collect::<Vec<_>>(),
        })
    }
}

fn md_for(n: u32, at: Option<(&Rational, &Rational)>) -> Result<Matrix<QRat>, QdeError> {
    let md = md_cached(n);
    match at {
        None => Ok(md.matrix().clone()),
        Some((t1, t2)) => Ok(md.specialize(t1, t2).ok_or(QdeError::BadSpecialization)?.matrix().clone()),
    }
}

/// Solves for `Y_1, …, Y_order`; with `at = Some((t1, t2))` the equivariant
/// parameters are specialized first and resonances are reported.
pub fn formal_solution_at(n: u32, order: usize, at: Option<(&Rational, &Rational)>) -> Result<FundamentalSolution, QdeError> {
    let basis = Basis::new(n);
    let dim = basis.len();
    let md = md_for(n, at)?;
    let mut coefficients = vec![Matrix::<TRat>::zeros(dim, dim); order + 1];
    for i in 0..dim {
        for j in 0..dim {
            let ser = series_expand(md.get(i, j), order)?;
            for (e, c) in ser.coeffs().iter().enumerate() {
                coefficients[e].set(i, j, c.clone());
            }
        }
    }
    let spec = |p: &TPoly| -> Result<TRat, QdeError> {
        let t = TRat::from_poly(p.clone());
        match at {
            None => Ok(t),
            Some((t1, t2)) => Ok(TRat::rational(t.eval(t1, t2).ok_or(QdeError::BadSpecialization)?)),
        }
    };
    let eig = eigenbasis(n);
    let eigenvalues: Vec<TRat> = eig.iter().map(|(c, _)| spec(c)).collect::<Result<_, _>>()?;
    let cols: Vec<Vec<TRat>> =
        eig.iter().map(|(_, v)| v.iter().map(&spec).collect::<Result<Vec<_>, _>>()).collect::<Result<_, _>>()?;
    let p = Matrix::from_columns(&cols);
    let p_inv = p.inverse().map_err(|_| QdeError::BadSpecialization)?;
    // M_e is diagonal for e ≥ 1, so P^{-1} M_e P = P^{-1} (M_e P) is one product
    let rotated: Vec<Matrix<TRat>> = coefficients.iter().map(|m| p_inv.matmul(&m.matmul(&p))).collect();
    let mut z = vec![Matrix::<TRat>::identity(dim)];
    for d in 1..=order {
        let mut r = Matrix::<TRat>::zeros(dim, dim);
        for e in 1..=d {
            if !rotated[e].is_zero() {
                r = r.add(&rotated[e].matmul(&z[d - e]));
            }
        }
        let mut zd = Matrix::<TRat>::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                let rij = r.get(i, j);
                if rij.is_zero() {
                    continue;
                }
                let den = TRat::from_int(d as i64) + &eigenvalues[j] - &eigenvalues[i];
                if den.is_zero() {
                    return Err(QdeError::Resonance { d, i, j });
                }
                zd.set(i, j, rij.clone() / &den);
            }
        }
        z.push(zd);
    }
    Ok(FundamentalSolution { n, order, basis, coefficients, eigenvalues, p, p_inv, z })
}

/// Symbolic fundamental solution.
pub fn formal_solution(n: u32, order: usize) -> Result<FundamentalSolution, QdeError> {
    formal_solution_at(n, order, None)
}

/// A singular point of the equation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Singularity {
    Zero,
    Infinity,
    /// `q = -exp(2πi j/k)`, i.e. `-q` a primitive `k`-th root of unity.
    RootOfUnity { k: usize, j: usize },
}

impl Singularity {
    /// Position in the `q`-plane, if finite.
    pub fn point(&self) -> Option<(f64, f64)> {
        match self {
            Singularity::Zero => Some((0.0, 0.0)),
            Singularity::Infinity => None,
            Singularity::RootOfUnity { k, j } => {
                let a = 2.0 * std::f64::consts::PI * *j as f64 / *k as f64;
                Some((-a.cos(), -a.sin()))
            }
        }
    }
}

impl fmt::Display for Singularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Singularity::Zero => write!(f, "0"),
            Singularity::Infinity => write!(f, "infinity"),
            Singularity::RootOfUnity { k, j } => write!(f, "-exp(2*pi*i*{j}/{k})"),
        }
    }
}

/// `Φ_k(-q)` with coefficients in `Q[t1, t2]`.
fn cyclotomic_neg(k: usize) -> QPoly {
    let phi = UPoly::<Rational>::cyclotomic(k);
    UPoly::from_coeffs(
        phi.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| TPoly::monomial(if i % 2 == 0 { c.clone() } else { -c.clone() }, 0, 0))
            .collect(),
    )
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `{0, ∞}` together with every `q` with `-q` a primitive `k`-th root of
/// unity (`k ≤ n`) at which some reduced entry of `M_D` has a pole.
pub fn singularities(n: u32) -> Vec<Singularity> {
    singularities_at(n, None).expect("symbolic operator exists")
}

pub fn singularities_at(n: u32, at: Option<(&Rational, &Rational)>) -> Result<Vec<Singularity>, QdeError> {
    let md = md_for(n, at)?;
    let dim = md.rows();
    let mut out = vec![Singularity::Zero, Singularity::Infinity];
    for k in 1..=n as usize {
        let phi = cyclotomic_neg(k);
        let present = (0..dim).any(|i| (0..dim).any(|j| md.get(i, j).den().div_exact_poly(&phi).is_some()));
        if present {
            out.extend((1..=k).filter(|&j| gcd(j, k) == 1).map(|j| Singularity::RootOfUnity { k, j: j % k }));
        }
    }
    out.sort();
    Ok(out)
}

pub(crate) fn to_f64(r: &Rational) -> f64 {
    rational_to_f64(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn one_is_trivial() {
        let f = formal_solution(1, 5).unwrap();
        assert!((0..=5).all(|d| if d == 0 { f.y(d) == Matrix::identity(1) } else { f.y(d).is_zero() }));
    }

    #[test]
    fn residual_vanishes_small() {
        formal_solution(2, 6).unwrap().residual_check().unwrap();
        formal_solution(3, 3).unwrap().residual_check().unwrap();
        formal_solution(2, 3).unwrap().residual_check_expanded().unwrap();
        let (t1, t2) = (crate::exact::rat(3, 10), crate::exact::rat(41, 100));
        formal_solution_at(3, 8, Some((&t1, &t2))).unwrap().residual_check_expanded().unwrap();
    }

    #[test]
    fn two_coefficients_are_diagonal() {
        let f = formal_solution(2, 4).unwrap();
        let m = TRat::from_poly(TPoly::s().scale(&rat(-2, 1)));
        for e in 1..=4 {
            assert_eq!(*f.coefficients[e].get(0, 0), m);
            assert!(f.coefficients[e].get(0, 1).is_zero() && f.coefficients[e].get(1, 1).is_zero());
        }
    }

    #[test]
    fn resonance_detected() {
        // t1 = 2, t2 = 1: eigenvalues -2 and -1 differ by 1, and the q^1 forcing term is nonzero there
        let r = formal_solution_at(2, 3, Some((&rat(2, 1), &rat(1, 1))));
        assert_eq!(r.unwrap_err(), QdeError::Resonance { d: 1, i: 1, j: 0 });
        // at t2 = 0 the eigenvalues also differ by 1, but the forcing term vanishes
        formal_solution_at(2, 3, Some((&rat(1, 1), &rat(0, 1)))).unwrap().residual_check().unwrap();
    }

    #[test]
    fn singular_points() {
        assert_eq!(singularities(1), vec![Singularity::Zero, Singularity::Infinity]);
        assert_eq!(
            singularities(2),
            vec![Singularity::Zero, Singularity::Infinity, Singularity::RootOfUnity { k: 2, j: 1 }]
        );
        let three = singularities(3);
        assert!(three.contains(&Singularity::RootOfUnity { k: 3, j: 1 }));
        assert!(three.contains(&Singularity::RootOfUnity { k: 3, j: 2 }));
    }
}
