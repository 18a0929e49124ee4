//! Fixed-point classes: eigenvectors of classical multiplication by the
//! divisor, normalized to have coefficient 1 on `|1^n⟩`.

use rayon::prelude::*;
use thiserror::Error;

use crate::exact::linalg::{kernel_fraction_free, Matrix};
use crate::exact::{s_expand, ExactError, Rational, TPoly, TRat};
use crate::fock::FockVector;
use crate::operators::md0_poly;
use crate::partitions::{Basis, CharacterTable, Partition};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JackError {
    #[error("eigenvalue -c({0}) has a {1}-dimensional eigenspace")]
    EigenvalueCollision(Partition, usize),
    #[error("eigenvector for {0} vanishes on |1^n>")]
    NotMonic(Partition),
    #[error("Schur specialization of J^{lambda} fails at {mu}: got {got}, expected {expected}")]
    SchurMismatch { lambda: Partition, mu: Partition, got: String, expected: String },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct JackVector {
    pub lambda: Partition,
    pub vector: FockVector<TRat>,
    pub eigenvalue: TPoly,
}

impl JackVector {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "lambda": self.lambda.to_string(),
            "eigenvalue": self.eigenvalue.to_string(),
            "vector": self.vector.to_json(),
        })
    }
}

fn jack_from_matrix(m0: &Matrix<TPoly>, basis: &Basis, lambda: &Partition) -> Result<JackVector, JackError> {
    let c = lambda.content();
    let shifted = m0.add(&Matrix::identity(basis.len()).scale(&c));
    let ker = kernel_fraction_free(&shifted);
    if ker.len() != 1 {
        return Err(JackError::EigenvalueCollision(lambda.clone(), ker.len()));
    }
    let v = &ker[0];
    let unit = basis.index_of(&Partition::ones(basis.n())).expect("unit in basis");
    if v[unit].is_zero() {
        return Err(JackError::NotMonic(lambda.clone()));
    }
    let coords: Vec<TRat> = v.iter().map(|x| TRat::new(x.clone(), v[unit].clone())).collect();
    Ok(JackVector { lambda: lambda.clone(), vector: FockVector::from_coords(basis, &coords), eigenvalue: -c })
}

/// The monic eigenvector of `M_D(0)` with eigenvalue `-c(λ)`.
pub fn jack_vector(lambda: &Partition) -> Result<JackVector, JackError> {
    let n = lambda.size();
    jack_from_matrix(&md0_poly(n), &Basis::new(n), lambda)
}

/// All fixed-point classes of energy `n`, in canonical order of λ.
pub fn jack_basis(n: u32) -> Result<Vec<JackVector>, JackError> {
    let m0 = md0_poly(n);
    let basis = Basis::new(n);
    basis.partitions().par_iter().map(|l| jack_from_matrix(&m0, &basis, l)).collect()
}

/// A basis of eigenvectors of `M_D(0)` with their eigenvalues, one kernel
/// basis per distinct content; columns are polynomial (not normalized).
pub fn eigenbasis(n: u32) -> Vec<(TPoly, Vec<TPoly>)> {
    let m0 = md0_poly(n);
    let basis = Basis::new(n);
    let mut contents: Vec<TPoly> = Vec::new();
    for l in basis.iter() {
        let c = l.content();
        if !contents.contains(&c) {
            contents.push(c);
        }
    }
    contents
        .par_iter()
        .flat_map_iter(|c| {
            let shifted = m0.add(&Matrix::identity(basis.len()).scale(c));
            kernel_fraction_free(&shifted).into_iter().map(move |v| (-c.clone(), v))
        })
        .collect()
}

/// `(-1)^n n! t1^{2n} J^λ`, the scale under which `J^λ` specializes at
/// `t2 = -t1` to `Σ_μ ((-1)^n n!/dim λ) χ^λ_μ t1^{n+ℓ(μ)} |μ⟩`.
pub fn scaled_jack(j: &JackVector) -> FockVector<TRat> {
    let n = j.lambda.size();
    let fact: Rational = (1..=n).map(|k| Rational::from_integer(k.into())).product();
    let sign = if n % 2 == 0 { fact } else { -fact };
    let c = TRat::from_poly(TPoly::monomial(sign, 2 * n as usize, 0));
    j.vector.scale(&c)
}

/// At `t2 = -t1` the monic `J^λ` becomes `Σ_μ (χ^λ_μ / dim λ) t1^{ℓ(μ)-n} |μ⟩`.
pub fn schur_specialization_check(lambda: &Partition) -> Result<(), JackError> {
    let j = jack_vector(lambda)?;
    let n = lambda.size();
    let table = CharacterTable::new(n);
    let dim = Rational::from_integer(lambda.dimension());
    for mu in Basis::new(n).iter() {
        let coeff = j.vector.coeff(mu);
        let exp = s_expand(&coeff, 0)?;
        let got = exp.coeff(0);
        let chi = Rational::from_integer(table.value(lambda, mu).expect("in table").into());
        let e = mu.len() as i64 - n as i64;
        let t1e = if e >= 0 {
            TRat::from_poly(TPoly::t1().powi(e as u32))
        } else {
            TRat::new(TPoly::one(), TPoly::t1().powi((-e) as u32))
        };
        let expected = t1e * &TRat::rational(chi / dim.clone());
        if exp.laurent_offset() != 0 || got != expected {
            return Err(JackError::SchurMismatch {
                lambda: lambda.clone(),
                mu: mu.clone(),
                got: if exp.laurent_offset() != 0 { format!("pole of order {}", exp.laurent_offset()) } else { got.to_string() },
                expected: expected.to_string(),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_trat, Ring};
    use crate::fock::gram_pair;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn small_jacks() {
        let j = jack_vector(&p(&[1])).unwrap();
        assert_eq!(j.vector, FockVector::basis(p(&[1])));
        let j = jack_vector(&p(&[2])).unwrap();
        assert_eq!(j.vector.coeff(&p(&[2])), parse_trat("-1/t2").unwrap());
        assert_eq!(j.vector.coeff(&p(&[1, 1])), TRat::one());
        assert_eq!(j.eigenvalue, -TPoly::t1());
        let j = jack_vector(&p(&[1, 1])).unwrap();
        assert_eq!(j.vector.coeff(&p(&[2])), parse_trat("-1/t1").unwrap());
        assert_eq!(j.eigenvalue, -TPoly::t2());
    }

    #[test]
    fn schur_small() {
        for n in 1..=4 {
            for l in Basis::new(n).iter() {
                schur_specialization_check(l).unwrap();
            }
        }
    }

    #[test]
    fn symbolic_collisions_first_appear_at_six() {
        for n in 1..=5 {
            assert!(jack_basis(n).is_ok(), "n={n}");
        }
        let collide: Vec<Partition> = Basis::new(6)
            .iter()
            .filter(|l| matches!(jack_vector(l), Err(JackError::EigenvalueCollision(_, 2))))
            .cloned()
            .collect();
        assert_eq!(collide, vec![p(&[4, 1, 1]), p(&[3, 3]), p(&[3, 1, 1, 1]), p(&[2, 2, 2])]);
        assert_eq!(p(&[4, 1, 1]).content(), p(&[3, 3]).content());
        assert_eq!(p(&[3, 1, 1, 1]).content(), p(&[2, 2, 2]).content());
        assert_eq!(eigenbasis(6).len(), 11);
    }

    #[test]
    fn duality_and_orthogonality() {
        for n in 2..=4 {
            let js = jack_basis(n).unwrap();
            for (a, ja) in js.iter().enumerate() {
                let conj = jack_vector(&ja.lambda.conjugate()).unwrap();
                assert_eq!(ja.vector.map(|c| c.swap()), conj.vector);
                for jb in &js[a + 1..] {
                    assert!(gram_pair(&ja.vector, &jb.vector).unwrap().is_zero());
                }
            }
        }
    }
}
