//! The divisor operator on Fock space, its classical limit, the
//! Calogero–Sutherland form, and the structural checks they satisfy.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::exact::linalg::Matrix;
use crate::exact::{series_expand, QRat, Rational, Ring, TPoly, TRat, UPoly};
use crate::fock::{norm, FockVector, Scalar};
use crate::partitions::{Basis, Partition};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CheckFailure {
    #[error("n={n}: {what} fails at ({row}, {col}): {detail}")]
    Entry { n: u32, what: &'static str, row: Partition, col: Partition, detail: String },
    #[error("n={n}: {what}: {detail}")]
    Other { n: u32, what: &'static str, detail: String },
}

/// Operator on the energy-`n` block, column convention: entry `(μ, ν)` is the
/// coefficient of `|μ⟩` in the image of `|ν⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix<C = QRat> {
    basis: Basis,
    entries: Matrix<C>,
}

impl<C: Scalar> OperatorMatrix<C> {
    pub fn new(basis: Basis, entries: Matrix<C>) -> Self {
        assert_eq!(entries.rows(), basis.len());
        OperatorMatrix { basis, entries }
    }

    pub fn n(&self) -> u32 {
        self.basis.n()
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn matrix(&self) -> &Matrix<C> {
        &self.entries
    }

    pub fn entry(&self, mu: &Partition, nu: &Partition) -> &C {
        let i = self.basis.index_of(mu).expect("partition in basis");
        let j = self.basis.index_of(nu).expect("partition in basis");
        self.entries.get(i, j)
    }

    pub fn apply(&self, v: &FockVector<C>) -> FockVector<C> {
        FockVector::from_coords(&self.basis, &self.entries.mul_vec(&v.coords(&self.basis)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let basis: Vec<String> = self.basis.iter().map(|p| p.to_string()).collect();
        let rows: Vec<Vec<String>> = (0..self.entries.rows())
            .map(|i| (0..self.entries.cols()).map(|j| self.entries.get(i, j).to_string()).collect())
            .collect();
        json!({ "n": self.n(), "basis": basis, "entries": rows })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,value\n");
        for (i, mu) in self.basis.iter().enumerate() {
            for (j, nu) in self.basis.iter().enumerate() {
                out.push_str(&format!("\"{mu}\",\"{nu}\",\"{}\"\n", self.entries.get(i, j)));
            }
        }
        out
    }
}

impl OperatorMatrix<QRat> {
    /// Value at `q = 0`.
    pub fn at_q0(&self) -> OperatorMatrix<TRat> {
        OperatorMatrix {
            basis: self.basis.clone(),
            entries: self.entries.map(|c| c.at_q0().expect("entries are regular at q = 0")),
        }
    }

    /// Specialize `(t1, t2)` to rationals, keeping `q` exact.
    pub fn specialize(&self, t1: &Rational, t2: &Rational) -> Option<Self> {
        let entries = self.entries.try_map(|c| c.specialize(t1, t2).ok_or(()));
        entries.ok().map(|entries| OperatorMatrix { basis: self.basis.clone(), entries })
    }
}

impl<C: Scalar> fmt::Display for OperatorMatrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, nu) in self.basis.iter().enumerate() {
            for (i, mu) in self.basis.iter().enumerate() {
                let c = self.entries.get(i, j);
                if !c.is_zero() {
                    writeln!(f, "{mu} <- {nu}: {c}")?;
                }
            }
        }
        Ok(())
    }
}

/// `R_k(q) = ((-q)^k + 1) / ((-q)^k - 1)`.
pub fn r_k(k: u32) -> QRat {
    let x = QRat::neg_q_pow(k as usize);
    (x.clone() + QRat::one()) / (x - QRat::one())
}

/// Operator `Σ_k diag(k) α_{-k} α_k + Σ_{k,l} [split α_{k+l} α_{-k} α_{-l} + join α_{-k-l} α_k α_l]`
/// on the energy-`n` block, evaluated term by term through `α`.
fn quadratic_cubic<C: Scalar>(n: u32, diag: impl Fn(u32) -> C + Sync, split: &C, join: &C) -> Matrix<C> {
    let basis = Basis::new(n);
    let columns: Vec<Vec<C>> = basis
        .partitions()
        .par_iter()
        .map(|nu| {
            let v = FockVector::<C>::basis(nu.clone());
            let mut out = FockVector::<C>::zero(n);
            for k in 1..=n as i32 {
                let w = v.alpha_word(&[-k, k]);
                if !w.is_zero() {
                    out = out.add(&w.scale(&diag(k as u32))).expect("same energy");
                }
            }
            for k in 1..n as i32 {
                for l in 1..=(n as i32 - k) {
                    if !split.is_zero() {
                        let w = v.alpha_word(&[k + l, -k, -l]);
                        out = out.add(&w.scale(split)).expect("same energy");
                    }
                    if !join.is_zero() {
                        let w = v.alpha_word(&[-k - l, k, l]);
                        out = out.add(&w.scale(join)).expect("same energy");
                    }
                }
            }
            out.coords(&basis)
        })
        .collect();
    Matrix::from_columns(&columns)
}

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

/// The operator `M` restricted to energy `n`.
pub fn build_m(n: u32) -> OperatorMatrix {
    let s = QRat::from_tpoly(TPoly::s());
    let diag = |k: u32| s.clone() * &QRat::from_rational(Rational::from_integer(k.into()) * half()) * &r_k(k);
    let split = QRat::from_tpoly(TPoly::t1t2().scale(&half()));
    let join = QRat::from_rational(-half());
    let basis = Basis::new(n);
    let entries = if n == 0 { Matrix::zeros(1, 1) } else { quadratic_cubic(n, diag, &split, &join) };
    OperatorMatrix::new(basis, entries)
}

/// Quantum multiplication by the divisor: `M - ((t1+t2)/2) R_1 n`.
pub fn build_md(n: u32) -> OperatorMatrix {
    let m = build_m(n);
    let shift = QRat::from_tpoly(TPoly::s().scale(&Rational::from_integer(n.into()))) * &QRat::from_rational(half()) * &r_k(1);
    let dim = m.basis.len();
    let entries = m.entries.sub(&Matrix::<QRat>::identity(dim).scale(&shift));
    OperatorMatrix::new(m.basis, entries)
}

/// Shared, lazily built `M_D` per `n`.
pub fn md_cached(n: u32) -> Arc<OperatorMatrix> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<OperatorMatrix>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(m) = cache.lock().expect("cache lock").get(&n) {
        return m.clone();
    }
    let m = Arc::new(build_md(n));
    cache.lock().expect("cache lock").entry(n).or_insert(m).clone()
}

/// `M_D(0)` with polynomial entries.
pub fn md0_poly(n: u32) -> Matrix<TPoly> {
    md_cached(n)
        .at_q0()
        .entries
        .map(|c| c.as_poly().cloned().expect("M_D(0) has polynomial entries"))
}

/// `Δ_CS = ((1-θ)/2) Σ k α_{-k} α_k + ½ Σ [α_{-k-l} α_k α_l + θ α_{k+l} α_{-k} α_{-l}]`.
pub fn build_cs(n: u32, theta: &TRat) -> OperatorMatrix<TRat> {
    let a = (TRat::one() - theta.clone()) * &TRat::rational(half());
    let diag = |k: u32| a.clone() * &TRat::from_int(k as i64);
    let split = theta.clone() * &TRat::rational(half());
    let join = TRat::rational(half());
    let entries = if n == 0 { Matrix::zeros(1, 1) } else { quadratic_cubic(n, diag, &split, &join) };
    OperatorMatrix::new(Basis::new(n), entries)
}

fn pow_signed(x: &TRat, e: i64) -> TRat {
    let p = x.pow(e.unsigned_abs() as u32);
    if e >= 0 {
        p
    } else {
        p.recip().expect("nonzero base")
    }
}

/// Checks `M(0)_{μν} = -x^{1+ℓ(μ)-ℓ(ν)} (Δ_CS)_{μν}` at `θ = -y/x` for
/// `(x, y) = (t1, t2)`, and with `swapped` for `(t2, t1)`. Returns the
/// difference matrix on failure.
fn cs_identity(n: u32, swapped: bool) -> Result<(), Matrix<TRat>> {
    let (x, y) = if swapped { (TRat::t2(), TRat::t1()) } else { (TRat::t1(), TRat::t2()) };
    let theta = -(y / x.clone());
    let cs = build_cs(n, &theta);
    let m0 = build_m(n).at_q0();
    let basis = m0.basis.clone();
    let diff = Matrix::from_fn(basis.len(), basis.len(), |i, j| {
        let e = 1 + basis.get(i).len() as i64 - basis.get(j).len() as i64;
        m0.entries.get(i, j).clone() + pow_signed(&x, e) * cs.entries.get(i, j)
    });
    if diff.is_zero() {
        Ok(())
    } else {
        Err(diff)
    }
}

/// Calogero–Sutherland conjugation identity at `θ = -t2/t1`.
pub fn cs_check(n: u32) -> Result<(), Matrix<TRat>> {
    cs_identity(n, false)
}

/// The dual form at `θ = -t1/t2`, plus the `t1 ↔ t2` symmetry of `M(0)`.
pub fn cs_duality_check(n: u32) -> Result<(), Matrix<TRat>> {
    cs_identity(n, true)?;
    let m0 = build_m(n).at_q0();
    let swapped = m0.entries.map(|c| c.swap());
    if swapped == m0.entries {
        Ok(())
    } else {
        Err(swapped.sub(&m0.entries))
    }
}

/// `lim M_D / (t1 + t2)`: diagonal, `t`-free, entry for μ equal to
/// `Σ_i μ_i [(μ_i/2) R_{μ_i} - R_1/2]`.
pub fn limiting_operator(n: u32) -> OperatorMatrix {
    let basis = Basis::new(n);
    let dim = basis.len();
    let mut entries = Matrix::zeros(dim, dim);
    for (i, mu) in basis.iter().enumerate() {
        let mut acc = QRat::zero();
        for &p in mu.parts() {
            let p_q = QRat::from_rational(Rational::from_integer(p.into()));
            let term = p_q.clone() * &QRat::from_rational(half()) * &r_k(p) - QRat::from_rational(half()) * &r_k(1);
            acc = acc + p_q * &term;
        }
        entries.set(i, i, acc);
    }
    OperatorMatrix::new(basis, entries)
}

/// Pairwise distinctness of the limiting operator's diagonal.
pub fn limiting_distinct(n: u32) -> Result<(), CheckFailure> {
    let l = limiting_operator(n);
    let b = l.basis();
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            if l.entries.get(i, i) == l.entries.get(j, j) {
                return Err(CheckFailure::Entry {
                    n,
                    what: "limiting eigenvalue distinctness",
                    row: b.get(i).clone(),
                    col: b.get(j).clone(),
                    detail: l.entries.get(i, i).to_string(),
                });
            }
        }
    }
    Ok(())
}

/// First non-integral coefficient found by [`integrality_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralityViolation {
    pub row: Partition,
    pub col: Partition,
    pub power: usize,
    pub coefficient: String,
}

/// Every `q^d` coefficient (`d ≤ order`) of every entry of `M_D` is in `Z[t1, t2]`.
pub fn integrality_check(n: u32, order: usize) -> Result<(), IntegralityViolation> {
    let md = md_cached(n);
    let b = md.basis();
    for i in 0..b.len() {
        for j in 0..b.len() {
            let ser = series_expand(md.entries.get(i, j), order).expect("regular at q = 0");
            for (d, c) in ser.coeffs().iter().enumerate() {
                if !c.is_integral_poly() {
                    return Err(IntegralityViolation {
                        row: b.get(i).clone(),
                        col: b.get(j).clone(),
                        power: d,
                        coefficient: c.to_string(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// `⟨μ|μ⟩ (M_D)_{μν} = ⟨ν|ν⟩ (M_D)_{νμ}`.
pub fn self_adjoint_check(n: u32) -> Result<(), CheckFailure> {
    let md = md_cached(n);
    let b = md.basis();
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            let lhs = QRat::from_trat(&norm(b.get(i))) * md.entries.get(i, j);
            let rhs = QRat::from_trat(&norm(b.get(j))) * md.entries.get(j, i);
            if lhs != rhs {
                return Err(CheckFailure::Entry {
                    n,
                    what: "self-adjointness",
                    row: b.get(i).clone(),
                    col: b.get(j).clone(),
                    detail: format!("{lhs} != {rhs}"),
                });
            }
        }
    }
    Ok(())
}

/// Off-diagonal entries do not depend on `q`.
pub fn offdiag_q_free_check(n: u32) -> Result<(), CheckFailure> {
    let md = md_cached(n);
    let b = md.basis();
    for i in 0..b.len() {
        for j in 0..b.len() {
            if i != j && !md.entries.get(i, j).is_q_free() {
                return Err(CheckFailure::Entry {
                    n,
                    what: "off-diagonal q-independence",
                    row: b.get(i).clone(),
                    col: b.get(j).clone(),
                    detail: md.entries.get(i, j).to_string(),
                });
            }
        }
    }
    Ok(())
}

/// Normalized `q^d` coefficient of the diagonal of `M_D` at μ: the rational
/// `γ` with `⟨μ|M_D|μ⟩_d = γ (t1 + t2) ⟨μ|μ⟩`. Fails if the coefficient does not
/// have that shape.
pub fn normalized_diagonal(mu: &Partition, order: usize) -> Result<Vec<Rational>, CheckFailure> {
    let n = mu.size();
    let md = md_cached(n);
    let bracket = QRat::from_trat(&norm(mu)) * md.entry(mu, mu);
    let ser = series_expand(&bracket, order).expect("regular at q = 0");
    let shape = TRat::from_poly(TPoly::s()) * &norm(mu);
    let mut out = Vec::with_capacity(order);
    for d in 1..=order {
        let ratio = ser.coeff(d).clone() / shape.clone();
        match ratio.as_rational() {
            Some(r) => out.push(r),
            None => {
                return Err(CheckFailure::Entry {
                    n,
                    what: "diagonal shape (t1+t2)(t1 t2)^{-l} Q",
                    row: mu.clone(),
                    col: mu.clone(),
                    detail: format!("q^{d}: {}", ser.coeff(d)),
                })
            }
        }
    }
    Ok(out)
}

/// Diagonal coefficients are additive over parts: γ_μ,d = Σ_i γ_(μ_i),d.
pub fn addition_formula_check(n: u32, order: usize) -> Result<(), CheckFailure> {
    let mut single: HashMap<u32, Vec<Rational>> = HashMap::new();
    for k in 1..=n {
        single.insert(k, normalized_diagonal(&Partition::new(vec![k]).expect("valid"), order)?);
    }
    for mu in Basis::new(n).iter() {
        let g = normalized_diagonal(mu, order)?;
        for d in 0..order {
            let sum: Rational = mu.parts().iter().map(|p| single[p][d].clone()).sum();
            if sum != g[d] {
                return Err(CheckFailure::Entry {
                    n,
                    what: "addition formula",
                    row: mu.clone(),
                    col: mu.clone(),
                    detail: format!("q^{}: {} != {}", d + 1, g[d], sum),
                });
            }
        }
    }
    Ok(())
}

/// `(M_D)_{μν} = 0` whenever `|ℓ(μ) - ℓ(ν)| > 1`.
pub fn length_constraint_check(n: u32) -> Result<(), CheckFailure> {
    let md = md_cached(n);
    let b = md.basis();
    for i in 0..b.len() {
        for j in 0..b.len() {
            if b.get(i).len().abs_diff(b.get(j).len()) > 1 && !md.entries.get(i, j).is_zero() {
                return Err(CheckFailure::Entry {
                    n,
                    what: "length constraint",
                    row: b.get(i).clone(),
                    col: b.get(j).clone(),
                    detail: md.entries.get(i, j).to_string(),
                });
            }
        }
    }
    Ok(())
}

/// `Π_λ (x + c(λ))`.
pub fn content_polynomial(n: u32) -> UPoly<TPoly> {
    Basis::new(n)
        .iter()
        .fold(UPoly::one(), |acc, l| acc * UPoly::from_coeffs(vec![l.content(), TPoly::one()]))
}

/// `det(x - M_D(0)) = Π_λ (x + c(λ))`.
pub fn classical_eigenvalue_check(n: u32) -> Result<(), CheckFailure> {
    let cp = md0_poly(n).charpoly();
    let expected = content_polynomial(n);
    if cp == expected {
        Ok(())
    } else {
        Err(CheckFailure::Other { n, what: "classical characteristic polynomial", detail: format!("{:?}", cp.coeffs()) })
    }
}
