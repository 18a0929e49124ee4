//! Dense matrices over exact rings and fields.

use super::ring::{Field, GcdDomain, Ring};
use super::upoly::UPoly;
use super::ExactError;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<C> {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl<C: Ring> Matrix<C> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![C::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_columns(cols: &[Vec<C>]) -> Self {
        let n = cols.first().map_or(0, |c| c.len());
        Self::from_fn(n, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<C> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> Matrix<D> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<D: Ring, E>(&self, f: impl Fn(&C) -> Result<D, E>) -> Result<Matrix<D>, E> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|x| x.clone() * c)
    }

    pub fn mul_vec(&self, v: &[C]) -> Vec<C> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = C::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a.clone() * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b).collect(),
        }
    }

    /// Characteristic polynomial `det(x I - A)` by Berkowitz's division-free
    /// algorithm.
    pub fn charpoly(&self) -> UPoly<C> {
        assert_eq!(self.rows, self.cols, "charpoly of a non-square matrix");
        let n = self.rows;
        // coefficient vectors are stored highest degree first
        let mut c: Vec<C> = vec![C::one()];
        for r in 0..n {
            // leading principal r x r block A_r, column R (r entries), row S, scalar a
            let a = self.get(r, r).clone();
            let col: Vec<C> = (0..r).map(|i| self.get(i, r).clone()).collect();
            let row: Vec<C> = (0..r).map(|j| self.get(r, j).clone()).collect();
            // Toeplitz entries: 1, -a, -S R, -S A R, -S A^2 R, ...
            let mut t = Vec::with_capacity(r + 2);
            t.push(C::one());
            t.push(-a);
            let mut v = col.clone();
            for _ in 0..r {
                let sv = row.iter().zip(&v).fold(C::zero(), |acc, (x, y)| acc + x.clone() * y);
                t.push(-sv);
                v = (0..r)
                    .map(|i| (0..r).fold(C::zero(), |acc, j| acc + self.get(i, j).clone() * &v[j]))
                    .collect();
            }
            // new coefficient vector = T * c, T lower-triangular Toeplitz of size (r+2) x (r+1)
            let mut next = vec![C::zero(); r + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, cj) in c.iter().enumerate() {
                    if i >= j {
                        *slot = slot.clone() + t[i - j].clone() * cj;
                    }
                }
            }
            c = next;
        }
        c.reverse();
        UPoly::from_coeffs(c)
    }
}

impl<F: Field> Matrix<F> {
    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv().expect("nonzero pivot");
            for j in 0..self.cols {
                let v = self.get(r, j).clone() * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in 0..self.cols {
                    let b = self.get(r, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = self.get(i, j).clone() - f.clone() * b;
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Solve `A x = b` for square nonsingular `A`.
    pub fn solve(&self, b: &[F]) -> Result<Vec<F>, ExactError> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(b.len(), self.rows);
        let n = self.rows;
        let mut aug = Matrix::from_fn(n, n + 1, |i, j| if j < n { self.get(i, j).clone() } else { b[i].clone() });
        let piv = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(ExactError::Singular);
        }
        Ok((0..n).map(|i| aug.get(i, n).clone()).collect())
    }

    pub fn inverse(&self) -> Result<Self, ExactError> {
        let n = self.rows;
        let mut aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                F::one()
            } else {
                F::zero()
            }
        });
        let piv = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(ExactError::Singular);
        }
        Ok(Matrix::from_fn(n, n, |i, j| aug.get(i, n + j).clone()))
    }

    /// Basis of the right kernel.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let mut m = self.clone();
        let piv = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (r, &pc) in piv.iter().enumerate() {
                    v[pc] = -m.get(r, f).clone();
                }
                v
            })
            .collect()
    }

    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else { return F::zero() };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det = det * &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone() * &inv;
                for j in c..n {
                    let v = m.get(i, j).clone() - f.clone() * m.get(c, j);
                    m.set(i, j, v);
                }
            }
        }
        det
    }
}

/// Fraction-free (Bareiss) row echelon form over an integral domain.
///
/// Every intermediate entry is a minor of the input, so all divisions are
/// exact and no fractions appear. Returns the echelon matrix and pivot
/// columns.
pub fn bareiss_echelon<R: GcdDomain>(a: &Matrix<R>) -> (Matrix<R>, Vec<usize>) {
    let mut m = a.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = R::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
        if p != r {
            for j in 0..cols {
                m.data.swap(p * cols + j, r * cols + j);
            }
        }
        let piv = m.get(r, c).clone();
        for i in r + 1..rows {
            let f = m.get(i, c).clone();
            for j in 0..cols {
                let v = piv.clone() * m.get(i, j) - f.clone() * m.get(r, j);
                let v = v.div_exact(&prev).expect("Bareiss division is exact");
                m.set(i, j, v);
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

/// Kernel of a matrix over an integral domain, computed fraction-free and
/// returned with polynomial (denominator-free, primitive) entries.
///
/// Forward elimination is Bareiss; back substitution keeps a common
/// denominator so that each kernel vector is `(numerators, denominator)`
/// with all entries in the ring.
pub fn kernel_fraction_free<R: GcdDomain>(a: &Matrix<R>) -> Vec<Vec<R>> {
    let (m, piv) = bareiss_echelon(a);
    let free: Vec<usize> = (0..a.cols).filter(|c| !piv.contains(c)).collect();
    let mut out = Vec::new();
    for &f in &free {
        // Solve U x = 0 with x_f = 1 and other free variables 0; x = num / den.
        let mut num = vec![R::zero(); a.cols];
        let mut den = R::one();
        num[f] = R::one();
        for (r, &pc) in piv.iter().enumerate().rev() {
            // sum_j U[r][j] x_j = 0 for j >= pc, x_pc = -(sum_{j > pc} U[r][j] x_j) / U[r][pc]
            let mut acc = R::zero();
            for j in pc + 1..a.cols {
                if !num[j].is_zero() && !m.get(r, j).is_zero() {
                    acc = acc + m.get(r, j).clone() * &num[j];
                }
            }
            let upc = m.get(r, pc).clone();
            // x_pc = -acc / (den * upc); rescale everything by upc
            for x in num.iter_mut() {
                *x = x.clone() * &upc;
            }
            num[pc] = -acc;
            den = den * &upc;
            let g = num.iter().fold(R::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && !g.is_one() {
                for x in num.iter_mut() {
                    *x = x.div_exact(&g).expect("content divides");
                }
            }
        }
        out.push(num);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, Rational, TPoly};

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_fn(rows.len(), rows[0].len(), |i, j| rat(rows[i][j], 1))
    }

    #[test]
    fn berkowitz_matches_2x2_formula() {
        let a = qm(&[&[1, 2], &[3, 4]]);
        // x^2 - 5x - 2
        assert_eq!(a.charpoly().coeffs(), &[rat(-2, 1), rat(-5, 1), rat(1, 1)][..]);
    }

    #[test]
    fn berkowitz_3x3_against_det() {
        let a = qm(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        let p = a.charpoly();
        for x in -3..4 {
            let xi = Matrix::<Rational>::identity(3).scale(&rat(x, 1)).sub(&a);
            assert_eq!(p.eval(&rat(x, 1)), xi.det());
        }
    }

    #[test]
    fn solve_and_inverse() {
        let a = qm(&[&[2, 1], &[1, 3]]);
        let x = a.solve(&[rat(3, 1), rat(5, 1)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![rat(3, 1), rat(5, 1)]);
        assert_eq!(a.matmul(&a.inverse().unwrap()), Matrix::identity(2));
        assert!(qm(&[&[1, 2], &[2, 4]]).solve(&[rat(1, 1), rat(1, 1)]).is_err());
    }

    #[test]
    fn fraction_free_kernel_over_polynomials() {
        // [[t1, t2], [t1 t2, t2^2]] has kernel spanned by (t2, -t1)
        let t1 = TPoly::t1();
        let t2 = TPoly::t2();
        let a = Matrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => t1.clone(),
            (0, 1) => t2.clone(),
            (1, 0) => t1.clone() * &t2,
            _ => t2.clone() * &t2,
        });
        let k = kernel_fraction_free(&a);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        assert!(v.iter().any(|x| !x.is_zero()));
    }
}
