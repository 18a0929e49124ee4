//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use hilbq::exact::{QRat, Rational, Ring, TPoly, TRat};
use hilbq::partitions::Partition;
use num_bigint::BigInt;

pub fn r(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn p(v: &[u32]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

/// All partitions of `n`, largest parts first, built by plain recursion.
pub fn partitions(n: u32) -> Vec<Partition> {
    fn go(n: u32, max: u32, acc: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition::new(acc.clone()).unwrap());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            acc.push(k);
            go(n - k, k, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn z(mu: &Partition) -> Rational {
    let mut acc = BigInt::from(1);
    let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
    for &k in mu.parts() {
        *counts.entry(k).or_default() += 1;
    }
    for (k, m) in counts {
        for i in 1..=m {
            acc *= BigInt::from(k) * BigInt::from(i);
        }
    }
    Rational::from_integer(acc)
}

/// `⟨μ|μ⟩ = (-1)^{|μ|-ℓ} / ((t1 t2)^ℓ z(μ))`.
pub fn gram(mu: &Partition) -> TRat {
    let l = mu.parts().len() as u32;
    let n: u32 = mu.parts().iter().sum();
    let sign = if (n - l) % 2 == 0 { 1 } else { -1 };
    let num = TPoly::constant(Rational::from_integer(sign.into()) / z(mu));
    TRat::new(num, TPoly::t1t2().powi(l))
}

/// `Σ_{boxes (i, j)} (j-1) t1 + (i-1) t2`.
pub fn content(lambda: &Partition, t1: &Rational, t2: &Rational) -> Rational {
    let mut acc = r(0, 1);
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row {
            acc += t1.clone() * Rational::from_integer(j.into()) + t2.clone() * Rational::from_integer(i.into());
        }
    }
    acc
}

/// χ^λ_μ from the Frobenius formula: the coefficient of `x^{λ+δ}` in `a_δ p_μ`.
pub fn frobenius_character(lambda: &Partition, mu: &Partition) -> i64 {
    let l = lambda.parts().len();
    let delta: Vec<i64> = (0..l).map(|i| (l - 1 - i) as i64).collect();
    let target: Vec<i64> = lambda.parts().iter().zip(&delta).map(|(&a, &d)| a as i64 + d).collect();
    let mut total = 0i64;
    permutations(l, &mut |perm, sign| {
        let alpha: Vec<i64> = (0..l).map(|i| target[i] - delta[perm[i]]).collect();
        if alpha.iter().all(|&a| a >= 0) {
            let mut memo = HashMap::new();
            total += sign * power_sum_coefficient(mu.parts(), 0, alpha, &mut memo);
        }
    });
    total
}

/// Number of ways to distribute the parts over variables so that the
/// exponent vector is exactly `alpha`.
fn power_sum_coefficient(parts: &[u32], i: usize, alpha: Vec<i64>, memo: &mut HashMap<(usize, Vec<i64>), i64>) -> i64 {
    if i == parts.len() {
        return if alpha.iter().all(|&a| a == 0) { 1 } else { 0 };
    }
    if let Some(&v) = memo.get(&(i, alpha.clone())) {
        return v;
    }
    let k = parts[i] as i64;
    let mut acc = 0;
    for j in 0..alpha.len() {
        if alpha[j] >= k {
            let mut next = alpha.clone();
            next[j] -= k;
            acc += power_sum_coefficient(parts, i + 1, next, memo);
        }
    }
    memo.insert((i, alpha), acc);
    acc
}

fn permutations(n: usize, f: &mut dyn FnMut(&[usize], i64)) {
    fn go(k: usize, perm: &mut Vec<usize>, used: &mut Vec<bool>, sign: i64, f: &mut dyn FnMut(&[usize], i64)) {
        let n = used.len();
        if k == n {
            f(perm, sign);
            return;
        }
        for v in 0..n {
            if used[v] {
                continue;
            }
            // inversions added by placing v after the chosen prefix
            let inv = perm.iter().filter(|&&u| u > v).count();
            used[v] = true;
            perm.push(v);
            go(k + 1, perm, used, if inv % 2 == 0 { sign } else { -sign }, f);
            perm.pop();
            used[v] = false;
        }
    }
    go(0, &mut Vec::new(), &mut vec![false; n], 1, f);
}

/// A symmetric function in power sums: `p_μ ↦ coefficient`.
type PowerSum = BTreeMap<Vec<u32>, QRat>;

fn add_to(acc: &mut PowerSum, key: Vec<u32>, c: QRat) {
    let mut key = key;
    key.sort_unstable_by(|a, b| b.cmp(a));
    let e = acc.entry(key).or_insert_with(QRat::zero);
    *e = e.clone() + c;
}

/// `k ∂/∂p_k`.
fn d(f: &PowerSum, k: u32) -> PowerSum {
    let mut out = PowerSum::new();
    for (mu, c) in f {
        let m = mu.iter().filter(|&&x| x == k).count();
        if m == 0 {
            continue;
        }
        let mut nu = mu.clone();
        let pos = nu.iter().position(|&x| x == k).unwrap();
        nu.remove(pos);
        add_to(&mut out, nu, c.clone() * QRat::from_rational(Rational::from_integer((m as u64 * k as u64).into())));
    }
    out
}

/// Multiplication by `p_k`.
fn mul(f: &PowerSum, k: u32) -> PowerSum {
    let mut out = PowerSum::new();
    for (mu, c) in f {
        let mut nu = mu.clone();
        nu.push(k);
        add_to(&mut out, nu, c.clone());
    }
    out
}

fn scale_into(acc: &mut PowerSum, f: &PowerSum, c: &QRat) {
    for (k, v) in f {
        add_to(acc, k.clone(), v.clone() * c);
    }
}

fn r_k(k: u32) -> QRat {
    let x = QRat::neg_q_pow(k as usize);
    (x.clone() + QRat::one()) / (x - QRat::one())
}

/// Matrix of quantum multiplication by the divisor, computed on symmetric
/// functions with `α_{-k} = p_k` and `α_k = k ∂/∂p_k`, so that
/// `|μ⟩ = p_μ / z(μ)`. Entry `[i][j]` is the coefficient of `|basis[i]⟩` in the
/// image of `|basis[j]⟩`.
pub fn md_power_sums(n: u32) -> (Vec<Partition>, Vec<Vec<QRat>>) {
    let basis = partitions(n);
    let s = QRat::from_tpoly(TPoly::s());
    let t1t2 = QRat::from_tpoly(TPoly::t1t2());
    let half = QRat::from_rational(r(1, 2));
    let mut cols = Vec::new();
    for nu in &basis {
        let mut f = PowerSum::new();
        f.insert(nu.parts().to_vec(), QRat::from_rational(Rational::from_integer(1.into()) / z(nu)));
        let mut out = PowerSum::new();
        for k in 1..=n {
            let c = s.clone() * QRat::from_rational(Rational::from_integer(k.into())) * &half * &r_k(k);
            scale_into(&mut out, &mul(&d(&f, k), k), &c);
        }
        for k in 1..n {
            for l in 1..=n - k {
                scale_into(&mut out, &d(&mul(&mul(&f, l), k), k + l), &(t1t2.clone() * &half));
                scale_into(&mut out, &mul(&d(&d(&f, l), k), k + l), &(-half.clone()));
            }
        }
        let shift = s.clone() * &half * &r_k(1) * QRat::from_rational(Rational::from_integer(n.into()));
        scale_into(&mut out, &f, &(-shift));
        cols.push(
            basis
                .iter()
                .map(|mu| out.get(mu.parts()).cloned().unwrap_or_else(QRat::zero) * QRat::from_rational(z(mu)))
                .collect::<Vec<_>>(),
        );
    }
    let dim = basis.len();
    let rows = (0..dim).map(|i| (0..dim).map(|j| cols[j][i].clone()).collect()).collect();
    (basis, rows)
}

/// Determinant over `Q` by Gaussian elimination.
pub fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut acc = r(1, 1);
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| m[i][c] != r(0, 1)) else {
            return r(0, 1);
        };
        if piv != c {
            m.swap(piv, c);
            acc = -acc;
        }
        acc *= m[c][c].clone();
        for i in c + 1..n {
            let f = m[i][c].clone() / m[c][c].clone();
            for j in c..n {
                let v = m[c][j].clone() * f.clone();
                m[i][j] -= v;
            }
        }
    }
    acc
}
