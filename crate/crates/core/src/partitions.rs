//! Integer partitions, the torus content function, and symmetric-group
//! characters via Murnaghan–Nakayama.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exact::{Rational, TPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("invalid partition '{0}': parts must be positive and weakly decreasing")]
    Invalid(String),
    #[error("size mismatch: |{0}| != |{1}|")]
    SizeMismatch(Partition, Partition),
}

/// Weakly decreasing list of positive parts.
///
/// `Ord` is the canonical enumeration order: reverse lexicographic, so
/// `[4] < [3,1] < [2,2] < [2,1,1] < [1,1,1,1]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self, PartitionError> {
        if parts.iter().any(|&p| p == 0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(PartitionError::Invalid(format!("{parts:?}")));
        }
        Ok(Partition(parts))
    }

    /// Sorts and drops zeros.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// `(k, 1^{n-k})`.
    pub fn hook(n: u32, k: u32) -> Self {
        assert!(k >= 1 && k <= n);
        let mut v = vec![k];
        v.extend(std::iter::repeat(1).take((n - k) as usize));
        Partition(v)
    }

    pub fn ones(n: u32) -> Self {
        Partition(vec![1; n as usize])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn multiplicity(&self, k: u32) -> usize {
        self.0.iter().filter(|&&p| p == k).count()
    }

    /// Pairs `(part, multiplicity)` in decreasing part order.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn with_part(&self, k: u32) -> Self {
        let mut v = self.0.clone();
        let pos = v.iter().position(|&p| p < k).unwrap_or(v.len());
        v.insert(pos, k);
        Partition(v)
    }

    pub fn without_part(&self, k: u32) -> Option<Self> {
        let pos = self.0.iter().position(|&p| p == k)?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some(Partition(v))
    }

    pub fn conjugate(&self) -> Self {
        let first = self.0.first().copied().unwrap_or(0);
        Partition((1..=first).map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32).collect())
    }

    /// `|Aut μ| · Π μ_i`.
    pub fn zmu(&self) -> BigInt {
        let mut z = BigInt::one();
        for (p, m) in self.multiplicities() {
            for i in 1..=m {
                z *= BigInt::from(i) * BigInt::from(p);
            }
        }
        z
    }

    pub fn zmu_rational(&self) -> Rational {
        Rational::from_integer(self.zmu())
    }

    /// Hook lengths of all boxes, row by row.
    pub fn hook_lengths(&self) -> Vec<u32> {
        let conj = self.conjugate();
        let mut out = Vec::new();
        for (i, &row) in self.0.iter().enumerate() {
            for j in 0..row as usize {
                out.push(row - j as u32 + conj.0[j] - i as u32 - 1);
            }
        }
        out
    }

    /// Dimension of the irreducible representation, by the hook length formula.
    pub fn dimension(&self) -> BigInt {
        let mut num = BigInt::one();
        for k in 2..=self.size() {
            num *= k;
        }
        let den = self.hook_lengths().into_iter().fold(BigInt::one(), |acc, h| acc * h);
        num / den
    }

    /// `c(λ; t1, t2) = Σ_{(i,j)∈λ} [(j-1) t1 + (i-1) t2]`.
    pub fn content(&self) -> TPoly {
        let mut a = 0i64;
        let mut b = 0i64;
        for (i, &p) in self.0.iter().enumerate() {
            let p = p as i64;
            a += p * (p - 1) / 2;
            b += i as i64 * p;
        }
        TPoly::monomial(Rational::from_integer(a.into()), 1, 0) + TPoly::monomial(Rational::from_integer(b.into()), 0, 1)
    }

    /// Beta numbers `λ_i + (len - i)` for a fixed bead count.
    fn beta(&self, beads: usize) -> Vec<u32> {
        (0..beads)
            .map(|i| self.0.get(i).copied().unwrap_or(0) + (beads - 1 - i) as u32)
            .collect()
    }

    fn from_beta(beta: &[u32]) -> Self {
        let mut b = beta.to_vec();
        b.sort_unstable_by(|x, y| y.cmp(x));
        let k = b.len();
        Partition::from_unsorted((0..k).map(|i| b[i] - (k - 1 - i) as u32).collect())
    }

    /// All partitions obtained by removing a rim hook of length `k`, with the
    /// sign `(-1)^{height}`.
    pub fn remove_rim_hooks(&self, k: u32) -> Vec<(Partition, i64)> {
        let beads = self.len();
        let beta = self.beta(beads);
        let mut out = Vec::new();
        for (idx, &b) in beta.iter().enumerate() {
            if b < k || beta.contains(&(b - k)) {
                continue;
            }
            let between = beta.iter().filter(|&&x| x > b - k && x < b).count();
            let mut nb = beta.clone();
            nb[idx] = b - k;
            let sign = if between % 2 == 0 { 1 } else { -1 };
            out.push((Partition::from_beta(&nb), sign));
        }
        out
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for Partition {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| PartitionError::Invalid(s.to_string()))?;
        if inner.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|x| x.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| PartitionError::Invalid(s.to_string()))?;
        Partition::new(parts).map_err(|_| PartitionError::Invalid(s.to_string()))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(d)?;
        Partition::new(v).map_err(serde::de::Error::custom)
    }
}

/// All partitions of `n` in canonical (reverse lexicographic) order.
pub fn enumerate(n: u32) -> Vec<Partition> {
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Canonically ordered partitions of `n` with a reverse index.
#[derive(Clone, Debug)]
pub struct Basis {
    n: u32,
    parts: Vec<Partition>,
    index: HashMap<Partition, usize>,
}

impl PartialEq for Basis {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl Basis {
    pub fn new(n: u32) -> Self {
        let parts = enumerate(n);
        let index = parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Basis { n, parts, index }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.parts
    }

    pub fn get(&self, i: usize) -> &Partition {
        &self.parts[i]
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Partition> {
        self.parts.iter()
    }
}

type CharMemo = HashMap<(Partition, Partition), i64>;

fn mn(lambda: &Partition, mu: &Partition, memo: &mut CharMemo) -> i64 {
    if mu.is_empty() {
        return if lambda.is_empty() { 1 } else { 0 };
    }
    let key = (lambda.clone(), mu.clone());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let k = mu.parts()[0];
    let rest = Partition(mu.parts()[1..].to_vec());
    let v = lambda
        .remove_rim_hooks(k)
        .into_iter()
        .map(|(sub, sign)| sign * mn(&sub, &rest, memo))
        .sum();
    memo.insert(key, v);
    v
}

/// `χ^λ_μ` by the Murnaghan–Nakayama rule.
pub fn character(lambda: &Partition, mu: &Partition) -> Result<i64, PartitionError> {
    if lambda.size() != mu.size() {
        return Err(PartitionError::SizeMismatch(lambda.clone(), mu.clone()));
    }
    Ok(mn(lambda, mu, &mut HashMap::new()))
}

/// Full character table of `S_n`, rows λ and columns μ in canonical order.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    basis: Basis,
    values: Vec<i64>,
}

impl CharacterTable {
    pub fn new(n: u32) -> Self {
        let basis = Basis::new(n);
        let mut memo = HashMap::new();
        let mut values = Vec::with_capacity(basis.len() * basis.len());
        for l in basis.iter() {
            for m in basis.iter() {
                values.push(mn(l, m, &mut memo));
            }
        }
        CharacterTable { basis, values }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn value(&self, lambda: &Partition, mu: &Partition) -> Option<i64> {
        let i = self.basis.index_of(lambda)?;
        let j = self.basis.index_of(mu)?;
        Some(self.values[i * self.basis.len() + j])
    }

    pub fn value_at(&self, i: usize, j: usize) -> i64 {
        self.values[i * self.basis.len() + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn enumeration_order_and_counts() {
        assert_eq!(enumerate(0), vec![Partition::empty()]);
        let four: Vec<String> = enumerate(4).iter().map(|x| x.to_string()).collect();
        assert_eq!(four, ["[4]", "[3,1]", "[2,2]", "[2,1,1]", "[1,1,1,1]"]);
        let counts: Vec<usize> = (0..=10).map(|n| enumerate(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        let mut sorted = enumerate(6);
        sorted.reverse();
        sorted.sort();
        assert_eq!(sorted, enumerate(6));
    }

    #[test]
    fn zmu_values() {
        assert_eq!(p(&[2, 1]).zmu(), 2.into());
        assert_eq!(p(&[1, 1, 1]).zmu(), 6.into());
        assert_eq!(p(&[2, 2, 1]).zmu(), 8.into());
        assert_eq!(Partition::empty().zmu(), 1.into());
    }

    #[test]
    fn content_values() {
        assert!(p(&[1]).content().is_zero());
        assert_eq!(p(&[2]).content(), TPoly::t1());
        assert_eq!(p(&[1, 1]).content(), TPoly::t2());
        assert_eq!(p(&[2, 1]).content(), TPoly::s());
    }

    #[test]
    fn characters_examples() {
        assert_eq!(character(&p(&[2, 1]), &p(&[3])).unwrap(), -1);
        for n in 1..=6 {
            for mu in enumerate(n) {
                assert_eq!(character(&p(&[n]), &mu).unwrap(), 1);
            }
            if n >= 2 {
                assert_eq!(character(&Partition::hook(n, n - 1), &Partition::ones(n)).unwrap(), n as i64 - 1);
            }
        }
        assert!(character(&p(&[2]), &p(&[1])).is_err());
    }

    #[test]
    fn parse_and_display_roundtrip() {
        assert_eq!("[3,1,1]".parse::<Partition>().unwrap(), p(&[3, 1, 1]));
        assert_eq!("[]".parse::<Partition>().unwrap(), Partition::empty());
        assert!("[1,2]".parse::<Partition>().is_err());
        assert!("[0]".parse::<Partition>().is_err());
        assert_eq!(serde_json::to_string(&p(&[2, 1])).unwrap(), "[2,1]");
    }

    #[test]
    fn conjugate_and_hooks() {
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
        assert_eq!(p(&[3, 1]).dimension(), 3.into());
        assert_eq!(p(&[2, 2]).dimension(), 2.into());
        assert_eq!(p(&[3, 2]).content().eval(&rat(1, 1), &rat(0, 1)), rat(4, 1));
    }
}
