//! Multipoint genus-0 series from 3-point data.
//!
//! Brackets are Q(t1,t2)[[q]]-multilinear, so a basis insertion can be
//! replaced by its Krylov expansion `Σ_k c_k(q) D^{*k}`. A bracket with one
//! quantum power `D^{*k}` (k ≥ 2) is lowered by the associativity relation
//!
//! ```text
//! ⟨D^{*k}, λ, μ, S⟩ = Σ_{S1⊔S2=S} Σ_ν ⟨D, λ, S1, ν⟩ ⟨ν^∨, D^{*(k-1)}, μ, S2⟩
//!                   - Σ_{S1≠∅}    Σ_ν ⟨D, D^{*(k-1)}, S1, ν⟩ ⟨ν^∨, λ, μ, S2⟩
//! ```
//!
//! The divisor and unit axioms are only applied to brackets whose insertions
//! are all classical: `D^{*(k-1)}` depends on `q`, so `⟨D, D^{*(k-1)}, …⟩` is
//! lowered by the same relation instead.

use std::collections::HashMap;

use crate::exact::{series_expand, QRat, QSeries, Ring, TRat};
use crate::fock::{divisor_class, FockVector};
use crate::partitions::Partition;

use super::{InvariantError, QuantumRing};

/// One insertion: a basis class or a quantum power of the divisor
/// (`Power(0)` is the unit, `Power(1)` is `D`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Insertion {
    Basis(Partition),
    Power(u32),
}

/// Which basis insertion the recursion expands in powers of `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    First,
    Last,
    /// Like `First`, but the top-level bracket is reduced through WDVV even if
    /// it contains the unit or the divisor.
    FirstNoAxioms,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Cl {
    D,
    B(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Key {
    Classical(Vec<Cl>),
    Power(usize, Vec<Cl>),
}

struct Wdvv<'a> {
    ring: &'a QuantumRing,
    order: usize,
    strategy: Strategy,
    unit: usize,
    divisor: Option<usize>,
    d_coords: Vec<QRat>,
    krylov: HashMap<usize, Vec<QSeries>>,
    memo: HashMap<Key, QSeries>,
}

impl<'a> Wdvv<'a> {
    fn new(ring: &'a QuantumRing, order: usize, strategy: Strategy) -> Self {
        let n = ring.n();
        let basis = ring.basis();
        let unit = basis.index_of(&Partition::ones(n)).expect("unit");
        let divisor = if n >= 2 { basis.index_of(&Partition::hook(n, 2)) } else { None };
        let d_coords = divisor_class::<QRat>(n).coords(basis);
        Wdvv { ring, order, strategy, unit, divisor, d_coords, krylov: HashMap::new(), memo: HashMap::new() }
    }

    fn coords(&self, c: &Cl) -> Vec<QRat> {
        match c {
            Cl::D => self.d_coords.clone(),
            Cl::B(i) => self.ring.unit_coords(*i),
        }
    }

    fn expand(&self, v: &QRat) -> Result<QSeries, InvariantError> {
        Ok(series_expand(v, self.order)?)
    }

    fn dual_scale(&self, nu: usize) -> TRat {
        self.ring.norm(nu).as_trat().expect("norms are q-free").recip().expect("norms are nonzero")
    }

    fn krylov_series(&mut self, i: usize) -> Result<Vec<QSeries>, InvariantError> {
        if let Some(v) = self.krylov.get(&i) {
            return Ok(v.clone());
        }
        let v = self
            .ring
            .krylov_coeffs_of(i)
            .iter()
            .map(|c| self.expand(c))
            .collect::<Result<Vec<_>, _>>()?;
        self.krylov.insert(i, v.clone());
        Ok(v)
    }

    fn classical(&mut self, ins: &[Cl], root: bool) -> Result<QSeries, InvariantError> {
        let key = Key::Classical(ins.to_vec());
        if !root {
            if let Some(v) = self.memo.get(&key) {
                return Ok(v.clone());
            }
        }
        let out = self.classical_uncached(ins, root)?;
        if !root {
            self.memo.insert(key, out.clone());
        }
        Ok(out)
    }

    fn classical_uncached(&mut self, ins: &[Cl], root: bool) -> Result<QSeries, InvariantError> {
        if ins.len() == 3 {
            let a = self.coords(&ins[0]);
            let b = self.coords(&ins[1]);
            let c = self.coords(&ins[2]);
            let ab = self.ring.multiply_coords(&a, &b);
            return self.expand(&self.ring.gram(&ab, &c));
        }
        let axioms = !(root && self.strategy == Strategy::FirstNoAxioms);
        if axioms {
            if ins.contains(&Cl::B(self.unit)) {
                return Ok(QSeries::zero(self.order));
            }
            for (p, c) in ins.iter().enumerate() {
                let sign = match c {
                    Cl::D => 1,
                    Cl::B(i) if Some(*i) == self.divisor => -1,
                    _ => continue,
                };
                let mut rest = ins.to_vec();
                rest.remove(p);
                let inner = self.classical(&rest, false)?.q_derivative();
                return Ok(if sign > 0 { inner } else { -inner });
            }
        }
        let candidates: Vec<usize> = ins
            .iter()
            .enumerate()
            .filter(|(_, c)| matches!(c, Cl::B(i) if *i != self.unit && Some(*i) != self.divisor))
            .map(|(p, _)| p)
            .collect();
        let pos = match self.strategy {
            Strategy::Last => candidates.last(),
            _ => candidates.first(),
        };
        let Some(&pos) = pos else {
            // only unit and divisor insertions remain at the root: reduce the first one anyway
            return self.reduce_at(ins, 0);
        };
        self.reduce_at(ins, pos)
    }

    /// Expand insertion `pos` as `Σ_k c_k(q) D^{*k}`.
    fn reduce_at(&mut self, ins: &[Cl], pos: usize) -> Result<QSeries, InvariantError> {
        let coeffs = match &ins[pos] {
            Cl::B(i) => self.krylov_series(*i)?,
            Cl::D => {
                let mut v = vec![QSeries::zero(self.order); self.ring.basis().len()];
                if v.len() > 1 {
                    v[1] = QSeries::constant(TRat::one(), self.order);
                }
                v
            }
        };
        let mut rest = ins.to_vec();
        rest.remove(pos);
        let mut acc = QSeries::zero(self.order);
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc + c.clone() * self.power(k, &rest)?;
        }
        Ok(acc)
    }

    /// `⟨D^{*k}, rest⟩`.
    fn power(&mut self, k: usize, rest: &[Cl]) -> Result<QSeries, InvariantError> {
        let key = Key::Power(k, rest.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let out = self.power_uncached(k, rest)?;
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    fn power_uncached(&mut self, k: usize, rest: &[Cl]) -> Result<QSeries, InvariantError> {
        if rest.len() == 2 {
            let a = self.ring.d_power_times(k, &self.coords(&rest[0]));
            let b = self.coords(&rest[1]);
            return self.expand(&self.ring.gram(&a, &b));
        }
        match k {
            0 => return Ok(QSeries::zero(self.order)),
            1 => {
                let mut v = vec![Cl::D];
                v.extend_from_slice(rest);
                return self.classical(&v, false);
            }
            _ => {}
        }
        let (lambda, mu, s) = (&rest[0], &rest[1], &rest[2..]);
        let dim = self.ring.basis().len();
        let mut acc = QSeries::zero(self.order);
        for mask in 0u32..(1 << s.len()) {
            let s1: Vec<Cl> = s.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, c)| c.clone()).collect();
            let s2: Vec<Cl> = s.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 0).map(|(_, c)| c.clone()).collect();
            for nu in 0..dim {
                let w = self.dual_scale(nu);
                let mut left = vec![Cl::D, lambda.clone()];
                left.extend(s1.iter().cloned());
                left.push(Cl::B(nu));
                let a = self.classical(&left, false)?;
                if !a.is_zero() {
                    let mut right = vec![Cl::B(nu), mu.clone()];
                    right.extend(s2.iter().cloned());
                    let b = self.power(k - 1, &right)?;
                    acc = acc + (a * b).scale(&w);
                }
                if mask != 0 {
                    let mut left = vec![Cl::D];
                    left.extend(s1.iter().cloned());
                    left.push(Cl::B(nu));
                    let a = self.power(k - 1, &left)?;
                    if !a.is_zero() {
                        let mut right = vec![Cl::B(nu), lambda.clone(), mu.clone()];
                        right.extend(s2.iter().cloned());
                        let b = self.classical(&right, false)?;
                        acc = acc - (a * b).scale(&w);
                    }
                }
            }
        }
        Ok(acc)
    }
}

/// `⟨γ_1, …, γ_m⟩ = Σ_d q^d ⟨γ_1, …, γ_m⟩_{0,m,d}` to `q^order`.
pub fn multipoint(
    ring: &QuantumRing,
    insertions: &[Insertion],
    order: usize,
    strategy: Strategy,
) -> Result<QSeries, InvariantError> {
    if insertions.len() < 3 {
        return Err(InvariantError::TooFewInsertions(3));
    }
    let mut w = Wdvv::new(ring, order, strategy);
    let n = ring.n();
    let mut classical = Vec::new();
    let mut powers = Vec::new();
    for ins in insertions {
        match ins {
            Insertion::Basis(mu) => {
                let i = ring.basis().index_of(mu).ok_or(InvariantError::SizeMismatch(n))?;
                classical.push(Cl::B(i));
            }
            Insertion::Power(0) => classical.push(Cl::B(w.unit)),
            Insertion::Power(1) => classical.push(Cl::D),
            Insertion::Power(k) => powers.push(*k as usize),
        }
    }
    if powers.is_empty() {
        return w.classical(&classical, true);
    }
    // keep one quantum power; expand the others in the basis, q-linearly
    let head = powers[0];
    let mut terms: Vec<(QSeries, Vec<Cl>)> = vec![(QSeries::constant(TRat::one(), order), classical)];
    for &k in &powers[1..] {
        let v = ring.d_power_times(k, &ring.unit_coords(w.unit));
        let mut next = Vec::new();
        for (c, ins) in &terms {
            for (nu, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let mut ins = ins.clone();
                ins.push(Cl::B(nu));
                next.push((c.clone() * w.expand(x)?, ins));
            }
        }
        terms = next;
    }
    let mut acc = QSeries::zero(order);
    for (c, ins) in terms {
        acc = acc + c * w.power(head, &ins)?;
    }
    Ok(acc)
}

/// Multilinear extension of [`multipoint`] to classes with `Q(t1,t2)` coefficients.
pub fn multipoint_vectors(
    ring: &QuantumRing,
    insertions: &[FockVector<TRat>],
    order: usize,
    strategy: Strategy,
) -> Result<QSeries, InvariantError> {
    let mut terms: Vec<(TRat, Vec<Insertion>)> = vec![(TRat::one(), Vec::new())];
    for v in insertions {
        if v.n() != ring.n() {
            return Err(InvariantError::SizeMismatch(ring.n()));
        }
        let mut next = Vec::new();
        for (c, ins) in &terms {
            for (mu, x) in v.iter() {
                let mut ins = ins.clone();
                ins.push(Insertion::Basis(mu.clone()));
                next.push((c.clone() * x, ins));
            }
        }
        terms = next;
    }
    let mut acc = QSeries::zero(order);
    for (c, ins) in terms {
        acc = acc + multipoint(ring, &ins, order, strategy)?.scale(&c);
    }
    Ok(acc)
}
