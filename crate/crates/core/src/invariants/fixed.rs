//! Invariants with fixed complex structure on the domain, and the transform
//! to the reduced local GW partition function.

use crate::exact::{laurent_u_substitute, LaurentU, QRat, Ring, TRat};
use crate::partitions::Partition;

use super::{InvariantError, InvariantSeries, QuantumRing};

fn coords_of(ring: &QuantumRing, mu: &Partition) -> Result<Vec<QRat>, InvariantError> {
    let i = ring.basis().index_of(mu).ok_or(InvariantError::SizeMismatch(ring.n()))?;
    Ok(ring.unit_coords(i))
}

fn product(ring: &QuantumRing, classes: &[Partition]) -> Result<Vec<QRat>, InvariantError> {
    let mut acc = coords_of(ring, &classes[0])?;
    for mu in &classes[1..] {
        acc = ring.multiply_coords(&acc, &coords_of(ring, mu)?);
    }
    Ok(acc)
}

fn names(ins: &[Partition]) -> Vec<String> {
    ins.iter().map(|p| p.to_string()).collect()
}

/// `⟨λ¹, …, λʳ⟩_ξ = ⟨λ¹ * ⋯ * λʳ⁻¹, λʳ⟩`: the 3-point tensor contracted
/// `r - 2` times through Poincaré duals.
pub fn fixed_structure(ring: &QuantumRing, insertions: &[Partition]) -> Result<InvariantSeries, InvariantError> {
    if insertions.len() < 3 {
        return Err(InvariantError::TooFewInsertions(3));
    }
    let (last, init) = insertions.split_last().expect("nonempty");
    let value = ring.gram(&product(ring, init)?, &coords_of(ring, last)?);
    Ok(InvariantSeries { n: ring.n(), insertions: names(insertions), value })
}

/// `Σ_ν ⟨λ¹, …, λʲ, ν⟩_ξ ⟨ν^∨, λʲ⁺¹, …, λʳ⟩_ξ`, splitting after insertion `j`
/// (`2 ≤ j ≤ r - 2`).
pub fn fixed_structure_split(
    ring: &QuantumRing,
    insertions: &[Partition],
    j: usize,
) -> Result<InvariantSeries, InvariantError> {
    let r = insertions.len();
    if r < 4 || j < 2 || j + 2 > r {
        return Err(InvariantError::TooFewInsertions(4));
    }
    let mut value = QRat::zero();
    for (k, nu) in ring.basis().iter().enumerate() {
        let mut left = insertions[..j].to_vec();
        left.push(nu.clone());
        let mut right = vec![nu.clone()];
        right.extend_from_slice(&insertions[j..]);
        let a = fixed_structure(ring, &left)?.value;
        if a.is_zero() {
            continue;
        }
        let b = fixed_structure(ring, &right)?.value;
        let dual = ring.norm(k).recip().expect("norms are nonzero");
        value = value + a * &b * &dual;
    }
    Ok(InvariantSeries { n: ring.n(), insertions: names(insertions), value })
}

/// `n(2 - r) + Σ ℓ(λⁱ)`.
pub fn gw_exponent(n: u32, insertions: &[Partition]) -> i64 {
    let r = insertions.len() as i64;
    n as i64 * (2 - r) + insertions.iter().map(|p| p.len() as i64).sum::<i64>()
}

/// Predicted reduced GW partition function `Z'` as a Laurent series in
/// `v = iu`, with `(-iu)^E Z' = (-1)^n ⟨…⟩_ξ` after `-q = e^{iu}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GwSeries {
    pub n: u32,
    pub exponent: i64,
    pub series: LaurentU,
}

impl GwSeries {
    /// `(exponent of u, coefficient)`; fails if an odd power of `v` survives.
    pub fn u_coefficients(&self) -> Result<Vec<(i64, TRat)>, InvariantError> {
        Ok(self.series.u_coefficients()?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .series
            .terms()
            .into_iter()
            .map(|(k, c)| serde_json::json!({"v_exp": k, "coeff": c.to_string()}))
            .collect();
        serde_json::json!({
            "n": self.n,
            "exponent": self.exponent,
            "order": self.series.order(),
            "terms": terms,
            "u_terms": self.u_coefficients().ok().map(|t| t
                .into_iter()
                .map(|(k, c)| serde_json::json!({"u_exp": k, "coeff": c.to_string()}))
                .collect::<Vec<_>>()),
        })
    }
}

/// Transform of a fixed-structure invariant, known through `v^order`.
pub fn gw_transform(ring: &QuantumRing, insertions: &[Partition], order: i64) -> Result<GwSeries, InvariantError> {
    let n = ring.n();
    let mut value = fixed_structure(ring, insertions)?.value;
    if n % 2 == 1 {
        value = -value;
    }
    let e = gw_exponent(n, insertions);
    // (-v)^{-E} shifts exponents by -E; expand far enough to cover the shift
    let series = laurent_u_substitute(&value, order + e)?;
    let sign = if e.rem_euclid(2) == 0 { 1 } else { -1 };
    let series = series.shift(-e).scale(&TRat::from_int(sign));
    series.u_coefficients()?;
    Ok(GwSeries { n, exponent: e, series })
}
