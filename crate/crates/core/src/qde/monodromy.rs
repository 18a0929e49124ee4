//! Numerical monodromy of `q dψ/dq = M_D(q) ψ` at rational `(t1, t2)`.
//!
//! The fundamental matrix is transported along a closed path with an
//! adaptive Dormand–Prince 5(4) scheme in complex double precision. Every
//! probe runs twice, at `tol` and `tol / 32`, and reports the difference as
//! its error estimate.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::exact::{QRat, Rational};
use crate::operators::md_cached;
use crate::partitions::Basis;

use super::{singularities_at, to_f64, QdeError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MonodromyError {
    #[error("step size collapsed near q = {re}{im:+}i")]
    StepCollapse { re: f64, im: f64 },
    #[error("path passes within {distance:.3e} of the singular point q = {re}{im:+}i")]
    TooClose { re: f64, im: f64, distance: f64 },
    #[error("invalid loop specification: {0}")]
    BadLoop(String),
    #[error("no finite singular point other than 0 for n = {0}")]
    NothingToProbe(u32),
    #[error(transparent)]
    Qde(#[from] QdeError),
}

/// A circle around `center`, traversed from `basepoint` (if given, joined to the
/// circle by a straight segment travelled out and back) or from
/// `center + radius` otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct Loop {
    pub center: Complex64,
    pub radius: f64,
    pub basepoint: Option<Complex64>,
    pub clockwise: bool,
}

impl Loop {
    pub fn circle(center: Complex64, radius: f64) -> Self {
        Loop { center, radius, basepoint: None, clockwise: false }
    }

    pub fn keyhole(center: Complex64, radius: f64, basepoint: Complex64) -> Self {
        Loop { center, radius, basepoint: Some(basepoint), clockwise: false }
    }

    fn segments(&self) -> Vec<Segment> {
        let (attach, theta0) = match self.basepoint {
            Some(b) if (b - self.center).norm() > self.radius => {
                let dir = (b - self.center) / (b - self.center).norm();
                (Some(b), dir.arg())
            }
            _ => (None, 0.0),
        };
        let sweep = if self.clockwise { -2.0 * PI } else { 2.0 * PI };
        let on_circle = self.center + Complex64::from_polar(self.radius, theta0);
        let arc = Segment::Arc { center: self.center, radius: self.radius, theta0, sweep };
        match attach {
            Some(b) => vec![Segment::Line(b, on_circle), arc, Segment::Line(on_circle, b)],
            None => vec![arc],
        }
    }

    pub fn start(&self) -> Complex64 {
        self.segments()[0].at(0.0).0
    }
}

impl fmt::Display for Loop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "center={},center_im={},radius={}", self.center.re, self.center.im, self.radius)?;
        if let Some(b) = self.basepoint {
            write!(f, ",base={},base_im={}", b.re, b.im)?;
        }
        write!(f, ",orientation={}", if self.clockwise { "cw" } else { "ccw" })
    }
}

/// `center=-1,radius=0.2` with optional `center_im`, `base`, `base_im`, `orientation=ccw|cw`.
impl FromStr for Loop {
    type Err = MonodromyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: String| MonodromyError::BadLoop(m);
        let mut l = Loop::circle(Complex64::new(0.0, 0.0), f64::NAN);
        let (mut base_re, mut base_im) = (None, None);
        for kv in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| bad(format!("expected key=value, got `{kv}`")))?;
            let num = || v.trim().parse::<f64>().map_err(|_| bad(format!("`{k}` is not a number: `{v}`")));
            match k.trim() {
                "center" => l.center.re = num()?,
                "center_im" => l.center.im = num()?,
                "radius" => l.radius = num()?,
                "base" => base_re = Some(num()?),
                "base_im" => base_im = Some(num()?),
                "orientation" => {
                    l.clockwise = match v.trim() {
                        "ccw" => false,
                        "cw" => true,
                        o => return Err(bad(format!("orientation must be ccw or cw, got `{o}`"))),
                    }
                }
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        if !(l.radius > 0.0) {
            return Err(bad("radius must be given and positive".into()));
        }
        if base_re.is_some() || base_im.is_some() {
            l.basepoint = Some(Complex64::new(base_re.unwrap_or(0.0), base_im.unwrap_or(0.0)));
        }
        Ok(l)
    }
}

#[derive(Clone, Copy, Debug)]
enum Segment {
    Line(Complex64, Complex64),
    Arc { center: Complex64, radius: f64, theta0: f64, sweep: f64 },
}

impl Segment {
    /// `(q(t), q'(t))` for `t ∈ [0, 1]`.
    fn at(&self, t: f64) -> (Complex64, Complex64) {
        match *self {
            Segment::Line(a, b) => (a + (b - a) * t, b - a),
            Segment::Arc { center, radius, theta0, sweep } => {
                let e = Complex64::from_polar(radius, theta0 + sweep * t);
                (center + e, e * Complex64::new(0.0, sweep))
            }
        }
    }

    fn distance_to(&self, p: Complex64) -> f64 {
        match *self {
            Segment::Line(a, b) => {
                let d = b - a;
                let t = if d.norm_sqr() == 0.0 { 0.0 } else { ((p - a) * d.conj()).re / d.norm_sqr() };
                (a + d * t.clamp(0.0, 1.0) - p).norm()
            }
            Segment::Arc { center, radius, .. } => ((p - center).norm() - radius).abs(),
        }
    }
}

/// `M_D` at rational `(t1, t2)` as a function of complex `q`.
#[derive(Clone, Debug)]
struct NumericOperator {
    dim: usize,
    entries: Vec<(usize, usize, Vec<Complex64>, Vec<Complex64>)>,
}

fn q_coeffs(p: &crate::exact::QPoly) -> Vec<Complex64> {
    p.coeffs()
        .iter()
        .map(|c| Complex64::new(to_f64(&c.as_constant().expect("specialized coefficient")), 0.0))
        .collect()
}

fn horner(c: &[Complex64], q: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &x| acc * q + x)
}

impl NumericOperator {
    fn new(n: u32, t1: &Rational, t2: &Rational) -> Result<Self, QdeError> {
        let md = md_cached(n).specialize(t1, t2).ok_or(QdeError::BadSpecialization)?;
        let m = md.matrix();
        let dim = m.rows();
        let mut entries = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                let e: &QRat = m.get(i, j);
                if !e.num().is_zero() {
                    entries.push((i, j, q_coeffs(e.num()), q_coeffs(e.den())));
                }
            }
        }
        Ok(NumericOperator { dim, entries })
    }

    fn at(&self, q: Complex64) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (i, j, num, den) in &self.entries {
            m[(*i, *j)] = horner(num, q) / horner(den, q);
        }
        m
    }
}

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

/// Transport `y` along `seg` for `y' = q'(t) M(q(t))/q(t) · y`.
fn transport(op: &NumericOperator, seg: &Segment, y0: DMatrix<Complex64>, tol: f64) -> Result<(DMatrix<Complex64>, usize), MonodromyError> {
    let rhs = |t: f64, y: &DMatrix<Complex64>| -> DMatrix<Complex64> {
        let (q, dq) = seg.at(t);
        op.at(q) * y * (dq / q)
    };
    let mut t = 0.0;
    let mut h = 1e-2;
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    let mut steps = 0;
    while t < 1.0 {
        if t + h > 1.0 {
            h = 1.0 - t;
        }
        let mut k: Vec<DMatrix<Complex64>> = vec![k1.clone()];
        for s in 0..6 {
            let mut ys = y.clone();
            for (r, kr) in k.iter().enumerate() {
                if A[s][r] != 0.0 {
                    ys += kr * Complex64::new(h * A[s][r], 0.0);
                }
            }
            k.push(rhs(t + C[s + 1] * h, &ys));
        }
        // k[6] is evaluated at the fifth-order solution (FSAL)
        let mut ynew = y.clone();
        for (r, kr) in k.iter().take(6).enumerate() {
            if A[5][r] != 0.0 {
                ynew += kr * Complex64::new(h * A[5][r], 0.0);
            }
        }
        let mut err = 0.0f64;
        for idx in 0..y.len() {
            let mut e = Complex64::new(0.0, 0.0);
            for (r, kr) in k.iter().enumerate() {
                e += kr[idx] * E[r];
            }
            let scale = tol * (1.0 + y[idx].norm().max(ynew[idx].norm()));
            err = err.max((e * h).norm() / scale);
        }
        if err <= 1.0 {
            t += h;
            y = ynew;
            k1 = k.pop().expect("seven stages");
            steps += 1;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < 1e-13 {
            let (q, _) = seg.at(t);
            return Err(MonodromyError::StepCollapse { re: q.re, im: q.im });
        }
    }
    Ok((y, steps))
}

fn finite_singular_points(n: u32, t1: &Rational, t2: &Rational) -> Result<Vec<Complex64>, QdeError> {
    Ok(singularities_at(n, Some((t1, t2)))?
        .iter()
        .filter_map(|s| s.point())
        .map(|(re, im)| Complex64::new(re, im))
        .collect())
}

fn integrate_loop(op: &NumericOperator, lp: &Loop, tol: f64) -> Result<(DMatrix<Complex64>, usize), MonodromyError> {
    let mut y = DMatrix::identity(op.dim, op.dim);
    let mut steps = 0;
    for seg in lp.segments() {
        let (next, s) = transport(op, &seg, y, tol)?;
        y = next;
        steps += s;
    }
    Ok((y, steps))
}

/// Coefficients of `det(x I - m)`, constant term first (Faddeev–LeVerrier).
pub fn charpoly(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    let n = m.nrows();
    let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
    c[n] = Complex64::new(1.0, 0.0);
    let mut mk = DMatrix::<Complex64>::zeros(n, n);
    for k in 1..=n {
        mk = m * &mk + DMatrix::identity(n, n) * c[n - k + 1];
        c[n - k] = -(m * &mk).trace() / k as f64;
    }
    c
}

fn eigenvalues(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    let ev = nalgebra::linalg::Schur::new(m.clone()).eigenvalues().expect("complex Schur form is triangular");
    let mut v: Vec<Complex64> = ev.iter().cloned().collect();
    v.sort_by(|a, b| a.arg().total_cmp(&b.arg()).then(a.norm().total_cmp(&b.norm())));
    v
}

fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Clone, Debug)]
pub struct MonodromyReport {
    pub n: u32,
    pub lp: Loop,
    pub matrix: DMatrix<Complex64>,
    pub charpoly: Vec<Complex64>,
    pub eigenvalues: Vec<Complex64>,
    /// Max-entry difference between the runs at `tol` and `tol / 32`.
    pub est_error: f64,
    /// Set when the two runs disagree by more than `10 tol`.
    pub flagged: bool,
    pub steps: usize,
}

fn cjson(z: &Complex64) -> serde_json::Value {
    serde_json::json!([z.re, z.im])
}

impl MonodromyReport {
    /// Largest `|M_ij - δ_ij|`.
    pub fn distance_to_identity(&self) -> f64 {
        max_abs_diff(&self.matrix, &DMatrix::identity(self.matrix.nrows(), self.matrix.ncols()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<serde_json::Value>> =
            (0..self.matrix.nrows()).map(|i| (0..self.matrix.ncols()).map(|j| cjson(&self.matrix[(i, j)])).collect()).collect();
        serde_json::json!({
            "n": self.n,
            "loop": self.lp.to_string(),
            "basepoint": cjson(&self.lp.start()),
            "matrix": rows,
            "charpoly": self.charpoly.iter().map(cjson).collect::<Vec<_>>(),
            "eigenvalues": self.eigenvalues.iter().map(cjson).collect::<Vec<_>>(),
            "est_error": self.est_error,
            "flagged": self.flagged,
        })
    }
}

fn check_clearance(lp: &Loop, points: &[Complex64]) -> Result<(), MonodromyError> {
    let margin = 1e-3_f64.max(1e-2 * lp.radius);
    for seg in lp.segments() {
        for p in points {
            let d = seg.distance_to(*p);
            if d < margin {
                return Err(MonodromyError::TooClose { re: p.re, im: p.im, distance: d });
            }
        }
    }
    Ok(())
}

/// Monodromy of the fundamental matrix around `lp`, based at its start point.
pub fn monodromy_probe(n: u32, t1: &Rational, t2: &Rational, lp: &Loop, tol: f64) -> Result<MonodromyReport, MonodromyError> {
    let points = finite_singular_points(n, t1, t2)?;
    check_clearance(lp, &points)?;
    let op = NumericOperator::new(n, t1, t2)?;
    let runs: Vec<Result<(DMatrix<Complex64>, usize), MonodromyError>> =
        [tol, tol / 32.0].par_iter().map(|&t| integrate_loop(&op, lp, t)).collect();
    let mut runs = runs.into_iter();
    let (coarse, _) = runs.next().expect("two runs")?;
    let (fine, steps) = runs.next().expect("two runs")?;
    let est_error = max_abs_diff(&coarse, &fine);
    Ok(MonodromyReport {
        n,
        lp: lp.clone(),
        charpoly: charpoly(&fine),
        eigenvalues: eigenvalues(&fine),
        matrix: fine,
        est_error,
        flagged: est_error > 10.0 * tol,
        steps,
    })
}

/// `exp(-2πi c(λ))` for all λ, the expected spectrum of the monodromy at `q = 0`.
pub fn residue_eigenvalues(n: u32, t1: &Rational, t2: &Rational) -> Vec<Complex64> {
    let (a, b) = (to_f64(t1), to_f64(t2));
    Basis::new(n)
        .iter()
        .map(|l| Complex64::from_polar(1.0, -2.0 * PI * l.content().eval_f64(a, b)))
        .collect()
}

/// Largest distance in an optimal-greedy matching of two multisets of points.
pub fn spectrum_distance(got: &[Complex64], want: &[Complex64]) -> f64 {
    let mut left: Vec<Complex64> = got.to_vec();
    let mut worst = 0.0f64;
    for w in want {
        let Some((idx, d)) = left.iter().enumerate().map(|(i, g)| (i, (g - w).norm())).min_by(|x, y| x.1.total_cmp(&y.1)) else {
            return f64::INFINITY;
        };
        worst = worst.max(d);
        left.remove(idx);
    }
    if left.is_empty() {
        worst
    } else {
        f64::INFINITY
    }
}

/// Keyhole loops from a common basepoint around every finite singular point,
/// ordered so that the big loop through the basepoint equals their product.
fn keyhole_system(points: &[Complex64]) -> (Complex64, Loop, Vec<Loop>) {
    let far = points.iter().map(|p| p.norm()).fold(0.0, f64::max) + 0.5;
    // slightly off the imaginary axis so no two points are collinear with it
    let base = Complex64::from_polar(far, -PI / 2.0 + 0.137);
    let mut min_gap = f64::INFINITY;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            min_gap = min_gap.min((p - q).norm());
        }
    }
    let r = (0.3 * min_gap).min(0.25);
    let mut order: Vec<Complex64> = points.to_vec();
    // the counterclockwise big loop from `base` meets the points in increasing argument of p - base
    order.sort_by(|a, b| (a - base).arg().total_cmp(&(b - base).arg()));
    let loops = order.iter().map(|&p| Loop::keyhole(p, r, base)).collect();
    let big = Loop::keyhole(Complex64::new(0.0, 0.0), far, base);
    (base, big, loops)
}

#[derive(Clone, Debug)]
pub struct CompositionReport {
    pub big: MonodromyReport,
    pub parts: Vec<MonodromyReport>,
    /// `|M_big - M_k ⋯ M_1|`, loops listed in the order they are traversed.
    pub discrepancy: f64,
    pub est_error: f64,
}

/// Compares the loop around all finite singular points with the product of
/// the individual keyhole monodromies.
pub fn composition_probe(n: u32, t1: &Rational, t2: &Rational, tol: f64) -> Result<CompositionReport, MonodromyError> {
    let points = finite_singular_points(n, t1, t2)?;
    let (_, big, loops) = keyhole_system(&points);
    let big = monodromy_probe(n, t1, t2, &big, tol)?;
    let parts: Vec<MonodromyReport> =
        loops.par_iter().map(|lp| monodromy_probe(n, t1, t2, lp, tol)).collect::<Result<_, _>>()?;
    let dim = big.matrix.nrows();
    let product = parts.iter().fold(DMatrix::<Complex64>::identity(dim, dim), |acc, r| &r.matrix * acc);
    let est_error = parts.iter().map(|r| r.est_error).fold(big.est_error, f64::max);
    Ok(CompositionReport { discrepancy: max_abs_diff(&big.matrix, &product), big, parts, est_error })
}

#[derive(Clone, Debug)]
pub struct InvarianceReport {
    pub original: MonodromyReport,
    pub shifted: MonodromyReport,
    /// Largest difference of characteristic-polynomial coefficients.
    pub charpoly_difference: f64,
}

/// Characteristic polynomials of the monodromy around `lp` at `(t1, t2)` and `(t1 - 1, t2)`.
pub fn invariance_probe(n: u32, t1: &Rational, t2: &Rational, lp: &Loop, tol: f64) -> Result<InvarianceReport, MonodromyError> {
    let shifted_t1 = t1.clone() - Rational::from_integer(1.into());
    let original = monodromy_probe(n, t1, t2, lp, tol)?;
    let shifted = monodromy_probe(n, &shifted_t1, t2, lp, tol)?;
    let charpoly_difference =
        original.charpoly.iter().zip(&shifted.charpoly).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Ok(InvarianceReport { original, shifted, charpoly_difference })
}

#[derive(Clone, Debug)]
pub struct CommutatorReport {
    pub parts: Vec<MonodromyReport>,
    /// Largest `|AB - BA|` over pairs of keyhole monodromies.
    pub max_commutator: f64,
    /// Largest `|M - I|` over the loops around roots of unity.
    pub max_root_distance_to_identity: f64,
    pub est_error: f64,
}

/// Pairwise commutators of the monodromies around all finite singular points.
pub fn commutator_probe(n: u32, t1: &Rational, t2: &Rational, tol: f64) -> Result<CommutatorReport, MonodromyError> {
    let points = finite_singular_points(n, t1, t2)?;
    if points.len() < 2 {
        return Err(MonodromyError::NothingToProbe(n));
    }
    let (_, _, loops) = keyhole_system(&points);
    let parts: Vec<MonodromyReport> =
        loops.par_iter().map(|lp| monodromy_probe(n, t1, t2, lp, tol)).collect::<Result<_, _>>()?;
    let mut max_commutator = 0.0f64;
    for (i, a) in parts.iter().enumerate() {
        for b in &parts[i + 1..] {
            let ab = &a.matrix * &b.matrix;
            let ba = &b.matrix * &a.matrix;
            max_commutator = max_commutator.max(max_abs_diff(&ab, &ba));
        }
    }
    let max_root_distance_to_identity = parts
        .iter()
        .filter(|r| r.lp.center.norm() > 0.5)
        .map(|r| r.distance_to_identity())
        .fold(0.0, f64::max);
    let est_error = parts.iter().map(|r| r.est_error).fold(0.0, f64::max);
    Ok(CommutatorReport { parts, max_commutator, max_root_distance_to_identity, est_error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn loop_parsing() {
        let l: Loop = "center=-1,radius=0.2".parse().unwrap();
        assert_eq!(l, Loop::circle(Complex64::new(-1.0, 0.0), 0.2));
        assert!("center=-1".parse::<Loop>().is_err());
        assert!("center=-1,radius=0.2,color=red".parse::<Loop>().is_err());
        let l: Loop = "center=1,radius=0.25,base=0,base_im=-1,orientation=cw".parse().unwrap();
        assert!(l.clockwise && l.basepoint == Some(Complex64::new(0.0, -1.0)));
    }

    #[test]
    fn charpoly_of_diagonal() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0)]));
        let c = charpoly(&m);
        let want = [Complex64::new(0.0, 2.0), Complex64::new(-2.0, -1.0), Complex64::new(1.0, 0.0)];
        for (a, b) in c.iter().zip(&want) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn one_is_identity() {
        let r = monodromy_probe(1, &rat(3, 10), &rat(41, 100), &Loop::circle(Complex64::new(0.0, 0.0), 0.5), 1e-10).unwrap();
        assert!(r.distance_to_identity() < 1e-12);
    }

    #[test]
    fn two_around_zero() {
        let (t1, t2) = (rat(3, 10), rat(41, 100));
        let r = monodromy_probe(2, &t1, &t2, &Loop::circle(Complex64::new(0.0, 0.0), 0.5), 1e-10).unwrap();
        assert!(!r.flagged);
        assert!(spectrum_distance(&r.eigenvalues, &residue_eigenvalues(2, &t1, &t2)) < 1e-6);
    }

    #[test]
    fn too_close_is_rejected() {
        let r = monodromy_probe(2, &rat(3, 10), &rat(41, 100), &Loop::circle(Complex64::new(0.0, 0.0), 1.0), 1e-8);
        assert!(matches!(r, Err(MonodromyError::TooClose { .. })));
    }
}
