//! Named verification suites over the whole library.
//!
//! Each suite is a list of independent checks; they run in parallel and the
//! report keeps the order in which they were listed.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use crate::exact::{parse_qrat, parse_trat, rat, series_expand, Rational, TRat};
use crate::invariants::{
    divisibility_check, fixed_structure, fixed_structure_split, generic_points, gw_transform, jj_check, multipoint,
    Insertion, QuantumRing, Strategy,
};
use crate::invariants::{fourier_fprime, fourier_fprime_bruteforce};
use crate::jack::schur_specialization_check;
use crate::operators::{
    addition_formula_check, build_md, classical_eigenvalue_check, cs_check, cs_duality_check, integrality_check,
    length_constraint_check, limiting_distinct, offdiag_q_free_check, self_adjoint_check,
};
use crate::partitions::{Basis, Partition};
use crate::qde::{
    commutator_probe, formal_solution, formal_solution_at, monodromy_probe, residue_eigenvalues, singularities,
    spectrum_distance, Loop, Singularity,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Operators,
    Jack,
    Invariants,
    Fourier,
    Jj,
    Qde,
    Monodromy,
    All,
}

impl Suite {
    pub const NAMED: [Suite; 7] =
        [Suite::Operators, Suite::Jack, Suite::Invariants, Suite::Fourier, Suite::Jj, Suite::Qde, Suite::Monodromy];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Operators => "operators",
            Suite::Jack => "jack",
            Suite::Invariants => "invariants",
            Suite::Fourier => "fourier",
            Suite::Jj => "jj",
            Suite::Qde => "qde",
            Suite::Monodromy => "monodromy",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::NAMED
            .iter()
            .chain(std::iter::once(&Suite::All))
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Pass,
    Fail(String),
    /// Informational result of a probe that is reported, never failed.
    Finding(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub suite: Suite,
    pub name: String,
    pub outcome: Outcome,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        !matches!(self.outcome, Outcome::Fail(_))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (status, detail) = match &self.outcome {
            Outcome::Pass => ("pass", None),
            Outcome::Fail(d) => ("fail", Some(d.clone())),
            Outcome::Finding(d) => ("finding", Some(d.clone())),
        };
        json!({"suite": self.suite.name(), "check": self.name, "status": status, "detail": detail})
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Outcome::Pass => write!(f, "PASS {} {}", self.suite, self.name),
            Outcome::Fail(d) => write!(f, "FAIL {} {}: {d}", self.suite, self.name),
            Outcome::Finding(d) => write!(f, "NOTE {} {}: {d}", self.suite, self.name),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed())
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "passed": self.passed(),
            "checks": self.checks.iter().map(CheckResult::to_json).collect::<Vec<_>>(),
        })
    }
}

type Job = Box<dyn Fn() -> Outcome + Send + Sync>;

struct Plan {
    suite: Suite,
    jobs: Vec<(String, Job)>,
}

impl Plan {
    fn new(suite: Suite) -> Self {
        Plan { suite, jobs: Vec::new() }
    }

    fn add<E: fmt::Display>(&mut self, name: impl Into<String>, f: impl Fn() -> Result<(), E> + Send + Sync + 'static) {
        self.jobs.push((name.into(), Box::new(move || f().map_or_else(|e| Outcome::Fail(e.to_string()), |_| Outcome::Pass))));
    }

    fn add_outcome(&mut self, name: impl Into<String>, f: impl Fn() -> Outcome + Send + Sync + 'static) {
        self.jobs.push((name.into(), Box::new(f)));
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// The four entries of `M_D` for `n = 2`, in closed form.
pub fn golden_two() -> Result<(), String> {
    let md = build_md(2);
    let p = |v: &[u32]| Partition::new(v.to_vec()).expect("valid");
    let want = [
        (p(&[2]), p(&[2]), "-(t1+t2)*(1+q)/(1-q)"),
        (p(&[2]), p(&[1, 1]), "-1"),
        (p(&[1, 1]), p(&[2]), "t1*t2"),
        (p(&[1, 1]), p(&[1, 1]), "0"),
    ];
    for (row, col, s) in want {
        let w = parse_qrat(s).map_err(|e| e.to_string())?;
        let got = md.entry(&row, &col);
        ensure(*got == w, || format!("entry ({row}, {col}) is {got}, expected {w}"))?;
    }
    Ok(())
}

fn operators_plan(max_n: u32) -> Plan {
    let mut p = Plan::new(Suite::Operators);
    p.add("golden n=2", golden_two);
    for n in 1..=max_n {
        p.add(format!("classical eigenvalues n={n}"), move || classical_eigenvalue_check(n));
        p.add(format!("self-adjoint n={n}"), move || self_adjoint_check(n));
        p.add(format!("integrality n={n} order=12"), move || {
            integrality_check(n, 12).map_err(|v| format!("({}, {}) q^{}: {}", v.row, v.col, v.power, v.coefficient))
        });
        p.add(format!("Calogero-Sutherland n={n}"), move || cs_check(n).map_err(|_| "matrices differ".to_string()));
        p.add(format!("Calogero-Sutherland dual n={n}"), move || {
            cs_duality_check(n).map_err(|_| "matrices differ".to_string())
        });
        p.add(format!("off-diagonal q-free n={n}"), move || offdiag_q_free_check(n));
        p.add(format!("diagonal divisibility by t1+t2 n={n} order=10"), move || divisibility_check(n, 10));
        p.add(format!("addition formula n={n} order=10"), move || addition_formula_check(n, 10));
        p.add(format!("length constraint n={n}"), move || length_constraint_check(n));
        p.add(format!("limiting eigenvalues distinct n={n}"), move || limiting_distinct(n));
    }
    p
}

fn jack_plan(max_n: u32) -> Plan {
    let mut p = Plan::new(Suite::Jack);
    for n in 1..=max_n {
        for l in Basis::new(n).iter() {
            let l = l.clone();
            p.add(format!("Schur specialization {l}"), move || schur_specialization_check(&l));
        }
    }
    p
}

fn fourier_plan(max_n: u32) -> Plan {
    let mut p = Plan::new(Suite::Fourier);
    for n in 1..=max_n {
        p.add(format!("closed form vs characters n={n}"), move || {
            for l in Basis::new(n).iter() {
                let (a, b) = (fourier_fprime(l), fourier_fprime_bruteforce(l));
                ensure(a == b, || format!("{l}: closed form {a:?}, character sum {b:?}"))?;
            }
            Ok::<(), String>(())
        });
    }
    p
}

fn jj_plan(max_n: u32) -> Plan {
    let mut p = Plan::new(Suite::Jj);
    for n in 2..=max_n.min(5) {
        p.add(format!("jj n={n} order=12"), move || jj_check(n, 12).map(|_| ()));
    }
    p
}

/// `⟨D, λ, μ, ν⟩ = q d/dq ⟨λ, μ, ν⟩`, computed without the divisor shortcut.
pub fn divisor_equation(n: u32, order: usize) -> Result<(), String> {
    let ring = QuantumRing::new(n).map_err(|e| e.to_string())?;
    let b: Vec<Partition> = ring.basis().iter().cloned().collect();
    for l in &b {
        for m in &b {
            for nu in &b {
                let ins = [Insertion::Power(1), Insertion::Basis(l.clone()), Insertion::Basis(m.clone()), Insertion::Basis(nu.clone())];
                let four = multipoint(&ring, &ins, order, Strategy::FirstNoAxioms).map_err(|e| e.to_string())?;
                let three = ring.three_point(l, m, nu).map_err(|e| e.to_string())?;
                let three = series_expand(&three, order).map_err(|e| e.to_string())?;
                ensure(four == three.q_derivative(), || format!("n={n} <D,{l},{m},{nu}>"))?;
            }
        }
    }
    Ok(())
}

fn insertion_sets(n: u32) -> Vec<Vec<Insertion>> {
    let b: Vec<Partition> = Basis::new(n).iter().cloned().collect();
    let k = b.len();
    let mut out = Vec::new();
    // all 4-point basis insertions up to symmetry of the first three slots
    for i in 0..k {
        for j in i..k {
            for l in j..k {
                for m in 0..k {
                    out.push([i, j, l, m].iter().map(|&x| Insertion::Basis(b[x].clone())).collect());
                }
            }
        }
    }
    for x in &b {
        out.push(vec![Insertion::Power(2), Insertion::Basis(x.clone()), Insertion::Basis(b[0].clone()), Insertion::Basis(b[k - 1].clone())]);
        out.push(vec![
            Insertion::Basis(x.clone()),
            Insertion::Power(1),
            Insertion::Basis(b[k - 1].clone()),
            Insertion::Power(2),
            Insertion::Basis(b[0].clone()),
        ]);
    }
    out
}

/// `multipoint` is the same along every recursion order.
pub fn path_independence(n: u32, order: usize) -> Result<(), String> {
    let ring = QuantumRing::new(n).map_err(|e| e.to_string())?;
    for ins in insertion_sets(n) {
        let a = multipoint(&ring, &ins, order, Strategy::First).map_err(|e| e.to_string())?;
        for s in [Strategy::Last, Strategy::FirstNoAxioms] {
            let b = multipoint(&ring, &ins, order, s).map_err(|e| e.to_string())?;
            ensure(a == b, || format!("n={n} {ins:?}: {s:?} differs from First"))?;
        }
    }
    Ok(())
}

/// `(a * b) * c = a * (b * c)` and `a * b = b * a` on basis classes, exactly.
pub fn associativity(n: u32) -> Result<(), String> {
    let ring = QuantumRing::new(n).map_err(|e| e.to_string())?;
    let k = ring.basis().len();
    let e: Vec<_> = (0..k).map(|i| ring.unit_coords(i)).collect();
    for a in 0..k {
        for b in 0..k {
            let ab = ring.multiply_coords(&e[a], &e[b]);
            ensure(ab == ring.multiply_coords(&e[b], &e[a]), || format!("n={n} not commutative at ({a}, {b})"))?;
            for c in 0..k {
                let left = ring.multiply_coords(&ab, &e[c]);
                let right = ring.multiply_coords(&e[a], &ring.multiply_coords(&e[b], &e[c]));
                ensure(left == right, || format!("n={n} not associative at ({a}, {b}, {c})"))?;
            }
        }
    }
    Ok(())
}

/// Every splitting of a fixed-structure invariant gives the same series;
/// symbolic in `t1, t2` for `n ≤ 2`, at a generic rational point beyond.
pub fn splitting_check(n: u32, r: usize) -> Result<(), String> {
    let ring = if n <= 2 {
        QuantumRing::new(n)
    } else {
        let (t1, t2) = generic_points().remove(0);
        QuantumRing::specialized(n, &t1, &t2)
    }
    .map_err(|e| e.to_string())?;
    let b: Vec<Partition> = ring.basis().iter().cloned().collect();
    let k = b.len();
    let count = k.pow(r as u32).min(64);
    for idx in 0..count {
        let ins: Vec<Partition> = (0..r).map(|i| b[(idx / k.pow(i as u32)) % k].clone()).collect();
        let whole = fixed_structure(&ring, &ins).map_err(|e| e.to_string())?.value;
        for j in 2..=r - 2 {
            let split = fixed_structure_split(&ring, &ins, j).map_err(|e| e.to_string())?.value;
            ensure(split == whole, || format!("n={n} {ins:?} split at {j}"))?;
        }
    }
    Ok(())
}

/// `tanh(v/2)/v` through `v^order` with rational coefficients, from the
/// quotient of the sinh and cosh series.
pub fn tanh_half_over_v(order: usize) -> Vec<Rational> {
    let len = order + 2;
    let mut fact = Rational::from_integer(1.into());
    let mut sinh = vec![Rational::from_integer(0.into()); len];
    let mut cosh = vec![Rational::from_integer(0.into()); len];
    for k in 0..len {
        if k > 0 {
            fact *= Rational::from_integer(k.into());
        }
        let c = Rational::from_integer(1.into()) / (fact.clone() * Rational::from_integer(num_bigint::BigInt::from(2).pow(k as u32)));
        if k % 2 == 0 {
            cosh[k] = c;
        } else {
            sinh[k] = c;
        }
    }
    // tanh = sinh / cosh, then drop one power of v
    let mut t = vec![Rational::from_integer(0.into()); len];
    for k in 0..len {
        let mut acc = sinh[k].clone();
        for j in 1..=k {
            acc -= cosh[j].clone() * t[k - j].clone();
        }
        t[k] = acc;
    }
    t[1..].to_vec()
}

/// The `n = 2`, `((2),(2),(2))` transform is `-(t1+t2)/(2 t1 t2) · tanh(v/2)/v`
/// and every transform computed is free of odd powers of `v`.
pub fn gw_check(order: usize) -> Result<(), String> {
    let ring = QuantumRing::new(2).map_err(|e| e.to_string())?;
    let two = Partition::new(vec![2]).expect("valid");
    let g = gw_transform(&ring, &[two.clone(), two.clone(), two], order as i64).map_err(|e| e.to_string())?;
    let pre = parse_trat("-(t1+t2)/(2*t1*t2)").map_err(|e| e.to_string())?;
    let want = tanh_half_over_v(order);
    for (k, w) in want.iter().enumerate() {
        let e = pre.clone() * &TRat::rational(w.clone());
        let got = g.series.coeff(k as i64);
        ensure(got == e, || format!("v^{k}: got {got}, expected {e}"))?;
    }
    ensure(g.series.min_exp() >= 0, || format!("pole of order {}", -g.series.min_exp()))?;
    for n in 1..=3 {
        let ring = QuantumRing::new(n).map_err(|e| e.to_string())?;
        let b: Vec<Partition> = ring.basis().iter().cloned().collect();
        for x in &b {
            for y in &b {
                let ins = [x.clone(), y.clone(), b[0].clone()];
                let g = gw_transform(&ring, &ins, 6).map_err(|e| format!("n={n} {ins:?}: {e}"))?;
                g.u_coefficients().map_err(|e| format!("n={n} {ins:?}: {e}"))?;
            }
        }
    }
    Ok(())
}

fn invariants_plan(max_n: u32) -> Plan {
    let mut p = Plan::new(Suite::Invariants);
    let small = max_n.min(3);
    for n in 1..=small {
        p.add(format!("divisor equation n={n} order=8"), move || divisor_equation(n, 8));
        p.add(format!("recursion path independence n={n} order=8"), move || path_independence(n, 8));
        p.add(format!("associativity n={n}"), move || associativity(n));
        p.add(format!("fixed-structure splittings n={n} r=5"), move || splitting_check(n, 5));
    }
    if max_n >= 2 {
        p.add("GW transform n=2 order=10", || gw_check(10));
    }
    p
}

/// Residual of the formal solution through `order` at exact rational points,
/// plus the symbolic residual at small order.
pub fn qde_residuals(n: u32, order: usize, symbolic_order: usize) -> Result<(), String> {
    for (t1, t2) in generic_points() {
        let f = formal_solution_at(n, order, Some((&t1, &t2))).map_err(|e| e.to_string())?;
        f.residual_check().map_err(|e| format!("n={n} at ({t1}, {t2}): {e}"))?;
    }
    let f = formal_solution(n, symbolic_order).map_err(|e| e.to_string())?;
    f.residual_check().map_err(|e| format!("n={n} symbolic: {e}"))
}

/// `{0, ∞}` and the primitive `k`-th roots of `-q = 1` for `2 ≤ k ≤ n`.
pub fn singularity_check(n: u32) -> Result<(), String> {
    let got = singularities(n);
    let mut want = vec![Singularity::Zero, Singularity::Infinity];
    for k in 2..=n as usize {
        want.extend((1..k).filter(|j| num_integer::gcd(*j, k) == 1).map(|j| Singularity::RootOfUnity { k, j }));
    }
    want.sort();
    ensure(got == want, || format!("n={n}: {:?}", got.iter().map(|s| s.to_string()).collect::<Vec<_>>()))
}

/// Symbolic order used for the formal solution at each `n`.
fn symbolic_order(n: u32) -> usize {
    match n {
        0..=2 => 8,
        3 => 4,
        _ => 2,
    }
}

fn qde_plan(max_n: u32) -> Plan {
    let mut p = Plan::new(Suite::Qde);
    for n in 1..=max_n.min(4) {
        p.add(format!("formal solution residual n={n} order=20"), move || qde_residuals(n, 20, symbolic_order(n)));
    }
    for n in 1..=max_n.min(5) {
        p.add(format!("singular points n={n}"), move || singularity_check(n));
    }
    p
}

pub const MONODROMY_TOL: f64 = 1e-10;

/// Spectrum of the monodromy around `q = 0` against `exp(-2πi c(λ))`.
pub fn monodromy_at_zero(n: u32, t1: &Rational, t2: &Rational) -> Result<f64, String> {
    let lp = Loop::circle(Complex64::new(0.0, 0.0), 0.5);
    let r = monodromy_probe(n, t1, t2, &lp, MONODROMY_TOL).map_err(|e| e.to_string())?;
    ensure(r.est_error < 1e-8, || format!("integration error estimate {:.2e}", r.est_error))?;
    let d = spectrum_distance(&r.eigenvalues, &residue_eigenvalues(n, t1, t2));
    ensure(d < 1e-6, || format!("n={n} at ({t1}, {t2}): spectrum off by {d:.3e}"))?;
    Ok(d)
}

/// Largest `|M - I|` over loops around roots of unity, for integral `t1 + t2`.
pub fn root_of_unity_distance(n: u32, t1: &Rational, t2: &Rational) -> Result<f64, String> {
    let r = commutator_probe(n, t1, t2, MONODROMY_TOL).map_err(|e| e.to_string())?;
    Ok(r.max_root_distance_to_identity)
}

fn monodromy_plan(max_n: u32) -> Plan {
    let mut p = Plan::new(Suite::Monodromy);
    for n in 2..=max_n.min(3) {
        p.add(format!("spectrum around 0 n={n}"), move || {
            for (t1, t2) in generic_points() {
                monodromy_at_zero(n, &t1, &t2)?;
            }
            Ok::<(), String>(())
        });
        p.add_outcome(format!("roots of unity with t1+t2 integral n={n}"), move || {
            let mut worst = 0.0f64;
            for (t1, t2) in [(rat(1, 3), rat(2, 3)), (rat(2, 7), rat(-9, 7))] {
                match root_of_unity_distance(n, &t1, &t2) {
                    Ok(d) => worst = worst.max(d),
                    Err(e) => return Outcome::Fail(e),
                }
            }
            if worst < 1e-5 {
                Outcome::Pass
            } else {
                Outcome::Finding(format!("monodromy differs from the identity by {worst:.3e}"))
            }
        });
    }
    p
}

fn plan(suite: Suite, max_n: u32) -> Vec<Plan> {
    match suite {
        Suite::Operators => vec![operators_plan(max_n)],
        Suite::Jack => vec![jack_plan(max_n)],
        Suite::Invariants => vec![invariants_plan(max_n)],
        Suite::Fourier => vec![fourier_plan(max_n)],
        Suite::Jj => vec![jj_plan(max_n)],
        Suite::Qde => vec![qde_plan(max_n)],
        Suite::Monodromy => vec![monodromy_plan(max_n)],
        Suite::All => Suite::NAMED.iter().flat_map(|&s| plan(s, max_n)).collect(),
    }
}

/// Runs every check of `suite` for sizes up to `max_n`.
pub fn run(suite: Suite, max_n: u32) -> Report {
    let jobs: Vec<(Suite, String, Job)> =
        plan(suite, max_n).into_iter().flat_map(|p| p.jobs.into_iter().map(move |(n, j)| (p.suite, n, j))).collect();
    let checks = jobs
        .into_par_iter()
        .map(|(suite, name, job)| CheckResult { suite, name, outcome: job() })
        .collect();
    Report { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::NAMED.iter().chain(std::iter::once(&Suite::All)) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), *s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn tanh_series() {
        let t = tanh_half_over_v(4);
        assert_eq!(t, vec![rat(1, 2), rat(0, 1), rat(-1, 24), rat(0, 1), rat(1, 240)]);
    }

    #[test]
    fn small_suites_pass() {
        let r = run(Suite::Operators, 2);
        assert!(r.passed(), "{:?}", r.first_failure());
        assert!(run(Suite::Fourier, 4).passed());
    }
}
