//! Continuous triangular norms and conorms on the unit interval.
//!
//! The three classical t-norms (product, minimum, Łukasiewicz) and their
//! De Morgan duals are built in. Custom operations are accepted without
//! verification; [`check_norm_axioms`] is the explicit audit step.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{Error, Result, TOL};

/// A real number in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct UnitValue(f64);

impl UnitValue {
    pub const ZERO: UnitValue = UnitValue(0.0);
    pub const ONE: UnitValue = UnitValue(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || !(0.0..=1.0).contains(&value) {
            return Err(Error::domain(format!("{value} is not in [0, 1]")));
        }
        Ok(UnitValue(value))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl fmt::Display for UnitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A user supplied binary operation on `[0, 1]`.
#[derive(Clone)]
pub struct CustomOp {
    pub name: String,
    op: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

impl CustomOp {
    pub fn new(name: impl Into<String>, op: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        CustomOp {
            name: name.into(),
            op: Arc::new(op),
        }
    }

    fn call(&self, a: f64, b: f64) -> f64 {
        (self.op)(a, b)
    }
}

impl fmt::Debug for CustomOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomOp").field("name", &self.name).finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum TNorm {
    /// `a * b`
    Product,
    /// `min(a, b)`
    Minimum,
    /// `max(a + b - 1, 0)`
    Lukasiewicz,
    Custom(CustomOp),
}

#[derive(Debug, Clone)]
pub enum TConorm {
    /// `a + b - a * b`
    ProbabilisticSum,
    /// `max(a, b)`
    Maximum,
    /// `min(a + b, 1)`
    BoundedSum,
    Custom(CustomOp),
}

impl TNorm {
    /// Evaluates without range validation.
    pub fn eval(&self, a: f64, b: f64) -> f64 {
        match self {
            TNorm::Product => a * b,
            TNorm::Minimum => a.min(b),
            TNorm::Lukasiewicz => (a + b - 1.0).max(0.0),
            TNorm::Custom(op) => op.call(a, b),
        }
    }

    pub fn apply(&self, a: UnitValue, b: UnitValue) -> Result<UnitValue> {
        checked(&self.name(), self.eval(a.0, b.0), a.0, b.0)
    }

    pub fn name(&self) -> String {
        match self {
            TNorm::Product => "product".into(),
            TNorm::Minimum => "minimum".into(),
            TNorm::Lukasiewicz => "lukasiewicz".into(),
            TNorm::Custom(op) => op.name.clone(),
        }
    }

    /// The De Morgan dual `a ◇ b = 1 - ((1 - a) * (1 - b))`.
    pub fn dual(&self) -> TConorm {
        match self {
            TNorm::Product => TConorm::ProbabilisticSum,
            TNorm::Minimum => TConorm::Maximum,
            TNorm::Lukasiewicz => TConorm::BoundedSum,
            TNorm::Custom(op) => {
                let inner = op.clone();
                TConorm::Custom(CustomOp::new(format!("dual({})", op.name), move |a, b| {
                    1.0 - inner.call(1.0 - a, 1.0 - b)
                }))
            }
        }
    }
}

impl TConorm {
    pub fn eval(&self, a: f64, b: f64) -> f64 {
        match self {
            TConorm::ProbabilisticSum => a + b - a * b,
            TConorm::Maximum => a.max(b),
            TConorm::BoundedSum => (a + b).min(1.0),
            TConorm::Custom(op) => op.call(a, b),
        }
    }

    pub fn apply(&self, a: UnitValue, b: UnitValue) -> Result<UnitValue> {
        checked(&self.name(), self.eval(a.0, b.0), a.0, b.0)
    }

    pub fn name(&self) -> String {
        match self {
            TConorm::ProbabilisticSum => "probabilistic_sum".into(),
            TConorm::Maximum => "maximum".into(),
            TConorm::BoundedSum => "bounded_sum".into(),
            TConorm::Custom(op) => op.name.clone(),
        }
    }
}

fn checked(name: &str, value: f64, a: f64, b: f64) -> Result<UnitValue> {
    UnitValue::new(value)
        .map_err(|_| Error::domain(format!("{name}({a}, {b}) = {value} lies outside [0, 1]")))
}

pub fn tnorm_apply(norm: &TNorm, a: UnitValue, b: UnitValue) -> Result<UnitValue> {
    norm.apply(a, b)
}

pub fn tconorm_apply(conorm: &TConorm, a: UnitValue, b: UnitValue) -> Result<UnitValue> {
    conorm.apply(a, b)
}

pub fn dual_of(norm: &TNorm) -> TConorm {
    norm.dual()
}

/// Either half of a norm pair, for the shared axiom audit.
#[derive(Debug, Clone)]
pub enum NormOp {
    Norm(TNorm),
    Conorm(TConorm),
}

impl NormOp {
    fn eval(&self, a: f64, b: f64) -> f64 {
        match self {
            NormOp::Norm(n) => n.eval(a, b),
            NormOp::Conorm(c) => c.eval(a, b),
        }
    }

    fn identity(&self) -> f64 {
        match self {
            NormOp::Norm(_) => 1.0,
            NormOp::Conorm(_) => 0.0,
        }
    }

    pub fn name(&self) -> String {
        match self {
            NormOp::Norm(n) => format!("t-norm {}", n.name()),
            NormOp::Conorm(c) => format!("t-conorm {}", c.name()),
        }
    }
}

impl From<TNorm> for NormOp {
    fn from(n: TNorm) -> Self {
        NormOp::Norm(n)
    }
}

impl From<TConorm> for NormOp {
    fn from(c: TConorm) -> Self {
        NormOp::Conorm(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NormAxiom {
    #[serde(rename = "range")]
    Range,
    #[serde(rename = "i-commutative")]
    Commutative,
    #[serde(rename = "i-associative")]
    Associative,
    #[serde(rename = "ii-continuous")]
    Continuous,
    #[serde(rename = "iii-identity")]
    Identity,
    #[serde(rename = "iv-monotone")]
    Monotone,
}

impl NormAxiom {
    pub const ALL: [NormAxiom; 6] = [
        NormAxiom::Range,
        NormAxiom::Commutative,
        NormAxiom::Associative,
        NormAxiom::Continuous,
        NormAxiom::Identity,
        NormAxiom::Monotone,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormAxiomCheck {
    pub axiom: NormAxiom,
    pub passed: bool,
    pub violations: usize,
    /// Operands of the first (shrunk) violation; unused slots are `None`.
    pub witness: Option<[Option<f64>; 4]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub operation: String,
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<NormAxiomCheck>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, axiom: NormAxiom) -> &NormAxiomCheck {
        self.checks.iter().find(|c| c.axiom == axiom).expect("every axiom is reported")
    }
}

/// Perturbation radius for the continuity probe.
const CONTINUITY_STEP: f64 = 1e-3;

/// Samples the four axioms (plus range containment) on `sample_count`
/// seeded random operand tuples.
///
/// Continuity is probed with a unit Lipschitz bound in the L1 norm, which the
/// three built-in pairs satisfy; a continuous custom operation with a larger
/// modulus will be flagged.
pub fn check_norm_axioms(op: &NormOp, sample_count: usize, seed: u64) -> Result<AxiomReport> {
    if sample_count == 0 {
        return Err(Error::precondition("sample_count must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tallies: Vec<(NormAxiom, usize, Option<[Option<f64>; 4]>)> =
        NormAxiom::ALL.iter().map(|&a| (a, 0, None)).collect();

    for _ in 0..sample_count {
        let v: [f64; 4] = [rng.random(), rng.random(), rng.random(), rng.random()];
        let dx: f64 = rng.random_range(-CONTINUITY_STEP..=CONTINUITY_STEP);
        let dy: f64 = rng.random_range(-CONTINUITY_STEP..=CONTINUITY_STEP);
        for (axiom, count, witness) in tallies.iter_mut() {
            let violated = violates(op, *axiom, &v, dx, dy);
            if violated {
                *count += 1;
                if witness.is_none() {
                    *witness = Some(shrink_norm_witness(op, *axiom, v, dx, dy));
                }
            }
        }
    }

    Ok(AxiomReport {
        operation: op.name(),
        samples: sample_count,
        seed,
        checks: tallies
            .into_iter()
            .map(|(axiom, violations, witness)| NormAxiomCheck {
                axiom,
                passed: violations == 0,
                violations,
                witness,
            })
            .collect(),
    })
}

fn violates(op: &NormOp, axiom: NormAxiom, v: &[f64; 4], dx: f64, dy: f64) -> bool {
    let [a, b, c, d] = *v;
    let f = |x: f64, y: f64| op.eval(x, y);
    match axiom {
        NormAxiom::Range => {
            let r = f(a, b);
            r.is_nan() || !(-TOL..=1.0 + TOL).contains(&r)
        }
        NormAxiom::Commutative => (f(a, b) - f(b, a)).abs() > TOL,
        NormAxiom::Associative => (f(f(a, b), c) - f(a, f(b, c))).abs() > TOL,
        NormAxiom::Continuous => {
            let a2 = (a + dx).clamp(0.0, 1.0);
            let b2 = (b + dy).clamp(0.0, 1.0);
            (f(a, b) - f(a2, b2)).abs() > (a - a2).abs() + (b - b2).abs() + TOL
        }
        NormAxiom::Identity => (f(a, op.identity()) - a).abs() > TOL,
        NormAxiom::Monotone => {
            let (lo_a, hi_a) = (a.min(c), a.max(c));
            let (lo_b, hi_b) = (b.min(d), b.max(d));
            f(lo_a, lo_b) > f(hi_a, hi_b) + TOL
        }
    }
}

/// Pulls each operand toward 1/2 while the violation persists.
fn shrink_norm_witness(
    op: &NormOp,
    axiom: NormAxiom,
    mut v: [f64; 4],
    dx: f64,
    dy: f64,
) -> [Option<f64>; 4] {
    let used = match axiom {
        NormAxiom::Range | NormAxiom::Commutative | NormAxiom::Continuous => 2,
        NormAxiom::Identity => 1,
        NormAxiom::Associative => 3,
        NormAxiom::Monotone => 4,
    };
    for i in 0..used {
        v[i] = crate::audit::shrink_scalar(v[i], 0.5, |cand| {
            let mut w = v;
            w[i] = cand;
            violates(op, axiom, &w, dx, dy)
        });
    }
    let mut out = [None; 4];
    for i in 0..used {
        out[i] = Some(v[i]);
    }
    if axiom == NormAxiom::Identity {
        out[1] = Some(op.identity());
    }
    out
}
