//! Control functions ψ, φ and the contraction conditions on self-maps.
//!
//! A map `f` is ψ-φ contractive when, for all `x, y` and `t > 0`,
//!
//! ```text
//! μ(x, y, t) > 0  ⇒  ψ(μ(f(x), f(y), t)) ≥ μ(x, y, t)
//! ν(x, y, t) < 1  ⇒  φ(ν(f(x), f(y), t)) ≤ ν(x, y, t)
//! ```
//!
//! with `ψ(s) < s < φ(s)` on `(0, 1)`.
//!
//! A k-contraction shrinks the reciprocal gap of μ by `k` and, symmetrically,
//! the image ν-gap `1/ν_f - 1` is at least `(1/k)(1/ν - 1)`. On the standard
//! space both halves reduce to `d(f(x), f(y)) ≤ k d(x, y)`.
//!
//! # Converting a k-contraction
//!
//! Solving `1/μ_f - 1 ≤ k (1/μ - 1)` for `μ_f` gives `μ_f ≥ μ / (k + (1-k) μ)`,
//! i.e. `μ_f ≥ φ_k(μ)` with the Möbius map `φ_k(s) = s / ((1-k) s + k)`. Its
//! inverse `ψ_k(s) = k s / (1 - (1-k) s)` is increasing, so `ψ_k(μ_f) ≥ μ`.
//! The ν half is the mirror image: `ν_f ≤ ψ_k(ν)`, hence `φ_k(ν_f) ≤ ν`.
//! Both maps fix 0 and 1 and satisfy `ψ_k(s) < s < φ_k(s)` on `(0, 1)`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::audit::{shrink_point, shrink_scalar, SamplerConfig, MAX_WITNESSES};
use crate::solver::IterationTrace;
use crate::space::{IFSpace, Point, PointDomain};
use crate::{Error, Result, TOL};

#[derive(Clone)]
pub enum ControlFn {
    /// `k s / (1 - (1 - k) s)`
    PsiFromK(f64),
    /// `s / ((1 - k) s + k)`
    PhiFromK(f64),
    /// `s^p`
    Power(f64),
    Identity,
    Custom {
        name: String,
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl fmt::Debug for ControlFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl ControlFn {
    pub fn custom(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        ControlFn::Custom {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self {
            ControlFn::PsiFromK(k) => k * s / (1.0 - (1.0 - k) * s),
            ControlFn::PhiFromK(k) => s / ((1.0 - k) * s + k),
            ControlFn::Power(p) => s.powf(*p),
            ControlFn::Identity => s,
            ControlFn::Custom { f, .. } => f(s),
        }
    }

    pub fn name(&self) -> String {
        match self {
            ControlFn::PsiFromK(k) => format!("psi_k(k={k})"),
            ControlFn::PhiFromK(k) => format!("phi_k(k={k})"),
            ControlFn::Power(p) => format!("power(p={p})"),
            ControlFn::Identity => "identity".into(),
            ControlFn::Custom { name, .. } => name.clone(),
        }
    }
}

fn check_k(k: f64) -> Result<()> {
    if k > 0.0 && k < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("contractive constant k = {k} must lie in (0, 1)")))
    }
}

/// ψ induced by a k-contraction (see the module docs for the derivation).
pub fn psi_from_k(k: f64) -> Result<ControlFn> {
    check_k(k)?;
    Ok(ControlFn::PsiFromK(k))
}

/// φ induced by a k-contraction.
pub fn phi_from_k(k: f64) -> Result<ControlFn> {
    check_k(k)?;
    Ok(ControlFn::PhiFromK(k))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    FromK(f64),
    Custom,
}

#[derive(Debug, Clone)]
pub struct PsiPhiPair {
    pub psi: ControlFn,
    pub phi: ControlFn,
    pub provenance: Provenance,
}

impl PsiPhiPair {
    pub fn from_k(k: f64) -> Result<Self> {
        Ok(PsiPhiPair {
            psi: psi_from_k(k)?,
            phi: phi_from_k(k)?,
            provenance: Provenance::FromK(k),
        })
    }

    pub fn custom(psi: ControlFn, phi: ControlFn) -> Self {
        PsiPhiPair {
            psi,
            phi,
            provenance: Provenance::Custom,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KContraction(f64);

impl KContraction {
    pub fn new(k: f64) -> Result<Self> {
        check_k(k)?;
        Ok(KContraction(k))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// A map `X → X`, either tabulated or from the closed-form catalogue.
#[derive(Clone)]
pub enum SelfMap {
    /// `i ↦ images[i]` on a finite domain.
    Table(Vec<usize>),
    /// `x ↦ factor · x`
    Scale(f64),
    /// `x ↦ clamp(slope · x + offset, lo, hi)` on an interval.
    AffineClamped { slope: f64, offset: f64 },
    Constant(Point),
    Identity,
    Closure {
        name: String,
        f: Arc<dyn Fn(&Point) -> Point + Send + Sync>,
    },
}

impl fmt::Debug for SelfMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelfMap::Table(t) => f.debug_tuple("Table").field(t).finish(),
            SelfMap::Scale(c) => f.debug_tuple("Scale").field(c).finish(),
            SelfMap::AffineClamped { slope, offset } => f
                .debug_struct("AffineClamped")
                .field("slope", slope)
                .field("offset", offset)
                .finish(),
            SelfMap::Constant(p) => f.debug_tuple("Constant").field(p).finish(),
            SelfMap::Identity => f.write_str("Identity"),
            SelfMap::Closure { name, .. } => write!(f, "Closure({name})"),
        }
    }
}

impl SelfMap {
    pub fn closure(name: impl Into<String>, f: impl Fn(&Point) -> Point + Send + Sync + 'static) -> Self {
        SelfMap::Closure {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    /// `f(x)`, rejecting images outside the domain.
    pub fn apply(&self, domain: &PointDomain, x: &Point) -> Result<Point> {
        domain.check(x)?;
        let image = match (self, x) {
            (SelfMap::Table(images), Point::Index(i)) => Point::Index(
                *images
                    .get(*i)
                    .ok_or_else(|| Error::domain(format!("table has no image for #{i}")))?,
            ),
            (SelfMap::Scale(c), Point::Real(v)) => Point::Real(c * v),
            (SelfMap::AffineClamped { slope, offset }, Point::Real(v)) => {
                let PointDomain::RealInterval { lo, hi } = domain else {
                    unreachable!("real points only live in intervals")
                };
                Point::Real((slope * v + offset).clamp(*lo, *hi))
            }
            (SelfMap::Constant(c), _) => *c,
            (SelfMap::Identity, _) => *x,
            (SelfMap::Closure { f, .. }, _) => f(x),
            (map, _) => {
                return Err(Error::domain(format!("map {map:?} is not defined on point {x}")));
            }
        };
        if !domain.contains(&image) {
            return Err(Error::domain(format!("f({x}) = {image} escapes the domain")));
        }
        Ok(image)
    }

    /// Checks that a table covers a finite domain exactly.
    pub fn validate(&self, domain: &PointDomain) -> Result<()> {
        match (self, domain.len()) {
            (SelfMap::Table(images), Some(n)) => {
                if images.len() != n {
                    return Err(Error::domain(format!("table has {} entries for {n} points", images.len())));
                }
                if let Some(bad) = images.iter().find(|&&i| i >= n) {
                    return Err(Error::domain(format!("table image {bad} is outside the domain")));
                }
                Ok(())
            }
            (SelfMap::Table(_), None) => Err(Error::domain("table maps need a finite domain")),
            (SelfMap::Scale(_) | SelfMap::AffineClamped { .. }, Some(_)) => {
                Err(Error::domain("scale/affine maps need an interval domain"))
            }
            (SelfMap::Constant(c), _) => domain.check(c),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Constant,
    NonDecreasing,
    NonIncreasing,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionAdmissibility {
    pub function: String,
    pub range_ok: bool,
    /// `ψ(s) < s` (resp. `φ(s) > s`) on every interior grid point.
    pub strict_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict_witness: Option<f64>,
    pub monotonicity: Monotonicity,
    pub continuity_ok: bool,
    pub max_jump: f64,
}

impl FunctionAdmissibility {
    pub fn admissible(&self) -> bool {
        self.range_ok && self.strict_ok && self.continuity_ok
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub grid_size: usize,
    pub psi: FunctionAdmissibility,
    pub phi: FunctionAdmissibility,
}

impl AdmissibilityReport {
    pub fn admissible(&self) -> bool {
        self.psi.admissible() && self.phi.admissible()
    }
}

/// Grid audit of a (ψ, φ) pair. Monotonicity is recorded but not required.
pub fn check_admissible(pair: &PsiPhiPair, grid_size: usize) -> Result<AdmissibilityReport> {
    if grid_size < 2 {
        return Err(Error::precondition("grid_size must be at least 2"));
    }
    Ok(AdmissibilityReport {
        grid_size,
        psi: audit_control(&pair.psi, grid_size, |s, v| v < s - TOL),
        phi: audit_control(&pair.phi, grid_size, |s, v| v > s + TOL),
    })
}

fn audit_control(f: &ControlFn, n: usize, strict: impl Fn(f64, f64) -> bool) -> FunctionAdmissibility {
    let xs: Vec<f64> = (0..=n).map(|j| j as f64 / n as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&s| f.eval(s)).collect();

    let range_ok = ys.iter().all(|y| (-TOL..=1.0 + TOL).contains(y));

    let strict_witness = xs[1..n]
        .iter()
        .zip(&ys[1..n])
        .filter(|(s, v)| !strict(**s, **v))
        .map(|(s, _)| *s)
        .min_by(|a, b| (a - 0.5).abs().total_cmp(&(b - 0.5).abs()));

    let (mut up, mut down) = (false, false);
    let mut max_jump = 0.0f64;
    let mut jump_at = 0;
    for (i, w) in ys.windows(2).enumerate() {
        let delta = w[1] - w[0];
        up |= delta > TOL;
        down |= delta < -TOL;
        if delta.abs() > max_jump {
            max_jump = delta.abs();
            jump_at = i;
        }
    }
    let monotonicity = match (up, down) {
        (false, false) => Monotonicity::Constant,
        (true, false) => Monotonicity::NonDecreasing,
        (false, true) => Monotonicity::NonIncreasing,
        (true, true) => Monotonicity::Mixed,
    };

    // A genuine jump survives refinement of the worst cell; a continuous
    // function spreads it over the sub-cells.
    const SUB: usize = 64;
    let (a, b) = (xs[jump_at], xs[jump_at + 1]);
    let mut sub_jump = 0.0f64;
    let mut prev = f.eval(a);
    for j in 1..=SUB {
        let v = f.eval(a + (b - a) * j as f64 / SUB as f64);
        sub_jump = sub_jump.max((v - prev).abs());
        prev = v;
    }
    let continuity_ok = max_jump <= 1e-9 || sub_jump < 0.5 * max_jump;

    FunctionAdmissibility {
        function: f.name(),
        range_ok,
        strict_ok: strict_witness.is_none(),
        strict_witness,
        monotonicity,
        continuity_ok,
        max_jump,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Grade {
    Mu,
    Nu,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContractionWitness {
    pub x: Point,
    pub y: Point,
    pub t: f64,
    pub grade: Grade,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractionReport {
    pub condition: String,
    pub map: String,
    pub evaluated: usize,
    /// Samples where an inequality was undefined (a zero denominator).
    pub skipped: usize,
    pub violation_count: usize,
    pub witnesses: Vec<ContractionWitness>,
}

impl ContractionReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }
}

enum Outcome {
    Ok,
    Skipped,
    Violated(f64, f64),
}

/// Samples `(x, y) × t_grid` and collects violations of one inequality family.
fn sample_condition(
    space: &IFSpace,
    f: &SelfMap,
    sampler: &SamplerConfig,
    condition: &str,
    check: impl Fn(Grade, &Point, &Point, f64) -> Result<Outcome>,
) -> Result<ContractionReport> {
    sampler.validate()?;
    f.validate(&space.domain)?;
    let mut report = ContractionReport {
        condition: condition.into(),
        map: format!("{f:?}"),
        evaluated: 0,
        skipped: 0,
        violation_count: 0,
        witnesses: Vec::new(),
    };
    let mut raw = Vec::new();
    for [x, y] in sampler.pairs(&space.domain) {
        for &t in &sampler.t_grid {
            for grade in [Grade::Mu, Grade::Nu] {
                report.evaluated += 1;
                match check(grade, &x, &y, t)? {
                    Outcome::Ok => {}
                    Outcome::Skipped => report.skipped += 1,
                    Outcome::Violated(lhs, rhs) => {
                        report.violation_count += 1;
                        if raw.len() < MAX_WITNESSES {
                            raw.push(ContractionWitness { x, y, t, grade, lhs, rhs });
                        }
                    }
                }
            }
        }
    }

    let mut grid = sampler.t_grid.clone();
    grid.sort_by(f64::total_cmp);
    let t_anchor = grid[grid.len() / 2];
    let domain = &space.domain;
    let fails = |w: &ContractionWitness| matches!(check(w.grade, &w.x, &w.y, w.t), Ok(Outcome::Violated(..)));
    for mut w in raw {
        for _ in 0..crate::audit::MAX_SHRINK_ROUNDS {
            let before = w;
            w.y = shrink_point(domain, w.y, w.x, |p| fails(&ContractionWitness { y: *p, ..w }));
            w.x = shrink_point(domain, w.x, w.y, |p| fails(&ContractionWitness { x: *p, ..w }));
            w.t = shrink_scalar(w.t, t_anchor, |t| fails(&ContractionWitness { t, ..w }));
            if w == before {
                break;
            }
        }
        if let Outcome::Violated(lhs, rhs) = check(w.grade, &w.x, &w.y, w.t)? {
            w.lhs = lhs;
            w.rhs = rhs;
        }
        report.witnesses.push(w);
    }
    Ok(report)
}

fn images(space: &IFSpace, f: &SelfMap, x: &Point, y: &Point) -> Result<(Point, Point)> {
    Ok((f.apply(&space.domain, x)?, f.apply(&space.domain, y)?))
}

/// Samples the two ψ-φ implications. An implication whose antecedent fails
/// (`μ = 0` or `ν = 1`) holds vacuously.
pub fn check_psi_phi_contractive(
    space: &IFSpace,
    f: &SelfMap,
    pair: &PsiPhiPair,
    sampler: &SamplerConfig,
) -> Result<ContractionReport> {
    sample_condition(space, f, sampler, "psi-phi", |grade, x, y, t| {
        let (fx, fy) = images(space, f, x, y)?;
        psi_phi_outcome(space, pair, grade, (x, y), (&fx, &fy), t)
    })
}

fn psi_phi_outcome(
    space: &IFSpace,
    pair: &PsiPhiPair,
    grade: Grade,
    (x, y): (&Point, &Point),
    (fx, fy): (&Point, &Point),
    t: f64,
) -> Result<Outcome> {
    Ok(match grade {
        Grade::Mu => {
            let mu = space.eval_mu(x, y, t)?.get();
            if mu <= 0.0 {
                return Ok(Outcome::Ok);
            }
            let lhs = pair.psi.eval(space.eval_mu(fx, fy, t)?.get());
            if lhs < mu - TOL {
                Outcome::Violated(lhs, mu)
            } else {
                Outcome::Ok
            }
        }
        Grade::Nu => {
            let nu = space.eval_nu(x, y, t)?.get();
            if nu >= 1.0 {
                return Ok(Outcome::Ok);
            }
            let lhs = pair.phi.eval(space.eval_nu(fx, fy, t)?.get());
            if lhs > nu + TOL {
                Outcome::Violated(lhs, nu)
            } else {
                Outcome::Ok
            }
        }
    })
}

/// Samples the k-contraction inequalities
/// `1/μ_f - 1 ≤ k (1/μ - 1)` and `1/ν_f - 1 ≥ (1/k)(1/ν - 1)`.
///
/// Samples with a zero grade in either inequality are skipped. The
/// tolerance scales with the magnitude of the right-hand side, since the
/// reciprocal gaps grow without bound as points coincide.
pub fn check_k_contractive(
    space: &IFSpace,
    f: &SelfMap,
    k: KContraction,
    sampler: &SamplerConfig,
) -> Result<ContractionReport> {
    sample_condition(space, f, sampler, "k-contractive", |grade, x, y, t| {
        let (fx, fy) = images(space, f, x, y)?;
        k_outcome(space, k.get(), grade, (x, y), (&fx, &fy), t)
    })
}

fn k_outcome(
    space: &IFSpace,
    k: f64,
    grade: Grade,
    (x, y): (&Point, &Point),
    (fx, fy): (&Point, &Point),
    t: f64,
) -> Result<Outcome> {
    Ok(match grade {
        Grade::Mu => {
            let (mu, mu_f) = (space.eval_mu(x, y, t)?.get(), space.eval_mu(fx, fy, t)?.get());
            if mu == 0.0 || mu_f == 0.0 {
                return Ok(Outcome::Skipped);
            }
            let lhs = 1.0 / mu_f - 1.0;
            let rhs = k * (1.0 / mu - 1.0);
            if lhs > rhs + TOL * rhs.abs().max(1.0) {
                Outcome::Violated(lhs, rhs)
            } else {
                Outcome::Ok
            }
        }
        Grade::Nu => {
            let (nu, nu_f) = (space.eval_nu(x, y, t)?.get(), space.eval_nu(fx, fy, t)?.get());
            if nu == 0.0 || nu_f == 0.0 {
                return Ok(Outcome::Skipped);
            }
            let lhs = 1.0 / nu_f - 1.0;
            let rhs = (1.0 / nu - 1.0) / k;
            if lhs < rhs - TOL * rhs.abs().max(1.0) {
                Outcome::Violated(lhs, rhs)
            } else {
                Outcome::Ok
            }
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SequenceCheck {
    pub holds: bool,
    pub first_failure: Option<usize>,
}

fn scan_sequence(
    trace: &IterationTrace,
    mut ok_at: impl FnMut(&Point, &Point, &Point, f64) -> Result<bool>,
) -> Result<SequenceCheck> {
    let pts = &trace.points;
    if pts.len() < 3 {
        return Err(Error::precondition(format!(
            "sequence check needs at least 3 points, trace has {}",
            pts.len()
        )));
    }
    for n in 0..pts.len() - 2 {
        for &t in &trace.t_grid {
            if !ok_at(&pts[n], &pts[n + 1], &pts[n + 2], t)? {
                return Ok(SequenceCheck {
                    holds: false,
                    first_failure: Some(n),
                });
            }
        }
    }
    Ok(SequenceCheck {
        holds: true,
        first_failure: None,
    })
}

/// Whether the orbit is a ψ-φ contractive sequence:
/// `ψ(μ(x₁, x₂, t)) ≥ μ(x₁, x₀, t)` and `φ(ν(x₁, x₂, t)) ≤ ν(x₁, x₀, t)`
/// at every index and grid `t`.
pub fn is_contractive_sequence(space: &IFSpace, trace: &IterationTrace, pair: &PsiPhiPair) -> Result<SequenceCheck> {
    scan_sequence(trace, |x0, x1, x2, t| {
        let mu_ok = pair.psi.eval(space.eval_mu(x1, x2, t)?.get()) >= space.eval_mu(x1, x0, t)?.get() - TOL;
        let nu_ok = pair.phi.eval(space.eval_nu(x1, x2, t)?.get()) <= space.eval_nu(x1, x0, t)?.get() + TOL;
        Ok(mu_ok && nu_ok)
    })
}

/// The k-contraction variant of [`is_contractive_sequence`], same skipping
/// rule as [`check_k_contractive`].
pub fn is_k_contractive_sequence(space: &IFSpace, trace: &IterationTrace, k: KContraction) -> Result<SequenceCheck> {
    scan_sequence(trace, |x0, x1, x2, t| {
        for grade in [Grade::Mu, Grade::Nu] {
            if let Outcome::Violated(..) = k_outcome(space, k.get(), grade, (x0, x1), (x1, x2), t)? {
                return Ok(false);
            }
        }
        Ok(true)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::{TConorm, TNorm};
    use crate::space::{crisp_threshold_space, standard_space};

    fn unit() -> IFSpace {
        standard_space(PointDomain::interval(0.0, 1.0).unwrap(), TNorm::Product, TConorm::ProbabilisticSum)
    }

    fn sampler(n: usize) -> SamplerConfig {
        SamplerConfig::random(n, vec![0.1, 1.0, 10.0], 42)
    }

    #[test]
    fn control_function_values() {
        let psi = psi_from_k(0.5).unwrap();
        let phi = phi_from_k(0.5).unwrap();
        assert!((psi.eval(0.5) - 1.0 / 3.0).abs() < TOL);
        assert!((phi.eval(0.5) - 2.0 / 3.0).abs() < TOL);
        assert_eq!(psi.eval(1.0), 1.0);
        assert_eq!(psi.eval(0.0), 0.0);
        assert_eq!(phi.eval(0.0), 0.0);
        assert_eq!(phi.eval(1.0), 1.0);
    }

    #[test]
    fn k_out_of_range() {
        for k in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(psi_from_k(k).is_err());
            assert!(phi_from_k(k).is_err());
            assert!(KContraction::new(k).is_err());
        }
    }

    #[test]
    fn admissibility_of_k_pair() {
        let report = check_admissible(&PsiPhiPair::from_k(0.5).unwrap(), 100).unwrap();
        assert!(report.admissible());
        assert_eq!(report.psi.monotonicity, Monotonicity::NonDecreasing);
        assert_eq!(report.phi.monotonicity, Monotonicity::NonDecreasing);
    }

    #[test]
    fn admissibility_failures_carry_witness() {
        let pair = PsiPhiPair::custom(ControlFn::Identity, ControlFn::Power(2.0));
        let report = check_admissible(&pair, 10).unwrap();
        assert_eq!(report.psi.strict_witness, Some(0.5));
        assert_eq!(report.phi.strict_witness, Some(0.5));
        assert!(!report.admissible());
        assert!(check_admissible(&pair, 1).is_err());
    }

    #[test]
    fn step_function_fails_continuity() {
        let psi = ControlFn::custom("step", |s| if s < 0.37 { 0.0 } else { 0.9 * s });
        let pair = PsiPhiPair::custom(psi, ControlFn::Power(0.5));
        let report = check_admissible(&pair, 50).unwrap();
        assert!(!report.psi.continuity_ok);
        assert!(report.phi.continuity_ok);
    }

    #[test]
    fn halving_map_is_psi_phi_contractive() {
        let r = check_psi_phi_contractive(&unit(), &SelfMap::Scale(0.5), &PsiPhiPair::from_k(0.5).unwrap(), &sampler(10_000))
            .unwrap();
        assert!(r.passed(), "{}", r.to_json());
    }

    #[test]
    fn identity_map_is_not() {
        let space = unit();
        let r = check_psi_phi_contractive(&space, &SelfMap::Identity, &PsiPhiPair::from_k(0.5).unwrap(), &sampler(200))
            .unwrap();
        assert!(!r.passed());
        assert!(!r.witnesses.is_empty());
        for w in &r.witnesses {
            let mu = space.eval_mu(&w.x, &w.y, w.t).unwrap().get();
            assert!(mu > 0.0 && mu < 1.0);
        }
    }

    #[test]
    fn crisp_space_admits_every_table_map() {
        let space = crisp_threshold_space(PointDomain::line(4).unwrap(), TNorm::Product, TConorm::ProbabilisticSum).unwrap();
        let pair = PsiPhiPair::from_k(0.5).unwrap();
        let s = SamplerConfig::exhaustive(vec![0.5, 1.0, 2.0]);
        for table in [vec![1, 2, 3, 0], vec![3, 3, 0, 1], vec![0, 1, 2, 3]] {
            let r = check_psi_phi_contractive(&space, &SelfMap::Table(table), &pair, &s).unwrap();
            assert!(r.passed());
        }
    }

    #[test]
    fn k_contraction_examples() {
        let space = unit();
        let half = SelfMap::Scale(0.5);
        assert!(check_k_contractive(&space, &half, KContraction::new(0.5).unwrap(), &sampler(10_000)).unwrap().passed());
        let r = check_k_contractive(&space, &half, KContraction::new(0.4).unwrap(), &sampler(500)).unwrap();
        assert!(!r.passed());
        assert!(r.witnesses.iter().all(|w| w.x != w.y));
        let constant = SelfMap::Constant(Point::Real(0.3));
        let r = check_k_contractive(&space, &constant, KContraction::new(0.1).unwrap(), &sampler(500)).unwrap();
        assert!(r.passed());
        assert!(r.skipped > 0);
    }

    #[test]
    fn tightest_k_is_the_scale_factor() {
        let space = unit();
        let f = SelfMap::Scale(0.5);
        let s = sampler(2_000);
        assert!(check_k_contractive(&space, &f, KContraction::new(0.5).unwrap(), &s).unwrap().passed());
        assert!(!check_k_contractive(&space, &f, KContraction::new(0.49).unwrap(), &s).unwrap().passed());
    }

    #[test]
    fn map_validation() {
        let line = PointDomain::line(3).unwrap();
        assert!(SelfMap::Table(vec![0, 1]).validate(&line).is_err());
        assert!(SelfMap::Table(vec![0, 1, 3]).validate(&line).is_err());
        assert!(SelfMap::Scale(0.5).validate(&line).is_err());
        let unit = PointDomain::interval(0.0, 1.0).unwrap();
        assert!(SelfMap::Scale(2.0).apply(&unit, &Point::Real(0.75)).is_err());
        assert_eq!(
            SelfMap::AffineClamped { slope: 2.0, offset: 0.0 }.apply(&unit, &Point::Real(0.75)).unwrap(),
            Point::Real(1.0)
        );
    }
}
