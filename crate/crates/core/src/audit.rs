//! Seeded falsification of the space axioms.
//!
//! Axioms are numbered `i` to `xi` as in the usual eleven-condition definition
//! of an intuitionistic fuzzy metric space; `NA-mu` / `NA-nu` are the strong
//! (single-`t`) triangle inequalities of the non-Archimedean variant.
//!
//! Readings fixed here:
//! * `iii` / `viii` use the `∀t` form for distinct points: `x ≠ y` is a
//!   violation only when `μ(x, y, t) = 1` (resp. `ν = 0`) at every grid `t`.
//! * `vii` (`ν > 0`) is only meaningful off the diagonal and uses the same
//!   grid-quantified form.
//! * `vi` / `xi` (continuity in `t`) are probed, never passed or failed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::space::{IFSpace, Point, PointDomain, TriangleMode};
use crate::{Error, Result, TOL};

/// Upper bound on shrink rounds.
pub const MAX_SHRINK_ROUNDS: usize = 64;
/// Witnesses retained per check.
pub const MAX_WITNESSES: usize = 10;
/// Size of the logarithmic `t` grid used by the continuity probe.
pub const CONTINUITY_GRID: usize = 64;

/// Moves `current` toward `anchor` while `still_fails` holds. The anchor
/// itself is tried first; after that each step halves the distance.
pub fn shrink_scalar(current: f64, anchor: f64, mut still_fails: impl FnMut(f64) -> bool) -> f64 {
    if current == anchor {
        return current;
    }
    if still_fails(anchor) {
        return anchor;
    }
    let mut cur = current;
    for _ in 0..MAX_SHRINK_ROUNDS {
        let cand = anchor + 0.5 * (cur - anchor);
        if cand == cur || !still_fails(cand) {
            break;
        }
        cur = cand;
    }
    cur
}

/// Point version of [`shrink_scalar`].
pub fn shrink_point(
    domain: &PointDomain,
    current: Point,
    anchor: Point,
    mut still_fails: impl FnMut(&Point) -> bool,
) -> Point {
    if domain.same_point(&current, &anchor) {
        return current;
    }
    if still_fails(&anchor) {
        return anchor;
    }
    let mut cur = current;
    for _ in 0..MAX_SHRINK_ROUNDS {
        let cand = domain.toward(&cur, &anchor);
        if cand == cur || !still_fails(&cand) {
            break;
        }
        cur = cand;
    }
    cur
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMode {
    /// Every point triple of a finite domain (an even lattice on intervals).
    ExhaustiveFinite,
    RandomUniform,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplerConfig {
    pub mode: SampleMode,
    pub sample_count: usize,
    pub t_grid: Vec<f64>,
    pub seed: u64,
}

impl SamplerConfig {
    pub fn random(sample_count: usize, t_grid: Vec<f64>, seed: u64) -> Self {
        SamplerConfig {
            mode: SampleMode::RandomUniform,
            sample_count,
            t_grid,
            seed,
        }
    }

    pub fn exhaustive(t_grid: Vec<f64>) -> Self {
        SamplerConfig {
            mode: SampleMode::ExhaustiveFinite,
            sample_count: 1,
            t_grid,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample_count == 0 {
            return Err(Error::precondition("sample_count must be at least 1"));
        }
        validate_grid(&self.t_grid)
    }

    /// Deterministic point triples for this configuration.
    pub fn triples(&self, domain: &PointDomain) -> Vec<[Point; 3]> {
        match self.mode {
            SampleMode::ExhaustiveFinite => {
                let side = match domain.len() {
                    Some(_) => 0,
                    None => ((self.sample_count as f64).cbrt().floor() as usize).max(2),
                };
                let pts = domain.lattice(side);
                let mut out = Vec::with_capacity(pts.len().pow(3));
                for x in &pts {
                    for y in &pts {
                        for z in &pts {
                            out.push([*x, *y, *z]);
                        }
                    }
                }
                out
            }
            SampleMode::RandomUniform => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                (0..self.sample_count)
                    .map(|_| [domain.sample(&mut rng), domain.sample(&mut rng), domain.sample(&mut rng)])
                    .collect()
            }
        }
    }

    /// Deterministic point pairs (exhaustive over a finite domain).
    pub fn pairs(&self, domain: &PointDomain) -> Vec<[Point; 2]> {
        match self.mode {
            SampleMode::ExhaustiveFinite => {
                let side = match domain.len() {
                    Some(_) => 0,
                    None => ((self.sample_count as f64).sqrt().floor() as usize).max(2),
                };
                let pts = domain.lattice(side);
                pts.iter().flat_map(|x| pts.iter().map(move |y| [*x, *y])).collect()
            }
            SampleMode::RandomUniform => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                (0..self.sample_count)
                    .map(|_| [domain.sample(&mut rng), domain.sample(&mut rng)])
                    .collect()
            }
        }
    }
}

pub(crate) fn validate_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::precondition("t_grid must not be empty"));
    }
    if let Some(t) = t_grid.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        return Err(Error::precondition(format!("t_grid value {t} is not a positive real")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AxiomId {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
    #[serde(rename = "iii")]
    III,
    #[serde(rename = "iv")]
    IV,
    #[serde(rename = "v")]
    V,
    #[serde(rename = "vi")]
    VI,
    #[serde(rename = "vii")]
    VII,
    #[serde(rename = "viii")]
    VIII,
    #[serde(rename = "ix")]
    IX,
    #[serde(rename = "x")]
    X,
    #[serde(rename = "xi")]
    XI,
    #[serde(rename = "NA-mu")]
    NaMu,
    #[serde(rename = "NA-nu")]
    NaNu,
}

impl AxiomId {
    pub const DEF: [AxiomId; 11] = [
        AxiomId::I,
        AxiomId::II,
        AxiomId::III,
        AxiomId::IV,
        AxiomId::V,
        AxiomId::VI,
        AxiomId::VII,
        AxiomId::VIII,
        AxiomId::IX,
        AxiomId::X,
        AxiomId::XI,
    ];

    fn uses_z(self) -> bool {
        matches!(self, AxiomId::V | AxiomId::X | AxiomId::NaMu | AxiomId::NaNu)
    }

    fn uses_s(self) -> bool {
        self.uses_z()
    }

    fn is_probe(self) -> bool {
        matches!(self, AxiomId::VI | AxiomId::XI)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Probed,
}

/// A concrete tuple at which a check was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub x: Point,
    pub y: Point,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<Point>,
    pub t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub axiom: AxiomId,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomCheck {
    pub axiom: AxiomId,
    pub status: Status,
    pub evaluated: usize,
    pub violation_count: usize,
    pub witnesses: Vec<Witness>,
    /// Largest jump between adjacent points of the probe grid (`vi`, `xi`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_jump: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub space: String,
    pub sampler: SamplerConfig,
    pub checks: Vec<AxiomCheck>,
}

impl AuditReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failing(&self) -> Vec<AxiomId> {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .map(|c| c.axiom)
            .collect()
    }

    pub fn check(&self, axiom: AxiomId) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }
}

/// Re-evaluates one axiom at `w` and returns `(lhs, rhs)` when violated.
///
/// `t_grid` supplies the `∀t` quantifier for `iii`, `vii`, `viii`.
pub fn violation_at(space: &IFSpace, axiom: AxiomId, w: &Witness, t_grid: &[f64]) -> Result<Option<(f64, f64)>> {
    let (x, y, t) = (&w.x, &w.y, w.t);
    let same = space.domain.same_point(x, y);
    let mu = |a: &Point, b: &Point, t: f64| space.eval_mu(a, b, t).map(|v| v.get());
    let nu = |a: &Point, b: &Point, t: f64| space.eval_nu(a, b, t).map(|v| v.get());
    let third = || w.z.ok_or_else(|| Error::precondition("triangle check needs a third point"));
    let second_t = || w.s.ok_or_else(|| Error::precondition("triangle check needs a second time"));

    let hit = |violated: bool, lhs: f64, rhs: f64| if violated { Some((lhs, rhs)) } else { None };

    Ok(match axiom {
        AxiomId::I => {
            let sum = mu(x, y, t)? + nu(x, y, t)?;
            hit(sum > 1.0 + TOL, sum, 1.0)
        }
        AxiomId::II => {
            let m = mu(x, y, t)?;
            hit(m <= 0.0, m, 0.0)
        }
        AxiomId::III => {
            if same {
                let m = mu(x, y, t)?;
                hit((m - 1.0).abs() > TOL, m, 1.0)
            } else {
                let lowest = grid_fold(t_grid, f64::INFINITY, f64::min, |t| mu(x, y, t))?;
                hit(lowest >= 1.0 - TOL, lowest, 1.0)
            }
        }
        AxiomId::IV => {
            let (a, b) = (mu(x, y, t)?, mu(y, x, t)?);
            hit((a - b).abs() > TOL, a, b)
        }
        AxiomId::V => {
            let (z, s) = (third()?, second_t()?);
            let lhs = mu(x, &z, t + s)?;
            let rhs = space.tnorm.eval(mu(x, y, t)?, mu(y, &z, s)?);
            hit(lhs < rhs - TOL, lhs, rhs)
        }
        AxiomId::VII => {
            if same {
                None
            } else {
                let highest = grid_fold(t_grid, f64::NEG_INFINITY, f64::max, |t| nu(x, y, t))?;
                hit(highest <= 0.0, highest, 0.0)
            }
        }
        AxiomId::VIII => {
            if same {
                let n = nu(x, y, t)?;
                hit(n.abs() > TOL, n, 0.0)
            } else {
                let highest = grid_fold(t_grid, f64::NEG_INFINITY, f64::max, |t| nu(x, y, t))?;
                hit(highest <= TOL, highest, 0.0)
            }
        }
        AxiomId::IX => {
            let (a, b) = (nu(x, y, t)?, nu(y, x, t)?);
            hit((a - b).abs() > TOL, a, b)
        }
        AxiomId::X => {
            let (z, s) = (third()?, second_t()?);
            let lhs = nu(x, &z, t + s)?;
            let rhs = space.tconorm.eval(nu(x, y, t)?, nu(y, &z, s)?);
            hit(lhs > rhs + TOL, lhs, rhs)
        }
        AxiomId::NaMu => {
            let (z, s) = (third()?, second_t()?);
            let lhs = mu(x, &z, t.max(s))?;
            let rhs = space.tnorm.eval(mu(x, y, t)?, mu(y, &z, s)?);
            hit(lhs < rhs - TOL, lhs, rhs)
        }
        AxiomId::NaNu => {
            let (z, s) = (third()?, second_t()?);
            let lhs = nu(x, &z, t.max(s))?;
            let rhs = space.tconorm.eval(nu(x, y, t)?, nu(y, &z, s)?);
            hit(lhs > rhs + TOL, lhs, rhs)
        }
        AxiomId::VI | AxiomId::XI => None,
    })
}

fn grid_fold(
    t_grid: &[f64],
    init: f64,
    combine: fn(f64, f64) -> f64,
    mut eval: impl FnMut(f64) -> Result<f64>,
) -> Result<f64> {
    let mut acc = init;
    for &t in t_grid {
        acc = combine(acc, eval(t)?);
    }
    Ok(acc)
}

/// The checks applicable to a space, in report order.
pub fn applicable_axioms(space: &IFSpace) -> Vec<AxiomId> {
    let mut out = AxiomId::DEF.to_vec();
    if space.triangle_mode == TriangleMode::NonArchimedean {
        out.extend([AxiomId::NaMu, AxiomId::NaNu]);
    }
    out
}

struct Tally {
    axiom: AxiomId,
    evaluated: usize,
    violations: usize,
    raw: Vec<Witness>,
}

/// Checks every applicable axiom on every sampled tuple.
pub fn audit_space(space: &IFSpace, sampler: &SamplerConfig) -> Result<AuditReport> {
    sampler.validate()?;
    let grid = &sampler.t_grid;
    let axioms = applicable_axioms(space);
    let mut tallies: Vec<Tally> = axioms
        .iter()
        .map(|&axiom| Tally {
            axiom,
            evaluated: 0,
            violations: 0,
            raw: Vec::new(),
        })
        .collect();

    let triples = sampler.triples(&space.domain);
    for [x, y, z] in &triples {
        for tally in tallies.iter_mut().filter(|t| !t.axiom.is_probe()) {
            let axiom = tally.axiom;
            let mut cases: Vec<Witness> = Vec::new();
            let base = |x: Point, y: Point, t: f64| Witness {
                x,
                y,
                z: None,
                t,
                s: None,
                lhs: 0.0,
                rhs: 0.0,
            };
            if axiom.uses_z() {
                for &t in grid {
                    for &s in grid {
                        cases.push(Witness {
                            z: Some(*z),
                            s: Some(s),
                            ..base(*x, *y, t)
                        });
                    }
                }
            } else {
                let quantified = matches!(axiom, AxiomId::III | AxiomId::VII | AxiomId::VIII);
                for (k, &t) in grid.iter().enumerate() {
                    if !(quantified && k > 0 && !space.domain.same_point(x, y)) {
                        cases.push(base(*x, *y, t));
                    }
                    // the diagonal is almost never drawn on a continuum
                    if matches!(axiom, AxiomId::III | AxiomId::VIII) {
                        cases.push(base(*x, *x, t));
                    }
                }
            }
            for w in cases {
                tally.evaluated += 1;
                if let Some((lhs, rhs)) = violation_at(space, axiom, &w, grid)? {
                    tally.violations += 1;
                    if tally.raw.len() < MAX_WITNESSES {
                        tally.raw.push(Witness { lhs, rhs, ..w });
                    }
                }
            }
        }
    }

    let probe_pairs: Vec<[Point; 2]> = triples.iter().take(256).map(|[x, y, _]| [*x, *y]).collect();
    let mut checks = Vec::with_capacity(tallies.len());
    for tally in tallies {
        if tally.axiom.is_probe() {
            let jump = continuity_probe(space, tally.axiom, &probe_pairs)?;
            checks.push(AxiomCheck {
                axiom: tally.axiom,
                status: Status::Probed,
                evaluated: probe_pairs.len(),
                violation_count: 0,
                witnesses: Vec::new(),
                max_jump: Some(jump),
            });
            continue;
        }
        let mut witnesses = Vec::with_capacity(tally.raw.len());
        for w in tally.raw {
            let v = Violation {
                axiom: tally.axiom,
                witness: w,
            };
            witnesses.push(minimize_witness(space, &v, grid)?);
        }
        checks.push(AxiomCheck {
            axiom: tally.axiom,
            status: if tally.violations == 0 { Status::Pass } else { Status::Fail },
            evaluated: tally.evaluated,
            violation_count: tally.violations,
            witnesses,
            max_jump: None,
        });
    }

    Ok(AuditReport {
        space: space.describe(),
        sampler: sampler.clone(),
        checks,
    })
}

/// Largest adjacent difference of `μ(x, y, ·)` (or `ν`) over a logarithmic
/// grid on `[1e-3, 1e3]`.
fn continuity_probe(space: &IFSpace, axiom: AxiomId, pairs: &[[Point; 2]]) -> Result<f64> {
    let ts: Vec<f64> = (0..CONTINUITY_GRID)
        .map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / (CONTINUITY_GRID - 1) as f64))
        .collect();
    let mut worst = 0.0f64;
    for [x, y] in pairs {
        let mut prev: Option<f64> = None;
        for &t in &ts {
            let v = if axiom == AxiomId::VI {
                space.eval_mu(x, y, t)?.get()
            } else {
                space.eval_nu(x, y, t)?.get()
            };
            if let Some(p) = prev {
                worst = worst.max((v - p).abs());
            }
            prev = Some(v);
        }
    }
    Ok(worst)
}

/// Shrinks a violating tuple toward the domain midpoint (points) and
/// `t = 1` (times) while the violation persists.
pub fn minimize_witness(space: &IFSpace, violation: &Violation, t_grid: &[f64]) -> Result<Witness> {
    let axiom = violation.axiom;
    let fails = |w: &Witness| matches!(violation_at(space, axiom, w, t_grid), Ok(Some(_)));
    if !fails(&violation.witness) {
        return Err(Error::Integrity(format!(
            "witness for axiom {axiom:?} does not reproduce: {:?}",
            violation.witness
        )));
    }
    let domain = &space.domain;
    let anchor = domain.midpoint();
    let mut w = violation.witness;
    for _ in 0..MAX_SHRINK_ROUNDS {
        let before = w;
        w.x = shrink_point(domain, w.x, anchor, |p| fails(&Witness { x: *p, ..w }));
        w.y = shrink_point(domain, w.y, anchor, |p| fails(&Witness { y: *p, ..w }));
        if let Some(z) = w.z {
            w.z = Some(shrink_point(domain, z, anchor, |p| fails(&Witness { z: Some(*p), ..w })));
        }
        w.t = shrink_scalar(w.t, 1.0, |t| fails(&Witness { t, ..w }));
        if axiom.uses_s() {
            if let Some(s) = w.s {
                w.s = Some(shrink_scalar(s, 1.0, |s| fails(&Witness { s: Some(s), ..w })));
            }
        }
        if w == before {
            break;
        }
    }
    let (lhs, rhs) = violation_at(space, axiom, &w, t_grid)?
        .ok_or_else(|| Error::Integrity("shrunk witness stopped reproducing".into()))?;
    Ok(Witness { lhs, rhs, ..w })
}
