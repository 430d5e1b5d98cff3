//! Picard iteration and fixed-point verification.
//!
//! [`solve_fixed_point`] follows orbits `x, f(x), f²(x), …` from each seed and
//! records, per grid `t`, the successive grades `μ(xₙ, xₙ₊₁, t)` and
//! `ν(xₙ, xₙ₊₁, t)`. For a ψ-φ contractive map on a complete
//! non-Archimedean space these are monotone (μ up, ν down) with limits 1 and
//! 0, and the orbit is M-Cauchy; the trace makes each of those claims
//! checkable. [`edelstein_solve`] is the finite-domain (compact) variant and
//! follows each orbit until it revisits a point.

use rayon::prelude::*;
use serde::Serialize;

use crate::contraction::SelfMap;
use crate::space::{IFSpace, Point, TriangleMode};
use crate::{Error, Result};

/// Tail threshold used by [`detect_g_cauchy`].
pub const G_CAUCHY_EPS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverConfig {
    /// M-Cauchy threshold in `(0, 1)`.
    pub epsilon: f64,
    /// Strictly increasing, positive.
    pub t_grid: Vec<f64>,
    pub max_iter: usize,
    /// Two limits closer than this count as the same point.
    pub point_tol: f64,
    pub seeds: Vec<Point>,
    /// Trailing window for the M-Cauchy stopping test.
    pub window: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            epsilon: 1e-6,
            t_grid: vec![0.1, 1.0, 10.0],
            max_iter: 1_000_000,
            point_tol: 1e-9,
            seeds: Vec::new(),
            window: 5,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::precondition(format!("epsilon = {} must lie in (0, 1)", self.epsilon)));
        }
        crate::audit::validate_grid(&self.t_grid)?;
        if self.t_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::precondition("t_grid must be strictly increasing"));
        }
        if self.max_iter == 0 {
            return Err(Error::precondition("max_iter must be positive"));
        }
        if self.point_tol.is_nan() || self.point_tol < 0.0 {
            return Err(Error::precondition("point_tol must be non-negative"));
        }
        if self.window == 0 {
            return Err(Error::precondition("window must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Converged,
    MaxIter,
    PreconditionFailed,
    /// The orbit of a finite map closed a cycle longer than one.
    Cycle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationTrace {
    pub points: Vec<Point>,
    pub t_grid: Vec<f64>,
    /// `mu_diag[k][n] = μ(xₙ, xₙ₊₁, t_grid[k])`
    pub mu_diag: Vec<Vec<f64>>,
    pub nu_diag: Vec<Vec<f64>>,
    pub stop_reason: StopReason,
}

impl IterationTrace {
    /// Builds a trace (and its diagnostics) from an explicit point list.
    pub fn from_points(space: &IFSpace, points: Vec<Point>, t_grid: Vec<f64>, stop_reason: StopReason) -> Result<Self> {
        let mut trace = IterationTrace {
            mu_diag: vec![Vec::new(); t_grid.len()],
            nu_diag: vec![Vec::new(); t_grid.len()],
            points: Vec::with_capacity(points.len()),
            t_grid,
            stop_reason,
        };
        for p in points {
            trace.push(space, p)?;
        }
        Ok(trace)
    }

    fn push(&mut self, space: &IFSpace, p: Point) -> Result<()> {
        if let Some(prev) = self.points.last() {
            for (k, &t) in self.t_grid.iter().enumerate() {
                let (mu, nu) = space.mu_nu(prev, &p, t)?;
                self.mu_diag[k].push(mu);
                self.nu_diag[k].push(nu);
            }
        }
        self.points.push(p);
        Ok(())
    }

    /// Number of map applications recorded.
    pub fn steps(&self) -> usize {
        self.points.len().saturating_sub(1)
    }

    pub fn last(&self) -> &Point {
        self.points.last().expect("a trace holds at least its seed")
    }

    /// `μ` non-decreasing and `ν` non-increasing along the orbit at every
    /// grid `t`, up to `tol`.
    pub fn is_monotone(&self, tol: f64) -> bool {
        self.mu_diag.iter().all(|row| row.windows(2).all(|w| w[0] <= w[1] + tol))
            && self.nu_diag.iter().all(|row| row.windows(2).all(|w| w[0] >= w[1] - tol))
    }

    /// CSV with columns `n, x_n, mu@t, nu@t, …`; LF line endings and
    /// 17 significant digits. The final row has no successor and leaves the
    /// grade columns empty.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let mut header = vec!["n".to_string(), "x_n".to_string()];
        for t in &self.t_grid {
            header.push(format!("mu@{t:.6}"));
            header.push(format!("nu@{t:.6}"));
        }
        w.write_record(&header).expect("in-memory write");
        for (n, p) in self.points.iter().enumerate() {
            let mut row = vec![n.to_string(), format_point(p)];
            for k in 0..self.t_grid.len() {
                match (self.mu_diag[k].get(n), self.nu_diag[k].get(n)) {
                    (Some(mu), Some(nu)) => {
                        row.push(format!("{mu:.16e}"));
                        row.push(format!("{nu:.16e}"));
                    }
                    _ => {
                        row.push(String::new());
                        row.push(String::new());
                    }
                }
            }
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }
}

fn format_point(p: &Point) -> String {
    match p {
        Point::Index(i) => i.to_string(),
        Point::Real(x) => format!("{x:.16e}"),
    }
}

/// Finite-window M-Cauchy test: every pair among the last `window` points
/// has `μ > 1 - ε` and `ν < ε` at `t`.
pub fn detect_m_cauchy(space: &IFSpace, trace: &IterationTrace, epsilon: f64, t: f64, window: usize) -> Result<bool> {
    let n = trace.points.len();
    if window == 0 || window > n {
        return Err(Error::precondition(format!("window {window} does not fit a trace of {n} points")));
    }
    m_cauchy_tail(space, &trace.points[n - window..], epsilon, t)
}

fn m_cauchy_tail(space: &IFSpace, tail: &[Point], epsilon: f64, t: f64) -> Result<bool> {
    for (i, a) in tail.iter().enumerate() {
        for b in &tail[i + 1..] {
            let (mu, nu) = space.mu_nu(a, b, t)?;
            if !(mu > 1.0 - epsilon && nu < epsilon) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Tail test for fixed-offset pairs: the last three values of
/// `μ(xₙ, xₙ₊ₘ, t)` exceed `1 - 1e-6` and the matching `ν` stay below `1e-6`.
pub fn detect_g_cauchy(space: &IFSpace, trace: &IterationTrace, m_offset: usize, t: f64) -> Result<bool> {
    let len = trace.points.len();
    if m_offset == 0 || len <= m_offset + 2 {
        return Err(Error::precondition(format!(
            "G-Cauchy test with offset {m_offset} needs more than {} points, trace has {len}",
            m_offset + 2
        )));
    }
    let last = len - 1 - m_offset;
    for n in last - 2..=last {
        let (mu, nu) = space.mu_nu(&trace.points[n], &trace.points[n + m_offset], t)?;
        if !(mu > 1.0 - G_CAUCHY_EPS && nu < G_CAUCHY_EPS) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Iterates `f` from `x0` until the trailing window is M-Cauchy at every
/// grid `t` or `max_iter` steps have been taken.
///
/// If `μ(x0, f(x0), t) = 0` or `ν(x0, f(x0), t) = 1` at some grid `t` the
/// trace stops at once with [`StopReason::PreconditionFailed`].
pub fn picard_iterate(space: &IFSpace, f: &SelfMap, x0: Point, config: &SolverConfig) -> Result<IterationTrace> {
    config.validate()?;
    let grid = config.t_grid.clone();
    let x1 = f.apply(&space.domain, &x0)?;
    for &t in &grid {
        let (mu, nu) = space.mu_nu(&x0, &x1, t)?;
        if !(mu > 0.0 && nu < 1.0) {
            log::debug!("seed {x0}: μ = {mu}, ν = {nu} at t = {t}; not iterating");
            return IterationTrace::from_points(space, vec![x0], grid, StopReason::PreconditionFailed);
        }
    }

    let mut trace = IterationTrace::from_points(space, vec![x0, x1], grid, StopReason::MaxIter)?;
    loop {
        let n = trace.points.len();
        let tail = &trace.points[n - config.window.min(n)..];
        let mut converged = true;
        for &t in &trace.t_grid {
            if !m_cauchy_tail(space, tail, config.epsilon, t)? {
                converged = false;
                break;
            }
        }
        if converged {
            trace.stop_reason = StopReason::Converged;
            return Ok(trace);
        }
        if trace.steps() >= config.max_iter {
            return Ok(trace);
        }
        let next = f.apply(&space.domain, trace.last()).map_err(|e| {
            Error::domain(format!("step {}: {e}", trace.steps() + 1))
        })?;
        trace.push(space, next)?;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residuals {
    /// `min_t μ(x, f(x), t)`
    pub min_mu: f64,
    /// `max_t ν(x, f(x), t)`
    pub max_nu: f64,
    pub passed: bool,
}

pub fn verify_fixed_point(space: &IFSpace, f: &SelfMap, x: &Point, t_grid: &[f64], tol: f64) -> Result<Residuals> {
    crate::audit::validate_grid(t_grid)?;
    let fx = f.apply(&space.domain, x)?;
    let mut min_mu = f64::INFINITY;
    let mut max_nu = f64::NEG_INFINITY;
    for &t in t_grid {
        let (mu, nu) = space.mu_nu(x, &fx, t)?;
        min_mu = min_mu.min(mu);
        max_nu = max_nu.max(nu);
    }
    Ok(Residuals {
        min_mu,
        max_nu,
        passed: min_mu >= 1.0 - tol && max_nu <= tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Picard,
    Edelstein,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedOutcome {
    pub seed: Point,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<Point>,
    pub iterations: usize,
    pub stop_reason: StopReason,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle_length: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairDistance {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointReport {
    pub engine: Engine,
    pub space: String,
    pub fixed_point: Option<Point>,
    pub seeds: Vec<SeedOutcome>,
    pub residual_mu: Option<f64>,
    pub residual_nu: Option<f64>,
    pub verified: bool,
    pub unique: bool,
    pub max_pairwise_distance: f64,
    /// Distances between the limits of seeds `i < j`.
    pub witnesses: Vec<PairDistance>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub traces: Vec<IterationTrace>,
}

impl FixedPointReport {
    pub fn iterations_per_seed(&self) -> Vec<usize> {
        self.seeds.iter().map(|s| s.iterations).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }
}

fn hypothesis_warnings(space: &IFSpace) -> Vec<String> {
    if space.triangle_mode == TriangleMode::Archimedean {
        let msg = "space is Archimedean; the uniqueness guarantee assumes the strong triangle inequality".to_string();
        log::warn!("{msg}");
        vec![msg]
    } else {
        Vec::new()
    }
}

fn assemble(
    engine: Engine,
    space: &IFSpace,
    f: &SelfMap,
    config: &SolverConfig,
    seeds: Vec<SeedOutcome>,
    traces: Vec<IterationTrace>,
) -> Result<FixedPointReport> {
    let limits: Vec<Option<Point>> = seeds.iter().map(|s| s.limit).collect();
    let mut witnesses = Vec::new();
    let mut max_pairwise_distance = 0.0f64;
    for i in 0..limits.len() {
        for j in i + 1..limits.len() {
            if let (Some(a), Some(b)) = (&limits[i], &limits[j]) {
                let distance = space.domain.distance(a, b)?;
                max_pairwise_distance = max_pairwise_distance.max(distance);
                witnesses.push(PairDistance { i, j, distance });
            }
        }
    }
    let fixed_point = limits.iter().flatten().next().copied();
    let unique = limits.iter().all(Option::is_some) && max_pairwise_distance <= config.point_tol;
    let residuals = match &fixed_point {
        Some(x) => Some(verify_fixed_point(space, f, x, &config.t_grid, config.epsilon)?),
        None => None,
    };
    Ok(FixedPointReport {
        engine,
        space: space.describe(),
        fixed_point,
        seeds,
        residual_mu: residuals.map(|r| r.min_mu),
        residual_nu: residuals.map(|r| r.max_nu),
        verified: residuals.is_some_and(|r| r.passed),
        unique,
        max_pairwise_distance,
        witnesses,
        warnings: hypothesis_warnings(space),
        traces,
    })
}

/// Runs [`picard_iterate`] from every seed (concurrently, merged in seed
/// order) and cross-checks the limits.
pub fn solve_fixed_point(space: &IFSpace, f: &SelfMap, config: &SolverConfig) -> Result<FixedPointReport> {
    config.validate()?;
    f.validate(&space.domain)?;
    if config.seeds.is_empty() {
        return Err(Error::precondition("at least one seed is required"));
    }
    let traces = config
        .seeds
        .par_iter()
        .map(|x0| picard_iterate(space, f, *x0, config))
        .collect::<Result<Vec<_>>>()?;

    if traces.iter().all(|t| t.stop_reason != StopReason::Converged) {
        return Err(Error::NonConvergence {
            max_iter: config.max_iter,
            traces: Box::new(traces),
        });
    }
    let seeds = config
        .seeds
        .iter()
        .zip(&traces)
        .map(|(seed, trace)| SeedOutcome {
            seed: *seed,
            limit: (trace.stop_reason == StopReason::Converged).then(|| *trace.last()),
            iterations: trace.steps(),
            stop_reason: trace.stop_reason,
            cycle_length: None,
        })
        .collect();
    assemble(Engine::Picard, space, f, config, seeds, traces)
}

/// Orbit-cycle solver for finite domains.
///
/// Every orbit of a finite map revisits a point within `|X|` steps; a
/// revisit of the immediately preceding point is a fixed point. Seeds default
/// to the whole domain when the config lists none.
pub fn edelstein_solve(space: &IFSpace, f: &SelfMap, config: &SolverConfig) -> Result<FixedPointReport> {
    config.validate()?;
    let Some(n) = space.domain.len() else {
        return Err(Error::precondition("edelstein_solve needs a finite domain"));
    };
    f.validate(&space.domain)?;
    let seeds: Vec<Point> = if config.seeds.is_empty() {
        (0..n).map(Point::Index).collect()
    } else {
        config.seeds.clone()
    };

    let mut outcomes = Vec::with_capacity(seeds.len());
    let mut traces = Vec::with_capacity(seeds.len());
    for seed in &seeds {
        space.domain.check(seed)?;
        let mut first_visit: Vec<Option<usize>> = vec![None; n];
        let mut orbit = vec![*seed];
        let mut cur = *seed;
        let cycle_start = loop {
            let Point::Index(i) = cur else {
                unreachable!("finite domains hold index points")
            };
            if let Some(step) = first_visit[i] {
                break step;
            }
            first_visit[i] = Some(orbit.len() - 1);
            cur = f.apply(&space.domain, &cur)?;
            orbit.push(cur);
        };
        let cycle_length = orbit.len() - 1 - cycle_start;
        let limit = (cycle_length == 1).then_some(cur);
        let stop_reason = if limit.is_some() {
            StopReason::Converged
        } else {
            StopReason::Cycle
        };
        outcomes.push(SeedOutcome {
            seed: *seed,
            limit,
            iterations: orbit.len() - 1,
            stop_reason,
            cycle_length: Some(cycle_length),
        });
        traces.push(IterationTrace::from_points(space, orbit, config.t_grid.clone(), stop_reason)?);
    }
    assemble(Engine::Edelstein, space, f, config, outcomes, traces)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointContinuity {
    pub holds: bool,
    /// First index at which both sequences are within `tol` of their limits.
    pub threshold_index: Option<usize>,
    /// Largest `|μ(xₙ, yₙ, t) - μ(x, y, t)|` (or ν analogue) past the threshold.
    pub max_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Checks `μ(xₙ, yₙ, t) → μ(x, y, t)` and `ν(xₙ, yₙ, t) → ν(x, y, t)` on finite
/// prefixes `xs → x`, `ys → y`.
pub fn check_joint_continuity(
    space: &IFSpace,
    xs: &[Point],
    ys: &[Point],
    x: &Point,
    y: &Point,
    t: f64,
    tol: f64,
) -> Result<JointContinuity> {
    if xs.len() != ys.len() {
        return Err(Error::precondition("sequences must have equal length"));
    }
    let warning = (space.triangle_mode == TriangleMode::Archimedean)
        .then(|| "space is Archimedean; joint continuity is only guaranteed for the strong triangle inequality".to_string());
    let (mu_lim, nu_lim) = space.mu_nu(x, y, t)?;

    let mut threshold_index = None;
    for i in 0..xs.len() {
        if space.eval_mu(&xs[i], x, t)?.get() >= 1.0 - tol && space.eval_mu(&ys[i], y, t)?.get() >= 1.0 - tol {
            threshold_index = Some(i);
            break;
        }
    }
    let Some(start) = threshold_index else {
        return Ok(JointContinuity {
            holds: false,
            threshold_index,
            max_deviation: f64::NAN,
            warning,
        });
    };
    let mut max_deviation = 0.0f64;
    for i in start..xs.len() {
        let (mu, nu) = space.mu_nu(&xs[i], &ys[i], t)?;
        max_deviation = max_deviation.max((mu - mu_lim).abs()).max((nu - nu_lim).abs());
    }
    Ok(JointContinuity {
        holds: max_deviation <= tol,
        threshold_index,
        max_deviation,
        warning,
    })
}
