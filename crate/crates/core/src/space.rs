//! Point domains and intuitionistic fuzzy metric structures `(X, μ, ν, ∗, ◇)`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::norm::{TConorm, TNorm, UnitValue};
use crate::{Error, Result, TOL};

/// Two reals closer than this are the same point.
pub const POINT_EQ_TOL: f64 = 1e-12;

/// A point of a [`PointDomain`]: an index into a finite table or a real.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Point {
    Index(usize),
    Real(f64),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Index(i) => write!(f, "#{i}"),
            Point::Real(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PointDomain {
    /// Finitely many labelled points with an explicit metric matrix.
    FiniteTable {
        labels: Vec<String>,
        metric: Vec<Vec<f64>>,
    },
    /// The closed interval `[lo, hi]` with `d(x, y) = |x - y|`.
    RealInterval { lo: f64, hi: f64 },
}

impl PointDomain {
    /// Validates the matrix: square, zero diagonal, symmetric, non-negative,
    /// and satisfying the triangle inequality.
    pub fn finite(labels: Vec<String>, metric: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::domain("finite domain needs at least one point"));
        }
        if metric.len() != n || metric.iter().any(|row| row.len() != n) {
            return Err(Error::domain(format!("metric must be a {n}x{n} matrix")));
        }
        for i in 0..n {
            if metric[i][i] != 0.0 {
                return Err(Error::domain(format!("metric diagonal at {i} is not zero")));
            }
            for j in 0..n {
                let d = metric[i][j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::domain(format!("metric[{i}][{j}] = {d} is not a distance")));
                }
                if (d - metric[j][i]).abs() > TOL {
                    return Err(Error::domain(format!("metric is not symmetric at ({i}, {j})")));
                }
                if i != j && d == 0.0 {
                    return Err(Error::domain(format!("distinct points {i} and {j} at distance 0")));
                }
                for k in 0..n {
                    if metric[i][k] > metric[i][j] + metric[j][k] + TOL {
                        return Err(Error::domain(format!(
                            "triangle inequality fails for ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        Ok(PointDomain::FiniteTable { labels, metric })
    }

    /// Points `0..n` on a line, `d(i, j) = |i - j| / (n - 1)`.
    pub fn line(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("a line domain needs at least two points"));
        }
        let scale = (n - 1) as f64;
        let metric = (0..n)
            .map(|i| (0..n).map(|j| i.abs_diff(j) as f64 / scale).collect())
            .collect();
        PointDomain::finite((0..n).map(|i| i.to_string()).collect(), metric)
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::domain(format!("interval [{lo}, {hi}] needs lo < hi")));
        }
        Ok(PointDomain::RealInterval { lo, hi })
    }

    pub fn len(&self) -> Option<usize> {
        match self {
            PointDomain::FiniteTable { labels, .. } => Some(labels.len()),
            PointDomain::RealInterval { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.len().is_some()
    }

    /// All points of a finite domain; `None` for an interval.
    pub fn points(&self) -> Option<Vec<Point>> {
        self.len().map(|n| (0..n).map(Point::Index).collect())
    }

    pub fn contains(&self, p: &Point) -> bool {
        match (self, p) {
            (PointDomain::FiniteTable { labels, .. }, Point::Index(i)) => *i < labels.len(),
            (PointDomain::RealInterval { lo, hi }, Point::Real(x)) => {
                x.is_finite() && *x >= lo - POINT_EQ_TOL && *x <= hi + POINT_EQ_TOL
            }
            _ => false,
        }
    }

    pub fn check(&self, p: &Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::domain(format!("point {p} is outside the domain")))
        }
    }

    pub fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        Ok(match (self, x, y) {
            (PointDomain::FiniteTable { metric, .. }, Point::Index(i), Point::Index(j)) => metric[*i][*j],
            (PointDomain::RealInterval { .. }, Point::Real(a), Point::Real(b)) => {
                let d = (a - b).abs();
                if d <= POINT_EQ_TOL {
                    0.0
                } else {
                    d
                }
            }
            _ => unreachable!("membership checked above"),
        })
    }

    pub fn same_point(&self, x: &Point, y: &Point) -> bool {
        match (x, y) {
            (Point::Index(i), Point::Index(j)) => i == j,
            (Point::Real(a), Point::Real(b)) => (a - b).abs() <= POINT_EQ_TOL,
            _ => false,
        }
    }

    /// Canonical anchor used when shrinking witnesses.
    pub fn midpoint(&self) -> Point {
        match self {
            PointDomain::FiniteTable { labels, .. } => Point::Index((labels.len() - 1) / 2),
            PointDomain::RealInterval { lo, hi } => Point::Real(0.5 * (lo + hi)),
        }
    }

    /// The point halfway from `from` toward `to` (index arithmetic on
    /// finite tables).
    pub fn toward(&self, from: &Point, to: &Point) -> Point {
        match (from, to) {
            (Point::Index(a), Point::Index(b)) => {
                let (a, b) = (*a as i64, *b as i64);
                Point::Index((a + (b - a) / 2) as usize)
            }
            (Point::Real(a), Point::Real(b)) => Point::Real(a + 0.5 * (b - a)),
            _ => *from,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match self {
            PointDomain::FiniteTable { labels, .. } => Point::Index(rng.random_range(0..labels.len())),
            PointDomain::RealInterval { lo, hi } => Point::Real(rng.random_range(*lo..=*hi)),
        }
    }

    /// `count` evenly spaced points (all points for a finite table).
    pub fn lattice(&self, count: usize) -> Vec<Point> {
        match self {
            PointDomain::FiniteTable { labels, .. } => (0..labels.len()).map(Point::Index).collect(),
            PointDomain::RealInterval { lo, hi } => {
                let count = count.max(2);
                (0..count)
                    .map(|i| Point::Real(lo + (hi - lo) * i as f64 / (count - 1) as f64))
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriangleMode {
    /// `μ(x, z, t + s) ≥ μ(x, y, t) ∗ μ(y, z, s)`
    Archimedean,
    /// `μ(x, z, t) ≥ μ(x, y, t) ∗ μ(y, z, t)`
    NonArchimedean,
}

type GradeFn = Arc<dyn Fn(&Point, &Point, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum Membership {
    /// `μ = t / (t + d)`, `ν = d / (t + d)`.
    Standard,
    /// `μ = 0, ν = 1` for distinct points when `t ≤ 1`; `μ = 1, ν = 0` otherwise.
    CrispThreshold,
    Custom { name: String, mu: GradeFn, nu: GradeFn },
}

impl fmt::Debug for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Membership::Standard => f.write_str("Standard"),
            Membership::CrispThreshold => f.write_str("CrispThreshold"),
            Membership::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct IFSpace {
    pub domain: PointDomain,
    pub membership: Membership,
    pub tnorm: TNorm,
    pub tconorm: TConorm,
    pub triangle_mode: TriangleMode,
    /// Set for constructions that knowingly allow `μ = 0` or `ν = 1`.
    pub relaxed: bool,
}

/// The space induced by a classical metric: `μ = t/(t+d)`, `ν = d/(t+d)`.
///
/// Under the product t-norm (with a conorm at least the probabilistic sum)
/// the strong triangle inequality holds, since `(t+d₁)(t+d₂) ≥ t(t+d₁₂)`
/// whenever `d₁₂ ≤ d₁ + d₂`, so the space is flagged non-Archimedean.
pub fn standard_space(domain: PointDomain, tnorm: TNorm, tconorm: TConorm) -> IFSpace {
    let strong = matches!(tnorm, TNorm::Product)
        && matches!(tconorm, TConorm::ProbabilisticSum | TConorm::BoundedSum);
    IFSpace {
        domain,
        membership: Membership::Standard,
        tnorm,
        tconorm,
        triangle_mode: if strong {
            TriangleMode::NonArchimedean
        } else {
            TriangleMode::Archimedean
        },
        relaxed: false,
    }
}

/// The two-valued space where distinct points are "far" up to `t = 1`
/// inclusive and "near" afterwards. Valid under any norm pair.
pub fn crisp_threshold_space(domain: PointDomain, tnorm: TNorm, tconorm: TConorm) -> Result<IFSpace> {
    if let Some(n) = domain.len() {
        if n < 2 {
            return Err(Error::precondition("crisp threshold space needs at least two points"));
        }
    }
    Ok(IFSpace {
        domain,
        membership: Membership::CrispThreshold,
        tnorm,
        tconorm,
        triangle_mode: TriangleMode::NonArchimedean,
        relaxed: true,
    })
}

impl IFSpace {
    /// A space from arbitrary grade functions; nothing is verified here.
    pub fn custom(
        domain: PointDomain,
        name: impl Into<String>,
        mu: impl Fn(&Point, &Point, f64) -> f64 + Send + Sync + 'static,
        nu: impl Fn(&Point, &Point, f64) -> f64 + Send + Sync + 'static,
        tnorm: TNorm,
        tconorm: TConorm,
        triangle_mode: TriangleMode,
    ) -> Self {
        IFSpace {
            domain,
            membership: Membership::Custom {
                name: name.into(),
                mu: Arc::new(mu),
                nu: Arc::new(nu),
            },
            tnorm,
            tconorm,
            triangle_mode,
            relaxed: true,
        }
    }

    pub fn with_triangle_mode(mut self, mode: TriangleMode) -> Self {
        self.triangle_mode = mode;
        self
    }

    pub fn describe(&self) -> String {
        let kind = match &self.membership {
            Membership::Standard => "standard".to_string(),
            Membership::CrispThreshold => "crisp_threshold".to_string(),
            Membership::Custom { name, .. } => format!("custom:{name}"),
        };
        let domain = match &self.domain {
            PointDomain::FiniteTable { labels, .. } => format!("finite({})", labels.len()),
            PointDomain::RealInterval { lo, hi } => format!("[{lo}, {hi}]"),
        };
        format!(
            "{kind} on {domain} with {} / {} ({:?})",
            self.tnorm.name(),
            self.tconorm.name(),
            self.triangle_mode
        )
    }

    fn grades(&self, x: &Point, y: &Point, t: f64) -> Result<(f64, f64)> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::domain(format!("t = {t} must be a positive real")));
        }
        self.domain.check(x)?;
        self.domain.check(y)?;
        Ok(match &self.membership {
            Membership::Standard => {
                let d = self.domain.distance(x, y)?;
                (t / (t + d), d / (t + d))
            }
            Membership::CrispThreshold => {
                if self.domain.same_point(x, y) || t > 1.0 {
                    (1.0, 0.0)
                } else {
                    (0.0, 1.0)
                }
            }
            Membership::Custom { mu, nu, .. } => (mu(x, y, t), nu(x, y, t)),
        })
    }

    pub fn eval_mu(&self, x: &Point, y: &Point, t: f64) -> Result<UnitValue> {
        let (mu, _) = self.grades(x, y, t)?;
        UnitValue::new(mu).map_err(|_| Error::domain(format!("μ({x}, {y}, {t}) = {mu} lies outside [0, 1]")))
    }

    pub fn eval_nu(&self, x: &Point, y: &Point, t: f64) -> Result<UnitValue> {
        let (_, nu) = self.grades(x, y, t)?;
        UnitValue::new(nu).map_err(|_| Error::domain(format!("ν({x}, {y}, {t}) = {nu} lies outside [0, 1]")))
    }

    /// `(μ, ν)` as plain reals.
    pub fn mu_nu(&self, x: &Point, y: &Point, t: f64) -> Result<(f64, f64)> {
        Ok((self.eval_mu(x, y, t)?.get(), self.eval_nu(x, y, t)?.get()))
    }
}
