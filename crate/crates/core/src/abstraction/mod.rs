//! Grid abstraction of systems with per-cell constant-velocity modes and
//! bounded speed and angle disturbances.

mod dynamics;
mod model;
mod region;
mod tau;

pub use dynamics::{reach_box, simulate_trajectory, Direction, Motion, ReachHorizon, Trajectory};
pub use model::{build_symbolic_model, label_allowed, BuildConfig, ModelJson, SymbolicModel};
pub use region::{box_distance, boundary_distance, boundary_faces, ApRegion, Bounds, HalfSpace, Op, Rho};
pub use tau::{validate_tau, TauValidation};

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::observations::ChopError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AbstractionError {
    #[error("invalid system: {0}")]
    Invalid(String),
    #[error("point {0:?} is outside the domain")]
    OutOfDomain(Vec<f64>),
    #[error("no motion mode for cell {0:?}")]
    UndefinedMode(Vec<i64>),
    #[error("unknown proposition {0}")]
    UnknownAp(String),
    #[error("regions of {0} and {1} have touching boundaries; no sampling period separates them")]
    NotSeparated(String, String),
    #[error("sampling period {tau} exceeds the separation bound {tau_max}")]
    TauTooLarge { tau: f64, tau_max: f64 },
    #[error("chopping simulated trajectory: {0}")]
    Chop(ChopError),
    #[error("symbolic model: {0}")]
    Model(String),
}

/// Disturbance bounds shared by all cells unless a table entry overrides the
/// speed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeParams {
    pub v: f64,
    pub ev: f64,
    #[serde(default)]
    pub etheta: f64,
}

/// Clockwise ring pattern around the origin: the heading is the clockwise
/// tangent rounded to a multiple of 45 degrees, turned inward by 45 degrees
/// beyond `outer`, outward by 45 degrees inside `inner`, and by 90 degrees
/// beyond `edge` (radii in the infinity norm).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatrolField {
    pub inner: f64,
    pub outer: f64,
    pub edge: f64,
}

impl PatrolField {
    pub fn heading(&self, x: f64, y: f64) -> f64 {
        use std::f64::consts::FRAC_PI_4;
        let tangent = y.atan2(x) - 2.0 * FRAC_PI_4;
        let mut h = (tangent / FRAC_PI_4).round() * FRAC_PI_4;
        let radius = x.abs().max(y.abs());
        if radius >= self.edge {
            h -= 2.0 * FRAC_PI_4;
        } else if radius > self.outer {
            h -= FRAC_PI_4;
        } else if radius < self.inner {
            h += FRAC_PI_4;
        }
        normalize_angle(h)
    }
}

pub(crate) fn normalize_angle(a: f64) -> f64 {
    use std::f64::consts::PI;
    let r = (a + PI).rem_euclid(2.0 * PI) - PI;
    // Snap values that are multiples of 45 degrees up to rounding.
    let q = r / (PI / 4.0);
    if (q - q.round()).abs() < 1e-12 {
        (q.round() * PI / 4.0).clamp(-PI, PI)
    } else {
        r
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellMode {
    pub cell: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heading: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub velocity: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Field {
    /// Same heading (radians) everywhere; two dimensions only.
    Constant { heading: f64 },
    /// Same direction everywhere, any dimension; normalized on use.
    Velocity { direction: Vec<f64> },
    Patrol(PatrolField),
    /// Explicit per-cell modes; cells without an entry have no mode.
    Table { cells: Vec<CellMode> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Modes {
    pub default: ModeParams,
    pub field: Field,
}

/// Treatment of cells whose reachable box leaves the domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// Add an absorbing state with unconstrained observations.
    #[default]
    Sink,
    /// The domain is asserted invariant; reachable boxes are clipped to it.
    Invariant,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub dim: usize,
    pub domain: Bounds,
    pub eta: f64,
    pub tau: f64,
    pub x_in: Vec<f64>,
    pub modes: Modes,
    pub aps: BTreeMap<String, ApRegion>,
    #[serde(default)]
    pub boundary: Boundary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

impl SystemSpec {
    pub fn validate(&self) -> Result<(), AbstractionError> {
        let bad = |m: String| Err(AbstractionError::Invalid(m));
        if self.dim == 0 || self.domain.len() != self.dim || self.x_in.len() != self.dim {
            return bad(format!("dimension {} does not match domain or initial state", self.dim));
        }
        if self.domain.iter().any(|d| !(d[0] <= d[1]) || !d[0].is_finite() || !d[1].is_finite()) {
            return bad("domain bounds must be finite with lo <= hi".into());
        }
        if !(self.eta > 0.0) || !(self.tau > 0.0) {
            return bad("eta and tau must be positive".into());
        }
        let m = &self.modes.default;
        if !(m.v - m.ev >= 0.0) || !(m.ev >= 0.0) || !(m.etheta >= 0.0) {
            return bad("need ev >= 0, etheta >= 0 and v - ev >= 0".into());
        }
        if !self.in_domain(&self.x_in) {
            return Err(AbstractionError::OutOfDomain(self.x_in.clone()));
        }
        let two_d_only = match &self.modes.field {
            Field::Constant { .. } | Field::Patrol(_) => true,
            Field::Table { cells } => cells.iter().any(|c| c.heading.is_some()),
            Field::Velocity { direction } => {
                if direction.len() != self.dim {
                    return bad("velocity direction has the wrong dimension".into());
                }
                false
            }
        };
        if two_d_only && self.dim != 2 {
            return bad("heading modes need dimension 2".into());
        }
        for (p, r) in &self.aps {
            if r.max_axis().map_or(false, |a| a >= self.dim) {
                return bad(format!("region of {} uses an axis beyond the dimension", p));
            }
        }
        Ok(())
    }

    pub fn in_domain(&self, x: &[f64]) -> bool {
        x.iter().zip(&self.domain).all(|(v, d)| *v >= d[0] && *v <= d[1])
    }

    pub fn grid(&self) -> Grid {
        Grid::new(&self.domain, self.eta)
    }

    pub fn region(&self, p: &str) -> Result<&ApRegion, AbstractionError> {
        self.aps.get(p).ok_or_else(|| AbstractionError::UnknownAp(p.to_string()))
    }

    /// Largest nominal speed plus speed deviation over all modes.
    pub fn max_speed(&self) -> f64 {
        let base = &self.modes.default;
        match &self.modes.field {
            Field::Table { cells } => cells
                .iter()
                .map(|c| c.v.unwrap_or(base.v) + base.ev)
                .fold(base.v + base.ev, f64::max),
            _ => base.v + base.ev,
        }
    }
}

/// Cells centred at integer multiples of `eta` inside the domain, numbered
/// lexicographically with the first axis most significant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub eta: f64,
    pub lo: Vec<i64>,
    pub counts: Vec<usize>,
}

impl Grid {
    pub fn new(domain: &Bounds, eta: f64) -> Grid {
        let mut lo = Vec::new();
        let mut counts = Vec::new();
        for d in domain {
            let a = (d[0] / eta - 1e-9).ceil() as i64;
            let b = (d[1] / eta + 1e-9).floor() as i64;
            lo.push(a);
            counts.push(if b >= a { (b - a + 1) as usize } else { 0 });
        }
        Grid { eta, lo, counts }
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn hi(&self, axis: usize) -> i64 {
        self.lo[axis] + self.counts[axis] as i64 - 1
    }

    pub fn index(&self, k: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        for a in 0..self.dim() {
            let off = k[a] - self.lo[a];
            if off < 0 || off >= self.counts[a] as i64 {
                return None;
            }
            idx = idx * self.counts[a] + off as usize;
        }
        Some(idx)
    }

    pub fn coords(&self, mut idx: usize) -> Vec<i64> {
        let mut k = vec![0; self.dim()];
        for a in (0..self.dim()).rev() {
            k[a] = self.lo[a] + (idx % self.counts[a]) as i64;
            idx /= self.counts[a];
        }
        k
    }

    pub fn center(&self, idx: usize) -> Vec<f64> {
        self.coords(idx).iter().map(|&k| k as f64 * self.eta).collect()
    }

    /// Closed box of half-width `eta / 2` around the cell centre.
    pub fn cell_box(&self, idx: usize) -> Bounds {
        self.center(idx).iter().map(|&c| [c - self.eta / 2.0, c + self.eta / 2.0]).collect()
    }

    /// Nearest cell: each coordinate rounded half-up, then clamped to the
    /// grid.
    pub fn quantize(&self, x: &[f64]) -> usize {
        let k: Vec<i64> = (0..self.dim())
            .map(|a| ((x[a] / self.eta + 0.5).floor() as i64).clamp(self.lo[a], self.hi(a)))
            .collect();
        self.index(&k).expect("clamped coordinates are on the grid")
    }

    /// Inclusive per-axis index ranges of the cells whose boxes meet `b`
    /// (clamped to the grid).
    pub fn cells_meeting(&self, b: &Bounds) -> Vec<(i64, i64)> {
        let eps = 1e-9;
        (0..self.dim())
            .map(|a| {
                let lo = ((b[a][0] - eps) / self.eta - 0.5).ceil() as i64;
                let hi = ((b[a][1] + eps) / self.eta + 0.5).floor() as i64;
                (lo.max(self.lo[a]), hi.min(self.hi(a)))
            })
            .collect()
    }
}

/// Cell of `x`; fails outside the domain.
pub fn gamma(spec: &SystemSpec, x: &[f64]) -> Result<usize, AbstractionError> {
    if x.len() != spec.dim || !spec.in_domain(x) {
        return Err(AbstractionError::OutOfDomain(x.to_vec()));
    }
    Ok(spec.grid().quantize(x))
}
