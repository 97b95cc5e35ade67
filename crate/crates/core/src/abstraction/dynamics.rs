use std::collections::HashMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AbstractionError, Bounds, Field, Grid, SystemSpec};
use crate::observations::{ChopError, ObsMap, Observation};

#[derive(Clone, Debug, PartialEq)]
pub enum Direction {
    /// Planar heading in radians, disturbed by up to `etheta`.
    Heading(f64),
    /// Unit vector; only the speed is disturbed.
    Vector(Vec<f64>),
}

/// Constant-velocity motion of one cell.
#[derive(Clone, Debug, PartialEq)]
pub struct Motion {
    pub direction: Direction,
    pub v: f64,
    pub ev: f64,
    pub etheta: f64,
}

impl Motion {
    fn speeds(&self) -> (f64, f64) {
        ((self.v - self.ev).max(0.0), self.v + self.ev)
    }

    /// Velocity for a disturbance given as fractions in [-1, 1] of the
    /// speed and angle bounds.
    pub fn velocity(&self, ds: f64, da: f64) -> Vec<f64> {
        let s = self.v + ds * self.ev;
        match &self.direction {
            Direction::Heading(h) => {
                let b = h + da * self.etheta;
                vec![s * b.cos(), s * b.sin()]
            }
            Direction::Vector(d) => d.iter().map(|c| s * c).collect(),
        }
    }
}

/// Whether the reachable set is taken at the end of the period only or
/// over the whole period.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ReachHorizon {
    #[default]
    Endpoint,
    Interval,
}

/// Per-cell motion modes; `None` where the field leaves a cell undefined.
pub(crate) fn motion_field(spec: &SystemSpec, grid: &Grid) -> Vec<Option<Motion>> {
    let base = &spec.modes.default;
    let mk = |direction: Direction, v: f64| Motion {
        direction,
        v,
        ev: base.ev,
        etheta: base.etheta,
    };
    match &spec.modes.field {
        Field::Constant { heading } => vec![Some(mk(Direction::Heading(*heading), base.v)); grid.len()],
        Field::Velocity { direction } => {
            let norm = direction.iter().map(|c| c * c).sum::<f64>().sqrt();
            let d = if norm > 0.0 {
                direction.iter().map(|c| c / norm).collect()
            } else {
                vec![0.0; direction.len()]
            };
            vec![Some(mk(Direction::Vector(d), base.v)); grid.len()]
        }
        Field::Patrol(p) => (0..grid.len())
            .map(|i| {
                let c = grid.center(i);
                Some(mk(Direction::Heading(p.heading(c[0], c[1])), base.v))
            })
            .collect(),
        Field::Table { cells } => {
            let mut out = vec![None; grid.len()];
            let by_cell: HashMap<&[i64], usize> = cells.iter().enumerate().map(|(i, c)| (c.cell.as_slice(), i)).collect();
            for (idx, slot) in out.iter_mut().enumerate() {
                let k = grid.coords(idx);
                if let Some(&i) = by_cell.get(k.as_slice()) {
                    let e = &cells[i];
                    let v = e.v.unwrap_or(base.v);
                    *slot = match (&e.heading, &e.velocity) {
                        (Some(h), _) => Some(mk(Direction::Heading(*h), v)),
                        (None, Some(d)) => {
                            let norm = d.iter().map(|c| c * c).sum::<f64>().sqrt();
                            let u = if norm > 0.0 { d.iter().map(|c| c / norm).collect() } else { vec![0.0; d.len()] };
                            Some(mk(Direction::Vector(u), v))
                        }
                        (None, None) => Some(mk(Direction::Vector(vec![0.0; grid.dim()]), 0.0)),
                    };
                }
            }
            out
        }
    }
}

/// Range of `f` over [a, b], where `f` attains 1 at `peak + 2k pi` and -1
/// at `peak + (2k + 1) pi`.
fn trig_range(f: fn(f64) -> f64, peak: f64, a: f64, b: f64) -> (f64, f64) {
    if b - a >= 2.0 * PI {
        return (-1.0, 1.0);
    }
    let (mut lo, mut hi) = (f(a).min(f(b)), f(a).max(f(b)));
    let mut k = ((a - peak) / PI).ceil() as i64;
    while peak + (k as f64) * PI <= b {
        if k.rem_euclid(2) == 0 {
            hi = 1.0;
        } else {
            lo = -1.0;
        }
        k += 1;
    }
    (lo, hi)
}

fn cos_range(a: f64, b: f64) -> (f64, f64) {
    trig_range(f64::cos, 0.0, a, b)
}

fn sin_range(a: f64, b: f64) -> (f64, f64) {
    trig_range(f64::sin, PI / 2.0, a, b)
}

/// Bounds of the displacement after `tau` (or over `[0, tau]`).
pub(crate) fn displacement(m: &Motion, tau: f64, horizon: ReachHorizon) -> Bounds {
    let (s0, s1) = m.speeds();
    let ranges: Vec<(f64, f64)> = match &m.direction {
        Direction::Heading(h) => {
            let (a, b) = (h - m.etheta, h + m.etheta);
            let c = cos_range(a, b);
            let s = sin_range(a, b);
            vec![c, s]
        }
        Direction::Vector(d) => d.iter().map(|&c| (c, c)).collect(),
    };
    ranges
        .into_iter()
        .map(|(lo, hi)| {
            let lo = (s0 * lo).min(s1 * lo) * tau;
            let hi = (s0 * hi).max(s1 * hi) * tau;
            match horizon {
                ReachHorizon::Endpoint => [lo, hi],
                ReachHorizon::Interval => [lo.min(0.0), hi.max(0.0)],
            }
        })
        .collect()
}

pub(crate) fn reach_of(grid: &Grid, cell: usize, m: &Motion, tau: f64, horizon: ReachHorizon) -> Bounds {
    grid.cell_box(cell)
        .iter()
        .zip(displacement(m, tau, horizon))
        .map(|(c, d)| [c[0] + d[0], c[1] + d[1]])
        .collect()
}

/// Box containing every state reachable after one period from the cell's
/// box, clipped to the domain, and whether the unclipped box leaves the
/// domain.
pub fn reach_box(spec: &SystemSpec, cell: usize, horizon: ReachHorizon) -> Result<(Bounds, bool), AbstractionError> {
    let grid = spec.grid();
    let field = motion_field(spec, &grid);
    let m = field[cell].as_ref().ok_or_else(|| AbstractionError::UndefinedMode(grid.coords(cell)))?;
    let raw = reach_of(&grid, cell, m, spec.tau, horizon);
    Ok(clip(&raw, &spec.domain))
}

pub(crate) fn clip(b: &Bounds, domain: &Bounds) -> (Bounds, bool) {
    let eps = 1e-9;
    let exits = b.iter().zip(domain).any(|(x, d)| x[0] < d[0] - eps || x[1] > d[1] + eps);
    let clipped = b
        .iter()
        .zip(domain)
        .map(|(x, d)| [x[0].max(d[0]).min(d[1]), x[1].min(d[1]).max(d[0])])
        .collect();
    (clipped, exits)
}

/// One simulated run of the sampled-data system.
#[derive(Clone, Debug)]
pub struct Trajectory {
    /// States at multiples of the period.
    pub states: Vec<Vec<f64>>,
    pub cells: Vec<usize>,
    pub aps: Vec<String>,
    /// Observation of the tracked propositions on each period.
    pub letters: Vec<ObsMap>,
    /// Whether the run stopped early because it left the domain.
    pub left_domain: bool,
}

/// Samples per period when classifying observations.
pub const SAMPLES_PER_PERIOD: usize = 1000;

/// Simulates `steps` periods from the initial state. In each period the
/// mode of the current cell is held with a speed and angle disturbance drawn
/// uniformly from their bounds. The tracked propositions are sampled
/// `SAMPLES_PER_PERIOD` times per period and each period is chopped into
/// one observation per proposition.
pub fn simulate_trajectory(spec: &SystemSpec, aps: &[String], steps: usize, seed: u64) -> Result<Trajectory, AbstractionError> {
    spec.validate()?;
    let regions = aps.iter().map(|p| spec.region(p)).collect::<Result<Vec<_>, _>>()?;
    let grid = spec.grid();
    let field = motion_field(spec, &grid);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = spec.x_in.clone();
    let mut out = Trajectory {
        states: vec![x.clone()],
        cells: vec![grid.quantize(&x)],
        aps: aps.to_vec(),
        letters: Vec::new(),
        left_domain: false,
    };
    for k in 0..steps {
        let cell = *out.cells.last().unwrap();
        let m = field[cell].as_ref().ok_or_else(|| AbstractionError::UndefinedMode(grid.coords(cell)))?;
        let u = m.velocity(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
        let end: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a + spec.tau * b).collect();
        if !spec.in_domain(&end) {
            out.left_domain = true;
            break;
        }
        let mut letter = ObsMap(0);
        let mut changing = Vec::new();
        for (i, r) in regions.iter().enumerate() {
            let at = |j: usize| {
                let t = spec.tau * j as f64 / SAMPLES_PER_PERIOD as f64;
                let p: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a + t * b).collect();
                r.contains(&p)
            };
            let first = at(0);
            let mut prev = first;
            let mut switches = 0;
            for j in 1..=SAMPLES_PER_PERIOD {
                let now = at(j);
                if now != prev {
                    switches += 1;
                }
                prev = now;
            }
            if switches > 1 {
                return Err(AbstractionError::Chop(ChopError::UndefinedSlice {
                    slice: k,
                    ap: aps[i].clone(),
                }));
            }
            let o = match (first, prev) {
                (true, true) => Observation::A,
                (true, false) => Observation::Z,
                (false, true) => Observation::E,
                (false, false) => Observation::N,
            };
            if o.changes() {
                changing.push(aps[i].clone());
            }
            letter.set(i, o);
        }
        if changing.len() > 1 {
            return Err(AbstractionError::Chop(ChopError::MultiChange { slice: k, aps: changing }));
        }
        out.letters.push(letter);
        x = end;
        out.cells.push(grid.quantize(&x));
        out.states.push(x.clone());
    }
    Ok(out)
}
