//! Regions given as unions of conjunctions of axis-aligned half-spaces, and
//! exact box classification and boundary distances by decomposing space
//! along every threshold.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Ge,
    Le,
    Gt,
    Lt,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub axis: usize,
    pub op: Op,
    pub c: f64,
}

impl HalfSpace {
    pub fn new(axis: usize, op: Op, c: f64) -> HalfSpace {
        HalfSpace { axis, op, c }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        let v = x[self.axis];
        match self.op {
            Op::Ge => v >= self.c,
            Op::Le => v <= self.c,
            Op::Gt => v > self.c,
            Op::Lt => v < self.c,
        }
    }
}

/// Union of conjunctions. The empty union is the empty region; an empty
/// conjunction is all of space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct ApRegion(pub Vec<Vec<HalfSpace>>);

/// Closed axis-aligned box, one `[lo, hi]` per axis.
pub type Bounds = Vec<[f64; 2]>;

/// Result of testing a box against a region.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rho {
    /// Every point of the box is in the region.
    Inside,
    /// No point of the box is in the region.
    Outside,
    Mixed,
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rho::Inside => "+",
            Rho::Outside => "-",
            Rho::Mixed => "?",
        })
    }
}

/// One piece of a decomposed axis: a breakpoint or the open interval
/// between two consecutive breakpoints.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Piece {
    Point(f64),
    Open(f64, f64),
}

impl Piece {
    fn sample(self) -> f64 {
        match self {
            Piece::Point(x) => x,
            Piece::Open(a, b) => 0.5 * (a + b),
        }
    }

    fn closure(self) -> [f64; 2] {
        match self {
            Piece::Point(x) => [x, x],
            Piece::Open(a, b) => [a, b],
        }
    }
}

fn decompose(lo: f64, hi: f64, mut cuts: Vec<f64>) -> Vec<Piece> {
    cuts.retain(|&c| c > lo && c < hi);
    cuts.push(lo);
    cuts.push(hi);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let mut out = vec![Piece::Point(cuts[0])];
    for w in cuts.windows(2) {
        out.push(Piece::Open(w[0], w[1]));
        out.push(Piece::Point(w[1]));
    }
    out
}

fn for_each_index(dims: &[usize], mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if dims.iter().any(|&d| d == 0) {
        return true;
    }
    let mut idx = vec![0; dims.len()];
    loop {
        if !f(&idx) {
            return false;
        }
        let mut a = 0;
        loop {
            if a == dims.len() {
                return true;
            }
            idx[a] += 1;
            if idx[a] < dims[a] {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
    }
}

impl ApRegion {
    pub fn contains(&self, x: &[f64]) -> bool {
        self.0.iter().any(|conj| conj.iter().all(|h| h.contains(x)))
    }

    pub fn thresholds(&self, axis: usize) -> Vec<f64> {
        self.0.iter().flatten().filter(|h| h.axis == axis).map(|h| h.c).collect()
    }

    pub fn max_axis(&self) -> Option<usize> {
        self.0.iter().flatten().map(|h| h.axis).max()
    }

    /// Exact classification of a closed box. Membership is constant on each
    /// piece of the decomposition along the region's thresholds, so testing
    /// one point per piece decides the whole box.
    pub fn classify(&self, b: &Bounds) -> Rho {
        let pieces: Vec<Vec<Piece>> = (0..b.len()).map(|a| decompose(b[a][0], b[a][1], self.thresholds(a))).collect();
        let dims: Vec<usize> = pieces.iter().map(|p| p.len()).collect();
        let (mut any_in, mut any_out) = (false, false);
        let mut x = vec![0.0; b.len()];
        for_each_index(&dims, |idx| {
            for a in 0..idx.len() {
                x[a] = pieces[a][idx[a]].sample();
            }
            if self.contains(&x) {
                any_in = true;
            } else {
                any_out = true;
            }
            !(any_in && any_out)
        });
        match (any_in, any_out) {
            (true, false) => Rho::Inside,
            (false, true) => Rho::Outside,
            _ => Rho::Mixed,
        }
    }
}

/// Pieces of the domain lying on the topological boundary (relative to the
/// domain) of each region, as closed boxes.
pub fn boundary_faces(domain: &Bounds, regions: &[&ApRegion]) -> Vec<Vec<Bounds>> {
    let n = domain.len();
    let pieces: Vec<Vec<Piece>> = (0..n)
        .map(|a| {
            let cuts = regions.iter().flat_map(|r| r.thresholds(a)).collect();
            decompose(domain[a][0], domain[a][1], cuts)
        })
        .collect();
    let dims: Vec<usize> = pieces.iter().map(|p| p.len()).collect();
    let mut out = vec![Vec::new(); regions.len()];
    let mut x = vec![0.0; n];
    for_each_index(&dims, |idx| {
        // Neighbouring pieces whose closure contains this one: on axes where
        // this piece is a point, also the open intervals on either side.
        let options: Vec<Vec<usize>> = (0..n)
            .map(|a| match pieces[a][idx[a]] {
                Piece::Point(_) => {
                    let mut v = vec![idx[a]];
                    if idx[a] > 0 {
                        v.push(idx[a] - 1);
                    }
                    if idx[a] + 1 < dims[a] {
                        v.push(idx[a] + 1);
                    }
                    v
                }
                Piece::Open(..) => vec![idx[a]],
            })
            .collect();
        let opt_dims: Vec<usize> = options.iter().map(|o| o.len()).collect();
        for (r, region) in regions.iter().enumerate() {
            let (mut any_in, mut any_out) = (false, false);
            for_each_index(&opt_dims, |j| {
                for a in 0..n {
                    x[a] = pieces[a][options[a][j[a]]].sample();
                }
                if region.contains(&x) {
                    any_in = true;
                } else {
                    any_out = true;
                }
                !(any_in && any_out)
            });
            if any_in && any_out {
                out[r].push((0..n).map(|a| pieces[a][idx[a]].closure()).collect());
            }
        }
        true
    });
    out
}

/// Infinity-norm distance between two closed boxes.
pub fn box_distance(a: &Bounds, b: &Bounds) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (y[0] - x[1]).max(x[0] - y[1]).max(0.0))
        .fold(0.0, f64::max)
}

/// Infinity-norm distance between the boundaries of two regions inside the
/// domain; infinite when either boundary is empty.
pub fn boundary_distance(domain: &Bounds, p: &ApRegion, q: &ApRegion) -> f64 {
    let faces = boundary_faces(domain, &[p, q]);
    let mut best = f64::INFINITY;
    for a in &faces[0] {
        for b in &faces[1] {
            best = best.min(box_distance(a, b));
        }
    }
    best
}
