//! Piecewise-constant, ultimately periodic signals over propositions, their
//! dense-time LTL semantics, and chopping into observation words.
//!
//! Time is kept as integer ticks of one microsecond, so lasso periods and
//! slice boundaries line up exactly. A piece of duration `d` that ends at
//! `s` determines the value on the half-open interval `(s - d, s]`; the value
//! at time 0 is the value of the first piece.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use super::word::{is_signal_word, Lasso, ObsMap, SignalWord, WordViolation, MAX_APS};
use super::Observation;
use crate::ltl::{Nnf, SubNode, SubformulaSet};

pub const TICKS_PER_SECOND: u64 = 1_000_000;

/// Largest number of slices in the loop of a chopped word.
pub const MAX_LOOP_SLICES: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub dur: f64,
    pub aps: BTreeSet<String>,
}

impl Piece {
    pub fn new(dur: f64, aps: &[&str]) -> Piece {
        Piece {
            dur,
            aps: aps.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseSignal {
    /// Propositions the signal talks about; when empty, the union of the
    /// propositions mentioned in the pieces.
    #[serde(default)]
    pub aps: Vec<String>,
    pub prefix: Vec<Piece>,
    #[serde(rename = "loop")]
    pub cycle: Vec<Piece>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SignalError {
    #[error("piece durations must be positive, got {0}")]
    NonPositiveDuration(f64),
    #[error("the loop of a signal must not be empty")]
    EmptyLoop,
    #[error("{0} s is not a whole number of microseconds")]
    Incommensurable(f64),
    #[error("slice length must be positive")]
    NonPositiveTau,
    #[error("the chopped loop would have {0} slices (limit {MAX_LOOP_SLICES})")]
    LoopTooLong(u128),
    #[error("too many propositions ({0}, at most {MAX_APS})")]
    TooManyAps(usize),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChopError {
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error("{ap} changes more than once in slice {slice}")]
    UndefinedSlice { slice: usize, ap: String },
    #[error("{aps:?} all change in slice {slice}")]
    MultiChange { slice: usize, aps: Vec<String> },
}

pub fn to_ticks(secs: f64) -> Result<u64, SignalError> {
    if !(secs > 0.0) || !secs.is_finite() {
        return Err(SignalError::NonPositiveDuration(secs));
    }
    let t = secs * TICKS_PER_SECOND as f64;
    let r = t.round();
    if (t - r).abs() > 1e-9 * t.max(1.0) {
        return Err(SignalError::Incommensurable(secs));
    }
    Ok(r as u64)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl PiecewiseSignal {
    pub fn new(prefix: Vec<Piece>, cycle: Vec<Piece>) -> PiecewiseSignal {
        PiecewiseSignal {
            aps: Vec::new(),
            prefix,
            cycle,
        }
    }

    /// The tracked propositions, sorted.
    pub fn tracked(&self) -> Vec<String> {
        let mut set: BTreeSet<String> = self.aps.iter().cloned().collect();
        if set.is_empty() {
            for p in self.prefix.iter().chain(self.cycle.iter()) {
                set.extend(p.aps.iter().cloned());
            }
        }
        set.into_iter().collect()
    }
}

/// Tick-level form of a signal with letters as bit masks over `aps`.
#[derive(Clone, Debug)]
struct TickSignal {
    /// End time of each prefix piece.
    prefix_ends: Vec<u64>,
    prefix_vals: Vec<u32>,
    /// End offset of each loop piece, relative to the loop start.
    loop_ends: Vec<u64>,
    loop_vals: Vec<u32>,
}

impl TickSignal {
    fn new(sig: &PiecewiseSignal, aps: &[String]) -> Result<TickSignal, SignalError> {
        if sig.cycle.is_empty() {
            return Err(SignalError::EmptyLoop);
        }
        if aps.len() > 32 {
            return Err(SignalError::TooManyAps(aps.len()));
        }
        let mask = |p: &Piece| -> u32 {
            aps.iter()
                .enumerate()
                .filter(|(_, a)| p.aps.contains(*a))
                .fold(0, |m, (i, _)| m | (1 << i))
        };
        let conv = |pieces: &[Piece]| -> Result<(Vec<u64>, Vec<u32>), SignalError> {
            let mut ends = Vec::new();
            let mut vals = Vec::new();
            let mut acc = 0u64;
            for p in pieces {
                acc += to_ticks(p.dur)?;
                ends.push(acc);
                vals.push(mask(p));
            }
            Ok((ends, vals))
        };
        let (prefix_ends, prefix_vals) = conv(&sig.prefix)?;
        let (loop_ends, loop_vals) = conv(&sig.cycle)?;
        Ok(TickSignal {
            prefix_ends,
            prefix_vals,
            loop_ends,
            loop_vals,
        })
    }

    fn prefix_len(&self) -> u64 {
        self.prefix_ends.last().copied().unwrap_or(0)
    }

    fn loop_len(&self) -> u64 {
        *self.loop_ends.last().unwrap()
    }

    /// Value at the instant `t`.
    /// Value at instant `t`. Signals are right-continuous: at a switch the
    /// value is that of the piece that starts there.
    fn at(&self, t: u64) -> u32 {
        self.after(t)
    }

    /// Value on the open interval starting at `t`.
    fn after(&self, t: u64) -> u32 {
        let tp = self.prefix_len();
        if t < tp {
            let i = self.prefix_ends.partition_point(|&e| e <= t);
            return self.prefix_vals[i];
        }
        let r = (t - tp) % self.loop_len();
        let j = self.loop_ends.partition_point(|&e| e <= r);
        self.loop_vals[j]
    }

    /// All piece boundaries in the half-open range `(lo, hi]`.
    fn boundaries(&self, lo: u64, hi: u64, out: &mut Vec<u64>) {
        for &e in &self.prefix_ends {
            if e > lo && e <= hi {
                out.push(e);
            }
        }
        let tp = self.prefix_len();
        let l = self.loop_len();
        let mut base = if lo > tp { tp + (lo - tp) / l * l } else { tp };
        while base < hi {
            for &e in &self.loop_ends {
                let t = base + e;
                if t > lo && t <= hi {
                    out.push(t);
                }
            }
            base += l;
        }
    }
}

/// Alternating sequence of instants and open intervals covering the time
/// line: a prefix `{0} (0,b1) {b1} ... {T}` followed by a loop
/// `(T,T+l1) {T+l1} ... {T+P}` that repeats with period `P`. Each
/// proposition is constant on every element.
#[derive(Clone, Debug)]
pub struct Timeline {
    pub aps: Vec<String>,
    prefix_pts: Vec<u64>,
    loop_pts: Vec<u64>,
    vals: Vec<u32>,
    tau: Option<u64>,
}

impl Timeline {
    fn build(sig: &TickSignal, aps: Vec<String>, end: u64, period: u64, tau: Option<u64>) -> Timeline {
        let mut pts = vec![0, end];
        sig.boundaries(0, end, &mut pts);
        let mut lpts = vec![end + period];
        sig.boundaries(end, end + period, &mut lpts);
        for l in lpts.iter_mut() {
            *l -= end;
        }
        if let Some(t) = tau {
            pts.extend((1..=end / t).map(|k| k * t));
            lpts.extend((1..=period / t).map(|k| k * t));
        }
        pts.sort_unstable();
        pts.dedup();
        lpts.sort_unstable();
        lpts.dedup();
        let mut vals = Vec::with_capacity(2 * (pts.len() + lpts.len()));
        vals.push(sig.at(0));
        for w in pts.windows(2) {
            vals.push(sig.after(w[0]));
            vals.push(sig.at(w[1]));
        }
        let mut prev = 0;
        for &l in &lpts {
            vals.push(sig.after(end + prev));
            vals.push(sig.at(end + l));
            prev = l;
        }
        Timeline {
            aps,
            prefix_pts: pts,
            loop_pts: lpts,
            vals,
            tau,
        }
    }

    /// Timeline for evaluating formulas on `sig`.
    pub fn new(sig: &PiecewiseSignal) -> Result<Timeline, SignalError> {
        let aps = sig.tracked();
        let ts = TickSignal::new(sig, &aps)?;
        let (end, period) = (ts.prefix_len(), ts.loop_len());
        Ok(Timeline::build(&ts, aps, end, period, None))
    }

    /// Timeline refined at every multiple of `tau`, with a prefix ending on
    /// the first slice boundary strictly after the signal's prefix and a loop
    /// spanning a whole number of slices and signal periods.
    pub fn for_chop(sig: &PiecewiseSignal, tau: f64) -> Result<Timeline, SignalError> {
        if !(tau > 0.0) {
            return Err(SignalError::NonPositiveTau);
        }
        let tau = to_ticks(tau)?;
        let aps = sig.tracked();
        let ts = TickSignal::new(sig, &aps)?;
        let end = (ts.prefix_len() / tau + 1) * tau;
        let l = ts.loop_len();
        let period = l as u128 / gcd(l, tau) as u128 * tau as u128;
        let slices = period / tau as u128;
        if slices > MAX_LOOP_SLICES as u128 {
            return Err(SignalError::LoopTooLong(slices));
        }
        Ok(Timeline::build(&ts, aps, end, period as u64, Some(tau)))
    }

    pub fn num_prefix(&self) -> usize {
        2 * self.prefix_pts.len() - 1
    }

    pub fn len(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    fn next(&self, e: usize) -> usize {
        if e + 1 < self.vals.len() {
            e + 1
        } else {
            self.num_prefix()
        }
    }

    fn is_point(&self, e: usize) -> bool {
        let np = self.num_prefix();
        if e < np {
            e % 2 == 0
        } else {
            (e - np) % 2 == 1
        }
    }

    fn end(&self) -> u64 {
        *self.prefix_pts.last().unwrap()
    }

    fn period(&self) -> u64 {
        *self.loop_pts.last().unwrap()
    }

    /// Element containing the instant `t` (in ticks).
    pub fn locate(&self, t: u64) -> usize {
        let end = self.end();
        if t <= end {
            return match self.prefix_pts.binary_search(&t) {
                Ok(i) => 2 * i,
                Err(i) => 2 * i - 1,
            };
        }
        let np = self.num_prefix();
        let o = (t - end) % self.period();
        if o == 0 {
            return self.len() - 1;
        }
        match self.loop_pts.binary_search(&o) {
            Ok(j) => np + 2 * j + 1,
            Err(j) => np + 2 * j,
        }
    }

    fn atom(&self, p: &str) -> Vec<bool> {
        match self.aps.iter().position(|a| a == p) {
            Some(i) => self.vals.iter().map(|v| v >> i & 1 == 1).collect(),
            None => vec![false; self.len()],
        }
    }

    fn until(&self, a: &[bool], b: &[bool]) -> Vec<bool> {
        let n = self.len();
        let np = self.num_prefix();
        let mut u = vec![false; n];
        let step = |e: usize, u: &mut Vec<bool>| {
            let nx = self.next(e);
            u[e] = b[e] || (a[e] && if self.is_point(e) { a[nx] && u[nx] } else { u[nx] });
        };
        // Least fixpoint on the loop: two backward sweeps settle the value
        // flowing around the seam.
        for _ in 0..2 {
            for e in (np..n).rev() {
                step(e, &mut u);
            }
        }
        for e in (0..np).rev() {
            step(e, &mut u);
        }
        u
    }

    /// Truth of every subformula on every element.
    pub fn truth_all(&self, sub: &SubformulaSet) -> Vec<Vec<bool>> {
        let mut rows: Vec<Vec<bool>> = Vec::with_capacity(sub.len());
        for node in &sub.nodes {
            let row = match *node {
                SubNode::True => vec![true; self.len()],
                SubNode::False => vec![false; self.len()],
                SubNode::Atom(a) => self.atom(&sub.atoms[a]),
                SubNode::NegAtom(i) => rows[i].iter().map(|v| !v).collect(),
                SubNode::And(l, r) => rows[l].iter().zip(&rows[r]).map(|(x, y)| *x && *y).collect(),
                SubNode::Or(l, r) => rows[l].iter().zip(&rows[r]).map(|(x, y)| *x || *y).collect(),
                SubNode::Until(l, r) => self.until(&rows[l], &rows[r]),
                SubNode::Release(l, r) => {
                    let nl: Vec<bool> = rows[l].iter().map(|v| !v).collect();
                    let nr: Vec<bool> = rows[r].iter().map(|v| !v).collect();
                    self.until(&nl, &nr).into_iter().map(|v| !v).collect()
                }
            };
            rows.push(row);
        }
        rows
    }

    pub fn truth(&self, f: &Nnf) -> Vec<bool> {
        let sub = SubformulaSet::new(f);
        self.truth_all(&sub).pop().unwrap()
    }

    /// Number of slices in the prefix and in the loop of the chopped word.
    pub fn slice_counts(&self) -> (usize, usize) {
        let tau = self.tau.expect("timeline built for chopping");
        ((self.end() / tau) as usize, (self.period() / tau) as usize)
    }

    /// Elements covering the closed slice `[n tau, (n+1) tau]`.
    fn slice_elements(&self, n: usize) -> Vec<usize> {
        let tau = self.tau.expect("timeline built for chopping");
        let (n0, _) = self.slice_counts();
        let (first, last) = if n < n0 {
            (self.locate(n as u64 * tau), self.locate((n as u64 + 1) * tau))
        } else {
            let o = (n - n0) as u64 * tau;
            let first = if o == 0 { self.num_prefix() - 1 } else { self.locate(self.end() + o) };
            (first, self.locate(self.end() + o + tau))
        };
        let mut out = vec![first];
        let mut e = first;
        while e != last {
            e = self.next(e);
            out.push(e);
        }
        out
    }

    fn classify(&self, elems: &[usize], vals: &[bool]) -> Option<Observation> {
        let v: Vec<bool> = elems.iter().map(|&e| vals[e]).collect();
        let first = v[0];
        let switch = v.iter().position(|&x| x != first);
        match switch {
            None => Some(if first { Observation::A } else { Observation::N }),
            Some(j) => {
                if v[j..].iter().any(|&x| x == first) {
                    None
                } else if first {
                    Some(Observation::Z)
                } else {
                    Some(Observation::E)
                }
            }
        }
    }

    /// Chops a truth row into slices; `None` marks a slice that fits none of
    /// the four patterns.
    pub fn chop_truth(&self, vals: &[bool]) -> Lasso<Option<Observation>> {
        let (n0, p) = self.slice_counts();
        let obs: Vec<Option<Observation>> = (0..n0 + p).map(|n| self.classify(&self.slice_elements(n), vals)).collect();
        Lasso::new(obs[..n0].to_vec(), obs[n0..].to_vec())
    }
}

/// Dense-time truth of `f` at time `t` (seconds, resolved to microseconds).
pub fn eval_signal(sig: &PiecewiseSignal, f: &Nnf, t: f64) -> Result<bool, SignalError> {
    let tl = Timeline::new(sig)?;
    let ticks = (t * TICKS_PER_SECOND as f64).round().max(0.0) as u64;
    Ok(tl.truth(f)[tl.locate(ticks)])
}

/// Chops `sig` into slices of length `tau` and returns the observation word
/// over the signal's tracked propositions, as a shortest lasso.
pub fn chop(sig: &PiecewiseSignal, tau: f64) -> Result<SignalWord, ChopError> {
    let tl = Timeline::for_chop(sig, tau)?;
    if tl.aps.len() > MAX_APS {
        return Err(SignalError::TooManyAps(tl.aps.len()).into());
    }
    let (n0, p) = tl.slice_counts();
    let mut letters = vec![ObsMap(0); n0 + p];
    for (i, ap) in tl.aps.iter().enumerate() {
        let row = tl.atom(ap);
        let chopped = tl.chop_truth(&row);
        for (n, o) in chopped.positions().enumerate() {
            match o {
                Some(o) => letters[n].set(i, *o),
                None => {
                    return Err(ChopError::UndefinedSlice {
                        slice: n,
                        ap: ap.clone(),
                    })
                }
            }
        }
    }
    let word = SignalWord::new(tl.aps.clone(), letters[..n0].to_vec(), letters[n0..].to_vec());
    match is_signal_word(&word) {
        Ok(()) => {}
        Err(WordViolation::MultiChange { step, aps }) => return Err(ChopError::MultiChange { slice: step, aps }),
        Err(other) => unreachable!("chopping produced an inconsistent seam: {}", other),
    }
    Ok(SignalWord {
        aps: word.aps,
        word: word.word.normalized(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{parse_ltl, to_nnf};

    fn nnf(s: &str) -> Nnf {
        to_nnf(&parse_ltl(s).unwrap()).unwrap()
    }

    fn letters(w: &SignalWord, k: usize) -> String {
        (0..k).map(|i| w.word.at(i).get(0).to_string()).collect()
    }

    #[test]
    fn chop_single_fall() {
        let s = PiecewiseSignal::new(vec![Piece::new(1.5, &["p"])], vec![Piece::new(1.0, &[])]);
        let w = chop(&s, 1.0).unwrap();
        assert_eq!(letters(&w, 6), "AZNNNN");
    }

    #[test]
    fn chop_never() {
        let s = PiecewiseSignal {
            aps: vec!["p".into()],
            prefix: vec![],
            cycle: vec![Piece::new(2.0, &[])],
        };
        let w = chop(&s, 1.0).unwrap();
        assert_eq!(w.word.prefix.len(), 0);
        assert_eq!(letters(&w, 3), "NNN");
    }

    #[test]
    fn chop_fast_toggle_is_undefined() {
        let s = PiecewiseSignal::new(vec![], vec![Piece::new(0.3, &["p"]), Piece::new(0.3, &[])]);
        assert!(matches!(chop(&s, 1.0), Err(ChopError::UndefinedSlice { .. })));
    }

    #[test]
    fn change_on_slice_boundary_ends_the_slice() {
        // p holds on [0,1) and is false from t = 1 on.
        let s = PiecewiseSignal::new(vec![Piece::new(1.0, &["p"])], vec![Piece::new(1.0, &[])]);
        let w = chop(&s, 1.0).unwrap();
        assert_eq!(letters(&w, 3), "ZNN");
    }

    #[test]
    fn chop_two_props_changing_together() {
        let s = PiecewiseSignal::new(vec![Piece::new(0.5, &["p"])], vec![Piece::new(1.0, &["q"])]);
        assert!(matches!(chop(&s, 1.0), Err(ChopError::MultiChange { slice: 0, .. })));
    }

    #[test]
    fn incommensurable_duration() {
        let s = PiecewiseSignal::new(vec![], vec![Piece::new(1.0 / 3.0, &["p"])]);
        assert!(matches!(chop(&s, 1.0), Err(ChopError::Signal(SignalError::Incommensurable(_)))));
    }

    #[test]
    fn eval_examples() {
        let always = PiecewiseSignal::new(vec![], vec![Piece::new(1.0, &["p"])]);
        assert!(eval_signal(&always, &nnf("F p"), 0.0).unwrap());
        let periodic = PiecewiseSignal::new(
            vec![],
            vec![Piece::new(2.0, &[]), Piece::new(1.0, &["p"]), Piece::new(1.0, &[])],
        );
        assert!(eval_signal(&periodic, &nnf("G F p"), 0.0).unwrap());
        assert!(!eval_signal(&periodic, &nnf("F G p"), 0.0).unwrap());
        let once = PiecewiseSignal::new(vec![Piece::new(1.0, &["a"])], vec![Piece::new(1.0, &[])]);
        assert!(!eval_signal(&once, &nnf("G !a"), 0.0).unwrap());
        assert!(eval_signal(&once, &nnf("G !a"), 1.5).unwrap());
        // Value at the switch instant comes from the right piece.
        assert!(!eval_signal(&once, &nnf("a"), 1.0).unwrap());
        assert!(eval_signal(&once, &nnf("a"), 0.999999).unwrap());
    }

    #[test]
    fn until_needs_left_operand_up_to_the_witness() {
        // a on [0,2), b from 2 on: the witness is t' = 2.
        let s = PiecewiseSignal::new(vec![Piece::new(2.0, &["a"])], vec![Piece::new(1.0, &["b"])]);
        assert!(eval_signal(&s, &nnf("a U b"), 0.0).unwrap());
        assert!(eval_signal(&s, &nnf("a U b"), 2.5).unwrap());
        let overlap = PiecewiseSignal::new(
            vec![Piece::new(2.0, &["a"]), Piece::new(1.0, &["a", "b"])],
            vec![Piece::new(1.0, &["b"])],
        );
        assert!(eval_signal(&overlap, &nnf("a U b"), 0.0).unwrap());
        // b only starts after a gap where neither holds.
        let gap = PiecewiseSignal::new(
            vec![Piece::new(2.0, &["a"]), Piece::new(0.5, &[])],
            vec![Piece::new(1.0, &["b"])],
        );
        assert!(!eval_signal(&gap, &nnf("a U b"), 0.0).unwrap());
        assert!(eval_signal(&gap, &nnf("a U b"), 2.6).unwrap());
        // A single instant where b holds is enough.
        let inst = PiecewiseSignal::new(
            vec![Piece::new(1.0, &["a"]), Piece::new(1.0, &["a"])],
            vec![Piece::new(1.0, &[])],
        );
        assert!(!eval_signal(&inst, &nnf("a U b"), 0.0).unwrap());
    }

    #[test]
    fn locate_elements() {
        let s = PiecewiseSignal::new(vec![Piece::new(1.0, &["a"])], vec![Piece::new(2.0, &[]), Piece::new(1.0, &["a"])]);
        let tl = Timeline::new(&s).unwrap();
        // prefix {0} (0,1) {1}; loop (1,3) {3} (3,4) {4}
        assert_eq!(tl.num_prefix(), 3);
        assert_eq!(tl.len(), 7);
        assert_eq!(tl.locate(0), 0);
        assert_eq!(tl.locate(500_000), 1);
        assert_eq!(tl.locate(1_000_000), 2);
        assert_eq!(tl.locate(2_000_000), 3);
        assert_eq!(tl.locate(3_000_000), 4);
        assert_eq!(tl.locate(4_000_000), 6);
        assert_eq!(tl.locate(4_500_000), 3);
        assert_eq!(tl.locate(6_000_000), 4);
        assert_eq!(tl.locate(7_000_000), 6);
    }

    #[test]
    fn chop_periodic_with_unaligned_loop() {
        // Loop of 2.5 s: p on for 1.25 s then off; tau = 1.
        let s = PiecewiseSignal::new(vec![], vec![Piece::new(1.25, &["p"]), Piece::new(1.25, &[])]);
        let tl = Timeline::for_chop(&s, 1.0).unwrap();
        assert_eq!(tl.slice_counts(), (1, 5));
        let w = chop(&s, 1.0).unwrap();
        // p on [0,1.25), [2.5,3.75), [5,6.25), ...
        assert_eq!(letters(&w, 8), "AZEZEAZE");
    }
}
