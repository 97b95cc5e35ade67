use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

use super::Observation;

/// Observation of each tracked proposition, packed two bits per proposition
/// in the order of the tracked list (at most 16 propositions).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ObsMap(pub u32);

pub const MAX_APS: usize = 16;

impl ObsMap {
    pub fn uniform(n: usize, o: Observation) -> ObsMap {
        let mut m = ObsMap(0);
        for i in 0..n {
            m.set(i, o);
        }
        m
    }

    pub fn get(self, i: usize) -> Observation {
        Observation::from_index(((self.0 >> (2 * i)) & 3) as u8)
    }

    pub fn set(&mut self, i: usize, o: Observation) {
        self.0 = (self.0 & !(3 << (2 * i))) | ((o.index() as u32) << (2 * i));
    }

    pub fn with(mut self, i: usize, o: Observation) -> ObsMap {
        self.set(i, o);
        self
    }

    pub fn from_slice(obs: &[Observation]) -> ObsMap {
        let mut m = ObsMap(0);
        for (i, &o) in obs.iter().enumerate() {
            m.set(i, o);
        }
        m
    }

    /// All 4^n maps over `n` propositions.
    pub fn all(n: usize) -> impl Iterator<Item = ObsMap> {
        (0..1u32 << (2 * n)).map(ObsMap)
    }

    /// Number of propositions observed as Z or E.
    pub fn changes(self, n: usize) -> usize {
        (0..n).filter(|&i| self.get(i).changes()).count()
    }

    pub fn to_map(self, aps: &[String]) -> BTreeMap<String, Observation> {
        aps.iter().enumerate().map(|(i, p)| (p.clone(), self.get(i))).collect()
    }

    pub fn from_map(aps: &[String], map: &BTreeMap<String, Observation>) -> Result<ObsMap, WordError> {
        if map.len() != aps.len() {
            return Err(WordError::ApMismatch {
                expected: aps.to_vec(),
                found: map.keys().cloned().collect(),
            });
        }
        let mut m = ObsMap(0);
        for (i, p) in aps.iter().enumerate() {
            match map.get(p) {
                Some(&o) => m.set(i, o),
                None => {
                    return Err(WordError::ApMismatch {
                        expected: aps.to_vec(),
                        found: map.keys().cloned().collect(),
                    })
                }
            }
        }
        Ok(m)
    }

    /// Compact text form such as `g:A,p:N`.
    pub fn render(self, aps: &[String]) -> String {
        aps.iter()
            .enumerate()
            .map(|(i, p)| format!("{}:{}", p, self.get(i)))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Ultimately periodic sequence `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lasso<T> {
    pub prefix: Vec<T>,
    pub cycle: Vec<T>,
}

impl<T: Clone + PartialEq> Lasso<T> {
    pub fn new(prefix: Vec<T>, cycle: Vec<T>) -> Lasso<T> {
        Lasso { prefix, cycle }
    }

    /// Number of distinct positions (prefix plus one loop).
    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Position of step `k` among the `len()` distinct positions.
    pub fn position(&self, k: usize) -> usize {
        if k < self.prefix.len() {
            k
        } else {
            self.prefix.len() + (k - self.prefix.len()) % self.cycle.len()
        }
    }

    /// Position following position `i`.
    pub fn next(&self, i: usize) -> usize {
        if i + 1 < self.len() {
            i + 1
        } else {
            self.prefix.len()
        }
    }

    pub fn at(&self, k: usize) -> &T {
        let i = self.position(k);
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.cycle[i - self.prefix.len()]
        }
    }

    pub fn positions(&self) -> impl Iterator<Item = &T> {
        self.prefix.iter().chain(self.cycle.iter())
    }

    /// Shortest representation of the same infinite sequence.
    pub fn normalized(&self) -> Lasso<T> {
        let n = self.cycle.len();
        let period = (1..=n)
            .find(|&d| n % d == 0 && (0..n).all(|i| self.cycle[i] == self.cycle[i % d]))
            .unwrap_or(n);
        let mut cycle: Vec<T> = self.cycle[..period].to_vec();
        let mut prefix = self.prefix.clone();
        while let Some(last) = prefix.last() {
            if *last != cycle[cycle.len() - 1] {
                break;
            }
            prefix.pop();
            cycle.rotate_right(1);
        }
        Lasso { prefix, cycle }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Lasso<U> {
        Lasso {
            prefix: self.prefix.iter().map(&f).collect(),
            cycle: self.cycle.iter().map(&f).collect(),
        }
    }
}

/// An ultimately periodic word over observation maps of `aps`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignalWord {
    pub aps: Vec<String>,
    pub word: Lasso<ObsMap>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordViolation {
    EmptyLoop,
    /// The value of `ap` at the end of step `k` differs from its value at
    /// the start of step `k + 1`.
    Seam { step: usize, ap: String },
    /// Two propositions change within step `k`.
    MultiChange { step: usize, aps: Vec<String> },
}

impl fmt::Display for WordViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordViolation::EmptyLoop => write!(f, "empty loop"),
            WordViolation::Seam { step, ap } => {
                write!(f, "{} ends step {} differently from how step {} starts", ap, step, step + 1)
            }
            WordViolation::MultiChange { step, aps } => {
                write!(f, "{} all change during step {}", aps.join(", "), step)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WordError {
    #[error("proposition mismatch: expected {expected:?}, found {found:?}")]
    ApMismatch { expected: Vec<String>, found: Vec<String> },
    #[error("not a signal word: {0}")]
    Invalid(WordViolation),
    #[error("too many propositions ({0}, at most 16)")]
    TooManyAps(usize),
}

impl SignalWord {
    pub fn new(aps: Vec<String>, prefix: Vec<ObsMap>, cycle: Vec<ObsMap>) -> SignalWord {
        SignalWord {
            aps,
            word: Lasso::new(prefix, cycle),
        }
    }

    /// Builds a one-proposition word from observation letters, e.g.
    /// `from_letters("p", "NE", "A")`.
    pub fn from_letters(ap: &str, prefix: &str, cycle: &str) -> SignalWord {
        let conv = |s: &str| -> Vec<ObsMap> {
            s.chars()
                .map(|c| ObsMap::from_slice(&[Observation::from_char(c).expect("observation letter")]))
                .collect()
        };
        SignalWord::new(vec![ap.to_string()], conv(prefix), conv(cycle))
    }

    pub fn render(&self) -> String {
        let part = |v: &[ObsMap]| v.iter().map(|m| format!("[{}]", m.render(&self.aps))).collect::<String>();
        format!("{}({})^w", part(&self.word.prefix), part(&self.word.cycle))
    }
}

/// Checks the seam condition (a proposition ending a step true must start
/// the next step true, and conversely) and the single-change condition, and
/// reports the first violation.
pub fn is_signal_word(w: &SignalWord) -> Result<(), WordViolation> {
    let n = w.aps.len();
    if w.word.cycle.is_empty() {
        return Err(WordViolation::EmptyLoop);
    }
    for k in 0..w.word.len() {
        let cur = *w.word.at(k);
        let changing: Vec<String> = (0..n).filter(|&i| cur.get(i).changes()).map(|i| w.aps[i].clone()).collect();
        if changing.len() > 1 {
            return Err(WordViolation::MultiChange { step: k, aps: changing });
        }
        let next = *w.word.at(k + 1);
        for i in 0..n {
            if cur.get(i).ends_true() != next.get(i).starts_true() {
                return Err(WordViolation::Seam {
                    step: k,
                    ap: w.aps[i].clone(),
                });
            }
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct RawWord {
    prefix: Vec<BTreeMap<String, Observation>>,
    #[serde(rename = "loop")]
    cycle: Vec<BTreeMap<String, Observation>>,
}

impl Serialize for SignalWord {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        RawWord {
            prefix: self.word.prefix.iter().map(|m| m.to_map(&self.aps)).collect(),
            cycle: self.word.cycle.iter().map(|m| m.to_map(&self.aps)).collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SignalWord {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = RawWord::deserialize(de)?;
        let first = raw
            .prefix
            .first()
            .or(raw.cycle.first())
            .ok_or_else(|| serde::de::Error::custom("empty word"))?;
        let aps: Vec<String> = first.keys().cloned().collect();
        if aps.len() > MAX_APS {
            return Err(serde::de::Error::custom(WordError::TooManyAps(aps.len())));
        }
        let conv = |v: &[BTreeMap<String, Observation>]| -> Result<Vec<ObsMap>, WordError> {
            v.iter().map(|m| ObsMap::from_map(&aps, m)).collect()
        };
        let prefix = conv(&raw.prefix).map_err(serde::de::Error::custom)?;
        let cycle = conv(&raw.cycle).map_err(serde::de::Error::custom)?;
        Ok(SignalWord::new(aps, prefix, cycle))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valid_and_invalid_words() {
        assert_eq!(is_signal_word(&SignalWord::from_letters("p", "AZ", "N")), Ok(()));
        assert!(matches!(
            is_signal_word(&SignalWord::from_letters("p", "A", "N")),
            Err(WordViolation::Seam { step: 0, .. })
        ));
        // The seam also wraps around the loop.
        assert!(is_signal_word(&SignalWord::from_letters("p", "", "AZ")).is_err());
        assert_eq!(is_signal_word(&SignalWord::from_letters("p", "", "ZE")), Ok(()));
        let aps = vec!["p".to_string(), "q".to_string()];
        let two = SignalWord::new(
            aps,
            vec![ObsMap::from_slice(&[Observation::Z, Observation::E])],
            vec![ObsMap::from_slice(&[Observation::N, Observation::A])],
        );
        assert!(matches!(is_signal_word(&two), Err(WordViolation::MultiChange { step: 0, .. })));
    }

    #[test]
    fn normalization() {
        let l = Lasso::new(vec![1, 2, 3, 2, 3], vec![2, 3, 2, 3]);
        let n = l.normalized();
        assert_eq!(n, Lasso::new(vec![1], vec![2, 3]));
        for k in 0..20 {
            assert_eq!(l.at(k), n.at(k));
        }
    }

    #[test]
    fn json_round_trip() {
        let w = SignalWord::from_letters("p", "NE", "A");
        let text = serde_json::to_string(&w).unwrap();
        assert_eq!(text, r#"{"prefix":[{"p":"N"},{"p":"E"}],"loop":[{"p":"A"}]}"#);
        let back: SignalWord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, w);
    }
}
