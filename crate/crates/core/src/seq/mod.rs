//! Symbolic bounded transfinite sequences.
//!
//! A [`Seq`] is built from five node kinds: constant blocks, finite
//! concatenations, finite and ω-fold repetition, and the doubling-run
//! oscillator (an ω-sequence alternating `lo`/`hi` in runs of length
//! 1, 2, 4, 8, ...). Every sequence has nonzero length below ε₀ and takes
//! finitely many values.
//!
//! The smart constructors ([`Seq::concat`], [`Seq::rep`], [`Seq::rep_omega`],
//! [`Seq::osc`]) normalize the node they build, assuming normalized children:
//! nested `Concat`s are flattened, adjacent equal-valued `Const` blocks are
//! merged, and repetitions of a constant collapse into a `Const`.
//! [`Seq::normalize`] applies the same rules bottom-up to an arbitrary tree.

mod parse;
mod split;
mod zip;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::ordinal::Ordinal;
use crate::rational::Rat;

pub use parse::{parse_label_seq, parse_real_seq};
pub use split::osc_run_length;
pub use zip::DEFAULT_PERIOD_BOUND;

/// Values a sequence may carry: rationals for real sequences, labels for
/// sequences of outcomes.
pub trait Value: Clone + Eq + Hash + Ord + fmt::Display + fmt::Debug {}

impl<T: Clone + Eq + Hash + Ord + fmt::Display + fmt::Debug> Value for T {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("sequences must have nonzero length")]
    ZeroLength,
    #[error("concatenation of an empty list")]
    EmptyList,
    #[error("repetition count must be at least one")]
    ZeroCount,
    #[error("cut point {at} is outside (0, {len})")]
    OutOfRange { at: Ordinal, len: Ordinal },
    #[error("cut point {at} falls strictly inside an oscillating atom")]
    UnsplittableAtom { at: Ordinal },
    #[error("value table has no entry for {0}")]
    MissingValue(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(Ordinal, Ordinal),
    #[error("no common refinement: {0}")]
    Unalignable(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Seq<V> {
    Const { value: V, len: Ordinal },
    Concat(Vec<Seq<V>>),
    RepFin { body: Box<Seq<V>>, count: BigUint },
    RepOmega(Box<Seq<V>>),
    Osc { lo: V, hi: V },
}

pub type RealSeq = Seq<Rat>;
pub type LabelSeq = Seq<String>;

/// A finite relabeling of sequence values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueTable<K: Ord, W>(pub BTreeMap<K, W>);

impl<K: Ord, W> ValueTable<K, W> {
    pub fn new() -> Self {
        ValueTable(BTreeMap::new())
    }

    pub fn insert(&mut self, k: K, w: W) {
        self.0.insert(k, w);
    }

    pub fn get(&self, k: &K) -> Option<&W> {
        self.0.get(k)
    }
}

impl<K: Ord, W> Default for ValueTable<K, W> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord, W> FromIterator<(K, W)> for ValueTable<K, W> {
    fn from_iter<I: IntoIterator<Item = (K, W)>>(iter: I) -> Self {
        ValueTable(iter.into_iter().collect())
    }
}

impl<V: Value> Seq<V> {
    pub fn constant(value: V, len: Ordinal) -> Result<Self, SeqError> {
        if len.is_zero() {
            return Err(SeqError::ZeroLength);
        }
        Ok(Seq::Const { value, len })
    }

    /// A single value, the length-1 sequence.
    pub fn unit(value: V) -> Self {
        Seq::Const {
            value,
            len: Ordinal::one(),
        }
    }

    pub fn concat(parts: Vec<Self>) -> Result<Self, SeqError> {
        if parts.is_empty() {
            return Err(SeqError::EmptyList);
        }
        Ok(Self::concat_nonempty(parts))
    }

    pub(crate) fn concat_nonempty(parts: Vec<Self>) -> Self {
        let mut flat: Vec<Self> = Vec::with_capacity(parts.len());
        let push = |flat: &mut Vec<Self>, part: Self| {
            if let (
                Some(Seq::Const { value: pv, len: pl }),
                Seq::Const { value, len },
            ) = (flat.last_mut(), &part)
            {
                if pv == value {
                    *pl = pl.add(len);
                    return;
                }
            }
            flat.push(part);
        };
        for part in parts {
            match part {
                Seq::Concat(inner) => {
                    for p in inner {
                        push(&mut flat, p);
                    }
                }
                other => push(&mut flat, other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            Seq::Concat(flat)
        }
    }

    /// `count` copies of `body`.
    pub fn rep(body: Self, count: impl Into<BigUint>) -> Result<Self, SeqError> {
        let count = count.into();
        if count.is_zero() {
            return Err(SeqError::ZeroCount);
        }
        Ok(Self::rep_nonzero(body, count))
    }

    pub(crate) fn rep_nonzero(body: Self, count: BigUint) -> Self {
        debug_assert!(!count.is_zero());
        if count.is_one() {
            return body;
        }
        match body {
            Seq::Const { value, len } => Seq::Const {
                value,
                len: len.mul_nat(&count),
            },
            Seq::RepFin { body, count: inner } => Seq::RepFin {
                body,
                count: inner * count,
            },
            body => Seq::RepFin {
                body: Box::new(body),
                count,
            },
        }
    }

    /// `body ⊕ body ⊕ ...`, ω copies.
    pub fn rep_omega(body: Self) -> Self {
        match body {
            Seq::Const { value, len } => Seq::Const {
                value,
                len: len.mul(&Ordinal::omega()),
            },
            Seq::RepFin { body, .. } => Seq::RepOmega(body),
            body => Seq::RepOmega(Box::new(body)),
        }
    }

    pub fn osc(lo: V, hi: V) -> Self {
        if lo == hi {
            Seq::Const {
                value: lo,
                len: Ordinal::omega(),
            }
        } else {
            Seq::Osc { lo, hi }
        }
    }

    /// Bottom-up normalization of an arbitrary tree.
    pub fn normalize(&self) -> Self {
        match self {
            Seq::Const { .. } => self.clone(),
            Seq::Osc { lo, hi } => Self::osc(lo.clone(), hi.clone()),
            Seq::Concat(parts) => Self::concat_nonempty(parts.iter().map(Self::normalize).collect()),
            Seq::RepFin { body, count } => Self::rep_nonzero(body.normalize(), count.clone()),
            Seq::RepOmega(body) => Self::rep_omega(body.normalize()),
        }
    }

    pub fn length(&self) -> Ordinal {
        match self {
            Seq::Const { len, .. } => len.clone(),
            Seq::Concat(parts) => parts
                .iter()
                .fold(Ordinal::zero(), |acc, p| acc.add(&p.length())),
            Seq::RepFin { body, count } => body.length().mul_nat(count),
            Seq::RepOmega(body) => body.length().mul(&Ordinal::omega()),
            Seq::Osc { .. } => Ordinal::omega(),
        }
    }

    pub fn distinct_values(&self) -> BTreeSet<&V> {
        let mut out = BTreeSet::new();
        self.collect_values(&mut out);
        out
    }

    fn collect_values<'a>(&'a self, out: &mut BTreeSet<&'a V>) {
        match self {
            Seq::Const { value, .. } => {
                out.insert(value);
            }
            Seq::Concat(parts) => parts.iter().for_each(|p| p.collect_values(out)),
            Seq::RepFin { body, .. } | Seq::RepOmega(body) => body.collect_values(out),
            Seq::Osc { lo, hi } => {
                out.insert(lo);
                out.insert(hi);
            }
        }
    }

    /// The unique value of a sequence that takes only one.
    pub fn single_value(&self) -> Option<&V> {
        let values = self.distinct_values();
        if values.len() == 1 {
            values.into_iter().next()
        } else {
            None
        }
    }

    /// Exact minimum and maximum over the values of the sequence.
    pub fn value_range(&self) -> (V, V) {
        let values = self.distinct_values();
        let min = (*values.first().expect("sequences are nonempty")).clone();
        let max = (*values.last().expect("sequences are nonempty")).clone();
        (min, max)
    }

    /// Structure-preserving relabeling. The result has the same node kinds in
    /// the same arrangement; it is not renormalized.
    pub fn map<W: Value>(&self, f: &impl Fn(&V) -> W) -> Seq<W> {
        match self {
            Seq::Const { value, len } => Seq::Const {
                value: f(value),
                len: len.clone(),
            },
            Seq::Concat(parts) => Seq::Concat(parts.iter().map(|p| p.map(f)).collect()),
            Seq::RepFin { body, count } => Seq::RepFin {
                body: Box::new(body.map(f)),
                count: count.clone(),
            },
            Seq::RepOmega(body) => Seq::RepOmega(Box::new(body.map(f))),
            Seq::Osc { lo, hi } => Seq::Osc {
                lo: f(lo),
                hi: f(hi),
            },
        }
    }

    /// Relabels through a table that must cover every value of the sequence.
    pub fn map_values<W: Value>(&self, table: &ValueTable<V, W>) -> Result<Seq<W>, SeqError> {
        if let Some(missing) = self
            .distinct_values()
            .into_iter()
            .find(|v| table.get(v).is_none())
        {
            return Err(SeqError::MissingValue(missing.to_string()));
        }
        Ok(self.map(&|v| table.get(v).expect("checked above").clone()))
    }

    /// Whether any oscillating atom occurs in the tree.
    pub fn has_osc(&self) -> bool {
        match self {
            Seq::Const { .. } => false,
            Seq::Osc { .. } => true,
            Seq::Concat(parts) => parts.iter().any(Self::has_osc),
            Seq::RepFin { body, .. } | Seq::RepOmega(body) => body.has_osc(),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Seq::Const { .. } | Seq::Osc { .. } => 1,
            Seq::Concat(parts) => 1 + parts.iter().map(Self::size).sum::<usize>(),
            Seq::RepFin { body, .. } | Seq::RepOmega(body) => 1 + body.size(),
        }
    }
}

impl RealSeq {
    /// The pointwise negation `-s`.
    pub fn negate(&self) -> RealSeq {
        self.map(&|v: &Rat| -v)
    }

    /// `a·s + b` pointwise.
    pub fn affine(&self, a: &Rat, b: &Rat) -> RealSeq {
        self.map(&|v: &Rat| a * v + b).normalize()
    }
}

impl<V: fmt::Display> fmt::Display for Seq<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seq::Const { value, len } => write!(f, "const({value};{len})"),
            Seq::Concat(parts) => {
                f.write_str("cat(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
            Seq::RepFin { body, count } => write!(f, "rep({body};{count})"),
            Seq::RepOmega(body) => write!(f, "repw({body})"),
            Seq::Osc { lo, hi } => write!(f, "osc({lo},{hi})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn c(v: i64, len: &str) -> RealSeq {
        Seq::constant(int(v), o(len)).unwrap()
    }

    #[test]
    fn lengths() {
        let half = Seq::constant(rat(1, 2), o("w^2")).unwrap();
        assert_eq!(half.length(), o("w^2"));
        let s = Seq::concat(vec![c(0, "3"), c(1, "w")]).unwrap();
        assert_eq!(s.length(), o("w"));
        let r = Seq::RepOmega(Box::new(c(5, "w*2+1")));
        assert_eq!(r.length(), o("w^2"));
        assert_eq!(Seq::osc(int(0), int(1)).length(), o("w"));
        let f = Seq::RepFin {
            body: Box::new(Seq::osc(int(0), int(1))),
            count: 3u32.into(),
        };
        assert_eq!(f.length(), o("w*3"));
    }

    #[test]
    fn concat_normalizes() {
        let one = c(1, "1");
        assert_eq!(Seq::concat(vec![one.clone()]).unwrap(), one);
        let two = Seq::concat(vec![c(0, "w"), c(1, "w")]).unwrap();
        assert_eq!(two.length(), o("w*2"));
        assert!(matches!(&two, Seq::Concat(p) if p.len() == 2));
        let a = Seq::osc(int(0), int(1));
        let b = c(2, "3");
        let ab = Seq::Concat(vec![a.clone(), b.clone()]);
        let flat = Seq::concat(vec![ab, c(7, "w")]).unwrap();
        assert_eq!(flat, Seq::Concat(vec![a, b, c(7, "w")]));
        assert_eq!(Seq::<Rat>::concat(vec![]), Err(SeqError::EmptyList));
        let merged = Seq::concat(vec![c(4, "w"), c(4, "5")]).unwrap();
        assert_eq!(merged, c(4, "w+5"));
    }

    #[test]
    fn repetition_normalizes() {
        assert_eq!(Seq::rep(c(1, "2"), 3u32).unwrap(), c(1, "6"));
        assert_eq!(Seq::rep_omega(c(3, "1")), c(3, "w"));
        assert_eq!(Seq::osc(int(2), int(2)), c(2, "w"));
        let body = Seq::concat(vec![c(0, "1"), c(1, "2")]).unwrap();
        let twice = Seq::rep(body.clone(), 2u32).unwrap();
        assert_eq!(Seq::rep_omega(twice), Seq::RepOmega(Box::new(body.clone())));
        assert_eq!(Seq::rep(body, 0u32), Err(SeqError::ZeroCount));
        assert_eq!(Seq::constant(int(1), o("0")), Err(SeqError::ZeroLength));
    }

    #[test]
    fn deep_normalize() {
        let raw = Seq::Concat(vec![
            Seq::Concat(vec![c(1, "1"), c(1, "2")]),
            Seq::RepFin {
                body: Box::new(c(1, "1")),
                count: 2u32.into(),
            },
            Seq::Osc {
                lo: int(1),
                hi: int(1),
            },
        ]);
        assert_eq!(raw.normalize(), c(1, "w"));
    }

    #[test]
    fn value_ranges() {
        assert_eq!(c(3, "w").value_range(), (int(3), int(3)));
        assert_eq!(Seq::osc(int(0), int(1)).value_range(), (int(0), int(1)));
        let s = Seq::concat(vec![c(-1, "w"), c(3, "2")]).unwrap();
        assert_eq!(s.value_range(), (int(-1), int(3)));
    }

    #[test]
    fn map_values_relabels() {
        let table: ValueTable<Rat, Rat> = [(int(2), int(1))].into_iter().collect();
        assert_eq!(c(2, "w").map_values(&table).unwrap(), c(1, "w"));
        assert_eq!(
            Seq::osc(int(0), int(1)).negate(),
            Seq::Osc {
                lo: int(0),
                hi: int(-1)
            }
        );
        let missing = c(3, "w").map_values(&table).unwrap_err();
        assert_eq!(missing, SeqError::MissingValue("3".into()));

        let labels: LabelSeq = Seq::rep_omega(
            Seq::concat(vec![
                Seq::constant("a".to_string(), o("2")).unwrap(),
                Seq::unit("b".to_string()),
            ])
            .unwrap(),
        );
        let ind: ValueTable<String, Rat> =
            [("a".to_string(), int(1)), ("b".to_string(), int(0))].into_iter().collect();
        assert_eq!(
            labels.map_values(&ind).unwrap().to_string(),
            "repw(cat(const(1;2), const(0;1)))"
        );
    }

    #[test]
    fn display() {
        let s = Seq::rep_omega(Seq::concat(vec![c(0, "w"), c(1, "w")]).unwrap());
        assert_eq!(s.to_string(), "repw(cat(const(0;w), const(1;w)))");
        let r = Seq::rep(Seq::osc(rat(-1, 2), int(3)), 4u32).unwrap();
        assert_eq!(r.to_string(), "rep(osc(-1/2,3);4)");
    }
}
