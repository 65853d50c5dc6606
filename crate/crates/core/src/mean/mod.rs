//! Exact upper, lower and true means.
//!
//! A sequence of finite length has its arithmetic mean. Otherwise, with
//! `ℓ(s) = ω^σ·n + ρ`, the mean is the average over the first `n` blocks of
//! length `ω^σ`, and the remainder is ignored. Each block's upper mean is read
//! off its final atom. Earlier atoms are absorbed, an oscillator contributes
//! its closed form, and an ω-repetition contributes the mean of its body.

mod divide;
mod oracle;

pub use divide::{divide, divide_labels, divide_with, DivideError, DivideMode, MeanGap, DEFAULT_RECUT_BOUND};
pub use oracle::{truncation_oracle, Interval, OracleConfig, OracleError};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::ordinal::Ordinal;
use crate::rational::Rat;
use crate::seq::{RealSeq, Seq};

/// Exact lower and upper mean of a sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeanPair {
    pub lower: Rat,
    pub upper: Rat,
}

impl MeanPair {
    pub fn of(s: &RealSeq) -> Self {
        MeanPair {
            lower: lower_mean(s),
            upper: upper_mean(s),
        }
    }

    /// The mean, when lower and upper agree.
    pub fn mean(&self) -> Option<&Rat> {
        (self.lower == self.upper).then_some(&self.upper)
    }
}

/// Upper mean of the doubling-run oscillator: `(2·max + min)/3`.
pub fn osc_upper(lo: &Rat, hi: &Rat) -> Rat {
    let (min, max) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    (max * Rat::from_integer(2.into()) + min) / Rat::from_integer(3.into())
}

/// Lower mean of the doubling-run oscillator: `(2·min + max)/3`.
pub fn osc_lower(lo: &Rat, hi: &Rat) -> Rat {
    -osc_upper(&-lo, &-hi)
}

pub fn upper_mean(s: &RealSeq) -> Rat {
    let len = s.length();
    if let Some(n) = len.as_finite() {
        return finite_sum(s) / BigRational::from_integer(n.into());
    }
    let (sigma, n, _) = len.standard_decomposition().expect("nonzero length");
    let block = Ordinal::omega_pow(sigma.clone());
    let mut blocks = Vec::new();
    block_means(s, &sigma, &block, &mut blocks);
    let mut total = Rat::zero();
    let mut count = BigUint::zero();
    for (m, k) in blocks {
        total += m * BigRational::from_integer(k.clone().into());
        count += k;
    }
    assert_eq!(
        count, n,
        "block count disagrees with the standard decomposition of {len}"
    );
    total / BigRational::from_integer(n.into())
}

pub fn lower_mean(s: &RealSeq) -> Rat {
    -upper_mean(&s.negate())
}

/// The mean, or `None` when lower and upper means differ.
pub fn mean(s: &RealSeq) -> Option<Rat> {
    let upper = upper_mean(s);
    (lower_mean(s) == upper).then_some(upper)
}

fn finite_sum(s: &RealSeq) -> Rat {
    match s {
        Seq::Const { value, len } => {
            let n = len.as_finite().expect("finite length");
            value * BigRational::from_integer(n.into())
        }
        Seq::Concat(parts) => parts.iter().map(finite_sum).sum(),
        Seq::RepFin { body, count } => {
            finite_sum(body) * BigRational::from_integer(count.clone().into())
        }
        Seq::RepOmega(_) | Seq::Osc { .. } => unreachable!("infinite node in a finite sequence"),
    }
}

/// Upper means of the consecutive `ω^σ` blocks of `s`, as `(mean, count)`
/// runs. Blocks are measured from the start of each part: a partial block
/// left over at the end of a part has length below `ω^σ` and is absorbed by
/// the next full block, which therefore starts on the next part's own grid.
fn block_means(s: &RealSeq, sigma: &Ordinal, block: &Ordinal, out: &mut Vec<(Rat, BigUint)>) {
    match s {
        Seq::Const { value, len } => {
            let (q, _) = Ordinal::left_divide(block, len).expect("nonzero block");
            let q = q.as_finite().expect("part degree exceeds the block level");
            if !q.is_zero() {
                out.push((value.clone(), q));
            }
        }
        Seq::Osc { lo, hi } => {
            if sigma.is_one() {
                out.push((osc_upper(lo, hi), BigUint::one()));
            }
        }
        Seq::RepOmega(body) => {
            if s.length() == *block {
                out.push((upper_mean(body), BigUint::one()));
            }
        }
        Seq::RepFin { body, count } => {
            let start = out.len();
            block_means(body, sigma, block, out);
            for entry in &mut out[start..] {
                entry.1 *= count;
            }
        }
        Seq::Concat(parts) => {
            for p in parts {
                block_means(p, sigma, block, out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::seq::parse_real_seq;

    fn s(text: &str) -> RealSeq {
        parse_real_seq(text).unwrap()
    }

    fn pair(text: &str) -> (Rat, Rat) {
        let p = MeanPair::of(&s(text));
        (p.lower, p.upper)
    }

    #[test]
    fn finite_sequences_average() {
        assert_eq!(upper_mean(&s("cat(const(1;3), const(0;1))")), rat(3, 4));
        assert_eq!(upper_mean(&s("rep(cat(const(0;1), const(1;2));5)")), rat(2, 3));
        assert_eq!(mean(&s("const(-2;7)")), Some(int(-2)));
    }

    #[test]
    fn domination_and_averaging() {
        assert_eq!(upper_mean(&s("cat(const(1;3), const(0;w))")), int(0));
        assert_eq!(upper_mean(&s("cat(const(0;w), const(1;w))")), rat(1, 2));
        assert_eq!(upper_mean(&s("cat(const(0;w), const(1;w*2), const(5;4))")), rat(2, 3));
        assert_eq!(pair("cat(osc(0,1), const(5;w^2))"), (int(5), int(5)));
        // ω + ω is not absorbed: the two blocks are averaged
        assert_eq!(pair("cat(osc(0,1), const(5;w))"), (rat(8, 3), rat(17, 6)));
        assert_eq!(upper_mean(&s("cat(const(7;w+3), const(1;w))")), int(4));
    }

    #[test]
    fn oscillator_closed_forms() {
        assert_eq!(pair("osc(0,1)"), (rat(1, 3), rat(2, 3)));
        assert_eq!(pair("osc(1,0)"), (rat(1, 3), rat(2, 3)));
        assert_eq!(mean(&s("osc(0,1)")), None);
        assert_eq!(pair("repw(osc(0,1))"), (rat(1, 3), rat(2, 3)));
        assert_eq!(pair("cat(osc(0,3), const(0;w))"), (rat(1, 2), int(1)));
    }

    #[test]
    fn repetitions() {
        assert_eq!(upper_mean(&s("repw(cat(const(0;1), const(1;2)))")), rat(2, 3));
        assert_eq!(upper_mean(&s("repw(cat(const(0;w), const(1;w)))")), rat(1, 2));
        assert_eq!(upper_mean(&s("repw(cat(const(0;w), const(1;2)))")), int(0));
        assert_eq!(upper_mean(&s("rep(cat(const(0;w), const(1;w), const(3;1));4)")), rat(1, 2));
        assert_eq!(
            upper_mean(&s("cat(repw(cat(const(0;w), const(1;w))), const(1;w^2))")),
            rat(3, 4)
        );
    }

    #[test]
    fn large_lengths() {
        assert_eq!(mean(&s("const(3/2; w^w)")), Some(rat(3, 2)));
        assert_eq!(upper_mean(&s("cat(const(1;w^w), const(0;w^w*3))")), rat(1, 4));
        assert_eq!(upper_mean(&s("cat(const(1;w^(w+1)), const(0;w^w))")), int(1));
    }
}
