//! Block division `s/β`: replace each length-β block of `s` by its upper mean.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::{lower_mean, upper_mean};
use crate::ordinal::Ordinal;
use crate::rational::{int, Rat};
use crate::seq::{LabelSeq, RealSeq, Seq};

/// Bound on repetition counts tried when re-cutting ω-repetitions and on
/// finite repetitions expanded into explicit parts.
pub const DEFAULT_RECUT_BOUND: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DivideMode {
    /// Each block becomes its upper mean.
    #[default]
    Upper,
    /// As `Upper`, but every block must have a true mean.
    Strict,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DivideError {
    #[error("length {len} is not divisible by {by}")]
    NotDivisible { len: Ordinal, by: Ordinal },
    #[error("no structural rule divides this sequence: {0}")]
    UnsupportedDivision(String),
    #[error("block {} has no mean (lower {}, upper {})", .0.block, .0.lower, .0.upper)]
    BlockHasNoMean(Box<MeanGap>),
}

/// A block whose lower and upper means differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeanGap {
    pub block: String,
    pub lower: Rat,
    pub upper: Rat,
}

impl DivideError {
    /// Short name of the failure mode.
    pub fn name(&self) -> &'static str {
        match self {
            DivideError::NotDivisible { .. } => "NotDivisible",
            DivideError::UnsupportedDivision(_) => "UnsupportedDivision",
            DivideError::BlockHasNoMean(_) => "BlockHasNoMean",
        }
    }
}

type Result<T> = std::result::Result<T, DivideError>;

pub fn divide(s: &RealSeq, b: &Ordinal) -> Result<RealSeq> {
    divide_with(s, b, DivideMode::Upper, DEFAULT_RECUT_BOUND)
}

pub fn divide_with(s: &RealSeq, b: &Ordinal, mode: DivideMode, bound: u64) -> Result<RealSeq> {
    if b.is_zero() {
        return Err(DivideError::NotDivisible {
            len: s.length(),
            by: b.clone(),
        });
    }
    Ok(Divider { b, mode, bound }.divide(s)?.normalize())
}

/// Division of a label sequence. Every block must be, in mean, a single
/// label: each label's indicator must divide to a 0/1 sequence.
pub fn divide_labels(s: &LabelSeq, b: &Ordinal) -> Result<LabelSeq> {
    let labels: Vec<String> = s.distinct_values().into_iter().cloned().collect();
    let code = |l: &String| int(labels.binary_search(l).expect("label of s") as i64);
    let coded = divide_with(&s.map(&code), b, DivideMode::Strict, DEFAULT_RECUT_BOUND)?;
    for label in &labels {
        let ind = s.map(&|l: &String| int((l == label) as i64));
        let ind = divide_with(&ind, b, DivideMode::Strict, DEFAULT_RECUT_BOUND)?;
        if ind.distinct_values().iter().any(|v| **v != int(0) && **v != int(1)) {
            return Err(unsupported(format!(
                "a block of length {b} mixes '{label}' with other labels"
            )));
        }
    }
    Ok(coded
        .map(&|v: &Rat| labels[v.to_integer().to_usize().expect("label code")].clone())
        .normalize())
}

struct Divider<'a> {
    b: &'a Ordinal,
    mode: DivideMode,
    bound: u64,
}

fn unsupported(what: impl Into<String>) -> DivideError {
    DivideError::UnsupportedDivision(what.into())
}

impl Divider<'_> {
    fn quotient(&self, len: &Ordinal) -> Result<Ordinal> {
        Ordinal::exact_quotient(self.b, len).ok_or_else(|| DivideError::NotDivisible {
            len: len.clone(),
            by: self.b.clone(),
        })
    }

    fn divides(&self, len: &Ordinal) -> bool {
        Ordinal::exact_quotient(self.b, len).is_some()
    }

    fn block(&self, s: &RealSeq) -> Result<RealSeq> {
        let upper = upper_mean(s);
        if self.mode == DivideMode::Strict {
            let lower = lower_mean(s);
            if lower != upper {
                return Err(DivideError::BlockHasNoMean(Box::new(MeanGap {
                    block: s.to_string(),
                    lower,
                    upper,
                })));
            }
        }
        Ok(Seq::unit(upper))
    }

    fn divide(&self, s: &RealSeq) -> Result<RealSeq> {
        let alpha = self.quotient(&s.length())?;
        if self.b.is_one() {
            return Ok(s.clone());
        }
        if alpha.is_one() {
            return self.block(s);
        }
        match s {
            Seq::Const { value, .. } => Ok(Seq::Const {
                value: value.clone(),
                len: alpha,
            }),
            Seq::Osc { .. } => Err(unsupported(format!(
                "oscillator blocks of finite length {}",
                self.b
            ))),
            Seq::Concat(parts) => self.divide_parts(parts.to_vec()),
            Seq::RepFin { body, count } => self.divide_rep(body, count),
            Seq::RepOmega(body) => self.divide_rep_omega(body),
        }
    }

    fn divide_rep(&self, body: &RealSeq, count: &BigUint) -> Result<RealSeq> {
        let body_len = body.length();
        let small = count.to_u64().unwrap_or(u64::MAX);
        for i in 1..self.bound.min(small) {
            if (count % i).is_zero() && self.divides(&body_len.mul_nat(&i.into())) {
                let chunk = Seq::rep_nonzero(body.clone(), i.into());
                return Ok(Seq::rep_nonzero(self.divide(&chunk)?, count / i));
            }
        }
        if small > self.bound {
            return Err(unsupported(format!(
                "repetition count {count} exceeds the re-cut bound"
            )));
        }
        self.divide_parts(std::iter::repeat_n(body.clone(), small as usize).collect())
    }

    fn divide_rep_omega(&self, body: &RealSeq) -> Result<RealSeq> {
        let body_len = body.length();
        for i in 1..=self.bound {
            if self.divides(&body_len.mul_nat(&i.into())) {
                let chunk = Seq::rep_nonzero(body.clone(), i.into());
                return Ok(Seq::rep_omega(self.divide(&chunk)?));
            }
        }
        let pieces = self.rotate(None, body)?;
        Ok(Seq::concat_nonempty(pieces))
    }

    /// Divides `carry ⊕ repw(a)`, where the carry is shorter than a block, by
    /// finding a block boundary at which the rest is again an ω-repetition of
    /// a rotation of `a` whose length some finite multiple of β divides.
    fn rotate(&self, carry: Option<RealSeq>, a: &RealSeq) -> Result<Vec<RealSeq>> {
        let a_len = a.length();
        let total = a_len.mul(&Ordinal::omega());
        let lc = carry.as_ref().map_or_else(Ordinal::zero, |c| c.length());
        for j in 1..=self.bound {
            let at = self.b.mul_nat(&j.into());
            let Ok(inside) = Ordinal::left_subtract(&lc, &at) else {
                continue;
            };
            if inside.is_zero() {
                continue;
            }
            if inside >= total {
                break;
            }
            let (copies, offset) = Ordinal::left_divide(&a_len, &inside).expect("nonzero body");
            let copies = copies.as_finite().expect("cut inside the repetition");
            let (pre, rotated) = if offset.is_zero() {
                (None, a.clone())
            } else {
                let (pre, suf) = a.split(&offset).map_err(|e| unsupported(e.to_string()))?;
                (Some(pre.clone()), Seq::concat_nonempty(vec![suf, pre]))
            };
            let rot_len = rotated.length();
            let Some(k) = (1..=self.bound).find(|&k| self.divides(&rot_len.mul_nat(&k.into())))
            else {
                continue;
            };
            let mut head: Vec<RealSeq> = carry.iter().cloned().collect();
            if !copies.is_zero() {
                head.push(Seq::rep_nonzero(a.clone(), copies));
            }
            head.extend(pre);
            let head = Seq::concat_nonempty(head);
            let chunk = Seq::rep_nonzero(rotated, k.into());
            return Ok(vec![
                self.divide(&head)?,
                Seq::rep_omega(self.divide(&chunk)?),
            ]);
        }
        Err(unsupported(format!(
            "no block boundary within {} blocks re-cuts repw of length {a_len}",
            self.bound
        )))
    }

    /// Divides a concatenation part by part. Parts that do not end on the
    /// block grid leave a carry that is completed by cutting the next part.
    fn divide_parts(&self, parts: Vec<RealSeq>) -> Result<RealSeq> {
        let mut queue: VecDeque<RealSeq> = parts.into();
        let mut out = Vec::new();
        let mut carry: Option<RealSeq> = None;
        while let Some(p) = queue.pop_front() {
            let lp = p.length();
            if let Some(c) = carry.take() {
                let need = Ordinal::left_subtract(&c.length(), self.b).expect("carry below block");
                match lp.cmp(&need) {
                    std::cmp::Ordering::Less => carry = Some(Seq::concat_nonempty(vec![c, p])),
                    std::cmp::Ordering::Equal => {
                        out.push(self.block(&Seq::concat_nonempty(vec![c, p]))?)
                    }
                    std::cmp::Ordering::Greater => {
                        if let Seq::RepOmega(a) = &p {
                            out.extend(self.rotate(Some(c), a)?);
                            continue;
                        }
                        let (head, tail) = p.split(&need).map_err(|e| unsupported(e.to_string()))?;
                        out.push(self.block(&Seq::concat_nonempty(vec![c, head]))?);
                        push_front_parts(&mut queue, tail);
                    }
                }
                continue;
            }
            let (q, r) = Ordinal::left_divide(self.b, &lp).expect("nonzero block");
            if q.is_zero() {
                carry = Some(p);
            } else if r.is_zero() {
                out.push(self.divide(&p)?);
            } else if let Seq::RepOmega(a) = &p {
                out.extend(self.rotate(None, a)?);
            } else {
                let cut = self.b.mul(&q);
                let (head, tail) = p.split(&cut).map_err(|e| unsupported(e.to_string()))?;
                out.push(self.divide(&head)?);
                carry = Some(tail);
            }
        }
        if let Some(c) = carry {
            return Err(unsupported(format!("leftover segment {c} shorter than a block")));
        }
        Ok(Seq::concat_nonempty(out))
    }
}

fn push_front_parts(queue: &mut VecDeque<RealSeq>, s: RealSeq) {
    match s {
        Seq::Concat(parts) => {
            for p in parts.into_iter().rev() {
                queue.push_front(p);
            }
        }
        other => queue.push_front(other),
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

    fn o(text: &str) -> Ordinal {
        text.parse().unwrap()
    }

    fn div(text: &str, b: &str) -> Result<RealSeq> {
        divide(&s(text), &o(b))
    }

    #[test]
    fn periodic_blocks() {
        let d = div("repw(cat(const(0;w),const(1;w)))", "w").unwrap();
        assert_eq!(d.to_string(), "repw(cat(const(0;1), const(1;1)))");
        let dd = divide(&d, &o("w")).unwrap();
        assert_eq!(dd, Seq::unit(rat(1, 2)));
        assert_eq!(div("repw(cat(const(0;w),const(1;w)))", "w^2").unwrap(), dd);
    }

    #[test]
    fn constants_and_trivial_divisors() {
        assert_eq!(div("const(3;w^2)", "w").unwrap(), s("const(3;w)"));
        assert_eq!(div("const(3;w^2)", "w^2").unwrap(), s("const(3;1)"));
        let x = s("cat(osc(0,1), const(2;w))");
        assert_eq!(divide(&x, &o("1")).unwrap(), x);
        assert_eq!(div("osc(0,1)", "w").unwrap(), Seq::unit(rat(2, 3)));
    }

    #[test]
    fn not_divisible() {
        assert!(matches!(
            div("const(1; w+1)", "w"),
            Err(DivideError::NotDivisible { .. })
        ));
        assert!(matches!(
            div("const(1; 5)", "2"),
            Err(DivideError::NotDivisible { .. })
        ));
    }

    #[test]
    fn carries_are_absorbed_into_the_next_block() {
        // blocks: [7;3 ⊕ 1;w], [1;w], [2;w]
        let d = div("cat(const(7;3), const(1;w*2), const(2;w))", "w").unwrap();
        assert_eq!(d, s("cat(const(1;2), const(2;1))"));
        // a finite carry that fills a finite block
        let d = div("cat(const(1;3), const(0;3))", "2").unwrap();
        assert_eq!(d, s("cat(const(1;1), const(1/2;1), const(0;1))"));
    }

    #[test]
    fn rotated_repetitions() {
        // body w+1: blocks of w see 1 ⊕ 0;w, always mean 0
        let d = div("repw(cat(const(0;w), const(1;1)))", "w").unwrap();
        assert_eq!(d, s("const(0;w)"));
        let d = div("cat(const(5;1), repw(cat(const(0;w), const(1;1))))", "w").unwrap();
        assert_eq!(d, s("const(0;w)"));
        let d = div("repw(cat(const(0;1), const(1;2)))", "2").unwrap();
        assert_eq!(
            d.materialize_prefix(6),
            vec![rat(1, 2), rat(1, 2), int(1), rat(1, 2), rat(1, 2), int(1)]
        );
    }

    #[test]
    fn finite_repetitions() {
        let d = div("rep(cat(const(0;w), const(1;w)); 3)", "w").unwrap();
        assert_eq!(d, s("rep(cat(const(0;1), const(1;1));3)"));
        let d = div("rep(cat(const(0;1), const(1;2)); 4)", "6").unwrap();
        assert_eq!(d, s("const(2/3;2)"));
        let d = div("rep(cat(const(0;1), const(1;1)); 3)", "3").unwrap();
        assert_eq!(d, s("cat(const(1/3;1), const(2/3;1))"));
    }

    #[test]
    fn strict_mode_wants_true_means() {
        let x = s("cat(osc(0,1), const(1;w))");
        assert!(divide(&x, &o("w")).is_ok());
        let err = divide_with(&x, &o("w"), DivideMode::Strict, DEFAULT_RECUT_BOUND).unwrap_err();
        assert_eq!(err.name(), "BlockHasNoMean");
    }

    #[test]
    fn label_division() {
        let l = |t: &str| crate::seq::parse_label_seq(t).unwrap();
        assert_eq!(divide_labels(&l("const(c;w)"), &o("w")).unwrap(), l("const(c;1)"));
        assert_eq!(
            divide_labels(&l("repw(cat(const(a;w), const(b;w)))"), &o("w")).unwrap(),
            l("repw(cat(const(a;1), const(b;1)))")
        );
        // a finite stray label is negligible inside an infinite block
        assert_eq!(
            divide_labels(&l("cat(const(b;2), const(a;w))"), &o("w")).unwrap(),
            l("const(a;1)")
        );
        let mixed = divide_labels(&l("repw(cat(const(a;1), const(b;1)))"), &o("w"));
        assert_eq!(mixed.unwrap_err().name(), "UnsupportedDivision");
        let err = divide_labels(&l("const(a;w+1)"), &o("w")).unwrap_err();
        assert_eq!(err.name(), "NotDivisible");
    }

    #[test]
    fn unsupported_oscillator_cuts() {
        let err = div("osc(0,1)", "2").unwrap_err();
        assert_eq!(err.name(), "UnsupportedDivision");
    }
}
