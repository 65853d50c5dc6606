//! Cutting sequences at ordinal positions and reading off finite prefixes.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::{Seq, SeqError, Value};
use crate::ordinal::Ordinal;

fn quotient_nat(q: &Ordinal) -> BigUint {
    q.as_finite()
        .expect("copy index inside a repetition is finite")
}

impl<V: Value> Seq<V> {
    /// Splits into the initial segment of length `xi` and the remainder.
    ///
    /// Cuts strictly inside an oscillator are rejected with
    /// [`SeqError::UnsplittableAtom`]; such cuts are always successor
    /// ordinals, so limit-ordinal cuts never hit this case.
    pub fn split(&self, xi: &Ordinal) -> Result<(Self, Self), SeqError> {
        let len = self.length();
        if xi.is_zero() || *xi >= len {
            return Err(SeqError::OutOfRange {
                at: xi.clone(),
                len,
            });
        }
        self.split_within(xi, &len)
    }

    // 0 < xi < len
    fn split_within(&self, xi: &Ordinal, len: &Ordinal) -> Result<(Self, Self), SeqError> {
        match self {
            Seq::Const { value, len } => Ok((
                Seq::Const {
                    value: value.clone(),
                    len: xi.clone(),
                },
                Seq::Const {
                    value: value.clone(),
                    len: Ordinal::left_subtract(xi, len).expect("xi < len"),
                },
            )),
            Seq::Osc { .. } => Err(SeqError::UnsplittableAtom { at: xi.clone() }),
            Seq::Concat(parts) => {
                let mut acc = Ordinal::zero();
                for (i, part) in parts.iter().enumerate() {
                    let part_len = part.length();
                    let end = acc.add(&part_len);
                    if *xi < end {
                        let off = Ordinal::left_subtract(&acc, xi).expect("acc <= xi");
                        if off.is_zero() {
                            return Ok((
                                Self::concat_nonempty(parts[..i].to_vec()),
                                Self::concat_nonempty(parts[i..].to_vec()),
                            ));
                        }
                        let (head, tail) = part
                            .split_within(&off, &part_len)
                            .map_err(|e| shift_error(e, &acc))?;
                        let mut pre = parts[..i].to_vec();
                        pre.push(head);
                        let mut post = vec![tail];
                        post.extend_from_slice(&parts[i + 1..]);
                        return Ok((Self::concat_nonempty(pre), Self::concat_nonempty(post)));
                    }
                    acc = end;
                }
                unreachable!("xi < length of the concatenation")
            }
            Seq::RepFin { body, count } => {
                let body_len = body.length();
                let (q, r) = Ordinal::left_divide(&body_len, xi).expect("nonzero body");
                let j = quotient_nat(&q);
                if r.is_zero() {
                    return Ok((
                        Self::rep_nonzero((**body).clone(), j.clone()),
                        Self::rep_nonzero((**body).clone(), count - &j),
                    ));
                }
                let offset = body_len.mul_nat(&j);
                let (head, tail) = body
                    .split_within(&r, &body_len)
                    .map_err(|e| shift_error(e, &offset))?;
                let mut pre = Vec::with_capacity(2);
                if !j.is_zero() {
                    pre.push(Self::rep_nonzero((**body).clone(), j.clone()));
                }
                pre.push(head);
                let mut post = vec![tail];
                let rest = count - &j - 1u32;
                if !rest.is_zero() {
                    post.push(Self::rep_nonzero((**body).clone(), rest));
                }
                Ok((Self::concat_nonempty(pre), Self::concat_nonempty(post)))
            }
            Seq::RepOmega(body) => {
                let body_len = body.length();
                let (q, r) = Ordinal::left_divide(&body_len, xi).expect("nonzero body");
                let j = quotient_nat(&q);
                if r.is_zero() {
                    return Ok((Self::rep_nonzero((**body).clone(), j), self.clone()));
                }
                let offset = body_len.mul_nat(&j);
                let (head, tail) = body
                    .split_within(&r, &body_len)
                    .map_err(|e| shift_error(e, &offset))?;
                let mut pre = Vec::with_capacity(2);
                if !j.is_zero() {
                    pre.push(Self::rep_nonzero((**body).clone(), j));
                }
                pre.push(head);
                Ok((
                    Self::concat_nonempty(pre),
                    Self::concat_nonempty(vec![tail, self.clone()]),
                ))
            }
        }
        .inspect(|pair| {
            debug_assert_eq!(pair.0.length().add(&pair.1.length()), *len);
        })
    }

    /// The initial segment of length `xi`, for `0 < xi <= length`.
    ///
    /// Unlike [`Seq::split`], finite prefixes of oscillators are allowed: they
    /// are materialized as constant runs.
    pub fn prefix(&self, xi: &Ordinal) -> Result<Self, SeqError> {
        let len = self.length();
        if xi.is_zero() || *xi > len {
            return Err(SeqError::OutOfRange {
                at: xi.clone(),
                len,
            });
        }
        Ok(self.prefix_within(xi, &len))
    }

    // 0 < xi <= len
    fn prefix_within(&self, xi: &Ordinal, len: &Ordinal) -> Self {
        if xi == len {
            return self.clone();
        }
        match self {
            Seq::Const { value, .. } => Seq::Const {
                value: value.clone(),
                len: xi.clone(),
            },
            Seq::Osc { lo, hi } => {
                let n = xi.as_u64().expect("cut inside an oscillator is finite");
                let runs = osc_runs(lo, hi)
                    .scan(0u64, |taken, (v, run)| {
                        if *taken >= n {
                            return None;
                        }
                        let k = run.min(n - *taken);
                        *taken += k;
                        Some(Seq::Const {
                            value: v.clone(),
                            len: Ordinal::from(k),
                        })
                    })
                    .collect();
                Self::concat_nonempty(runs)
            }
            Seq::Concat(parts) => {
                let mut acc = Ordinal::zero();
                let mut pre = Vec::new();
                for part in parts {
                    let part_len = part.length();
                    let end = acc.add(&part_len);
                    if *xi <= end {
                        let off = Ordinal::left_subtract(&acc, xi).expect("acc < xi");
                        pre.push(part.prefix_within(&off, &part_len));
                        return Self::concat_nonempty(pre);
                    }
                    pre.push(part.clone());
                    acc = end;
                }
                unreachable!("xi <= length of the concatenation")
            }
            Seq::RepFin { body, .. } | Seq::RepOmega(body) => {
                let body_len = body.length();
                let (q, r) = Ordinal::left_divide(&body_len, xi).expect("nonzero body");
                let j = quotient_nat(&q);
                let mut pre = Vec::with_capacity(2);
                if !j.is_zero() {
                    pre.push(Self::rep_nonzero((**body).clone(), j));
                }
                if !r.is_zero() {
                    pre.push(body.prefix_within(&r, &body_len));
                }
                Self::concat_nonempty(pre)
            }
        }
    }

    /// The values at positions `0, 1, ...` up to `n` of them, stopping early at
    /// the end of a finite sequence. Every sequence's first ω positions are
    /// finite, so only finite sequences shorter than `n` return fewer.
    pub fn materialize_prefix(&self, n: usize) -> Vec<V> {
        let mut out = Vec::with_capacity(n.min(1 << 16));
        self.emit(n, &mut out);
        out
    }

    // Returns true when the whole of `self` was emitted.
    fn emit(&self, n: usize, out: &mut Vec<V>) -> bool {
        if out.len() >= n {
            return false;
        }
        match self {
            Seq::Const { value, len } => {
                let room = n - out.len();
                match len.as_finite().and_then(|k| k.to_usize()) {
                    Some(k) if k <= room => {
                        out.extend(std::iter::repeat_n(value.clone(), k));
                        true
                    }
                    _ => {
                        out.extend(std::iter::repeat_n(value.clone(), room));
                        false
                    }
                }
            }
            Seq::Concat(parts) => parts.iter().all(|p| p.emit(n, out)),
            Seq::RepFin { body, count } => {
                let mut k = BigUint::zero();
                while &k < count {
                    if !body.emit(n, out) {
                        return false;
                    }
                    k += 1u32;
                }
                true
            }
            Seq::RepOmega(body) => {
                while body.emit(n, out) {}
                false
            }
            Seq::Osc { lo, hi } => {
                for (v, run) in osc_runs(lo, hi) {
                    let room = (n - out.len()) as u64;
                    let k = run.min(room);
                    out.extend(std::iter::repeat_n(v.clone(), k as usize));
                    if out.len() >= n {
                        break;
                    }
                }
                false
            }
        }
    }
}

/// The runs of an oscillator: `lo` for 1, `hi` for 2, `lo` for 4, ...
/// Run lengths saturate at `u64::MAX`, far beyond anything materialized.
pub(crate) fn osc_runs<'a, V>(lo: &'a V, hi: &'a V) -> impl Iterator<Item = (&'a V, u64)> + 'a {
    (0u32..).map(move |i| {
        let v = if i % 2 == 0 { lo } else { hi };
        (v, 1u64.checked_shl(i).unwrap_or(u64::MAX))
    })
}

/// Length of the `i`-th oscillator run as an exact natural.
pub fn osc_run_length(i: usize) -> BigUint {
    BigUint::one() << i
}

fn shift_error(e: SeqError, offset: &Ordinal) -> SeqError {
    match e {
        SeqError::UnsplittableAtom { at } => SeqError::UnsplittableAtom {
            at: offset.add(&at),
        },
        other => other,
    }
}
