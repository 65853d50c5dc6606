//! Pointwise combination of two equal-length sequences by structural
//! alignment.
//!
//! Alignment is partial: it succeeds when the two trees admit a common
//! refinement reachable by cutting at part boundaries, matching repetitions of
//! equal (or commensurable, within a search bound) period, and pairing
//! identically placed oscillators. Anything else is [`SeqError::Unalignable`].

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{RealSeq, Seq, SeqError, Value};
use crate::ordinal::Ordinal;
use crate::rational::Rat;

/// Default bound on the number of copies tried when searching for a common
/// period of two ω-repetitions, and on finite repetitions expanded into
/// explicit concatenations.
pub const DEFAULT_PERIOD_BOUND: u64 = 64;

struct Zipper<'f, F> {
    f: &'f F,
    bound: u64,
}

impl<V: Value> Seq<V> {
    /// Pointwise `f(self, other)`.
    pub fn zip_with<B: Value, C: Value>(
        &self,
        other: &Seq<B>,
        f: &impl Fn(&V, &B) -> C,
        bound: u64,
    ) -> Result<Seq<C>, SeqError> {
        let (la, lb) = (self.length(), other.length());
        if la != lb {
            return Err(SeqError::LengthMismatch(la, lb));
        }
        Ok(Zipper { f, bound }.zip(self, other)?.normalize())
    }

    fn expand(&self, count: &BigUint, bound: u64) -> Option<Vec<Self>> {
        let k = count.to_u64().filter(|&k| k <= bound)?;
        Some(vec![self.clone(); k as usize])
    }
}

impl RealSeq {
    /// The pointwise sequence `ca·r + cb·s`.
    pub fn zip_affine(&self, other: &RealSeq, ca: &Rat, cb: &Rat) -> Result<RealSeq, SeqError> {
        self.zip_affine_bounded(other, ca, cb, DEFAULT_PERIOD_BOUND)
    }

    pub fn zip_affine_bounded(
        &self,
        other: &RealSeq,
        ca: &Rat,
        cb: &Rat,
        bound: u64,
    ) -> Result<RealSeq, SeqError> {
        self.zip_with(other, &|x: &Rat, y: &Rat| ca * x + cb * y, bound)
    }
}

impl<F> Zipper<'_, F> {
    fn zip<A: Value, B: Value, C: Value>(&self, r: &Seq<A>, s: &Seq<B>) -> Result<Seq<C>, SeqError>
    where
        F: Fn(&A, &B) -> C,
    {
        let f = self.f;
        if let Some(c) = r.single_value() {
            return Ok(s.map(&|v| f(c, v)));
        }
        if let Some(c) = s.single_value() {
            return Ok(r.map(&|v| f(v, c)));
        }
        match (r, s) {
            (Seq::Osc { lo: l1, hi: h1 }, Seq::Osc { lo: l2, hi: h2 }) => Ok(Seq::Osc {
                lo: f(l1, l2),
                hi: f(h1, h2),
            }),
            (Seq::RepOmega(a), Seq::RepOmega(b)) => {
                let (la, lb) = (a.length(), b.length());
                if la == lb {
                    return Ok(Seq::RepOmega(Box::new(self.zip(a, b)?)));
                }
                let (i, j) = self.common_period(&la, &lb).ok_or_else(|| {
                    SeqError::Unalignable(format!("no common period for lengths {la} and {lb}"))
                })?;
                let wide_a = Seq::Concat(vec![(**a).clone(); i as usize]);
                let wide_b = Seq::Concat(vec![(**b).clone(); j as usize]);
                Ok(Seq::RepOmega(Box::new(self.zip(&wide_a, &wide_b)?)))
            }
            (Seq::RepFin { body: a, count: k }, Seq::RepFin { body: b, count: j })
                if k == j && a.length() == b.length() =>
            {
                Ok(Seq::RepFin {
                    body: Box::new(self.zip(a, b)?),
                    count: k.clone(),
                })
            }
            (Seq::Concat(parts), _) => self.zip_parts_left(parts, s),
            (_, Seq::Concat(parts)) => self.zip_parts_right(r, parts),
            (Seq::RepFin { body, count }, _) => {
                let parts = body.expand(count, self.bound).ok_or_else(|| too_many(count))?;
                self.zip_parts_left(&parts, s)
            }
            (_, Seq::RepFin { body, count }) => {
                let parts = body.expand(count, self.bound).ok_or_else(|| too_many(count))?;
                self.zip_parts_right(r, &parts)
            }
            _ => Err(SeqError::Unalignable(format!(
                "cannot align {} against {}",
                kind(r),
                kind(s)
            ))),
        }
    }

    fn zip_parts_left<A: Value, B: Value, C: Value>(
        &self,
        parts: &[Seq<A>],
        other: &Seq<B>,
    ) -> Result<Seq<C>, SeqError>
    where
        F: Fn(&A, &B) -> C,
    {
        let mut rest = other.clone();
        let mut out = Vec::with_capacity(parts.len());
        for (i, part) in parts.iter().enumerate() {
            if i + 1 == parts.len() {
                out.push(self.zip(part, &rest)?);
            } else {
                let (seg, tail) = rest.split(&part.length()).map_err(unalignable)?;
                out.push(self.zip(part, &seg)?);
                rest = tail;
            }
        }
        Ok(Seq::Concat(out))
    }

    fn zip_parts_right<A: Value, B: Value, C: Value>(
        &self,
        other: &Seq<A>,
        parts: &[Seq<B>],
    ) -> Result<Seq<C>, SeqError>
    where
        F: Fn(&A, &B) -> C,
    {
        let mut rest = other.clone();
        let mut out = Vec::with_capacity(parts.len());
        for (i, part) in parts.iter().enumerate() {
            if i + 1 == parts.len() {
                out.push(self.zip(&rest, part)?);
            } else {
                let (seg, tail) = rest.split(&part.length()).map_err(unalignable)?;
                out.push(self.zip(&seg, part)?);
                rest = tail;
            }
        }
        Ok(Seq::Concat(out))
    }

    /// Smallest `(i, j)` within the bound with `la·i = lb·j`.
    fn common_period(&self, la: &Ordinal, lb: &Ordinal) -> Option<(u64, u64)> {
        (1..=self.bound).find_map(|i| {
            let wide = la.mul(&Ordinal::from(i));
            let q = Ordinal::exact_quotient(lb, &wide)?;
            let j = q.as_u64().filter(|&j| j >= 1 && j <= self.bound)?;
            Some((i, j))
        })
    }
}

fn too_many(count: &BigUint) -> SeqError {
    SeqError::Unalignable(format!("repetition count {count} exceeds the expansion bound"))
}

fn unalignable(e: SeqError) -> SeqError {
    SeqError::Unalignable(e.to_string())
}

fn kind<V>(s: &Seq<V>) -> &'static str {
    match s {
        Seq::Const { .. } => "const",
        Seq::Concat(_) => "cat",
        Seq::RepFin { .. } => "rep",
        Seq::RepOmega(_) => "repw",
        Seq::Osc { .. } => "osc",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn c(v: i64, len: &str) -> RealSeq {
        Seq::constant(int(v), o(len)).unwrap()
    }

    fn pattern(vals: &[i64]) -> RealSeq {
        Seq::concat(vals.iter().map(|&v| c(v, "1")).collect()).unwrap()
    }

    #[test]
    fn const_against_repetition() {
        let r = c(1, "w");
        let s = Seq::RepOmega(Box::new(c(2, "1")));
        assert_eq!(r.zip_affine(&s, &int(1), &int(1)).unwrap(), c(3, "w"));
    }

    #[test]
    fn self_difference_is_zero() {
        let s = Seq::concat(vec![
            Seq::osc(int(0), int(1)),
            Seq::rep_omega(pattern(&[2, -1])),
        ])
        .unwrap();
        let d = s.zip_affine(&s, &int(1), &int(-1)).unwrap();
        assert_eq!(d, c(0, "w*2"));
    }

    #[test]
    fn common_period_of_repetitions() {
        let r = Seq::rep_omega(pattern(&[0, 1]));
        let s = Seq::rep_omega(pattern(&[0, 1, 1]));
        let z = r.zip_affine(&s, &int(1), &int(1)).unwrap();
        let Seq::RepOmega(body) = &z else {
            panic!("expected repw, got {z}")
        };
        assert_eq!(body.length(), o("6"));
        let expect: Vec<Rat> = r
            .materialize_prefix(24)
            .iter()
            .zip(s.materialize_prefix(24))
            .map(|(a, b)| a + b)
            .collect();
        assert_eq!(z.materialize_prefix(24), expect);
    }

    #[test]
    fn concat_alignment_splits_the_other_side() {
        let r = Seq::concat(vec![c(0, "3"), c(1, "w")]).unwrap();
        let s = Seq::rep_omega(pattern(&[5, 6]));
        let z = r.zip_affine(&s, &int(1), &int(1)).unwrap();
        assert_eq!(
            z.materialize_prefix(8),
            [5, 6, 5, 7, 6, 7, 6, 7].map(int).to_vec()
        );
    }

    #[test]
    fn oscillators_align_in_place() {
        let r = Seq::concat(vec![c(1, "2"), Seq::osc(int(0), int(1))]).unwrap();
        let s = Seq::concat(vec![pattern(&[3, 4]), Seq::osc(int(0), int(-1))]).unwrap();
        let z = r.zip_affine(&s, &int(1), &int(1)).unwrap();
        assert_eq!(z, Seq::concat(vec![pattern(&[4, 5]), c(0, "w")]).unwrap());
    }

    #[test]
    fn failures() {
        let r = c(1, "w");
        let s = c(1, "w+1");
        assert!(matches!(
            r.zip_affine(&s, &int(1), &int(1)),
            Err(SeqError::LengthMismatch(..))
        ));
        let osc = Seq::osc(int(0), int(1));
        let per = Seq::rep_omega(pattern(&[0, 1]));
        assert!(matches!(
            osc.zip_affine(&per, &int(1), &int(1)),
            Err(SeqError::Unalignable(_))
        ));
        let shifted = Seq::concat(vec![c(9, "1"), Seq::osc(int(0), int(1))]).unwrap();
        assert!(matches!(
            shifted.zip_affine(&osc, &int(1), &int(1)),
            Err(SeqError::Unalignable(_))
        ));
    }
}
