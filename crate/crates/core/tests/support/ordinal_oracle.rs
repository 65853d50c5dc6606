//! An ordinal model independent of Cantor normal form arithmetic.
//!
//! An ordinal below ω^ω is modelled as a well-order built by laying blocks
//! end to end, each block of order type ω^d. Sums are concatenations and
//! products are built copy by copy. Comparison first collapses absorbed
//! blocks: a block is swallowed by any strictly larger block after it,
//! since ω^e·n < ω^d for every n when e < d.

#![allow(dead_code)]

use std::cmp::Ordering;

use transmean::Ordinal;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blocks(pub Vec<u32>);

impl Blocks {
    /// `ω^2·a + ω·b + c`, block by block.
    pub fn from_coefficients(coefs: &[u32]) -> Blocks {
        let top = coefs.len() as u32;
        let mut v = Vec::new();
        for (i, &c) in coefs.iter().enumerate() {
            v.extend(std::iter::repeat_n(top - 1 - i as u32, c as usize));
        }
        Blocks(v)
    }

    /// Reads the block structure off a library ordinal with finite exponents.
    pub fn of(o: &Ordinal) -> Blocks {
        let mut v = Vec::new();
        for t in o.terms() {
            let d = t.exponent.as_u64().expect("finite exponent") as u32;
            let c = t.coefficient.to_string().parse::<usize>().unwrap();
            v.extend(std::iter::repeat_n(d, c));
        }
        Blocks(v)
    }

    /// Drops every block followed somewhere later by a larger one.
    pub fn collapsed(&self) -> Vec<u32> {
        let mut kept = Vec::new();
        let mut biggest_after = 0u32;
        for &d in self.0.iter().rev() {
            if d >= biggest_after {
                kept.push(d);
                biggest_after = d;
            }
        }
        kept.reverse();
        kept
    }

    pub fn cmp(&self, other: &Blocks) -> Ordering {
        // collapsed lists are non-increasing; a proper prefix is an initial
        // segment, hence smaller
        self.collapsed().cmp(&other.collapsed())
    }

    pub fn same_type(&self, other: &Blocks) -> bool {
        self.cmp(other) == Ordering::Equal
    }

    pub fn add(&self, other: &Blocks) -> Blocks {
        Blocks(self.0.iter().chain(&other.0).copied().collect())
    }

    /// `α·ω`, the supremum of `α, α+α, α+α+α, ...`. Each finite stack of
    /// copies of `α` stays below `ω^(m+1)` (with `m` the largest block) and
    /// passes every `ω^m·k`, so the supremum is the single block `ω^(m+1)`.
    pub fn omega_copies(&self) -> Blocks {
        match self.0.iter().max() {
            None => Blocks(Vec::new()),
            Some(&m) => Blocks(vec![m + 1]),
        }
    }

    /// `α·β`: for each block of `β` in order, that many copies of `α`.
    pub fn mul(&self, other: &Blocks) -> Blocks {
        let mut out = Vec::new();
        for &d in &other.0 {
            let mut copy = self.clone();
            for _ in 0..d {
                copy = copy.omega_copies();
            }
            out.extend(copy.0);
        }
        Blocks(out)
    }

    pub fn stacked(&self, n: usize) -> Blocks {
        Blocks(self.0.iter().copied().cycle().take(self.0.len() * n).collect())
    }
}

/// Every `ω^2·a + ω·b + c` with `a, b, c ≤ 4`, parsed from text.
pub fn universe() -> Vec<(Ordinal, Blocks)> {
    let mut out = Vec::new();
    for a in 0..=4u32 {
        for b in 0..=4u32 {
            for c in 0..=4u32 {
                let text = format!("w^2*{a} + w*{b} + {c}");
                let o: Ordinal = text.parse().expect("parseable");
                out.push((o, Blocks::from_coefficients(&[a, b, c])));
            }
        }
    }
    out
}

#[derive(Debug, Default)]
pub struct OracleTally {
    pub pairs: usize,
    pub mismatches: Vec<String>,
}

/// Compares library `+`, `·` and `<` with the block model on all pairs of
/// the universe, plus indecomposability on every element.
pub fn check_universe() -> OracleTally {
    let u = universe();
    let mut tally = OracleTally::default();
    for (x, bx) in &u {
        for (y, by) in &u {
            tally.pairs += 1;
            if x.cmp(y) != bx.cmp(by) {
                tally.mismatches.push(format!("cmp {x} {y}"));
            }
            if !Blocks::of(&x.add(y)).same_type(&bx.add(by)) {
                tally.mismatches.push(format!("add {x} {y} = {}", x.add(y)));
            }
            if !Blocks::of(&x.mul(y)).same_type(&bx.mul(by)) {
                tally.mismatches.push(format!("mul {x} {y} = {}", x.mul(y)));
            }
        }
        // indecomposable: nonzero and not a sum of two smaller ordinals
        let splits = !x.is_zero()
            && u.iter().any(|(_, b)| {
                b.cmp(bx).is_lt()
                    && u.iter().any(|(_, c)| c.cmp(bx).is_lt() && b.add(c).same_type(bx))
            });
        let model = !x.is_zero() && !splits;
        if x.is_indecomposable() != model {
            tally.mismatches.push(format!("indecomposable {x}"));
        }
    }
    tally
}
