//! A numeric cross-check of the evaluator that never looks at final atoms.
//!
//! At each indecomposable level `ω^σ` the sequence is cut into its first `W`
//! blocks of length `ω^(σ-1)` (or, at level ω, its first `W` constant runs),
//! each block is estimated recursively, and the extremes of the running
//! averages over a tail window bracket the limsup and liminf. `W` is taken
//! from `widths`, indexed from the bottom level: `widths[0]` counts runs at
//! level ω, `widths[1]` blocks of length ω at level ω², and so on.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use super::upper_mean;
use crate::ordinal::Ordinal;
use crate::rational::Rat;
use crate::seq::{RealSeq, Seq};

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub widths: Vec<usize>,
    /// Cap on estimation steps (block estimates plus runs visited).
    pub budget: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            widths: vec![3000, 300, 60, 20],
            budget: 50_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("oracle budget of {0} steps exceeded")]
    BudgetExceeded(u64),
}

/// Estimated bracket `[lo, hi]` for the lower and upper mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Whether `x` lies in the interval widened by `tol` on both sides.
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        self.lo - tol <= x && x <= self.hi + tol
    }
}

pub fn truncation_oracle(s: &RealSeq, cfg: &OracleConfig) -> Result<Interval, OracleError> {
    let mut est = Estimator {
        widths: if cfg.widths.is_empty() {
            vec![1]
        } else {
            cfg.widths.clone()
        },
        budget: cfg.budget,
        steps: 0,
        memo: HashMap::new(),
    };
    est.estimate(s)
}

struct Estimator {
    widths: Vec<usize>,
    budget: u64,
    steps: u64,
    memo: HashMap<RealSeq, Interval>,
}

fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn common_denominator<'a>(values: impl Iterator<Item = &'a Rat>) -> BigInt {
    values.fold(BigInt::one(), |d, v| d.lcm(v.denom()))
}

enum Tail {
    /// The last part is a constant run of length ω.
    Forever(Rat),
    /// A finite pattern repeated ω times.
    Cycle(Vec<(Rat, BigUint)>),
    /// The doubling-run oscillator.
    Osc(Rat, Rat),
}

impl Tail {
    fn values(&self) -> Box<dyn Iterator<Item = &Rat> + '_> {
        match self {
            Tail::Forever(v) => Box::new(std::iter::once(v)),
            Tail::Cycle(p) => Box::new(p.iter().map(|(v, _)| v)),
            Tail::Osc(a, b) => Box::new([a, b].into_iter()),
        }
    }
}

impl Estimator {
    fn tick(&mut self, n: u64) -> Result<(), OracleError> {
        self.steps += n;
        if self.steps > self.budget {
            Err(OracleError::BudgetExceeded(self.budget))
        } else {
            Ok(())
        }
    }

    fn width(&self, sigma: &Ordinal) -> usize {
        let last = self.widths.len() - 1;
        let i = sigma
            .as_u64()
            .map_or(last, |k| (k.saturating_sub(1) as usize).min(last));
        self.widths[i].max(1)
    }

    fn estimate(&mut self, s: &RealSeq) -> Result<Interval, OracleError> {
        if let Some(i) = self.memo.get(s) {
            return Ok(*i);
        }
        self.tick(1)?;
        let i = self.estimate_uncached(s)?;
        self.memo.insert(s.clone(), i);
        Ok(i)
    }

    fn estimate_uncached(&mut self, s: &RealSeq) -> Result<Interval, OracleError> {
        let len = s.length();
        if len.is_finite() {
            return Ok(Interval::point(to_f64(&upper_mean(s))));
        }
        if let Seq::Const { value, .. } = s {
            return Ok(Interval::point(to_f64(value)));
        }
        let (sigma, n, rho) = len.standard_decomposition().expect("nonzero length");
        if !len.is_indecomposable() {
            let block = Ordinal::omega_pow(sigma);
            let mut rest = if rho.is_zero() {
                s.clone()
            } else {
                s.split(&block.mul_nat(&n)).expect("limit cut").0
            };
            let n = n.to_u64().filter(|&n| n <= 1 << 16);
            let Some(n) = n else {
                return Err(OracleError::BudgetExceeded(self.budget));
            };
            let (mut lo, mut hi) = (0.0, 0.0);
            for i in 0..n {
                let piece = if i + 1 == n {
                    rest.clone()
                } else {
                    let (piece, tail) = rest.split(&block).expect("limit cut");
                    rest = tail;
                    piece
                };
                let e = self.estimate(&piece)?;
                lo += e.lo;
                hi += e.hi;
            }
            return Ok(Interval {
                lo: lo / n as f64,
                hi: hi / n as f64,
            });
        }
        if sigma.is_one() {
            return self.runs_window(s);
        }
        match sigma.predecessor() {
            Some(tau) => self.blocks_window(s, &sigma, &tau),
            None => self.limit_level(s, &sigma),
        }
    }

    /// Level ω: prefix averages at the ends of runs `W/2 ..= W`.
    fn runs_window(&mut self, s: &RealSeq) -> Result<Interval, OracleError> {
        let w = self.width(&Ordinal::one());
        let mut head = Vec::new();
        let tail = split_runs(s, &mut head);
        // Exact prefix sums over a common denominator, so no reduction is
        // needed per run.
        let denom = common_denominator(head.iter().map(|(v, _)| v).chain(tail.values()));
        let mut sum = BigInt::zero();
        let mut count = BigUint::zero();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let mut seen = 0usize;
        let mut visit = |v: &Rat, k: &BigUint, seen: &mut usize| {
            sum += v.numer() * (&denom / v.denom()) * BigInt::from(k.clone());
            count += k;
            *seen += 1;
            if *seen >= w / 2 {
                let avg = Ratio::new_raw(sum.clone(), &denom * BigInt::from(count.clone()));
                let avg = avg.to_f64().unwrap_or(f64::NAN);
                lo = lo.min(avg);
                hi = hi.max(avg);
            }
            *seen >= w
        };
        self.tick(head.len() as u64)?;
        for (v, k) in &head {
            if visit(v, k, &mut seen) {
                return Ok(Interval { lo, hi });
            }
        }
        match tail {
            Tail::Forever(v) => Ok(Interval::point(to_f64(&v))),
            Tail::Cycle(pattern) => {
                self.tick(w as u64)?;
                for (v, k) in pattern.iter().cycle() {
                    if visit(v, k, &mut seen) {
                        break;
                    }
                }
                Ok(Interval { lo, hi })
            }
            Tail::Osc(a, b) => {
                self.tick(w as u64)?;
                let mut run = BigUint::from(1u32);
                for i in 0.. {
                    let v = if i % 2 == 0 { &a } else { &b };
                    if visit(v, &run, &mut seen) {
                        break;
                    }
                    run <<= 1;
                }
                Ok(Interval { lo, hi })
            }
        }
    }

    /// Level `ω^(τ+1)`: the first `W` blocks of length `ω^τ`, running
    /// averages over blocks `W/4 .. k` for `k` in `W/2 ..= W`.
    fn blocks_window(
        &mut self,
        s: &RealSeq,
        sigma: &Ordinal,
        tau: &Ordinal,
    ) -> Result<Interval, OracleError> {
        let w = self.width(sigma);
        let block = Ordinal::omega_pow(tau.clone());
        let mut blocks = Vec::with_capacity(w);
        let mut rest = s.clone();
        while blocks.len() < w {
            if let Seq::Const { value, .. } = &rest {
                let v = Interval::point(to_f64(value));
                blocks.resize(w, v);
                break;
            }
            let (b, r) = rest.split(&block).expect("limit cut");
            blocks.push(self.estimate(&b)?);
            rest = r;
        }
        let skip = w / 4;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut sum_lo, mut sum_hi) = (0.0, 0.0);
        for (k, e) in blocks.iter().enumerate().skip(skip) {
            sum_lo += e.lo;
            sum_hi += e.hi;
            if k + 1 >= (w / 2).max(skip + 1) {
                let m = (k + 1 - skip) as f64;
                lo = lo.min(sum_lo / m);
                hi = hi.max(sum_hi / m);
            }
        }
        Ok(Interval { lo, hi })
    }

    /// Limit level: initial segments of lengths `ω^(σ[k])` along the
    /// fundamental sequence, hull of the last few.
    fn limit_level(&mut self, s: &RealSeq, sigma: &Ordinal) -> Result<Interval, OracleError> {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for k in 3..=4 {
            let xi = Ordinal::omega_pow(sigma.fundamental(k).expect("limit exponent"));
            let e = self.estimate(&s.prefix(&xi).expect("limit cut"))?;
            lo = lo.min(e.lo);
            hi = hi.max(e.hi);
        }
        Ok(Interval { lo, hi })
    }
}

/// Splits a length-ω sequence into its finite leading runs and its tail.
fn split_runs(s: &RealSeq, head: &mut Vec<(Rat, BigUint)>) -> Tail {
    match s {
        Seq::Const { value, .. } => Tail::Forever(value.clone()),
        Seq::Osc { lo, hi } => Tail::Osc(lo.clone(), hi.clone()),
        Seq::RepOmega(body) => {
            let mut pattern = Vec::new();
            finite_runs(body, &mut pattern);
            Tail::Cycle(pattern)
        }
        Seq::Concat(parts) => {
            let (last, init) = parts.split_last().expect("nonempty concatenation");
            for p in init {
                finite_runs(p, head);
            }
            split_runs(last, head)
        }
        Seq::RepFin { .. } => unreachable!("a finite repetition of length ω"),
    }
}

fn finite_runs(s: &RealSeq, out: &mut Vec<(Rat, BigUint)>) {
    match s {
        Seq::Const { value, len } => {
            let n = len.as_finite().expect("finite part");
            match out.last_mut() {
                Some((v, k)) if v == value => *k += n,
                _ => out.push((value.clone(), n)),
            }
        }
        Seq::Concat(parts) => parts.iter().for_each(|p| finite_runs(p, out)),
        Seq::RepFin { body, count } => {
            let mut k = BigUint::zero();
            while &k < count {
                finite_runs(body, out);
                k += 1u32;
            }
        }
        Seq::RepOmega(_) | Seq::Osc { .. } => unreachable!("infinite node in a finite part"),
    }
}
