//! Seeded generators of symbolic sequences.
//!
//! A generator first builds a skeleton: a sequence whose values are slot ids,
//! each leaf with its own slots. Filling the skeleton from the value pool
//! gives a sequence. Filling the same skeleton twice gives an aligned pair
//! that `zip_affine` can always combine.

use num_bigint::BigUint;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ordinal::Ordinal;
use crate::rational::{int, rat, Rat};
use crate::seq::{RealSeq, Seq};

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub seed: u64,
    pub max_depth: u32,
    pub max_parts: usize,
    pub value_pool: Vec<Rat>,
    /// Generated lengths stay below `ω^(cap+1)`.
    pub ordinal_degree_cap: u32,
    pub case_count: usize,
    /// Chance that a length-ω leaf becomes an oscillator.
    pub osc_probability: f64,
    /// The upper-mean evaluator under test. Lower means and means are
    /// derived from it by duality. Swapping in a deliberately broken
    /// evaluator shows the laws detect it.
    pub evaluator: fn(&RealSeq) -> Rat,
}

impl GenConfig {
    pub fn upper(&self, s: &RealSeq) -> Rat {
        (self.evaluator)(s)
    }

    pub fn lower(&self, s: &RealSeq) -> Rat {
        -(self.evaluator)(&s.negate())
    }

    pub fn mean(&self, s: &RealSeq) -> Option<Rat> {
        let up = self.upper(s);
        (self.lower(s) == up).then_some(up)
    }
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_depth: 4,
            max_parts: 3,
            value_pool: vec![int(-2), int(-1), int(0), rat(1, 3), rat(1, 2), int(1), int(2)],
            ordinal_degree_cap: 2,
            case_count: 100,
            osc_probability: 0.25,
            evaluator: crate::mean::upper_mean,
        }
    }
}

/// Skeleton values are slot ids.
pub type Skeleton = Seq<usize>;

pub struct Gen<'c> {
    cfg: &'c GenConfig,
    rng: ChaCha8Rng,
    slots: usize,
}

impl<'c> Gen<'c> {
    /// The generator for case `index` of the stream `stream`. Its output is
    /// a function of `(cfg.seed, stream, index)` only.
    pub fn new(cfg: &'c GenConfig, stream: u32, index: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(((stream as u64) << 40) | index as u64);
        Gen { cfg, rng, slots: 0 }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p.clamp(0.0, 1.0))
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n.max(1))
    }

    pub fn value(&mut self) -> Rat {
        let i = self.below(self.cfg.value_pool.len());
        self.cfg.value_pool[i].clone()
    }

    /// A nonzero ordinal of degree at most `max_degree` with coefficients
    /// in `1..=3`.
    pub fn ordinal(&mut self, max_degree: u32) -> Ordinal {
        let degree = self.rng.gen_range(0..=max_degree);
        let mut acc = Ordinal::zero();
        for e in (0..=degree).rev() {
            if e == degree || self.chance(0.5) {
                let c: u32 = self.rng.gen_range(1..=3);
                acc = acc.add(&Ordinal::monomial(Ordinal::from(e as u64), c));
            }
        }
        acc
    }

    /// An ordinal `< ω^degree` (possibly zero when `degree = 0`).
    fn smaller(&mut self, degree: u32) -> Ordinal {
        if degree == 0 {
            Ordinal::zero()
        } else {
            self.ordinal(degree - 1)
        }
    }

    /// An infinite length within the degree cap.
    pub fn infinite_length(&mut self) -> Ordinal {
        let cap = self.cfg.ordinal_degree_cap.max(1);
        let degree = self.rng.gen_range(1..=cap);
        let lead = Ordinal::monomial(Ordinal::from(degree as u64), self.rng.gen_range(1..=3u32));
        if self.chance(0.5) {
            lead.add(&self.smaller(degree))
        } else {
            lead
        }
    }

    /// A random length within the degree cap, finite one time in five.
    pub fn length(&mut self) -> Ordinal {
        if self.chance(0.2) {
            Ordinal::from(self.rng.gen_range(1..=6u64))
        } else {
            self.infinite_length()
        }
    }

    fn slot(&mut self) -> usize {
        self.slots += 1;
        self.slots - 1
    }

    fn leaf(&mut self, len: &Ordinal) -> Skeleton {
        Seq::Const {
            value: self.slot(),
            len: len.clone(),
        }
    }

    /// A skeleton of length exactly `len`.
    pub fn skeleton(&mut self, len: &Ordinal) -> Skeleton {
        let depth = self.cfg.max_depth;
        self.skeleton_at(len, depth)
    }

    fn skeleton_at(&mut self, len: &Ordinal, depth: u32) -> Skeleton {
        debug_assert!(!len.is_zero());
        if depth == 0 || self.chance(0.08) {
            return self.leaf(len);
        }
        let d = depth - 1;
        if let Some(n) = len.as_u64() {
            return self.finite_skeleton(n, d);
        }
        let (sigma, n, rho) = len.standard_decomposition().expect("nonzero");
        let block = Ordinal::omega_pow(sigma.clone());
        if !rho.is_zero() {
            let head = block.mul_nat(&n);
            return self.concat(vec![(head, d), (rho, d)]);
        }
        if n > BigUint::from(1u32) {
            let k: u64 = n.try_into().unwrap_or(2);
            if self.chance(0.5) {
                let body = self.skeleton_at(&block, d);
                return Seq::rep_nonzero(body, k.into());
            }
            let a = self.rng.gen_range(1..k);
            return self.concat(vec![
                (block.mul_nat(&a.into()), d),
                (block.mul_nat(&(k - a).into()), d),
            ]);
        }
        // indecomposable ω^σ
        let sigma_small = sigma.as_u64().expect("finite degree") as u32;
        let roll = self.below(10);
        if sigma.is_one() && self.chance(self.cfg.osc_probability) {
            let (lo, hi) = (self.slot(), self.slot());
            return Seq::Osc { lo, hi };
        }
        match roll {
            0..=5 => {
                let tau = sigma_small - 1;
                let m = self.rng.gen_range(1..=self.cfg.max_parts.max(1) as u32);
                let mut body = Ordinal::monomial(Ordinal::from(tau as u64), m);
                if self.chance(0.4) {
                    body = body.add(&self.smaller(tau));
                }
                let body = if body.is_zero() { Ordinal::one() } else { body };
                let body = self.skeleton_at(&body, d);
                Seq::rep_omega(body)
            }
            6..=8 => {
                let prefix = self.smaller(sigma_small);
                if prefix.is_zero() {
                    return self.leaf(len);
                }
                let p = self.skeleton_at(&prefix, d);
                let rest = self.skeleton_at(len, d);
                Seq::concat_nonempty(vec![p, rest])
            }
            _ => self.leaf(len),
        }
    }

    fn finite_skeleton(&mut self, n: u64, d: u32) -> Skeleton {
        if n >= 2 && self.chance(0.6) {
            let divisors: Vec<u64> = (2..=n).filter(|k| n.is_multiple_of(*k)).collect();
            if self.chance(0.5) {
                let k = divisors[self.below(divisors.len())];
                let body = self.finite_skeleton(n / k, d.saturating_sub(1));
                return Seq::rep_nonzero(body, k.into());
            }
            let a = self.rng.gen_range(1..n);
            return self.concat(vec![(Ordinal::from(a), d), (Ordinal::from(n - a), d)]);
        }
        self.leaf(&Ordinal::from(n))
    }

    fn concat(&mut self, parts: Vec<(Ordinal, u32)>) -> Skeleton {
        let parts = parts
            .into_iter()
            .map(|(l, d)| self.skeleton_at(&l, d))
            .collect();
        Seq::concat_nonempty(parts)
    }

    /// Fills every slot of the skeleton with a pool value.
    pub fn fill(&mut self, sk: &Skeleton) -> RealSeq {
        let values: Vec<Rat> = (0..self.slots).map(|_| self.value()).collect();
        sk.map(&|&i| values[i].clone())
    }

    /// Fills with nonnegative pool values only.
    pub fn fill_nonnegative(&mut self, sk: &Skeleton) -> RealSeq {
        let pool: Vec<Rat> = self
            .cfg
            .value_pool
            .iter()
            .filter(|v| **v >= int(0))
            .cloned()
            .collect();
        let pool = if pool.is_empty() { vec![int(0)] } else { pool };
        let values: Vec<Rat> = (0..self.slots)
            .map(|_| pool[self.below(pool.len())].clone())
            .collect();
        sk.map(&|&i| values[i].clone())
    }

    pub fn seq_of_length(&mut self, len: &Ordinal) -> RealSeq {
        let sk = self.skeleton(len);
        self.fill(&sk)
    }

    pub fn seq(&mut self) -> RealSeq {
        let len = self.length();
        self.seq_of_length(&len)
    }

    /// Two sequences with one shared skeleton.
    pub fn aligned_pair(&mut self) -> (RealSeq, RealSeq) {
        let len = self.length();
        let sk = self.skeleton(&len);
        (self.fill(&sk), self.fill(&sk))
    }
}

/// The generated sequence for case `i`.
pub fn gen_seq(cfg: &GenConfig, i: usize) -> RealSeq {
    Gen::new(cfg, 0, i).seq()
}

/// The generated aligned pair for case `i`.
pub fn gen_aligned_pair(cfg: &GenConfig, i: usize) -> (RealSeq, RealSeq) {
    Gen::new(cfg, 1, i).aligned_pair()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let cfg = GenConfig {
            seed: 1,
            ..GenConfig::default()
        };
        for i in 0..50 {
            assert_eq!(gen_seq(&cfg, i), gen_seq(&cfg, i));
        }
        assert!((0..20).any(|i| gen_seq(&cfg, i) != gen_seq(&cfg, 0)));
    }

    #[test]
    fn degree_cap_is_respected() {
        for cap in 1..=3 {
            let cfg = GenConfig {
                seed: 9,
                ordinal_degree_cap: cap,
                ..GenConfig::default()
            };
            let bound = Ordinal::omega_pow(Ordinal::from(cap as u64 + 1));
            for i in 0..200 {
                assert!(gen_seq(&cfg, i).length() < bound);
            }
        }
    }

    #[test]
    fn requested_lengths_are_exact() {
        let cfg = GenConfig::default();
        for i in 0..200 {
            let mut g = Gen::new(&cfg, 7, i);
            let len = g.length();
            assert_eq!(g.seq_of_length(&len).length(), len);
        }
    }

    #[test]
    fn aligned_pairs_zip() {
        let cfg = GenConfig {
            seed: 3,
            ..GenConfig::default()
        };
        for i in 0..200 {
            let (r, s) = gen_aligned_pair(&cfg, i);
            assert!(r.zip_affine(&s, &int(1), &int(1)).is_ok(), "{r} / {s}");
        }
    }
}
