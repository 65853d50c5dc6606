//! Capturing sequences for finite probability spaces.
//!
//! A label sequence `x` captures an event `A` at resolution `β` when the
//! indicator sequence `Ax`, divided into blocks of length `β`, is constantly
//! `m(A)`. For rational masses an explicit periodic sequence does this for
//! every event at once: repeat a pattern holding each outcome in proportion
//! to its mass.

mod space;

pub use space::{parse_space, random_space, ProbSpace};

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mean::{divide_with, DivideError, DivideMode, MeanPair, DEFAULT_RECUT_BOUND};
use crate::ordinal::Ordinal;
use crate::rational::{int, Rat};
use crate::seq::{LabelSeq, RealSeq, Seq};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CaptureError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("masses sum to {0}, not 1")]
    MassSum(Rat),
    #[error("mass of '{label}' is {mass}, outside [0, 1]")]
    MassOutOfRange { label: String, mass: Rat },
    #[error("duplicate label '{0}'")]
    DuplicateLabel(String),
    #[error("duplicate event '{0}'")]
    DuplicateEvent(String),
    #[error("unknown label '{0}'")]
    UnknownLabel(String),
    #[error("the space has no outcomes")]
    NoOutcomes,
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("null set has mass {0}")]
    NotNull(Rat),
    #[error(transparent)]
    Divide(#[from] DivideError),
}

/// Subsets of at most this many outcomes are enumerated exhaustively.
pub const MAX_ENUMERATED_OUTCOMES: usize = 12;

/// The length-`N` pattern holding `N·m(o)` copies of each outcome `o`, where
/// `N` is the least common denominator of the masses.
pub fn capture_pattern(space: &ProbSpace) -> LabelSeq {
    let n = space
        .masses()
        .fold(num_bigint::BigInt::one(), |d, m| d.lcm(m.denom()));
    let parts = space
        .outcomes()
        .iter()
        .filter_map(|(label, mass)| {
            let copies = (mass * Rat::from_integer(n.clone())).to_integer();
            let copies = copies.to_biguint().filter(|c| !c.is_zero())?;
            Some(Seq::Const {
                value: label.clone(),
                len: Ordinal::finite(copies),
            })
        })
        .collect();
    Seq::concat(parts).expect("masses sum to 1")
}

/// The pattern repeated ω times, `depth` times over: a sequence of length
/// `ω^depth` capturing every event at resolution `ω^depth`.
pub fn build_capture(space: &ProbSpace, depth: u32) -> Result<LabelSeq, CaptureError> {
    if depth == 0 {
        return Err(CaptureError::ZeroDepth);
    }
    let mut x = capture_pattern(space);
    for _ in 0..depth {
        x = Seq::rep_omega(x);
    }
    Ok(x)
}

/// `Ax`: 1 where `x` lies in `A`, 0 elsewhere.
pub fn indicator_sequence(
    space: &ProbSpace,
    x: &LabelSeq,
    event: &BTreeSet<String>,
) -> Result<RealSeq, CaptureError> {
    for label in x.distinct_values() {
        if space.mass(label).is_none() {
            return Err(CaptureError::UnknownLabel(label.clone()));
        }
    }
    if let Some(bad) = event.iter().find(|l| space.mass(l).is_none()) {
        return Err(CaptureError::UnknownLabel(bad.clone()));
    }
    Ok(x.map(&|l| if event.contains(l) { int(1) } else { int(0) })
        .normalize())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventResult {
    pub name: String,
    pub members: BTreeSet<String>,
    pub mass: Rat,
    pub means: MeanPair,
    /// `Ax` divided into blocks of the resolution, each block its mean.
    pub divided: Result<RealSeq, DivideError>,
    pub pass: bool,
}

impl EventResult {
    pub fn mean(&self) -> Option<&Rat> {
        self.means.mean()
    }

    /// `EVENT <name> m=<rat> M=<rat|none> PASS|FAIL`
    pub fn line(&self) -> String {
        format!(
            "EVENT {} m={} M={} {}",
            self.name,
            self.mass,
            self.mean()
                .map_or_else(|| "none".to_string(), |m| m.to_string()),
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaptureReport {
    pub resolution: Ordinal,
    pub events: Vec<EventResult>,
    /// Pairs `(A, X∖A)` whose means fail to sum to 1.
    pub complement_failures: Vec<(String, String)>,
}

impl CaptureReport {
    pub fn passed(&self) -> bool {
        self.events.iter().all(|e| e.pass) && self.complement_failures.is_empty()
    }
}

/// The name of an outcome set, `{a,c}`.
pub fn set_name(members: &BTreeSet<String>, space: &ProbSpace) -> String {
    let ordered: Vec<&str> = space
        .outcomes()
        .iter()
        .map(|(l, _)| l.as_str())
        .filter(|l| members.contains(*l))
        .collect();
    format!("{{{}}}", ordered.join(","))
}

/// The events checked by [`verify_capture`]: every subset of the outcomes
/// (or, past [`MAX_ENUMERATED_OUTCOMES`], the singletons, `∅` and `X`),
/// then each declared event and its complement.
pub fn event_family(space: &ProbSpace) -> Vec<(String, BTreeSet<String>)> {
    let labels: Vec<&String> = space.outcomes().iter().map(|(l, _)| l).collect();
    let mut sets: Vec<BTreeSet<String>> = Vec::new();
    if labels.len() <= MAX_ENUMERATED_OUTCOMES {
        for bits in 0u32..(1 << labels.len()) {
            sets.push(
                (0..labels.len())
                    .filter(|i| bits >> i & 1 == 1)
                    .map(|i| labels[i].clone())
                    .collect(),
            );
        }
    } else {
        sets.push(BTreeSet::new());
        sets.extend(labels.iter().map(|l| BTreeSet::from([(*l).clone()])));
        sets.push(labels.iter().map(|l| (*l).clone()).collect());
    }
    let mut family: Vec<(String, BTreeSet<String>)> = sets
        .into_iter()
        .map(|s| (set_name(&s, space), s))
        .collect();
    for (name, members) in space.events() {
        family.push((name.clone(), members.clone()));
        family.push((format!("!{name}"), space.complement(members)));
    }
    family
}

/// Checks, for every event of [`event_family`], that `M(Ax) = m(A)` and that
/// `Ax` divided at `resolution` is constantly `m(A)`; and that the means of
/// complementary events sum to 1.
pub fn verify_capture(
    space: &ProbSpace,
    x: &LabelSeq,
    resolution: &Ordinal,
) -> Result<CaptureReport, CaptureError> {
    if Ordinal::exact_quotient(resolution, &x.length()).is_none() {
        return Err(DivideError::NotDivisible {
            len: x.length(),
            by: resolution.clone(),
        }
        .into());
    }
    let mut events = Vec::new();
    let mut complement_failures = Vec::new();
    for (name, members) in event_family(space) {
        let ax = indicator_sequence(space, x, &members)?;
        let mass = space.event_mass(&members);
        let means = MeanPair::of(&ax);
        let divided = divide_with(&ax, resolution, DivideMode::Strict, DEFAULT_RECUT_BOUND);
        let constant = matches!(&divided, Ok(d) if d.single_value() == Some(&mass));
        let pass = means.mean() == Some(&mass) && constant;

        let complement = space.complement(&members);
        let cx = indicator_sequence(space, x, &complement)?;
        let sums_to_one = match (means.mean(), MeanPair::of(&cx).mean()) {
            (Some(a), Some(b)) => a + b == int(1),
            _ => false,
        };
        if !sums_to_one {
            complement_failures.push((name.clone(), set_name(&complement, space)));
        }
        events.push(EventResult {
            name,
            members,
            mass,
            means,
            divided,
            pass,
        });
    }
    Ok(CaptureReport {
        resolution: resolution.clone(),
        events,
        complement_failures,
    })
}

/// Whether perturbing `event` by a null set leaves its mean at `m(A)`:
/// `M((A △ N)x) = M(Ax) = m(A)`.
pub fn null_robustness_check(
    space: &ProbSpace,
    x: &LabelSeq,
    event: &BTreeSet<String>,
    nullset: &BTreeSet<String>,
) -> Result<bool, CaptureError> {
    let null_mass = space.event_mass(nullset);
    if !null_mass.is_zero() {
        return Err(CaptureError::NotNull(null_mass));
    }
    let moved: BTreeSet<String> = event.symmetric_difference(nullset).cloned().collect();
    let a = MeanPair::of(&indicator_sequence(space, x, event)?);
    let b = MeanPair::of(&indicator_sequence(space, x, &moved)?);
    let m = space.event_mass(event);
    Ok(a == b && a.mean() == Some(&m))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SllnEvent {
    pub name: String,
    pub mass: Rat,
    /// Largest `|freq − m(A)|` over trials.
    pub max_deviation: f64,
    /// `3·sqrt(m(A)(1 − m(A))/n)`.
    pub bound: f64,
    /// Trials whose deviation exceeds the bound.
    pub exceeding_trials: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SllnReport {
    pub samples: u64,
    pub trials: u64,
    pub seed: u64,
    pub events: Vec<SllnEvent>,
    /// `max_A sqrt(m(A)(1 − m(A))/n)`.
    pub sigma: f64,
}

impl SllnReport {
    pub fn max_deviation(&self) -> f64 {
        self.events
            .iter()
            .map(|e| e.max_deviation)
            .fold(0.0, f64::max)
    }

    pub fn exceedances(&self) -> usize {
        self.events.iter().map(|e| e.exceeding_trials.len()).sum()
    }

    pub fn passed(&self) -> bool {
        self.exceedances() == 0
    }
}

/// Draws `samples` i.i.d. outcomes per trial and compares every event's
/// empirical frequency with its mass. Trial `t` is seeded with `seed + t`.
/// A deviation is flagged only when it strictly exceeds three standard
/// deviations, so events of mass 0 or 1 (which never deviate) are not.
pub fn slln_trial(space: &ProbSpace, samples: u64, trials: u64, seed: u64) -> SllnReport {
    let n = space
        .masses()
        .fold(num_bigint::BigInt::one(), |d, m| d.lcm(m.denom()));
    let n = n.to_u64().expect("denominator fits in u64");
    // outcome i owns draws in [cum[i], cum[i+1])
    let mut cum = vec![0u64];
    for m in space.masses() {
        let share = (m * Rat::from_integer(n.into())).to_integer().to_u64().unwrap();
        cum.push(cum.last().unwrap() + share);
    }
    let family = event_family(space);
    let index: Vec<&String> = space.outcomes().iter().map(|(l, _)| l).collect();
    let mut events: Vec<SllnEvent> = family
        .iter()
        .map(|(name, members)| {
            let mass = space.event_mass(members);
            let p = mass.to_f64().unwrap();
            SllnEvent {
                name: name.clone(),
                mass,
                max_deviation: 0.0,
                bound: 3.0 * (p * (1.0 - p) / samples as f64).sqrt(),
                exceeding_trials: Vec::new(),
            }
        })
        .collect();
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t));
        let mut counts = vec![0u64; index.len()];
        for _ in 0..samples {
            let r = rng.gen_range(0..n);
            let i = cum.partition_point(|&c| c <= r) - 1;
            counts[i] += 1;
        }
        for ((_, members), ev) in family.iter().zip(events.iter_mut()) {
            let hits: u64 = index
                .iter()
                .zip(&counts)
                .filter(|(l, _)| members.contains(**l))
                .map(|(_, c)| c)
                .sum();
            let freq = hits as f64 / samples as f64;
            let dev = (freq - ev.mass.to_f64().unwrap()).abs();
            ev.max_deviation = ev.max_deviation.max(dev);
            if dev > ev.bound {
                ev.exceeding_trials.push(t);
            }
        }
    }
    let sigma = events.iter().map(|e| e.bound / 3.0).fold(0.0, f64::max);
    SllnReport {
        samples,
        trials,
        seed,
        events,
        sigma,
    }
}
