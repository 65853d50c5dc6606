//! Deliberately wrong evaluators. Plugged into
//! [`GenConfig::evaluator`](super::GenConfig), each must make some law fail.

use crate::mean::upper_mean;
use crate::rational::{int, Rat};
use crate::seq::{RealSeq, Seq};

fn rewrite(s: &RealSeq, f: &impl Fn(&RealSeq) -> Option<RealSeq>) -> RealSeq {
    if let Some(t) = f(s) {
        return t;
    }
    match s {
        Seq::Concat(p) => Seq::Concat(p.iter().map(|x| rewrite(x, f)).collect()),
        Seq::RepFin { body, count } => Seq::RepFin {
            body: Box::new(rewrite(body, f)),
            count: count.clone(),
        },
        Seq::RepOmega(b) => Seq::RepOmega(Box::new(rewrite(b, f))),
        c => c.clone(),
    }
}

/// Evaluates every oscillator as if its high value were pulled a quarter of
/// the way toward its low value.
pub fn skewed_oscillator(s: &RealSeq) -> Rat {
    upper_mean(&rewrite(s, &|x| match x {
        Seq::Osc { lo, hi } => Some(Seq::Osc {
            lo: lo.clone(),
            hi: (hi * int(3) + lo) / int(4),
        }),
        _ => None,
    }))
}

/// Evaluates every ω-repetition as a constant run of its body's first value.
pub fn first_value_repetition(s: &RealSeq) -> Rat {
    upper_mean(&rewrite(s, &|x| match x {
        Seq::RepOmega(b) => Some(Seq::Const {
            value: b.materialize_prefix(1)[0].clone(),
            len: x.length(),
        }),
        _ => None,
    }))
}

/// Looks a mutant up by name.
pub fn by_name(name: &str) -> Option<fn(&RealSeq) -> Rat> {
    match name {
        "skewed-oscillator" => Some(skewed_oscillator),
        "first-value-repetition" => Some(first_value_repetition),
        _ => None,
    }
}

pub const NAMES: [&str; 2] = ["skewed-oscillator", "first-value-repetition"];
