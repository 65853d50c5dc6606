use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::CaptureError;
use crate::rational::{int, parse_rat, Rat};

/// A finite probability space with rational masses and optional named
/// events. Outcomes keep their declared order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbSpace {
    outcomes: Vec<(String, Rat)>,
    events: Vec<(String, BTreeSet<String>)>,
}

fn valid_label(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl ProbSpace {
    pub fn new(
        outcomes: Vec<(String, Rat)>,
        events: Vec<(String, BTreeSet<String>)>,
    ) -> Result<Self, CaptureError> {
        if outcomes.is_empty() {
            return Err(CaptureError::NoOutcomes);
        }
        let mut seen = BTreeSet::new();
        for (label, mass) in &outcomes {
            if !seen.insert(label.as_str()) {
                return Err(CaptureError::DuplicateLabel(label.clone()));
            }
            if *mass < Rat::zero() || *mass > Rat::one() {
                return Err(CaptureError::MassOutOfRange {
                    label: label.clone(),
                    mass: mass.clone(),
                });
            }
        }
        let total: Rat = outcomes.iter().map(|(_, m)| m).sum();
        if total != int(1) {
            return Err(CaptureError::MassSum(total));
        }
        let mut names = BTreeSet::new();
        for (name, members) in &events {
            if !names.insert(name.as_str()) {
                return Err(CaptureError::DuplicateEvent(name.clone()));
            }
            if let Some(bad) = members.iter().find(|l| !seen.contains(l.as_str())) {
                return Err(CaptureError::UnknownLabel(bad.clone()));
            }
        }
        Ok(ProbSpace { outcomes, events })
    }

    pub fn outcomes(&self) -> &[(String, Rat)] {
        &self.outcomes
    }

    pub fn masses(&self) -> impl Iterator<Item = &Rat> {
        self.outcomes.iter().map(|(_, m)| m)
    }

    pub fn labels(&self) -> impl Iterator<Item = &String> {
        self.outcomes.iter().map(|(l, _)| l)
    }

    pub fn mass(&self, label: &str) -> Option<&Rat> {
        self.outcomes
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, m)| m)
    }

    pub fn events(&self) -> &[(String, BTreeSet<String>)] {
        &self.events
    }

    /// `m(A)`; labels outside the space contribute nothing.
    pub fn event_mass(&self, event: &BTreeSet<String>) -> Rat {
        self.outcomes
            .iter()
            .filter(|(l, _)| event.contains(l))
            .map(|(_, m)| m)
            .sum()
    }

    pub fn complement(&self, event: &BTreeSet<String>) -> BTreeSet<String> {
        self.labels().filter(|l| !event.contains(*l)).cloned().collect()
    }

    /// The zero-mass outcomes.
    pub fn null_outcomes(&self) -> BTreeSet<String> {
        self.outcomes
            .iter()
            .filter(|(_, m)| m.is_zero())
            .map(|(l, _)| l.clone())
            .collect()
    }
}

/// Prints in the form read by [`parse_space`].
impl fmt::Display for ProbSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (label, mass) in &self.outcomes {
            writeln!(f, "outcome {label} {mass}")?;
        }
        for (name, members) in &self.events {
            write!(f, "event {name}")?;
            for l in self.labels().filter(|l| members.contains(*l)) {
                write!(f, " {l}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Reads a space from lines `outcome <label> <p/q>` and
/// `event <name> <label>...`. Blank lines and `#` comments are skipped.
pub fn parse_space(text: &str) -> Result<ProbSpace, CaptureError> {
    let mut outcomes = Vec::new();
    let mut events = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let syntax = |message: String| CaptureError::Syntax { line, message };
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = content.split_whitespace().collect();
        match words.as_slice() {
            [] => {}
            ["outcome", label, mass] => {
                if !valid_label(label) {
                    return Err(syntax(format!("invalid label '{label}'")));
                }
                let mass = parse_rat(mass).map_err(|e| syntax(format!("bad mass: {e}")))?;
                outcomes.push((label.to_string(), mass));
            }
            ["outcome", ..] => {
                return Err(syntax("expected 'outcome <label> <mass>'".to_string()))
            }
            ["event", name, members @ ..] => {
                if !valid_label(name) {
                    return Err(syntax(format!("invalid event name '{name}'")));
                }
                events.push((
                    name.to_string(),
                    members.iter().map(|m| m.to_string()).collect(),
                ));
            }
            ["event"] => return Err(syntax("expected 'event <name> <label>...'".to_string())),
            [word, ..] => return Err(syntax(format!("unknown directive '{word}'"))),
        }
    }
    ProbSpace::new(outcomes, events)
}

/// A seeded random space with 1 to `max_outcomes` outcomes `o0, o1, ...`
/// whose masses share a denominator of at most `max_denominator`. Some
/// outcomes may get mass 0.
pub fn random_space(seed: u64, max_outcomes: usize, max_denominator: u64) -> ProbSpace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_outcomes.max(1));
    let d = rng.gen_range(1..=max_denominator.max(1));
    // cut [0, d] at n - 1 sorted points
    let mut cuts: Vec<u64> = (0..n - 1).map(|_| rng.gen_range(0..=d)).collect();
    cuts.push(0);
    cuts.push(d);
    cuts.sort_unstable();
    let outcomes = cuts
        .windows(2)
        .enumerate()
        .map(|(i, w)| (format!("o{i}"), Rat::new((w[1] - w[0]).into(), d.into())))
        .collect();
    ProbSpace::new(outcomes, Vec::new()).expect("masses partition 1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn parses_outcomes_events_and_comments() {
        let sp = parse_space(
            "# a die with two faces merged\noutcome a 1/2  # heads\n\noutcome b 1/3\noutcome c 1/6\nevent ab a b\n",
        )
        .unwrap();
        assert_eq!(sp.outcomes().len(), 3);
        assert_eq!(sp.mass("b"), Some(&rat(1, 3)));
        assert_eq!(sp.events()[0].0, "ab");
        assert_eq!(sp.event_mass(&sp.events()[0].1), rat(5, 6));
        assert_eq!(parse_space(&sp.to_string()).unwrap(), sp);
    }

    #[test]
    fn rejects_bad_spaces() {
        let err = parse_space("outcome a 1/2\noutcome b 1/3\n").unwrap_err();
        assert_eq!(err, CaptureError::MassSum(rat(5, 6)));
        assert_eq!(err.to_string(), "masses sum to 5/6, not 1");
        assert!(matches!(
            parse_space("outcome a 1/2\noutcome a 1/2"),
            Err(CaptureError::DuplicateLabel(_))
        ));
        assert!(matches!(
            parse_space("outcome a 1\nevent e a z"),
            Err(CaptureError::UnknownLabel(_))
        ));
        assert!(matches!(
            parse_space("outcome a 1\nevent e a\nevent e a"),
            Err(CaptureError::DuplicateEvent(_))
        ));
        assert!(matches!(
            parse_space("outcome a 3/2\noutcome b -1/2"),
            Err(CaptureError::MassOutOfRange { .. })
        ));
        assert!(matches!(parse_space(""), Err(CaptureError::NoOutcomes)));
        assert!(matches!(
            parse_space("outcome a\n"),
            Err(CaptureError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_space("outcome a 1\nflip a\n"),
            Err(CaptureError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn random_spaces_are_valid_and_seeded() {
        for seed in 0..50 {
            let sp = random_space(seed, 5, 12);
            assert!((1..=5).contains(&sp.outcomes().len()));
            assert!(sp.masses().all(|m| *m.denom() <= 12.into()));
            assert_eq!(sp, random_space(seed, 5, 12));
        }
    }
}
