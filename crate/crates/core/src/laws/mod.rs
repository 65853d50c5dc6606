//! Executable checks of the mean's algebraic laws over seeded random
//! sequences. Failures are collected as data: every failure records the case
//! index, which together with the seed reproduces it.

mod gen;
pub mod mutants;

pub use gen::{gen_aligned_pair, gen_seq, Gen, GenConfig, Skeleton};

use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};

use crate::mean::{divide, truncation_oracle, DivideError, OracleConfig};
use crate::ordinal::Ordinal;
use crate::rational::{int, Rat};
use crate::seq::{RealSeq, Seq};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub case: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport {
    pub name: &'static str,
    pub cases: usize,
    /// Cases outside the law's domain, such as unsupported divisions.
    pub skipped: usize,
    pub failures: Vec<Failure>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// `LAW <name> PASS|FAIL cases=<n> failures=<k>`
    pub fn line(&self) -> String {
        format!(
            "LAW {} {} cases={} failures={}",
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.cases,
            self.failures.len()
        )
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.line())
    }
}

/// Settings for the limsup check against the truncation oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub config: OracleConfig,
    pub tolerance: f64,
}

impl Default for OracleCheck {
    fn default() -> Self {
        OracleCheck {
            config: OracleConfig::default(),
            tolerance: 0.02,
        }
    }
}

enum Outcome {
    Pass,
    Skip,
    Fail(String),
}

use Outcome::{Fail, Pass, Skip};

fn expect_eq(what: &str, left: &Rat, right: &Rat) -> Outcome {
    if left == right {
        Pass
    } else {
        Fail(format!("{what}: {left} != {right}"))
    }
}

fn all(outcomes: impl IntoIterator<Item = Outcome>) -> Outcome {
    let mut skipped = false;
    for o in outcomes {
        match o {
            Pass => {}
            Skip => skipped = true,
            fail => return fail,
        }
    }
    if skipped {
        Skip
    } else {
        Pass
    }
}

fn run(
    name: &'static str,
    cfg: &GenConfig,
    stream: u32,
    check: impl Fn(&mut Gen<'_>) -> Outcome,
) -> LawReport {
    let mut report = LawReport {
        name,
        cases: 0,
        skipped: 0,
        failures: Vec::new(),
    };
    for case in 0..cfg.case_count {
        let outcome = catch_unwind(AssertUnwindSafe(|| check(&mut Gen::new(cfg, stream, case))))
            .unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Fail(format!("panic: {msg}"))
            });
        report.cases += 1;
        match outcome {
            Pass => {}
            Skip => report.skipped += 1,
            Fail(detail) => report.failures.push(Failure { case, detail }),
        }
    }
    report
}

fn cat(parts: Vec<RealSeq>) -> RealSeq {
    Seq::concat(parts).expect("nonempty")
}

/// `M̄(r ⊕ s) = M̄(s)` whenever `ℓ(r) + ℓ(s) = ℓ(s)`, and likewise for `M̲`.
pub fn check_domination(cfg: &GenConfig) -> LawReport {
    run("domination", cfg, 10, |g| {
        let len = g.infinite_length();
        let s = g.seq_of_length(&len);
        let degree = s.length().degree().as_u64().expect("finite degree") as u32;
        let rl = if degree == 0 {
            Ordinal::one()
        } else {
            g.ordinal(degree - 1)
        };
        let r = g.seq_of_length(&rl);
        if !Ordinal::absorbs(&r.length(), &s.length()) {
            return Fail(format!("generator broke absorption: {r} / {s}"));
        }
        let rs = cat(vec![r, s.clone()]);
        all([
            expect_eq("upper", &cfg.upper(&rs), &cfg.upper(&s)),
            expect_eq("lower", &cfg.lower(&rs), &cfg.lower(&s)),
        ])
    })
}

/// The defining properties of the upper mean: unit sequences, commutation,
/// equal-length averaging, the folded remainder, and the limsup property
/// against the truncation oracle.
pub fn check_axioms(cfg: &GenConfig, oracle: &OracleCheck) -> Vec<LawReport> {
    vec![
        run("identity", cfg, 20, |g| {
            let v = g.value();
            let s = g.seq_of_length(&Ordinal::one());
            all([
                expect_eq("unit", &cfg.upper(&Seq::unit(v.clone())), &v),
                expect_eq(
                    "generated unit",
                    &cfg.upper(&s),
                    s.single_value().expect("length one"),
                ),
            ])
        }),
        run("commutation", cfg, 21, |g| {
            let (r, s) = (g.seq(), g.seq());
            let rs = cfg.upper(&cat(vec![r.clone(), s.clone()]));
            let sr = cfg.upper(&cat(vec![s, r]));
            expect_eq("upper", &rs, &sr)
        }),
        run("averaging", cfg, 22, |g| {
            let len = g.length();
            let n = 2 + g.below(cfg.max_parts.max(2) - 1);
            let parts: Vec<RealSeq> = (0..n).map(|_| g.seq_of_length(&len)).collect();
            let avg = parts.iter().map(|p| cfg.upper(p)).sum::<Rat>() / int(n as i64);
            expect_eq("upper", &cfg.upper(&cat(parts)), &avg)
        }),
        run("remainder_fold", cfg, 23, |g| {
            let lead = g.infinite_length();
            let (sigma, n, _) = lead.standard_decomposition().expect("nonzero");
            let rho = g.ordinal(sigma.as_u64().expect("finite degree") as u32 - 1);
            let len = Ordinal::omega_pow(sigma.clone()).mul_nat(&n).add(&rho);
            let s = g.seq_of_length(&len);
            let n = u64::try_from(n).expect("small coefficient");
            let block = Ordinal::omega_pow(sigma);
            let (mut rest, rem) = s.split(&block.mul_nat(&n.into())).expect("limit cut");
            let mut pieces = Vec::new();
            for _ in 1..n {
                let (p, tail) = rest.split(&block).expect("limit cut");
                pieces.push(p);
                rest = tail;
            }
            pieces.push(rest);
            pieces[0] = cat(vec![rem, pieces[0].clone()]);
            let folded = pieces.iter().map(|p| cfg.upper(p)).sum::<Rat>() / int(n as i64);
            expect_eq("upper", &cfg.upper(&s), &folded)
        }),
        run("limsup_oracle", cfg, 24, |g| match oracle_agreement(cfg, &g.seq(), oracle) {
            OracleVerdict::Agrees => Pass,
            OracleVerdict::OverBudget(_) => Skip,
            OracleVerdict::Disagrees(d) => Fail(d),
        }),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    Agrees,
    Disagrees(String),
    OverBudget(String),
}

fn to_f64(r: &Rat) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

/// Whether the evaluator's lower and upper means lie inside the oracle
/// bracket widened by the tolerance.
pub fn oracle_agreement(cfg: &GenConfig, s: &RealSeq, oracle: &OracleCheck) -> OracleVerdict {
    match truncation_oracle(s, &oracle.config) {
        Err(e) => OracleVerdict::OverBudget(e.to_string()),
        Ok(i) => {
            let up = to_f64(&cfg.upper(s));
            let lo = to_f64(&cfg.lower(s));
            if i.contains(up, oracle.tolerance) && i.contains(lo, oracle.tolerance) {
                OracleVerdict::Agrees
            } else {
                OracleVerdict::Disagrees(format!(
                    "{s}: lower {lo} upper {up} outside [{}, {}] widened by {}",
                    i.lo, i.hi, oracle.tolerance
                ))
            }
        }
    }
}

/// Duality `M̄(s) = −M̲(−s)` and the value-range bounds
/// `min ≤ M̲(s) ≤ M̄(s) ≤ max`.
pub fn check_duality_bounds(cfg: &GenConfig) -> LawReport {
    run("duality_bounds", cfg, 30, |g| {
        let s = g.seq();
        let (up, lo) = (cfg.upper(&s), cfg.lower(&s));
        let (min, max) = s.value_range();
        if !(min <= lo && lo <= up && up <= max) {
            return Fail(format!("{s}: {min} <= {lo} <= {up} <= {max} fails"));
        }
        expect_eq("duality", &up, &-cfg.lower(&s.negate()))
    })
}

/// `r ≤ s` pointwise implies `M̄(r) ≤ M̄(s)` and `M̲(r) ≤ M̲(s)`.
pub fn check_monotonicity(cfg: &GenConfig) -> LawReport {
    run("monotonicity", cfg, 31, |g| {
        let len = g.length();
        let sk = g.skeleton(&len);
        let r = g.fill(&sk);
        let t = g.fill_nonnegative(&sk);
        let s = match r.zip_affine(&t, &int(1), &int(1)) {
            Ok(s) => s,
            Err(e) => return Fail(format!("aligned pair did not zip: {e}")),
        };
        let (ur, us) = (cfg.upper(&r), cfg.upper(&s));
        let (lr, ls) = (cfg.lower(&r), cfg.lower(&s));
        if ur <= us && lr <= ls {
            Pass
        } else {
            Fail(format!("{r} <= {s} but means {lr}..{ur} vs {ls}..{us}"))
        }
    })
}

/// Subadditivity `M̄(r + s) ≤ M̄(r) + M̄(s)` on aligned pairs, and linearity
/// `M(a·r + b·s) = a·M(r) + b·M(s)` where both means exist, together with
/// affine equivariance of the upper mean.
pub fn check_subadditivity_linearity(cfg: &GenConfig) -> Vec<LawReport> {
    vec![
        run("subadditivity", cfg, 40, |g| {
            let (r, s) = g.aligned_pair();
            let sum = match r.zip_affine(&s, &int(1), &int(1)) {
                Ok(x) => x,
                Err(e) => return Fail(format!("aligned pair did not zip: {e}")),
            };
            let (lhs, rhs) = (cfg.upper(&sum), cfg.upper(&r) + cfg.upper(&s));
            if lhs <= rhs {
                Pass
            } else {
                Fail(format!("M({r} + {s}) = {lhs} > {rhs}"))
            }
        }),
        run("linearity", cfg, 41, |g| {
            let (r, s) = g.aligned_pair();
            let (a, b) = (g.value(), g.value());
            let mut checks = Vec::new();
            // a·r + b with the sign of a choosing the mean it tracks
            let shifted = r.affine(&a, &b);
            let expect = if a >= int(0) {
                &a * cfg.upper(&r) + &b
            } else {
                &a * cfg.lower(&r) + &b
            };
            checks.push(expect_eq("affine", &cfg.upper(&shifted), &expect));
            if let (Some(mr), Some(ms)) = (cfg.mean(&r), cfg.mean(&s)) {
                match r.zip_affine(&s, &a, &b) {
                    Ok(x) => match cfg.mean(&x) {
                        Some(m) => checks.push(expect_eq("linear", &m, &(&a * mr + &b * ms))),
                        None => checks.push(Fail(format!("{x} has no mean"))),
                    },
                    Err(e) => checks.push(Fail(format!("aligned pair did not zip: {e}"))),
                }
            }
            all(checks)
        }),
    ]
}

/// `M(s + 1/k) = M(s) + 1/k` exactly along `k = 1..=32`, for `s` with a mean.
pub fn check_uniform_limit(cfg: &GenConfig) -> LawReport {
    let no_osc = GenConfig {
        osc_probability: 0.0,
        ..cfg.clone()
    };
    run("uniform_limit", &no_osc, 50, |g| {
        let s = g.seq();
        let Some(m) = cfg.mean(&s) else {
            return Fail(format!("{s} has no mean"));
        };
        all((1..=32).map(|k| {
            let eps = Rat::new(1.into(), k.into());
            match cfg.mean(&s.affine(&int(1), &eps)) {
                Some(mk) => expect_eq(&format!("k={k}"), &(mk - &m), &eps),
                None => Fail(format!("shift by 1/{k} lost the mean")),
            }
        }))
    })
}

/// Interleaving finitely many finite intruders in front of ω-length segments
/// leaves both means unchanged: the excised positions have a type absorbed
/// by the length.
pub fn check_excision(cfg: &GenConfig) -> LawReport {
    run("excision", cfg, 60, |g| {
        let len = g.infinite_length();
        let s = g.seq_of_length(&len);
        let len = s.length();
        let omega = Ordinal::omega();
        let mut segments = Vec::new();
        let mut rest = Some(s.clone());
        for _ in 0..g.below(4) {
            let Some(cur) = rest.take() else { break };
            if cur.length().is_finite() {
                rest = Some(cur);
                break;
            }
            if cur.length() == omega {
                segments.push(cur);
                break;
            }
            let (seg, tail) = cur.split(&omega).expect("limit cut");
            segments.push(seg);
            rest = Some(tail);
        }
        let mut parts = Vec::new();
        for seg in segments {
            let k = 1 + g.below(3) as u64;
            let intruder = if g.chance(0.5) {
                Seq::constant(g.value(), Ordinal::from(k)).expect("nonzero")
            } else {
                cat(vec![Seq::unit(g.value()), Seq::unit(g.value())])
            };
            parts.push(intruder);
            parts.push(seg);
        }
        parts.extend(rest);
        let t = cat(parts);
        if t.length() != len {
            return Fail(format!("excision changed the length: {} vs {len}", t.length()));
        }
        all([
            expect_eq("upper", &cfg.upper(&t), &cfg.upper(&s)),
            expect_eq("lower", &cfg.lower(&t), &cfg.lower(&s)),
        ])
    })
}

/// `(s/β)/α = s/(β·α)` and `M̄(s/β) = M̄(s)`, over generated `s` whose
/// length is a multiple of `β·α`. Unsupported divisions are skipped.
pub fn check_division(cfg: &GenConfig) -> LawReport {
    run("division", cfg, 70, |g| {
        let cap = cfg.ordinal_degree_cap.max(1);
        let pick = |g: &mut Gen<'_>, max_degree: u32| -> Ordinal {
            let choices: Vec<&str> = if max_degree == 0 {
                vec!["1", "2", "3"]
            } else {
                vec!["1", "2", "3", "w", "w*2", "w+1", "w^2"]
            };
            loop {
                let o: Ordinal = choices[g.below(choices.len())].parse().expect("literal");
                if o.degree().as_u64().unwrap_or(u64::MAX) <= max_degree as u64 {
                    return o;
                }
            }
        };
        let beta = pick(g, cap);
        let used = beta.degree().as_u64().unwrap_or(0) as u32;
        let alpha = pick(g, cap.saturating_sub(used));
        let used = used + alpha.degree().as_u64().unwrap_or(0) as u32;
        let gamma = pick(g, cap.saturating_sub(used));
        let ba = beta.mul(&alpha);
        let s = g.seq_of_length(&ba.mul(&gamma));
        let outcome = (|| -> Result<Outcome, DivideError> {
            let d1 = divide(&s, &beta)?;
            let d2 = divide(&d1, &alpha)?;
            let d3 = divide(&s, &ba)?;
            Ok(all([
                same_sequence(cfg, &d2, &d3),
                expect_eq("mean preserved", &cfg.upper(&d1), &cfg.upper(&s)),
            ]))
        })();
        match outcome {
            Ok(Fail(d)) => Fail(format!("s = {s}, β = {beta}, α = {alpha}: {d}")),
            Ok(o) => o,
            Err(DivideError::UnsupportedDivision(_)) => Skip,
            Err(e) => Fail(format!("s = {s}, β = {beta}, α = {alpha}: {e}")),
        }
    })
}

/// Pointwise equality: structurally after normalization, or through a zero
/// difference, or else by means and a materialized prefix.
fn same_sequence(cfg: &GenConfig, a: &RealSeq, b: &RealSeq) -> Outcome {
    if a.normalize() == b.normalize() {
        return Pass;
    }
    if a.length() != b.length() {
        return Fail(format!("lengths differ: {a} vs {b}"));
    }
    if let Ok(d) = a.zip_affine(b, &int(1), &int(-1)) {
        return if d.single_value() == Some(&int(0)) {
            Pass
        } else {
            Fail(format!("{a} and {b} differ pointwise"))
        };
    }
    let same = cfg.upper(a) == cfg.upper(b)
        && cfg.lower(a) == cfg.lower(b)
        && a.materialize_prefix(256) == b.materialize_prefix(256);
    if same {
        Pass
    } else {
        Fail(format!("{a} and {b} differ"))
    }
}

/// Every law, in a fixed order.
pub fn run_all(cfg: &GenConfig, oracle: &OracleCheck) -> Vec<LawReport> {
    let mut out = vec![check_domination(cfg)];
    out.extend(check_axioms(cfg, oracle));
    out.push(check_duality_bounds(cfg));
    out.push(check_monotonicity(cfg));
    out.extend(check_subadditivity_linearity(cfg));
    out.push(check_uniform_limit(cfg));
    out.push(check_excision(cfg));
    out.push(check_division(cfg));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mean::{lower_mean, mean, upper_mean};
    use crate::rational::rat;
    use crate::seq::parse_real_seq;

    fn small() -> GenConfig {
        GenConfig {
            seed: 5,
            case_count: 60,
            ..GenConfig::default()
        }
    }

    #[test]
    fn every_law_passes_on_a_small_run() {
        let oracle = OracleCheck::default();
        for report in run_all(&small(), &oracle) {
            assert!(report.passed(), "{report}: {:?}", report.failures);
            assert_eq!(report.cases, 60);
        }
    }

    #[test]
    fn broken_evaluators_are_caught() {
        for name in mutants::NAMES {
            let cfg = GenConfig {
                evaluator: mutants::by_name(name).unwrap(),
                case_count: 200,
                ..small()
            };
            let reports = run_all(&cfg, &OracleCheck::default());
            assert!(reports.iter().any(|r| !r.passed()), "{name} went unnoticed");
        }
    }

    #[test]
    fn zero_cases_pass_vacuously() {
        let cfg = GenConfig {
            case_count: 0,
            ..small()
        };
        for report in run_all(&cfg, &OracleCheck::default()) {
            assert_eq!(report.line(), format!("LAW {} PASS cases=0 failures=0", report.name));
        }
    }

    #[test]
    fn domination_examples() {
        let s = parse_real_seq("cat(const(9;5), const(0;w))").unwrap();
        assert_eq!(upper_mean(&s), int(0));
        let s = parse_real_seq("cat(osc(0,1), const(2;w^2))").unwrap();
        assert_eq!((lower_mean(&s), upper_mean(&s)), (int(2), int(2)));
    }

    #[test]
    fn uniform_limit_example() {
        let s = parse_real_seq("repw(cat(const(0;1), const(1;2)))").unwrap();
        assert_eq!(mean(&s.affine(&int(1), &rat(1, 3))), Some(int(1)));
    }

    #[test]
    fn subadditivity_with_opposed_oscillators() {
        let r = parse_real_seq("osc(0,1)").unwrap();
        let s = parse_real_seq("osc(0,-1)").unwrap();
        let sum = r.zip_affine(&s, &int(1), &int(1)).unwrap();
        assert!(upper_mean(&sum) <= upper_mean(&r) + upper_mean(&s));
    }
}
