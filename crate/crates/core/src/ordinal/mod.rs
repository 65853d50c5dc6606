//! Ordinals below ε₀ in Cantor normal form.
//!
//! An [`Ordinal`] is a finite list of terms `ω^e·c` with strictly decreasing
//! exponents and positive coefficients. Exponents are themselves ordinals, so
//! the representation is a finite tree and every value is below ε₀. The
//! representation is canonical: two ordinals are equal iff their term lists
//! are identical, which lets `PartialEq`/`Hash` be derived.

mod parse;

pub(crate) use parse::parse_ordinal_at;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

pub use parse::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("standard decomposition of the zero ordinal")]
    ZeroOrdinal,
    #[error("left subtraction underflow: {0} exceeds {1}")]
    Underflow(Ordinal, Ordinal),
    #[error("left division by the zero ordinal")]
    ZeroDivisor,
}

/// One Cantor-normal-form term `ω^exponent · coefficient`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub exponent: Ordinal,
    pub coefficient: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::finite(1u32)
    }

    pub fn omega() -> Self {
        Self::omega_pow(Self::one())
    }

    pub fn finite(n: impl Into<BigUint>) -> Self {
        let n = n.into();
        if n.is_zero() {
            return Self::zero();
        }
        Ordinal {
            terms: vec![Term {
                exponent: Self::zero(),
                coefficient: n,
            }],
        }
    }

    /// `ω^e`, the indecomposable ordinal with exponent `e`.
    pub fn omega_pow(e: Ordinal) -> Self {
        Self::monomial(e, BigUint::one())
    }

    /// `ω^e · c`; returns zero when `c` is zero.
    pub fn monomial(e: Ordinal, c: impl Into<BigUint>) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        Ordinal {
            terms: vec![Term {
                exponent: e,
                coefficient: c,
            }],
        }
    }

    /// Builds an ordinal from terms, validating the canonical-form invariants.
    pub fn from_terms(terms: Vec<Term>) -> Option<Self> {
        for (i, t) in terms.iter().enumerate() {
            if t.coefficient.is_zero() {
                return None;
            }
            if i > 0 && terms[i - 1].exponent <= t.exponent {
                return None;
            }
        }
        Some(Ordinal { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|t| t.exponent.is_zero())
    }

    /// The value as a natural number, if finite.
    pub fn as_finite(&self) -> Option<BigUint> {
        match self.terms.as_slice() {
            [] => Some(BigUint::zero()),
            [t] if t.exponent.is_zero() => Some(t.coefficient.clone()),
            _ => None,
        }
    }

    pub fn as_u64(&self) -> Option<u64> {
        self.as_finite().and_then(|n| n.to_u64())
    }

    /// A nonzero ordinal with no last element.
    pub fn is_limit(&self) -> bool {
        self.terms
            .last()
            .is_some_and(|t| !t.exponent.is_zero())
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|t| t.exponent.is_zero())
    }

    /// The leading exponent (the CNF degree); zero for the zero ordinal.
    pub fn degree(&self) -> Ordinal {
        self.terms
            .first()
            .map(|t| t.exponent.clone())
            .unwrap_or_default()
    }

    pub fn leading_coefficient(&self) -> BigUint {
        self.terms
            .first()
            .map(|t| t.coefficient.clone())
            .unwrap_or_default()
    }

    /// Nonzero, with a single CNF term whose coefficient is one.
    pub fn is_indecomposable(&self) -> bool {
        matches!(self.terms.as_slice(), [t] if t.coefficient.is_one())
    }

    /// `self = ω^σ·n + ρ` with `ρ < ω^σ`.
    pub fn standard_decomposition(&self) -> Result<(Ordinal, BigUint, Ordinal), OrdinalError> {
        let (head, rest) = self.terms.split_first().ok_or(OrdinalError::ZeroOrdinal)?;
        Ok((
            head.exponent.clone(),
            head.coefficient.clone(),
            Ordinal {
                terms: rest.to_vec(),
            },
        ))
    }

    /// `self + other`.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some(lead) = other.terms.first() else {
            return self.clone();
        };
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut rest = other.terms.iter();
        for t in &self.terms {
            match t.exponent.cmp(&lead.exponent) {
                Ordering::Greater => terms.push(t.clone()),
                Ordering::Equal => {
                    terms.push(Term {
                        exponent: t.exponent.clone(),
                        coefficient: &t.coefficient + &lead.coefficient,
                    });
                    rest.next();
                    break;
                }
                Ordering::Less => break,
            }
        }
        terms.extend(rest.cloned());
        Ordinal { terms }
    }

    /// `self · other`.
    pub fn mul(&self, other: &Ordinal) -> Ordinal {
        let Some(lead) = self.terms.first() else {
            return Ordinal::zero();
        };
        let mut out = Ordinal::zero();
        for t in &other.terms {
            let piece = if t.exponent.is_zero() {
                let mut terms = self.terms.clone();
                terms[0].coefficient = &lead.coefficient * &t.coefficient;
                Ordinal { terms }
            } else {
                Ordinal::monomial(lead.exponent.add(&t.exponent), t.coefficient.clone())
            };
            out = out.add(&piece);
        }
        out
    }

    /// `self · n` for a natural `n`.
    pub fn mul_nat(&self, n: &BigUint) -> Ordinal {
        self.mul(&Ordinal::finite(n.clone()))
    }

    /// The unique `g` with `b + g = a`.
    pub fn left_subtract(b: &Ordinal, a: &Ordinal) -> Result<Ordinal, OrdinalError> {
        let underflow = || OrdinalError::Underflow(b.clone(), a.clone());
        for (i, at) in a.terms.iter().enumerate() {
            let Some(bt) = b.terms.get(i) else {
                return Ok(Ordinal {
                    terms: a.terms[i..].to_vec(),
                });
            };
            match at.exponent.cmp(&bt.exponent) {
                Ordering::Greater => {
                    return Ok(Ordinal {
                        terms: a.terms[i..].to_vec(),
                    })
                }
                Ordering::Less => return Err(underflow()),
                Ordering::Equal => match at.coefficient.cmp(&bt.coefficient) {
                    Ordering::Greater => {
                        let mut terms = vec![Term {
                            exponent: at.exponent.clone(),
                            coefficient: &at.coefficient - &bt.coefficient,
                        }];
                        terms.extend_from_slice(&a.terms[i + 1..]);
                        return Ok(Ordinal { terms });
                    }
                    Ordering::Less => return Err(underflow()),
                    Ordering::Equal => {}
                },
            }
        }
        if b.terms.len() > a.terms.len() {
            Err(underflow())
        } else {
            Ok(Ordinal::zero())
        }
    }

    /// Left division: `lam = b·alpha + rho` with `rho < b`.
    pub fn left_divide(b: &Ordinal, lam: &Ordinal) -> Result<(Ordinal, Ordinal), OrdinalError> {
        let Some(lead) = b.terms.first() else {
            return Err(OrdinalError::ZeroDivisor);
        };
        // Terms of lam above b's degree are matched exactly by b·ω^f = ω^(deg b + f).
        let split = lam
            .terms
            .iter()
            .position(|t| t.exponent <= lead.exponent)
            .unwrap_or(lam.terms.len());
        let mut alpha_terms = Vec::with_capacity(split + 1);
        for t in &lam.terms[..split] {
            let f = Ordinal::left_subtract(&lead.exponent, &t.exponent)
                .expect("exponent above the divisor degree");
            alpha_terms.push(Term {
                exponent: f,
                coefficient: t.coefficient.clone(),
            });
        }
        let low = Ordinal {
            terms: lam.terms[split..].to_vec(),
        };
        let mut k = match low.terms.first() {
            Some(t) if t.exponent == lead.exponent => t.coefficient.div_floor(&lead.coefficient),
            _ => BigUint::zero(),
        };
        let mut bk = b.mul_nat(&k);
        if bk > low {
            k -= 1u32;
            bk = b.mul_nat(&k);
        }
        let rho = Ordinal::left_subtract(&bk, &low).expect("b·k does not exceed the low part");
        if !k.is_zero() {
            alpha_terms.push(Term {
                exponent: Ordinal::zero(),
                coefficient: k,
            });
        }
        let alpha = Ordinal { terms: alpha_terms };
        debug_assert_eq!(&b.mul(&alpha).add(&rho), lam);
        debug_assert!(&rho < b);
        Ok((alpha, rho))
    }

    /// Whether `b` divides `lam` on the left, returning the quotient.
    pub fn exact_quotient(b: &Ordinal, lam: &Ordinal) -> Option<Ordinal> {
        match Ordinal::left_divide(b, lam) {
            Ok((alpha, rho)) if rho.is_zero() => Some(alpha),
            _ => None,
        }
    }

    /// `b + a = a`.
    pub fn absorbs(b: &Ordinal, a: &Ordinal) -> bool {
        &b.add(a) == a
    }

    /// The `k`-th element of the standard fundamental sequence of a limit ordinal.
    pub fn fundamental(&self, k: u64) -> Option<Ordinal> {
        let (last, init) = self.terms.split_last()?;
        if last.exponent.is_zero() {
            return None;
        }
        let mut base = Ordinal {
            terms: init.to_vec(),
        };
        if last.coefficient > BigUint::one() {
            base = base.add(&Ordinal::monomial(
                last.exponent.clone(),
                &last.coefficient - 1u32,
            ));
        }
        let tail = if last.exponent.is_successor() {
            Ordinal::monomial(last.exponent.predecessor()?, k)
        } else {
            Ordinal::omega_pow(last.exponent.fundamental(k)?)
        };
        Some(base.add(&tail))
    }

    /// The predecessor of a successor ordinal.
    pub fn predecessor(&self) -> Option<Ordinal> {
        let (last, init) = self.terms.split_last()?;
        if !last.exponent.is_zero() {
            return None;
        }
        Some(Ordinal {
            terms: init.to_vec(),
        }
        .add(&Ordinal::finite(&last.coefficient - 1u32)))
    }

    pub fn parse(text: &str) -> Result<Ordinal, ParseError> {
        parse::parse_ordinal(text)
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a
                .exponent
                .cmp(&b.exponent)
                .then_with(|| a.coefficient.cmp(&b.coefficient));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::finite(n)
    }
}

impl Add for &Ordinal {
    type Output = Ordinal;
    fn add(self, rhs: &Ordinal) -> Ordinal {
        Ordinal::add(self, rhs)
    }
}

impl Mul for &Ordinal {
    type Output = Ordinal;
    fn mul(self, rhs: &Ordinal) -> Ordinal {
        Ordinal::mul(self, rhs)
    }
}

impl std::str::FromStr for Ordinal {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ordinal::parse(s)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.exponent;
        if e.is_zero() {
            return write!(f, "{}", self.coefficient);
        }
        if e.is_one() {
            f.write_str("w")?;
        } else if e.is_atom() {
            write!(f, "w^{e}")?;
        } else {
            write!(f, "w^({e})")?;
        }
        if !self.coefficient.is_one() {
            write!(f, "*{}", self.coefficient)?;
        }
        Ok(())
    }
}

impl Ordinal {
    pub fn is_one(&self) -> bool {
        self.as_finite().is_some_and(|n| n.is_one())
    }

    /// Prints without parentheses in exponent position: a natural, or a
    /// single `w`-power with coefficient one and an atomic exponent.
    fn is_atom(&self) -> bool {
        match self.terms.as_slice() {
            [] => true,
            [t] if t.exponent.is_zero() => true,
            [t] => t.coefficient.is_one() && t.exponent.is_atom(),
            _ => false,
        }
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}
