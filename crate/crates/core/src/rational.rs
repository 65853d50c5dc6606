//! Exact rationals: `Rat` is an arbitrary-precision fraction in lowest terms.
//! `Display` prints `p/q`, or `p` for integers.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::ordinal::ParseError;
use crate::syntax::Cursor;

pub type Rat = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `rat := ['-'] natural ['/' natural]`
pub fn parse_rat(text: &str) -> Result<Rat, ParseError> {
    let mut cur = Cursor::new(text);
    let r = parse_rat_at(&mut cur)?;
    cur.finish()?;
    Ok(r)
}

pub(crate) fn parse_rat_at(cur: &mut Cursor<'_>) -> Result<Rat, ParseError> {
    let negative = cur.eat('-');
    let numer = BigInt::from(cur.natural()?);
    let denom = if cur.eat('/') {
        let at = cur.pos();
        let d = cur.natural()?;
        if d == 0u32.into() {
            return Err(ParseError {
                position: at,
                message: "zero denominator".into(),
            });
        }
        BigInt::from(d)
    } else {
        BigInt::from(1)
    };
    let r = Rat::new(numer, denom);
    Ok(if negative { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_rat("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("-2").unwrap().to_string(), "-2");
        assert_eq!(parse_rat(" - 4 / 6 ").unwrap().to_string(), "-2/3");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("1/").is_err());
        assert!(parse_rat("x").is_err());
    }
}
