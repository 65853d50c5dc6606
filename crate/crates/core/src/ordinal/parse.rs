use crate::syntax::Cursor;

use super::Ordinal;

/// A syntax error with the byte offset at which it was detected.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

pub(crate) fn parse_ordinal(text: &str) -> Result<Ordinal, ParseError> {
    let mut cur = Cursor::new(text);
    let ord = parse_ordinal_at(&mut cur)?;
    cur.finish()?;
    Ok(ord)
}

/// `ord := term ('+' term)*`. Terms are combined by ordinal addition, so
/// non-canonical input such as `1 + w` is accepted and collapses.
pub(crate) fn parse_ordinal_at(cur: &mut Cursor<'_>) -> Result<Ordinal, ParseError> {
    let mut acc = term(cur)?;
    while cur.eat('+') {
        acc = acc.add(&term(cur)?);
    }
    Ok(acc)
}

fn term(cur: &mut Cursor<'_>) -> Result<Ordinal, ParseError> {
    match cur.peek() {
        Some('w' | 'ω') => {
            let c = cur.peek().unwrap();
            let _ = cur.eat(c);
            let exponent = if cur.eat('^') {
                exponent_atom(cur)?
            } else {
                Ordinal::one()
            };
            let coefficient = if cur.eat('*') {
                cur.natural()?
            } else {
                1u32.into()
            };
            if coefficient == 0u32.into() {
                return Ok(Ordinal::zero());
            }
            Ok(Ordinal::monomial(exponent, coefficient))
        }
        Some(c) if c.is_ascii_digit() => Ok(Ordinal::finite(cur.natural()?)),
        Some(c) => Err(cur.error(format!("expected an ordinal term, found '{c}'"))),
        None => Err(cur.error("expected an ordinal term, found end of input")),
    }
}

/// `atom := natural | '(' ord ')' | 'w' ['^' atom]`, so `w^w^2` is a tower.
fn exponent_atom(cur: &mut Cursor<'_>) -> Result<Ordinal, ParseError> {
    if cur.eat('(') {
        let e = parse_ordinal_at(cur)?;
        cur.expect(')')?;
        return Ok(e);
    }
    if cur.eat('w') || cur.eat('ω') {
        let e = if cur.eat('^') {
            exponent_atom(cur)?
        } else {
            Ordinal::one()
        };
        return Ok(Ordinal::omega_pow(e));
    }
    Ok(Ordinal::finite(cur.natural()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_cases() {
        let a = parse_ordinal("w^2*3 + w*2 + 5").unwrap();
        assert_eq!(a.to_string(), "w^2*3 + w*2 + 5");
        assert_eq!(a.terms().len(), 3);
        let b = parse_ordinal("w^(w+1)").unwrap();
        assert_eq!(b.to_string(), "w^(w + 1)");
        assert_eq!(parse_ordinal("0").unwrap(), Ordinal::zero());
        assert_eq!(parse_ordinal(" ω ^ 2 ").unwrap().to_string(), "w^2");
        assert_eq!(parse_ordinal("w^(3)").unwrap().to_string(), "w^3");
        assert_eq!(parse_ordinal("w^1*1").unwrap().to_string(), "w");
        assert_eq!(parse_ordinal("w^0*4").unwrap().to_string(), "4");
        assert_eq!(parse_ordinal("1 + w").unwrap().to_string(), "w");
        assert_eq!(parse_ordinal("w^w*2").unwrap().to_string(), "w^w*2");
        assert_eq!(parse_ordinal("w^w^2 + 1").unwrap().to_string(), "w^w^2 + 1");
        assert_eq!(parse_ordinal("w^(w*2)").unwrap().to_string(), "w^(w*2)");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_ordinal("w^").unwrap_err();
        assert_eq!(e.position, 2);
        let e = parse_ordinal("w + x").unwrap_err();
        assert_eq!(e.position, 4);
        assert!(parse_ordinal("").is_err());
        assert!(parse_ordinal("w^(w").is_err());
        assert!(parse_ordinal("w w").is_err());
    }
}
