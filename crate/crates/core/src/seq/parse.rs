//! Text grammar for sequence expressions:
//!
//! ```text
//! seq := 'const' '(' val ';' ord ')' | 'cat' '(' seq (',' seq)+ ')'
//!      | 'rep' '(' seq ';' natural ')' | 'repw' '(' seq ')' | 'osc' '(' val ',' val ')'
//! ```
//!
//! Real sequences take rationals as values; label sequences take bare
//! identifiers (or naturals).

use super::{LabelSeq, RealSeq, Seq, Value};
use crate::ordinal::{parse_ordinal_at, ParseError};
use crate::rational::parse_rat_at;
use crate::syntax::Cursor;

type ValueParser<'p, V> = dyn Fn(&mut Cursor<'_>) -> Result<V, ParseError> + 'p;

pub fn parse_real_seq(text: &str) -> Result<RealSeq, ParseError> {
    parse_seq_with(text, &|cur: &mut Cursor<'_>| {
        let save = cur.pos();
        if let Some(id) = cur.ident() {
            return Err(ParseError {
                position: save,
                message: format!(
                    "label '{id}' in a real-valued sequence; apply an indicator or value table first"
                ),
            });
        }
        parse_rat_at(cur)
    })
}

pub fn parse_label_seq(text: &str) -> Result<LabelSeq, ParseError> {
    parse_seq_with(text, &|cur: &mut Cursor<'_>| {
        if let Some(id) = cur.ident() {
            return Ok(id.to_string());
        }
        cur.natural()
            .map(|n| n.to_string())
            .map_err(|_| cur.error("expected a label"))
    })
}

pub(crate) fn parse_seq_with<V: Value>(
    text: &str,
    value: &ValueParser<'_, V>,
) -> Result<Seq<V>, ParseError> {
    let mut cur = Cursor::new(text);
    let s = seq(&mut cur, value)?;
    cur.finish()?;
    Ok(s)
}

fn seq<V: Value>(cur: &mut Cursor<'_>, value: &ValueParser<'_, V>) -> Result<Seq<V>, ParseError> {
    let start = cur.pos();
    let invalid = |e: super::SeqError| ParseError {
        position: start,
        message: e.to_string(),
    };
    if cur.keyword("const") {
        cur.expect('(')?;
        let v = value(cur)?;
        cur.expect(';')?;
        let len = parse_ordinal_at(cur)?;
        cur.expect(')')?;
        Seq::constant(v, len).map_err(invalid)
    } else if cur.keyword("cat") {
        cur.expect('(')?;
        let mut parts = vec![seq(cur, value)?];
        while cur.eat(',') {
            parts.push(seq(cur, value)?);
        }
        cur.expect(')')?;
        Seq::concat(parts).map_err(invalid)
    } else if cur.keyword("rep") {
        cur.expect('(')?;
        let body = seq(cur, value)?;
        cur.expect(';')?;
        let count = cur.natural()?;
        cur.expect(')')?;
        Seq::rep(body, count).map_err(invalid)
    } else if cur.keyword("repw") {
        cur.expect('(')?;
        let body = seq(cur, value)?;
        cur.expect(')')?;
        Ok(Seq::rep_omega(body))
    } else if cur.keyword("osc") {
        cur.expect('(')?;
        let lo = value(cur)?;
        cur.expect(',')?;
        let hi = value(cur)?;
        cur.expect(')')?;
        Ok(Seq::osc(lo, hi))
    } else if cur.at_end() {
        Err(cur.error("expected a sequence expression, found end of input"))
    } else {
        Err(cur.error("expected one of const, cat, rep, repw, osc"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn parses_and_prints_canonically() {
        let s = parse_real_seq("repw( cat(const(0;w), const(1;w)) )").unwrap();
        assert_eq!(s.to_string(), "repw(cat(const(0;w), const(1;w)))");
        let t = parse_real_seq("cat(const(1;3),const(0;w))").unwrap();
        assert_eq!(t.to_string(), "cat(const(1;3), const(0;w))");
        let o = parse_real_seq("osc(-1/2, 3)").unwrap();
        assert_eq!(o, Seq::Osc { lo: rat(-1, 2), hi: int(3) });
        let r = parse_real_seq("rep(const(2;1);3)").unwrap();
        assert_eq!(r.to_string(), "const(2;3)");
        let n = parse_real_seq("cat(cat(const(1;1), osc(0,1)), const(2; w^2))").unwrap();
        assert_eq!(n.to_string(), "cat(const(1;1), osc(0,1), const(2;w^2))");
    }

    #[test]
    fn round_trip() {
        for text in [
            "const(3/2;w^w)",
            "repw(cat(const(0;1), const(1;2)))",
            "cat(osc(0,1), const(5;w))",
            "rep(cat(const(0;w), osc(1,2));3)",
        ] {
            let s = parse_real_seq(text).unwrap();
            assert_eq!(parse_real_seq(&s.to_string()).unwrap(), s);
        }
    }

    #[test]
    fn labels() {
        let s = parse_label_seq("repw(cat(const(a;3), const(b;2), const(c;1)))").unwrap();
        assert_eq!(s.to_string(), "repw(cat(const(a;3), const(b;2), const(c;1)))");
        let err = parse_real_seq("const(a;1)").unwrap_err();
        assert!(err.message.contains("label"));
        assert_eq!(err.position, 6);
    }

    #[test]
    fn errors() {
        assert!(parse_real_seq("const(1;0)").is_err());
        assert!(parse_real_seq("rep(const(1;1);0)").is_err());
        assert!(parse_real_seq("foo(1)").is_err());
        assert!(parse_real_seq("const(1;w").is_err());
        assert!(parse_real_seq("").is_err());
        assert!(parse_real_seq("const(1;1) x").is_err());
    }
}
