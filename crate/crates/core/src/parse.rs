//! Text formats.
//!
//! - signature: `(g;n1,n2,...)`, with `(g;)` for no periods. ASCII
//!   whitespace is allowed around every token.
//! - period list: `n1,n2,...`, possibly empty.
//! - congruence terms: `a1:t1,a2:t2,...`, possibly empty; `a` may be negative.
//!
//! Every error carries the byte offset where parsing stopped.

use crate::congruence::Term;
use crate::fuchsian::FuchsianSignature;
use crate::{ParseError, Result};

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let rest = self.rest();
        self.pos += rest.len()
            - rest
                .trim_start_matches(|c: char| c.is_ascii_whitespace())
                .len();
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.rest().bytes().next()
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, byte: u8) -> Result<(), ParseError> {
        if self.eat(byte) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", byte as char)))
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.pos, message)
    }

    fn unsigned(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.error("expected a nonnegative integer"));
        }
        self.pos += digits;
        self.text[start..self.pos]
            .parse()
            .map_err(|_| ParseError::new(start, "integer does not fit in 64 bits"))
    }

    fn signed(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let negative = self.eat(b'-');
        if !negative {
            self.eat(b'+');
        }
        let magnitude = self.unsigned()?;
        let value = if negative {
            0i64.checked_sub_unsigned(magnitude)
        } else {
            i64::try_from(magnitude).ok()
        };
        value.ok_or_else(|| ParseError::new(start, "integer does not fit in a signed 64-bit value"))
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.pos != self.text.len() {
            return Err(self.error("unexpected trailing input"));
        }
        Ok(())
    }

    /// Comma-separated items up to (not including) `end`, or to end of
    /// input when `end` is `None`. Empty lists are allowed.
    fn list<T>(
        &mut self,
        end: Option<u8>,
        mut item: impl FnMut(&mut Self) -> Result<T, ParseError>,
    ) -> Result<Vec<T>, ParseError> {
        let mut out = Vec::new();
        if self.peek() == end {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if !self.eat(b',') {
                return Ok(out);
            }
        }
    }
}

fn with_periods(genus: u64, periods: Vec<u64>, genus_pos: usize) -> Result<FuchsianSignature> {
    let genus = u32::try_from(genus)
        .map_err(|_| ParseError::new(genus_pos, "genus does not fit in 32 bits"))?;
    FuchsianSignature::new(genus, periods)
}

/// Parses `(g;n1,...,nk)` into a validated, period-sorted signature.
pub fn parse_signature(text: &str) -> Result<FuchsianSignature> {
    let mut cur = Cursor::new(text);
    cur.expect(b'(')?;
    cur.skip_ws();
    let genus_pos = cur.pos;
    let genus = cur.unsigned()?;
    cur.expect(b';')?;
    let periods = cur.list(Some(b')'), Cursor::unsigned)?;
    cur.expect(b')')?;
    cur.finish()?;
    with_periods(genus, periods, genus_pos)
}

/// Parses `n1,n2,...` (possibly empty) as raw integers.
pub fn parse_period_list(text: &str) -> Result<Vec<u64>> {
    let mut cur = Cursor::new(text);
    let periods = cur.list(None, Cursor::unsigned)?;
    cur.finish()?;
    Ok(periods)
}

/// Builds a signature from the `--genus` / `--periods` flag pair.
pub fn signature_from_parts(genus: u32, periods: &str) -> Result<FuchsianSignature> {
    FuchsianSignature::new(genus, parse_period_list(periods)?)
}

/// Parses `a1:t1,a2:t2,...` (possibly empty).
pub fn parse_terms(text: &str) -> Result<Vec<Term>> {
    let mut cur = Cursor::new(text);
    let terms = cur.list(None, |c| {
        let a = c.signed()?;
        c.expect(b':')?;
        let t = c.unsigned()?;
        Ok(Term::new(a, t))
    })?;
    cur.finish()?;
    Ok(terms)
}

/// Renders terms back into the `a:t,...` form.
pub fn format_terms(terms: &[Term]) -> String {
    terms
        .iter()
        .map(|t| format!("{}:{}", t.coefficient, t.gcd_target))
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;
    use proptest::prelude::*;

    #[test]
    fn signature_examples() {
        let s = parse_signature("(1;2,3,4)").unwrap();
        assert_eq!((s.genus(), s.periods()), (1, &[2u64, 3, 4][..]));
        let s = parse_signature("(2;36,500,125,9)").unwrap();
        assert_eq!(s.periods(), &[9, 36, 125, 500]);
        let s = parse_signature("(1;)").unwrap();
        assert!(s.is_empty());
        assert_eq!(s.period_lcm(), 1);
        let s = parse_signature("  ( 0 ; 2 , 3 ,7 )  ").unwrap();
        assert_eq!(s.to_string(), "(0;2,3,7)");
    }

    #[test]
    fn signature_errors_carry_positions() {
        let cases = [
            ("", 0),
            ("1;2)", 0),
            ("(;2)", 1),
            ("(1,2)", 2),
            ("(1;2,)", 5),
            ("(1;2,3", 6),
            ("(1;2)x", 5),
            ("(1;-2)", 3),
            ("(1;99999999999999999999)", 3),
        ];
        for (text, pos) in cases {
            match parse_signature(text) {
                Err(Error::Parse(e)) => assert_eq!(e.position, pos, "{text:?}: {e}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
        assert!(matches!(parse_signature("(1;2,1)"), Err(Error::Domain(_))));
        assert!(matches!(
            parse_signature("(5000000000;2)"),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn period_lists() {
        assert_eq!(parse_period_list("").unwrap(), Vec::<u64>::new());
        assert_eq!(
            parse_period_list("36, 500,125,9").unwrap(),
            vec![36, 500, 125, 9]
        );
        assert!(parse_period_list("2,,3").is_err());
        let s = signature_from_parts(2, "36,500,125,9").unwrap();
        assert_eq!(s, parse_signature("(2;36,500,125,9)").unwrap());
    }

    #[test]
    fn term_lists() {
        assert_eq!(
            parse_terms("1:6, -2:4,+3:3").unwrap(),
            vec![Term::new(1, 6), Term::new(-2, 4), Term::new(3, 3)]
        );
        assert!(parse_terms("").unwrap().is_empty());
        assert_eq!(
            parse_terms(&format!("-{}:1", 1u64 << 63)).unwrap(),
            vec![Term::new(i64::MIN, 1)]
        );
        assert!(parse_terms("1:").is_err());
        assert!(parse_terms("1-3").is_err());
        assert!(parse_terms(&format!("{}:1", 1u64 << 63)).is_err());
    }

    proptest! {
        #[test]
        fn signature_display_round_trips(g in 0u32..1000, periods in prop::collection::vec(2u64..10_000, 0..6)) {
            let s = FuchsianSignature::new(g, periods).unwrap();
            prop_assert_eq!(parse_signature(&s.to_string()).unwrap(), s);
        }

        #[test]
        fn terms_round_trip(raw in prop::collection::vec((any::<i64>(), 1u64..u64::MAX), 0..6)) {
            let terms: Vec<Term> = raw.into_iter().map(|(a, t)| Term::new(a, t)).collect();
            prop_assert_eq!(parse_terms(&format_terms(&terms)).unwrap(), terms);
        }

        #[test]
        fn parsers_never_panic(text in "\\PC{0,40}") {
            let _ = parse_signature(&text);
            let _ = parse_terms(&text);
            let _ = parse_period_list(&text);
        }
    }
}
