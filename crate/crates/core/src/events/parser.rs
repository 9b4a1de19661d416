// SPDX-License-Identifier: Apache-2.0

//! Text grammar for events and weighted event expressions.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := number | ('E'|'P') '(' disj ')'
//! disj   := conj ('|' conj)*
//! conj   := unit (';' unit)*
//! unit   := '(' disj ')' | lit ('=' lit)*
//! lit    := ['~'] ('A'|'a') party ['^' member] '\''*
//! ```
//!
//! A single literal is an atomic event (`~` selects outcome `-1`); two or
//! more joined by `=` form an equality chain in which `~` bars an observable.

use super::ast::{Event, EventExpr, Observable};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

/// Parses one event, written either as `E(...)` or as its bare body.
pub fn parse_event(text: &str) -> Result<Event> {
    let mut p = Parser::new(text);
    p.skip_ws();
    let e = if p.peek_event_head() {
        p.event_call()?
    } else {
        p.disj()?
    };
    p.finish()?;
    e.validate()?;
    Ok(e)
}

/// Parses a weighted sum of products of event probabilities.
pub fn parse_expr(text: &str) -> Result<EventExpr> {
    let mut p = Parser::new(text);
    let e = p.expr()?;
    p.finish()?;
    e.validate()?;
    Ok(e)
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            src: text.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn finish(&mut self) -> Result<()> {
        if self.peek().is_some() {
            self.err("unexpected trailing input")
        } else {
            Ok(())
        }
    }

    fn peek_event_head(&mut self) -> bool {
        self.skip_ws();
        matches!(self.src.get(self.pos), Some(b'E' | b'P'))
            && self.src[self.pos + 1..]
                .iter()
                .find(|c| !c.is_ascii_whitespace())
                == Some(&b'(')
    }

    fn expr(&mut self) -> Result<EventExpr> {
        let mut out = EventExpr::new();
        let mut sign = if self.eat(b'-') {
            -1.0
        } else {
            self.eat(b'+');
            1.0
        };
        loop {
            let (w, factors) = self.term()?;
            out.push(sign * w, factors);
            if self.eat(b'+') {
                sign = 1.0;
            } else if self.eat(b'-') {
                sign = -1.0;
            } else {
                break;
            }
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(f64, Vec<Event>)> {
        let mut weight = 1.0;
        let mut events = Vec::new();
        let mut divide = false;
        loop {
            if self.peek_event_head() {
                if divide {
                    return self.err("division by an event");
                }
                events.push(self.event_call()?);
            } else {
                let x = self.number()?;
                if divide {
                    if x == 0.0 {
                        return self.err("division by zero");
                    }
                    weight /= x;
                } else {
                    weight *= x;
                }
            }
            if self.eat(b'*') {
                divide = false;
            } else if self.eat(b'/') {
                divide = true;
            } else {
                break;
            }
        }
        Ok((weight, events))
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            let exp_sign = (c == b'-' || c == b'+')
                && self.pos > start
                && matches!(self.src[self.pos - 1], b'e' | b'E');
            if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exp_sign {
                self.pos += 1;
            } else {
                break;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        if text.is_empty() {
            self.pos = start;
            return self.err("expected a number or E(...)");
        }
        text.parse::<f64>().or_else(|_| {
            self.pos = start;
            self.err(format!("invalid number '{text}'"))
        })
    }

    fn event_call(&mut self) -> Result<Event> {
        self.skip_ws();
        self.pos += 1; // 'E' or 'P'
        self.expect(b'(')?;
        let e = self.disj()?;
        self.expect(b')')?;
        Ok(e)
    }

    fn disj(&mut self) -> Result<Event> {
        let mut members = vec![self.conj()?];
        while self.eat(b'|') {
            members.push(self.conj()?);
        }
        Ok(if members.len() == 1 {
            members.pop().expect("one member")
        } else {
            Event::Disjunction(members)
        })
    }

    fn conj(&mut self) -> Result<Event> {
        let mut members = vec![self.unit()?];
        while self.eat(b';') {
            members.push(self.unit()?);
        }
        Ok(if members.len() == 1 {
            members.pop().expect("one member")
        } else {
            Event::Conjunction(members)
        })
    }

    fn unit(&mut self) -> Result<Event> {
        if self.eat(b'(') {
            let e = self.disj()?;
            self.expect(b')')?;
            return Ok(e);
        }
        let mut lits = vec![self.literal()?];
        while self.eat(b'=') {
            lits.push(self.literal()?);
        }
        Ok(if lits.len() == 1 {
            let (obs, bar) = lits[0];
            Event::Atomic {
                obs,
                outcome: if bar { -1 } else { 1 },
            }
        } else {
            Event::EqualityChain(lits)
        })
    }

    fn literal(&mut self) -> Result<(Observable, bool)> {
        let bar = self.eat(b'~');
        match self.peek() {
            Some(b'A' | b'a') => self.pos += 1,
            _ => return self.err("expected an observable such as A1 or a2'"),
        }
        let party = self.digits()?;
        if party == 0 || party > u8::MAX as u32 {
            return self.err("party index must be in 1..=255");
        }
        let mut primes = 0u8;
        let mut member = 0u8;
        loop {
            match self.src.get(self.pos) {
                Some(b'\'') => {
                    primes += 1;
                    self.pos += 1;
                }
                Some(b'^') if member == 0 => {
                    self.pos += 1;
                    let m = self.digits()?;
                    if !(1..=2).contains(&m) {
                        return self.err("doublet member must be 1 or 2");
                    }
                    member = m as u8;
                }
                _ => break,
            }
        }
        if primes > 2 {
            return self.err("at most two primes");
        }
        Ok((
            Observable {
                party: party as u8,
                primes,
                member,
            },
            bar,
        ))
    }

    fn digits(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii")
            .parse()
            .or_else(|_| self.err("index too large"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::events::ast::equality_event;

    fn a(p: u8, k: u8) -> Observable {
        Observable::new(p, k)
    }

    #[test]
    fn parses_chain_with_conjunct() {
        let e = parse_event("E(~A1=A1'=A2; A3)").unwrap();
        let want = Event::Conjunction(vec![
            equality_event(&[a(1, 0), a(1, 1), a(2, 0)], 0b001).unwrap(),
            Event::atomic(a(3, 0), 1),
        ]);
        assert_eq!(e, want);
    }

    #[test]
    fn parses_grouped_disjunction_and_doublets() {
        let e = parse_event("E((~A1=A1'=A2 | A1=A1'=A2'); ~a3')").unwrap();
        match &e {
            Event::Conjunction(m) => {
                assert!(matches!(m[0], Event::Disjunction(_)));
                assert_eq!(m[1], Event::atomic(a(3, 1), -1));
            }
            _ => panic!("{e:?}"),
        }
        let d = parse_event("a1^1 = a1^2 = ~a2").unwrap();
        assert_eq!(
            d,
            Event::EqualityChain(vec![
                (Observable::doublet(1, 0, 1), false),
                (Observable::doublet(1, 0, 2), false),
                (a(2, 0), true)
            ])
        );
        assert_eq!(parse_event("A1^1'").unwrap(), parse_event("A1'^1").unwrap());
    }

    #[test]
    fn parses_weighted_expression() {
        let x = parse_expr("2*E(A1=A2)*E(A3) - E(~A1)/4 + 0.5").unwrap();
        assert_eq!(x.terms.len(), 3);
        assert_eq!(x.terms[0].0, 2.0);
        assert_eq!(x.terms[0].1.len(), 2);
        assert_eq!(x.terms[1].0, -0.25);
        assert!(x.terms[2].1.is_empty());
        assert_eq!(x.degree(), 2);
    }

    #[test]
    fn reports_positions() {
        match parse_event("E(A1 = B2)") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 7),
            other => panic!("{other:?}"),
        }
        assert!(parse_event("E(A1").is_err());
        assert!(parse_event("E(A0)").is_err());
        assert!(parse_event("E(A1''')").is_err());
        assert!(parse_expr("E(A1)/E(A2)").is_err());
        assert!(matches!(
            parse_event("E(A1 | A2)"),
            Err(Error::NonExclusiveDisjunction(_))
        ));
    }

    #[test]
    fn display_reparses() {
        for text in [
            "E(~A1=A1'=A2; A3)",
            "E((~A1=A1'=A2 | A1=A1'=A2'); ~A3')",
            "E(A1^1=A1^2=~A2'; A3)",
        ] {
            let e = parse_event(text).unwrap();
            assert_eq!(parse_event(&e.to_string()).unwrap(), e);
        }
    }
}
