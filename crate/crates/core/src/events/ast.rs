// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A dichotomic observable named symbolically.
///
/// `party` is 1-based. `primes` selects the unprimed, primed or
/// double-primed setting. `member` is `0` for the setting itself and `1` or
/// `2` for the two members of its doublet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Observable {
    pub party: u8,
    pub primes: u8,
    pub member: u8,
}

impl Observable {
    pub const fn new(party: u8, primes: u8) -> Self {
        Self {
            party,
            primes,
            member: 0,
        }
    }

    pub const fn doublet(party: u8, primes: u8, member: u8) -> Self {
        Self {
            party,
            primes,
            member,
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{}", self.party)?;
        if self.member > 0 {
            write!(f, "^{}", self.member)?;
        }
        for _ in 0..self.primes {
            write!(f, "'")?;
        }
        Ok(())
    }
}

/// An event over outcomes of local observables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Event {
    /// `obs` takes `outcome` (`+1` or `-1`).
    Atomic { obs: Observable, outcome: i8 },
    /// All listed observables agree, except barred ones, which take the
    /// opposite value.
    EqualityChain(Vec<(Observable, bool)>),
    /// All members occur.
    Conjunction(Vec<Event>),
    /// Exactly one of mutually exclusive members occurs.
    Disjunction(Vec<Event>),
}

/// One conjunctive term of the disjunctive normal form.
pub type Term = BTreeMap<Observable, i8>;

/// Builds `E(o₁ = o₂ = …)`; bit `k` of `barred` bars the `k`-th observable.
pub fn equality_event(obs: &[Observable], barred: u64) -> Result<Event> {
    if obs.is_empty() {
        return Err(Error::MalformedEvent("empty equality chain".into()));
    }
    if obs.len() > 64 {
        return Err(Error::MalformedEvent("equality chain longer than 64".into()));
    }
    Ok(Event::EqualityChain(
        obs.iter()
            .enumerate()
            .map(|(k, &o)| (o, barred >> k & 1 == 1))
            .collect(),
    ))
}

impl Event {
    pub fn atomic(obs: Observable, outcome: i8) -> Self {
        Event::Atomic { obs, outcome }
    }

    pub fn and(members: Vec<Event>) -> Self {
        Event::Conjunction(members)
    }

    pub fn or(members: Vec<Event>) -> Self {
        Event::Disjunction(members)
    }

    /// Checks outcomes and non-emptiness, and that every disjunction's
    /// members are pairwise exclusive.
    pub fn validate(&self) -> Result<()> {
        self.dnf().map(|_| ())
    }

    /// Disjunctive normal form: a list of pairwise exclusive total
    /// assignments of the observables involved in each term. Contradictory
    /// terms are dropped.
    pub fn dnf(&self) -> Result<Vec<Term>> {
        match self {
            Event::Atomic { obs, outcome } => {
                if *outcome != 1 && *outcome != -1 {
                    return Err(Error::InvalidOutcome(*outcome as i32));
                }
                Ok(vec![Term::from([(*obs, *outcome)])])
            }
            Event::EqualityChain(items) => {
                if items.is_empty() {
                    return Err(Error::MalformedEvent("empty equality chain".into()));
                }
                let mut out = Vec::with_capacity(2);
                for s in [1i8, -1] {
                    let mut t = Term::new();
                    let mut ok = true;
                    for &(o, bar) in items {
                        let v = if bar { -s } else { s };
                        ok &= merge_literal(&mut t, o, v);
                    }
                    if ok {
                        out.push(t);
                    }
                }
                Ok(out)
            }
            Event::Conjunction(members) => {
                if members.is_empty() {
                    return Err(Error::MalformedEvent("empty conjunction".into()));
                }
                let mut acc: Vec<Term> = vec![Term::new()];
                for m in members {
                    let rhs = m.dnf()?;
                    let mut next = Vec::with_capacity(acc.len() * rhs.len());
                    for a in &acc {
                        for b in &rhs {
                            let mut t = a.clone();
                            if b.iter().all(|(&o, &v)| merge_literal(&mut t, o, v)) {
                                next.push(t);
                            }
                        }
                    }
                    acc = next;
                }
                Ok(acc)
            }
            Event::Disjunction(members) => {
                if members.is_empty() {
                    return Err(Error::MalformedEvent("empty disjunction".into()));
                }
                let parts: Vec<Vec<Term>> = members.iter().map(Event::dnf).collect::<Result<_>>()?;
                for i in 0..parts.len() {
                    for j in i + 1..parts.len() {
                        for a in &parts[i] {
                            for b in &parts[j] {
                                if !conflict(a, b) {
                                    return Err(Error::NonExclusiveDisjunction(format!(
                                        "{} and {}",
                                        members[i], members[j]
                                    )));
                                }
                            }
                        }
                    }
                }
                Ok(parts.into_iter().flatten().collect())
            }
        }
    }

    /// Observables mentioned anywhere in the tree, sorted.
    pub fn observables(&self) -> Vec<Observable> {
        let mut v = Vec::new();
        self.collect_observables(&mut v);
        v.sort_unstable();
        v.dedup();
        v
    }

    fn collect_observables(&self, out: &mut Vec<Observable>) {
        match self {
            Event::Atomic { obs, .. } => out.push(*obs),
            Event::EqualityChain(items) => out.extend(items.iter().map(|(o, _)| *o)),
            Event::Conjunction(m) | Event::Disjunction(m) => {
                m.iter().for_each(|e| e.collect_observables(out))
            }
        }
    }

    /// Whether the event occurs under a deterministic assignment.
    pub fn indicator(&self, value: &impl Fn(&Observable) -> i8) -> bool {
        match self {
            Event::Atomic { obs, outcome } => value(obs) == *outcome,
            Event::EqualityChain(items) => {
                let Some(&(o0, b0)) = items.first() else {
                    return false;
                };
                let s = if b0 { -value(&o0) } else { value(&o0) };
                items
                    .iter()
                    .all(|(o, b)| (if *b { -value(o) } else { value(o) }) == s)
            }
            Event::Conjunction(m) => m.iter().all(|e| e.indicator(value)),
            Event::Disjunction(m) => m.iter().any(|e| e.indicator(value)),
        }
    }

    /// Replaces every observable and flips outcomes where `f` says so.
    pub fn map_observables(&self, f: &impl Fn(Observable) -> (Observable, bool)) -> Event {
        match self {
            Event::Atomic { obs, outcome } => {
                let (o, flip) = f(*obs);
                Event::Atomic {
                    obs: o,
                    outcome: if flip { -outcome } else { *outcome },
                }
            }
            Event::EqualityChain(items) => Event::EqualityChain(
                items
                    .iter()
                    .map(|&(o, b)| {
                        let (n, flip) = f(o);
                        (n, b ^ flip)
                    })
                    .collect(),
            ),
            Event::Conjunction(m) => Event::Conjunction(m.iter().map(|e| e.map_observables(f)).collect()),
            Event::Disjunction(m) => Event::Disjunction(m.iter().map(|e| e.map_observables(f)).collect()),
        }
    }
}

fn merge_literal(t: &mut Term, o: Observable, v: i8) -> bool {
    match t.get(&o) {
        Some(&w) => w == v,
        None => {
            t.insert(o, v);
            true
        }
    }
}

fn conflict(a: &Term, b: &Term) -> bool {
    a.iter().any(|(o, v)| b.get(o).is_some_and(|w| w != v))
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E(")?;
        self.fmt_inner(f, 0)?;
        write!(f, ")")
    }
}

impl Event {
    // Precedence: 0 = disjunction, 1 = conjunction, 2 = chain.
    fn fmt_inner(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        match self {
            Event::Atomic { obs, outcome } => {
                let bar = if *outcome < 0 { "~" } else { "" };
                write!(f, "{bar}{obs}")
            }
            Event::EqualityChain(items) => {
                if items.len() == 1 {
                    // A lone chain literal must not read back as an atomic event.
                    let (o, b) = items[0];
                    let bar = if b { "~" } else { "" };
                    return write!(f, "{bar}{o}={bar}{o}");
                }
                for (k, (o, b)) in items.iter().enumerate() {
                    if k > 0 {
                        write!(f, "=")?;
                    }
                    write!(f, "{}{o}", if *b { "~" } else { "" })?;
                }
                Ok(())
            }
            Event::Conjunction(m) => {
                let paren = ctx > 1;
                if paren {
                    write!(f, "(")?;
                }
                for (k, e) in m.iter().enumerate() {
                    if k > 0 {
                        write!(f, "; ")?;
                    }
                    e.fmt_inner(f, 2)?;
                }
                if paren {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Event::Disjunction(m) => {
                let paren = ctx > 0;
                if paren {
                    write!(f, "(")?;
                }
                for (k, e) in m.iter().enumerate() {
                    if k > 0 {
                        write!(f, " | ")?;
                    }
                    e.fmt_inner(f, 1)?;
                }
                if paren {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

/// A weighted sum of products of event probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventExpr {
    pub terms: Vec<(f64, Vec<Event>)>,
}

impl EventExpr {
    pub fn new() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn single(e: Event) -> Self {
        Self {
            terms: vec![(1.0, vec![e])],
        }
    }

    pub fn push(&mut self, weight: f64, factors: Vec<Event>) {
        self.terms.push((weight, factors));
    }

    pub fn extend(&mut self, other: EventExpr) {
        self.terms.extend(other.terms);
    }

    /// Largest number of probabilities multiplied in one term.
    pub fn degree(&self) -> usize {
        self.terms.iter().map(|(_, f)| f.len()).max().unwrap_or(0)
    }

    pub fn observables(&self) -> Vec<Observable> {
        let mut v: Vec<Observable> = self
            .terms
            .iter()
            .flat_map(|(_, f)| f.iter().flat_map(Event::observables))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Value when every probability is replaced by a 0/1 indicator.
    pub fn local_value(&self, value: &impl Fn(&Observable) -> i8) -> f64 {
        self.terms
            .iter()
            .map(|(w, f)| if f.iter().all(|e| e.indicator(value)) { *w } else { 0.0 })
            .sum()
    }

    pub fn validate(&self) -> Result<()> {
        for (_, f) in &self.terms {
            for e in f {
                e.validate()?;
            }
        }
        Ok(())
    }
}

impl Default for EventExpr {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Display for EventExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, factors)) in self.terms.iter().enumerate() {
            let sign = if *w < 0.0 { "-" } else { "+" };
            if k > 0 {
                write!(f, " {sign} ")?;
            } else if *w < 0.0 {
                write!(f, "-")?;
            }
            write!(f, "{}", w.abs())?;
            for e in factors {
                write!(f, "*{e}")?;
            }
        }
        Ok(())
    }
}
