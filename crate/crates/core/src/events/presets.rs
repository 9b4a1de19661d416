// SPDX-License-Identifier: Apache-2.0

//! Three-party event sums whose pseudoprobabilities reduce to the
//! Svetlichny polynomial and to the doublet witnesses.

use super::ast::{Event, EventExpr, Observable};

fn lit(o: Observable, bar: bool) -> (Observable, bool) {
    (o, bar)
}

fn a(party: u8, primes: u8) -> Observable {
    Observable::new(party, primes)
}

fn member(party: u8, primes: u8, m: u8) -> Observable {
    Observable::doublet(party, primes, m)
}

fn chain(items: Vec<(Observable, bool)>) -> Event {
    Event::EqualityChain(items)
}

/// Two-party event whose four variants build the Svetlichny event sum.
///
/// With `swap` the roles of primed and unprimed settings are exchanged;
/// with `flip` the outcomes of party 2 are inverted.
pub fn svetlichny_pair_event(swap: bool, flip: bool) -> Event {
    let (u, p) = if swap { (1, 0) } else { (0, 1) };
    Event::Disjunction(vec![
        chain(vec![lit(a(1, u), true), lit(a(1, p), false), lit(a(2, u), flip)]),
        chain(vec![lit(a(1, u), false), lit(a(1, p), false), lit(a(2, p), flip)]),
    ])
}

/// Event sum with pseudoprobability `(4 + <S3>)/4`.
pub fn svetlichny_event_sum() -> EventExpr {
    let third = |primes: u8, outcome: i8| Event::atomic(a(3, primes), outcome);
    let mut x = EventExpr::new();
    x.push(1.0, vec![Event::and(vec![svetlichny_pair_event(false, false), third(1, 1)])]);
    x.push(1.0, vec![Event::and(vec![svetlichny_pair_event(false, true), third(1, -1)])]);
    x.push(1.0, vec![Event::and(vec![svetlichny_pair_event(true, false), third(0, 1)])]);
    x.push(1.0, vec![Event::and(vec![svetlichny_pair_event(true, true), third(0, -1)])]);
    x
}

/// The eight two-party doublet events, indexed from 1.
///
/// Event `k` equates the two doublet members of party 1's unprimed
/// (odd `k`) or primed (even `k`) setting with one setting of party 2.
pub fn doublet_event(k: usize) -> Event {
    assert!((1..=8).contains(&k), "doublet events are numbered 1..=8");
    let primes1 = if k % 2 == 1 { 0 } else { 1 };
    // (party-2 primes, barred)
    let (p2, bar) = match k {
        1 => (0, false),
        2 => (1, false),
        3 => (0, true),
        4 => (1, true),
        5 => (1, false),
        6 => (0, true),
        7 => (1, true),
        8 => (0, false),
        _ => unreachable!(),
    };
    chain(vec![
        lit(member(1, primes1, 1), false),
        lit(member(1, primes1, 2), false),
        lit(a(2, p2), bar),
    ])
}

/// Event sum with pseudoprobability `½c<4c + M3>`, `c = cos(α/2)`.
pub fn doublet_mermin_sum() -> EventExpr {
    let third = |primes: u8, outcome: i8| Event::atomic(a(3, primes), outcome);
    let mut x = EventExpr::new();
    for i in 1..=2 {
        x.push(1.0, vec![Event::and(vec![doublet_event(i), third(1, 1)])]);
        x.push(1.0, vec![Event::and(vec![doublet_event(i + 2), third(1, -1)])]);
        x.push(1.0, vec![Event::and(vec![doublet_event(i + 4), third(0, 1)])]);
        x.push(1.0, vec![Event::and(vec![doublet_event(i + 6), third(0, -1)])]);
    }
    x
}

/// `E(a″_i = a¹″_j = a²″_j)`: the double-primed setting of party `i`
/// agrees with both doublet members of party `j`.
pub fn dprime_pair_event(i: u8, j: u8) -> Event {
    chain(vec![
        lit(a(i, 2), false),
        lit(member(j, 2, 1), false),
        lit(member(j, 2, 2), false),
    ])
}

/// Event sum with pseudoprobability `½c<5c + M3 + ⅓Σ a″a″>`.
pub fn doublet_mermin_dprime_sum() -> EventExpr {
    let mut x = doublet_mermin_sum();
    for (i, j) in [(1, 2), (2, 3), (3, 1)] {
        x.push(1.0 / 3.0, vec![dprime_pair_event(i, j)]);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_well_formed() {
        svetlichny_event_sum().validate().unwrap();
        doublet_mermin_sum().validate().unwrap();
        doublet_mermin_dprime_sum().validate().unwrap();
        assert_eq!(doublet_mermin_sum().terms.len(), 8);
    }

    #[test]
    fn svetlichny_first_event_text() {
        assert_eq!(
            svetlichny_pair_event(false, false).to_string(),
            "E(~A1=A1'=A2 | A1=A1'=A2')"
        );
        assert_eq!(
            svetlichny_pair_event(true, true).to_string(),
            "E(~A1'=A1=~A2' | A1'=A1=~A2)"
        );
    }

    #[test]
    fn doublet_events_text() {
        assert_eq!(doublet_event(1).to_string(), "E(A1^1=A1^2=A2)");
        assert_eq!(doublet_event(6).to_string(), "E(A1^1'=A1^2'=~A2)");
        assert_eq!(doublet_event(8).to_string(), "E(A1^1'=A1^2'=A2)");
    }

    #[test]
    fn deterministic_sums_are_nonnegative() {
        // Local assignments give a count of occurring events; all nonnegative.
        let x = svetlichny_event_sum();
        let obs = x.observables();
        for bits in 0..1u32 << obs.len() {
            let val = |o: &Observable| {
                let k = obs.iter().position(|x| x == o).unwrap();
                if bits >> k & 1 == 1 { -1 } else { 1 }
            };
            assert!(x.local_value(&val) >= 0.0);
        }
    }
}
