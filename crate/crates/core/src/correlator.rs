// SPDX-License-Identifier: Apache-2.0

//! Symbolic polynomials in local dichotomic observables.
//!
//! A monomial assigns to every party either the identity or one of its
//! observables, indexed by prime count (`0` = unprimed, `1` = primed,
//! `2` = double-primed). The same polynomial is evaluated three ways: as a
//! dense operator, as a quantum expectation through a [`CorrelationSource`],
//! and under a deterministic local assignment of `±1` values.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::qcore::{qubit_operator, tensor_product, ComplexOperator, CorrelationSource};

/// Observable slot of one party inside a monomial.
pub type Slot = Option<u8>;

/// Largest prime count a slot may carry.
pub const MAX_PRIMES: u8 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coeff: f64,
    pub slots: Vec<Slot>,
}

/// A real linear combination of monomials over a fixed number of parties.
/// Terms are kept merged and sorted, so equal polynomials compare equal.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    n_parties: usize,
    terms: BTreeMap<Vec<Slot>, f64>,
}

const DROP_TOL: f64 = 1e-14;

impl Polynomial {
    pub fn zero(n_parties: usize) -> Self {
        Self {
            n_parties,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_parties: usize, c: f64) -> Self {
        let mut p = Self::zero(n_parties);
        p.add_term(vec![None; n_parties], c);
        p
    }

    /// The single observable of `party` (0-based) with `primes` primes.
    pub fn observable(n_parties: usize, party: usize, primes: u8) -> Self {
        assert!(party < n_parties, "party {party} out of range");
        assert!(primes <= MAX_PRIMES, "at most {MAX_PRIMES} primes");
        let mut slots = vec![None; n_parties];
        slots[party] = Some(primes);
        let mut p = Self::zero(n_parties);
        p.add_term(slots, 1.0);
        p
    }

    /// Product of the listed `(party, primes)` observables.
    pub fn product(n_parties: usize, factors: &[(usize, u8)], coeff: f64) -> Self {
        let mut slots = vec![None; n_parties];
        for &(party, primes) in factors {
            assert!(slots[party].is_none(), "party {party} repeated");
            assert!(primes <= MAX_PRIMES);
            slots[party] = Some(primes);
        }
        let mut p = Self::zero(n_parties);
        p.add_term(slots, coeff);
        p
    }

    fn add_term(&mut self, slots: Vec<Slot>, c: f64) {
        match self.terms.entry(slots) {
            Entry::Vacant(v) => {
                if c.abs() >= DROP_TOL {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().abs() < DROP_TOL {
                    o.remove();
                }
            }
        }
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().map(|(s, &c)| Monomial {
            coeff: c,
            slots: s.clone(),
        })
    }

    /// Coefficient of the monomial with the given slots (zero if absent).
    pub fn coefficient(&self, slots: &[Slot]) -> f64 {
        self.terms.get(slots).copied().unwrap_or(0.0)
    }

    pub fn constant_term(&self) -> f64 {
        self.coefficient(&vec![None; self.n_parties])
    }

    /// Number of non-identity factors of every monomial, sorted and deduplicated.
    pub fn body_orders(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .terms
            .keys()
            .map(|s| s.iter().filter(|x| x.is_some()).count())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Highest prime count used by `party`, if any.
    pub fn max_primes(&self, party: usize) -> Option<u8> {
        self.terms.keys().filter_map(|s| s[party]).max()
    }

    /// Distinct `(party, primes)` symbols, party-major.
    pub fn symbols(&self) -> Vec<(usize, u8)> {
        let mut v: Vec<(usize, u8)> = self
            .terms
            .keys()
            .flat_map(|s| {
                s.iter()
                    .enumerate()
                    .filter_map(|(i, x)| x.map(|k| (i, k)))
            })
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = Self::zero(self.n_parties);
        for (k, &c) in &self.terms {
            out.add_term(k.clone(), c * s);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(1.0, other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(-1.0, other)
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, s: f64, other: &Self) -> Self {
        assert_eq!(self.n_parties, other.n_parties, "party count mismatch");
        let mut out = self.clone();
        for (k, &c) in &other.terms {
            out.add_term(k.clone(), s * c);
        }
        out
    }

    /// Product of polynomials. Observables of one party multiply only if
    /// equal (`A² = 1`); two different observables of the same party do not
    /// commute and are rejected.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        assert_eq!(self.n_parties, other.n_parties, "party count mismatch");
        let mut out = Self::zero(self.n_parties);
        for (ka, &ca) in &self.terms {
            for (kb, &cb) in &other.terms {
                let mut slots = Vec::with_capacity(self.n_parties);
                for (party, (&a, &b)) in ka.iter().zip(kb).enumerate() {
                    slots.push(match (a, b) {
                        (None, x) | (x, None) => x,
                        (Some(x), Some(y)) if x == y => None,
                        (Some(_), Some(_)) => {
                            return Err(Error::InvalidParameter(format!(
                                "product of distinct observables on party {}",
                                party + 1
                            )))
                        }
                    });
                }
                out.add_term(slots, ca * cb);
            }
        }
        Ok(out)
    }

    /// Embeds into a register with one extra party appended (as identity).
    pub fn extend(&self) -> Self {
        let mut out = Self::zero(self.n_parties + 1);
        for (k, &c) in &self.terms {
            let mut s = k.clone();
            s.push(None);
            out.add_term(s, c);
        }
        out
    }

    /// Substitutes each observable: `(party, primes) ↦ sign · (party, primes')`.
    pub fn substitute(&self, f: impl Fn(usize, u8) -> (f64, u8)) -> Self {
        let mut out = Self::zero(self.n_parties);
        for (k, &c) in &self.terms {
            let mut coeff = c;
            let slots: Vec<Slot> = k
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    s.map(|p| {
                        let (sign, q) = f(i, p);
                        coeff *= sign;
                        q
                    })
                })
                .collect();
            out.add_term(slots, coeff);
        }
        out
    }

    /// Exchanges unprimed and primed observables on every party.
    pub fn swap_primes(&self) -> Self {
        self.substitute(|_, p| {
            (
                1.0,
                match p {
                    0 => 1,
                    1 => 0,
                    x => x,
                },
            )
        })
    }

    pub fn max_abs_coeff_diff(&self, other: &Self) -> f64 {
        let d = self.sub(other);
        d.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Dense operator with `settings[party][primes]` the Bloch vector of
    /// each observable.
    pub fn to_operator(&self, settings: &[Vec<[f64; 3]>]) -> Result<ComplexOperator> {
        self.check_settings(settings)?;
        let dim = 1usize << self.n_parties;
        let mut out = ComplexOperator::zeros(dim);
        for (k, &c) in &self.terms {
            let factors: Vec<ComplexOperator> = k
                .iter()
                .enumerate()
                .map(|(i, s)| qubit_operator(slot_coefficients(settings, i, *s)))
                .collect();
            out.add_scaled(c, &tensor_product(&factors)?)?;
        }
        Ok(out)
    }

    /// Quantum expectation with the given observables.
    pub fn expectation<S: CorrelationSource + ?Sized>(
        &self,
        source: &S,
        settings: &[Vec<[f64; 3]>],
    ) -> Result<f64> {
        self.check_settings(settings)?;
        if source.n_qubits() != self.n_parties {
            return Err(Error::DimensionMismatch {
                expected: self.n_parties,
                found: source.n_qubits(),
            });
        }
        Ok(self.expectation_unchecked(source, settings))
    }

    /// As [`Polynomial::expectation`], without validation; for inner loops.
    pub fn expectation_unchecked<S: CorrelationSource + ?Sized>(
        &self,
        source: &S,
        settings: &[Vec<[f64; 3]>],
    ) -> f64 {
        let mut factors = vec![[1.0, 0.0, 0.0, 0.0]; self.n_parties];
        let mut acc = 0.0;
        for (k, &c) in &self.terms {
            for (i, s) in k.iter().enumerate() {
                factors[i] = slot_coefficients(settings, i, *s);
            }
            acc += c * source.correlator(&factors);
        }
        acc
    }

    /// Value under the deterministic assignment `values[party][primes] = ±1`.
    pub fn local_value(&self, values: &[Vec<i8>]) -> f64 {
        self.terms
            .iter()
            .map(|(k, &c)| {
                let sign: i32 = k
                    .iter()
                    .enumerate()
                    .map(|(i, s)| s.map_or(1, |p| values[i][p as usize] as i32))
                    .product();
                c * sign as f64
            })
            .sum()
    }

    fn check_settings(&self, settings: &[Vec<[f64; 3]>]) -> Result<()> {
        if settings.len() != self.n_parties {
            return Err(Error::DimensionMismatch {
                expected: self.n_parties,
                found: settings.len(),
            });
        }
        for (party, k) in self.symbols() {
            if settings[party].len() <= k as usize {
                return Err(Error::InvalidParameter(format!(
                    "party {} has no observable with {} primes",
                    party + 1,
                    k
                )));
            }
        }
        Ok(())
    }
}

fn slot_coefficients(settings: &[Vec<[f64; 3]>], party: usize, slot: Slot) -> [f64; 4] {
    match slot {
        None => [1.0, 0.0, 0.0, 0.0],
        Some(p) => {
            let v = settings[party][p as usize];
            [0.0, v[0], v[1], v[2]]
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (k, &c)) in self.terms.iter().enumerate() {
            let sign = if c < 0.0 { "-" } else if idx > 0 { "+" } else { "" };
            let sep = if idx > 0 { " " } else { "" };
            write!(f, "{sep}{sign}")?;
            if idx > 0 {
                write!(f, " ")?;
            }
            let body: String = k
                .iter()
                .enumerate()
                .filter_map(|(i, s)| s.map(|p| format!("A{}{}", i + 1, "'".repeat(p as usize))))
                .collect();
            let mag = c.abs();
            match (body.is_empty(), (mag - 1.0).abs() < 1e-15) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{body}")?,
                (false, false) => write!(f, "{mag}*{body}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{expectation, ghz, CorrelationTensor};

    fn a(n: usize, i: usize) -> Polynomial {
        Polynomial::observable(n, i, 0)
    }

    fn ap(n: usize, i: usize) -> Polynomial {
        Polynomial::observable(n, i, 1)
    }

    #[test]
    fn arithmetic_merges_terms() {
        let p = a(2, 0).add(&a(2, 0)).sub(&ap(2, 1));
        assert_eq!(p.len(), 2);
        assert_eq!(p.coefficient(&[Some(0), None]), 2.0);
        assert!(p.sub(&p).is_empty());
    }

    #[test]
    fn squares_reduce_to_identity() {
        let p = a(1, 0).mul(&a(1, 0)).unwrap();
        assert_eq!(p, Polynomial::constant(1, 1.0));
        assert!(a(1, 0).mul(&ap(1, 0)).is_err());
    }

    #[test]
    fn local_value_of_chsh_is_bounded_by_two() {
        let n = 2;
        let chsh = a(n, 0)
            .mul(&a(n, 1).add(&ap(n, 1)))
            .unwrap()
            .add(&ap(n, 0).mul(&a(n, 1).sub(&ap(n, 1))).unwrap());
        let mut best: f64 = 0.0;
        for bits in 0..16 {
            let v = |b: usize| if bits >> b & 1 == 1 { -1 } else { 1 };
            let vals = vec![vec![v(0), v(1)], vec![v(2), v(3)]];
            best = best.max(chsh.local_value(&vals).abs());
        }
        assert_eq!(best, 2.0);
    }

    #[test]
    fn expectation_agrees_with_dense_operator() {
        let n = 3;
        let p = Polynomial::product(n, &[(0, 0), (1, 1), (2, 0)], 1.5)
            .add(&Polynomial::product(n, &[(0, 1), (2, 1)], -0.5))
            .add(&Polynomial::constant(n, 0.25));
        let s = 1.0 / 2f64.sqrt();
        let settings = vec![
            vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            vec![[s, s, 0.0], [0.0, s, s]],
            vec![[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]],
        ];
        let rho = ghz(3).unwrap();
        let t = CorrelationTensor::from_density(&rho).unwrap();
        let dense = expectation(&p.to_operator(&settings).unwrap(), &rho).unwrap();
        let fast = p.expectation(&t, &settings).unwrap();
        assert!((dense - fast).abs() < 1e-13);
    }

    #[test]
    fn swap_and_substitute() {
        let p = Polynomial::product(2, &[(0, 0), (1, 1)], 1.0);
        assert_eq!(p.swap_primes(), Polynomial::product(2, &[(0, 1), (1, 0)], 1.0));
        let q = p.substitute(|_, k| if k == 1 { (-1.0, 0) } else { (1.0, k) });
        assert_eq!(q, Polynomial::product(2, &[(0, 0), (1, 0)], -1.0));
    }

    #[test]
    fn display_is_readable() {
        let p = Polynomial::product(2, &[(0, 0), (1, 1)], 1.0)
            .add(&Polynomial::product(2, &[(0, 1)], -2.0));
        assert_eq!(p.to_string(), "A1A2' - 2*A1'");
    }
}
