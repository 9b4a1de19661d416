// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::correlator::Polynomial;
use crate::error::{Error, Result};
use crate::qcore::{pauli_from_direction, ComplexOperator, Direction};

/// Largest party count for which dense operators are built.
pub const MAX_DENSE_PARTIES: usize = 10;

/// Largest register for symbolic polynomials, whose term count grows as `2^N`.
pub const MAX_SYMBOLIC_PARTIES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonlocalityKind {
    Svetlichny,
    SvetlichnyPrimed,
    Mermin,
    MerminPrimed,
    Dda,
}

impl NonlocalityKind {
    pub const ALL: [NonlocalityKind; 5] = [
        NonlocalityKind::Svetlichny,
        NonlocalityKind::SvetlichnyPrimed,
        NonlocalityKind::Mermin,
        NonlocalityKind::MerminPrimed,
        NonlocalityKind::Dda,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            NonlocalityKind::Svetlichny => "svetlichny",
            NonlocalityKind::SvetlichnyPrimed => "svetlichny_primed",
            NonlocalityKind::Mermin => "mermin",
            NonlocalityKind::MerminPrimed => "mermin_primed",
            NonlocalityKind::Dda => "dda",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown inequality '{s}'")))
    }

    pub fn min_parties(&self) -> usize {
        match self {
            NonlocalityKind::Mermin | NonlocalityKind::MerminPrimed => 2,
            _ => 3,
        }
    }

    /// Local bound on `|<P>|`.
    pub fn classical_bound(&self, n: usize) -> f64 {
        match self {
            NonlocalityKind::Svetlichny | NonlocalityKind::SvetlichnyPrimed => {
                2f64.powi(n as i32 - 1)
            }
            NonlocalityKind::Mermin | NonlocalityKind::MerminPrimed => mermin_bound(n),
            NonlocalityKind::Dda => 2.0,
        }
    }

    /// The symbolic polynomial on `n` parties.
    pub fn polynomial(&self, n: usize) -> Result<Polynomial> {
        if n < self.min_parties() {
            return Err(Error::InvalidParameter(format!(
                "{} needs at least {} parties, got {n}",
                self.name(),
                self.min_parties()
            )));
        }
        if n > MAX_SYMBOLIC_PARTIES {
            return Err(Error::CapExceeded {
                what: "parties",
                requested: n,
                cap: MAX_SYMBOLIC_PARTIES,
            });
        }
        Ok(match self {
            NonlocalityKind::Mermin => mermin_pair(n).0,
            NonlocalityKind::MerminPrimed => mermin_pair(n).1,
            NonlocalityKind::Svetlichny => svetlichny_polynomial(n),
            NonlocalityKind::SvetlichnyPrimed => svetlichny_polynomial(n).swap_primes(),
            NonlocalityKind::Dda => dda_polynomial(n),
        })
    }
}

/// `2^{N/2}` for even `N`, `2^{(N-1)/2}` for odd `N`.
pub fn mermin_bound(n: usize) -> f64 {
    2f64.powi((n / 2) as i32)
}

fn obs(n: usize, party: usize, primes: u8) -> Polynomial {
    Polynomial::observable(n, party, primes)
}

fn times(p: &Polynomial, q: &Polynomial) -> Polynomial {
    p.mul(q).expect("factors act on distinct parties")
}

/// `(M_N, M'_N)` from `M_2 = A1A2 + A1'A2'`, `M'_2 = A1A2' - A1'A2` and
/// `M_N = M_{N-1}A_N' + M'_{N-1}A_N`, `M'_N = -M_{N-1}A_N + M'_{N-1}A_N'`.
pub fn mermin_pair(n: usize) -> (Polynomial, Polynomial) {
    assert!(n >= 2);
    let a = |i| obs(2, i, 0);
    let ap = |i| obs(2, i, 1);
    let mut m = times(&a(0), &a(1)).add(&times(&ap(0), &ap(1)));
    let mut mp = times(&a(0), &ap(1)).sub(&times(&ap(0), &a(1)));
    for k in 3..=n {
        let (me, mpe) = (m.extend(), mp.extend());
        let last = obs(k, k - 1, 0);
        let last_p = obs(k, k - 1, 1);
        let next = times(&me, &last_p).add(&times(&mpe, &last));
        let next_p = times(&mpe, &last_p).sub(&times(&me, &last));
        m = next;
        mp = next_p;
    }
    (m, mp)
}

/// Three-party Svetlichny polynomial
/// `{(-A1+A1')A2 + (A1+A1')A2'}A3' + {(A1+A1')A2 + (A1-A1')A2'}A3`.
pub fn svetlichny3() -> Polynomial {
    let n = 3;
    let a = |i| obs(n, i, 0);
    let ap = |i| obs(n, i, 1);
    let first = times(&ap(0).sub(&a(0)), &a(1)).add(&times(&a(0).add(&ap(0)), &ap(1)));
    let second = times(&a(0).add(&ap(0)), &a(1)).add(&times(&a(0).sub(&ap(0)), &ap(1)));
    times(&first, &ap(2)).add(&times(&second, &a(2)))
}

/// `S_N = S_{N-1}A_N' + S'_{N-1}A_N` from the three-party base, with `S'`
/// obtained by exchanging primed and unprimed settings.
pub fn svetlichny_polynomial(n: usize) -> Polynomial {
    assert!(n >= 3);
    let mut s = svetlichny3();
    for k in 4..=n {
        let sp = s.swap_primes().extend();
        let se = s.extend();
        s = times(&se, &obs(k, k - 1, 1)).add(&times(&sp, &obs(k, k - 1, 0)));
    }
    s
}

/// Even `N`: `(A1+A1')A2⋯AN + (A1-A1')A2'⋯AN'`.
/// Odd `N`: `(A1+A1')A2⋯AN + (A1-A1')A2'⋯A'_{N-1}`.
pub fn dda_polynomial(n: usize) -> Polynomial {
    assert!(n >= 3);
    let head_plus = obs(n, 0, 0).add(&obs(n, 0, 1));
    let head_minus = obs(n, 0, 0).sub(&obs(n, 0, 1));
    let tail_unprimed: Vec<(usize, u8)> = (1..n).map(|i| (i, 0)).collect();
    let primed_len = if n.is_multiple_of(2) { n } else { n - 1 };
    let tail_primed: Vec<(usize, u8)> = (1..primed_len).map(|i| (i, 1)).collect();
    times(&head_plus, &Polynomial::product(n, &tail_unprimed, 1.0))
        .add(&times(&head_minus, &Polynomial::product(n, &tail_primed, 1.0)))
}

/// Unprimed and primed settings of one party.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservablePair {
    pub a: Direction,
    pub a_prime: Direction,
}

impl ObservablePair {
    pub fn new(a: Direction, a_prime: Direction) -> Self {
        Self { a, a_prime }
    }

    pub fn settings(pairs: &[ObservablePair]) -> Vec<Vec<[f64; 3]>> {
        pairs
            .iter()
            .map(|p| vec![p.a.components(), p.a_prime.components()])
            .collect()
    }

    /// Default settings: `(x, y)` on every party except the last, `(y, x)`.
    pub fn canonical(n: usize) -> Vec<ObservablePair> {
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    ObservablePair::new(Direction::y(), Direction::x())
                } else {
                    ObservablePair::new(Direction::x(), Direction::y())
                }
            })
            .collect()
    }
}

/// A nonlocality polynomial bound to concrete observables.
#[derive(Debug, Clone, PartialEq)]
pub struct NonlocalityPolynomial {
    pub kind: NonlocalityKind,
    pub n: usize,
    pub polynomial: Polynomial,
    pub classical_bound: f64,
    pub observables: Vec<ObservablePair>,
    pub op: ComplexOperator,
}

impl NonlocalityPolynomial {
    pub fn new(kind: NonlocalityKind, observables: &[ObservablePair]) -> Result<Self> {
        let n = observables.len();
        let polynomial = kind.polynomial(n)?;
        if n > MAX_DENSE_PARTIES {
            return Err(Error::CapExceeded {
                what: "parties for a dense operator",
                requested: n,
                cap: MAX_DENSE_PARTIES,
            });
        }
        let op = polynomial.to_operator(&ObservablePair::settings(observables))?;
        Ok(Self {
            kind,
            n,
            polynomial,
            classical_bound: kind.classical_bound(n),
            observables: observables.to_vec(),
            op,
        })
    }
}

pub fn mermin(observables: &[ObservablePair]) -> Result<NonlocalityPolynomial> {
    NonlocalityPolynomial::new(NonlocalityKind::Mermin, observables)
}

pub fn svetlichny(observables: &[ObservablePair]) -> Result<NonlocalityPolynomial> {
    NonlocalityPolynomial::new(NonlocalityKind::Svetlichny, observables)
}

pub fn dda(observables: &[ObservablePair]) -> Result<NonlocalityPolynomial> {
    NonlocalityPolynomial::new(NonlocalityKind::Dda, observables)
}

/// Mermin operator built by the recursion directly on dense matrices.
pub fn mermin_operator_recursive(observables: &[ObservablePair]) -> Result<ComplexOperator> {
    let (m, _) = mermin_operator_pair(observables)?;
    Ok(m)
}

fn mermin_operator_pair(observables: &[ObservablePair]) -> Result<(ComplexOperator, ComplexOperator)> {
    let n = observables.len();
    if n < 2 {
        return Err(Error::InvalidParameter(format!("Mermin needs N >= 2, got {n}")));
    }
    let a: Vec<ComplexOperator> = observables.iter().map(|p| pauli_from_direction(&p.a)).collect();
    let ap: Vec<ComplexOperator> = observables
        .iter()
        .map(|p| pauli_from_direction(&p.a_prime))
        .collect();
    let mut m = &a[0].kron(&a[1]) + &ap[0].kron(&ap[1]);
    let mut mp = &a[0].kron(&ap[1]) - &ap[0].kron(&a[1]);
    for k in 2..n {
        let next = &m.kron(&ap[k]) + &mp.kron(&a[k]);
        let next_p = &mp.kron(&ap[k]) - &m.kron(&a[k]);
        m = next;
        mp = next_p;
    }
    Ok((m, mp))
}

/// Svetlichny operator by the recursion on dense matrices, with `S'`
/// built from the exchanged settings.
pub fn svetlichny_operator_recursive(observables: &[ObservablePair]) -> Result<ComplexOperator> {
    let n = observables.len();
    if n < 3 {
        return Err(Error::InvalidParameter(format!("Svetlichny needs N >= 3, got {n}")));
    }
    let swapped: Vec<ObservablePair> = observables
        .iter()
        .map(|p| ObservablePair::new(p.a_prime, p.a))
        .collect();
    let base = |obs: &[ObservablePair]| -> Result<ComplexOperator> {
        svetlichny3().to_operator(&ObservablePair::settings(&obs[..3]))
    };
    let mut s = base(observables)?;
    let mut sp = base(&swapped)?;
    // From four parties on, S and S' coincide.
    for pair in &observables[3..] {
        let a = pauli_from_direction(&pair.a);
        let ap = pauli_from_direction(&pair.a_prime);
        s = &s.kron(&ap) + &sp.kron(&a);
        sp = s.clone();
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlator::Slot;
    use crate::qcore::pauli_from_direction as sigma;
    use crate::qcore::tensor_product;

    fn random_pairs(n: usize, seed: u64) -> Vec<ObservablePair> {
        let mut rng = crate::qcore::sampling::stream_rng(seed, 0);
        (0..n)
            .map(|_| {
                ObservablePair::new(
                    crate::qcore::sampling::random_direction(&mut rng),
                    crate::qcore::sampling::random_direction(&mut rng),
                )
            })
            .collect()
    }

    #[test]
    fn mermin3_matches_explicit_form() {
        let obs = random_pairs(3, 1);
        let a: Vec<_> = obs.iter().map(|p| sigma(&p.a)).collect();
        let ap: Vec<_> = obs.iter().map(|p| sigma(&p.a_prime)).collect();
        let t = |x: &ComplexOperator, y: &ComplexOperator, z: &ComplexOperator| {
            tensor_product(&[x.clone(), y.clone(), z.clone()]).unwrap()
        };
        // (A1A2 + A1'A2')A3' + (A1A2' - A1'A2)A3
        let explicit = &(&(&t(&a[0], &a[1], &ap[2]) + &t(&ap[0], &ap[1], &ap[2])) + &t(&a[0], &ap[1], &a[2]))
            - &t(&ap[0], &a[1], &a[2]);
        let rec = mermin_operator_recursive(&obs).unwrap();
        assert!(rec.max_abs_diff(&explicit) < 1e-12);
        let sym = mermin(&obs).unwrap();
        assert!(sym.op.max_abs_diff(&explicit) < 1e-12);
    }

    #[test]
    fn mermin_prime_is_substitution_on_last_party() {
        for n in 2..=5 {
            let (m, mp) = mermin_pair(n);
            let sub = m.substitute(|party, k| {
                if party == n - 1 {
                    if k == 0 { (1.0, 1) } else { (-1.0, 0) }
                } else {
                    (1.0, k)
                }
            });
            assert_eq!(sub.max_abs_coeff_diff(&mp), 0.0, "N={n}");
        }
    }

    #[test]
    fn svetlichny3_is_self_primed() {
        assert_eq!(svetlichny3().swap_primes(), svetlichny3());
        assert_eq!(svetlichny3().len(), 8);
    }

    #[test]
    fn svetlichny_recursion_dense_vs_symbolic() {
        for n in 3..=5 {
            let obs = random_pairs(n, n as u64);
            let dense = svetlichny_operator_recursive(&obs).unwrap();
            let sym = svetlichny(&obs).unwrap();
            assert!(dense.max_abs_diff(&sym.op) < 1e-12, "N={n}");
        }
    }

    #[test]
    fn swapping_settings_maps_s_to_s_prime() {
        for n in 3..=5 {
            let obs = random_pairs(n, 10 + n as u64);
            let swapped: Vec<_> = obs.iter().map(|p| ObservablePair::new(p.a_prime, p.a)).collect();
            let s_swapped = NonlocalityPolynomial::new(NonlocalityKind::Svetlichny, &swapped).unwrap();
            let sp = NonlocalityPolynomial::new(NonlocalityKind::SvetlichnyPrimed, &obs).unwrap();
            assert!(s_swapped.op.max_abs_diff(&sp.op) < 1e-12);
        }
    }

    #[test]
    fn dda_structure() {
        let p4 = dda_polynomial(4);
        assert_eq!(p4.body_orders(), vec![4]);
        let p3 = dda_polynomial(3);
        assert_eq!(p3.body_orders(), vec![2, 3]);
        let p5 = dda_polynomial(5);
        assert_eq!(p5.body_orders(), vec![4, 5]);
        let slots: Vec<Slot> = vec![Some(1), Some(1), None];
        assert_eq!(p3.coefficient(&slots), -1.0);
    }

    #[test]
    fn bell_pair_mermin2_vanishes() {
        let obs = vec![ObservablePair::new(Direction::x(), Direction::y()); 2];
        let m = mermin(&obs).unwrap();
        let rho = crate::qcore::ghz(2).unwrap();
        let v = crate::qcore::expectation(&m.op, &rho).unwrap();
        assert!(v.abs() < 1e-14);
    }

    #[test]
    fn bounds_and_parties() {
        assert_eq!(mermin_bound(3), 2.0);
        assert_eq!(mermin_bound(4), 4.0);
        assert_eq!(mermin_bound(5), 4.0);
        assert_eq!(NonlocalityKind::Svetlichny.classical_bound(4), 8.0);
        assert!(NonlocalityKind::Svetlichny.polynomial(2).is_err());
        assert!(NonlocalityKind::Mermin.polynomial(1).is_err());
        assert_eq!(NonlocalityKind::parse("Mermin").unwrap(), NonlocalityKind::Mermin);
    }
}
