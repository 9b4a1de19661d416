// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use super::ast::{Event, EventExpr, Observable, Term};
use crate::error::{Error, Result};
use crate::pseudo::{symmetrized_qubit_coefficients, PseudoProjection, MAX_SYMMETRIZED};
use crate::qcore::{
    expectation, qubit_operator, tensor_product, ComplexOperator, CorrelationSource,
    DensityOperator, Direction,
};

/// Assigns a Bloch direction to every symbolic observable.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Binding {
    dirs: BTreeMap<Observable, [f64; 3]>,
}

impl Binding {
    pub fn new() -> Self {
        Self::default()
    }

    /// `settings[party][primes]` bound to the non-doublet observables.
    pub fn from_settings(settings: &[Vec<[f64; 3]>]) -> Self {
        let mut b = Self::new();
        for (i, per) in settings.iter().enumerate() {
            for (k, v) in per.iter().enumerate() {
                b.dirs.insert(Observable::new(i as u8 + 1, k as u8), *v);
            }
        }
        b
    }

    pub fn insert(&mut self, obs: Observable, dir: &Direction) {
        self.dirs.insert(obs, dir.components());
    }

    pub fn get(&self, obs: &Observable) -> Result<[f64; 3]> {
        self.dirs
            .get(obs)
            .copied()
            .ok_or_else(|| Error::MalformedEvent(format!("no direction bound to {obs}")))
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }
}

/// An event together with its compiled pseudoprojection.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledEvent {
    pub pp: PseudoProjection,
    pub event: Event,
}

/// Per-party Pauli coefficients of every DNF term of `event`.
fn term_factors(event: &Event, binding: &Binding, n_parties: usize) -> Result<Vec<Vec<[f64; 4]>>> {
    let terms = event.dnf()?;
    terms
        .iter()
        .map(|t| local_factors(t, binding, n_parties))
        .collect()
}

fn local_factors(term: &Term, binding: &Binding, n_parties: usize) -> Result<Vec<[f64; 4]>> {
    let mut dirs: Vec<Vec<[f64; 3]>> = vec![Vec::new(); n_parties];
    let mut signs: Vec<Vec<f64>> = vec![Vec::new(); n_parties];
    for (obs, &v) in term {
        let p = obs.party as usize;
        if p == 0 || p > n_parties {
            return Err(Error::MalformedEvent(format!(
                "{obs} addresses party {p} of a {n_parties}-party register"
            )));
        }
        dirs[p - 1].push(binding.get(obs)?);
        signs[p - 1].push(v as f64);
    }
    dirs.iter()
        .zip(&signs)
        .map(|(d, s)| {
            if d.len() > MAX_SYMMETRIZED {
                return Err(Error::CapExceeded {
                    what: "observables of one party in an event term",
                    requested: d.len(),
                    cap: MAX_SYMMETRIZED,
                });
            }
            Ok(symmetrized_qubit_coefficients(d, s))
        })
        .collect()
}

/// Compiles an event into its pseudoprojection on `n_parties` qubits.
///
/// Each DNF term becomes the tensor product over parties of the symmetrized
/// product of that party's projections; exclusive alternatives add.
pub fn compile_event(event: &Event, binding: &Binding, n_parties: usize) -> Result<CompiledEvent> {
    let op = compile_operator(event, binding, n_parties)?;
    Ok(CompiledEvent {
        pp: PseudoProjection::from_operator(op)?,
        event: event.clone(),
    })
}

fn compile_operator(event: &Event, binding: &Binding, n_parties: usize) -> Result<ComplexOperator> {
    if n_parties == 0 {
        return Err(Error::Empty("parties"));
    }
    let mut op = ComplexOperator::zeros(1 << n_parties);
    for factors in term_factors(event, binding, n_parties)? {
        let ops: Vec<ComplexOperator> = factors.into_iter().map(qubit_operator).collect();
        op.add_scaled(1.0, &tensor_product(&ops)?)?;
    }
    Ok(op)
}

/// `Tr(Π_E ρ)` with `Π_E` the compiled pseudoprojection.
pub fn event_pseudoprobability(event: &Event, binding: &Binding, rho: &DensityOperator) -> Result<f64> {
    let n = rho
        .n_qubits()
        .ok_or_else(|| Error::InvalidParameter("state is not a qubit register".into()))?;
    expectation(&compile_operator(event, binding, n)?, rho)
}

/// The same pseudoprobability evaluated through correlators, without
/// building the dense operator.
pub fn event_pseudoprobability_fast<S: CorrelationSource + ?Sized>(
    event: &Event,
    binding: &Binding,
    source: &S,
) -> Result<f64> {
    let n = source.n_qubits();
    Ok(term_factors(event, binding, n)?
        .iter()
        .map(|f| source.correlator(f))
        .sum())
}

/// Compiles events with a fixed binding and register size, memoizing the
/// operators by event structure. Safe to share across threads.
#[derive(Debug)]
pub struct EventCompiler {
    binding: Binding,
    n_parties: usize,
    cache: Mutex<HashMap<Event, ComplexOperator>>,
}

impl EventCompiler {
    pub fn new(binding: Binding, n_parties: usize) -> Self {
        Self {
            binding,
            n_parties,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn binding(&self) -> &Binding {
        &self.binding
    }

    pub fn operator(&self, event: &Event) -> Result<ComplexOperator> {
        if let Some(op) = self.cache.lock().expect("cache lock").get(event) {
            return Ok(op.clone());
        }
        let op = compile_operator(event, &self.binding, self.n_parties)?;
        self.cache
            .lock()
            .expect("cache lock")
            .insert(event.clone(), op.clone());
        Ok(op)
    }

    pub fn compile(&self, event: &Event) -> Result<CompiledEvent> {
        Ok(CompiledEvent {
            pp: PseudoProjection::from_operator(self.operator(event)?)?,
            event: event.clone(),
        })
    }

    pub fn cached(&self) -> usize {
        self.cache.lock().expect("cache lock").len()
    }

    /// Operator of a linear expression (every term has at most one event).
    pub fn linear_operator(&self, expr: &EventExpr) -> Result<PseudoProjection> {
        let dim = 1usize << self.n_parties;
        let mut op = ComplexOperator::zeros(dim);
        for (w, factors) in &expr.terms {
            match factors.as_slice() {
                [] => op.add_scaled(*w, &ComplexOperator::identity(dim))?,
                [e] => op.add_scaled(*w, &self.operator(e)?)?,
                _ => {
                    return Err(Error::InvalidParameter(
                        "products of probabilities have no operator form".into(),
                    ))
                }
            }
        }
        PseudoProjection::from_operator(op)
    }

    /// Value of an expression on a state; products of probabilities are
    /// evaluated as products of pseudoprobabilities.
    pub fn expr_value(&self, expr: &EventExpr, rho: &DensityOperator) -> Result<f64> {
        let mut total = 0.0;
        for (w, factors) in &expr.terms {
            let mut v = *w;
            for e in factors {
                v *= expectation(&self.operator(e)?, rho)?;
            }
            total += v;
        }
        Ok(total)
    }
}

/// Correlator-based value of an expression.
pub fn expr_value_fast<S: CorrelationSource + ?Sized>(
    expr: &EventExpr,
    binding: &Binding,
    source: &S,
) -> Result<f64> {
    let mut total = 0.0;
    for (w, factors) in &expr.terms {
        let mut v = *w;
        for e in factors {
            v *= event_pseudoprobability_fast(e, binding, source)?;
        }
        total += v;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::events::parser::parse_event;
    use crate::pseudo::{projection, symmetrized_pseudoprojection};
    use crate::qcore::{ghz, CorrelationTensor};

    fn pauli_binding() -> Binding {
        Binding::from_settings(&[
            vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            vec![[0.0, 1.0, 0.0], [1.0, 0.0, 0.0]],
        ])
    }

    #[test]
    fn atomic_event_is_projection() {
        let b = Binding::from_settings(&[vec![[0.0, 0.0, 1.0]]]);
        let c = compile_event(&parse_event("E(A1)").unwrap(), &b, 1).unwrap();
        assert!(c.pp.operator().approx_eq(&ComplexOperator::diagonal(&[1.0, 0.0]), 0.0));
        let both = compile_event(&parse_event("E(A1 | ~A1)").unwrap(), &b, 1).unwrap();
        assert!(both.pp.operator().approx_eq(&ComplexOperator::identity(2), 0.0));
    }

    #[test]
    fn equal_pair_on_one_qubit() {
        // E(A = A') = ½{π_A+, π_A'+} + ½{π_A-, π_A'-}
        let a = Direction::x();
        let ap = Direction::normalized([0.3, 0.4, 0.5]).unwrap();
        let b = Binding::from_settings(&[vec![a.components(), ap.components()]]);
        let got = compile_event(&parse_event("E(A1=A1')").unwrap(), &b, 1).unwrap();
        let mut want = ComplexOperator::zeros(2);
        for s in [1, -1] {
            let p = symmetrized_pseudoprojection(&[projection(&a, s).unwrap(), projection(&ap, s).unwrap()]).unwrap();
            want.add_scaled(1.0, p.operator()).unwrap();
        }
        assert!(got.pp.operator().approx_eq(&want, 1e-15));
        // A chain of one observable with itself is certain.
        let same = compile_event(&parse_event("E(A1=A1)").unwrap(), &b, 1).unwrap();
        assert!(same.pp.operator().approx_eq(&ComplexOperator::identity(2), 1e-15));
    }

    #[test]
    fn two_party_alpha_event_on_mixed_state_is_half() {
        let b = pauli_binding();
        let e = parse_event("E(~A1=A1'=A2 | A1=A1'=A2')").unwrap();
        let v = event_pseudoprobability(&e, &b, &DensityOperator::maximally_mixed(2)).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn fast_path_matches_dense() {
        let b = pauli_binding();
        let e = parse_event("E((~A1=A1'=A2 | A1=A1'=A2'); ~A3')").unwrap();
        let rho = ghz(3).unwrap();
        let t = CorrelationTensor::from_density(&rho).unwrap();
        let dense = event_pseudoprobability(&e, &b, &rho).unwrap();
        let fast = event_pseudoprobability_fast(&e, &b, &t).unwrap();
        assert!((dense - fast).abs() < 1e-14);
    }

    #[test]
    fn compiler_memoizes() {
        let c = EventCompiler::new(pauli_binding(), 3);
        let e = parse_event("E(A1=A2'; A3)").unwrap();
        let a = c.operator(&e).unwrap();
        let b = c.operator(&e).unwrap();
        assert_eq!(a, b);
        assert_eq!(c.cached(), 1);
    }

    #[test]
    fn complementary_atomic_events_sum_to_identity() {
        let c = EventCompiler::new(pauli_binding(), 3);
        let plus = c.operator(&parse_event("E(A2')").unwrap()).unwrap();
        let minus = c.operator(&parse_event("E(~A2')").unwrap()).unwrap();
        assert!((&plus + &minus).approx_eq(&ComplexOperator::identity(8), 1e-15));
    }

    #[test]
    fn unbound_and_out_of_range_observables() {
        let b = pauli_binding();
        assert!(compile_event(&parse_event("E(A1'')").unwrap(), &b, 3).is_err());
        assert!(compile_event(&parse_event("E(A4)").unwrap(), &b, 3).is_err());
    }
}
