// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{
    expectation, pauli_coefficients, qubit_operator, tensor_product, ComplexOperator,
    DensityOperator, Direction,
};
use crate::tolerance::IDEMPOTENT_TOL;

/// Largest number of projections combined in one symmetrized product.
pub const MAX_SYMMETRIZED: usize = 8;

/// Where a projection came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionSource {
    /// `(I + outcome σ·n)/2`.
    Qubit { direction: Direction, outcome: i8 },
    /// An explicit idempotent matrix.
    Matrix,
}

/// An orthogonal projection (Hermitian, idempotent within `1e-10`).
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    op: ComplexOperator,
    source: ProjectionSource,
}

impl Projection {
    /// Validates an explicit matrix as a projection.
    pub fn from_operator(op: ComplexOperator) -> Result<Self> {
        if !op.is_hermitian() {
            return Err(Error::NotHermitian {
                deviation: op.hermitian_deviation(),
            });
        }
        if !op.is_idempotent(IDEMPOTENT_TOL) {
            return Err(Error::InvalidParameter("operator is not idempotent".into()));
        }
        Ok(Self {
            op,
            source: ProjectionSource::Matrix,
        })
    }

    pub fn operator(&self) -> &ComplexOperator {
        &self.op
    }

    pub fn source(&self) -> &ProjectionSource {
        &self.source
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }
}

/// `(I + outcome σ·n)/2` for `outcome ∈ {+1, -1}`.
pub fn projection(n: &Direction, outcome: i32) -> Result<Projection> {
    let s = outcome_sign(outcome)?;
    let v = n.components();
    Ok(Projection {
        op: qubit_operator([0.5, 0.5 * s * v[0], 0.5 * s * v[1], 0.5 * s * v[2]]),
        source: ProjectionSource::Qubit {
            direction: *n,
            outcome: outcome as i8,
        },
    })
}

fn outcome_sign(outcome: i32) -> Result<f64> {
    match outcome {
        1 => Ok(1.0),
        -1 => Ok(-1.0),
        o => Err(Error::InvalidOutcome(o)),
    }
}

/// How a pseudoprojection was assembled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// `½(π₁⋯π_N + h.c.)` for the listed order.
    Unit { sources: Vec<ProjectionSource> },
    /// Uniform average over `orderings` orderings of the listed projections.
    Symmetrized {
        sources: Vec<ProjectionSource>,
        orderings: u64,
    },
    /// Tensor product, first factor most significant.
    Joint(Vec<Provenance>),
    /// Weighted sum of pseudoprojections.
    Sum(Vec<(f64, Provenance)>),
    /// Supplied directly as a matrix.
    Explicit,
}

/// A Hermitian operator representing the indicator of a joint outcome.
/// Its eigenvalues may lie outside `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoProjection {
    op: ComplexOperator,
    provenance: Provenance,
}

impl PseudoProjection {
    pub fn from_operator(op: ComplexOperator) -> Result<Self> {
        if !op.is_hermitian() {
            return Err(Error::NotHermitian {
                deviation: op.hermitian_deviation(),
            });
        }
        Ok(Self {
            op,
            provenance: Provenance::Explicit,
        })
    }

    pub(crate) fn with_provenance(op: ComplexOperator, provenance: Provenance) -> Self {
        debug_assert!(op.is_hermitian());
        Self { op, provenance }
    }

    pub fn operator(&self) -> &ComplexOperator {
        &self.op
    }

    pub fn into_operator(self) -> ComplexOperator {
        self.op
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// Smallest and largest eigenvalue.
    pub fn eigen_range(&self) -> (f64, f64) {
        let ev = self.op.eigenvalues().expect("Hermitian by construction");
        (ev[0], ev[ev.len() - 1])
    }

    pub fn is_projection(&self) -> bool {
        self.op.is_idempotent(IDEMPOTENT_TOL)
    }

    /// `Σ wᵢ Pᵢ` with provenance.
    pub fn weighted_sum(parts: &[(f64, PseudoProjection)]) -> Result<Self> {
        let first = &parts.first().ok_or(Error::Empty("weighted sum"))?.1;
        let mut op = ComplexOperator::zeros(first.dim());
        for (w, p) in parts {
            op.add_scaled(*w, &p.op)?;
        }
        let prov = parts
            .iter()
            .map(|(w, p)| (*w, p.provenance.clone()))
            .collect();
        Ok(Self::with_provenance(op, Provenance::Sum(prov)))
    }
}

impl From<Projection> for PseudoProjection {
    fn from(p: Projection) -> Self {
        Self {
            provenance: Provenance::Unit {
                sources: vec![p.source],
            },
            op: p.op,
        }
    }
}

fn check_dims(ps: &[Projection]) -> Result<usize> {
    let first = ps.first().ok_or(Error::Empty("projection list"))?;
    for p in ps {
        if p.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                found: p.dim(),
            });
        }
    }
    Ok(first.dim())
}

/// `½(π₁π₂⋯π_N + (π₁π₂⋯π_N)†)` for the given order.
pub fn unit_pseudoprojection(ps: &[Projection]) -> Result<PseudoProjection> {
    check_dims(ps)?;
    let mut prod = ps[0].op.clone();
    for p in &ps[1..] {
        prod = &prod * &p.op;
    }
    Ok(PseudoProjection::with_provenance(
        prod.hermitian_part(),
        Provenance::Unit {
            sources: ps.iter().map(|p| p.source.clone()).collect(),
        },
    ))
}

/// Uniform average of the ordered products over all `N!` orderings.
pub fn symmetrized_pseudoprojection(ps: &[Projection]) -> Result<PseudoProjection> {
    let dim = check_dims(ps)?;
    let n = ps.len();
    if n > MAX_SYMMETRIZED {
        return Err(Error::CapExceeded {
            what: "projections per symmetrized product",
            requested: n,
            cap: MAX_SYMMETRIZED,
        });
    }
    let ops: Vec<&ComplexOperator> = ps.iter().map(|p| &p.op).collect();
    let sum = ordered_product_sum(&ops, dim);
    let orderings = factorial(n);
    Ok(PseudoProjection::with_provenance(
        sum.scale(1.0 / orderings as f64).hermitian_part(),
        Provenance::Symmetrized {
            sources: ps.iter().map(|p| p.source.clone()).collect(),
            orderings,
        },
    ))
}

/// Sum over all orderings of the products, by dynamic programming over
/// subsets: `S(mask) = Σ_{i ∈ mask} S(mask \ i) · opᵢ`.
fn ordered_product_sum(ops: &[&ComplexOperator], dim: usize) -> ComplexOperator {
    let n = ops.len();
    let full = (1usize << n) - 1;
    let mut table: Vec<Option<ComplexOperator>> = vec![None; full + 1];
    table[0] = Some(ComplexOperator::identity(dim));
    for mask in 1..=full {
        let mut acc = ComplexOperator::zeros(dim);
        for (i, op) in ops.iter().enumerate() {
            if mask >> i & 1 == 1 {
                let prev = table[mask & !(1 << i)].as_ref().expect("smaller subset");
                acc.add_scaled(1.0, &(prev * *op)).expect("same dimension");
            }
        }
        table[mask] = Some(acc);
    }
    table[full].take().expect("full subset")
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Pauli coefficients of the symmetrized product of the qubit projections
/// `(I + sᵢ σ·nᵢ)/2`.
pub(crate) fn symmetrized_qubit_coefficients(dirs: &[[f64; 3]], signs: &[f64]) -> [f64; 4] {
    if dirs.is_empty() {
        return [1.0, 0.0, 0.0, 0.0];
    }
    let ops: Vec<ComplexOperator> = dirs
        .iter()
        .zip(signs)
        .map(|(v, s)| qubit_operator([0.5, 0.5 * s * v[0], 0.5 * s * v[1], 0.5 * s * v[2]]))
        .collect();
    let refs: Vec<&ComplexOperator> = ops.iter().collect();
    let sum = ordered_product_sum(&refs, 2).scale(1.0 / factorial(dirs.len()) as f64);
    pauli_coefficients(&sum.hermitian_part()).expect("2x2 Hermitian")
}

/// Tensor product of per-subsystem pseudoprojections.
pub fn joint_pseudoprojection(parts: &[PseudoProjection]) -> Result<PseudoProjection> {
    if parts.is_empty() {
        return Err(Error::Empty("joint pseudoprojection"));
    }
    let ops: Vec<ComplexOperator> = parts.iter().map(|p| p.op.clone()).collect();
    Ok(PseudoProjection::with_provenance(
        tensor_product(&ops)?,
        Provenance::Joint(parts.iter().map(|p| p.provenance.clone()).collect()),
    ))
}

/// `Re Tr(P ρ)`; may be negative or exceed one.
pub fn pseudoprobability(p: &PseudoProjection, rho: &DensityOperator) -> Result<f64> {
    expectation(&p.op, rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{pauli_x, pauli_z, C64};

    fn pz(o: i32) -> Projection {
        projection(&Direction::z(), o).unwrap()
    }

    fn px(o: i32) -> Projection {
        projection(&Direction::x(), o).unwrap()
    }

    fn quarter_xz() -> ComplexOperator {
        // ¼(I + σx + σz)
        let mut op = ComplexOperator::identity(2).scale(0.25);
        op.add_scaled(0.25, &pauli_x()).unwrap();
        op.add_scaled(0.25, &pauli_z()).unwrap();
        op
    }

    /// Eigenstate of σ·(x+z)/√2 with eigenvalue -1.
    fn anti_diagonal_state() -> DensityOperator {
        // Bloch vector -(x+z)/√2 has polar angle 5π/4.
        let th = 1.25 * std::f64::consts::PI;
        let amp = [C64::new((th / 2.0).cos(), 0.0), C64::new((th / 2.0).sin(), 0.0)];
        DensityOperator::pure(&amp).unwrap()
    }

    #[test]
    fn projection_examples() {
        assert!(pz(1).operator().approx_eq(&ComplexOperator::diagonal(&[1.0, 0.0]), 0.0));
        let want = ComplexOperator::from_real_rows(&[vec![0.5, -0.5], vec![-0.5, 0.5]]).unwrap();
        assert!(px(-1).operator().approx_eq(&want, 1e-15));
        let sum = pz(1).operator() + pz(-1).operator();
        assert!(sum.approx_eq(&ComplexOperator::identity(2), 0.0));
        assert!(matches!(
            projection(&Direction::z(), 0),
            Err(Error::InvalidOutcome(0))
        ));
    }

    #[test]
    fn unit_pseudoprojection_of_x_and_z() {
        let p = unit_pseudoprojection(&[px(1), pz(1)]).unwrap();
        assert!(p.operator().approx_eq(&quarter_xz(), 1e-15));
        let (lo, _) = p.eigen_range();
        assert!((lo - (1.0 - 2f64.sqrt()) / 4.0).abs() < 1e-12);
        assert!(!p.is_projection());
    }

    #[test]
    fn commuting_and_orthogonal_inputs() {
        let p = unit_pseudoprojection(&[pz(1), pz(1)]).unwrap();
        assert!(p.operator().approx_eq(&ComplexOperator::diagonal(&[1.0, 0.0]), 0.0));
        assert!(p.is_projection());
        let q = unit_pseudoprojection(&[pz(1), pz(-1)]).unwrap();
        assert!(q.operator().max_abs() == 0.0);
        let r = symmetrized_pseudoprojection(&[pz(1), pz(1), pz(1)]).unwrap();
        assert!(r.operator().approx_eq(&ComplexOperator::diagonal(&[1.0, 0.0]), 1e-15));
    }

    #[test]
    fn two_projections_symmetrize_to_unit_form() {
        let d = Direction::normalized([0.3, -0.2, 0.9]).unwrap();
        let ps = [projection(&d, -1).unwrap(), px(1)];
        let a = unit_pseudoprojection(&ps).unwrap();
        let b = symmetrized_pseudoprojection(&ps).unwrap();
        assert!(a.operator().approx_eq(b.operator(), 1e-15));
    }

    #[test]
    fn coplanar_triple_is_minus_sixteenth() {
        let dirs: Vec<Direction> = (0..3)
            .map(|k| {
                let phi = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
                Direction::new(phi.cos(), 0.0, phi.sin()).unwrap()
            })
            .collect();
        let ps: Vec<Projection> = dirs.iter().map(|d| projection(d, 1).unwrap()).collect();
        let p = symmetrized_pseudoprojection(&ps).unwrap();
        assert!(p
            .operator()
            .approx_eq(&ComplexOperator::identity(2).scale(-1.0 / 16.0), 1e-15));
    }

    #[test]
    fn symmetrized_matches_explicit_permutation_average() {
        let dirs = [[0.0, 0.6, 0.8], [1.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.48, 0.6, 0.64]];
        let ps: Vec<Projection> = dirs
            .iter()
            .enumerate()
            .map(|(i, v)| projection(&Direction::normalized(*v).unwrap(), if i % 2 == 0 { 1 } else { -1 }).unwrap())
            .collect();
        // Oracle: loop over all 24 orderings explicitly.
        let mut acc = ComplexOperator::zeros(2);
        let mut count = 0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let idx = [a, b, c, d];
                        let mut seen = [false; 4];
                        idx.iter().for_each(|&i| seen[i] = true);
                        if seen.iter().all(|&s| s) {
                            let u = unit_pseudoprojection(&idx.map(|i| ps[i].clone())).unwrap();
                            acc.add_scaled(1.0, u.operator()).unwrap();
                            count += 1;
                        }
                    }
                }
            }
        }
        let want = acc.scale(1.0 / count as f64);
        let got = symmetrized_pseudoprojection(&ps).unwrap();
        assert!(got.operator().approx_eq(&want, 1e-14));
        let c = symmetrized_qubit_coefficients(&dirs.map(|v| Direction::normalized(v).unwrap().components()), &[1.0, -1.0, 1.0, -1.0]);
        assert!(qubit_operator(c).approx_eq(got.operator(), 1e-14));
    }

    #[test]
    fn symmetrized_cap() {
        let ps = vec![pz(1); MAX_SYMMETRIZED + 1];
        assert!(matches!(
            symmetrized_pseudoprojection(&ps),
            Err(Error::CapExceeded { .. })
        ));
        assert!(symmetrized_pseudoprojection(&vec![pz(1); MAX_SYMMETRIZED]).is_ok());
    }

    #[test]
    fn joint_examples() {
        let zz = joint_pseudoprojection(&[pz(1).into(), pz(1).into()]).unwrap();
        assert!(zz
            .operator()
            .approx_eq(&ComplexOperator::diagonal(&[1.0, 0.0, 0.0, 0.0]), 0.0));
        let q = PseudoProjection::from_operator(quarter_xz()).unwrap();
        let id = PseudoProjection::from_operator(ComplexOperator::identity(2)).unwrap();
        let j = joint_pseudoprojection(&[q, id.clone()]).unwrap();
        // Tr(A⊗B) = Tr A · Tr B = ½ · 2
        assert!((j.operator().trace().re - 1.0).abs() < 1e-15);
        let iii = joint_pseudoprojection(&[id.clone(), id.clone(), id]).unwrap();
        assert!(iii.operator().approx_eq(&ComplexOperator::identity(8), 0.0));
        assert!(joint_pseudoprojection(&[]).is_err());
    }

    #[test]
    fn pseudoprobability_examples() {
        let q = PseudoProjection::from_operator(quarter_xz()).unwrap();
        let mixed = DensityOperator::maximally_mixed(1);
        assert!((pseudoprobability(&q, &mixed).unwrap() - 0.25).abs() < 1e-15);
        let ground = DensityOperator::pure(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        assert_eq!(pseudoprobability(&pz(1).into(), &ground).unwrap(), 1.0);
        let v = pseudoprobability(&q, &anti_diagonal_state()).unwrap();
        assert!((v - (1.0 - 2f64.sqrt()) / 4.0).abs() < 1e-12, "{v}");
        assert!(pseudoprobability(&q, &DensityOperator::maximally_mixed(2)).is_err());
    }
}
