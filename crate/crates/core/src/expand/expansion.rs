// SPDX-License-Identifier: Apache-2.0

//! Expansion of a Hermitian operator into two-level pseudoprojections with
//! nonnegative weights.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::basis::{decompose, index_pairs};
use crate::error::{Error, Result};
use crate::pseudo::{projection, symmetrized_pseudoprojection, PseudoProjection};
use crate::qcore::{ComplexOperator, Direction, C64};

/// Which two-level pseudoprojection a term uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TermKind {
    #[serde(rename = "x+")]
    XPlus,
    #[serde(rename = "x-")]
    XMinus,
    #[serde(rename = "y+")]
    YPlus,
    #[serde(rename = "y-")]
    YMinus,
    #[serde(rename = "z+")]
    ZPlus,
    #[serde(rename = "z-")]
    ZMinus,
    /// Three coplanar directions at mutual angles `2π/3`, all outcomes `+`.
    #[serde(rename = "r")]
    Triple,
}

/// The seven pseudoprojections living on the span of `|i>, |j>`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspacePseudoprojections {
    pub block: (usize, usize),
    pub x_plus: PseudoProjection,
    pub x_minus: PseudoProjection,
    pub y_plus: PseudoProjection,
    pub y_minus: PseudoProjection,
    pub z_plus: PseudoProjection,
    pub z_minus: PseudoProjection,
    pub triple: PseudoProjection,
}

impl SubspacePseudoprojections {
    pub fn get(&self, kind: TermKind) -> &PseudoProjection {
        match kind {
            TermKind::XPlus => &self.x_plus,
            TermKind::XMinus => &self.x_minus,
            TermKind::YPlus => &self.y_plus,
            TermKind::YMinus => &self.y_minus,
            TermKind::ZPlus => &self.z_plus,
            TermKind::ZMinus => &self.z_minus,
            TermKind::Triple => &self.triple,
        }
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::InvalidParameter(format!(
            "doublet angle {theta} must lie strictly between 0 and π"
        )));
    }
    Ok(())
}

/// Places a 2x2 operator on rows and columns `i, j` of a `d`-dimensional
/// zero matrix.
pub fn embed_block(op: &ComplexOperator, d: usize, i: usize, j: usize) -> ComplexOperator {
    let idx = [i, j];
    let mut m = nalgebra::DMatrix::from_element(d, d, C64::new(0.0, 0.0));
    for (a, &r) in idx.iter().enumerate() {
        for (b, &c) in idx.iter().enumerate() {
            m[(r, c)] = op.entry(a, b);
        }
    }
    ComplexOperator::from_matrix(m).expect("square")
}

/// Symmetrized joint projection of qubit directions with given outcomes.
fn doublet_event(dirs: &[[f64; 3]], outcomes: &[i32]) -> Result<PseudoProjection> {
    let ps = dirs
        .iter()
        .zip(outcomes)
        .map(|(v, &o)| projection(&Direction::normalized(*v)?, o))
        .collect::<Result<Vec<_>>>()?;
    symmetrized_pseudoprojection(&ps)
}

/// Two-level pseudoprojections on block `(i, j)` (0-based, `i < j`) of a
/// `d`-dimensional space, built from doublets at angle `theta`.
pub fn subspace_pseudoprojections(i: usize, j: usize, theta: f64, d: usize) -> Result<SubspacePseudoprojections> {
    check_theta(theta)?;
    if !(i < j && j < d) {
        return Err(Error::InvalidParameter(format!(
            "block ({i}, {j}) is not an ordered pair of levels below {d}"
        )));
    }
    let (s, c) = (0.5 * theta).sin_cos();
    // p doublet sums along x with difference along y; q doublet sums along z.
    let p = [[c, s, 0.0], [c, -s, 0.0]];
    let q = [[s, 0.0, c], [-s, 0.0, c]];
    let third = 2.0 * PI / 3.0;
    let r: Vec<[f64; 3]> = (0..3)
        .map(|k| [(k as f64 * third).cos(), (k as f64 * third).sin(), 0.0])
        .collect();
    let lift = |pp: PseudoProjection| -> Result<PseudoProjection> {
        PseudoProjection::from_operator(embed_block(pp.operator(), d, i, j))
    };
    Ok(SubspacePseudoprojections {
        block: (i, j),
        x_plus: lift(doublet_event(&p, &[1, 1])?)?,
        x_minus: lift(doublet_event(&p, &[-1, -1])?)?,
        y_plus: lift(doublet_event(&p, &[1, -1])?)?,
        y_minus: lift(doublet_event(&p, &[-1, 1])?)?,
        z_plus: lift(doublet_event(&q, &[1, 1])?)?,
        z_minus: lift(doublet_event(&q, &[-1, -1])?)?,
        triple: lift(doublet_event(&r, &[1, 1, 1])?)?,
    })
}

/// One weighted pseudoprojection of an expansion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionTerm {
    pub weight: f64,
    /// 1-based level indices.
    pub block: [usize; 2],
    pub kind: TermKind,
    /// Whether the term belongs to the assembled constant.
    pub constant: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub theta: f64,
    pub dim: usize,
    pub terms: Vec<ExpansionTerm>,
    pub constant_terms: Vec<ExpansionTerm>,
    blocks: BTreeMap<(usize, usize), SubspacePseudoprojections>,
}

#[derive(Serialize)]
struct ExpansionRecord<'a> {
    theta: f64,
    dim: usize,
    terms: Vec<&'a ExpansionTerm>,
    reconstruction_error: f64,
}

impl Expansion {
    /// Every term, signal terms first.
    pub fn all_terms(&self) -> impl Iterator<Item = &ExpansionTerm> {
        self.terms.iter().chain(&self.constant_terms)
    }

    pub fn pseudoprojection(&self, term: &ExpansionTerm) -> &PseudoProjection {
        self.blocks[&(term.block[0] - 1, term.block[1] - 1)].get(term.kind)
    }

    pub fn min_weight(&self) -> f64 {
        self.all_terms().map(|t| t.weight).fold(f64::INFINITY, f64::min)
    }

    /// `Σ weight · Π` over every term.
    pub fn reconstruct(&self) -> ComplexOperator {
        let mut op = ComplexOperator::zeros(self.dim);
        for t in self.all_terms() {
            op.add_scaled(t.weight, self.pseudoprojection(t).operator())
                .expect("same dimension");
        }
        op
    }

    pub fn reconstruction_error(&self, target: &ComplexOperator) -> f64 {
        self.reconstruct().max_abs_diff(target)
    }

    pub fn to_json(&self, target: &ComplexOperator) -> Result<String> {
        let rec = ExpansionRecord {
            theta: self.theta,
            dim: self.dim,
            terms: self.all_terms().collect(),
            reconstruction_error: self.reconstruction_error(target),
        };
        serde_json::to_string_pretty(&rec).map_err(|e| Error::Serialization(e.to_string()))
    }
}

/// Expands `op` into pseudoprojections with nonnegative weights.
///
/// Off-diagonal and diagonal-difference parts use doublet pseudoprojections
/// weighted by `2 sec(θ/2)` or `2 cosec(θ/2)`; the identity components this
/// leaves behind, and the trace part, are absorbed by pairs of doublet
/// pseudoprojections (trace part `w ≥ 0`) and by the triple
/// pseudoprojection, which equals minus one sixteenth of the block identity.
pub fn expand_operator(op: &ComplexOperator, theta: f64) -> Result<Expansion> {
    check_theta(theta)?;
    let dec = decompose(op)?;
    let d = dec.dim;
    let (s, c) = (0.5 * theta).sin_cos();
    let (sec, cosec) = (1.0 / c, 1.0 / s);
    let pairs = index_pairs(d);

    let mut terms = Vec::new();
    let mut triple: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut signal = |(i, j): (usize, usize), v: f64, plus: TermKind, minus: TermKind, scale: f64, half: f64| {
        if v == 0.0 {
            return;
        }
        terms.push(ExpansionTerm {
            weight: 2.0 * scale * v.abs(),
            block: [i + 1, j + 1],
            kind: if v > 0.0 { plus } else { minus },
            constant: false,
        });
        *triple.entry((i, j)).or_insert(0.0) += 16.0 * v.abs() * half;
    };
    for &(ij, x) in &dec.x {
        signal(ij, x, TermKind::XPlus, TermKind::XMinus, sec, c);
    }
    for &(ij, y) in &dec.y {
        signal(ij, y, TermKind::YPlus, TermKind::YMinus, cosec, s);
    }
    for l in 1..d {
        let zp = dec.z_prime(l);
        for i in 0..l {
            signal((i, l), zp, TermKind::ZPlus, TermKind::ZMinus, sec, c);
        }
    }

    let mut constant_terms = Vec::new();
    let share = dec.w / (d - 1) as f64;
    if dec.w > 0.0 {
        for &(i, j) in &pairs {
            for kind in [TermKind::XPlus, TermKind::XMinus] {
                constant_terms.push(ExpansionTerm {
                    weight: share * sec * sec,
                    block: [i + 1, j + 1],
                    kind,
                    constant: true,
                });
            }
        }
    } else if dec.w < 0.0 {
        for &ij in &pairs {
            *triple.entry(ij).or_insert(0.0) += 16.0 * share.abs();
        }
    }
    for ((i, j), w) in triple {
        constant_terms.push(ExpansionTerm {
            weight: w,
            block: [i + 1, j + 1],
            kind: TermKind::Triple,
            constant: true,
        });
    }

    let used: std::collections::BTreeSet<(usize, usize)> = terms
        .iter()
        .chain(&constant_terms)
        .map(|t| (t.block[0] - 1, t.block[1] - 1))
        .collect();
    let blocks = used
        .into_par_iter()
        .map(|(i, j)| subspace_pseudoprojections(i, j, theta, d).map(|b| ((i, j), b)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(Expansion {
        theta,
        dim: d,
        terms,
        constant_terms,
        blocks,
    })
}
