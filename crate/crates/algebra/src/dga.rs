//! Differentials on presented algebras: Leibniz extension from generator
//! values, d^2 = 0 verification, and homology as a bigraded algebra.
//!
//! A differential drops topological degree by exactly 1 and raises the weight
//! by its jump r, so boundary maps decompose into independent blocks, one per
//! bidegree. Element computations are exact; basis enumeration at a target
//! bidegree never needs a window.

use crate::presentation::{Bidegree, Element, Monomial, Presentation};
use fp::FpMatrix;
use std::collections::BTreeMap;

/// A differential: the weight jump r and one value per generator (zero means
/// the generator is a cycle).
#[derive(Clone, Debug)]
pub struct Differential {
    pub weight_jump: i32,
    pub values: Vec<Element>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DgaError {
    NonPositiveJump(i32),
    WrongValueCount { expected: usize, got: usize },
    InhomogeneousValue(String),
    BidegreeLaw { gen: String, expected: Bidegree, got: Bidegree },
    /// d applied to the two sides of a rewrite rule disagrees, so the Leibniz
    /// extension would not descend to the presented algebra.
    RuleIncompatible { gen: String, lhs: String, rhs: String },
}

impl std::fmt::Display for DgaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DgaError::NonPositiveJump(r) => write!(f, "weight jump must be positive, got {r}"),
            DgaError::WrongValueCount { expected, got } => {
                write!(f, "expected {expected} generator values, got {got}")
            }
            DgaError::InhomogeneousValue(g) => {
                write!(f, "differential value on `{g}` is not homogeneous")
            }
            DgaError::BidegreeLaw { gen, expected, got } => write!(
                f,
                "differential on `{gen}` lands in {got}, the bidegree law requires {expected}"
            ),
            DgaError::RuleIncompatible { gen, lhs, rhs } => write!(
                f,
                "differential is incompatible with the rewrite rule on `{gen}`: d(lhs) = {lhs} but d(rhs) = {rhs}"
            ),
        }
    }
}

impl std::error::Error for DgaError {}

impl Differential {
    pub fn zero(pres: &Presentation, weight_jump: i32) -> Self {
        Differential { weight_jump, values: vec![Element::zero(); pres.gens().len()] }
    }

    /// Validate homogeneity, the bidegree law (n-1, w+r) on every generator,
    /// and compatibility with every rewrite rule.
    pub fn validate(&self, pres: &Presentation) -> Result<(), DgaError> {
        if self.weight_jump <= 0 {
            return Err(DgaError::NonPositiveJump(self.weight_jump));
        }
        if self.values.len() != pres.gens().len() {
            return Err(DgaError::WrongValueCount {
                expected: pres.gens().len(),
                got: self.values.len(),
            });
        }
        for (i, g) in pres.gens().iter().enumerate() {
            let v = &self.values[i];
            if v.is_zero() {
                continue;
            }
            let bd = pres
                .element_bidegree(v)
                .map_err(|_| DgaError::InhomogeneousValue(g.name.clone()))?
                .unwrap();
            let expected = Bidegree::new(g.degree.n - 1, g.degree.w + self.weight_jump);
            if bd != expected {
                return Err(DgaError::BidegreeLaw { gen: g.name.clone(), expected, got: bd });
            }
        }
        // d must send both sides of every rewrite rule to the same element:
        // d(g^h) = h g^{h-1} d(g) for even g, and 0 for odd g (where d(g) is
        // even, so the two Leibniz terms of d(g*g) cancel).
        for (i, g) in pres.gens().iter().enumerate() {
            if let Some(h) = pres.bound(i) {
                let d_lhs = if g.degree.n & 1 == 0 {
                    let power = pres.pow(&pres.gen_element(i), h as u32 - 1);
                    pres.scale(&pres.mul(&power, &self.values[i]), h as i64)
                } else {
                    Element::zero()
                };
                let d_rhs = self.apply(pres, pres.rule_rhs(i).unwrap());
                if d_lhs != d_rhs {
                    return Err(DgaError::RuleIncompatible {
                        gen: g.name.clone(),
                        lhs: pres.fmt_element(&d_lhs),
                        rhs: pres.fmt_element(&d_rhs),
                    });
                }
            }
        }
        Ok(())
    }

    /// d of a normal-form monomial by the signed Leibniz rule: strike each
    /// factor in turn, with the sign of the topological degree of everything
    /// to its left.
    pub fn apply_monomial(&self, pres: &Presentation, m: &Monomial) -> Element {
        let mut out = Element::zero();
        let mut prefix_parity = 0i32;
        for (i, &e) in m.exps.iter().enumerate() {
            let n_i = pres.gens()[i].degree.n;
            if e > 0 && !self.values[i].is_zero() {
                // The e ways of striking a copy of g_i agree: d(g_i) commutes
                // with g_i up to an even sign, and odd generators have e <= 1.
                let coeff = (e as i64) % pres.field().p() as i64;
                if coeff != 0 {
                    let mut prefix = vec![0u16; m.exps.len()];
                    prefix[..=i].copy_from_slice(&m.exps[..=i]);
                    prefix[i] = e - 1;
                    let mut suffix = vec![0u16; m.exps.len()];
                    suffix[(i + 1)..].copy_from_slice(&m.exps[(i + 1)..]);
                    let term = pres.mul(
                        &pres.mul(
                            &Element::from_monomial(Monomial { exps: prefix }),
                            &self.values[i],
                        ),
                        &Element::from_monomial(Monomial { exps: suffix }),
                    );
                    let sign = if prefix_parity & 1 == 1 { -coeff } else { coeff };
                    out = pres.add(&out, &pres.scale(&term, sign));
                }
            }
            prefix_parity += (n_i & 1) * e as i32;
        }
        out
    }

    pub fn apply(&self, pres: &Presentation, el: &Element) -> Element {
        let mut out = Element::zero();
        for (m, &c) in &el.terms {
            out = pres.add(&out, &pres.scale(&self.apply_monomial(pres, m), c as i64));
        }
        out
    }
}

/// The boundary matrix at a bidegree: columns indexed by the source basis at
/// `bd`, rows by the target basis at `(n-1, w+r)`.
pub fn boundary_matrix(pres: &Presentation, d: &Differential, bd: Bidegree) -> FpMatrix {
    let src = pres.basis_at(bd);
    let tgt = pres.basis_at(Bidegree::new(bd.n - 1, bd.w + d.weight_jump));
    let mut m = FpMatrix::zero(pres.field(), tgt.len(), src.len());
    for (j, mono) in src.iter().enumerate() {
        let img = d.apply_monomial(pres, mono);
        let col = pres.coords(&img, &tgt);
        for (i, &c) in col.iter().enumerate() {
            m.set(i, j, c);
        }
    }
    m
}

/// A d^2 != 0 witness.
#[derive(Debug, Clone)]
pub struct DSquaredViolation {
    pub bidegree: Bidegree,
    pub monomial: String,
    pub value: String,
}

/// Verify d(d(m)) = 0 exactly on every basis monomial of every listed
/// bidegree. Violations are report content, not errors.
pub fn check_d_squared(
    pres: &Presentation,
    d: &Differential,
    bidegrees: impl IntoIterator<Item = Bidegree>,
) -> Vec<DSquaredViolation> {
    let mut violations = Vec::new();
    for bd in bidegrees {
        for m in pres.basis_at(bd) {
            let dd = d.apply(pres, &d.apply_monomial(pres, &m));
            if !dd.is_zero() {
                violations.push(DSquaredViolation {
                    bidegree: bd,
                    monomial: pres.fmt_monomial(&m),
                    value: pres.fmt_element(&dd),
                });
            }
        }
    }
    violations
}

/// Homology data at one bidegree: dimension, chosen cycle representatives
/// (coordinates in the presentation basis) and a basis of the boundary space.
#[derive(Debug, Clone)]
pub struct HomologyBlock {
    pub dim: usize,
    pub reps: Vec<Vec<u32>>,
    pub boundaries: Vec<Vec<u32>>,
}

/// Per-bidegree homology of (pres, d) with deterministic representatives.
#[derive(Debug)]
pub struct DgaHomology<'a> {
    pub pres: &'a Presentation,
    pub d: Differential,
    pub blocks: BTreeMap<Bidegree, HomologyBlock>,
}

impl<'a> DgaHomology<'a> {
    /// Compute homology at the given bidegrees. Exact at every bidegree: the
    /// kernel uses the outgoing block and the boundaries come from the full
    /// incoming block, both enumerated on demand.
    pub fn compute(
        pres: &'a Presentation,
        d: Differential,
        bidegrees: impl IntoIterator<Item = Bidegree>,
    ) -> Self {
        let mut blocks = BTreeMap::new();
        for bd in bidegrees {
            blocks.entry(bd).or_insert_with(|| homology_block(pres, &d, bd));
        }
        DgaHomology { pres, d, blocks }
    }

    pub fn dim(&self, bd: Bidegree) -> usize {
        self.blocks.get(&bd).map_or(0, |b| b.dim)
    }

    /// Total dimension per topological degree (summed over weights).
    pub fn dims_by_degree(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for (bd, b) in &self.blocks {
            if b.dim > 0 {
                *out.entry(bd.n).or_insert(0) += b.dim;
            }
        }
        out
    }

    /// Homology coordinates of a cycle, or `None` if the element is not a
    /// cycle (not in span(reps) + span(boundaries)).
    pub fn project(&self, el: &Element) -> Option<(Bidegree, Vec<u32>)> {
        let bd = self.pres.element_bidegree(el).ok()??;
        let block = self.blocks.get(&bd)?;
        let basis = self.pres.basis_at(bd);
        let v = self.pres.coords(el, &basis);
        project_onto(self.pres.field(), &block.reps, &block.boundaries, &v)
            .map(|coords| (bd, coords))
    }

    /// Class of the product of two representative classes.
    pub fn class_product(
        &self,
        bd1: Bidegree,
        coords1: &[u32],
        bd2: Bidegree,
        coords2: &[u32],
    ) -> Option<(Bidegree, Vec<u32>)> {
        let e1 = self.class_element(bd1, coords1)?;
        let e2 = self.class_element(bd2, coords2)?;
        let prod = self.pres.mul(&e1, &e2);
        if prod.is_zero() {
            let target = bd1.add(bd2);
            return Some((target, vec![0; self.dim(target)]));
        }
        self.project(&prod)
    }

    /// Representative element of a class given by homology coordinates.
    pub fn class_element(&self, bd: Bidegree, coords: &[u32]) -> Option<Element> {
        let block = self.blocks.get(&bd)?;
        let basis = self.pres.basis_at(bd);
        let mut acc = Element::zero();
        for (i, &c) in coords.iter().enumerate() {
            if c != 0 {
                let rep = self.pres.element_from_coords(&block.reps[i], &basis);
                acc = self.pres.add(&acc, &self.pres.scale(&rep, c as i64));
            }
        }
        Some(acc)
    }
}

pub fn homology_block(pres: &Presentation, d: &Differential, bd: Bidegree) -> HomologyBlock {
    let out_matrix = boundary_matrix(pres, d, bd);
    let cycles = out_matrix.kernel_basis();
    let mut boundaries: Vec<Vec<u32>> = Vec::new();
    let src_bd = Bidegree::new(bd.n + 1, bd.w - d.weight_jump);
    if src_bd.w >= 0 {
        let in_matrix = boundary_matrix(pres, d, src_bd);
        let basis_len = pres.basis_at(bd).len();
        for j in 0..in_matrix.cols() {
            let col: Vec<u32> = (0..basis_len).map(|i| in_matrix.get(i, j)).collect();
            if col.iter().any(|&x| x != 0) {
                boundaries.push(col);
            }
        }
    }
    let ambient = pres.basis_at(bd).len();
    let sq = fp::subquotient(pres.field(), &cycles, &boundaries, ambient)
        .expect("boundaries are cycles once d^2 = 0 holds");
    let boundary_basis = echelon_rows(pres.field(), &boundaries, ambient);
    HomologyBlock { dim: sq.dim, reps: sq.reps, boundaries: boundary_basis }
}

fn echelon_rows(field: fp::PrimeField, rows: &[Vec<u32>], ambient: usize) -> Vec<Vec<u32>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let mut m = FpMatrix::zero(field, rows.len(), ambient);
    for (i, r) in rows.iter().enumerate() {
        for (j, &x) in r.iter().enumerate() {
            m.set(i, j, x);
        }
    }
    let red = m.rref();
    (0..red.rank).map(|i| red.reduced.row(i).to_vec()).collect()
}

/// Express `v` in the basis (reps ++ boundaries) and return the rep part, or
/// `None` when `v` is outside that span.
pub fn project_onto(
    field: fp::PrimeField,
    reps: &[Vec<u32>],
    boundaries: &[Vec<u32>],
    v: &[u32],
) -> Option<Vec<u32>> {
    let ambient = v.len();
    if reps.is_empty() && boundaries.is_empty() {
        return v.iter().all(|&x| x == 0).then(Vec::new);
    }
    let cols = reps.len() + boundaries.len();
    let mut m = FpMatrix::zero(field, ambient, cols);
    for (j, r) in reps.iter().chain(boundaries.iter()).enumerate() {
        for (i, &x) in r.iter().enumerate() {
            m.set(i, j, x);
        }
    }
    let x = m.solve(v)?;
    Some(x[..reps.len()].to_vec())
}
