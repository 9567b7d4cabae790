//! Honest fibers at t = n: partition diagrams become sparse 0/1 matrices
//! acting on tensor powers of Q^n, the scalars evaluate at n, and induced
//! algebras specialize to finite-dimensional algebras with S_n-action.
//!
//! Multi-index convention: a point of [n]^a is encoded in mixed radix with
//! leg 0 most significant, so tensoring legs concatenates digit strings.

use crate::config::limits;
use crate::diagrams::{Diagram, Morphism};
use crate::error::{Error, Result};
use crate::linalg::SpanBasis;
use crate::scalars::Scalar;
use crate::symgroup::{EquivariantAlgebra, Permutation};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Sparse matrix n^b × n^a realizing a morphism [a] → [b] at t = n.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiberMatrix {
    n: usize,
    dom_power: usize,
    cod_power: usize,
    entries: BTreeMap<(usize, usize), BigRational>, // (row, col)
}

fn checked_pow(n: usize, e: usize) -> Result<usize> {
    let budget = limits().fiber_budget;
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(n as u64);
        if acc > budget {
            return Err(Error::LimitExceeded(format!(
                "{n}^{e} exceeds fiber budget {budget}"
            )));
        }
    }
    Ok(acc as usize)
}

fn encode(digits: &[usize], n: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * n + d)
}

impl FiberMatrix {
    pub fn zero(n: usize, dom_power: usize, cod_power: usize) -> Result<Self> {
        checked_pow(n, dom_power + cod_power)?;
        Ok(FiberMatrix {
            n,
            dom_power,
            cod_power,
            entries: BTreeMap::new(),
        })
    }

    pub fn identity(n: usize, power: usize) -> Result<Self> {
        let mut m = FiberMatrix::zero(n, power, power)?;
        for i in 0..checked_pow(n, power)? {
            m.entries.insert((i, i), BigRational::one());
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dom_power(&self) -> usize {
        self.dom_power
    }

    pub fn cod_power(&self) -> usize {
        self.cod_power
    }

    pub fn rows(&self) -> usize {
        self.n.pow(self.cod_power as u32)
    }

    pub fn cols(&self) -> usize {
        self.n.pow(self.dom_power as u32)
    }

    pub fn entry(&self, r: usize, c: usize) -> BigRational {
        self.entries
            .get(&(r, c))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn insert_add(&mut self, r: usize, c: usize, v: BigRational) {
        if v.is_zero() {
            return;
        }
        let slot = self
            .entries
            .entry((r, c))
            .or_insert_with(BigRational::zero);
        *slot += v;
        if slot.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    pub fn add(&self, other: &FiberMatrix) -> Result<FiberMatrix> {
        if (self.n, self.dom_power, self.cod_power)
            != (other.n, other.dom_power, other.cod_power)
        {
            return Err(Error::DimensionMismatch("fiber matrix shapes".into()));
        }
        let mut out = self.clone();
        for (&(r, c), v) in &other.entries {
            out.insert_add(r, c, v.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &BigRational) -> FiberMatrix {
        if s.is_zero() {
            return FiberMatrix {
                n: self.n,
                dom_power: self.dom_power,
                cod_power: self.cod_power,
                entries: BTreeMap::new(),
            };
        }
        FiberMatrix {
            n: self.n,
            dom_power: self.dom_power,
            cod_power: self.cod_power,
            entries: self
                .entries
                .iter()
                .map(|(&k, v)| (k, v * s))
                .collect(),
        }
    }

    /// self · other (other applied first).
    pub fn matmul(&self, other: &FiberMatrix) -> Result<FiberMatrix> {
        if self.n != other.n || self.dom_power != other.cod_power {
            return Err(Error::DimensionMismatch("fiber matrix product".into()));
        }
        let mut out = FiberMatrix::zero(self.n, other.dom_power, self.cod_power)?;
        // index other's entries by row for the sparse product
        let mut by_row: BTreeMap<usize, Vec<(usize, &BigRational)>> = BTreeMap::new();
        for (&(r, c), v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        for (&(r, mid), u) in &self.entries {
            if let Some(hits) = by_row.get(&mid) {
                for &(c, v) in hits {
                    out.insert_add(r, c, u * v);
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product, self's legs first.
    pub fn kron(&self, other: &FiberMatrix) -> Result<FiberMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch("kronecker base mismatch".into()));
        }
        let mut out = FiberMatrix::zero(
            self.n,
            self.dom_power + other.dom_power,
            self.cod_power + other.cod_power,
        )?;
        let rb = other.rows();
        let cb = other.cols();
        for (&(r1, c1), v1) in &self.entries {
            for (&(r2, c2), v2) in &other.entries {
                out.insert_add(r1 * rb + r2, c1 * cb + c2, v1 * v2);
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Result<BigRational> {
        if self.dom_power != self.cod_power {
            return Err(Error::NotSquare(self.rows(), self.cols()));
        }
        let mut acc = BigRational::zero();
        for (&(r, c), v) in &self.entries {
            if r == c {
                acc += v;
            }
        }
        Ok(acc)
    }

    pub fn apply(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.cols() {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        let mut out = vec![BigRational::zero(); self.rows()];
        for (&(r, c), u) in &self.entries {
            if !v[c].is_zero() {
                out[r] += u * &v[c];
            }
        }
        Ok(out)
    }

    pub fn column(&self, c: usize) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.rows()];
        for (&(r, cc), v) in &self.entries {
            if cc == c {
                out[r] = v.clone();
            }
        }
        out
    }
}

// JSON export: {"n":…, "dom_power":…, "cod_power":…, "entries":[[r,c,{num,den}]…]}
#[derive(Serialize, Deserialize)]
struct FiberMatrixJson {
    n: usize,
    dom_power: usize,
    cod_power: usize,
    entries: Vec<(usize, usize, Scalar)>,
}

impl Serialize for FiberMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FiberMatrixJson {
            n: self.n,
            dom_power: self.dom_power,
            cod_power: self.cod_power,
            entries: self
                .entries
                .iter()
                .map(|(&(r, c), v)| (r, c, Scalar::from_rational(v.clone())))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiberMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = FiberMatrixJson::deserialize(d)?;
        let mut m = FiberMatrix::zero(raw.n, raw.dom_power, raw.cod_power)
            .map_err(serde::de::Error::custom)?;
        for (r, c, v) in raw.entries {
            let v = v
                .as_rational()
                .cloned()
                .ok_or_else(|| serde::de::Error::custom("non-rational fiber entry"))?;
            m.insert_add(r, c, v);
        }
        Ok(m)
    }
}

/// The 0/1 matrix of a partition diagram at t = n: entry (j, i) is 1 iff
/// labeling domain points by i and codomain points by j is constant on every
/// block. Generated by iterating block-value assignments only.
pub fn fiber_diagram(pi: &Diagram, n: usize) -> Result<FiberMatrix> {
    let a = pi.dom();
    let b = pi.cod();
    let mut out = FiberMatrix::zero(n, a, b)?;
    let blocks = pi.partition().blocks();
    let k = blocks.len();
    checked_pow(n, k)?;
    // odometer over assignments blocks → [n]
    let mut assignment = vec![0usize; k];
    loop {
        let mut labels = vec![0usize; a + b];
        for (bi, block) in blocks.iter().enumerate() {
            for &p in block {
                labels[p] = assignment[bi];
            }
        }
        let col = encode(&labels[..a], n);
        let row = encode(&labels[a..], n);
        out.insert_add(row, col, BigRational::one());
        // advance
        let mut pos = k;
        while pos > 0 {
            pos -= 1;
            assignment[pos] += 1;
            if assignment[pos] < n {
                break;
            }
            assignment[pos] = 0;
            if pos == 0 {
                return Ok(out);
            }
        }
        if k == 0 {
            return Ok(out);
        }
    }
}

/// Evaluates a morphism at t = n: scalars evaluated, diagrams fibered.
pub fn fiber_morphism(f: &Morphism, n: usize) -> Result<FiberMatrix> {
    let t0 = BigRational::from_integer(BigInt::from(n as i64));
    let mut out = FiberMatrix::zero(n, f.dom(), f.cod())?;
    for (d, c) in f.terms() {
        let v = c.evaluate(&t0)?;
        out = out.add(&fiber_diagram(d, n)?.scale(&v))?;
    }
    Ok(out)
}

/// The permutation matrix of σ ∈ S_n acting diagonally on [n]^power,
/// relabeling every leg's value.
pub fn leg_action(sigma: &Permutation, power: usize) -> Result<FiberMatrix> {
    let n = sigma.degree();
    let mut out = FiberMatrix::zero(n, power, power)?;
    let total = checked_pow(n, power)?;
    for col in 0..total {
        // decode, relabel, re-encode
        let mut digits = vec![0usize; power];
        let mut rest = col;
        for slot in digits.iter_mut().rev() {
            *slot = rest % n;
            rest /= n;
        }
        for d in digits.iter_mut() {
            *d = sigma.apply(*d);
        }
        out.insert_add(encode(&digits, n), col, BigRational::one());
    }
    Ok(out)
}

/// A finite-dimensional commutative Frobenius algebra presented by an
/// equivariant algebra together with a trace form on its basis.
pub struct FrobeniusData<'a> {
    pub algebra: &'a EquivariantAlgebra,
    /// form(b_i) for each basis vector; the pairing (x,y) ↦ form(xy) must be
    /// nondegenerate.
    pub form: Vec<BigRational>,
}

impl FrobeniusData<'_> {
    fn dim(&self) -> usize {
        self.algebra.dim()
    }

    fn form_of(&self, x: &[BigRational]) -> BigRational {
        self.form
            .iter()
            .zip(x)
            .map(|(f, v)| f * v)
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// Inverse Gram matrix of the pairing form(b_i·b_j).
    fn inverse_gram(&self) -> Result<Vec<Vec<BigRational>>> {
        let d = self.dim();
        let basis: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut v = vec![BigRational::zero(); d];
                v[i] = BigRational::one();
                v
            })
            .collect();
        let gram: Vec<Vec<Scalar>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        Scalar::from_rational(
                            self.form_of(&self.algebra.multiply(&basis[i], &basis[j])),
                        )
                    })
                    .collect()
            })
            .collect();
        let m = crate::linalg::Matrix::from_rows(gram)?;
        let inv = m
            .solve_right_inverse()
            .ok_or_else(|| Error::DegenerateForm("trace pairing is singular".into()))?;
        Ok((0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        inv.at(i, j)
                            .as_rational()
                            .cloned()
                            .unwrap_or_else(BigRational::zero)
                    })
                    .collect()
            })
            .collect())
    }
}

/// The matrix of a partition diagram under the Frobenius-algebra functor
/// determined by T: each block with r domain and s codomain points
/// contributes multiply-then-comultiply φ_{r,s}: T^{⊗r} → T → T^{⊗s}, and
/// the full matrix assembles the blocks along the diagram. Matrix indices
/// follow the same leg-0-most-significant convention, with radix dim T.
pub fn frobenius_functor(t: &FrobeniusData, pi: &Diagram) -> Result<Vec<Vec<BigRational>>> {
    let d = t.dim();
    let a = pi.dom();
    let b = pi.cod();
    checked_pow(d, a + b)?;
    let ginv = t.inverse_gram()?;
    let basis: Vec<Vec<BigRational>> = (0..d)
        .map(|i| {
            let mut v = vec![BigRational::zero(); d];
            v[i] = BigRational::one();
            v
        })
        .collect();
    // φ_{r,s} entry at (out multi-index over block cod points, in multi-index
    // over block dom points): form applied to the product of all inputs,
    // all outputs, and one inverse-Gram insertion per output leg. Concretely
    // φ_{r,s}(x_1⊗…⊗x_r) = Σ over (i_1,j_1)…(i_s,j_s) of
    //   Π_l g^{i_l j_l} · form(x_1⋯x_r · b_{j_1}⋯b_{j_s}) — computed here
    // recursively: first the product of inputs, then s comultiplications.
    // Δ(x) = Σ_{i,j} g^{ij} (x·b_i) ⊗ b_j reproduces the dual of μ.
    let comult = |x: &[BigRational]| -> Vec<Vec<BigRational>> {
        // returns a d×d table c[p][q] with Δ(x) = Σ c[p][q] b_p ⊗ b_q
        let mut table = vec![vec![BigRational::zero(); d]; d];
        for i in 0..d {
            let xi = t.algebra.multiply(x, &basis[i]);
            for j in 0..d {
                if ginv[i][j].is_zero() {
                    continue;
                }
                for (p, coef) in xi.iter().enumerate() {
                    if !coef.is_zero() {
                        table[p][j] += &ginv[i][j] * coef;
                    }
                }
            }
        }
        table
    };
    // per-block small matrices φ_{r,s}: dense d^s × d^r
    let blocks = pi.partition().blocks();
    let mut block_mats = vec![];
    for block in blocks {
        let dom_pts: Vec<usize> = block.iter().copied().filter(|&p| p < a).collect();
        let cod_pts: Vec<usize> = block.iter().copied().filter(|&p| p >= a).collect();
        let r = dom_pts.len();
        let s = cod_pts.len();
        let rows = d.pow(s as u32);
        let cols = d.pow(r as u32);
        let mut mat = vec![vec![BigRational::zero(); cols]; rows];
        for col in 0..cols {
            // multiply the r inputs
            let mut digits = vec![0usize; r];
            let mut rest = col;
            for slot in digits.iter_mut().rev() {
                *slot = rest % d;
                rest /= d;
            }
            let mut x: Vec<BigRational> = t
                .algebra
                .unit()
                .to_vec();
            for &dig in &digits {
                x = t.algebra.multiply(&x, &basis[dig]);
            }
            // comultiply into s outputs
            let mut states: Vec<(usize, Vec<BigRational>, BigRational)> =
                vec![(0, x, BigRational::one())];
            for _ in 0..s {
                let mut next = vec![];
                for (row_prefix, x, coef) in states {
                    let table = comult(&x);
                    for (p, row) in table.iter().enumerate() {
                        // carrier continues with b_q-weighted remainders
                        let mut rest_vec = vec![BigRational::zero(); d];
                        let mut any = false;
                        for (q, c) in row.iter().enumerate() {
                            if !c.is_zero() {
                                rest_vec[q] = c.clone();
                                any = true;
                            }
                        }
                        if any {
                            next.push((row_prefix * d + p, rest_vec, coef.clone()));
                        }
                    }
                }
                next = merge_states(next, d);
                states = next;
            }
            for (row_prefix, x, coef) in states {
                // the spent carrier closes with the form
                let v = &t.form_of(&x) * &coef;
                if !v.is_zero() {
                    mat[row_prefix][col] += v;
                }
            }
        }
        block_mats.push((cod_pts, dom_pts, mat));
    }
    // assemble: entry over full multi-indices is the product over blocks of
    // the block matrices evaluated at the restricted indices
    let total_rows = d.pow(b as u32);
    let total_cols = d.pow(a as u32);
    let mut out = vec![vec![BigRational::zero(); total_cols]; total_rows];
    for (row, out_row) in out.iter_mut().enumerate() {
        let mut rdigits = vec![0usize; b];
        let mut rest = row;
        for slot in rdigits.iter_mut().rev() {
            *slot = rest % d;
            rest /= d;
        }
        for (col, slot) in out_row.iter_mut().enumerate() {
            let mut cdigits = vec![0usize; a];
            let mut rest = col;
            for s in cdigits.iter_mut().rev() {
                *s = rest % d;
                rest /= d;
            }
            let mut acc = BigRational::one();
            let mut zero = false;
            for (cod_pts, dom_pts, mat) in &block_mats {
                let br: usize = cod_pts
                    .iter()
                    .fold(0, |acc, &p| acc * d + rdigits[p - a]);
                let bc: usize = dom_pts.iter().fold(0, |acc, &p| acc * d + cdigits[p]);
                let v = &mat[br][bc];
                if v.is_zero() {
                    zero = true;
                    break;
                }
                acc *= v;
            }
            if !zero {
                *slot = acc;
            }
        }
    }
    Ok(out)
}

/// Collapses duplicate (prefix, direction) comultiplication states. The
/// carrier vectors with the same output prefix add after weighting.
fn merge_states(
    states: Vec<(usize, Vec<BigRational>, BigRational)>,
    d: usize,
) -> Vec<(usize, Vec<BigRational>, BigRational)> {
    let mut merged: BTreeMap<usize, Vec<BigRational>> = BTreeMap::new();
    for (prefix, x, coef) in states {
        let slot = merged
            .entry(prefix)
            .or_insert_with(|| vec![BigRational::zero(); d]);
        for (s, v) in slot.iter_mut().zip(&x) {
            *s += v * &coef;
        }
    }
    merged
        .into_iter()
        .map(|(p, x)| (p, x, BigRational::one()))
        .collect()
}

/// Restricts the fibered multiplication and unit of an interpolated algebra
/// to the image of its carrier idempotent at t = n, producing a concrete
/// algebra with the S_n-action by value relabeling.
pub fn specialize_algebra(
    ambient: usize,
    idem: &Morphism,
    mult: &Morphism,
    unit: &Morphism,
    n: usize,
) -> Result<EquivariantAlgebra> {
    let p = fiber_morphism(idem, n)?;
    let ambient_dim = p.rows();
    // image basis by column reduction over Q
    let mut span = SpanBasis::new(ambient_dim);
    let mut basis: Vec<Vec<BigRational>> = vec![];
    let mut basis_labels = vec![];
    for c in 0..p.cols() {
        let col = p.column(c);
        if span.insert(&to_scalars(&col)) {
            basis.push(col);
            let mut digits = vec![0usize; ambient];
            let mut rest = c;
            for slot in digits.iter_mut().rev() {
                *slot = rest % n;
                rest /= n;
            }
            basis_labels.push(
                digits
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
            );
        }
    }
    let dim = basis.len();
    if dim == 0 {
        return Err(Error::ZeroCarrier(n));
    }
    if dim > limits().equivariant_dim {
        return Err(Error::LimitExceeded(format!(
            "specialized dimension {dim} exceeds limit {}",
            limits().equivariant_dim
        )));
    }
    let express = |v: &[BigRational], span: &SpanBasis| -> Result<Vec<BigRational>> {
        span.express(&to_scalars(v))
            .ok_or_else(|| Error::Invalid("vector escapes the carrier image".into()))?
            .into_iter()
            .map(|s| {
                s.as_rational()
                    .cloned()
                    .ok_or_else(|| Error::Invalid("non-rational coordinate".into()))
            })
            .collect()
    };
    // structure constants through the fibered multiplication
    let mult_matrix = fiber_morphism(mult, n)?;
    let mut table = BTreeMap::new();
    for i in 0..dim {
        for j in 0..dim {
            // v_i ⊗ v_j as a vector over [n]^{2·ambient}
            let mut arg = vec![BigRational::zero(); mult_matrix.cols()];
            for (ri, xi) in basis[i].iter().enumerate() {
                if xi.is_zero() {
                    continue;
                }
                for (rj, xj) in basis[j].iter().enumerate() {
                    if !xj.is_zero() {
                        arg[ri * ambient_dim + rj] = xi * xj;
                    }
                }
            }
            let prod = mult_matrix.apply(&arg)?;
            let coords = express(&prod, &span)?;
            let terms: Vec<(usize, BigRational)> = coords
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            if !terms.is_empty() {
                table.insert((i, j), terms);
            }
        }
    }
    let unit_vec = express(&fiber_morphism(unit, n)?.column(0), &span)?;
    // S_n action on the image, through the adjacent transpositions
    let mut generators = vec![];
    let mut actions = vec![];
    for idx in 0..n.saturating_sub(1) {
        let sigma = Permutation::transposition(n, idx, idx + 1);
        let act = leg_action(&sigma, ambient)?;
        let mut m = vec![vec![BigRational::zero(); dim]; dim];
        for (j, v) in basis.iter().enumerate() {
            let image = act.apply(v)?;
            for (r, c) in express(&image, &span)?.into_iter().enumerate() {
                m[r][j] = c;
            }
        }
        generators.push(sigma);
        actions.push(m);
    }
    EquivariantAlgebra::new(dim, table, unit_vec, generators, actions, basis_labels)
}

fn to_scalars(v: &[BigRational]) -> Vec<Scalar> {
    v.iter().map(|x| Scalar::from_rational(x.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{
        cup_cap, enumerate_diagrams, frobenius_generators, CupCap,
    };
    use crate::partitions::SetPartition;
    use crate::symgroup::{coset_algebra, is_simple_equivariant, PermGroup};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn one() -> BigRational {
        BigRational::one()
    }

    fn d_diag() -> Diagram {
        let p = SetPartition::new(2, vec![vec![0], vec![1]]).unwrap();
        Diagram::new(1, 1, p).unwrap()
    }

    #[test]
    fn identity_and_all_ones() {
        let id = fiber_diagram(&Diagram::identity(1), 4).unwrap();
        assert_eq!(id, FiberMatrix::identity(4, 1).unwrap());
        let j = fiber_diagram(&d_diag(), 3).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                assert_eq!(j.entry(r, c), one());
            }
        }
    }

    #[test]
    fn pointwise_multiplication_pattern() {
        let g = frobenius_generators();
        let (mu_diag, _) = g.mult.terms().next().unwrap();
        let m = fiber_diagram(mu_diag, 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for l in 0..3 {
                    let expected = if i == j && j == l { one() } else { BigRational::zero() };
                    assert_eq!(m.entry(i, j * 3 + l), expected);
                }
            }
        }
    }

    #[test]
    fn scalar_evaluation() {
        let td = Morphism::from_diagram(d_diag()).scale(&Scalar::t());
        let m = fiber_morphism(&td, 3).unwrap();
        assert_eq!(m.entry(0, 0), BigRational::from_integer(BigInt::from(3)));
        // pole detection: 1/(t−3) at t = 3
        let pole = Morphism::from_diagram(d_diag()).scale(
            &Scalar::one()
                .checked_div(&(&Scalar::t() - &Scalar::from_int(3)))
                .unwrap(),
        );
        assert!(fiber_morphism(&pole, 3).is_err());
    }

    #[test]
    fn functoriality_exhaustive_small() {
        // all composable diagram pairs with boundaries ≤ 2 at n = 3: the
        // honest-matrix oracle for the t^d composition rule
        let n = 3;
        for a in 0..=2usize {
            for b in 0..=2usize {
                for c in 0..=2usize {
                    for pi in enumerate_diagrams(a, b).unwrap() {
                        for rho in enumerate_diagrams(b, c).unwrap() {
                            let sym = Morphism::from_diagram(rho.clone())
                                .compose(&Morphism::from_diagram(pi.clone()))
                                .unwrap();
                            let lhs = fiber_morphism(&sym, n).unwrap();
                            let rhs = fiber_diagram(&rho, n)
                                .unwrap()
                                .matmul(&fiber_diagram(&pi, n).unwrap())
                                .unwrap();
                            assert_eq!(lhs, rhs, "π: {pi:?}, ρ: {rho:?}");
                        }
                    }
                }
            }
        }
    }

    fn random_morphism(rng: &mut StdRng, a: usize, b: usize) -> Morphism {
        let diagrams = enumerate_diagrams(a, b).unwrap();
        let terms = (0..rng.gen_range(1..4))
            .map(|_| {
                let d = diagrams[rng.gen_range(0..diagrams.len())].clone();
                (d, Scalar::from_int(rng.gen_range(-3..4)))
            })
            .collect();
        Morphism::from_terms(a, b, terms).unwrap()
    }

    #[test]
    fn functoriality_random_morphisms() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..40 {
            let (a, b, c) = (
                rng.gen_range(0..=2),
                rng.gen_range(0..=3),
                rng.gen_range(0..=2),
            );
            let f = random_morphism(&mut rng, a, b);
            let g = random_morphism(&mut rng, b, c);
            let n = rng.gen_range(2..=4);
            let lhs = fiber_morphism(&g.compose(&f).unwrap(), n).unwrap();
            let rhs = fiber_morphism(&g, n)
                .unwrap()
                .matmul(&fiber_morphism(&f, n).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn monoidality_and_equivariance() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..25 {
            let (fa, fb) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
            let (ga, gb) = (rng.gen_range(0..=1), rng.gen_range(0..=2));
            let f = random_morphism(&mut rng, fa, fb);
            let g = random_morphism(&mut rng, ga, gb);
            let n = rng.gen_range(2..=4);
            let lhs = fiber_morphism(&f.tensor(&g), n).unwrap();
            let rhs = fiber_morphism(&f, n)
                .unwrap()
                .kron(&fiber_morphism(&g, n).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs, "monoidality");
            // equivariance against every adjacent transposition
            let m = fiber_morphism(&f, n).unwrap();
            for i in 0..n - 1 {
                let sigma = Permutation::transposition(n, i, i + 1);
                let dom_act = leg_action(&sigma, f.dom()).unwrap();
                let cod_act = leg_action(&sigma, f.cod()).unwrap();
                assert_eq!(
                    cod_act.matmul(&m).unwrap(),
                    m.matmul(&dom_act).unwrap(),
                    "equivariance"
                );
            }
        }
    }

    #[test]
    fn trace_matches_closure() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..25 {
            let k = rng.gen_range(0..=2);
            let f = random_morphism(&mut rng, k, k);
            let n = rng.gen_range(2..=4);
            let honest = fiber_morphism(&f, n).unwrap().trace().unwrap();
            let symbolic = f
                .closure_trace()
                .unwrap()
                .evaluate(&BigRational::from_integer(BigInt::from(n as i64)))
                .unwrap();
            assert_eq!(honest, symbolic);
        }
    }

    fn pointwise_frobenius(n: usize) -> (EquivariantAlgebra, Vec<BigRational>) {
        let alg = coset_algebra(n, &PermGroup::symmetric_on_last(n, n - 1)).unwrap();
        let form = vec![BigRational::one(); n];
        (alg, form)
    }

    #[test]
    fn frobenius_functor_matches_fiber() {
        for n in 2..=3usize {
            let (alg, form) = pointwise_frobenius(n);
            let data = FrobeniusData {
                algebra: &alg,
                form,
            };
            for a in 0..=2usize {
                for b in 0..=2usize {
                    if a + b > 4 {
                        continue;
                    }
                    for pi in enumerate_diagrams(a, b).unwrap() {
                        let dense = frobenius_functor(&data, &pi).unwrap();
                        let sparse = fiber_diagram(&pi, n).unwrap();
                        for (r, row) in dense.iter().enumerate() {
                            for (c, v) in row.iter().enumerate() {
                                assert_eq!(*v, sparse.entry(r, c), "π: {pi:?} at ({r},{c})");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_dimension_is_two() {
        // closing a single strand on C² pointwise measures dim T = 2
        let (alg, form) = pointwise_frobenius(2);
        let data = FrobeniusData {
            algebra: &alg,
            form,
        };
        let cup = cup_cap(1, CupCap::Cup);
        let cap = cup_cap(1, CupCap::Cap);
        let (cup_d, _) = cup.terms().next().unwrap();
        let (cap_d, _) = cap.terms().next().unwrap();
        let mc = frobenius_functor(&data, cup_d).unwrap();
        let mk = frobenius_functor(&data, cap_d).unwrap();
        // 1×4 times 4×1
        let mut total = BigRational::zero();
        for i in 0..4 {
            total += &mk[0][i] * &mc[i][0];
        }
        assert_eq!(total, BigRational::from_integer(BigInt::from(2)));
    }

    #[test]
    fn frobenius_functoriality_random() {
        let (alg, form) = pointwise_frobenius(3);
        let data = FrobeniusData {
            algebra: &alg,
            form,
        };
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..10 {
            let (a, b, c) = (
                rng.gen_range(0..=2),
                rng.gen_range(0..=2),
                rng.gen_range(0..=2),
            );
            let ds1 = enumerate_diagrams(a, b).unwrap();
            let ds2 = enumerate_diagrams(b, c).unwrap();
            let pi = &ds1[rng.gen_range(0..ds1.len())];
            let rho = &ds2[rng.gen_range(0..ds2.len())];
            let (composite, d_exp) = rho.compose(pi).unwrap();
            let m_pi = frobenius_functor(&data, pi).unwrap();
            let m_rho = frobenius_functor(&data, rho).unwrap();
            let m_comp = frobenius_functor(&data, &composite).unwrap();
            let dim_pow = BigRational::from_integer(BigInt::from(3i64.pow(d_exp as u32)));
            // product = dim^d · composite
            let rows = 3usize.pow(c as u32);
            let cols = 3usize.pow(a as u32);
            for r in 0..rows {
                for cc in 0..cols {
                    let mut acc = BigRational::zero();
                    for m in 0..3usize.pow(b as u32) {
                        acc += &m_rho[r][m] * &m_pi[m][cc];
                    }
                    assert_eq!(acc, &m_comp[r][cc] * &dim_pow);
                }
            }
        }
    }

    #[test]
    fn specialize_generating_object() {
        let g = frobenius_generators();
        let alg =
            specialize_algebra(1, &Morphism::identity(1), &g.mult, &g.unit, 3).unwrap();
        assert_eq!(alg.dim(), 3);
        alg.validate().unwrap();
        assert!(is_simple_equivariant(&alg).unwrap().simple);
        // unit is the all-ones function
        assert_eq!(alg.unit(), vec![one(); 3]);
    }

    #[test]
    fn fiber_matrix_json_round_trip() {
        let m = fiber_diagram(&d_diag(), 3).unwrap().scale(
            &BigRational::new(BigInt::from(1), BigInt::from(2)),
        );
        let text = serde_json::to_string(&m).unwrap();
        let back: FiberMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }
}
