//! Exact linear algebra over the scalar tower. Rank and determinant go
//! through fraction-free Bareiss elimination over Q[t] after clearing row
//! denominators; solving and incremental span tracking work directly over the
//! fraction field Q(t).

use crate::error::{Error, Result};
use crate::scalars::{Poly, Scalar};

/// Dense matrix of exact scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>, // row-major
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_columns(cols: Vec<Vec<Scalar>>) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        if cols.iter().any(|col| col.len() != r) {
            return Err(Error::DimensionMismatch("ragged columns".into()));
        }
        let mut m = Matrix::zero(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                *m.at_mut(i, j) = v.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        &mut self.entries[i * self.cols + j]
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(i, j).clone();
                    *out.at_mut(i, j) = &cur + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for j in 0..self.cols {
                    if !v[j].is_zero() && !self.at(i, j).is_zero() {
                        acc = &acc + &(self.at(i, j) * &v[j]);
                    }
                }
                acc
            })
            .collect())
    }

    /// Evaluates every entry at t = t0.
    pub fn evaluate(&self, t0: &num::BigRational) -> Result<Matrix> {
        let entries = self
            .entries
            .iter()
            .map(|s| s.evaluate(t0).map(Scalar::from_rational))
            .collect::<Result<_>>()?;
        Matrix::new(self.rows, self.cols, entries)
    }

    /// Clears denominators row by row; returns the polynomial matrix and the
    /// per-row multiplier polynomials.
    fn clear_denominators(&self) -> (Vec<Vec<Poly>>, Vec<Poly>) {
        let mut rows = Vec::with_capacity(self.rows);
        let mut multipliers = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut m = Poly::one();
            for j in 0..self.cols {
                let (_, d) = self.at(i, j).to_fraction();
                let g = m.gcd(&d);
                m = &m * &d.exact_div(&g);
            }
            let row: Vec<Poly> = (0..self.cols)
                .map(|j| {
                    let (n, d) = self.at(i, j).to_fraction();
                    &n * &m.exact_div(&d)
                })
                .collect();
            rows.push(row);
            multipliers.push(m);
        }
        (rows, multipliers)
    }

    /// Rank over the fraction field Q(t), by fraction-free Bareiss
    /// elimination over Q[t].
    pub fn rank(&self) -> usize {
        let (mut m, _) = self.clear_denominators();
        bareiss(&mut m, self.rows, self.cols).0
    }

    /// Exact determinant by fraction-free elimination.
    pub fn det(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Scalar::one());
        }
        let (mut m, multipliers) = self.clear_denominators();
        let (rank, sign, last_pivot) = bareiss(&mut m, n, n);
        if rank < n {
            return Ok(Scalar::zero());
        }
        let mut det = last_pivot;
        if sign < 0 {
            det = -&det;
        }
        let mut den = Poly::one();
        for mult in multipliers {
            den = &den * &mult;
        }
        Scalar::from_fraction(det, den)
    }

    /// A matrix X with self · X = identity, if one exists over Q(t).
    pub fn solve_right_inverse(&self) -> Option<Matrix> {
        let mut cols = Vec::with_capacity(self.rows);
        for j in 0..self.rows {
            let mut e = vec![Scalar::zero(); self.rows];
            e[j] = Scalar::one();
            cols.push(self.solve(&e)?);
        }
        Some(Matrix::from_columns(cols).unwrap())
    }

    /// One solution x of self · x = b over Q(t), or None if inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "rhs length");
        let mut aug: Vec<Vec<Scalar>> = (0..self.rows)
            .map(|i| {
                let mut row: Vec<Scalar> =
                    (0..self.cols).map(|j| self.at(i, j).clone()).collect();
                row.push(b[i].clone());
                row
            })
            .collect();
        let mut pivot_cols = vec![];
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| !aug[i][c].is_zero()) else {
                continue;
            };
            aug.swap(r, p);
            let inv = aug[r][c].recip().unwrap();
            for v in aug[r].iter_mut() {
                *v = &*v * &inv;
            }
            for i in 0..self.rows {
                if i != r && !aug[i][c].is_zero() {
                    let f = aug[i][c].clone();
                    for j in 0..=self.cols {
                        let sub = &aug[r][j] * &f;
                        aug[i][j] = &aug[i][j] - &sub;
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        // inconsistent if a zero row has nonzero rhs
        for i in r..self.rows {
            if !aug[i][self.cols].is_zero() {
                return None;
            }
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, &c) in pivot_cols.iter().enumerate() {
            x[c] = aug[row][self.cols].clone();
        }
        Some(x)
    }

    /// A basis of the right kernel {x : self · x = 0} over Q(t).
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        // row-reduce a working copy, remembering pivot columns
        let mut m: Vec<Vec<Scalar>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j).clone()).collect())
            .collect();
        let mut pivot_cols = vec![];
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][c].recip().unwrap();
            for v in m[r].iter_mut() {
                *v = &*v * &inv;
            }
            for i in 0..self.rows {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    for j in 0..self.cols {
                        let sub = &m[r][j] * &f;
                        m[i][j] = &m[i][j] - &sub;
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        let mut basis = vec![];
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (row, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -&m[row][free];
            }
            basis.push(v);
        }
        basis
    }
}

/// Bareiss elimination in place over Q[t] with partial (first-nonzero)
/// pivoting. Returns (rank, swap sign, final pivot).
fn bareiss(m: &mut [Vec<Poly>], rows: usize, cols: usize) -> (usize, i32, Poly) {
    let mut prev = Poly::one();
    let mut sign = 1;
    let mut r = 0;
    let mut last_pivot = Poly::one();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            sign = -sign;
        }
        let pivot = m[r][c].clone();
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = &(&pivot * &m[i][j]) - &(&m[i][c] * &m[r][j]);
                m[i][j] = num.exact_div(&prev);
            }
            m[i][c] = Poly::zero();
        }
        prev = pivot.clone();
        last_pivot = pivot;
        r += 1;
    }
    (r, sign, last_pivot)
}

/// Incrementally maintained echelon basis of a span over Q(t), tracking how
/// each reduced row combines the inserted independent vectors so that
/// arbitrary vectors can be re-expressed in that original set.
pub struct SpanBasis {
    dim: usize,
    // (pivot column, normalized reduced vector, combination over kept inputs)
    rows: Vec<(usize, Vec<Scalar>, Vec<Scalar>)>,
}

impl SpanBasis {
    pub fn new(dim: usize) -> Self {
        SpanBasis { dim, rows: vec![] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
        assert_eq!(v.len(), self.dim, "vector dimension");
        let mut v = v.to_vec();
        let mut comb = vec![Scalar::zero(); self.rows.len()];
        for (k, (p, row, row_comb)) in self.rows.iter().enumerate() {
            let coef = v[*p].clone();
            if coef.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if !row[j].is_zero() {
                    let sub = &row[j] * &coef;
                    v[j] = &v[j] - &sub;
                }
            }
            for (j, c) in row_comb.iter().enumerate() {
                if !c.is_zero() {
                    let add = c * &coef;
                    comb[j] = &comb[j] + &add;
                }
            }
            debug_assert!(comb.len() > k);
        }
        (v, comb)
    }

    /// Inserts a vector; returns true if it enlarged the span (in which case
    /// it becomes basis element number rank−1, in insertion order).
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let (mut red, mut comb) = self.reduce(v);
        let Some(p) = red.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = red[p].recip().unwrap();
        for x in red.iter_mut() {
            *x = &*x * &inv;
        }
        // reduced = inv · (v − Σ comb_j · b_j)
        for c in comb.iter_mut() {
            *c = &(-&*c) * &inv;
        }
        comb.push(inv);
        self.rows.push((p, red, comb));
        true
    }

    /// Expresses a vector as a combination of the inserted independent
    /// vectors, or None if it lies outside the span.
    pub fn express(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let (red, comb) = self.reduce(v);
        if red.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(comb)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.express(v).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::bigint::BigInt;
    use num::rational::BigRational;
    use proptest::prelude::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn t() -> Scalar {
        Scalar::t()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(3).rank(), 3);
        let m = Matrix::from_rows(vec![
            vec![t(), Scalar::t_pow(2)],
            vec![s(1), t()],
        ])
        .unwrap();
        assert_eq!(m.rank(), 1);
        let m = Matrix::from_rows(vec![vec![t(), s(1)], vec![s(1), t()]]).unwrap();
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn det_examples() {
        assert_eq!(Matrix::identity(4).det().unwrap(), Scalar::one());
        let m = Matrix::from_rows(vec![vec![t(), s(1)], vec![s(1), t()]]).unwrap();
        assert_eq!(m.det().unwrap(), &Scalar::t_pow(2) - &Scalar::one());
        let singular = Matrix::from_rows(vec![
            vec![t(), Scalar::t_pow(2)],
            vec![s(1), t()],
        ])
        .unwrap();
        assert_eq!(singular.det().unwrap(), Scalar::zero());
        assert!(Matrix::zero(2, 3).det().is_err());
    }

    #[test]
    fn det_with_ratfun_entries() {
        // [[1/t, 1], [0, t]] has determinant 1
        let inv_t = Scalar::one().checked_div(&t()).unwrap();
        let m = Matrix::from_rows(vec![
            vec![inv_t, s(1)],
            vec![s(0), t()],
        ])
        .unwrap();
        assert_eq!(m.det().unwrap(), Scalar::one());
    }

    #[test]
    fn right_inverse_examples() {
        let id = Matrix::identity(3);
        assert_eq!(id.solve_right_inverse().unwrap(), id);
        let wide = Matrix::from_rows(vec![vec![s(1), t()]]).unwrap();
        let x = wide.solve_right_inverse().unwrap();
        assert_eq!(wide.mul(&x).unwrap(), Matrix::identity(1));
        let tall = Matrix::from_rows(vec![vec![s(1)], vec![t()]]).unwrap();
        assert!(tall.solve_right_inverse().is_none());
    }

    #[test]
    fn solve_consistency() {
        let m = Matrix::from_rows(vec![
            vec![t(), s(1), s(0)],
            vec![s(0), t(), s(1)],
        ])
        .unwrap();
        let b = vec![s(1), s(2)];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.apply(&x).unwrap(), b);
        // inconsistent system
        let m2 = Matrix::from_rows(vec![vec![s(1), s(1)], vec![s(2), s(2)]]).unwrap();
        assert!(m2.solve(&[s(0), s(1)]).is_none());
    }

    #[test]
    fn span_basis_express_round_trip() {
        let mut span = SpanBasis::new(3);
        let v0 = vec![t(), s(1), s(0)];
        let v1 = vec![s(0), s(1), s(1)];
        assert!(span.insert(&v0));
        assert!(span.insert(&v1));
        // 2·v0 − t·v1
        let w: Vec<Scalar> = (0..3)
            .map(|j| &(&s(2) * &v0[j]) - &(&t() * &v1[j]))
            .collect();
        assert!(span.contains(&w));
        let comb = span.express(&w).unwrap();
        assert_eq!(comb, vec![s(2), -&t()]);
        assert!(span.express(&[s(0), s(0), s(1)]).is_none());
    }

    fn arb_small_matrix() -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(
            (-4i64..5, 0u8..3),
            9,
        )
        .prop_map(|cells| {
            let entries = cells
                .into_iter()
                .map(|(c, d)| &Scalar::from_int(c) * &Scalar::t_pow(d as usize))
                .collect();
            Matrix::new(3, 3, entries).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn det_is_multiplicative(a in arb_small_matrix(), b in arb_small_matrix()) {
            let lhs = a.mul(&b).unwrap().det().unwrap();
            let rhs = &a.det().unwrap() * &b.det().unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn rank_cross_checked_by_evaluation(m in arb_small_matrix()) {
            let symbolic = m.rank();
            // three independent evaluation points; evaluation can only lower
            // rank, and agreement on any point pins it
            let mut best = 0;
            for p in [5i64, 7, 11] {
                let x = BigRational::from_integer(BigInt::from(p));
                best = best.max(m.evaluate(&x).unwrap().rank());
            }
            prop_assert_eq!(symbolic, best);
        }
    }
}
