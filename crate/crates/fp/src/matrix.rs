use crate::PrimeField;

/// Matrices larger than this (in either dimension) are row reduced through
/// the sparse elimination path. Both paths use identical pivoting, so the
/// choice is invisible in the output.
pub const SPARSE_THRESHOLD: usize = 256;

/// A dense row-major matrix over F_p. Entries are always reduced to `[0, p)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

/// Result of row reduction: the rank, the pivot columns in increasing order,
/// and the reduced row-echelon form itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub reduced: FpMatrix,
}

impl FpMatrix {
    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> Self {
        FpMatrix { field, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Build a matrix from rows, reducing every entry mod p.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zero(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {i}");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, field.reduce(x));
            }
        }
        m
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.entries[r * self.cols + c] = v % self.field.p();
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u32;
                for j in 0..self.cols {
                    acc = f.add(acc, f.mul(self.get(i, j), v[j]));
                }
                acc
            })
            .collect()
    }

    /// Reduced row-echelon form with deterministic pivoting: scan columns left
    /// to right, take the first row with a nonzero entry at or below the
    /// current pivot row.
    pub fn rref(&self) -> Rref {
        if self.rows.max(self.cols) > SPARSE_THRESHOLD {
            self.rref_sparse()
        } else {
            self.rref_dense()
        }
    }

    fn rref_dense(&self) -> Rref {
        let f = self.field;
        let p = f.p();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0usize;
        for col in 0..m.cols {
            if pivot_row >= m.rows {
                break;
            }
            let found = (pivot_row..m.rows).find(|&r| m.get(r, col) != 0);
            let src = match found {
                Some(r) => r,
                None => continue,
            };
            if src != pivot_row {
                for j in 0..m.cols {
                    let a = m.get(src, j);
                    let b = m.get(pivot_row, j);
                    m.set(src, j, b);
                    m.set(pivot_row, j, a);
                }
            }
            let inv = f.inv(m.get(pivot_row, col));
            if inv != 1 {
                for j in col..m.cols {
                    let v = m.get(pivot_row, j);
                    m.set(pivot_row, j, f.mul(v, inv));
                }
            }
            for r in 0..m.rows {
                if r == pivot_row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                let neg = p - factor;
                for j in col..m.cols {
                    let v = f.add(m.get(r, j), f.mul(neg, m.get(pivot_row, j)));
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        Rref { rank: pivots.len(), pivots, reduced: m }
    }

    fn rref_sparse(&self) -> Rref {
        use std::collections::BTreeMap;
        let f = self.field;
        // Rows as sorted maps column -> entry.
        let mut rows: Vec<BTreeMap<usize, u32>> = (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .filter_map(|c| {
                        let v = self.get(r, c);
                        (v != 0).then_some((c, v))
                    })
                    .collect()
            })
            .collect();
        let mut pivots = Vec::new();
        let mut pivot_row = 0usize;
        for col in 0..self.cols {
            if pivot_row >= self.rows {
                break;
            }
            let found = (pivot_row..self.rows).find(|&r| rows[r].contains_key(&col));
            let src = match found {
                Some(r) => r,
                None => continue,
            };
            rows.swap(src, pivot_row);
            let inv = f.inv(rows[pivot_row][&col]);
            if inv != 1 {
                for v in rows[pivot_row].values_mut() {
                    *v = f.mul(*v, inv);
                }
            }
            let pivot = rows[pivot_row].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == pivot_row {
                    continue;
                }
                let factor = match row.get(&col) {
                    Some(&v) => v,
                    None => continue,
                };
                let neg = f.neg(factor);
                for (&c, &pv) in &pivot {
                    let cur = row.get(&c).copied().unwrap_or(0);
                    let nv = f.add(cur, f.mul(neg, pv));
                    if nv == 0 {
                        row.remove(&c);
                    } else {
                        row.insert(c, nv);
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        let mut reduced = FpMatrix::zero(f, self.rows, self.cols);
        for (r, row) in rows.iter().enumerate() {
            for (&c, &v) in row {
                reduced.set(r, c, v);
            }
        }
        Rref { rank: pivots.len(), pivots, reduced }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Solve `M x = rhs`, returning a particular solution with free variables
    /// set to zero, or `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(rhs.len(), self.rows);
        let f = self.field;
        let mut aug = FpMatrix::zero(f, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, rhs[r]);
        }
        let red = aug.rref();
        if red.pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (row, &pc) in red.pivots.iter().enumerate() {
            x[pc] = red.reduced.get(row, self.cols);
        }
        Some(x)
    }

    /// Basis of the right kernel {v : M v = 0}, one vector per free column,
    /// in increasing free-column order.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let f = self.field;
        let Rref { pivots, reduced, .. } = self.rref();
        let pivot_set: Vec<bool> = {
            let mut s = vec![false; self.cols];
            for &c in &pivots {
                s[c] = true;
            }
            s
        };
        let mut basis = Vec::new();
        for fc in 0..self.cols {
            if pivot_set[fc] {
                continue;
            }
            let mut v = vec![0u32; self.cols];
            v[fc] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(reduced.get(row, fc));
            }
            basis.push(v);
        }
        basis
    }
}

impl std::fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    #[test]
    fn rref_identity() {
        let m = FpMatrix::identity(f3(), 2);
        let r = m.rref();
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.reduced, m);
    }

    #[test]
    fn rref_zero() {
        let m = FpMatrix::zero(f3(), 3, 4);
        let r = m.rref();
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn rref_dependent_rows() {
        // Second row is 2x the first mod 3.
        let m = FpMatrix::from_rows(f3(), &[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.rref().rank, 1);
    }

    #[test]
    fn kernel_identity_empty() {
        let m = FpMatrix::identity(f3(), 4);
        assert!(m.kernel_basis().is_empty());
    }

    #[test]
    fn kernel_zero_full() {
        let m = FpMatrix::zero(f3(), 2, 3);
        assert_eq!(m.kernel_basis().len(), 3);
    }

    #[test]
    fn kernel_f2_line() {
        // Oracle: enumerate all 4 vectors of F_2^2 and keep those killed by M.
        let f2 = PrimeField::new(2).unwrap();
        let m = FpMatrix::from_rows(f2, &[vec![1, 1]]);
        let mut expected = Vec::new();
        for a in 0..2u32 {
            for b in 0..2u32 {
                let v = vec![a, b];
                if m.apply(&v).iter().all(|&x| x == 0) && (a, b) != (0, 0) {
                    expected.push(v);
                }
            }
        }
        assert_eq!(expected, vec![vec![1, 1]]);
        assert_eq!(m.kernel_basis(), vec![vec![1, 1]]);
    }

    // Small deterministic generator so the property checks below are
    // reproducible without pulling in an RNG crate.
    fn xorshift(state: &mut u64) -> u64 {
        let mut x = *state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        *state = x;
        x
    }

    fn random_matrix(field: PrimeField, rows: usize, cols: usize, state: &mut u64) -> FpMatrix {
        let mut m = FpMatrix::zero(field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, (xorshift(state) % field.p() as u64) as u32);
            }
        }
        m
    }

    #[test]
    fn rank_nullity_random() {
        let mut state = 0x1234_5678_9abc_def1;
        for p in [2u32, 3, 5, 7] {
            let field = PrimeField::new(p).unwrap();
            for _ in 0..50 {
                let rows = 1 + (xorshift(&mut state) % 8) as usize;
                let cols = 1 + (xorshift(&mut state) % 8) as usize;
                let m = random_matrix(field, rows, cols, &mut state);
                assert_eq!(m.rank() + m.kernel_basis().len(), cols);
                for v in m.kernel_basis() {
                    assert!(m.apply(&v).iter().all(|&x| x == 0));
                }
            }
        }
    }

    #[test]
    fn rref_idempotent_random() {
        let mut state = 0xdead_beef_cafe_1234;
        let field = PrimeField::new(5).unwrap();
        for _ in 0..50 {
            let m = random_matrix(field, 6, 7, &mut state);
            let r = m.rref();
            let r2 = r.reduced.rref();
            assert_eq!(r.reduced, r2.reduced);
            assert_eq!(r.pivots, r2.pivots);
        }
    }

    #[test]
    fn sparse_matches_dense() {
        let mut state = 0x0bad_5eed_0bad_5eed;
        for p in [2u32, 3, 5] {
            let field = PrimeField::new(p).unwrap();
            for _ in 0..30 {
                let m = random_matrix(field, 9, 11, &mut state);
                let dense = m.rref_dense();
                let sparse = m.rref_sparse();
                assert_eq!(dense.rank, sparse.rank);
                assert_eq!(dense.pivots, sparse.pivots);
                assert_eq!(dense.reduced, sparse.reduced);
            }
        }
    }

    #[test]
    fn deterministic_repeat() {
        let mut s1 = 42u64;
        let mut s2 = 42u64;
        let field = PrimeField::new(7).unwrap();
        let a = random_matrix(field, 10, 10, &mut s1);
        let b = random_matrix(field, 10, 10, &mut s2);
        assert_eq!(a, b);
        assert_eq!(a.rref(), b.rref());
        assert_eq!(a.kernel_basis(), b.kernel_basis());
    }
}
