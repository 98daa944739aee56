//! Smith normal form over the integers with overflow-checked `i64` arithmetic.

use std::fmt;

use crate::error::{Error, Result};

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn checked_mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0i64;
                for k in 0..self.cols {
                    acc = self
                        .get(i, k)
                        .checked_mul(other.get(k, j))
                        .and_then(|x| acc.checked_add(x))
                        .ok_or(Error::Overflow("matrix product"))?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] -= f * row[src]`
    fn row_sub(&mut self, dst: usize, src: usize, f: i64) -> Result<()> {
        for j in 0..self.cols {
            let v = f
                .checked_mul(self.get(src, j))
                .and_then(|x| self.get(dst, j).checked_sub(x))
                .ok_or(Error::Overflow("smith normal form"))?;
            self.set(dst, j, v);
        }
        Ok(())
    }

    /// `col[dst] -= f * col[src]`
    fn col_sub(&mut self, dst: usize, src: usize, f: i64) -> Result<()> {
        for i in 0..self.rows {
            let v = f
                .checked_mul(self.get(i, src))
                .and_then(|x| self.get(i, dst).checked_sub(x))
                .ok_or(Error::Overflow("smith normal form"))?;
            self.set(i, dst, v);
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) -> Result<()> {
        for j in 0..self.cols {
            let v = self
                .get(i, j)
                .checked_neg()
                .ok_or(Error::Overflow("smith normal form"))?;
            self.set(i, j, v);
        }
        Ok(())
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i)))
            .finish()
    }
}

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    /// Nonzero diagonal entries of `D`, all positive.
    pub fn invariant_factors(&self) -> Vec<i64> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|k| self.d.get(k, k))
            .take_while(|&x| x != 0)
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// `x / d` rounded to the nearest integer, so `|x - f·d| <= |d| / 2`.
fn nearest_quotient(x: i64, d: i64) -> i64 {
    let f = x.div_euclid(d);
    let r = x.rem_euclid(d);
    if 2 * r as i128 > d.unsigned_abs() as i128 {
        f + d.signum()
    } else {
        f
    }
}

/// Smallest-magnitude nonzero entry of the trailing submatrix `[t.., t..]`.
fn smallest_nonzero(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, u64)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = a.get(i, j).unsigned_abs();
            if v != 0 && best.is_none_or(|b| v < b.2) {
                best = Some((i, j, v));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

pub fn smith_normal_form(m: &IntMatrix) -> Result<SnfDecomposition> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = smallest_nonzero(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let piv = a.get(t, t);
            for i in t + 1..rows {
                let f = nearest_quotient(a.get(i, t), piv);
                if f != 0 {
                    a.row_sub(i, t, f)?;
                    u.row_sub(i, t, f)?;
                }
            }
            for j in t + 1..cols {
                let f = nearest_quotient(a.get(t, j), piv);
                if f != 0 {
                    a.col_sub(j, t, f)?;
                    v.col_sub(j, t, f)?;
                }
            }

            // Leftover remainders are strictly smaller than the pivot: bring
            // the smallest one to (t, t) and sweep again.
            let col_rest = (t + 1..rows)
                .filter(|&i| a.get(i, t) != 0)
                .min_by_key(|&i| a.get(i, t).unsigned_abs());
            let row_rest = (t + 1..cols)
                .filter(|&j| a.get(t, j) != 0)
                .min_by_key(|&j| a.get(t, j).unsigned_abs());
            match (col_rest, row_rest) {
                (Some(i), Some(j)) if a.get(t, j).unsigned_abs() < a.get(i, t).unsigned_abs() => {
                    a.swap_cols(t, j);
                    v.swap_cols(t, j);
                    continue;
                }
                (Some(i), _) => {
                    a.swap_rows(t, i);
                    u.swap_rows(t, i);
                    continue;
                }
                (None, Some(j)) => {
                    a.swap_cols(t, j);
                    v.swap_cols(t, j);
                    continue;
                }
                (None, None) => {}
            }

            // Row and column are clear. Enforce d_t | every remaining entry.
            let bad_row = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a.get(i, j) % piv != 0));
            match bad_row {
                Some(i) => {
                    a.row_sub(t, i, -1)?;
                    u.row_sub(t, i, -1)?;
                }
                None => break,
            }
        }

        if a.get(t, t) < 0 {
            a.negate_row(t)?;
            u.negate_row(t)?;
        }
    }

    Ok(SnfDecomposition { u, d: a, v })
}
