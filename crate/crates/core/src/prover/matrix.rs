use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{common_denominator, format_rational, BigInt, Rational};

/// Which construction a [`StructuredMatrix`] instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    /// Monomial-Ansatz system A(k).
    SystemA,
    /// Constrained system built by the generic linearizer.
    SystemM,
    /// Block matrix M assembled from its closed-form band description.
    ClosedFormM,
    /// Parameterized reduction M^X.
    MX,
    /// Parameterized matrix M^Z.
    MZ,
    /// Obtained from another matrix by row operations or deletions.
    Derived,
    Custom,
}

/// Dense rational matrix with canonical row/column labels.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuredMatrix {
    pub kind: MatrixKind,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Rational>>,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

impl StructuredMatrix {
    pub fn zeros(kind: MatrixKind, row_labels: Vec<String>, col_labels: Vec<String>) -> Self {
        let rows = row_labels.len();
        let cols = col_labels.len();
        StructuredMatrix {
            kind,
            rows,
            cols,
            entries: vec![vec![Rational::zero(); cols]; rows],
            row_labels,
            col_labels,
        }
    }

    /// Numbered labels `0..n` on both axes.
    pub fn with_size(kind: MatrixKind, rows: usize, cols: usize) -> Self {
        Self::zeros(
            kind,
            (0..rows).map(|i| i.to_string()).collect(),
            (0..cols).map(|j| j.to_string()).collect(),
        )
    }

    pub fn from_rows(kind: MatrixKind, entries: Vec<Vec<Rational>>) -> Result<Self> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        if entries.iter().any(|r| r.len() != cols) {
            return Err(Error::domain("ragged matrix rows"));
        }
        let mut m = Self::with_size(kind, rows, cols);
        m.entries = entries;
        Ok(m)
    }

    pub fn from_ints(entries: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            MatrixKind::Custom,
            entries
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|&v| Rational::from_integer(v.into()))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::with_size(MatrixKind::Custom, n, n);
        for i in 0..n {
            m.entries[i][i] = Rational::one();
        }
        m
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i][j] = v;
    }

    /// Keeps the listed rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> StructuredMatrix {
        StructuredMatrix {
            kind: MatrixKind::Derived,
            rows: rows.len(),
            cols: cols.len(),
            entries: rows
                .iter()
                .map(|&i| cols.iter().map(|&j| self.entries[i][j].clone()).collect())
                .collect(),
            row_labels: rows.iter().map(|&i| self.row_labels[i].clone()).collect(),
            col_labels: cols.iter().map(|&j| self.col_labels[j].clone()).collect(),
        }
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries
            .iter()
            .map(|r| r.iter().filter(|v| !v.is_zero()).count())
            .sum()
    }

    /// Positions where two equally sized matrices differ.
    pub fn differences(&self, other: &StructuredMatrix) -> Vec<(usize, usize)> {
        if self.rows != other.rows || self.cols != other.cols {
            return vec![(self.rows.max(other.rows), self.cols.max(other.cols))];
        }
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.entries[i][j] != other.entries[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

impl fmt::Display for StructuredMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(format_rational).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Scales each row by the lcm of its denominators; returns the integer rows and
/// the product of the scale factors.
fn clear_denominators(
    rows: &[Vec<Rational>],
    extra: Option<&[Rational]>,
) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale_product = BigInt::one();
    let int_rows = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let tail = extra.map(|b| &b[i]);
            let l = common_denominator(row.iter().chain(tail));
            let mut out: Vec<BigInt> = row
                .iter()
                .chain(tail)
                .map(|q| q.numer() * (&l / q.denom()))
                .collect();
            out.shrink_to_fit();
            scale_product *= &l;
            out
        })
        .collect();
    (int_rows, scale_product)
}

/// Fraction-free forward elimination state.
///
/// Rows that have a zero in the current pivot column are left untouched and
/// brought up to date lazily: if a row is unchanged between stages `s` and `t`
/// its stage-`t` entries are its stage-`s` entries times `p_{t-1} / p_{s-1}`.
struct Bareiss {
    rows: Vec<Vec<BigInt>>,
    stage: Vec<usize>,
    /// `history[t] = p_{t-1}`, with `p_{-1} = 1`.
    history: Vec<BigInt>,
    negate: bool,
    n: usize,
}

impl Bareiss {
    fn new(rows: Vec<Vec<BigInt>>, n: usize) -> Self {
        let count = rows.len();
        Bareiss {
            rows,
            stage: vec![0; count],
            history: vec![BigInt::one()],
            negate: false,
            n,
        }
    }

    fn bring_up(&mut self, i: usize, target: usize) {
        let s = self.stage[i];
        if s == target {
            return;
        }
        let num = &self.history[target];
        let den = &self.history[s];
        for v in self.rows[i].iter_mut().skip(s) {
            if !v.is_zero() {
                *v = &*v * num / den;
            }
        }
        self.stage[i] = target;
    }

    /// Eliminates below the diagonal; `Err(k)` if column `k` has no pivot.
    fn forward(&mut self) -> std::result::Result<(), usize> {
        let n = self.n;
        for k in 0..n {
            let Some(r) = (k..n).find(|&i| !self.rows[i][k].is_zero()) else {
                return Err(k);
            };
            if r != k {
                self.rows.swap(r, k);
                self.stage.swap(r, k);
                self.negate = !self.negate;
            }
            self.bring_up(k, k);
            let (head, tail) = self.rows.split_at_mut(k + 1);
            let pivot_row = &head[k];
            let pk = &pivot_row[k];
            let prev = &self.history[k];
            for (off, row) in tail.iter_mut().enumerate() {
                if row[k].is_zero() {
                    continue;
                }
                let i = k + 1 + off;
                let s = self.stage[i];
                if s != k {
                    let num = &self.history[k];
                    let den = &self.history[s];
                    for v in row.iter_mut().skip(s) {
                        if !v.is_zero() {
                            *v = &*v * num / den;
                        }
                    }
                }
                let aik = std::mem::take(&mut row[k]);
                for (v, pv) in row.iter_mut().zip(pivot_row.iter()).skip(k + 1) {
                    let mut t = &*v * pk;
                    if !pv.is_zero() {
                        t -= &aik * pv;
                    }
                    *v = if t.is_zero() { t } else { t / prev };
                }
                self.stage[i] = k + 1;
            }
            let pk = self.rows[k][k].clone();
            self.history.push(pk);
        }
        Ok(())
    }

    fn det(&self) -> BigInt {
        let d = self.history[self.n].clone();
        if self.negate {
            -d
        } else {
            d
        }
    }
}

/// Rank by fraction-free elimination with column skipping.
pub fn rank(m: &StructuredMatrix) -> usize {
    let (mut rows, _) = clear_denominators(&m.entries, None);
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..m.cols {
        let Some(p) = (r..m.rows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        let pivot = rows[r].clone();
        for row in rows.iter_mut().skip(r + 1) {
            let a = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot).skip(c) {
                *v = (&*v * &pivot[c] - &a * pv) / &prev;
            }
        }
        prev = pivot[c].clone();
        r += 1;
        if r == m.rows {
            break;
        }
    }
    r
}

/// Exact determinant.
pub fn det_structured(m: &StructuredMatrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::domain(format!(
            "determinant of a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    if m.rows == 0 {
        return Ok(Rational::one());
    }
    let (rows, scale) = clear_denominators(&m.entries, None);
    let mut e = Bareiss::new(rows, m.rows);
    match e.forward() {
        Ok(()) => Ok(Rational::new(e.det(), scale)),
        Err(_) => Ok(Rational::zero()),
    }
}

/// Exact solution of `m x = rhs`.
pub fn solve_exact(m: &StructuredMatrix, rhs: &[Rational]) -> Result<Vec<Rational>> {
    if !m.is_square() {
        return Err(Error::domain(format!(
            "solve on a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    if rhs.len() != m.rows {
        return Err(Error::domain("right-hand side length does not match"));
    }
    let n = m.rows;
    let (rows, _) = clear_denominators(&m.entries, Some(rhs));
    let mut e = Bareiss::new(rows, n);
    if e.forward().is_err() {
        return Err(Error::Singular {
            rank: rank(m),
            size: n,
        });
    }
    let mut x = vec![Rational::zero(); n];
    for k in (0..n).rev() {
        let row = &e.rows[k];
        let mut acc = Rational::from_integer(row[n].clone());
        for j in k + 1..n {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc -= &x[j] * &row[j];
            }
        }
        x[k] = acc / &row[k];
    }
    Ok(x)
}

/// `gcd` of the numerators and `lcm` of the denominators, for display.
pub fn content(values: &[Rational]) -> Rational {
    let g = values
        .iter()
        .fold(BigInt::zero(), |acc, q| acc.gcd(q.numer()));
    Rational::new(g, common_denominator(values))
}
