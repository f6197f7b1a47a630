//! Dense rational matrices, row-major.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{denominator_lcm, Rat, RatVec};

/// Row-major rational matrix. Serializes as nested arrays of rational strings.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<RatVec>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Integer literal helper, mostly for tests and fixtures.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&e| Rat::int(e)).collect())
                .collect(),
        )
    }

    pub fn diagonal(entries: &[Rat]) -> Self {
        let n = entries.len();
        let mut m = Self::zero(n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> RatVec {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn map(&self, f: impl Fn(&Rat) -> Rat) -> Self {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        self.map(|e| c * e)
    }

    pub fn neg(&self) -> Self {
        self.map(|e| -e)
    }

    pub fn mul(&self, other: &RatMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must match");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = a * &other[(k, j)];
                    let cur = out[(i, j)].clone();
                    out[(i, j)] = cur + p;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> RatVec {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_integer_matrix(&self) -> bool {
        self.data.iter().all(Rat::is_integer)
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(Rat::is_zero)
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)].is_zero()))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Exactly one nonzero entry in every row and column.
    pub fn is_monomial(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let n = self.rows;
        (0..n).all(|i| self.row(i).iter().filter(|e| !e.is_zero()).count() == 1)
            && (0..n).all(|j| (0..n).filter(|&i| !self[(i, j)].is_zero()).count() == 1)
    }

    pub fn denominator_lcm(&self) -> BigInt {
        denominator_lcm(&self.data)
    }

    /// Exact determinant by fraction-preserving Gaussian elimination.
    pub fn det(&self) -> Result<Rat> {
        if !self.is_square() {
            return Err(Error::NotSquare);
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[(r, col)].is_zero());
            let Some(p) = pivot else {
                return Ok(Rat::zero());
            };
            if p != col {
                for j in 0..n {
                    let tmp = m[(p, j)].clone();
                    m[(p, j)] = m[(col, j)].clone();
                    m[(col, j)] = tmp;
                }
                det = -det;
            }
            let pv = m[(col, col)].clone();
            det = det * pv.clone();
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let f = &m[(r, col)] / &pv;
                for j in col..n {
                    let delta = &f * &m[(col, j)];
                    let cur = m[(r, j)].clone();
                    m[(r, j)] = cur - delta;
                }
            }
        }
        Ok(det)
    }

    /// Exact inverse via Gauss–Jordan elimination.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[(r, col)].is_zero())
                .ok_or(Error::SingularMatrix)?;
            if pivot != col {
                for j in 0..n {
                    let t = a[(pivot, j)].clone();
                    a[(pivot, j)] = a[(col, j)].clone();
                    a[(col, j)] = t;
                    let t = inv[(pivot, j)].clone();
                    inv[(pivot, j)] = inv[(col, j)].clone();
                    inv[(col, j)] = t;
                }
            }
            let pv = a[(col, col)].clone();
            let pv_inv = pv.recip()?;
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] * &pv_inv;
                inv[(col, j)] = &inv[(col, j)] * &pv_inv;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    let da = &f * &a[(col, j)];
                    let di = &f * &inv[(col, j)];
                    let cur = a[(r, j)].clone();
                    a[(r, j)] = cur - da;
                    let cur = inv[(r, j)].clone();
                    inv[(r, j)] = cur - di;
                }
            }
        }
        Ok(inv)
    }

    /// Inverse transpose, the workhorse of dual-lattice computations.
    pub fn inverse_transpose(&self) -> Result<RatMatrix> {
        Ok(self.inverse()?.transpose())
    }

    /// Assemble a 2×2 block matrix
    /// `[[a, b], [c, d]]` from equally sized square blocks.
    pub fn from_blocks(a: &RatMatrix, b: &RatMatrix, c: &RatMatrix, d: &RatMatrix) -> Self {
        let n = a.rows();
        assert!(
            [a, b, c, d].iter().all(|m| m.rows() == n && m.cols() == n),
            "blocks must be square and equal sized"
        );
        let mut out = Self::zero(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = a[(i, j)].clone();
                out[(i, j + n)] = b[(i, j)].clone();
                out[(i + n, j)] = c[(i, j)].clone();
                out[(i + n, j + n)] = d[(i, j)].clone();
            }
        }
        out
    }

    /// Split a 2d×2d matrix into its four d×d blocks (a, b, c, d).
    pub fn split_blocks(&self, d: usize) -> (RatMatrix, RatMatrix, RatMatrix, RatMatrix) {
        assert_eq!(self.rows, 2 * d);
        assert_eq!(self.cols, 2 * d);
        let sub = |r0: usize, c0: usize| {
            let mut m = RatMatrix::zero(d, d);
            for i in 0..d {
                for j in 0..d {
                    m[(i, j)] = self[(r0 + i, c0 + j)].clone();
                }
            }
            m
        };
        (sub(0, 0), sub(0, d), sub(d, 0), sub(d, d))
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(Rat::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for RatMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[Rat]> = (0..self.rows).map(|i| self.row(i)).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<RatVec> = Vec::deserialize(d)?;
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        Ok(RatMatrix::from_rows(rows))
    }
}

/// Column-style Hermite reduction of an integer matrix, returning the column
/// echelon form `h` together with the unimodular `u` such that `m·u = h`.
///
/// Pivot entries are positive and sit in the leading columns; entries to the
/// left of a pivot within its row are reduced into [0, pivot). Columns that
/// become zero are moved to the right. For square nonsingular input this is
/// the lower-triangular Hermite normal form.
pub fn column_hnf(m: &RatMatrix) -> Result<(RatMatrix, RatMatrix)> {
    if !m.is_integer_matrix() {
        return Err(Error::NonInteger);
    }
    let rows = m.rows();
    let cols = m.cols();
    // Work column-major over BigInt.
    let mut h: Vec<Vec<BigInt>> = (0..cols)
        .map(|j| (0..rows).map(|i| m[(i, j)].to_integer().unwrap()).collect())
        .collect();
    let mut u: Vec<Vec<BigInt>> = (0..cols)
        .map(|j| {
            (0..cols)
                .map(|i| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();

    let mut pivot_col = 0usize;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for row in 0..rows {
        if pivot_col == cols {
            break;
        }
        // Euclidean reduction across columns pivot_col..cols in this row.
        loop {
            let mut best: Option<usize> = None;
            for j in pivot_col..cols {
                if !h[j][row].is_zero() {
                    best = match best {
                        None => Some(j),
                        Some(b) if h[j][row].magnitude() < h[b][row].magnitude() => Some(j),
                        keep => keep,
                    };
                }
            }
            let Some(b) = best else {
                break;
            };
            h.swap(pivot_col, b);
            u.swap(pivot_col, b);
            let mut done = true;
            for j in pivot_col + 1..cols {
                if h[j][row].is_zero() {
                    continue;
                }
                let q = h[j][row].div_floor(&h[pivot_col][row]);
                if !q.is_zero() {
                    for i in 0..rows {
                        let d = &q * &h[pivot_col][i];
                        h[j][i] -= d;
                    }
                    for i in 0..cols {
                        let d = &q * &u[pivot_col][i];
                        u[j][i] -= d;
                    }
                }
                if !h[j][row].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[pivot_col][row].is_zero() {
            continue;
        }
        if h[pivot_col][row].is_negative() {
            for i in 0..rows {
                h[pivot_col][i] = -h[pivot_col][i].clone();
            }
            for i in 0..cols {
                u[pivot_col][i] = -u[pivot_col][i].clone();
            }
        }
        pivots.push((row, pivot_col));
        // Reduce earlier columns in this row into [0, pivot).
        for j in 0..pivot_col {
            let q = h[j][row].div_floor(&h[pivot_col][row]);
            if !q.is_zero() {
                for i in 0..rows {
                    let d = &q * &h[pivot_col][i];
                    h[j][i] -= d;
                }
                for i in 0..cols {
                    let d = &q * &u[pivot_col][i];
                    u[j][i] -= d;
                }
            }
        }
        pivot_col += 1;
    }

    let to_matrix = |cols_data: &Vec<Vec<BigInt>>, nrows: usize| {
        let mut out = RatMatrix::zero(nrows, cols_data.len());
        for (j, col) in cols_data.iter().enumerate() {
            for (i, e) in col.iter().enumerate() {
                out[(i, j)] = Rat::int(e.clone());
            }
        }
        out
    };
    Ok((to_matrix(&h, rows), to_matrix(&u, cols)))
}

/// Lower-triangular Hermite normal form of a nonsingular integer matrix.
///
/// Returns `(h, p)` with `m·p = h`, `p` unimodular, `h` lower triangular with
/// positive diagonal and every entry left of the diagonal reduced into
/// [0, diagonal). The triangular form itself is forced; the sign and
/// subdiagonal-range conventions are this library's choice, made so that `h`
/// is the unique canonical generator of the column lattice of `m` and lattice
/// equality becomes generator equality after normalization.
pub fn hnf_lower(m: &RatMatrix) -> Result<(RatMatrix, RatMatrix)> {
    if !m.is_square() {
        return Err(Error::NotSquare);
    }
    if !m.is_integer_matrix() {
        return Err(Error::NonInteger);
    }
    if m.det()?.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let (h, p) = column_hnf(m)?;
    debug_assert!(h.is_lower_triangular());
    debug_assert_eq!(p.det().unwrap().abs(), Rat::one());
    Ok((h, p))
}

/// A particular rational solution of `a·y = b`, with free variables set to
/// zero; None when the system is inconsistent.
pub fn solve_linear(a: &RatMatrix, b: &[Rat]) -> Option<RatVec> {
    assert_eq!(a.rows(), b.len());
    let rows = a.rows();
    let cols = a.cols();
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut row = 0usize;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !m[(r, col)].is_zero()) else {
            continue;
        };
        if p != row {
            for j in 0..cols {
                let t = m[(p, j)].clone();
                m[(p, j)] = m[(row, j)].clone();
                m[(row, j)] = t;
            }
            rhs.swap(p, row);
        }
        let pv = m[(row, col)].clone();
        for r in 0..rows {
            if r == row || m[(r, col)].is_zero() {
                continue;
            }
            let f = &m[(r, col)] / &pv;
            for j in col..cols {
                let d = &f * &m[(row, j)];
                let cur = m[(r, j)].clone();
                m[(r, j)] = cur - d;
            }
            let d = &f * &rhs[row];
            let cur = rhs[r].clone();
            rhs[r] = cur - d;
        }
        pivot_of_col[col] = Some(row);
        row += 1;
    }
    // Inconsistent when a zero row has nonzero right-hand side.
    for r in row..rows {
        if !rhs[r].is_zero() {
            return None;
        }
    }
    let mut y = vec![Rat::zero(); cols];
    for col in 0..cols {
        if let Some(r) = pivot_of_col[col] {
            y[col] = &rhs[r] / &m[(r, col)];
        }
    }
    Some(y)
}

/// Integer kernel of an integer matrix: columns of the result form a basis of
/// {v ∈ Z^cols : m·v = 0}.
pub fn integer_kernel(m: &RatMatrix) -> Result<RatMatrix> {
    let (h, u) = column_hnf(m)?;
    let zero_cols: Vec<usize> = (0..h.cols())
        .filter(|&j| (0..h.rows()).all(|i| h[(i, j)].is_zero()))
        .collect();
    let mut out = RatMatrix::zero(m.cols(), zero_cols.len());
    for (k, &j) in zero_cols.iter().enumerate() {
        for i in 0..m.cols() {
            out[(i, k)] = u[(i, j)].clone();
        }
    }
    Ok(out)
}
