use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{
    fmt_rat, lcm_of_denominators, primitive_integer_vector, rat, rat_int, LinalgError, Poly, Rat,
};

/// Dense row-major matrix over Q.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::EntryCount {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Mat { rows, cols, data })
    }

    /// Builds a matrix from integer rows. Panics on ragged input.
    pub fn from_ints(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.iter().flatten().map(|&x| rat(x)).collect(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let data: Vec<Rat> = rows.into_iter().flatten().collect();
        Mat::new(r, c, data)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Rat>]) -> Result<Self, LinalgError> {
        Ok(Mat::from_rows(cols.to_vec())?.transpose())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rat::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Rat> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    /// Integer entries, or `None` if any entry has a denominator.
    pub fn to_integer_rows(&self) -> Option<Vec<Vec<BigInt>>> {
        if !self.is_integral() {
            return None;
        }
        Some(
            (0..self.rows)
                .map(|i| self.row(i).iter().map(|x| x.to_integer()).collect())
                .collect(),
        )
    }

    pub(crate) fn require_square(&self, op: &'static str) -> Result<(), LinalgError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(LinalgError::NotSquare {
                op,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn mismatch(&self, other: &Mat, op: &'static str) -> LinalgError {
        LinalgError::DimensionMismatch {
            op,
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat, LinalgError> {
        if self.cols != other.rows {
            return Err(self.mismatch(other, "mat_mul"));
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>, LinalgError> {
        if self.cols != v.len() {
            return Err(LinalgError::DimensionMismatch {
                op: "mul_vec",
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: v.len(),
                right_cols: 1,
            });
        }
        Ok((0..self.rows)
            .map(|i| super::dot(&self.data[i * self.cols..(i + 1) * self.cols], v))
            .collect())
    }

    pub fn add(&self, other: &Mat) -> Result<Mat, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(self.mismatch(other, "mat_add"));
        }
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat, LinalgError> {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, s: &Rat) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn trace(&self) -> Result<Rat, LinalgError> {
        self.require_square("trace")?;
        Ok((0..self.rows).map(|i| self.get(i, i).clone()).sum())
    }

    pub fn pow(&self, e: u32) -> Result<Mat, LinalgError> {
        self.require_square("pow")?;
        (0..e).try_fold(Mat::identity(self.rows), |acc, _| acc.mul(self))
    }

    /// Row `i` scaled to integers: `(row_lcm, integer_row)`.
    fn integer_rows(&self) -> (Vec<BigInt>, Vec<Vec<BigInt>>) {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = lcm_of_denominators(row.iter());
                let ints = row.iter().map(|x| (x * rat_int(&l)).to_integer()).collect();
                (l, ints)
            })
            .unzip()
    }

    /// Determinant by fraction-free Bareiss elimination on the
    /// denominator-cleared integer matrix.
    pub fn det(&self) -> Result<Rat, LinalgError> {
        self.require_square("det")?;
        let (scales, a) = self.integer_rows();
        let d = bareiss_det(a);
        let scale: BigInt = scales.iter().product();
        Ok(Rat::new(d, scale))
    }

    /// Exact inverse by fraction-free Gauss-Jordan elimination.
    #[allow(clippy::needless_range_loop)]
    pub fn inverse(&self) -> Result<Mat, LinalgError> {
        self.require_square("mat_inverse")?;
        let n = self.rows;
        let (scales, ints) = self.integer_rows();
        let mut a: Vec<Vec<BigInt>> = ints
            .into_iter()
            .enumerate()
            .map(|(i, mut row)| {
                row.extend((0..n).map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                }));
                row
            })
            .collect();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&p| !a[p][k].is_zero()) else {
                return Err(LinalgError::Singular { det: Rat::zero() });
            };
            a.swap(k, p);
            let pivot_row = a[k].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == k {
                    continue;
                }
                let factor = row[k].clone();
                for j in 0..2 * n {
                    let v = &pivot_row[k] * &row[j] - &factor * &pivot_row[j];
                    row[j] = exact_div(v, &prev);
                }
            }
            prev = pivot_row[k].clone();
        }
        // Left block is now diagonal; divide each row through.
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v = Rat::new(a[i][n + j].clone(), a[i][i].clone()) * rat_int(&scales[j]);
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form over Q with the pivot column list.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&p| !m.get(p, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = Rat::one() / m.get(r, c);
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, each vector scaled to a primitive
    /// integer vector with positive leading entry. Empty iff injective.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rat::zero(); self.cols];
                v[f] = Rat::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, f).clone();
                }
                primitive_integer_vector(&v)
            })
            .collect()
    }

    /// `det(self - t*I)`, leading coefficient `(-1)^n`, computed by Bareiss
    /// elimination over Q[t].
    pub fn char_poly(&self) -> Result<Poly, LinalgError> {
        self.require_square("char_poly")?;
        let n = self.rows;
        let mut a: Vec<Vec<Poly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = Poly::constant(self.get(i, j).clone());
                        if i == j {
                            &c - &Poly::t()
                        } else {
                            c
                        }
                    })
                    .collect()
            })
            .collect();
        if n == 0 {
            return Ok(Poly::one());
        }
        let mut negate = false;
        let mut prev = Poly::one();
        for k in 0..n - 1 {
            let Some(p) = (k..n).find(|&p| !a[p][k].is_zero()) else {
                return Ok(Poly::zero());
            };
            if p != k {
                a.swap(k, p);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.div_exact(&prev)?;
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if negate { -&d } else { d })
    }

    /// `P^{-1} * self * P` for the permutation matrix of `perm`.
    pub fn perm_conjugate(&self, perm: &Perm) -> Result<Mat, LinalgError> {
        let p = perm.to_mat();
        p.inverse()?.mul(self)?.mul(&p)
    }
}

fn exact_div(v: BigInt, d: &BigInt) -> BigInt {
    let (q, r) = num_integer::Integer::div_rem(&v, d);
    debug_assert!(r.is_zero(), "Bareiss step left a remainder");
    q
}

fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&p| !a[p][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = exact_div(v, &prev);
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            let row: Vec<String> = self.row(i).iter().map(fmt_rat).collect();
            write!(f, "[{}]", row.join(","))?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{self}")
    }
}

/// Permutation of `{0..n}`; `map[i]` is the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perm {
    map: Vec<usize>,
}

impl Perm {
    pub fn new(map: Vec<usize>) -> Result<Self, LinalgError> {
        let mut seen = vec![false; map.len()];
        for &x in &map {
            if x >= map.len() || seen[x] {
                return Err(LinalgError::InvalidPermutation(map));
            }
            seen[x] = true;
        }
        Ok(Perm { map })
    }

    pub fn identity(n: usize) -> Self {
        Perm {
            map: (0..n).collect(),
        }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self, LinalgError> {
        let mut map: Vec<usize> = (0..n).collect();
        if a >= n || b >= n {
            return Err(LinalgError::InvalidPermutation(map));
        }
        map.swap(a, b);
        Ok(Perm { map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.map.len()];
        for (i, &x) in self.map.iter().enumerate() {
            inv[x] = i;
        }
        Perm { map: inv }
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm {
            map: other.map.iter().map(|&i| self.map[i]).collect(),
        }
    }

    /// Matrix sending basis vector `e_i` to `e_{map[i]}`.
    pub fn to_mat(&self) -> Mat {
        let n = self.map.len();
        let mut m = Mat::zeros(n, n);
        for (i, &x) in self.map.iter().enumerate() {
            m.set(x, i, Rat::one());
        }
        m
    }
}
