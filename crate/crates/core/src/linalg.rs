//! Dense exact linear algebra: matrices, row reduction, kernels, solving and
//! subspaces in canonical echelon form.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{shape, Result};
use crate::scalar::Scalar;

pub type Vector = Vec<Scalar>;

pub fn zero_vec(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vector {
    let mut v = zero_vec(n);
    v[i] = Scalar::one();
    v
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut s = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

/// `y += a * x`
pub fn axpy(y: &mut [Scalar], a: &Scalar, x: &[Scalar]) {
    if a.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi += a * xi;
        }
    }
}

pub fn scale_vec(a: &Scalar, x: &[Scalar]) -> Vector {
    x.iter().map(|v| a * v).collect()
}

pub fn add_vec(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Row-major dense matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds from row vectors; all rows must have equal length.
    pub fn from_rows(rows: &[Vector]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(shape("ragged rows"));
        }
        Ok(Matrix { rows: rows.len(), cols, data: rows.concat() })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(n: usize, cols: &[Vector]) -> Self {
        Self::from_fn(n, cols.len(), |i, j| cols[j][i].clone())
    }

    /// Builds from small integers, row-major.
    pub fn from_ints(rows: usize, cols: usize, vals: &[i64]) -> Self {
        assert_eq!(vals.len(), rows * cols);
        Matrix { rows, cols, data: vals.iter().map(|&v| Scalar::from_int(v)).collect() }
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

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&Scalar::from_int(-1))
    }

    /// `self * other - other * self`
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    /// Flattened row-major entries.
    pub fn flatten(&self) -> Vector {
        self.data.clone()
    }

    pub fn from_flat(rows: usize, cols: usize, v: &[Scalar]) -> Matrix {
        assert_eq!(v.len(), rows * cols);
        Matrix { rows, cols, data: v.to_vec() }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        if !m[(r, j)].is_zero() {
                            let v = &f * &m[(r, j)];
                            m[(i, j)] -= v;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, in reduced echelon form.
    pub fn kernel(&self) -> Vec<Vector> {
        let mut rs = RowSpace::new(self.cols);
        for i in 0..self.rows {
            rs.insert(self.row(i).to_vec());
        }
        rs.kernel()
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Scalar::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pv = m[(c, c)].clone();
            det *= &pv;
            let inv = pv.recip();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..n {
                    if !m[(c, j)].is_zero() {
                        let v = &f * &m[(c, j)];
                        m[(i, j)] -= v;
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        if n == 0 {
            return Some(Matrix::zeros(0, 0));
        }
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    /// Leading principal minors `det(M[..k, ..k])` for `k = 1..=n`.
    pub fn leading_minors(&self) -> Vec<Scalar> {
        (1..=self.rows)
            .map(|k| Matrix::from_fn(k, k, |i, j| self[(i, j)].clone()).determinant())
            .collect()
    }

    /// Positive definiteness of a symmetric matrix via Sylvester's criterion.
    pub fn is_positive_definite(&self) -> bool {
        self.is_symmetric() && self.leading_minors().iter().all(Scalar::is_positive)
    }

    /// Bilinear form value `x^T M y`.
    pub fn bilinear(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        dot(x, &self.mul_vec(y))
    }

    /// Block diagonal matrix.
    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(r, c);
        let (mut oi, mut oj) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(oi + i, oj + j)] = b[(i, j)].clone();
                }
            }
            oi += b.rows;
            oj += b.cols;
        }
        m
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(Scalar::to_f64).collect()).collect()
    }
}

/// Incrementally maintained row space in reduced echelon form.
///
/// Suited to tall sparse systems: rows are reduced on insertion, so the
/// storage never exceeds the rank.
#[derive(Clone, Debug)]
pub struct RowSpace {
    cols: usize,
    rows: Vec<(usize, Vector)>,
}

impl RowSpace {
    pub fn new(cols: usize) -> Self {
        RowSpace { cols, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn reduce(&self, v: &mut Vector) {
        for (p, r) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (vj, rj) in v.iter_mut().zip(r) {
                    if !rj.is_zero() {
                        *vj -= &f * rj;
                    }
                }
            }
        }
    }

    /// Inserts a row; returns true if the rank grew.
    pub fn insert(&mut self, mut v: Vector) -> bool {
        assert_eq!(v.len(), self.cols);
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for (_, r) in self.rows.iter_mut() {
            if !r[p].is_zero() {
                let f = r[p].clone();
                for (rj, vj) in r.iter_mut().zip(&v) {
                    if !vj.is_zero() {
                        *rj -= &f * vj;
                    }
                }
            }
        }
        let pos = self.rows.iter().position(|(q, _)| *q > p).unwrap_or(self.rows.len());
        self.rows.insert(pos, (p, v));
        true
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        is_zero_vec(&w)
    }

    /// Rows in echelon order.
    pub fn basis(&self) -> Vec<Vector> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    /// Null space of the rows, as an echelon basis.
    pub fn kernel(&self) -> Vec<Vector> {
        let pivots = self.pivots();
        let mut out = RowSpace::new(self.cols);
        for f in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = zero_vec(self.cols);
            v[f] = Scalar::one();
            for (p, r) in &self.rows {
                v[*p] = -&r[f];
            }
            out.insert(v);
        }
        out.basis()
    }
}

/// Exact solution set of `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Option<Vector>,
    pub kernel: Vec<Vector>,
}

/// Solves `A x = b` exactly.
pub fn linear_solve(a: &Matrix, b: &[Scalar]) -> Result<Solution> {
    if a.rows() != b.len() {
        return Err(shape(format!("{} equations but {} right-hand sides", a.rows(), b.len())));
    }
    let n = a.cols();
    let aug = Matrix::from_fn(a.rows(), n + 1, |i, j| {
        if j < n {
            a[(i, j)].clone()
        } else {
            b[i].clone()
        }
    });
    let (r, piv) = aug.rref();
    let kernel = a.kernel();
    if piv.last() == Some(&n) {
        return Ok(Solution { particular: None, kernel });
    }
    let mut x = zero_vec(n);
    for (row, &p) in piv.iter().enumerate() {
        x[p] = r[(row, n)].clone();
    }
    Ok(Solution { particular: Some(x), kernel })
}

/// A linear subspace of `Q^n`.
///
/// `frame` is the working basis (kept in the order supplied when the caller
/// asks for it); `echelon` is the canonical reduced form used for equality.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    frame: Vec<Vector>,
    echelon: RowSpace,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.echelon.rows == other.echelon.rows
    }
}

impl Eq for Subspace {}

impl Subspace {
    /// Span of arbitrary vectors; the frame is the echelon basis.
    pub fn span(ambient: usize, vectors: &[Vector]) -> Self {
        let mut echelon = RowSpace::new(ambient);
        for v in vectors {
            assert_eq!(v.len(), ambient, "vector length");
            echelon.insert(v.clone());
        }
        Subspace { ambient, frame: echelon.basis(), echelon }
    }

    /// Keeps `frame` as the working basis; fails if it is dependent.
    pub fn from_frame(ambient: usize, frame: Vec<Vector>) -> Result<Self> {
        let mut echelon = RowSpace::new(ambient);
        for v in &frame {
            if v.len() != ambient {
                return Err(shape(format!("vector of length {} in ambient dimension {ambient}", v.len())));
            }
            if !echelon.insert(v.clone()) {
                return Err(shape("frame vectors are linearly dependent"));
            }
        }
        Ok(Subspace { ambient, frame, echelon })
    }

    pub fn zero(ambient: usize) -> Self {
        Self::span(ambient, &[])
    }

    pub fn full(ambient: usize) -> Self {
        let basis: Vec<Vector> = (0..ambient).map(|i| unit_vec(ambient, i)).collect();
        Self::span(ambient, &basis)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.frame.len()
    }

    pub fn is_zero(&self) -> bool {
        self.frame.is_empty()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.frame
    }

    pub fn echelon(&self) -> Vec<Vector> {
        self.echelon.basis()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.echelon.contains(v)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.frame.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut all = self.frame.clone();
        all.extend(other.frame.iter().cloned());
        Subspace::span(self.ambient, &all)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let (a, b) = (self.dim(), other.dim());
        if a == 0 || b == 0 {
            return Subspace::zero(self.ambient);
        }
        let m = Matrix::from_fn(self.ambient, a + b, |i, j| {
            if j < a {
                self.frame[j][i].clone()
            } else {
                -&other.frame[j - a][i]
            }
        });
        let vecs: Vec<Vector> = m
            .kernel()
            .iter()
            .map(|k| {
                let mut v = zero_vec(self.ambient);
                for (j, c) in k[..a].iter().enumerate() {
                    axpy(&mut v, c, &self.frame[j]);
                }
                v
            })
            .collect();
        Subspace::span(self.ambient, &vecs)
    }

    /// Coordinates of `v` in the frame, if `v` lies in the subspace.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vector> {
        if self.frame.is_empty() {
            return is_zero_vec(v).then(Vec::new);
        }
        let a = Matrix::from_cols(self.ambient, &self.frame);
        linear_solve(&a, v).ok()?.particular
    }

    /// Standard basis vectors completing the echelon pivots to a basis of the
    /// ambient space.
    pub fn coordinate_complement(&self) -> Subspace {
        let piv = self.echelon.pivots();
        let vecs: Vec<Vector> =
            (0..self.ambient).filter(|c| !piv.contains(c)).map(|c| unit_vec(self.ambient, c)).collect();
        Subspace::from_frame(self.ambient, vecs).expect("unit vectors are independent")
    }

    /// Orthogonal complement with respect to a nondegenerate form on the
    /// ambient space, restricted to `within`.
    pub fn orthogonal_in(&self, form: &Matrix, within: &Subspace) -> Subspace {
        let w = within.basis();
        if w.is_empty() {
            return Subspace::zero(self.ambient);
        }
        let m = Matrix::from_fn(self.dim(), w.len(), |i, j| form.bilinear(&self.frame[i], &w[j]));
        let vecs: Vec<Vector> = m
            .kernel()
            .iter()
            .map(|k| {
                let mut v = zero_vec(self.ambient);
                for (j, c) in k.iter().enumerate() {
                    axpy(&mut v, c, &w[j]);
                }
                v
            })
            .collect();
        Subspace::span(self.ambient, &vecs)
    }
}
