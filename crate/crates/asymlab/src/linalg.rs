//! Fixed-capacity vectors and matrices for dimensions 2..=6.
//!
//! Everything is stack-allocated; the geometry kernel calls these in tight
//! loops, so `Vector` is `Copy` and unused slots are kept at zero (which makes
//! the derived `PartialEq` exact).

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 6;

/// Smallest supported ambient dimension.
pub const MIN_DIM: usize = 2;

/// A point or direction in `R^n`, `2 <= n <= 6`.
#[derive(Clone, Copy, PartialEq)]
pub struct Vector {
    dim: usize,
    c: [f64; MAX_DIM],
}

impl Vector {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1 && dim <= MAX_DIM, "dimension {dim} out of range");
        Vector { dim, c: [0.0; MAX_DIM] }
    }

    pub fn from_slice(coords: &[f64]) -> Self {
        let mut v = Vector::zeros(coords.len());
        v.c[..coords.len()].copy_from_slice(coords);
        v
    }

    /// `i`-th standard basis vector.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Vector::zeros(dim);
        v.c[i] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.c[..self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.as_slice().iter().copied()
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        let mut s = 0.0;
        for i in 0..self.dim {
            s += self.c[i] * other.c[i];
        }
        s
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.as_slice().iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn dist(&self, other: &Vector) -> f64 {
        (*self - *other).norm()
    }

    pub fn scale(&self, s: f64) -> Vector {
        let mut v = *self;
        for i in 0..self.dim {
            v.c[i] *= s;
        }
        v
    }

    /// Unit vector in the same direction, or `None` for (near-)zero input.
    pub fn normalized(&self) -> Option<Vector> {
        let n = self.norm();
        if n <= 0.0 || !n.is_finite() {
            return None;
        }
        Some(self.scale(1.0 / n))
    }

    pub fn is_finite(&self) -> bool {
        self.as_slice().iter().all(|x| x.is_finite())
    }

    /// Lexicographic comparison, used for deterministic tie-breaking.
    pub fn lex_cmp(&self, other: &Vector) -> std::cmp::Ordering {
        for i in 0..self.dim.min(other.dim) {
            match self.c[i].partial_cmp(&other.c[i]) {
                Some(std::cmp::Ordering::Equal) | None => continue,
                Some(ord) => return ord,
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        debug_assert!(i < self.dim);
        &self.c[i]
    }
}

impl IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        debug_assert!(i < self.dim);
        &mut self.c[i]
    }
}

impl Add for Vector {
    type Output = Vector;
    fn add(self, rhs: Vector) -> Vector {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut v = self;
        for i in 0..self.dim {
            v.c[i] += rhs.c[i];
        }
        v
    }
}

impl AddAssign for Vector {
    fn add_assign(&mut self, rhs: Vector) {
        debug_assert_eq!(self.dim, rhs.dim);
        for i in 0..self.dim {
            self.c[i] += rhs.c[i];
        }
    }
}

impl Sub for Vector {
    type Output = Vector;
    fn sub(self, rhs: Vector) -> Vector {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut v = self;
        for i in 0..self.dim {
            v.c[i] -= rhs.c[i];
        }
        v
    }
}

impl Neg for Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.scale(-1.0)
    }
}

impl Mul<f64> for Vector {
    type Output = Vector;
    fn mul(self, s: f64) -> Vector {
        self.scale(s)
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// A dense square matrix of order `dim`, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix {
    dim: usize,
    m: [[f64; MAX_DIM]; MAX_DIM],
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1 && dim <= MAX_DIM);
        Matrix { dim, m: [[0.0; MAX_DIM]; MAX_DIM] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut a = Matrix::zeros(dim);
        for i in 0..dim {
            a.m[i][i] = 1.0;
        }
        a
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let dim = rows.len();
        let mut a = Matrix::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "matrix rows must be square");
            a.m[i][..dim].copy_from_slice(row);
        }
        a
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.m[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.m[r][c] = v;
    }

    pub fn mul_vec(&self, v: &Vector) -> Vector {
        debug_assert_eq!(self.dim, v.dim());
        let mut out = Vector::zeros(self.dim);
        for i in 0..self.dim {
            let mut s = 0.0;
            for j in 0..self.dim {
                s += self.m[i][j] * v[j];
            }
            out[i] = s;
        }
        out
    }

    pub fn det(&self) -> f64 {
        let mut a = self.m;
        det_in_place(&mut a, self.dim)
    }

    /// Cholesky factor `L` with `A = L L^T`, for symmetric positive-definite
    /// input. Returns `None` when a pivot degenerates.
    pub fn cholesky(&self) -> Option<Matrix> {
        let n = self.dim;
        let mut l = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let mut s = self.m[i][j];
                for k in 0..j {
                    s -= l.m[i][k] * l.m[j][k];
                }
                if i == j {
                    if s <= 0.0 || !s.is_finite() {
                        return None;
                    }
                    l.m[i][j] = s.sqrt();
                } else {
                    l.m[i][j] = s / l.m[j][j];
                }
            }
        }
        Some(l)
    }

    /// Solves `L x = b` for lower-triangular `L` (forward substitution).
    pub fn solve_lower(&self, b: &Vector) -> Vector {
        let n = self.dim;
        let mut x = Vector::zeros(n);
        for i in 0..n {
            let mut s = b[i];
            for j in 0..i {
                s -= self.m[i][j] * x[j];
            }
            x[i] = s / self.m[i][i];
        }
        x
    }
}

/// Determinant of the leading `n x n` block via Gaussian elimination with
/// partial pivoting. Destroys the input.
pub fn det_in_place(a: &mut [[f64; MAX_DIM]; MAX_DIM], n: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col][col].abs();
        for r in col + 1..n {
            let v = a[r][col].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        let inv = 1.0 / a[col][col];
        for r in col + 1..n {
            let f = a[r][col] * inv;
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    det
}

/// Determinant of the matrix whose columns are `cols` (all of dimension `n`).
pub fn det_of_columns(cols: &[Vector]) -> f64 {
    let n = cols.len();
    debug_assert!(cols.iter().all(|c| c.dim() == n));
    let mut a = [[0.0; MAX_DIM]; MAX_DIM];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            a[i][j] = col[i];
        }
    }
    det_in_place(&mut a, n)
}

/// Normal of the hyperplane through `points` (n points in R^n), computed as
/// the generalized cross product of the edge vectors. Not normalized;
/// returns the zero vector for affinely dependent input.
pub fn hyperplane_normal(points: &[Vector]) -> Vector {
    let n = points[0].dim();
    debug_assert_eq!(points.len(), n);
    let mut edges = [[0.0; MAX_DIM]; MAX_DIM];
    for k in 1..n {
        let e = points[k] - points[0];
        edges[k - 1][..n].copy_from_slice(e.as_slice());
    }
    let mut normal = Vector::zeros(n);
    let mut sign = 1.0;
    for j in 0..n {
        // Minor: drop column j from the (n-1) x n edge matrix.
        let mut minor = [[0.0; MAX_DIM]; MAX_DIM];
        for r in 0..n - 1 {
            let mut cc = 0;
            for c in 0..n {
                if c == j {
                    continue;
                }
                minor[r][cc] = edges[r][c];
                cc += 1;
            }
        }
        normal[j] = sign * det_in_place(&mut minor, n - 1);
        sign = -sign;
    }
    normal
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_ops() {
        let a = Vector::from_slice(&[1.0, 2.0, 3.0]);
        let b = Vector::from_slice(&[4.0, 5.0, 6.0]);
        assert_eq!(a.dot(&b), 32.0);
        assert_eq!((a + b).as_slice(), &[5.0, 7.0, 9.0]);
        assert_eq!((b - a).as_slice(), &[3.0, 3.0, 3.0]);
        assert_eq!(a.scale(2.0).as_slice(), &[2.0, 4.0, 6.0]);
        assert!((Vector::from_slice(&[3.0, 4.0]).norm() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn determinants() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert!((a.det() + 2.0).abs() < 1e-14);
        let i4 = Matrix::identity(4);
        assert!((i4.det() - 1.0).abs() < 1e-14);
        let singular = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert_eq!(singular.det(), 0.0);
    }

    #[test]
    fn cross_product_matches_3d() {
        let p0 = Vector::from_slice(&[0.0, 0.0, 0.0]);
        let p1 = Vector::from_slice(&[1.0, 0.0, 0.0]);
        let p2 = Vector::from_slice(&[0.0, 1.0, 0.0]);
        let n = hyperplane_normal(&[p0, p1, p2]);
        // e1 x e2 = e3 up to sign convention of the cofactor expansion.
        assert!(n[0].abs() < 1e-15 && n[1].abs() < 1e-15);
        assert!((n[2].abs() - 1.0).abs() < 1e-15);
        // Orthogonal to both edges in any dimension.
        for q in [p1, p2] {
            assert!(n.dot(&(q - p0)).abs() < 1e-15);
        }
    }

    #[test]
    fn cholesky_roundtrip() {
        let a = Matrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]);
        let l = a.cholesky().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut s = 0.0;
                for k in 0..2 {
                    s += l.get(i, k) * l.get(j, k);
                }
                assert!((s - a.get(i, j)).abs() < 1e-14);
            }
        }
    }
}
