//! Dense matrices over a [`Field`] with exact rank, determinant, adjugate and
//! compound matrices.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};
use crate::subset::subsets;

/// A dense row-major matrix whose entries all live in one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            field,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                assert_eq!(v.field(), field, "entry field differs from matrix field");
                data.push(v);
            }
        }
        Matrix {
            rows,
            cols,
            field,
            data,
        }
    }

    /// Builds a matrix from integer rows (all rows must have equal length).
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix::from_fn(field, rows.len(), cols, |i, j| field.from_i64(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            data: self.data.iter().map(|x| x * s).collect(),
            ..self.clone()
        }
    }

    /// The submatrix on the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, rows.len(), cols.len(), |i, j| {
            self[(rows[i], cols[j])].clone()
        })
    }

    /// Copy with row `r` and column `c` deleted.
    pub fn minor_matrix(&self, r: usize, c: usize) -> Matrix {
        let rows: Vec<usize> = (0..self.rows).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&j| j != c).collect();
        self.select(&rows, &cols)
    }

    fn check_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Exact rank.
    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Column indices of the pivots found by elimination (leftmost
    /// independent columns).
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.echelon().pivots
    }

    /// Exact determinant.
    pub fn det(&self) -> Result<Scalar> {
        self.check_square()?;
        Ok(self.echelon().det.expect("square input yields a determinant"))
    }

    /// The classical adjugate, built from the (n-1)-st compound and cofactor
    /// signs, so that `M adj(M) = adj(M) M = det(M) I` for singular `M` too.
    pub fn adjugate(&self) -> Result<Matrix> {
        self.check_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        if n == 1 {
            return Ok(Matrix::identity(self.field, 1));
        }
        let comp = self.compound(n - 1)?;
        // The (n-1)-subset missing `x` has colex position n - 1 - x.
        Ok(Matrix::from_fn(self.field, n, n, |i, j| {
            let v = &comp[(n - 1 - j, n - 1 - i)];
            if (i + j) % 2 == 0 {
                v.clone()
            } else {
                -v
            }
        }))
    }

    /// The k-th compound: all k x k minors, rows and columns indexed by
    /// colex-ordered k-subsets. `compound(0)` is `[1]`.
    pub fn compound(&self, k: usize) -> Result<Matrix> {
        if k > self.rows.min(self.cols) {
            return Err(Error::CompoundDegree {
                k,
                rows: self.rows,
                cols: self.cols,
            });
        }
        let rsets = subsets(self.rows, k);
        let csets = subsets(self.cols, k);
        let mut out = Matrix::zeros(self.field, rsets.len(), csets.len());
        for (i, r) in rsets.iter().enumerate() {
            for (j, c) in csets.iter().enumerate() {
                out[(i, j)] = self.select(r, c).det()?;
            }
        }
        Ok(out)
    }

    /// Minor on the given sorted row and column sets.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Scalar {
        self.select(rows, cols).det().expect("square selection")
    }

    /// Inverse, or `None` when singular.
    pub fn inverse(&self) -> Result<Option<Matrix>> {
        self.check_square()?;
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(self.field, n);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[(r, c)].is_zero()) else {
                return Ok(None);
            };
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            let piv = a[(c, c)].inv().expect("nonzero pivot");
            for j in 0..n {
                a[(c, j)] = &a[(c, j)] * &piv;
                inv[(c, j)] = &inv[(c, j)] * &piv;
            }
            for r in 0..n {
                if r == c || a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].clone();
                for j in 0..n {
                    a[(r, j)] = &a[(r, j)] - &(&f * &a[(c, j)]);
                    inv[(r, j)] = &inv[(r, j)] - &(&f * &inv[(c, j)]);
                }
            }
        }
        Ok(Some(inv))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn echelon(&self) -> Echelon {
        match self.field {
            Field::Rational => self.echelon_bareiss(),
            Field::Prime(_) => self.echelon_modular(),
        }
    }

    /// Fraction-free elimination: rows are scaled to integers, then every
    /// update divides exactly by the previous pivot.
    fn echelon_bareiss(&self) -> Echelon {
        let (n, m) = (self.rows, self.cols);
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let row = self.row(i);
                let l = row
                    .iter()
                    .map(|x| x.as_rational().expect("rational entry").denom().clone())
                    .fold(BigInt::one(), |acc, d| acc.lcm(&d));
                scale *= &l;
                row.iter()
                    .map(|x| {
                        let q = x.as_rational().unwrap();
                        q.numer() * (&l / q.denom())
                    })
                    .collect()
            })
            .collect();
        let mut prev = BigInt::one();
        let mut negate = false;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m {
            if r == n {
                break;
            }
            let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            if p != r {
                a.swap(p, r);
                negate = !negate;
            }
            for i in (r + 1)..n {
                for j in (c + 1)..m {
                    let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                    debug_assert!((&v % &prev).is_zero());
                    a[i][j] = v / &prev;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[r][c].clone();
            pivots.push(c);
            r += 1;
        }
        let det = (n == m).then(|| {
            if pivots.len() < n {
                Field::Rational.zero()
            } else if n == 0 {
                Field::Rational.one()
            } else {
                let v = if negate { -prev.clone() } else { prev.clone() };
                Scalar::Rational(BigRational::new(v, scale.clone()))
            }
        });
        Echelon { pivots, det }
    }

    fn echelon_modular(&self) -> Echelon {
        let (n, m) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut det = self.field.one();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m {
            if r == n {
                break;
            }
            let Some(p) = (r..n).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                a.swap_rows(p, r);
                det = -&det;
            }
            det = &det * &a[(r, c)];
            let inv = a[(r, c)].inv().unwrap();
            for i in (r + 1)..n {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let f = &a[(i, c)] * &inv;
                for j in c..m {
                    a[(i, j)] = &a[(i, j)] - &(&f * &a[(r, j)]);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let det = (n == m).then(|| if pivots.len() < n { self.field.zero() } else { det });
        Echelon { pivots, det }
    }
}

struct Echelon {
    pivots: Vec<usize>,
    det: Option<Scalar>,
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        assert!(i < self.rows && j < self.cols, "matrix index ({i},{j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        assert!(i < self.rows && j < self.cols, "matrix index ({i},{j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "incompatible shapes for product");
        assert_eq!(self.field, rhs.field, "field mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = a * &rhs[(k, j)];
                    out[(i, j)] = &out[(i, j)] + &t;
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix {
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
            ..self.clone()
        }
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix {
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
            ..self.clone()
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
