//! Order-3 tensors `T` in `A (x) B (x) C`, their slices and flattenings, and
//! compression to the essential subspaces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::SplitMix64;
use crate::scalar::{Field, Scalar};

/// One of the three tensor factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    A,
    B,
    C,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::A, Mode::B, Mode::C];

    pub fn axis(self) -> usize {
        match self {
            Mode::A => 0,
            Mode::B => 1,
            Mode::C => 2,
        }
    }

    /// Axis order that moves this factor to the front and keeps the other
    /// two in their original relative order.
    pub fn to_front(self) -> [usize; 3] {
        match self {
            Mode::A => [0, 1, 2],
            Mode::B => [1, 0, 2],
            Mode::C => [2, 0, 1],
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "A" | "a" => Ok(Mode::A),
            "B" | "b" => Ok(Mode::B),
            "C" | "c" => Ok(Mode::C),
            _ => Err(Error::InvalidParameter(format!("unknown factor {s:?}"))),
        }
    }
}

/// A linear form on one factor, e.g. `alpha` in `A*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Covector {
    pub mode: Mode,
    pub coeffs: Vec<Scalar>,
}

impl Covector {
    pub fn new(mode: Mode, coeffs: Vec<Scalar>) -> Self {
        Covector { mode, coeffs }
    }

    /// The dual basis vector `e_i^*` of a factor of dimension `dim`.
    pub fn basis(field: Field, mode: Mode, dim: usize, i: usize) -> Self {
        let coeffs = (0..dim)
            .map(|j| if i == j { field.one() } else { field.zero() })
            .collect();
        Covector { mode, coeffs }
    }

    pub fn random(field: Field, mode: Mode, dim: usize, rng: &mut SplitMix64) -> Self {
        let coeffs = (0..dim)
            .map(|_| field.sample(rng, crate::scalar::RATIONAL_DRAW_RADIUS))
            .collect();
        Covector { mode, coeffs }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Covector {
            mode: self.mode,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Coefficients rendered as scalar literals.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn parse(field: Field, mode: Mode, coeffs: &[String]) -> Result<Self> {
        let coeffs = coeffs.iter().map(|c| field.parse_scalar(c)).collect::<Result<_>>()?;
        Ok(Covector { mode, coeffs })
    }
}

/// A dense tensor of shape `a x b x c`, stored row-major in `(i, j, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor3 {
    dims: [usize; 3],
    field: Field,
    data: Vec<Scalar>,
}

impl Tensor3 {
    pub fn zeros(field: Field, dims: [usize; 3]) -> Self {
        Tensor3 {
            dims,
            field,
            data: vec![field.zero(); dims[0] * dims[1] * dims[2]],
        }
    }

    pub fn from_fn(field: Field, dims: [usize; 3], mut f: impl FnMut(usize, usize, usize) -> Scalar) -> Self {
        let mut t = Tensor3::zeros(field, dims);
        for i in 0..dims[0] {
            for j in 0..dims[1] {
                for k in 0..dims[2] {
                    t.set(i, j, k, f(i, j, k));
                }
            }
        }
        t
    }

    /// The decomposable tensor `u (x) v (x) w`.
    pub fn outer(u: &[Scalar], v: &[Scalar], w: &[Scalar]) -> Self {
        let field = u
            .first()
            .or(v.first())
            .or(w.first())
            .map_or(Field::default(), Scalar::field);
        Tensor3::from_fn(field, [u.len(), v.len(), w.len()], |i, j, k| &(&u[i] * &v[j]) * &w[k])
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn field(&self) -> Field {
        self.field
    }

    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        assert!(
            i < self.dims[0] && j < self.dims[1] && k < self.dims[2],
            "tensor index ({i},{j},{k}) out of range for {:?}",
            self.dims
        );
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.data[self.offset(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        assert_eq!(v.field(), self.field, "entry field differs from tensor field");
        let o = self.offset(i, j, k);
        self.data[o] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Nonzero entries in `(i, j, k)` order.
    pub fn nonzero_entries(&self) -> Vec<([usize; 3], &Scalar)> {
        let mut out = Vec::new();
        for i in 0..self.dims[0] {
            for j in 0..self.dims[1] {
                for k in 0..self.dims[2] {
                    let v = self.get(i, j, k);
                    if !v.is_zero() {
                        out.push(([i, j, k], v));
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Tensor3 {
        Tensor3 {
            data: self.data.iter().map(|x| x * s).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Tensor3) -> Result<Tensor3> {
        if self.dims != other.dims {
            return Err(Error::Dimension(format!("{:?} vs {:?}", self.dims, other.dims)));
        }
        Ok(Tensor3 {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
            ..self.clone()
        })
    }

    /// Reorders the axes: axis `q` of the result is axis `order[q]` of `self`.
    pub fn permute_axes(&self, order: [usize; 3]) -> Tensor3 {
        let dims = [self.dims[order[0]], self.dims[order[1]], self.dims[order[2]]];
        Tensor3::from_fn(self.field, dims, |x, y, z| {
            let mut idx = [0; 3];
            idx[order[0]] = x;
            idx[order[1]] = y;
            idx[order[2]] = z;
            self.get(idx[0], idx[1], idx[2]).clone()
        })
    }

    /// The same tensor with `mode` moved to the A-position.
    pub fn with_front(&self, mode: Mode) -> Tensor3 {
        self.permute_axes(mode.to_front())
    }

    /// Contraction with a covector. Mode A gives the `b x c` matrix
    /// `sum_i alpha_i T[i, :, :]`; mode B gives `a x c`, mode C gives `a x b`.
    pub fn slice(&self, alpha: &Covector) -> Result<Matrix> {
        let axis = alpha.mode.axis();
        if alpha.coeffs.len() != self.dims[axis] {
            return Err(Error::Dimension(format!(
                "covector of length {} against factor {:?} of dimension {}",
                alpha.coeffs.len(),
                alpha.mode,
                self.dims[axis]
            )));
        }
        if let Some(c) = alpha.coeffs.first() {
            if c.field() != self.field {
                return Err(Error::FieldMismatch("covector and tensor fields differ".into()));
            }
        }
        let [a, b, c] = self.dims;
        let (rows, cols) = match alpha.mode {
            Mode::A => (b, c),
            Mode::B => (a, c),
            Mode::C => (a, b),
        };
        let mut m = Matrix::zeros(self.field, rows, cols);
        for (l, w) in alpha.coeffs.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for x in 0..rows {
                for y in 0..cols {
                    let v = match alpha.mode {
                        Mode::A => self.get(l, x, y),
                        Mode::B => self.get(x, l, y),
                        Mode::C => self.get(x, y, l),
                    };
                    if !v.is_zero() {
                        m[(x, y)] = &m[(x, y)] + &(w * v);
                    }
                }
            }
        }
        Ok(m)
    }

    /// Flattening along `mode`: an `a x bc` (resp. `b x ac`, `c x ab`)
    /// matrix. The complementary pair is flattened colexicographically, so the
    /// column of `(j, k)` in the A-flattening is `j + b k`.
    pub fn flattening(&self, mode: Mode) -> Matrix {
        let [a, b, c] = self.dims;
        match mode {
            Mode::A => Matrix::from_fn(self.field, a, b * c, |i, col| self.get(i, col % b, col / b).clone()),
            Mode::B => Matrix::from_fn(self.field, b, a * c, |j, col| self.get(col % a, j, col / a).clone()),
            Mode::C => Matrix::from_fn(self.field, c, a * b, |k, col| self.get(col % a, col / a, k).clone()),
        }
    }

    /// Ranks of the three flattenings. `T` lies in `Sub_{b1,b2,b3}` exactly
    /// when these are bounded by `(b1, b2, b3)`.
    pub fn multilinear_ranks(&self) -> [usize; 3] {
        Mode::ALL.map(|m| self.flattening(m).rank())
    }

    /// Applies a linear map along one factor: the factor's index `i` is
    /// replaced by `i' = 0..g.rows()` with `T'[..i'..] = sum_i g[i', i] T[..i..]`.
    pub fn transform(&self, mode: Mode, g: &Matrix) -> Result<Tensor3> {
        let axis = mode.axis();
        if g.cols() != self.dims[axis] {
            return Err(Error::Dimension(format!(
                "map with {} columns on factor of dimension {}",
                g.cols(),
                self.dims[axis]
            )));
        }
        let mut dims = self.dims;
        dims[axis] = g.rows();
        let mut out = Tensor3::zeros(self.field, dims);
        for i in 0..self.dims[0] {
            for j in 0..self.dims[1] {
                for k in 0..self.dims[2] {
                    let v = self.get(i, j, k);
                    if v.is_zero() {
                        continue;
                    }
                    let src = [i, j, k][axis];
                    for row in 0..g.rows() {
                        let w = &g[(row, src)];
                        if w.is_zero() {
                            continue;
                        }
                        let mut idx = [i, j, k];
                        idx[axis] = row;
                        let o = out.offset(idx[0], idx[1], idx[2]);
                        out.data[o] = &out.data[o] + &(w * v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Expresses `T` in bases of the images of its three flattenings.
    ///
    /// Each basis consists of the pivot columns of the corresponding
    /// flattening (after the earlier factors have been compressed), so the
    /// result is deterministic. The output dimensions equal
    /// [`multilinear_ranks`](Self::multilinear_ranks).
    pub fn compress(&self) -> (Tensor3, Compression) {
        let mut current = self.clone();
        let mut bases = Vec::with_capacity(3);
        for mode in Mode::ALL {
            let flat = current.flattening(mode);
            let pivots = flat.pivot_columns();
            let all_rows: Vec<usize> = (0..flat.rows()).collect();
            let basis = flat.select(&all_rows, &pivots);
            let left = left_inverse(&basis);
            current = current.transform(mode, &left).expect("shapes agree");
            bases.push(basis);
        }
        let bases: [Matrix; 3] = bases.try_into().expect("three factors");
        (current, Compression { bases })
    }
}

/// A left inverse of a full-column-rank matrix, supported on the first
/// independent rows.
fn left_inverse(u: &Matrix) -> Matrix {
    let r = u.cols();
    let rows = u.transpose().pivot_columns();
    debug_assert_eq!(rows.len(), r);
    let cols: Vec<usize> = (0..r).collect();
    let square = u.select(&rows, &cols);
    let inv = square.inverse().expect("square").expect("independent rows");
    let mut left = Matrix::zeros(u.field(), r, u.rows());
    for (q, &row) in rows.iter().enumerate() {
        for p in 0..r {
            left[(p, row)] = inv[(p, q)].clone();
        }
    }
    left
}

/// Change-of-basis record produced by [`Tensor3::compress`]: the columns of
/// `bases[m]` span the image of the m-th flattening.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compression {
    pub bases: [Matrix; 3],
}

impl Compression {
    /// Maps a compressed tensor back into the original spaces.
    pub fn expand(&self, compressed: &Tensor3) -> Result<Tensor3> {
        let mut t = compressed.clone();
        for mode in Mode::ALL {
            t = t.transform(mode, &self.bases[mode.axis()])?;
        }
        Ok(t)
    }
}
