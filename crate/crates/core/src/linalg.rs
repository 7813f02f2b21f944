//! Small dense complex linear algebra on top of `nalgebra`.
//!
//! The Hermitian eigendecomposition is the only primitive used for matrix
//! functions (logarithms and real powers); everything else here is glue.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Eigenpairs of a Hermitian matrix. Column `k` of `vectors` belongs to `values[k]`.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Spectrum {
    /// Diagonalizes `(m + m^†)/2`.
    pub fn of_hermitian(m: &CMatrix) -> Self {
        let sym = hermitian_part(m);
        let eig = SymmetricEigen::new(sym);
        Spectrum {
            values: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Rebuilds `sum_k f(values[k]) |v_k><v_k|`, skipping eigenvalues rejected by `keep`.
    pub fn apply<F, K>(&self, f: F, keep: K) -> CMatrix
    where
        F: Fn(f64) -> f64,
        K: Fn(f64) -> bool,
    {
        let d = self.dim();
        let mut out = CMatrix::zeros(d, d);
        for (k, &lambda) in self.values.iter().enumerate() {
            if !keep(lambda) {
                continue;
            }
            let w = f(lambda);
            let v = self.vectors.column(k);
            for j in 0..d {
                let vj = v[j].conj() * w;
                for i in 0..d {
                    out[(i, j)] += v[i] * vj;
                }
            }
        }
        out
    }

    /// Spectrum of the Kronecker product, without a new diagonalization.
    pub fn kron(&self, other: &Spectrum) -> Spectrum {
        let mut values = Vec::with_capacity(self.dim() * other.dim());
        for &a in &self.values {
            for &b in &other.values {
                values.push(a * b);
            }
        }
        Spectrum {
            values,
            vectors: self.vectors.kronecker(&other.vectors),
        }
    }
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Largest entrywise modulus of `m - m^†`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `Re Tr(A B)` for Hermitian `A`, `B`.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    a.dotc(b).re
}

/// `<v|M|v>` real part.
pub fn expectation(m: &CMatrix, v: &DVector<Complex64>) -> f64 {
    v.dotc(&(m * v)).re
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// Builds a complex matrix from separate real and imaginary row lists.
/// A missing imaginary part is taken as zero.
pub fn from_parts(re: &[Vec<f64>], im: Option<&[Vec<f64>]>) -> Option<CMatrix> {
    let rows = re.len();
    if rows == 0 || re.iter().any(|r| r.len() != rows) {
        return None;
    }
    if let Some(im) = im {
        if im.len() != rows || im.iter().any(|r| r.len() != rows) {
            return None;
        }
    }
    Some(CMatrix::from_fn(rows, rows, |i, j| {
        Complex64::new(re[i][j], im.map_or(0.0, |im| im[i][j]))
    }))
}

/// Splits a matrix into real and imaginary row lists.
pub fn to_parts(m: &CMatrix) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let re = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect())
        .collect();
    let im = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].im).collect())
        .collect();
    (re, im)
}
