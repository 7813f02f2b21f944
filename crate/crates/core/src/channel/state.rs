use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, Spectrum};

/// Tolerance on the total mass of a probability vector.
pub const PROB_TOL: f64 = 1e-12;
/// Tolerance on Hermiticity, eigenvalue negativity and trace of density matrices.
pub const MATRIX_TOL: f64 = 1e-10;
/// Masses or eigenvalues at or below this count as outside the support.
pub const SUPPORT_EPS: f64 = 1e-12;

/// A probability vector over a finite alphabet.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbDist(Vec<f64>);

impl ProbDist {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        check_distribution(&probs).map_err(|(sum, min)| Error::NonStochasticRow { row: 0, sum, min })?;
        Ok(ProbDist(probs))
    }

    pub fn uniform(k: usize) -> Self {
        assert!(k > 0, "uniform distribution over an empty alphabet");
        ProbDist(vec![1.0 / k as f64; k])
    }

    pub fn point_mass(k: usize, at: usize) -> Self {
        assert!(at < k);
        let mut p = vec![0.0; k];
        p[at] = 1.0;
        ProbDist(p)
    }

    /// Wraps an already-checked vector (mixtures of valid rows, products of valid rows).
    pub(crate) fn from_trusted(probs: Vec<f64>) -> Self {
        ProbDist(probs)
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// Returns `(sum, min)` when `probs` is not a distribution.
pub(crate) fn check_distribution(probs: &[f64]) -> std::result::Result<(), (f64, f64)> {
    let sum: f64 = probs.iter().sum();
    let min = probs.iter().copied().fold(f64::INFINITY, f64::min);
    let finite = probs.iter().all(|p| p.is_finite());
    if probs.is_empty() || !finite || min < 0.0 || (sum - 1.0).abs() > PROB_TOL {
        Err((sum, min))
    } else {
        Ok(())
    }
}

/// A Hermitian, positive semidefinite, unit-trace matrix together with its
/// eigendecomposition. Eigenvalues in `[-1e-10, 0)` are clipped to zero.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: CMatrix,
    spectrum: Spectrum,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), got: matrix.ncols() });
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NotHermitian(f64::NAN));
        }
        let dev = linalg::hermitian_deviation(&matrix);
        if dev > MATRIX_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let matrix = linalg::hermitian_part(&matrix);
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > MATRIX_TOL {
            return Err(Error::TraceNotOne(trace));
        }
        let mut spectrum = Spectrum::of_hermitian(&matrix);
        let min = spectrum.values.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -MATRIX_TOL {
            return Err(Error::NotPositiveSemidefinite(min));
        }
        for v in &mut spectrum.values {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        Ok(DensityMatrix { matrix, spectrum })
    }

    /// Real symmetric entries, row major.
    pub fn from_real(rows: &[Vec<f64>]) -> Result<Self> {
        let m = linalg::from_parts(rows, None)
            .ok_or(Error::DimensionMismatch { expected: rows.len(), got: rows.first().map_or(0, Vec::len) })?;
        Self::new(m)
    }

    /// `|psi><psi|` for a unit vector `psi`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let d = psi.len();
        Self::new(CMatrix::from_fn(d, d, |i, j| psi[i] * psi[j].conj()))
    }

    pub fn diagonal(probs: &ProbDist) -> Self {
        let d = probs.len();
        let m = CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                Complex64::new(probs.probs()[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self::new(m).expect("diagonal of a distribution is a density matrix")
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self::diagonal(&ProbDist::uniform(d))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum.values
    }

    /// `self ⊗ other`, reusing both eigendecompositions.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            matrix: self.matrix.kronecker(&other.matrix),
            spectrum: self.spectrum.kron(&other.spectrum),
        }
    }

    /// Convex combination of valid density matrices of equal dimension.
    pub(crate) fn mixture(weights: &[f64], states: &[DensityMatrix]) -> Result<Self> {
        let d = states[0].dim();
        let mut m = CMatrix::zeros(d, d);
        for (w, s) in weights.iter().zip(states) {
            if *w != 0.0 {
                m += s.matrix() * Complex64::new(*w, 0.0);
            }
        }
        Self::new(m)
    }
}

/// Either a classical distribution or a density matrix.
#[derive(Clone, Debug)]
pub enum State {
    Classical(ProbDist),
    Quantum(DensityMatrix),
}

impl State {
    pub fn dim(&self) -> usize {
        match self {
            State::Classical(p) => p.len(),
            State::Quantum(rho) => rho.dim(),
        }
    }

    pub fn is_classical(&self) -> bool {
        matches!(self, State::Classical(_))
    }

    /// `self^{⊗n}`; for distributions the product distribution in
    /// mixed-radix order (last letter least significant).
    pub fn power(&self, n: usize) -> State {
        assert!(n >= 1);
        match self {
            State::Classical(p) => {
                let mut acc = p.probs().to_vec();
                for _ in 1..n {
                    acc = acc.iter().flat_map(|a| p.probs().iter().map(move |b| a * b)).collect();
                }
                State::Classical(ProbDist::from_trusted(acc))
            }
            State::Quantum(rho) => {
                let mut acc = rho.clone();
                for _ in 1..n {
                    acc = acc.tensor(rho);
                }
                State::Quantum(acc)
            }
        }
    }
}

impl From<ProbDist> for State {
    fn from(p: ProbDist) -> Self {
        State::Classical(p)
    }
}

impl From<DensityMatrix> for State {
    fn from(rho: DensityMatrix) -> Self {
        State::Quantum(rho)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prob_dist_rejects_bad_sums() {
        assert!(ProbDist::new(vec![0.5, 0.5]).is_ok());
        assert!(matches!(ProbDist::new(vec![0.5, 0.6]), Err(Error::NonStochasticRow { .. })));
        assert!(ProbDist::new(vec![1.2, -0.2]).is_err());
        assert!(ProbDist::new(vec![]).is_err());
        assert!(ProbDist::new(vec![f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::from_real(&[vec![1.0, 0.0], vec![0.0, 0.0]]).is_ok());
        assert!(DensityMatrix::from_real(&[vec![0.5, 0.5], vec![0.5, 0.5]]).is_ok());
        assert!(matches!(
            DensityMatrix::from_real(&[vec![0.5, 0.2], vec![0.1, 0.5]]),
            Err(Error::NotHermitian(_))
        ));
        assert!(matches!(
            DensityMatrix::from_real(&[vec![0.6, 0.0], vec![0.0, 0.6]]),
            Err(Error::TraceNotOne(_))
        ));
        assert!(matches!(
            DensityMatrix::from_real(&[vec![1.5, 0.0], vec![0.0, -0.5]]),
            Err(Error::NotPositiveSemidefinite(_))
        ));
    }

    #[test]
    fn small_negative_eigenvalues_are_clipped() {
        let rho = DensityMatrix::from_real(&[vec![1.0 + 5e-11, 0.0], vec![0.0, -5e-11]]).unwrap();
        assert!(rho.eigenvalues().iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn classical_power_is_mixed_radix() {
        let p = State::Classical(ProbDist::new(vec![0.9, 0.1]).unwrap());
        let State::Classical(p2) = p.power(2) else { unreachable!() };
        let expected = [0.9 * 0.9, 0.9 * 0.1, 0.1 * 0.9, 0.1 * 0.1];
        for (a, b) in p2.probs().iter().zip(expected) {
            assert_eq!(*a, b);
        }
    }
}
