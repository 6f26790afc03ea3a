//! States, observables and their moments.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{inner, norm_sqr, CMatrix, C64, ZERO};
use crate::seed::rng_for;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const NORM_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
/// Imaginary (or real) residue accepted in quantities that must be real
/// (or imaginary) by symmetry.
pub const RESIDUE_TOL: f64 = 1e-10;
/// Negative variances above this are round-off and clamped to zero.
pub const VARIANCE_CLAMP: f64 = 1e-10;
/// Deviation vectors shorter than this are treated as zero.
pub const DEVIATION_EPS: f64 = 1e-12;

fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    let (row, col, deviation) = m.hermitian_defect();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { row, col, deviation });
    }
    Ok(())
}

/// A Hermitian operator on a `dim`-dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: CMatrix,
}

impl Observable {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.dim() < 2 {
            return Err(Error::DimensionTooSmall(matrix.dim()));
        }
        check_hermitian(&matrix)?;
        Ok(Observable { matrix })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        Self::new(CMatrix::from_rows(rows)?)
    }

    /// Real diagonal observable.
    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let mut m = CMatrix::zeros(values.len());
        for (k, &v) in values.iter().enumerate() {
            m.set(k, k, C64::new(v, 0.0));
        }
        Self::new(m)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(CMatrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn plus(&self, other: &Observable) -> Result<Observable> {
        check_dim(self.dim(), other.dim())?;
        Ok(Observable {
            matrix: self.matrix.add(&other.matrix),
        })
    }

    pub fn minus(&self, other: &Observable) -> Result<Observable> {
        check_dim(self.dim(), other.dim())?;
        Ok(Observable {
            matrix: self.matrix.sub(&other.matrix),
        })
    }

    pub fn scaled(&self, factor: f64) -> Observable {
        Observable {
            matrix: self.matrix.scale(C64::new(factor, 0.0)),
        }
    }

    /// Sum of a nonempty list of same-dimension observables.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Observable>) -> Result<Observable> {
        let mut iter = items.into_iter();
        let first = iter.next().ok_or(Error::DimensionTooSmall(0))?.clone();
        iter.try_fold(first, |acc, o| acc.plus(o))
    }
}

/// A normalized state vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::DimensionTooSmall(amplitudes.len()));
        }
        let n2 = norm_sqr(&amplitudes);
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(PureState { amplitudes })
    }

    /// Rescale an arbitrary nonzero vector to unit norm.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let n2 = norm_sqr(&amplitudes);
        if n2 <= 0.0 || !n2.is_finite() {
            return Err(Error::NotNormalized(n2));
        }
        let inv = 1.0 / n2.sqrt();
        amplitudes.iter_mut().for_each(|z| *z *= inv);
        Self::new(amplitudes)
    }

    /// Computational basis vector |k>.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        let mut v = vec![ZERO; dim];
        if k >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: k + 1,
            });
        }
        v[k] = C64::new(1.0, 0.0);
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn overlap(&self, other: &PureState) -> Result<C64> {
        check_dim(self.dim(), other.dim())?;
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }
}

/// A positive semidefinite, unit-trace Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.dim() < 2 {
            return Err(Error::DimensionTooSmall(matrix.dim()));
        }
        check_hermitian(&matrix)?;
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::BadTrace(tr.re));
        }
        let lowest = matrix.hermitian_eigenvalues()[0];
        if lowest < -PSD_TOL {
            return Err(Error::NotPositive(lowest));
        }
        Ok(DensityMatrix { matrix })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        Self::new(CMatrix::from_rows(rows)?)
    }

    pub fn from_pure(psi: &PureState) -> Self {
        DensityMatrix {
            matrix: CMatrix::outer(psi.amplitudes()),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(CMatrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Tr(rho^2).
    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }
}

/// Either form of state; every moment operation accepts both.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl QuantumState {
    pub fn dim(&self) -> usize {
        match self {
            QuantumState::Pure(p) => p.dim(),
            QuantumState::Mixed(m) => m.dim(),
        }
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            QuantumState::Pure(p) => Some(p),
            QuantumState::Mixed(_) => None,
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            QuantumState::Pure(p) => DensityMatrix::from_pure(p),
            QuantumState::Mixed(m) => m.clone(),
        }
    }

    /// <M> for an arbitrary (not necessarily Hermitian) matrix.
    fn raw_expectation(&self, m: &CMatrix) -> C64 {
        match self {
            QuantumState::Pure(p) => m.sandwich(p.amplitudes()),
            QuantumState::Mixed(rho) => rho.matrix.trace_product(m),
        }
    }
}

impl From<PureState> for QuantumState {
    fn from(p: PureState) -> Self {
        QuantumState::Pure(p)
    }
}

impl From<DensityMatrix> for QuantumState {
    fn from(m: DensityMatrix) -> Self {
        QuantumState::Mixed(m)
    }
}

/// <A> = <psi|A|psi> or Tr(rho A).
pub fn expectation(obs: &Observable, state: &QuantumState) -> Result<f64> {
    check_dim(obs.dim(), state.dim())?;
    let z = state.raw_expectation(&obs.matrix);
    if z.im.abs() >= RESIDUE_TOL {
        return Err(Error::Residue {
            quantity: "imaginary part of expectation",
            residue: z.im,
        });
    }
    Ok(z.re)
}

/// (Delta A)^2 = <A^2> - <A>^2, clamped at zero for round-off.
pub fn variance(obs: &Observable, state: &QuantumState) -> Result<f64> {
    let mean = expectation(obs, state)?;
    let square = Observable {
        matrix: obs.matrix.matmul(&obs.matrix),
    };
    let v = expectation(&square, state)? - mean * mean;
    if v <= -VARIANCE_CLAMP {
        return Err(Error::Residue {
            quantity: "negative variance",
            residue: v,
        });
    }
    Ok(v.max(0.0))
}

/// Standard deviation, the square root of [`variance`].
pub fn std_dev(obs: &Observable, state: &QuantumState) -> Result<f64> {
    variance(obs, state).map(f64::sqrt)
}

/// <[A, B]> = <AB> - <BA>; purely imaginary for Hermitian A, B.
pub fn commutator_expectation(a: &Observable, b: &Observable, state: &QuantumState) -> Result<C64> {
    check_dim(a.dim(), b.dim())?;
    check_dim(a.dim(), state.dim())?;
    let comm = a.matrix.matmul(&b.matrix).sub(&b.matrix.matmul(&a.matrix));
    let z = state.raw_expectation(&comm);
    if z.re.abs() >= RESIDUE_TOL {
        return Err(Error::Residue {
            quantity: "real part of commutator expectation",
            residue: z.re,
        });
    }
    Ok(z)
}

/// Norm and direction of (A - <A>)|psi>.
///
/// The norm equals Delta A. The direction is `None` when psi is (numerically)
/// an eigenvector of A.
pub fn deviation_state(obs: &Observable, psi: &PureState) -> Result<(f64, Option<PureState>)> {
    check_dim(obs.dim(), psi.dim())?;
    let amps = psi.amplitudes();
    let mean = expectation(obs, &QuantumState::Pure(psi.clone()))?;
    let v: Vec<C64> = obs
        .matrix
        .apply(amps)
        .into_iter()
        .zip(amps)
        .map(|(a, p)| a - p * mean)
        .collect();
    let norm = norm_sqr(&v).sqrt();
    if norm <= DEVIATION_EPS {
        return Ok((norm, None));
    }
    let state = PureState::normalized(v)?;
    Ok((norm, Some(state)))
}

/// The qubit state orthogonal to (a, b), returned as (-conj(b), conj(a)).
pub fn orthogonal_qubit(psi: &PureState) -> Result<PureState> {
    if psi.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            supported: 2,
            actual: psi.dim(),
        });
    }
    let a = psi.amplitudes[0];
    let b = psi.amplitudes[1];
    PureState::new(vec![-b.conj(), a.conj()])
}

fn complex_normal<R: Rng>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-random pure state: normalized vector of i.i.d. complex normals.
pub fn random_pure_state(dim: usize, seed: u64) -> Result<PureState> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    let mut rng = rng_for(seed, &[1, dim as u64]);
    let v: Vec<C64> = (0..dim).map(|_| complex_normal(&mut rng)).collect();
    PureState::normalized(v)
}

/// (G + G^dagger) / 2 with G filled by standard complex normals.
pub fn random_observable(dim: usize, seed: u64) -> Result<Observable> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    let mut rng = rng_for(seed, &[2, dim as u64]);
    let g = CMatrix::from_row_major(dim, (0..dim * dim).map(|_| complex_normal(&mut rng)).collect())?;
    let mut h = g.add(&g.adjoint()).scale(C64::new(0.5, 0.0));
    // exact symmetry: mirror the upper triangle and zero the diagonal imag part
    for j in 0..dim {
        h.set(j, j, C64::new(h.get(j, j).re, 0.0));
        for k in (j + 1)..dim {
            h.set(k, j, h.get(j, k).conj());
        }
    }
    Observable::new(h)
}

/// A random unit vector orthogonal to `psi`, for any dimension.
///
/// Used wherever a relation needs some state orthogonal to psi and no
/// canonical choice exists (d > 2).
pub fn random_orthogonal_state(psi: &PureState, seed: u64) -> Result<PureState> {
    let dim = psi.dim();
    let mut rng = rng_for(seed, &[3, dim as u64]);
    loop {
        let r: Vec<C64> = (0..dim).map(|_| complex_normal(&mut rng)).collect();
        let proj = inner(psi.amplitudes(), &r);
        let v: Vec<C64> = r.iter().zip(psi.amplitudes()).map(|(x, p)| x - p * proj).collect();
        if norm_sqr(&v) > 1e-6 {
            return PureState::normalized(v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sx() -> Observable {
        Observable::from_rows(&[vec![c(0., 0.), c(1., 0.)], vec![c(1., 0.), c(0., 0.)]]).unwrap()
    }
    fn sy() -> Observable {
        Observable::from_rows(&[vec![c(0., 0.), c(0., -1.)], vec![c(0., 1.), c(0., 0.)]]).unwrap()
    }
    fn sz() -> Observable {
        Observable::diagonal(&[1.0, -1.0]).unwrap()
    }
    fn ket0() -> QuantumState {
        PureState::basis(2, 0).unwrap().into()
    }
    fn plus_x() -> PureState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(vec![c(h, 0.), c(h, 0.)]).unwrap()
    }

    #[test]
    fn expectation_examples() {
        assert_eq!(expectation(&sz(), &ket0()).unwrap(), 1.0);
        assert!((expectation(&sx(), &plus_x().into()).unwrap() - 1.0).abs() < 1e-15);
        let mixed: QuantumState = DensityMatrix::maximally_mixed(2).unwrap().into();
        assert_eq!(expectation(&sy(), &mixed).unwrap(), 0.0);
    }

    #[test]
    fn variance_examples() {
        assert_eq!(variance(&sz(), &ket0()).unwrap(), 0.0);
        assert!((variance(&sx(), &ket0()).unwrap() - 1.0).abs() < 1e-15);
        let all = Observable::sum([&sx(), &sy(), &sz()]).unwrap();
        assert!((variance(&all, &ket0()).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn commutator_examples() {
        let z = commutator_expectation(&sx(), &sy(), &ket0()).unwrap();
        assert!((z - c(0., 2.)).norm() < 1e-15);
        assert_eq!(commutator_expectation(&sx(), &sx(), &ket0()).unwrap(), c(0., 0.));
        let z = commutator_expectation(&sy(), &sz(), &plus_x().into()).unwrap();
        assert!((z - c(0., 2.)).norm() < 1e-14);
    }

    #[test]
    fn deviation_examples() {
        let psi = PureState::basis(2, 0).unwrap();
        let (n, s) = deviation_state(&sz(), &psi).unwrap();
        assert_eq!(n, 0.0);
        assert!(s.is_none());

        let (n, s) = deviation_state(&sx(), &psi).unwrap();
        assert!((n - 1.0).abs() < 1e-15);
        assert!((s.unwrap().overlap(&PureState::basis(2, 1).unwrap()).unwrap().norm() - 1.0).abs() < 1e-15);

        let (n, s) = deviation_state(&sx().plus(&sy()).unwrap(), &psi).unwrap();
        assert!((n - 2f64.sqrt()).abs() < 1e-14);
        assert!(s.unwrap().overlap(&psi).unwrap().norm() < 1e-10);
    }

    #[test]
    fn orthogonal_qubit_examples() {
        let one = orthogonal_qubit(&PureState::basis(2, 0).unwrap()).unwrap();
        assert_eq!(one.amplitudes(), &[c(-0., -0.), c(1., -0.)]);
        let perp = orthogonal_qubit(&plus_x()).unwrap();
        assert!(perp.overlap(&plus_x()).unwrap().norm() < 1e-15);
        let err = orthogonal_qubit(&PureState::basis(3, 0).unwrap()).unwrap_err();
        assert!(matches!(
            err,
            Error::UnsupportedDimension {
                supported: 2,
                actual: 3
            }
        ));
    }

    #[test]
    fn construction_rejects_bad_inputs() {
        let bad = Observable::from_rows(&[vec![c(0., 0.), c(1., 0.)], vec![c(2., 0.), c(0., 0.)]]);
        assert!(matches!(bad, Err(Error::NotHermitian { .. })));
        assert!(matches!(
            PureState::new(vec![c(1., 0.), c(1., 0.)]),
            Err(Error::NotNormalized(_))
        ));
        let not_psd = DensityMatrix::from_rows(&[vec![c(1.5, 0.), c(0., 0.)], vec![c(0., 0.), c(-0.5, 0.)]]);
        assert!(matches!(not_psd, Err(Error::NotPositive(_))));
        let bad_trace = DensityMatrix::from_rows(&[vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.), c(1., 0.)]]);
        assert!(matches!(bad_trace, Err(Error::BadTrace(_))));
        assert!(matches!(Observable::identity(1), Err(Error::DimensionTooSmall(1))));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let s: QuantumState = PureState::basis(3, 0).unwrap().into();
        assert!(matches!(
            expectation(&sz(), &s),
            Err(Error::DimensionMismatch { expected: 2, actual: 3 })
        ));
        assert!(commutator_expectation(&sx(), &sy(), &s).is_err());
    }

    #[test]
    fn random_generators_are_deterministic() {
        assert_eq!(random_pure_state(2, 42).unwrap(), random_pure_state(2, 42).unwrap());
        assert_ne!(random_pure_state(2, 42).unwrap(), random_pure_state(2, 43).unwrap());
        assert_eq!(random_observable(2, 7).unwrap(), random_observable(2, 7).unwrap());
        let o = random_observable(3, 11).unwrap();
        assert!(o.matrix().hermitian_defect().2 < 1e-12);
        assert_eq!(random_observable(2, 5).unwrap().matrix().trace().im, 0.0);
    }

    #[test]
    fn random_orthogonal_state_is_orthogonal() {
        for seed in 0..50 {
            let psi = random_pure_state(4, seed).unwrap();
            let perp = random_orthogonal_state(&psi, seed).unwrap();
            assert!(perp.overlap(&psi).unwrap().norm() < 1e-12);
        }
    }
}
