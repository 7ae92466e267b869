//! Validated density matrices over multipartite Hilbert spaces.
//!
//! Subsystem index 0 is the leftmost tensor factor (A, or A₁), index 1 the
//! next (B, or A₂), and so on.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::linalg::{self, kron, ComplexMatrix, C64, PSD_TOL};

/// Tolerance on `|Tr ρ - 1|`.
pub const TRACE_TOL: f64 = 1e-9;

/// Tolerance on `| ||ψ|| - 1 |` for pure-state amplitudes.
pub const NORM_TOL: f64 = 1e-9;

/// A Hermitian, unit-trace, positive-semidefinite matrix together with the
/// subsystem dimensions it acts on.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
    // ascending; entries in [-1e-9, 0) are kept as computed
    spectrum: Vec<f64>,
}

impl DensityMatrix {
    /// Validates `matrix` as a state on the given subsystems.
    pub fn from_dense(matrix: ComplexMatrix, dims: &[usize]) -> Result<Self> {
        check_subsystem_dims(dims)?;
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let total: usize = dims.iter().product();
        if total != matrix.rows() {
            return Err(Error::DimensionMismatch(format!(
                "subsystem dimensions {dims:?} multiply to {total}, matrix is {n}x{n}",
                n = matrix.rows()
            )));
        }
        let deviation = matrix.hermiticity_error();
        if deviation > linalg::HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let matrix = matrix.hermitian_part();
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne { trace });
        }
        let spectrum = linalg::eigvalsh_unchecked(&matrix);
        if spectrum[0] < -PSD_TOL {
            return Err(Error::NotPsd {
                min_eigenvalue: spectrum[0],
            });
        }
        Ok(Self {
            dims: dims.to_vec(),
            matrix,
            spectrum,
        })
    }

    /// Normalizes a positive operator produced internally (a conditional
    /// state `σ/p`) without re-running the tolerance checks, which would
    /// amplify roundoff for small `p`. Negative eigenvalue dust is kept in
    /// the spectrum and clamped by the entropy code.
    pub(crate) fn from_positive_operator(sigma: &ComplexMatrix, dims: &[usize]) -> Self {
        let sym = sigma.hermitian_part();
        let trace = sym.trace().re;
        let matrix = sym.scale(1.0 / trace);
        let spectrum = linalg::eigvalsh_unchecked(&matrix);
        Self {
            dims: dims.to_vec(),
            matrix,
            spectrum,
        }
    }

    /// `|ψ><ψ|` from amplitudes in the big-endian computational basis.
    pub fn from_pure(amplitudes: &[C64], dims: &[usize]) -> Result<Self> {
        check_subsystem_dims(dims)?;
        let total: usize = dims.iter().product();
        if amplitudes.len() != total {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes supplied for subsystem dimensions {dims:?} (total {total})",
                amplitudes.len()
            )));
        }
        if let Some(z) = amplitudes
            .iter()
            .find(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::ParamOutOfRange(format!("non-finite amplitude {z}")));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Self::from_dense(ComplexMatrix::outer(amplitudes), dims)
    }

    pub fn maximally_mixed(dims: &[usize]) -> Result<Self> {
        check_subsystem_dims(dims)?;
        let total: usize = dims.iter().product();
        Self::from_dense(
            ComplexMatrix::identity(total).scale(1.0 / total as f64),
            dims,
        )
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Ascending eigenvalues as computed (may contain dust down to -1e-9).
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    /// Reduced state on the listed subsystems (in ascending index order).
    pub fn reduced(&self, keep: &[usize]) -> Result<Self> {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let m = linalg::partial_trace(&self.matrix, &self.dims, &keep)?;
        let dims: Vec<usize> = keep.iter().map(|&k| self.dims[k]).collect();
        Self::from_dense(m, &dims)
    }

    /// `self ⊗ other`, dimensions concatenated.
    pub fn tensor(&self, other: &Self) -> Self {
        let matrix = kron(&self.matrix, &other.matrix);
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut spectrum: Vec<f64> = self
            .spectrum
            .iter()
            .flat_map(|a| other.spectrum.iter().map(move |b| a * b))
            .collect();
        spectrum.sort_by(f64::total_cmp);
        Self {
            dims,
            matrix,
            spectrum,
        }
    }

    /// Every subsystem index except `k`, in order.
    pub fn complement(&self, k: usize) -> Vec<usize> {
        (0..self.dims.len()).filter(|&i| i != k).collect()
    }

    pub(crate) fn check_subsystem(&self, k: usize) -> Result<()> {
        if k >= self.dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "subsystem index {k} out of range for {} subsystems",
                self.dims.len()
            )));
        }
        Ok(())
    }
}

fn check_subsystem_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::DimensionMismatch(
            "no subsystem dimensions given".into(),
        ));
    }
    if let Some(&d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dimension {d} in {dims:?} is below 2"
        )));
    }
    Ok(())
}

/// The four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    pub fn amplitudes(self) -> [C64; 4] {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let z = C64::new(0.0, 0.0);
        match self {
            BellState::PhiPlus => [h, z, z, h],
            BellState::PhiMinus => [h, z, z, -h],
            BellState::PsiPlus => [z, h, h, z],
            BellState::PsiMinus => [z, h, -h, z],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BellState::PhiPlus => "phi+",
            BellState::PhiMinus => "phi-",
            BellState::PsiPlus => "psi+",
            BellState::PsiMinus => "psi-",
        }
    }
}

impl std::str::FromStr for BellState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BellState::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| {
                Error::ParamOutOfRange(format!(
                    "bell state `{s}`; expected one of phi+, phi-, psi+, psi-"
                ))
            })
    }
}

/// Named benchmark states.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `(|0>|0> + |1>|+>)/√2`
    PaperExample,
    Bell(BellState),
    /// `(|0…0> + |1…1>)/√2` on `n` qubits.
    Ghz(usize),
    /// `p |Ψ⁻><Ψ⁻| + (1 - p) I/4`, `|Ψ⁻> = (|01> - |10>)/√2`.
    Werner(f64),
    /// Product of qubit states given by Bloch vectors.
    Product(Vec<[f64; 3]>),
    MaximallyMixed(Vec<usize>),
}

impl Family {
    pub const NAMES: [&'static str; 6] = [
        "paper_example",
        "bell",
        "ghz",
        "werner",
        "product",
        "maximally_mixed",
    ];
}

/// Builds the named benchmark state.
pub fn named(family: &Family) -> Result<DensityMatrix> {
    match family {
        Family::PaperExample => {
            let h = C64::new(FRAC_1_SQRT_2, 0.0);
            let q = C64::new(0.5, 0.0);
            DensityMatrix::from_pure(&[h, C64::new(0.0, 0.0), q, q], &[2, 2])
        }
        Family::Bell(which) => DensityMatrix::from_pure(&which.amplitudes(), &[2, 2]),
        &Family::Ghz(n) => {
            if n < 2 {
                return Err(Error::ParamOutOfRange(format!("ghz needs n >= 2, got {n}")));
            }
            if n > 6 {
                return Err(Error::ParamOutOfRange(format!(
                    "ghz supports at most 6 qubits, got {n}"
                )));
            }
            let total = 1usize << n;
            let mut amps = vec![C64::new(0.0, 0.0); total];
            amps[0] = C64::new(FRAC_1_SQRT_2, 0.0);
            amps[total - 1] = C64::new(FRAC_1_SQRT_2, 0.0);
            DensityMatrix::from_pure(&amps, &vec![2; n])
        }
        &Family::Werner(p) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::ParamOutOfRange(format!(
                    "werner weight p = {p} outside [0, 1]"
                )));
            }
            let singlet = ComplexMatrix::outer(&BellState::PsiMinus.amplitudes());
            let mixed = ComplexMatrix::identity(4).scale(0.25 * (1.0 - p));
            DensityMatrix::from_dense(&singlet.scale(p) + &mixed, &[2, 2])
        }
        Family::Product(blochs) => {
            if blochs.is_empty() {
                return Err(Error::ParamOutOfRange(
                    "product state needs at least one Bloch vector".into(),
                ));
            }
            if blochs.len() > 6 {
                return Err(Error::ParamOutOfRange(format!(
                    "product state supports at most 6 qubits, got {}",
                    blochs.len()
                )));
            }
            let mut acc: Option<DensityMatrix> = None;
            for r in blochs {
                let q = qubit_from_bloch(*r)?;
                acc = Some(match acc {
                    None => q,
                    Some(a) => a.tensor(&q),
                });
            }
            Ok(acc.expect("nonempty"))
        }
        Family::MaximallyMixed(dims) => DensityMatrix::maximally_mixed(dims),
    }
}

/// `(I + r·σ)/2`
pub fn qubit_from_bloch(r: [f64; 3]) -> Result<DensityMatrix> {
    let len = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if !len.is_finite() || len > 1.0 + 1e-12 {
        return Err(Error::ParamOutOfRange(format!(
            "Bloch vector {r:?} has length {len} > 1"
        )));
    }
    let m = ComplexMatrix::new(
        2,
        2,
        vec![
            C64::new(0.5 * (1.0 + r[2]), 0.0),
            C64::new(0.5 * r[0], -0.5 * r[1]),
            C64::new(0.5 * r[0], 0.5 * r[1]),
            C64::new(0.5 * (1.0 - r[2]), 0.0),
        ],
    )?;
    DensityMatrix::from_dense(m, &[2])
}

/// How a state is specified before construction.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Dense {
        dims: Vec<usize>,
        matrix: ComplexMatrix,
    },
    Pure {
        dims: Vec<usize>,
        amplitudes: Vec<C64>,
    },
    Named(Family),
}

impl StateSpec {
    pub fn build(&self) -> Result<DensityMatrix> {
        match self {
            StateSpec::Dense { dims, matrix } => DensityMatrix::from_dense(matrix.clone(), dims),
            StateSpec::Pure { dims, amplitudes } => DensityMatrix::from_pure(amplitudes, dims),
            StateSpec::Named(f) => named(f),
        }
    }
}
