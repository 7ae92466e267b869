//! Complete rank-1 projective measurements on one subsystem.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::infotheory::{entropy_of, von_neumann_entropy, PROB_CLAMP};
use crate::linalg::{self, kron, ComplexMatrix, C64};
use crate::states::DensityMatrix;

/// Tolerance on the projector identities (idempotence, orthogonality,
/// completeness, unit trace).
pub const PROJECTOR_TOL: f64 = 1e-9;

/// Tolerance on `U^dagger U = I` for [`measurement_from_unitary`].
pub const UNITARY_TOL: f64 = 1e-8;

/// `d` orthogonal rank-1 projectors summing to the identity on a
/// `d`-dimensional subsystem.
#[derive(Debug, Clone)]
pub struct ProjectiveMeasurement {
    vectors: Vec<Vec<C64>>,
    projectors: Vec<ComplexMatrix>,
}

impl ProjectiveMeasurement {
    /// Validates a list of projectors against every measurement invariant.
    pub fn from_projectors(projectors: Vec<ComplexMatrix>) -> Result<Self> {
        let d = projectors.len();
        if d < 2 {
            return Err(Error::InvalidMeasurement(format!(
                "{d} projectors; need one per basis state of a subsystem of dimension >= 2"
            )));
        }
        let identity = ComplexMatrix::identity(d);
        let mut sum = ComplexMatrix::zeros(d, d);
        let mut vectors = Vec::with_capacity(d);
        for (i, p) in projectors.iter().enumerate() {
            if p.rows() != d || p.cols() != d {
                return Err(Error::InvalidMeasurement(format!(
                    "projector {i} is {}x{}, expected {d}x{d}",
                    p.rows(),
                    p.cols()
                )));
            }
            let herm = p.hermiticity_error();
            if herm > PROJECTOR_TOL {
                return Err(Error::InvalidMeasurement(format!(
                    "projector {i} is not Hermitian (deviation {herm:e})"
                )));
            }
            let idem = (p * p).max_abs_diff(p);
            if idem > PROJECTOR_TOL {
                return Err(Error::InvalidMeasurement(format!(
                    "projector {i} is not idempotent (deviation {idem:e})"
                )));
            }
            let tr = p.trace().re;
            if (tr - 1.0).abs() > PROJECTOR_TOL {
                return Err(Error::InvalidMeasurement(format!(
                    "projector {i} has trace {tr}; rank-1 projectors are required"
                )));
            }
            for (j, q) in projectors.iter().enumerate().skip(i + 1) {
                let overlap = (p * q).max_abs();
                if overlap > PROJECTOR_TOL {
                    return Err(Error::InvalidMeasurement(format!(
                        "projectors {i} and {j} are not orthogonal (|P_i P_j| = {overlap:e})"
                    )));
                }
            }
            sum = &sum + p;
            let eig = linalg::eigh(p)?;
            vectors.push(eig.eigenvectors.column(d - 1));
        }
        let completeness = sum.max_abs_diff(&identity);
        if completeness > PROJECTOR_TOL {
            return Err(Error::InvalidMeasurement(format!(
                "projectors do not sum to the identity (deviation {completeness:e})"
            )));
        }
        Ok(Self {
            vectors,
            projectors,
        })
    }

    /// Builds projectors from vectors that are orthonormal to machine precision.
    fn from_orthonormal(vectors: Vec<Vec<C64>>) -> Self {
        let projectors = vectors.iter().map(|v| ComplexMatrix::outer(v)).collect();
        Self {
            vectors,
            projectors,
        }
    }

    pub fn computational(d: usize) -> Self {
        measurement_from_unitary(&ComplexMatrix::identity(d)).expect("identity is unitary")
    }

    pub fn subsystem_dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    /// Unit vectors spanning each projector, in outcome order.
    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.vectors
    }

    /// Largest `min_perm ||P_i - Q_σ(i)||` over outcomes, i.e. the distance
    /// between two measurements up to relabeling of the outcomes.
    pub fn distance_up_to_relabeling(&self, other: &Self) -> f64 {
        let d = self.subsystem_dim();
        if d != other.subsystem_dim() {
            return f64::INFINITY;
        }
        self.projectors
            .iter()
            .map(|p| {
                other
                    .projectors
                    .iter()
                    .map(|q| p.max_abs_diff(q))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }
}

/// Qubit measurement onto `cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>` and its
/// orthogonal complement.
pub fn qubit_measurement(theta: f64, phi: f64) -> Result<ProjectiveMeasurement> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::AngleOutOfRange(format!(
            "theta = {theta} outside [0, π]"
        )));
    }
    if !(0.0..2.0 * PI).contains(&phi) {
        return Err(Error::AngleOutOfRange(format!(
            "phi = {phi} outside [0, 2π)"
        )));
    }
    Ok(qubit_measurement_unchecked(theta, phi))
}

pub(crate) fn qubit_basis(theta: f64, phi: f64) -> [[C64; 2]; 2] {
    let (s, c) = (0.5 * theta).sin_cos();
    let phase = C64::new(phi.cos(), phi.sin());
    [
        [C64::new(c, 0.0), phase * s],
        [-phase.conj() * s, C64::new(c, 0.0)],
    ]
}

pub(crate) fn qubit_measurement_unchecked(theta: f64, phi: f64) -> ProjectiveMeasurement {
    let [v, w] = qubit_basis(theta, phi);
    ProjectiveMeasurement::from_orthonormal(vec![v.to_vec(), w.to_vec()])
}

/// Measurement onto the columns of a unitary.
pub fn measurement_from_unitary(u: &ComplexMatrix) -> Result<ProjectiveMeasurement> {
    let deviation = u.unitarity_error();
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    if u.rows() < 2 {
        return Err(Error::InvalidMeasurement(
            "subsystem dimension must be at least 2".into(),
        ));
    }
    Ok(ProjectiveMeasurement::from_orthonormal(
        orthonormal_columns(u),
    ))
}

/// Modified Gram-Schmidt over the columns; removes the residual
/// non-orthogonality of a nearly unitary input.
fn orthonormal_columns(u: &ComplexMatrix) -> Vec<Vec<C64>> {
    let n = u.rows();
    let mut out: Vec<Vec<C64>> = Vec::with_capacity(u.cols());
    for c in 0..u.cols() {
        let mut v = u.column(c);
        for q in &out {
            let overlap: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for i in 0..n {
                v[i] -= overlap * q[i];
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        out.push(v.into_iter().map(|z| z / norm).collect());
    }
    out
}

fn check_measurement(rho: &DensityMatrix, k: usize, m: &ProjectiveMeasurement) -> Result<()> {
    rho.check_subsystem(k)?;
    if m.subsystem_dim() != rho.dims()[k] {
        return Err(Error::DimensionMismatch(format!(
            "measurement acts on dimension {}, subsystem {k} has dimension {}",
            m.subsystem_dim(),
            rho.dims()[k]
        )));
    }
    Ok(())
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` at slot `k`.
pub fn embed_operator(op: &ComplexMatrix, k: usize, dims: &[usize]) -> ComplexMatrix {
    let left: usize = dims[..k].iter().product();
    let right: usize = dims[k + 1..].iter().product();
    kron(
        &kron(&ComplexMatrix::identity(left), op),
        &ComplexMatrix::identity(right),
    )
}

/// Places `slot_op` at subsystem `k` and `rest_op` on the remaining
/// subsystems (in their original order), i.e. the reordered `slot_op ⊗ rest_op`.
pub fn place_factor(
    slot_op: &ComplexMatrix,
    rest_op: &ComplexMatrix,
    k: usize,
    dims: &[usize],
) -> ComplexMatrix {
    let d = dims[k];
    let inner: usize = dims[k + 1..].iter().product();
    let total: usize = dims.iter().product();
    let split = |full: usize| {
        let right = full % inner;
        let a = (full / inner) % d;
        let left = full / (inner * d);
        (a, left * inner + right)
    };
    ComplexMatrix::from_fn(total, total, |r, c| {
        let (ar, rr) = split(r);
        let (ac, rc) = split(c);
        slot_op[(ar, ac)] * rest_op[(rr, rc)]
    })
}

/// Non-selective channel `ρ ↦ Σ_i P_i ρ P_i` with `P_i = I ⊗ Π_i ⊗ I`.
pub fn apply_nonselective(
    rho: &DensityMatrix,
    k: usize,
    m: &ProjectiveMeasurement,
) -> Result<DensityMatrix> {
    check_measurement(rho, k, m)?;
    let n = rho.dim();
    let mut out = ComplexMatrix::zeros(n, n);
    for p in m.projectors() {
        let big = embed_operator(p, k, rho.dims());
        out = &out + &(&(&big * rho.matrix()) * &big);
    }
    DensityMatrix::from_dense(out, rho.dims())
}

/// Outcome probabilities and the normalized states of the unmeasured
/// subsystems. Outcomes with `p < 1e-12` carry `None`.
#[derive(Debug, Clone)]
pub struct ConditionalEnsemble {
    pub probabilities: Vec<f64>,
    pub states: Vec<Option<DensityMatrix>>,
}

impl ConditionalEnsemble {
    /// `Σ_i p_i S(ρ_{rest|i})`, null outcomes skipped.
    pub fn average_entropy(&self) -> f64 {
        self.probabilities
            .iter()
            .zip(&self.states)
            .filter_map(|(p, s)| s.as_ref().map(|s| p * von_neumann_entropy(s)))
            .sum()
    }

    /// Largest commutator max-modulus over pairs of non-null conditional states.
    pub fn max_commutator(&self) -> f64 {
        let live: Vec<&DensityMatrix> = self.states.iter().flatten().collect();
        let mut worst = 0.0f64;
        for (i, a) in live.iter().enumerate() {
            for b in &live[i + 1..] {
                worst = worst.max(a.matrix().commutator_norm(b.matrix()));
            }
        }
        worst
    }
}

/// Blocks `ρ_ab = (<a| ⊗ I) ρ (|b> ⊗ I)` of a state with respect to one
/// subsystem, reused across many candidate measurements.
#[derive(Debug, Clone)]
pub(crate) struct LocalBlocks {
    d: usize,
    rest_dims: Vec<usize>,
    blocks: Vec<ComplexMatrix>,
    rest_marginal_entropy: f64,
}

impl LocalBlocks {
    pub(crate) fn new(rho: &DensityMatrix, k: usize) -> Result<Self> {
        rho.check_subsystem(k)?;
        if rho.num_subsystems() < 2 {
            return Err(Error::SinglePartyState);
        }
        let dims = rho.dims();
        let d = dims[k];
        let inner: usize = dims[k + 1..].iter().product();
        let outer: usize = dims[..k].iter().product();
        let rest_dim = inner * outer;
        let m = rho.matrix();
        let full = |left: usize, a: usize, right: usize| (left * d + a) * inner + right;
        let mut blocks = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                blocks.push(ComplexMatrix::from_fn(rest_dim, rest_dim, |r, c| {
                    m[(full(r / inner, a, r % inner), full(c / inner, b, c % inner))]
                }));
            }
        }
        let mut rest_marginal_entropy = 0.0;
        for j in rho.complement(k) {
            rest_marginal_entropy += von_neumann_entropy(&rho.reduced(&[j])?);
        }
        Ok(Self {
            d,
            rest_dims: rho.complement(k).iter().map(|&j| dims[j]).collect(),
            blocks,
            rest_marginal_entropy,
        })
    }

    pub(crate) fn dim(&self) -> usize {
        self.d
    }

    /// `Tr_k[(Π ⊗ I) ρ (Π ⊗ I)]` for `Π = |v><v|`, i.e. `Σ_ab conj(v_a) v_b ρ_ab`.
    pub(crate) fn unnormalized_conditional(&self, v: &[C64]) -> ComplexMatrix {
        let n = self.blocks[0].rows();
        let mut out = ComplexMatrix::zeros(n, n);
        for a in 0..self.d {
            for b in 0..self.d {
                let w = v[a].conj() * v[b];
                if w.re == 0.0 && w.im == 0.0 {
                    continue;
                }
                let blk = &self.blocks[a * self.d + b];
                for r in 0..n {
                    for c in 0..n {
                        out[(r, c)] += w * blk[(r, c)];
                    }
                }
            }
        }
        out
    }

    /// `Σ_i p_i S(ρ_{rest|i})`
    pub(crate) fn average_conditional_entropy(&self, vectors: &[impl AsRef<[C64]>]) -> f64 {
        vectors
            .iter()
            .map(|v| {
                let sigma = self.unnormalized_conditional(v.as_ref());
                let p = sigma.trace().re;
                if p < PROB_CLAMP {
                    return 0.0;
                }
                let vals = linalg::eigvalsh_unchecked(&sigma);
                p * entropy_of(vals.into_iter().map(|mu| mu / p))
            })
            .sum()
    }

    /// `Σ_{j≠k} S(ρ_j) - Σ_i p_i S(ρ_{rest|i})`
    pub(crate) fn induced_j(&self, vectors: &[impl AsRef<[C64]>]) -> f64 {
        self.rest_marginal_entropy - self.average_conditional_entropy(vectors)
    }

    pub(crate) fn ensemble(&self, m: &ProjectiveMeasurement) -> ConditionalEnsemble {
        let mut probabilities = Vec::with_capacity(self.d);
        let mut states = Vec::with_capacity(self.d);
        for v in m.vectors() {
            let sigma = self.unnormalized_conditional(v);
            let p = sigma.trace().re;
            if p < PROB_CLAMP {
                probabilities.push(p.max(0.0));
                states.push(None);
            } else {
                probabilities.push(p);
                states.push(Some(DensityMatrix::from_positive_operator(
                    &sigma,
                    &self.rest_dims,
                )));
            }
        }
        ConditionalEnsemble {
            probabilities,
            states,
        }
    }
}

/// `p_i = Tr[P_i ρ]` and `ρ_{rest|i} = Tr_k[P_i ρ P_i] / p_i`.
pub fn conditionals(
    rho: &DensityMatrix,
    k: usize,
    m: &ProjectiveMeasurement,
) -> Result<ConditionalEnsemble> {
    check_measurement(rho, k, m)?;
    Ok(LocalBlocks::new(rho, k)?.ensemble(m))
}

/// Mutual information induced by measuring subsystem `k`:
/// `Σ_{j≠k} S(ρ_j) - Σ_i p_i S(ρ_{rest|i})`.
pub fn induced_j(rho: &DensityMatrix, k: usize, m: &ProjectiveMeasurement) -> Result<f64> {
    check_measurement(rho, k, m)?;
    Ok(LocalBlocks::new(rho, k)?.induced_j(m.vectors()))
}
