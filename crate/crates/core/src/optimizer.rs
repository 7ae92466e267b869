//! Search over complete projective measurements on one subsystem for the
//! supremum of the induced mutual information `J`.
//!
//! Qubits are parameterized by Bloch angles `(θ, φ)` and searched with an
//! exhaustive grid followed by compass search. Larger subsystems use
//! `exp(iH)` over a Hermitian generator `H`, with seeded random restarts each
//! refined by compass search over the `d²` generator entries.

use std::cmp::Ordering;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::infotheory::mutual_information;
use crate::linalg::{self, ComplexMatrix, C64};
use crate::measurement::{
    measurement_from_unitary, qubit_basis, qubit_measurement_unchecked, LocalBlocks,
    ProjectiveMeasurement,
};
use crate::states::DensityMatrix;

/// Compass search stops once the step falls below this many radians.
pub const MIN_STEP: f64 = 1e-6;

/// Discords in `[-DISCORD_FLOOR, 0)` are reported as zero.
pub const DISCORD_FLOOR: f64 = 1e-9;

const GENERATOR_INITIAL_STEP: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub grid_theta: usize,
    pub grid_phi: usize,
    /// Random starts for subsystems with `d > 2`.
    pub restarts: usize,
    /// Smallest accepted improvement in `J`; also the tie window.
    pub refine_tolerance: f64,
    pub max_refine_steps: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            grid_theta: 128,
            grid_phi: 128,
            restarts: 32,
            refine_tolerance: 1e-9,
            max_refine_steps: 500,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_theta < 2 {
            return Err(Error::BadConfig(format!(
                "grid_theta = {} must be at least 2 (both θ endpoints are sampled)",
                self.grid_theta
            )));
        }
        if self.grid_phi == 0 || self.restarts == 0 || self.max_refine_steps == 0 {
            return Err(Error::BadConfig(
                "grid_phi, restarts and max_refine_steps must be positive".into(),
            ));
        }
        if self.refine_tolerance.is_nan()
            || self.refine_tolerance <= 0.0
            || !self.refine_tolerance.is_finite()
        {
            return Err(Error::BadConfig(format!(
                "refine_tolerance = {} must be positive",
                self.refine_tolerance
            )));
        }
        Ok(())
    }

    fn grid_step(&self) -> f64 {
        (PI / (self.grid_theta - 1) as f64).max(2.0 * PI / self.grid_phi as f64)
    }
}

/// Coordinates of an optimal measurement.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasurementParams {
    /// Bloch angles of the first projector, canonicalized over relabeling.
    Qubit { theta: f64, phi: f64 },
    /// Generator entries for `U = exp(iH)`; see [`unitary_from_generator`].
    Generator(Vec<f64>),
}

impl MeasurementParams {
    pub fn values(&self) -> Vec<f64> {
        match self {
            MeasurementParams::Qubit { theta, phi } => vec![*theta, *phi],
            MeasurementParams::Generator(p) => p.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimalMeasurementResult {
    pub subsystem: usize,
    pub measurement: ProjectiveMeasurement,
    pub params: MeasurementParams,
    /// Attained `J` (bits).
    pub j_value: f64,
    pub mutual_info: f64,
    /// `I - J`, floored at zero inside the noise window.
    pub discord: f64,
    /// Compass-search polling rounds, summed over restarts.
    pub iterations: usize,
    /// `J - J_grid` for qubits, where the grid oracle exists.
    pub oracle_gap: Option<f64>,
}

/// Best point of an exhaustive `(θ, φ)` grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptimum {
    pub theta: f64,
    pub phi: f64,
    pub j_value: f64,
}

fn require_qubit(rho: &DensityMatrix, k: usize) -> Result<()> {
    rho.check_subsystem(k)?;
    let dim = rho.dims()[k];
    if dim != 2 {
        return Err(Error::NotAQubit { index: k, dim });
    }
    Ok(())
}

fn qubit_j(blocks: &LocalBlocks, theta: f64, phi: f64) -> f64 {
    blocks.induced_j(&qubit_basis(theta, phi))
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Index of the lexicographically smallest candidate whose value is within
/// `tol` of the maximum.
fn select_best<'a>(candidates: impl Iterator<Item = (&'a [f64], f64)> + Clone, tol: f64) -> usize {
    let best = candidates
        .clone()
        .map(|(_, v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut chosen: Option<(usize, &[f64])> = None;
    for (i, (params, v)) in candidates.enumerate() {
        if v < best - tol {
            continue;
        }
        match chosen {
            Some((_, p)) if lexicographic(params, p) != Ordering::Less => {}
            _ => chosen = Some((i, params)),
        }
    }
    chosen.map(|(i, _)| i).unwrap_or(0)
}

/// Exhaustive grid over `θ_i = iπ/(n_θ-1)` (both endpoints) and
/// `φ_j = 2πj/n_φ`. Ties within 1e-9 of the best resolve to the
/// lexicographically smallest `(θ, φ)`.
pub fn grid_search_qubit(
    rho: &DensityMatrix,
    k: usize,
    n_theta: usize,
    n_phi: usize,
) -> Result<GridOptimum> {
    require_qubit(rho, k)?;
    if n_theta < 2 || n_phi == 0 {
        return Err(Error::BadConfig(format!(
            "grid {n_theta}x{n_phi} needs at least 2 θ samples and 1 φ sample"
        )));
    }
    let blocks = LocalBlocks::new(rho, k)?;
    Ok(grid_search_blocks(
        &blocks,
        n_theta,
        n_phi,
        OptimizerConfig::default().refine_tolerance,
    ))
}

fn grid_search_blocks(blocks: &LocalBlocks, n_theta: usize, n_phi: usize, tol: f64) -> GridOptimum {
    let mut points = Vec::with_capacity(n_theta * n_phi);
    for i in 0..n_theta {
        let theta = PI * i as f64 / (n_theta - 1) as f64;
        for j in 0..n_phi {
            let phi = 2.0 * PI * j as f64 / n_phi as f64;
            points.push(([theta, phi], qubit_j(blocks, theta, phi)));
        }
    }
    let idx = select_best(points.iter().map(|(p, v)| (&p[..], *v)), tol);
    let ([theta, phi], j_value) = points[idx];
    GridOptimum {
        theta,
        phi,
        j_value,
    }
}

struct SearchOutcome {
    params: Vec<f64>,
    value: f64,
    iterations: usize,
}

/// Compass search (maximizing): poll `x ± step·e_i` on every axis, move to
/// the best poll if it improves by more than `tol`, otherwise halve the step.
fn compass_search(
    mut f: impl FnMut(&[f64]) -> f64,
    start: &[f64],
    initial_step: f64,
    tol: f64,
    max_steps: usize,
) -> SearchOutcome {
    let mut x = start.to_vec();
    let mut fx = f(&x);
    let mut step = initial_step;
    let mut iterations = 0;
    let mut trial = x.clone();
    while step >= MIN_STEP && iterations < max_steps {
        iterations += 1;
        let mut best: Option<(usize, f64, f64)> = None;
        for axis in 0..x.len() {
            for dir in [1.0, -1.0] {
                trial.copy_from_slice(&x);
                trial[axis] += dir * step;
                let v = f(&trial);
                if best.is_none_or(|(_, _, bv)| v > bv) {
                    best = Some((axis, dir, v));
                }
            }
        }
        match best {
            Some((axis, dir, v)) if v > fx + tol => {
                x[axis] += dir * step;
                fx = v;
            }
            _ => step *= 0.5,
        }
    }
    SearchOutcome {
        params: x,
        value: fx,
        iterations,
    }
}

/// Wraps arbitrary angles into `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
pub fn normalize_angles(theta: f64, phi: f64) -> (f64, f64) {
    let mut theta = theta.rem_euclid(2.0 * PI);
    let mut phi = phi;
    if theta > PI {
        theta = 2.0 * PI - theta;
        phi += PI;
    }
    let mut phi = phi.rem_euclid(2.0 * PI);
    if phi >= 2.0 * PI {
        phi = 0.0;
    }
    (theta.clamp(0.0, PI), phi)
}

/// Picks the representative of `{(θ, φ), (π-θ, φ+π)}` (the same
/// measurement with outcomes swapped) that is lexicographically smallest.
pub fn canonical_qubit_angles(theta: f64, phi: f64) -> (f64, f64) {
    let (theta, phi) = normalize_angles(theta, phi);
    let (alt_theta, alt_phi) = normalize_angles(PI - theta, phi + PI);
    let (theta, phi) = if lexicographic(&[alt_theta, alt_phi], &[theta, phi]) == Ordering::Less {
        (alt_theta, alt_phi)
    } else {
        (theta, phi)
    };
    // φ is meaningless at the pole.
    if theta == 0.0 {
        (0.0, 0.0)
    } else {
        (theta, phi)
    }
}

/// Derivative-free local ascent of `J` from `start`.
///
/// For a qubit subsystem `start` is `(θ, φ)` and the initial step is the
/// configured grid spacing; otherwise `start` holds `d²` generator entries.
/// The returned `J` is never below the starting value.
pub fn refine_local(
    rho: &DensityMatrix,
    k: usize,
    start: &[f64],
    config: &OptimizerConfig,
) -> Result<(Vec<f64>, f64)> {
    config.validate()?;
    let blocks = LocalBlocks::new(rho, k)?;
    let out = refine_blocks(&blocks, start, config)?;
    Ok((out.params, out.value))
}

fn refine_blocks(
    blocks: &LocalBlocks,
    start: &[f64],
    config: &OptimizerConfig,
) -> Result<SearchOutcome> {
    let d = blocks.dim();
    if d == 2 {
        if start.len() != 2 {
            return Err(Error::LengthMismatch {
                expected: 2,
                got: start.len(),
            });
        }
        Ok(compass_search(
            |p| qubit_j(blocks, p[0], p[1]),
            start,
            config.grid_step(),
            config.refine_tolerance,
            config.max_refine_steps,
        ))
    } else {
        if start.len() != d * d {
            return Err(Error::LengthMismatch {
                expected: d * d,
                got: start.len(),
            });
        }
        Ok(compass_search(
            |p| generator_j(blocks, p),
            start,
            GENERATOR_INITIAL_STEP,
            config.refine_tolerance,
            config.max_refine_steps,
        ))
    }
}

fn generator_j(blocks: &LocalBlocks, params: &[f64]) -> f64 {
    let d = blocks.dim();
    let u = unitary_from_generator(params, d).expect("length checked by caller");
    let columns: Vec<Vec<C64>> = (0..d).map(|c| u.column(c)).collect();
    blocks.induced_j(&columns)
}

/// Hermitian generator from `d²` reals: the first `d` fill the diagonal, then
/// each upper-triangle entry `(r, c)`, `r < c`, in row-major order takes a
/// (real, imaginary) pair.
pub fn hermitian_from_params(params: &[f64], d: usize) -> Result<ComplexMatrix> {
    if params.len() != d * d {
        return Err(Error::LengthMismatch {
            expected: d * d,
            got: params.len(),
        });
    }
    let mut h = ComplexMatrix::from_real_diagonal(&params[..d]);
    let mut next = d;
    for r in 0..d {
        for c in r + 1..d {
            let z = C64::new(params[next], params[next + 1]);
            next += 2;
            h[(r, c)] = z;
            h[(c, r)] = z.conj();
        }
    }
    Ok(h)
}

/// `exp(iH)` for the generator assembled by [`hermitian_from_params`].
pub fn unitary_from_generator(params: &[f64], d: usize) -> Result<ComplexMatrix> {
    let h = hermitian_from_params(params, d)?;
    linalg::expi_hermitian(&h)
}

fn floor_discord(mutual_info: f64, j_value: f64) -> f64 {
    let d = mutual_info - j_value;
    if (-DISCORD_FLOOR..0.0).contains(&d) {
        0.0
    } else {
        d
    }
}

/// Optimal measurement on subsystem `k` and the resulting discord.
pub fn optimize_measurement(
    rho: &DensityMatrix,
    k: usize,
    config: &OptimizerConfig,
) -> Result<OptimalMeasurementResult> {
    config.validate()?;
    let blocks = LocalBlocks::new(rho, k)?;
    let mutual_info = mutual_information(rho)?;
    let d = blocks.dim();

    let (measurement, params, j_value, iterations, oracle_gap) = if d == 2 {
        let grid = grid_search_blocks(
            &blocks,
            config.grid_theta,
            config.grid_phi,
            config.refine_tolerance,
        );
        let refined = refine_blocks(&blocks, &[grid.theta, grid.phi], config)?;
        let (theta, phi) = canonical_qubit_angles(refined.params[0], refined.params[1]);
        let m = qubit_measurement_unchecked(theta, phi);
        let j = blocks.induced_j(m.vectors());
        (
            m,
            MeasurementParams::Qubit { theta, phi },
            j,
            refined.iterations,
            Some(j - grid.j_value),
        )
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut outcomes = Vec::with_capacity(config.restarts);
        for _ in 0..config.restarts {
            let start: Vec<f64> = (0..d * d).map(|_| rng.random_range(-PI..=PI)).collect();
            outcomes.push(refine_blocks(&blocks, &start, config)?);
        }
        let iterations = outcomes.iter().map(|o| o.iterations).sum();
        let idx = select_best(
            outcomes.iter().map(|o| (&o.params[..], o.value)),
            config.refine_tolerance,
        );
        let best = outcomes.swap_remove(idx);
        let u = unitary_from_generator(&best.params, d)?;
        let m = measurement_from_unitary(&u)?;
        let j = blocks.induced_j(m.vectors());
        (
            m,
            MeasurementParams::Generator(best.params),
            j,
            iterations,
            None,
        )
    };

    Ok(OptimalMeasurementResult {
        subsystem: k,
        measurement,
        params,
        j_value,
        mutual_info,
        discord: floor_discord(mutual_info, j_value),
        iterations,
        oracle_gap,
    })
}
