//! Seeded random states, unitaries and measurements for property checks.

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::linalg::{ComplexMatrix, C64};
use crate::measurement::{measurement_from_unitary, ProjectiveMeasurement};
use crate::states::{BellState, DensityMatrix};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| gaussian(rng))
}

/// Full-rank mixed state `G G† / Tr(G G†)` (Hilbert–Schmidt measure).
pub fn random_density_matrix<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let g = ginibre(n, rng);
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::from_dense(w.scale(1.0 / tr), dims).expect("Wishart matrices are valid states")
}

/// Haar-random pure state.
pub fn random_pure_state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let v: Vec<C64> = v.into_iter().map(|z| z / norm).collect();
    DensityMatrix::from_pure(&v, dims).expect("normalized amplitudes")
}

/// Haar-random unitary: Gram–Schmidt on the columns of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(d, rng);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    for c in 0..d {
        let mut v = g.column(c);
        for q in &cols {
            let overlap: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= overlap * qi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(d, d, |r, c| cols[c][r])
}

pub fn random_measurement<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ProjectiveMeasurement {
    measurement_from_unitary(&random_unitary(d, rng)).expect("Haar unitary")
}

/// Mixture of the four Bell states with uniformly distributed weights.
pub fn random_bell_diagonal<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let w: Vec<f64> = (0..4).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = w.iter().sum();
    let mut m = ComplexMatrix::zeros(4, 4);
    for (b, wi) in BellState::ALL.iter().zip(&w) {
        m = &m + &ComplexMatrix::outer(&b.amplitudes()).scale(wi / total);
    }
    DensityMatrix::from_dense(m, &[2, 2]).expect("convex mixture of states")
}

/// `(U_0 ⊗ U_1 ⊗ …) ρ (…)†`
pub fn conjugate_locally(rho: &DensityMatrix, unitaries: &[ComplexMatrix]) -> DensityMatrix {
    let mut u = ComplexMatrix::identity(1);
    for v in unitaries {
        u = crate::linalg::kron(&u, v);
    }
    DensityMatrix::from_dense(rho.matrix().conjugate_by(&u), rho.dims())
        .expect("unitary conjugation preserves validity")
}
