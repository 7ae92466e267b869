//! Entropies and mutual informations, all in bits.

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, LOG_EPS};
use crate::states::DensityMatrix;

/// Probabilities below this are clamped to zero.
pub const PROB_CLAMP: f64 = 1e-12;

/// Tolerance on `|Σ p - 1|`.
pub const SUM_TOL: f64 = 1e-9;

/// `-Σ x log₂ x` over the entries above [`LOG_EPS`].
pub(crate) fn entropy_of(values: impl IntoIterator<Item = f64>) -> f64 {
    let h: f64 = values
        .into_iter()
        .filter(|&x| x > LOG_EPS)
        .map(|x| -x * x.log2())
        .sum();
    // -0.0 and sub-ulp negatives from pure states
    h.max(0.0)
}

/// Joint distribution over the product of per-party outcome sets, stored
/// big-endian like the matrices it is read from.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTable {
    dims: Vec<usize>,
    probs: Vec<f64>,
}

impl ProbabilityTable {
    pub fn new(dims: &[usize], probs: Vec<f64>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::NotADistribution(format!(
                "outcome counts {dims:?} must be a nonempty list of positive integers"
            )));
        }
        let total: usize = dims.iter().product();
        if probs.len() != total {
            return Err(Error::NotADistribution(format!(
                "{} probabilities for outcome counts {dims:?} (expected {total})",
                probs.len()
            )));
        }
        Ok(Self {
            dims: dims.to_vec(),
            probs: validate_distribution(&probs)?,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Marginal distribution of party `k`.
    pub fn marginal(&self, k: usize) -> Vec<f64> {
        let inner: usize = self.dims[k + 1..].iter().product();
        let d = self.dims[k];
        let mut out = vec![0.0; d];
        for (idx, p) in self.probs.iter().enumerate() {
            out[(idx / inner) % d] += p;
        }
        out
    }

    pub fn entropy(&self) -> f64 {
        entropy_of(self.probs.iter().copied())
    }
}

fn validate_distribution(p: &[f64]) -> Result<Vec<f64>> {
    if p.is_empty() {
        return Err(Error::NotADistribution("empty distribution".into()));
    }
    if let Some(&bad) = p.iter().find(|x| !x.is_finite() || **x < -PROB_CLAMP) {
        return Err(Error::NotADistribution(format!(
            "entry {bad} is not a probability"
        )));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > SUM_TOL {
        return Err(Error::NotADistribution(format!("entries sum to {sum}")));
    }
    Ok(p.iter()
        .map(|&x| if x < PROB_CLAMP { 0.0 } else { x })
        .collect())
}

/// `H(p) = -Σ p log₂ p` with `0 log 0 = 0`.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    Ok(entropy_of(validate_distribution(p)?))
}

/// `S(ρ) = -Tr ρ log₂ ρ`, evaluated on the clamped spectrum.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of(rho.spectrum().iter().copied())
}

/// Entropy of every single-subsystem marginal, in subsystem order.
pub fn marginal_entropies(rho: &DensityMatrix) -> Result<Vec<f64>> {
    (0..rho.num_subsystems())
        .map(|k| rho.reduced(&[k]).map(|r| von_neumann_entropy(&r)))
        .collect()
}

/// `Σ_i S(ρ_i) - S(ρ)` over all single subsystems.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    if rho.num_subsystems() < 2 {
        return Err(Error::SinglePartyState);
    }
    let marginals: f64 = marginal_entropies(rho)?.iter().sum();
    Ok(marginals - von_neumann_entropy(rho))
}

/// Outcome of `S(ρ‖σ)`; support mismatch is a value, not an error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelativeEntropy {
    Finite(f64),
    Infinite,
}

impl RelativeEntropy {
    pub fn finite(self) -> Option<f64> {
        match self {
            RelativeEntropy::Finite(v) => Some(v),
            RelativeEntropy::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, RelativeEntropy::Infinite)
    }
}

/// Weight of `ρ` on a kernel direction of `σ` above which the relative
/// entropy diverges.
pub const SUPPORT_TOL: f64 = 1e-9;

/// `S(ρ‖σ) = -S(ρ) - Tr ρ log₂ σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<RelativeEntropy> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "relative entropy between {0}x{0} and {1}x{1} states",
            rho.dim(),
            sigma.dim()
        )));
    }
    let eig = linalg::eigh(sigma.matrix())?;
    for (j, &s) in eig.eigenvalues.iter().enumerate() {
        if s < LOG_EPS {
            let w = eig.eigenvectors.column(j);
            if rho.matrix().expectation(&w).re > SUPPORT_TOL {
                return Ok(RelativeEntropy::Infinite);
            }
        }
    }
    let log_sigma = linalg::log2_from_eigen(&eig, LOG_EPS)?;
    let cross = trace_of_product(rho.matrix(), &log_sigma);
    Ok(RelativeEntropy::Finite(-von_neumann_entropy(rho) - cross))
}

fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for r in 0..n {
        for c in 0..n {
            acc += (a[(r, c)] * b[(c, r)]).re;
        }
    }
    acc
}

/// `Σ_k H(p_k) - H(p)` over the parties of a joint table.
pub fn classical_mutual_information(p: &ProbabilityTable) -> Result<f64> {
    if p.dims().len() < 2 {
        return Err(Error::SinglePartyState);
    }
    let marginals: f64 = (0..p.dims().len()).map(|k| entropy_of(p.marginal(k))).sum();
    Ok(marginals - p.entropy())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;
    use crate::states::{named, BellState, Family};
    use std::f64::consts::SQRT_2;

    // 2 - ¼[(2+√2)log₂(2+√2) + (2-√2)log₂(2-√2)], evaluated independently.
    const EXAMPLE_MARGINAL_ENTROPY: f64 = 0.600876036692856;

    #[test]
    fn shannon_values() {
        assert!((shannon_entropy(&[0.5, 0.5]).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(shannon_entropy(&[1.0, 0.0]).unwrap(), 0.0);
        let p = [(2.0 + SQRT_2) / 4.0, (2.0 - SQRT_2) / 4.0];
        assert!((shannon_entropy(&p).unwrap() - EXAMPLE_MARGINAL_ENTROPY).abs() < 1e-12);
        assert!(matches!(
            shannon_entropy(&[0.5, 0.6]),
            Err(Error::NotADistribution(_))
        ));
        assert!(matches!(
            shannon_entropy(&[1.5, -0.5]),
            Err(Error::NotADistribution(_))
        ));
    }

    #[test]
    fn von_neumann_values() {
        let bell = named(&Family::Bell(BellState::PhiPlus)).unwrap();
        assert!(von_neumann_entropy(&bell).abs() < 1e-9);
        let half = DensityMatrix::maximally_mixed(&[2]).unwrap();
        assert!((von_neumann_entropy(&half) - 1.0).abs() < 1e-15);
        let marginal = named(&Family::PaperExample).unwrap().reduced(&[0]).unwrap();
        assert!((von_neumann_entropy(&marginal) - EXAMPLE_MARGINAL_ENTROPY).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_values() {
        let prod = named(&Family::Product(vec![[0.1, 0.2, 0.3], [0.0, -0.5, 0.5]])).unwrap();
        assert!(mutual_information(&prod).unwrap().abs() < 1e-9);
        let bell = named(&Family::Bell(BellState::PhiPlus)).unwrap();
        assert!((mutual_information(&bell).unwrap() - 2.0).abs() < 1e-12);
        let example = named(&Family::PaperExample).unwrap();
        assert!(
            (mutual_information(&example).unwrap() - 2.0 * EXAMPLE_MARGINAL_ENTROPY).abs() < 1e-12
        );

        let single = DensityMatrix::maximally_mixed(&[3]).unwrap();
        assert_eq!(mutual_information(&single), Err(Error::SinglePartyState));
    }

    #[test]
    fn relative_entropy_cases() {
        let example = named(&Family::PaperExample).unwrap();
        let s = relative_entropy(&example, &example)
            .unwrap()
            .finite()
            .unwrap();
        assert!(s.abs() < 1e-9);

        let product = example
            .reduced(&[0])
            .unwrap()
            .tensor(&example.reduced(&[1]).unwrap());
        let s = relative_entropy(&example, &product)
            .unwrap()
            .finite()
            .unwrap();
        assert!((s - mutual_information(&example).unwrap()).abs() < 1e-10);

        let zero =
            DensityMatrix::from_pure(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], &[2]).unwrap();
        let one =
            DensityMatrix::from_pure(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0)], &[2]).unwrap();
        assert!(relative_entropy(&zero, &one).unwrap().is_infinite());
        // Support of |0><0| sits inside the support of I/2.
        let half = DensityMatrix::maximally_mixed(&[2]).unwrap();
        let s = relative_entropy(&zero, &half).unwrap().finite().unwrap();
        assert!((s - 1.0).abs() < 1e-12);

        let three = DensityMatrix::maximally_mixed(&[3]).unwrap();
        assert!(matches!(
            relative_entropy(&zero, &three),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn classical_mutual_information_values() {
        let indep = ProbabilityTable::new(&[2, 2], vec![0.25; 4]).unwrap();
        assert!(classical_mutual_information(&indep).unwrap().abs() < 1e-15);
        let corr = ProbabilityTable::new(&[2, 2], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!((classical_mutual_information(&corr).unwrap() - 1.0).abs() < 1e-15);
        let mut ghz = vec![0.0; 8];
        ghz[0] = 0.5;
        ghz[7] = 0.5;
        let ghz = ProbabilityTable::new(&[2, 2, 2], ghz).unwrap();
        assert!((classical_mutual_information(&ghz).unwrap() - 2.0).abs() < 1e-15);

        assert!(ProbabilityTable::new(&[2, 2], vec![0.5, 0.5, 0.5, 0.0]).is_err());
        assert!(ProbabilityTable::new(&[2, 2], vec![0.5, 0.5]).is_err());
    }

    #[test]
    fn table_marginals() {
        let t = ProbabilityTable::new(&[2, 3], vec![0.1, 0.2, 0.1, 0.3, 0.2, 0.1]).unwrap();
        let a = t.marginal(0);
        let b = t.marginal(1);
        assert!((a[0] - 0.4).abs() < 1e-15 && (a[1] - 0.6).abs() < 1e-15);
        assert!(
            (b[0] - 0.4).abs() < 1e-15 && (b[1] - 0.4).abs() < 1e-15 && (b[2] - 0.2).abs() < 1e-15
        );
    }
}
