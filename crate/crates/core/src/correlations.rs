//! Correlation measures built on the optimal-measurement search: discord,
//! Henderson–Vedral classical correlations, and the sequential overall
//! quantum (`Q`) and classical (`C`) correlations.

use crate::error::{Error, Result};
use crate::infotheory::{
    classical_mutual_information, marginal_entropies, mutual_information, von_neumann_entropy,
    ProbabilityTable,
};
use crate::linalg::{kron_vec, C64};
use crate::measurement::{apply_nonselective, conditionals};
use crate::optimizer::{optimize_measurement, OptimalMeasurementResult, OptimizerConfig};
use crate::states::DensityMatrix;

/// `D_k(ρ) = I(ρ) - sup J`, in bits.
pub fn discord(rho: &DensityMatrix, k: usize, config: &OptimizerConfig) -> Result<f64> {
    Ok(optimize_measurement(rho, k, config)?.discord)
}

/// Henderson–Vedral classical correlation `C_k(ρ) = sup J`, in bits.
pub fn classical_hv(rho: &DensityMatrix, k: usize, config: &OptimizerConfig) -> Result<f64> {
    Ok(optimize_measurement(rho, k, config)?.j_value)
}

/// Outcome of measuring every subsystem in turn with its step-optimal
/// measurement.
#[derive(Debug, Clone)]
pub struct SequentialReport {
    pub order: Vec<usize>,
    /// Discord removed at each step, in measurement order.
    pub step_discords: Vec<f64>,
    /// Optimizer result of each step, in measurement order.
    pub steps: Vec<OptimalMeasurementResult>,
    pub q_total: f64,
    pub c_total: f64,
    pub mutual_info: f64,
    /// Outcome distribution over subsystems `0..m` (index order, not
    /// measurement order).
    pub classical_table: ProbabilityTable,
    /// `|Q + C - I|`
    pub identity_residual: f64,
    /// `|Q - (I - I_cl(p̃))|`
    pub classical_mi_residual: f64,
    pub final_state: DensityMatrix,
}

fn check_order(order: &[usize], m: usize) -> Result<()> {
    if order.len() != m {
        return Err(Error::BadOrder(format!(
            "order {order:?} has {} entries for {m} subsystems",
            order.len()
        )));
    }
    let mut seen = vec![false; m];
    for &k in order {
        if k >= m || std::mem::replace(&mut seen[k], true) {
            return Err(Error::BadOrder(format!(
                "order {order:?} is not a permutation of 0..{m}"
            )));
        }
    }
    Ok(())
}

/// Measures the subsystems in `order`, each with the optimal measurement for
/// the current state, and accumulates the step discords into `Q`.
pub fn sequential_measure(
    rho: &DensityMatrix,
    order: &[usize],
    config: &OptimizerConfig,
) -> Result<SequentialReport> {
    let m = rho.num_subsystems();
    if m < 2 {
        return Err(Error::SinglePartyState);
    }
    check_order(order, m)?;
    let mutual_info = mutual_information(rho)?;

    let mut state = rho.clone();
    let mut steps = Vec::with_capacity(m);
    for &k in order {
        let step = optimize_measurement(&state, k, config)?;
        state = apply_nonselective(&state, k, &step.measurement)?;
        steps.push(step);
    }
    let step_discords: Vec<f64> = steps.iter().map(|s| s.discord).collect();
    let q_total: f64 = step_discords.iter().sum();

    let mut bases: Vec<&[Vec<C64>]> = vec![&[]; m];
    for s in &steps {
        bases[s.subsystem] = s.measurement.vectors();
    }
    let classical_table = outcome_table(&state, &bases)?;
    let c_total = classical_mutual_information(&classical_table)?;

    Ok(SequentialReport {
        order: order.to_vec(),
        step_discords,
        steps,
        q_total,
        c_total,
        mutual_info,
        identity_residual: (q_total + c_total - mutual_info).abs(),
        classical_mi_residual: (q_total - (mutual_info - c_total)).abs(),
        classical_table,
        final_state: state,
    })
}

/// Diagonal of `state` in the product basis built from per-subsystem bases.
fn outcome_table(state: &DensityMatrix, bases: &[&[Vec<C64>]]) -> Result<ProbabilityTable> {
    let dims = state.dims();
    let total = state.dim();
    let mut probs = Vec::with_capacity(total);
    for idx in 0..total {
        let mut rem = idx;
        let mut digits = vec![0; dims.len()];
        for s in (0..dims.len()).rev() {
            digits[s] = rem % dims[s];
            rem /= dims[s];
        }
        let mut v = vec![C64::new(1.0, 0.0)];
        for (s, &i) in digits.iter().enumerate() {
            v = kron_vec(&v, &bases[s][i]);
        }
        probs.push(state.matrix().expectation(&v).re);
    }
    ProbabilityTable::new(dims, probs)
}

fn identity_order(rho: &DensityMatrix) -> Vec<usize> {
    (0..rho.num_subsystems()).collect()
}

/// `Q` with the measurement order `0, 1, …, m-1`.
pub fn overall_q(rho: &DensityMatrix, config: &OptimizerConfig) -> Result<f64> {
    Ok(sequential_measure(rho, &identity_order(rho), config)?.q_total)
}

/// `C` with the measurement order `0, 1, …, m-1`.
pub fn overall_c(rho: &DensityMatrix, config: &OptimizerConfig) -> Result<f64> {
    Ok(sequential_measure(rho, &identity_order(rho), config)?.c_total)
}

/// Largest number of subsystems accepted by [`all_orders`].
pub const MAX_ALL_ORDERS: usize = 4;

/// `Q` evaluated for every measurement order. This goes beyond the
/// order-defined measure and is reported separately from it.
#[derive(Debug, Clone)]
pub struct OrderSweep {
    /// One report per order, orders in lexicographic sequence.
    pub reports: Vec<SequentialReport>,
    pub min_q: f64,
    /// `max Q - min Q` over orders.
    pub discrepancy: f64,
}

pub fn all_orders(rho: &DensityMatrix, config: &OptimizerConfig) -> Result<OrderSweep> {
    let m = rho.num_subsystems();
    if m > MAX_ALL_ORDERS {
        return Err(Error::BadOrder(format!(
            "all-orders sweep supports at most {MAX_ALL_ORDERS} subsystems, state has {m}"
        )));
    }
    let reports = permutations(m)
        .iter()
        .map(|order| sequential_measure(rho, order, config))
        .collect::<Result<Vec<_>>>()?;
    let min_q = reports
        .iter()
        .map(|r| r.q_total)
        .fold(f64::INFINITY, f64::min);
    let max_q = reports
        .iter()
        .map(|r| r.q_total)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(OrderSweep {
        reports,
        min_q,
        discrepancy: max_q - min_q,
    })
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                extend(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Zero-detection thresholds used by [`classify`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyThresholds {
    pub mutual_info: f64,
    pub discord: f64,
    pub commutator: f64,
}

impl Default for ClassifyThresholds {
    fn default() -> Self {
        Self {
            mutual_info: 1e-6,
            discord: 1e-6,
            commutator: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Product,
    ClassicalClassical,
    /// Zero discord with respect to the measured subsystem `k`.
    ClassicalQuantum(usize),
    Discordant,
}

pub fn classify(rho: &DensityMatrix, config: &OptimizerConfig) -> Result<Classification> {
    classify_with(rho, config, &ClassifyThresholds::default())
}

/// Bipartite classification: product, classical-classical (both discords
/// vanish and the conditional states of the optimal measurement on
/// subsystem 0 commute), classical-quantum, or discordant.
pub fn classify_with(
    rho: &DensityMatrix,
    config: &OptimizerConfig,
    thresholds: &ClassifyThresholds,
) -> Result<Classification> {
    if rho.num_subsystems() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "classification needs a bipartite state, got {} subsystems",
            rho.num_subsystems()
        )));
    }
    if mutual_information(rho)? <= thresholds.mutual_info {
        return Ok(Classification::Product);
    }
    let a = optimize_measurement(rho, 0, config)?;
    let b = optimize_measurement(rho, 1, config)?;
    let a_zero = a.discord <= thresholds.discord;
    let b_zero = b.discord <= thresholds.discord;
    if a_zero && b_zero {
        let ens = conditionals(rho, 0, &a.measurement)?;
        if ens.max_commutator() <= thresholds.commutator {
            return Ok(Classification::ClassicalClassical);
        }
    }
    Ok(if a_zero {
        Classification::ClassicalQuantum(0)
    } else if b_zero {
        Classification::ClassicalQuantum(1)
    } else {
        Classification::Discordant
    })
}

#[derive(Debug, Clone)]
pub struct SubsystemCorrelations {
    pub discord: f64,
    pub classical: f64,
    pub optimum: OptimalMeasurementResult,
}

/// Every measure for one state.
#[derive(Debug, Clone)]
pub struct CorrelationReport {
    pub marginal_entropies: Vec<f64>,
    pub joint_entropy: f64,
    pub mutual_info: f64,
    pub per_subsystem: Vec<SubsystemCorrelations>,
    pub sequential: SequentialReport,
}

pub fn correlation_report(
    rho: &DensityMatrix,
    config: &OptimizerConfig,
) -> Result<CorrelationReport> {
    let per_subsystem = (0..rho.num_subsystems())
        .map(|k| {
            optimize_measurement(rho, k, config).map(|optimum| SubsystemCorrelations {
                discord: optimum.discord,
                classical: optimum.j_value,
                optimum,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrelationReport {
        marginal_entropies: marginal_entropies(rho)?,
        joint_entropy: von_neumann_entropy(rho),
        mutual_info: mutual_information(rho)?,
        per_subsystem,
        sequential: sequential_measure(rho, &identity_order(rho), config)?,
    })
}
