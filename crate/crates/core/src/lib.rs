//! Quantum and classical correlations of finite-dimensional multipartite
//! states.
//!
//! The crate computes quantum discord, the Henderson–Vedral classical
//! correlation, and the sequential overall quantum correlation `Q` (the sum
//! of the discords removed by optimal local projective measurements applied
//! one subsystem at a time) together with its classical counterpart `C`,
//! the mutual information of the final outcome distribution. All quantities
//! are in bits.
//!
//! ```
//! use qcorr_core::{named, overall_q, Family, OptimizerConfig};
//!
//! let rho = named(&Family::PaperExample).unwrap();
//! let q = overall_q(&rho, &OptimizerConfig::default()).unwrap();
//! assert!((q - 0.802628).abs() < 1e-5);
//! ```

pub mod correlations;
pub mod error;
pub mod infotheory;
pub mod linalg;
pub mod measurement;
pub mod optimizer;
pub mod random;
pub mod states;

pub use correlations::{
    all_orders, classical_hv, classify, classify_with, correlation_report, discord, overall_c,
    overall_q, sequential_measure, Classification, ClassifyThresholds, CorrelationReport,
    OrderSweep, SequentialReport, SubsystemCorrelations,
};
pub use error::{Error, Result};
pub use infotheory::{
    classical_mutual_information, marginal_entropies, mutual_information, relative_entropy,
    shannon_entropy, von_neumann_entropy, ProbabilityTable, RelativeEntropy,
};
pub use linalg::{ComplexMatrix, EigenDecomposition, C64};
pub use measurement::{
    apply_nonselective, conditionals, induced_j, measurement_from_unitary, qubit_measurement,
    ConditionalEnsemble, ProjectiveMeasurement,
};
pub use optimizer::{
    grid_search_qubit, optimize_measurement, refine_local, unitary_from_generator, GridOptimum,
    MeasurementParams, OptimalMeasurementResult, OptimizerConfig,
};
pub use states::{named, BellState, DensityMatrix, Family, StateSpec};
