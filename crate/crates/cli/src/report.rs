//! Report documents: the JSON rendering (`schema_version` "1") and the
//! human-readable text rendering of each command's result.

use std::fmt::Write;

use qcorr_core::{
    ComplexMatrix, MeasurementParams, OptimalMeasurementResult, OptimizerConfig, OrderSweep,
    ProjectiveMeasurement, SequentialReport,
};
use serde::{Deserialize, Serialize};

use crate::format::{list, matrix, sig};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigDoc {
    pub grid_theta: usize,
    pub grid_phi: usize,
    pub restarts: usize,
    pub refine_tolerance: f64,
    pub max_refine_steps: usize,
    pub seed: u64,
}

impl From<&OptimizerConfig> for ConfigDoc {
    fn from(c: &OptimizerConfig) -> Self {
        Self {
            grid_theta: c.grid_theta,
            grid_phi: c.grid_phi,
            restarts: c.restarts,
            refine_tolerance: c.refine_tolerance,
            max_refine_steps: c.max_refine_steps,
            seed: c.seed,
        }
    }
}

/// Projectors as row-major `[re, im]` arrays; qubit measurements also carry
/// the Bloch angles (radians) of the first projector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementDoc {
    pub projectors: Vec<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Vec<f64>>,
}

impl MeasurementDoc {
    fn new(m: &ProjectiveMeasurement, params: &MeasurementParams) -> Self {
        let projectors = m.projectors().iter().map(matrix_pairs).collect();
        let (theta, phi, generator) = match params {
            MeasurementParams::Qubit { theta, phi } => (Some(*theta), Some(*phi), None),
            MeasurementParams::Generator(g) => (None, None, Some(g.clone())),
        };
        Self {
            projectors,
            theta,
            phi,
            generator,
        }
    }
}

fn matrix_pairs(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| [m[(r, c)].re, m[(r, c)].im])
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfoDoc {
    pub schema_version: String,
    pub dims: Vec<usize>,
    pub marginal_entropies: Vec<f64>,
    pub joint_entropy: f64,
    pub mutual_info: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscordDoc {
    pub schema_version: String,
    pub config: ConfigDoc,
    pub dims: Vec<usize>,
    pub subsystem: usize,
    pub discord: f64,
    pub classical_correlation: f64,
    pub mutual_info: f64,
    pub measurement: MeasurementDoc,
    pub iterations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepDoc {
    pub subsystem: usize,
    pub discord: f64,
    pub j_value: f64,
    pub measurement: MeasurementDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableDoc {
    pub dims: Vec<usize>,
    pub probs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceDoc {
    pub order: Vec<usize>,
    pub steps: Vec<StepDoc>,
    pub q: f64,
    pub c: f64,
    pub mutual_info: f64,
    pub classical_table: TableDoc,
    pub identity_residual: f64,
    pub classical_mi_residual: f64,
}

impl From<&SequentialReport> for SequenceDoc {
    fn from(r: &SequentialReport) -> Self {
        Self {
            order: r.order.clone(),
            steps: r
                .steps
                .iter()
                .map(|s| StepDoc {
                    subsystem: s.subsystem,
                    discord: s.discord,
                    j_value: s.j_value,
                    measurement: MeasurementDoc::new(&s.measurement, &s.params),
                })
                .collect(),
            q: r.q_total,
            c: r.c_total,
            mutual_info: r.mutual_info,
            classical_table: TableDoc {
                dims: r.classical_table.dims().to_vec(),
                probs: r.classical_table.probs().to_vec(),
            },
            identity_residual: r.identity_residual,
            classical_mi_residual: r.classical_mi_residual,
        }
    }
}

/// Every order's `Q`, kept apart from the order-defined result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllOrdersDoc {
    pub orders: Vec<SequenceDoc>,
    pub min_q: f64,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverallDoc {
    pub schema_version: String,
    pub config: ConfigDoc,
    pub dims: Vec<usize>,
    #[serde(flatten)]
    pub sequence: SequenceDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub all_orders: Option<AllOrdersDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum ReportDocument {
    Info(InfoDoc),
    Discord(DiscordDoc),
    Overall(OverallDoc),
}

impl ReportDocument {
    pub fn info(dims: &[usize], marginals: Vec<f64>, joint: f64, mutual_info: f64) -> Self {
        ReportDocument::Info(InfoDoc {
            schema_version: SCHEMA_VERSION.into(),
            dims: dims.to_vec(),
            marginal_entropies: marginals,
            joint_entropy: joint,
            mutual_info,
        })
    }

    pub fn discord(dims: &[usize], r: &OptimalMeasurementResult, config: &OptimizerConfig) -> Self {
        ReportDocument::Discord(DiscordDoc {
            schema_version: SCHEMA_VERSION.into(),
            config: config.into(),
            dims: dims.to_vec(),
            subsystem: r.subsystem,
            discord: r.discord,
            classical_correlation: r.j_value,
            mutual_info: r.mutual_info,
            measurement: MeasurementDoc::new(&r.measurement, &r.params),
            iterations: r.iterations,
            oracle_gap: r.oracle_gap,
        })
    }

    pub fn overall(
        dims: &[usize],
        r: &SequentialReport,
        sweep: Option<&OrderSweep>,
        config: &OptimizerConfig,
    ) -> Self {
        ReportDocument::Overall(OverallDoc {
            schema_version: SCHEMA_VERSION.into(),
            config: config.into(),
            dims: dims.to_vec(),
            sequence: r.into(),
            all_orders: sweep.map(|s| AllOrdersDoc {
                orders: s.reports.iter().map(SequenceDoc::from).collect(),
                min_q: s.min_q,
                discrepancy: s.discrepancy,
            }),
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        match self {
            ReportDocument::Info(d) => info_text(d),
            ReportDocument::Discord(d) => discord_text(d),
            ReportDocument::Overall(d) => overall_text(d),
        }
    }
}

fn dims_text(dims: &[usize]) -> String {
    let parts: Vec<String> = dims.iter().map(usize::to_string).collect();
    parts.join("x")
}

fn info_text(d: &InfoDoc) -> String {
    let mut out = String::new();
    writeln!(out, "dims                {}", dims_text(&d.dims)).unwrap();
    for (k, s) in d.marginal_entropies.iter().enumerate() {
        writeln!(out, "S(rho_{k})            {}", sig(*s)).unwrap();
    }
    writeln!(out, "S(rho)              {}", sig(d.joint_entropy)).unwrap();
    writeln!(out, "I                   {}", sig(d.mutual_info)).unwrap();
    out
}

fn measurement_text(out: &mut String, m: &MeasurementDoc, indent: &str) {
    if let (Some(theta), Some(phi)) = (m.theta, m.phi) {
        writeln!(
            out,
            "{indent}theta, phi (rad)    {}, {}",
            sig(theta),
            sig(phi)
        )
        .unwrap();
    }
    if let Some(g) = &m.generator {
        writeln!(out, "{indent}generator           {}", list(g)).unwrap();
    }
    for (i, p) in m.projectors.iter().enumerate() {
        let n = p.len();
        let data = p
            .iter()
            .flatten()
            .map(|&[re, im]| num_complex::Complex64::new(re, im))
            .collect();
        let mat = ComplexMatrix::new(n, n, data).expect("square projector");
        writeln!(out, "{indent}projector {i}         {}", matrix(&mat)).unwrap();
    }
}

fn discord_text(d: &DiscordDoc) -> String {
    let mut out = String::new();
    writeln!(out, "dims                {}", dims_text(&d.dims)).unwrap();
    writeln!(out, "subsystem           {}", d.subsystem).unwrap();
    writeln!(out, "D                   {}", sig(d.discord)).unwrap();
    writeln!(out, "C_hv                {}", sig(d.classical_correlation)).unwrap();
    writeln!(out, "I                   {}", sig(d.mutual_info)).unwrap();
    measurement_text(&mut out, &d.measurement, "");
    if let Some(gap) = d.oracle_gap {
        writeln!(out, "J - J_grid          {}", sig(gap)).unwrap();
    }
    writeln!(out, "iterations          {}", d.iterations).unwrap();
    out
}

fn order_text(order: &[usize]) -> String {
    let parts: Vec<String> = order.iter().map(usize::to_string).collect();
    parts.join(",")
}

fn overall_text(d: &OverallDoc) -> String {
    let s = &d.sequence;
    let mut out = String::new();
    writeln!(out, "dims                {}", dims_text(&d.dims)).unwrap();
    writeln!(out, "order               {}", order_text(&s.order)).unwrap();
    for (i, step) in s.steps.iter().enumerate() {
        writeln!(
            out,
            "step {i}: subsystem {}  D = {}  J = {}",
            step.subsystem,
            sig(step.discord),
            sig(step.j_value)
        )
        .unwrap();
        measurement_text(&mut out, &step.measurement, "  ");
    }
    writeln!(out, "Q                   {}", sig(s.q)).unwrap();
    writeln!(out, "C                   {}", sig(s.c)).unwrap();
    writeln!(out, "I                   {}", sig(s.mutual_info)).unwrap();
    writeln!(
        out,
        "p~ (index order)    {}",
        list(&s.classical_table.probs)
    )
    .unwrap();
    writeln!(out, "|Q + C - I|         {}", sig(s.identity_residual)).unwrap();
    writeln!(out, "|Q - (I - I_cl)|    {}", sig(s.classical_mi_residual)).unwrap();
    if let Some(all) = &d.all_orders {
        writeln!(
            out,
            "all orders (not part of Q; minimum reported separately)"
        )
        .unwrap();
        for r in &all.orders {
            writeln!(
                out,
                "  order {:<12} Q = {}  C = {}",
                order_text(&r.order),
                sig(r.q),
                sig(r.c)
            )
            .unwrap();
        }
        writeln!(out, "  min Q             {}", sig(all.min_q)).unwrap();
        writeln!(out, "  max Q - min Q     {}", sig(all.discrepancy)).unwrap();
    }
    out
}
