//! Built-in verification suites.

use std::f64::consts::FRAC_PI_8;
use std::fmt::Write;

use clap::ValueEnum;
use num_complex::Complex64;
use qcorr_core::random::{random_density_matrix, random_measurement};
use qcorr_core::{
    apply_nonselective, grid_search_qubit, mutual_information, named, optimize_measurement,
    relative_entropy, sequential_measure, BellState, Family, OptimizerConfig,
    ProjectiveMeasurement,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::CliError;
use crate::format::sig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    PaperExample,
    Bounds,
    Oracle,
    Identities,
    All,
}

const ORACLE_GRID: usize = 512;

/// One check: `measured <= tolerance` passes.
#[derive(Debug, Clone)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.measured <= self.tolerance
    }
}

fn check(suite: &'static str, name: impl Into<String>, measured: f64, tolerance: f64) -> Check {
    Check {
        suite,
        name: name.into(),
        measured,
        tolerance,
    }
}

pub fn run(suite: Suite, config: &OptimizerConfig) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::PaperExample {
        worked_example(config, &mut checks)?;
    }
    if all || suite == Suite::Bounds {
        bounds(config, &mut checks)?;
    }
    if all || suite == Suite::Oracle {
        oracle(config, &mut checks)?;
    }
    if all || suite == Suite::Identities {
        identities(config, &mut checks)?;
    }
    Ok(checks)
}

pub fn render(checks: &[Check]) -> String {
    let mut out = String::new();
    for c in checks {
        writeln!(
            out,
            "{}  [{}] {}: {} (tolerance {})",
            if c.passed() { "PASS" } else { "FAIL" },
            c.suite,
            c.name,
            sig(c.measured),
            sig(c.tolerance)
        )
        .unwrap();
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    writeln!(
        out,
        "{} checks, {} passed, {failed} failed",
        checks.len(),
        checks.len() - failed
    )
    .unwrap();
    out
}

fn rng(config: &OptimizerConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(config.seed)
}

fn worked_example(config: &OptimizerConfig, out: &mut Vec<Check>) -> Result<(), CliError> {
    const S: &str = "paper-example";
    let rho = named(&Family::PaperExample)?;
    let a = optimize_measurement(&rho, 0, config)?;
    out.push(check(
        S,
        "|D_A - 0.600876|",
        (a.discord - 0.600876).abs(),
        5e-4,
    ));
    let dist = a
        .measurement
        .distance_up_to_relabeling(&ProjectiveMeasurement::computational(2));
    out.push(check(S, "A projectors vs computational basis", dist, 1e-3));

    let after = apply_nonselective(&rho, 0, &a.measurement)?;
    let b = optimize_measurement(&after, 1, config)?;
    out.push(check(
        S,
        "|D_B(M_A rho) - 0.201752|",
        (b.discord - 0.201752).abs(),
        5e-4,
    ));
    let v = [
        Complex64::new(FRAC_PI_8.sin(), 0.0),
        Complex64::new(FRAC_PI_8.cos(), 0.0),
    ];
    let overlap = b.measurement.projectors()[0].expectation(&v).re;
    // Axis angle between the measured and target Bloch vectors, either label.
    let angle = (2.0 * overlap - 1.0).abs().min(1.0).acos();
    out.push(check(
        S,
        "B axis angle to sin(pi/8)|0>+cos(pi/8)|1> (rad)",
        angle,
        1e-2,
    ));

    let seq = sequential_measure(&rho, &[0, 1], config)?;
    out.push(check(
        S,
        "|Q - 0.802628|",
        (seq.q_total - 0.802628).abs(),
        1e-3,
    ));
    out.push(check(S, "|Q + C - I|", seq.identity_residual, 1e-6));
    out.push(check(
        S,
        "|Q - (I - I_cl)|",
        seq.classical_mi_residual,
        1e-6,
    ));
    Ok(())
}

fn bounds(config: &OptimizerConfig, out: &mut Vec<Check>) -> Result<(), CliError> {
    const S: &str = "bounds";
    let mut rng = rng(config);
    let (mut chain, mut monotone, mut residual) = (0.0f64, f64::NEG_INFINITY, 0.0f64);
    for i in 0..200 {
        let rho = random_density_matrix(&[2, 2], &mut rng);
        let seq = sequential_measure(&rho, &[0, 1], config)?;
        let d_a = seq.step_discords[0];
        let c_a = seq.steps[0].j_value;
        let violation = [
            -d_a,
            d_a - seq.q_total,
            seq.q_total - seq.mutual_info - 1e-6,
            seq.c_total - c_a - 1e-6,
        ]
        .into_iter()
        .fold(0.0, f64::max);
        chain = chain.max(violation);

        let m = random_measurement(2, &mut rng);
        let out_state = apply_nonselective(&rho, i % 2, &m)?;
        monotone = monotone.max(mutual_information(&out_state)? - seq.mutual_info);

        let after = apply_nonselective(&rho, 0, &seq.steps[0].measurement)?;
        residual = residual.max(optimize_measurement(&after, 0, config)?.discord);
    }
    out.push(check(
        S,
        "bound chain 0 <= D_A <= Q <= I, C <= C_A: worst violation (200 states)",
        chain,
        0.0,
    ));
    out.push(check(
        S,
        "I(M(rho)) - I(rho), random measurements (200 states)",
        monotone,
        1e-9,
    ));
    out.push(check(
        S,
        "discord left after optimal measurement (200 states)",
        residual,
        1e-3,
    ));
    Ok(())
}

fn oracle(config: &OptimizerConfig, out: &mut Vec<Check>) -> Result<(), CliError> {
    const S: &str = "oracle";
    let mut rng = rng(config);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let rho = random_density_matrix(&[2, 2], &mut rng);
        let k = i % 2;
        let opt = optimize_measurement(&rho, k, config)?;
        let grid = grid_search_qubit(&rho, k, ORACLE_GRID, ORACLE_GRID)?;
        worst = worst.max((opt.j_value - grid.j_value).abs());
    }
    out.push(check(S, "|J_opt - J_grid512| (20 states)", worst, 1e-4));

    let bell = named(&Family::Bell(BellState::PhiPlus))?;
    let seq = sequential_measure(&bell, &[0, 1], config)?;
    let bell_err = [
        (seq.mutual_info, 2.0),
        (seq.step_discords[0], 1.0),
        (seq.steps[0].j_value, 1.0),
        (seq.q_total, 1.0),
        (seq.c_total, 1.0),
    ]
    .iter()
    .map(|(a, b)| (a - b).abs())
    .fold(0.0, f64::max);
    out.push(check(
        S,
        "Bell phi+: I=2, D_A=1, C_A=1, Q=1, C=1",
        bell_err,
        1e-4,
    ));

    let ghz = named(&Family::Ghz(3))?;
    let seq = sequential_measure(&ghz, &[0, 1, 2], config)?;
    let ghz_err = [
        (seq.mutual_info, 3.0),
        (seq.step_discords[0], 1.0),
        (seq.q_total, 1.0),
        (seq.c_total, 2.0),
    ]
    .iter()
    .map(|(a, b)| (a - b).abs())
    .fold(0.0, f64::max);
    out.push(check(S, "GHZ(3): I=3, D_1=1, Q=1, C=2", ghz_err, 1e-4));
    Ok(())
}

fn identities(config: &OptimizerConfig, out: &mut Vec<Check>) -> Result<(), CliError> {
    const S: &str = "identities";
    let mut rng = rng(config);
    let shapes: [&[usize]; 4] = [&[2, 2], &[2, 3], &[3, 2], &[2, 2, 2]];
    let (mut sum, mut cl) = (0.0f64, 0.0f64);
    for i in 0..20 {
        let dims = shapes[i % shapes.len()];
        let rho = random_density_matrix(dims, &mut rng);
        let order: Vec<usize> = (0..dims.len()).collect();
        let seq = sequential_measure(&rho, &order, config)?;
        sum = sum.max(seq.identity_residual);
        cl = cl.max(seq.classical_mi_residual);
    }
    out.push(check(S, "|Q + C - I| (20 states)", sum, 1e-6));
    out.push(check(S, "|Q - (I - I_cl)| (20 states)", cl, 1e-6));

    let mut worst = 0.0f64;
    for i in 0..50 {
        let dims: &[usize] = [&[2, 2][..], &[2, 3], &[3, 3]][i % 3];
        let rho = random_density_matrix(dims, &mut rng);
        let product = rho.reduced(&[0])?.tensor(&rho.reduced(&[1])?);
        let s = relative_entropy(&rho, &product)?
            .finite()
            .unwrap_or(f64::INFINITY);
        worst = worst.max((mutual_information(&rho)? - s).abs());
    }
    out.push(check(
        S,
        "|I - S(rho || rho_A x rho_B)| (50 states)",
        worst,
        1e-8,
    ));
    Ok(())
}
