//! Exit criteria for the library. Runs every criterion, prints one line per
//! criterion, and fails if any criterion fails.

use std::f64::consts::FRAC_PI_8;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use qcorr_core::random::{
    random_bell_diagonal, random_density_matrix, random_measurement, random_pure_state,
};
use qcorr_core::{
    apply_nonselective, conditionals, grid_search_qubit, mutual_information, named,
    optimize_measurement, relative_entropy, sequential_measure, BellState, ComplexMatrix,
    DensityMatrix, Family, OptimizerConfig, ProjectiveMeasurement, C64,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// Closed forms of the worked two-qubit example, evaluated independently:
// 2 - ¼[(2+√2)log₂(2+√2) + (2-√2)log₂(2-√2)] and 3 - ½[…].
const EXAMPLE_D_A: f64 = 0.600876;
const EXAMPLE_D_B: f64 = 0.201752;
const EXAMPLE_Q: f64 = 0.802628;

const ORACLE_GRID: usize = 512;

struct Outcome {
    passed: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn check(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

/// Bloch vector of a rank-1 qubit projector.
fn bloch(p: &ComplexMatrix) -> [f64; 3] {
    [
        2.0 * p[(0, 1)].re,
        -2.0 * p[(0, 1)].im,
        (p[(0, 0)] - p[(1, 1)]).re,
    ]
}

/// Angle between the axes of two qubit measurements, insensitive to the
/// outcome labels.
fn axis_angle(m: &ProjectiveMeasurement, target: &ComplexMatrix) -> f64 {
    let a = bloch(&m.projectors()[0]);
    let b = bloch(target);
    let dot = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).abs().min(1.0);
    dot.acos()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let rho = named(&Family::PaperExample).unwrap();
    let r = optimize_measurement(&rho, 0, &OptimizerConfig::default()).unwrap();
    let elapsed = start.elapsed();
    let dist = r
        .measurement
        .distance_up_to_relabeling(&ProjectiveMeasurement::computational(2));
    let err = (r.discord - EXAMPLE_D_A).abs();
    check(
        err <= 5e-4 && dist <= 1e-3 && elapsed < Duration::from_secs(5),
        format!(
            "D_A = {:.9} (|Δ| = {err:.2e} ≤ 5e-4), projector distance {dist:.2e} ≤ 1e-3, {:.2?} < 5 s",
            r.discord, elapsed
        ),
    )
}

fn criterion_2() -> Outcome {
    let rho = named(&Family::PaperExample).unwrap();
    let config = OptimizerConfig::default();
    let a = optimize_measurement(&rho, 0, &config).unwrap();
    let after = apply_nonselective(&rho, 0, &a.measurement).unwrap();
    let b = optimize_measurement(&after, 1, &config).unwrap();
    let target = ComplexMatrix::outer(&[
        C64::new(FRAC_PI_8.sin(), 0.0),
        C64::new(FRAC_PI_8.cos(), 0.0),
    ]);
    let angle = axis_angle(&b.measurement, &target);
    let err = (b.discord - EXAMPLE_D_B).abs();
    check(
        err <= 5e-4 && angle <= 1e-2,
        format!(
            "D_B(M_A ρ) = {:.9} (|Δ| = {err:.2e} ≤ 5e-4), axis angle to sin(π/8)|0>+cos(π/8)|1> = {angle:.2e} rad ≤ 1e-2",
            b.discord
        ),
    )
}

fn criterion_3() -> Outcome {
    let rho = named(&Family::PaperExample).unwrap();
    let r = sequential_measure(&rho, &[0, 1], &OptimizerConfig::default()).unwrap();
    let err = (r.q_total - EXAMPLE_Q).abs();
    check(
        err <= 1e-3 && r.identity_residual <= 1e-6 && r.classical_mi_residual <= 1e-6,
        format!(
            "Q = {:.9} (|Δ| = {err:.2e} ≤ 1e-3), C = {:.9}, |Q+C-I| = {:.2e}, |Q-(I-I_cl)| = {:.2e} (≤ 1e-6)",
            r.q_total, r.c_total, r.identity_residual, r.classical_mi_residual
        ),
    )
}

/// Runs the sequence and confirms each step's optimum against the 512² grid.
fn sequence_with_oracle(rho: &DensityMatrix) -> (qcorr_core::SequentialReport, f64) {
    let config = OptimizerConfig::default();
    let order: Vec<usize> = (0..rho.num_subsystems()).collect();
    let report = sequential_measure(rho, &order, &config).unwrap();
    let mut state = rho.clone();
    let mut worst_gap = 0.0f64;
    for step in &report.steps {
        let grid = grid_search_qubit(&state, step.subsystem, ORACLE_GRID, ORACLE_GRID).unwrap();
        worst_gap = worst_gap.max((grid.j_value - step.j_value).abs());
        state = apply_nonselective(&state, step.subsystem, &step.measurement).unwrap();
    }
    (report, worst_gap)
}

fn criterion_4() -> Outcome {
    let config = OptimizerConfig::default();
    let tol = 1e-4;
    let bell = named(&Family::Bell(BellState::PhiPlus)).unwrap();
    let bell_i = mutual_information(&bell).unwrap();
    let bell_a = optimize_measurement(&bell, 0, &config).unwrap();
    let (bell_seq, bell_gap) = sequence_with_oracle(&bell);

    let ghz = named(&Family::Ghz(3)).unwrap();
    let ghz_i = mutual_information(&ghz).unwrap();
    let (ghz_seq, ghz_gap) = sequence_with_oracle(&ghz);

    let checks = [
        (bell_i, 2.0),
        (bell_a.discord, 1.0),
        (bell_a.j_value, 1.0),
        (bell_seq.q_total, 1.0),
        (bell_seq.c_total, 1.0),
        (ghz_i, 3.0),
        (ghz_seq.step_discords[0], 1.0),
        (ghz_seq.q_total, 1.0),
        (ghz_seq.c_total, 2.0),
    ];
    let worst = checks
        .iter()
        .map(|(got, want)| (got - want).abs())
        .fold(0.0, f64::max);
    check(
        worst <= tol && bell_gap <= tol && ghz_gap <= tol,
        format!(
            "Bell: I={:.6} D_A={:.6} C_A={:.6} Q={:.6} C={:.6}; GHZ3: I={:.6} D_1={:.6} Q={:.6} C={:.6}; max |Δ| = {worst:.2e}, per-step grid-oracle gap {:.2e}/{:.2e} (≤ 1e-4)",
            bell_i, bell_a.discord, bell_a.j_value, bell_seq.q_total, bell_seq.c_total,
            ghz_i, ghz_seq.step_discords[0], ghz_seq.q_total, ghz_seq.c_total, bell_gap, ghz_gap
        ),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let config = OptimizerConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    let mut worst_residual = 0.0f64;
    let mut worst_monotone = f64::NEG_INFINITY;
    for i in 0..200 {
        let rho = random_density_matrix(&[2, 2], &mut rng);
        let seq = sequential_measure(&rho, &[0, 1], &config).unwrap();
        let d_a = seq.step_discords[0];
        let c_a = seq.steps[0].j_value;
        let (q, c, mi) = (seq.q_total, seq.c_total, seq.mutual_info);
        if !(d_a >= 0.0 && d_a <= q && q <= mi + 1e-6 && c <= c_a + 1e-6) {
            failures.push(format!("state {i}: D_A={d_a} Q={q} I={mi} C={c} C_A={c_a}"));
        }

        let k = i % 2;
        let m = random_measurement(2, &mut rng);
        let out = apply_nonselective(&rho, k, &m).unwrap();
        let gain = mutual_information(&out).unwrap() - mi;
        worst_monotone = worst_monotone.max(gain);
        if gain > 1e-9 {
            failures.push(format!("state {i}: I(M(ρ)) - I(ρ) = {gain:e}"));
        }

        let after = apply_nonselective(&rho, 0, &seq.steps[0].measurement).unwrap();
        let residual = optimize_measurement(&after, 0, &config).unwrap().discord;
        worst_residual = worst_residual.max(residual);
        if residual > 1e-3 {
            failures.push(format!("state {i}: residual discord {residual:e}"));
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(120);
    check(
        ok,
        format!(
            "200 states: bound-chain violations {}, max I(M(ρ))-I(ρ) = {worst_monotone:.2e} ≤ 1e-9, max residual discord {worst_residual:.2e} ≤ 1e-3, {elapsed:.2?} < 120 s{}",
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    )
}

fn criterion_6() -> Outcome {
    let config = OptimizerConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_gap = 0.0f64;
    let mut worst_comm = 0.0f64;
    for _ in 0..50 {
        let rho = random_bell_diagonal(&mut rng);
        let seq = sequential_measure(&rho, &[0, 1], &config).unwrap();
        worst_gap = worst_gap.max((seq.q_total - seq.step_discords[0]).abs());
        let ens = conditionals(&rho, 0, &seq.steps[0].measurement).unwrap();
        worst_comm = worst_comm.max(ens.max_commutator());
    }
    check(
        worst_gap <= 1e-3 && worst_comm <= 1e-6,
        format!("50 Bell-diagonal states: max |Q - D_A| = {worst_gap:.2e} ≤ 1e-3, max commutator {worst_comm:.2e} ≤ 1e-6"),
    )
}

fn criterion_7() -> Outcome {
    let config = OptimizerConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for i in 0..50 {
        let rho = random_density_matrix(&[2, 2], &mut rng);
        let k = i % 2;
        let opt = optimize_measurement(&rho, k, &config).unwrap();
        let grid = grid_search_qubit(&rho, k, ORACLE_GRID, ORACLE_GRID).unwrap();
        worst = worst.max((opt.j_value - grid.j_value).abs());
    }
    check(
        worst <= 1e-4,
        format!("50 states: max |J_opt - J_grid512| = {worst:.2e} ≤ 1e-4"),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let dims = [[2, 2], [2, 3], [3, 2], [3, 3]];
    let mut worst = 0.0f64;
    let mut infinite = 0;
    for i in 0..100 {
        let d = dims[i % dims.len()];
        let rho = if i % 5 == 4 {
            random_pure_state(&d, &mut rng)
        } else {
            random_density_matrix(&d, &mut rng)
        };
        let product = rho
            .reduced(&[0])
            .unwrap()
            .tensor(&rho.reduced(&[1]).unwrap());
        match relative_entropy(&rho, &product).unwrap().finite() {
            Some(s) => worst = worst.max((mutual_information(&rho).unwrap() - s).abs()),
            None => infinite += 1,
        }
    }
    check(
        worst <= 1e-8 && infinite == 0,
        format!("100 states (2x2 … 3x3): max |I - S(ρ‖ρ_A⊗ρ_B)| = {worst:.2e} ≤ 1e-8, infinite results {infinite}"),
    )
}

fn main() -> ExitCode {
    // Sanity: the closed forms behind the example constants.
    let s2 = 2f64.sqrt();
    let x = (2.0 + s2) * (2.0 + s2).log2() + (2.0 - s2) * (2.0 - s2).log2();
    assert!((2.0 - 0.25 * x - EXAMPLE_D_A).abs() < 5e-7);
    assert!((3.0 - 0.5 * x - EXAMPLE_D_B).abs() < 5e-7);
    assert!((5.0 - 0.75 * x - EXAMPLE_Q).abs() < 5e-7);

    let criteria: [Criterion; 8] = [
        ("1 worked example, discord on A", criterion_1),
        ("2 worked example, discord on B after A", criterion_2),
        ("3 worked example, overall Q and C", criterion_3),
        ("4 Bell and GHZ fixtures", criterion_4),
        ("5 bound chain on random states", criterion_5),
        ("6 maximally mixed marginals", criterion_6),
        ("7 grid-oracle equivalence", criterion_7),
        ("8 relative-entropy identity", criterion_8),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] criterion {name}: {} [{:.2?}]",
            outcome.detail,
            start.elapsed()
        );
        if !outcome.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
