//! Parameter sweeps over the built-in scenarios. Sweep points are independent
//! and evaluated in parallel; rows are emitted in grid order regardless of
//! completion order.

use fisherwit::operators::{
    pauli, position, quadrature_set, spin_set, CoefficientVector, LocalOperatorSet, PauliAxis,
};
use fisherwit::states::{dephased_cat, ghz_weighted, hybrid_phi};
use fisherwit::witness::{constrained_qfi_max, covariance_matrix, witness_lambda_max};
use fisherwit::HilbertStructure;
use rayon::prelude::*;

use crate::table::{SweepRow, SweepTable};
use crate::CliError;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Witness sweep for the two-mode dephased superposition over the dephasing
/// parameter: the momentum-difference and position-sum witnesses plus the
/// optimized λ_max over the quadrature set.
pub fn run_fig1(
    alpha: f64,
    s_grid: &[f64],
    cutoff: usize,
    threshold: f64,
) -> Result<SweepTable, CliError> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(CliError::Validation(format!("alpha must be positive, got {alpha}")));
    }
    if s_grid.is_empty() {
        return Err(CliError::Validation("s grid must be non-empty".into()));
    }
    let set = quadrature_set(&[cutoff, cutoff]).map_err(CliError::from)?;
    let c_p = CoefficientVector::new(vec![vec![0.0, FRAC_1_SQRT_2], vec![0.0, -FRAC_1_SQRT_2]])?;
    let c_x = CoefficientVector::new(vec![vec![FRAC_1_SQRT_2, 0.0], vec![FRAC_1_SQRT_2, 0.0]])?;

    let rows: Result<Vec<SweepRow>, CliError> = s_grid
        .par_iter()
        .map(|&s| {
            let rho = dephased_cat(alpha, s, cutoff)?;
            let report = witness_lambda_max(&rho, &set, threshold)?;
            let w_p = report.witness_at(&c_p)?;
            let w_x = report.witness_at(&c_x)?;
            Ok(SweepRow { sweep_value: s, values: vec![w_p, w_x, report.lambda_max] })
        })
        .collect();
    SweepTable::new(
        vec!["s".into(), "w_p".into(), "w_x".into(), "lambda_max".into()],
        rows?,
    )
}

/// Witness sweep for the weighted N-qubit two-branch superposition over the
/// weight `q`: λ_max over the spin set, the block-constrained Fisher maximum,
/// the shot-noise bound `N`, and the weights where state-independent bounds
/// go blind.
pub fn run_fig2(
    parties: usize,
    q_grid: &[f64],
    phi: f64,
    seed: u64,
    threshold: f64,
) -> Result<SweepTable, CliError> {
    if parties < 2 {
        return Err(CliError::Validation(format!(
            "the sweep needs at least 2 qubits, got {parties}"
        )));
    }
    if q_grid.is_empty() {
        return Err(CliError::Validation("q grid must be non-empty".into()));
    }
    if let Some(&bad) = q_grid.iter().find(|q| !(0.0..=1.0).contains(*q)) {
        return Err(CliError::Validation(format!("q grid must stay in [0, 1], got {bad}")));
    }
    let set = spin_set(parties).map_err(CliError::from)?;
    let n = parties as f64;
    let blind = 0.5 * (1.0 - ((n - 1.0) / n).sqrt());

    let rows: Result<Vec<SweepRow>, CliError> = q_grid
        .par_iter()
        .map(|&q| {
            let rho = ghz_weighted(parties, q, phi)?.to_density();
            let report = witness_lambda_max(&rho, &set, threshold)?;
            let (fisher_opt, _) = constrained_qfi_max(&rho, &set, seed)?;
            Ok(SweepRow {
                sweep_value: q,
                values: vec![report.lambda_max, fisher_opt, n, blind, 1.0 - blind],
            })
        })
        .collect();
    SweepTable::new(
        vec![
            "q".into(),
            "lambda_max".into(),
            "fisher_opt".into(),
            "shot_noise_bound".into(),
            "q_lower".into(),
            "q_upper".into(),
        ],
        rows?,
    )
}

/// The qubit–oscillator operator pairing `{σ̂ₓ ; x̂}`.
pub fn hybrid_set(cutoff: usize) -> Result<LocalOperatorSet, CliError> {
    let structure = HilbertStructure::new(vec![2, cutoff])?;
    Ok(LocalOperatorSet::custom_labeled(
        structure,
        vec![vec![pauli(PauliAxis::X)], vec![position(cutoff)?]],
        vec![vec!["sx".into()], vec!["x".into()]],
    )?)
}

/// Witness of the qubit–oscillator correlated state with the generator
/// `σ̂ₓ + x̂`, plus the cross covariance `⟨σ̂ₓ x̂⟩ − ⟨σ̂ₓ⟩⟨x̂⟩` that powers it.
pub fn run_hybrid(n: usize, cutoff: usize, threshold: f64) -> Result<SweepTable, CliError> {
    let set = hybrid_set(cutoff)?;
    let c = CoefficientVector::new(vec![vec![1.0], vec![1.0]])?;
    let rho = hybrid_phi(n, cutoff)?.to_density();
    let report = witness_lambda_max(&rho, &set, threshold)?;
    let w = report.witness_at(&c)?;
    let gamma = covariance_matrix(&rho, &set)?;
    let cross = gamma.matrix()[(0, 1)];
    SweepTable::new(
        vec!["n".into(), "w".into(), "cross_cov".into(), "lambda_max".into()],
        vec![SweepRow { sweep_value: n as f64, values: vec![w, cross, report.lambda_max] }],
    )
}
