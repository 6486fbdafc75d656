//! JSON scenario files: a state family with parameters, an operator set, one
//! swept parameter, and the requested output columns.

use std::collections::BTreeMap;
use std::path::Path;

use fisherwit::operators::{quadrature_set, spin_set};
use fisherwit::states::{default_cutoff, random_separable};
use fisherwit::witness::{witness_lambda_max, DETECTION_THRESHOLD};
use fisherwit::HilbertStructure;
use serde::Deserialize;

use crate::sweeps::{run_fig1, run_fig2, run_hybrid};
use crate::table::{grid, SweepRow, SweepTable};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateFamily {
    DephasedCat,
    GhzWeighted,
    HybridPhi,
    #[serde(rename = "custom-mixture")]
    CustomMixture,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorSetKind {
    Spin,
    Quadrature,
    Custom,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Sweep {
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

/// A declarative sweep: which state family to build, its fixed parameters,
/// which operator set to witness with, what to sweep, and which columns to
/// emit.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Scenario {
    pub state_family: StateFamily,
    #[serde(default)]
    pub family_params: BTreeMap<String, f64>,
    pub operator_set: OperatorSetKind,
    pub sweep: Sweep,
    /// Result columns to emit, in order; empty means all columns the family
    /// provides.
    #[serde(default)]
    pub outputs: Vec<String>,
}

/// Command-line overrides applied on top of a scenario file.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub cutoff: Option<usize>,
    pub seed: u64,
    pub threshold: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { cutoff: None, seed: 0, threshold: DETECTION_THRESHOLD }
    }
}

impl Scenario {
    fn param(&self, name: &str) -> Option<f64> {
        self.family_params.get(name).copied()
    }

    fn required(&self, name: &str) -> Result<f64, CliError> {
        self.param(name).ok_or_else(|| {
            CliError::Validation(format!("familyParams.{name} is required for this scenario"))
        })
    }

    fn int_param(&self, name: &str) -> Result<Option<usize>, CliError> {
        self.param(name).map(|v| as_integer(name, v)).transpose()
    }
}

fn as_integer(name: &str, v: f64) -> Result<usize, CliError> {
    if !v.is_finite() || v < 0.0 || v.fract().abs() > 1e-9 || v > 1e12 {
        return Err(CliError::Validation(format!(
            "familyParams.{name} must be a non-negative integer, got {v}"
        )));
    }
    Ok(v.round() as usize)
}

fn integer_grid(name: &str, values: &[f64]) -> Result<Vec<usize>, CliError> {
    values
        .iter()
        .map(|&v| {
            if !v.is_finite() || v < 0.0 || v.fract().abs() > 1e-9 {
                Err(CliError::Validation(format!(
                    "sweep.parameter {name:?} needs integer grid values, got {v}"
                )))
            } else {
                Ok(v.round() as usize)
            }
        })
        .collect()
}

fn require_set(
    scenario: &Scenario,
    expected: OperatorSetKind,
    context: &str,
) -> Result<(), CliError> {
    if scenario.operator_set != expected {
        return Err(CliError::Validation(format!(
            "operatorSet: {context} requires {expected:?} (lowercase in JSON)"
        )));
    }
    Ok(())
}

fn finish(table: SweepTable, outputs: &[String]) -> Result<SweepTable, CliError> {
    if outputs.is_empty() {
        Ok(table)
    } else {
        table.project(outputs)
    }
}

/// Parses and runs a scenario file; identical input gives byte-identical CSV.
pub fn run_scenario(path: &Path, opts: &RunOptions) -> Result<SweepTable, CliError> {
    let text = std::fs::read_to_string(path)?;
    let scenario: Scenario = serde_json::from_str(&text)?;
    scenario_table(&scenario, opts)
}

/// Evaluates a parsed scenario.
pub fn scenario_table(scenario: &Scenario, opts: &RunOptions) -> Result<SweepTable, CliError> {
    let sweep = &scenario.sweep;
    let values = grid(sweep.start, sweep.stop, sweep.step)?;
    match scenario.state_family {
        StateFamily::DephasedCat => {
            require_set(scenario, OperatorSetKind::Quadrature, "dephased_cat")?;
            match sweep.parameter.as_str() {
                "s" => {
                    let alpha = scenario.required("alpha")?;
                    let cutoff = resolve_cutoff(scenario, opts, alpha)?;
                    let table = run_fig1(alpha, &values, cutoff, opts.threshold)?;
                    finish(table, &scenario.outputs)
                }
                "alpha" => {
                    let s = scenario.required("s")?;
                    let max_alpha = values.iter().cloned().fold(0.0, f64::max);
                    let cutoff = resolve_cutoff(scenario, opts, max_alpha)?;
                    let mut rows = Vec::with_capacity(values.len());
                    for &alpha in &values {
                        let inner = run_fig1(alpha, &[s], cutoff, opts.threshold)?;
                        rows.push(SweepRow {
                            sweep_value: alpha,
                            values: inner.rows[0].values.clone(),
                        });
                    }
                    let table = SweepTable::new(
                        vec!["alpha".into(), "w_p".into(), "w_x".into(), "lambda_max".into()],
                        rows,
                    )?;
                    finish(table, &scenario.outputs)
                }
                other => Err(CliError::Validation(format!(
                    "sweep.parameter: dephased_cat sweeps \"s\" or \"alpha\", got {other:?}"
                ))),
            }
        }
        StateFamily::GhzWeighted => {
            require_set(scenario, OperatorSetKind::Spin, "ghz_weighted")?;
            if sweep.parameter != "q" {
                return Err(CliError::Validation(format!(
                    "sweep.parameter: ghz_weighted sweeps \"q\", got {:?}",
                    sweep.parameter
                )));
            }
            let parties = scenario
                .int_param("N")?
                .ok_or_else(|| CliError::Validation("familyParams.N is required for ghz_weighted".into()))?;
            let phi = scenario.param("phi").unwrap_or(0.0);
            let seed = scenario.int_param("seed")?.map(|s| s as u64).unwrap_or(opts.seed);
            let table = run_fig2(parties, &values, phi, seed, opts.threshold)?;
            finish(table, &scenario.outputs)
        }
        StateFamily::HybridPhi => {
            require_set(scenario, OperatorSetKind::Custom, "hybrid_phi")?;
            if sweep.parameter != "n" {
                return Err(CliError::Validation(format!(
                    "sweep.parameter: hybrid_phi sweeps \"n\", got {:?}",
                    sweep.parameter
                )));
            }
            let levels = integer_grid("n", &values)?;
            let max_n = *levels.iter().max().expect("non-empty grid");
            let cutoff = match (opts.cutoff, scenario.int_param("cutoff")?) {
                (Some(c), _) => c,
                (None, Some(c)) => c,
                (None, None) => max_n + 8,
            };
            let mut tables = Vec::with_capacity(levels.len());
            for &n in &levels {
                tables.push(run_hybrid(n, cutoff, opts.threshold)?);
            }
            finish(SweepTable::stack(tables)?, &scenario.outputs)
        }
        StateFamily::CustomMixture => {
            let parties = scenario
                .int_param("N")?
                .ok_or_else(|| CliError::Validation("familyParams.N is required for custom-mixture".into()))?;
            let dim = scenario.int_param("dim")?.unwrap_or(2);
            let set = match scenario.operator_set {
                OperatorSetKind::Spin => {
                    if dim != 2 {
                        return Err(CliError::Validation(format!(
                            "operatorSet: spin requires familyParams.dim = 2, got {dim}"
                        )));
                    }
                    spin_set(parties)?
                }
                OperatorSetKind::Quadrature => quadrature_set(&vec![dim; parties])?,
                OperatorSetKind::Custom => {
                    return Err(CliError::Validation(
                        "operatorSet: custom-mixture supports \"spin\" or \"quadrature\"".into(),
                    ))
                }
            };
            let structure = HilbertStructure::uniform(parties, dim)?;
            let per_point = |terms: usize, seed: u64| -> Result<f64, CliError> {
                let rho = random_separable(&structure, terms, seed)?;
                Ok(witness_lambda_max(&rho, &set, opts.threshold)?.lambda_max)
            };
            let rows: Result<Vec<SweepRow>, CliError> = match sweep.parameter.as_str() {
                "seed" => {
                    let terms = scenario
                        .int_param("terms")?
                        .ok_or_else(|| CliError::Validation("familyParams.terms is required when sweeping seed".into()))?;
                    integer_grid("seed", &values)?
                        .into_iter()
                        .map(|seed| {
                            Ok(SweepRow {
                                sweep_value: seed as f64,
                                values: vec![per_point(terms, seed as u64)?],
                            })
                        })
                        .collect()
                }
                "terms" => {
                    let seed = scenario.int_param("seed")?.map(|s| s as u64).unwrap_or(opts.seed);
                    integer_grid("terms", &values)?
                        .into_iter()
                        .map(|terms| {
                            Ok(SweepRow {
                                sweep_value: terms as f64,
                                values: vec![per_point(terms, seed)?],
                            })
                        })
                        .collect()
                }
                other => Err(CliError::Validation(format!(
                    "sweep.parameter: custom-mixture sweeps \"seed\" or \"terms\", got {other:?}"
                ))),
            };
            let table = SweepTable::new(
                vec![sweep.parameter.clone(), "lambda_max".into()],
                rows?,
            )?;
            finish(table, &scenario.outputs)
        }
    }
}

fn resolve_cutoff(scenario: &Scenario, opts: &RunOptions, alpha: f64) -> Result<usize, CliError> {
    Ok(match (opts.cutoff, scenario.int_param("cutoff")?) {
        (Some(c), _) => c,
        (None, Some(c)) => c,
        (None, None) => default_cutoff(alpha),
    })
}
