//! State-independent and auxiliary criteria: spectral spans of the local
//! generators, bounds on k-producible states, the combined quadrature bound,
//! and the measurement-free commutator criterion.

use crate::error::{Error, Result};
use crate::operators::{collective_generator, CoefficientVector, LocalOperatorSet};
use crate::tensor::{
    hermitian_eig, hermiticity_residual, product_of_marginals, CMatrix, DensityMatrix,
    EIG_HERMITICITY_TOL,
};
use crate::witness::quantum_fisher;

/// Variances below this cannot safely divide the commutator lower bound.
pub const VARIANCE_FLOOR: f64 = 1e-12;

/// Per-party spectral spans `λ_max(cᵢ·Âᵢ) − λ_min(cᵢ·Âᵢ)` of the local
/// generator pieces, and their maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSpan {
    pub per_party: Vec<f64>,
    pub delta_max: f64,
}

impl SpectralSpan {
    pub fn from_set(set: &LocalOperatorSet, c: &CoefficientVector) -> Result<Self> {
        set.check_conformal(c)?;
        let mut per_party = Vec::with_capacity(set.parties());
        for (party, block) in c.blocks().iter().enumerate() {
            let local = set.local_combination(party, block)?;
            let dec = hermitian_eig(&local)?;
            per_party.push(dec.eigenvalues[0] - dec.eigenvalues[dec.dim() - 1]);
        }
        let delta_max = per_party.iter().cloned().fold(0.0, f64::max);
        Ok(Self { per_party, delta_max })
    }
}

/// State-independent separability ceiling `Σᵢ (λ_max − λ_min)²` of the local
/// generator pieces. Any separable state keeps the Fisher information of
/// `Â(c)` at or below this; for the spin set with unit Bloch blocks it reduces
/// to the shot-noise bound `N`.
pub fn state_independent_bound(set: &LocalOperatorSet, c: &CoefficientVector) -> Result<f64> {
    let spans = SpectralSpan::from_set(set, c)?;
    Ok(spans.per_party.iter().map(|d| d * d).sum())
}

/// Fisher-information ceiling for states with at most k-partite entanglement:
/// `Δ_max²(s k² + r²)` with `s = ⌊N/k⌋` and `r = N − sk`.
pub fn k_producibility_bound(delta_max: f64, parties: usize, k: usize) -> Result<f64> {
    if k < 1 || k > parties {
        return Err(Error::InvalidParameter(format!(
            "producibility class k = {k} must lie in 1..={parties}"
        )));
    }
    if !delta_max.is_finite() || delta_max < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "spectral span must be non-negative, got {delta_max}"
        )));
    }
    let s = parties / k;
    let r = parties - s * k;
    Ok(delta_max * delta_max * ((s * k * k) as f64 + (r * r) as f64))
}

/// Verdict of the k-producibility test for one state and generator choice.
#[derive(Debug, Clone, PartialEq)]
pub struct ProducibilityVerdict {
    pub k: usize,
    pub bound: f64,
    pub fisher_value: f64,
    /// Entanglement of more than `k` parties was witnessed.
    pub detected: bool,
}

/// Compares the Fisher information of `Â(c)` against the k-producibility
/// ceiling; exceeding it witnesses (k+1)-partite or deeper entanglement.
pub fn producibility_verdict(
    rho: &DensityMatrix,
    set: &LocalOperatorSet,
    c: &CoefficientVector,
    k: usize,
    threshold: f64,
) -> Result<ProducibilityVerdict> {
    let spans = SpectralSpan::from_set(set, c)?;
    let bound = k_producibility_bound(spans.delta_max, set.parties(), k)?;
    let generator = collective_generator(set, c)?;
    let fisher_value = quantum_fisher(rho, &generator)?;
    Ok(ProducibilityVerdict {
        k,
        bound,
        fisher_value,
        detected: fisher_value > bound + threshold,
    })
}

/// Outcome of the combined position/momentum criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct XpCriterionReport {
    pub fisher_sum: f64,
    pub bound: f64,
    pub detected: bool,
    /// The bound is saturated by separable states only at zero mean
    /// quadratures, so equality is informative on centered states.
    pub margin: f64,
}

/// Combined bound for collective quadratures: separable `N`-mode states keep
/// `F[X̂] + F[P̂] ≤ 4(2n + N)` where `n` is the total mean occupation. Needs no
/// local variance measurements.
pub fn combined_xp_criterion(
    fisher_x: f64,
    fisher_p: f64,
    mean_occupation: f64,
    modes: usize,
    threshold: f64,
) -> Result<XpCriterionReport> {
    if fisher_x < 0.0 || fisher_p < 0.0 {
        return Err(Error::InvalidParameter(
            "Fisher information values must be non-negative".into(),
        ));
    }
    if mean_occupation < 0.0 {
        return Err(Error::InvalidParameter(
            "mean occupation must be non-negative".into(),
        ));
    }
    if modes < 1 {
        return Err(Error::InvalidParameter("mode count must be positive".into()));
    }
    let fisher_sum = fisher_x + fisher_p;
    let bound = 4.0 * (2.0 * mean_occupation + modes as f64);
    Ok(XpCriterionReport {
        fisher_sum,
        bound,
        detected: fisher_sum > bound + threshold,
        margin: fisher_sum - bound,
    })
}

/// Outcome of the commutator criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorReport {
    /// `Var(Â(c))_Π(ρ) · Var(B̂)_ρ`
    pub lhs: f64,
    /// `|⟨[Â(c), B̂]⟩_ρ|² / 4`
    pub rhs: f64,
    pub detected: bool,
}

fn variance(rho: &DensityMatrix, op: &CMatrix) -> Result<f64> {
    let mean = rho.expectation(op)?;
    let second = rho.expectation(&(op * op))?;
    Ok(second.re - mean.re * mean.re - mean.im * mean.im)
}

/// Measurement-free criterion from the Fisher lower bound
/// `F_Q[ρ, Â] ≥ |⟨[Â, B̂]⟩|²/Var(B̂)`: separable states satisfy
/// `Var(Â(c))_Π(ρ) Var(B̂)_ρ ≥ |⟨[Â(c), B̂]⟩_ρ|²/4`, so a violation indicates
/// entanglement using second moments alone.
pub fn commutator_criterion(
    rho: &DensityMatrix,
    set: &LocalOperatorSet,
    c: &CoefficientVector,
    b: &CMatrix,
    threshold: f64,
) -> Result<CommutatorReport> {
    let d = rho.total_dim();
    if b.nrows() != d || b.ncols() != d {
        return Err(Error::DimensionMismatch {
            context: "auxiliary operator vs. state",
            expected: d,
            got: b.nrows(),
        });
    }
    let residual = hermiticity_residual(b);
    if residual > EIG_HERMITICITY_TOL {
        return Err(Error::NotHermitian { residual, tolerance: EIG_HERMITICITY_TOL });
    }
    let var_b = variance(rho, b)?;
    if var_b <= VARIANCE_FLOOR {
        return Err(Error::DegenerateVariance { value: var_b });
    }
    let generator = collective_generator(set, c)?;
    let pi = product_of_marginals(rho)?;
    let var_a_pi = variance(&pi, &generator)?;

    let commutator = &generator * b - b * &generator;
    let mean_comm = rho.expectation(&commutator)?;
    let rhs = mean_comm.norm_sqr() / 4.0;
    let lhs = var_a_pi * var_b;
    Ok(CommutatorReport { lhs, rhs, detected: lhs < rhs - threshold })
}
