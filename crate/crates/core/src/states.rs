//! State factories: truncated coherent states, partially dephased two-mode
//! superpositions, weighted GHZ states, qubit–oscillator correlated states,
//! Fock states, and seeded random separable mixtures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::tensor::{
    mix, CMatrix, CVector, DensityMatrix, HilbertStructure, PureState, C64,
};

/// Largest probability mass a coherent-state truncation may discard.
pub const TRUNCATION_TOL: f64 = 1e-10;
/// Target lost weight when choosing a cutoff automatically.
pub const AUTO_CUTOFF_TOL: f64 = 1e-12;
/// Guard levels added on top of the automatically chosen cutoff.
pub const AUTO_CUTOFF_GUARD: usize = 4;

/// How much probability mass a Fock-space truncation discarded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationReport {
    pub cutoff: usize,
    pub lost_weight: f64,
}

/// Poisson tail `Σ_{n ≥ cutoff} e^{−|α|²} |α|^{2n} / n!` lost by truncating a
/// coherent state of amplitude `alpha` to `cutoff` levels.
pub fn coherent_lost_weight(alpha: C64, cutoff: usize) -> f64 {
    let mean = alpha.norm_sqr();
    let mut term = (-mean).exp();
    let mut kept = 0.0;
    for n in 0..cutoff {
        kept += term;
        term *= mean / (n + 1) as f64;
    }
    (1.0 - kept).max(0.0)
}

/// Smallest cutoff keeping the lost weight of `|α|` below [`AUTO_CUTOFF_TOL`],
/// plus [`AUTO_CUTOFF_GUARD`] guard levels.
pub fn default_cutoff(max_abs_alpha: f64) -> usize {
    let alpha = C64::new(max_abs_alpha.abs(), 0.0);
    let mut cutoff = 2;
    while coherent_lost_weight(alpha, cutoff) >= AUTO_CUTOFF_TOL {
        cutoff += 1;
    }
    cutoff + AUTO_CUTOFF_GUARD
}

/// Normalized truncation of `e^{−|α|²/2} Σ_n (αⁿ/√n!) |n⟩`. Fails if the
/// truncated probability mass exceeds `tolerance`.
pub fn coherent_with_tolerance(
    alpha: C64,
    cutoff: usize,
    tolerance: f64,
) -> Result<(PureState, TruncationReport)> {
    if cutoff < 2 {
        return Err(Error::InvalidParameter(format!(
            "coherent-state cutoff must be at least 2, got {cutoff}"
        )));
    }
    let lost_weight = coherent_lost_weight(alpha, cutoff);
    if lost_weight > tolerance {
        return Err(Error::TruncationLoss { lost: lost_weight, tolerance });
    }
    let mut amplitudes = CVector::zeros(cutoff);
    let mut coeff = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..cutoff {
        amplitudes[n] = coeff;
        coeff = coeff * alpha / C64::new(((n + 1) as f64).sqrt(), 0.0);
    }
    let norm = amplitudes.norm();
    let amplitudes = amplitudes.map(|z| z / norm);
    let structure = HilbertStructure::new(vec![cutoff])?;
    Ok((
        PureState::new(structure, amplitudes)?,
        TruncationReport { cutoff, lost_weight },
    ))
}

/// [`coherent_with_tolerance`] at the default [`TRUNCATION_TOL`].
pub fn coherent(alpha: C64, cutoff: usize) -> Result<(PureState, TruncationReport)> {
    coherent_with_tolerance(alpha, cutoff, TRUNCATION_TOL)
}

/// Two-mode superposition of `|α,α⟩` and `|−α,−α⟩` with the coherences scaled
/// by `1 − s`; `s = 0` is the pure superposition, `s = 1` the even mixture.
/// The normalization constant is fixed by the numerically computed trace, so
/// the state is exactly unit-trace in the truncated space.
pub fn dephased_cat(alpha: f64, s: f64, cutoff: usize) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidParameter(format!(
            "dephasing parameter must lie in [0, 1], got {s}"
        )));
    }
    let (plus, _) = coherent(C64::new(alpha, 0.0), cutoff)?;
    let (minus, _) = coherent(C64::new(-alpha, 0.0), cutoff)?;
    let vp = plus.amplitudes().kronecker(plus.amplitudes());
    let vm = minus.amplitudes().kronecker(minus.amplitudes());
    let d = vp.len();
    let keep = 1.0 - s;
    let mut matrix = CMatrix::zeros(d, d);
    for j in 0..d {
        let pj = vp[j].conj();
        let mj = vm[j].conj();
        for i in 0..d {
            matrix[(i, j)] = vp[i] * pj + vm[i] * mj + (vm[i] * pj + vp[i] * mj) * keep;
        }
    }
    let trace = matrix.trace().re;
    let matrix = matrix.map(|z| z / trace);
    let structure = HilbertStructure::new(vec![cutoff, cutoff])?;
    Ok(DensityMatrix::from_trusted(structure, matrix))
}

/// `√q |0…0⟩ + √(1−q) e^{iφ} |1…1⟩` on `n` qubits.
pub fn ghz_weighted(n: usize, q: f64, phi: f64) -> Result<PureState> {
    if n < 1 {
        return Err(Error::InvalidParameter("ghz_weighted needs at least one qubit".into()));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidParameter(format!(
            "weight q must lie in [0, 1], got {q}"
        )));
    }
    let structure = HilbertStructure::uniform(n, 2)?;
    let dim = structure.total_dim();
    let mut amplitudes = CVector::zeros(dim);
    amplitudes[0] = C64::new(q.sqrt(), 0.0);
    amplitudes[dim - 1] = C64::from_polar((1.0 - q).sqrt(), phi);
    PureState::new(structure, amplitudes)
}

/// Qubit–mode correlated state `(|0,n⟩ + |1,n+1⟩)/√2` on a `2 × cutoff` space.
pub fn hybrid_phi(n: usize, cutoff: usize) -> Result<PureState> {
    if cutoff < n + 2 {
        return Err(Error::InvalidParameter(format!(
            "cutoff {cutoff} cannot hold excitations {n} and {}",
            n + 1
        )));
    }
    let structure = HilbertStructure::new(vec![2, cutoff])?;
    let mut amplitudes = CVector::zeros(2 * cutoff);
    let w = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amplitudes[n] = w;
    amplitudes[cutoff + n + 1] = w;
    PureState::new(structure, amplitudes)
}

/// Fock basis state `|n⟩` in a `cutoff`-level mode.
pub fn fock(n: usize, cutoff: usize) -> Result<PureState> {
    if n >= cutoff {
        return Err(Error::InvalidParameter(format!(
            "Fock level {n} does not fit below cutoff {cutoff}"
        )));
    }
    let structure = HilbertStructure::new(vec![cutoff])?;
    let mut amplitudes = CVector::zeros(cutoff);
    amplitudes[n] = C64::new(1.0, 0.0);
    PureState::new(structure, amplitudes)
}

fn haar_vector(dim: usize, rng: &mut ChaCha8Rng) -> CVector {
    let v = CVector::from_fn(dim, |_, _| {
        C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    let norm = v.norm();
    v.map(|z| z / norm)
}

fn simplex_weights(k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut raw: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1).max(1e-300)).collect();
    let total: f64 = raw.iter().sum();
    for w in &mut raw {
        *w /= total;
    }
    raw
}

/// Haar-random pure state over the full space, deterministic per seed.
pub fn random_pure(structure: &HilbertStructure, seed: u64) -> Result<PureState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PureState::new(structure.clone(), haar_vector(structure.total_dim(), &mut rng))
}

/// Convex mixture of `terms` Haar-random pure product states with exponential
/// simplex weights; same seed, same state.
pub fn random_separable(
    structure: &HilbertStructure,
    terms: usize,
    seed: u64,
) -> Result<DensityMatrix> {
    if terms < 1 {
        return Err(Error::InvalidParameter("random_separable needs at least one term".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut states = Vec::with_capacity(terms);
    for _ in 0..terms {
        let factors: Result<Vec<PureState>> = structure
            .dims()
            .iter()
            .map(|&d| {
                PureState::new(HilbertStructure::new(vec![d])?, haar_vector(d, &mut rng))
            })
            .collect();
        let mut product = PureState::product(&factors?)?;
        // product of single-party structures; restore the requested one
        product = PureState::new(structure.clone(), product.amplitudes().clone())?;
        states.push(product.to_density());
    }
    let weights = simplex_weights(terms, &mut rng);
    mix(&states, &weights)
}

/// Random mixed state: `rank` Haar-random pure states combined with
/// exponential simplex weights. Generally entangled.
pub fn random_mixed(structure: &HilbertStructure, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if rank < 1 {
        return Err(Error::InvalidParameter("random_mixed needs at least one term".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = structure.total_dim();
    let states: Vec<DensityMatrix> = (0..rank)
        .map(|_| {
            PureState::new(structure.clone(), haar_vector(dim, &mut rng))
                .map(|psi| psi.to_density())
        })
        .collect::<Result<_>>()?;
    let weights = simplex_weights(rank, &mut rng);
    mix(&states, &weights)
}
