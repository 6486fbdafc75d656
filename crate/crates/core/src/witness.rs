//! The criterion engine: quantum Fisher matrices, covariance matrices, scalar
//! witness evaluation, the eigenvalue criterion with deterministic coefficient
//! optimization, and the classical Fisher information of an explicit
//! measurement.
//!
//! For a state `ρ = Σ_k p_k |Ψ_k⟩⟨Ψ_k|` and a flat-indexed list of embedded
//! local operators `A_a`, the Fisher-matrix element is
//!
//! ```text
//! Q_ab = 2 Σ_{k,l} (p_k − p_l)² / (p_k + p_l) ⟨Ψ_k|A_a|Ψ_l⟩⟨Ψ_l|A_b|Ψ_k⟩,
//! ```
//!
//! the sum running over eigenvalue pairs with `p_k + p_l` above a relative
//! floor. The witness at coefficients `c` is `cᵀ(Q − 4Γ_Π)c`, with `Γ_Π` the
//! covariance matrix of the product of marginals: positive values certify
//! entanglement, and maximizing over unit `c` is the top eigenpair of the
//! difference matrix. On pure states `Q = 4Γ` holds exactly, which makes the
//! criterion necessary and sufficient there when the local sets are complete.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::operators::{CoefficientVector, LocalOperatorSet};
use crate::tensor::{
    hermiticity_residual, kron_embed, partial_trace, product_of_marginals, CMatrix,
    DensityMatrix, SpectralDecomposition, C64, EIG_HERMITICITY_TOL,
};

/// λ_max above this value is reported as ENTANGLED; separable states may sit
/// at exactly zero, so the threshold must clear the accumulated roundoff.
pub const DETECTION_THRESHOLD: f64 = 1e-8;
/// Eigenvalue pairs with `p_k + p_l ≤ QFI_PAIR_CUT · p_max` are skipped in the
/// Fisher sums; a relative floor controls roundoff amplification in
/// `(p_k − p_l)²/(p_k + p_l)`.
pub const QFI_PAIR_CUT: f64 = 1e-12;
/// Measurement outcomes with probability below this are dropped from the
/// classical Fisher information (0/0 limits).
pub const PROB_FLOOR: f64 = 1e-12;

const IMAG_RESIDUE_TOL: f64 = 1e-9;
const BLOCK_PSD_TOL: f64 = 1e-9;
const OPTIMIZER_STARTS: usize = 32;
const OPTIMIZER_MAX_ITERS: usize = 10_000;
const OPTIMIZER_REL_TOL: f64 = 1e-10;
const OPTIMIZER_STREAK: usize = 5;

/// Real symmetric PSD matrix over the flat (party-major) operator index of a
/// [`LocalOperatorSet`]; `cᵀ Q c` is the quantum Fisher information of the
/// generator built from `c`.
#[derive(Debug, Clone)]
pub struct QfiMatrix {
    matrix: DMatrix<f64>,
    block_lengths: Vec<usize>,
}

/// Same shape as [`QfiMatrix`]; entries are symmetrized covariances
/// `⟨AB + BA⟩/2 − ⟨A⟩⟨B⟩`, including inter-party blocks.
#[derive(Debug, Clone)]
pub struct CovarianceMatrix {
    matrix: DMatrix<f64>,
    block_lengths: Vec<usize>,
}

macro_rules! block_matrix_impl {
    ($name:ident) => {
        impl $name {
            pub fn matrix(&self) -> &DMatrix<f64> {
                &self.matrix
            }

            pub fn block_lengths(&self) -> &[usize] {
                &self.block_lengths
            }

            pub fn side(&self) -> usize {
                self.matrix.nrows()
            }
        }
    };
}

block_matrix_impl!(QfiMatrix);
block_matrix_impl!(CovarianceMatrix);

fn check_psd(matrix: &DMatrix<f64>, context: &'static str) -> Result<()> {
    let eig = matrix.clone().symmetric_eigen();
    let min = eig.eigenvalues.min();
    if min < -BLOCK_PSD_TOL {
        return Err(Error::ResidualTooLarge {
            context,
            residual: -min,
            tolerance: BLOCK_PSD_TOL,
        });
    }
    Ok(())
}

fn check_structures(rho: &DensityMatrix, set: &LocalOperatorSet) -> Result<()> {
    if rho.structure() != set.structure() {
        return Err(Error::DimensionMismatch {
            context: "state structure vs. operator set",
            expected: set.structure().total_dim(),
            got: rho.structure().total_dim(),
        });
    }
    Ok(())
}

fn embedded_ops(set: &LocalOperatorSet) -> Result<Vec<CMatrix>> {
    let mut ops = Vec::with_capacity(set.total_len());
    for party in 0..set.parties() {
        for op in set.ops(party) {
            ops.push(kron_embed(op, party, set.structure())?);
        }
    }
    Ok(ops)
}

/// Fisher quadratic form over an arbitrary list of full-space Hermitian
/// operators. Returns the real symmetric matrix and the largest imaginary
/// residue seen while assembling it.
fn fisher_form(dec: &SpectralDecomposition, ops: &[CMatrix]) -> (DMatrix<f64>, f64) {
    let d = dec.dim();
    let p = &dec.eigenvalues;
    let tau = QFI_PAIR_CUT * p[0];
    // significant prefix: anything below tau/2 can only pair above the floor
    // with a significant partner
    let r = p.iter().take_while(|&&pk| pk > 0.5 * tau).count();
    let u = &dec.eigenvectors;
    let support = u.columns(0, r).into_owned();

    // rows ⟨Ψ_k|A|Ψ_l⟩ for significant k and all l
    let bridges: Vec<DMatrix<C64>> = ops
        .iter()
        .map(|op| (op * &support).adjoint() * u)
        .collect();

    let k_ops = ops.len();
    let mut matrix = DMatrix::<f64>::zeros(k_ops, k_ops);
    let mut residue = 0.0f64;
    for a in 0..k_ops {
        for b in a..k_ops {
            let ba = &bridges[a];
            let bb = &bridges[b];
            let mut significant = C64::new(0.0, 0.0);
            let mut tail = C64::new(0.0, 0.0);
            for k in 0..r {
                let pk = p[k];
                for l in 0..d {
                    let sum = pk + p[l];
                    if sum <= tau {
                        continue;
                    }
                    let diff = pk - p[l];
                    if diff == 0.0 {
                        continue;
                    }
                    let w = diff * diff / sum;
                    let term = ba[(k, l)] * bb[(k, l)].conj() * w;
                    if l < r {
                        significant += term;
                    } else {
                        tail += term;
                    }
                }
            }
            // pairs with only the column index significant contribute the
            // conjugate of `tail`, so their total is exactly 2 Re(tail)
            let value = (significant + C64::new(2.0 * tail.re, 0.0)) * 2.0;
            residue = residue.max(value.im.abs());
            matrix[(a, b)] = value.re;
            matrix[(b, a)] = value.re;
        }
    }
    (matrix, residue)
}

/// Quantum Fisher matrix of `rho` over the operator set.
pub fn qfi_matrix(rho: &DensityMatrix, set: &LocalOperatorSet) -> Result<QfiMatrix> {
    check_structures(rho, set)?;
    let ops = embedded_ops(set)?;
    let (matrix, residue) = fisher_form(rho.spectral(), &ops);
    if residue > IMAG_RESIDUE_TOL {
        return Err(Error::ResidualTooLarge {
            context: "Fisher matrix imaginary residue",
            residual: residue,
            tolerance: IMAG_RESIDUE_TOL,
        });
    }
    check_psd(&matrix, "Fisher matrix negativity")?;
    Ok(QfiMatrix { matrix, block_lengths: set.block_lengths() })
}

/// Quantum Fisher information of a single full-space Hermitian generator.
pub fn quantum_fisher(rho: &DensityMatrix, generator: &CMatrix) -> Result<f64> {
    let d = rho.total_dim();
    if generator.nrows() != d || generator.ncols() != d {
        return Err(Error::DimensionMismatch {
            context: "generator vs. state",
            expected: d,
            got: generator.nrows(),
        });
    }
    let residual = hermiticity_residual(generator);
    if residual > EIG_HERMITICITY_TOL {
        return Err(Error::NotHermitian { residual, tolerance: EIG_HERMITICITY_TOL });
    }
    let (form, residue) = fisher_form(rho.spectral(), std::slice::from_ref(generator));
    if residue > IMAG_RESIDUE_TOL {
        return Err(Error::ResidualTooLarge {
            context: "Fisher information imaginary residue",
            residual: residue,
            tolerance: IMAG_RESIDUE_TOL,
        });
    }
    Ok(form[(0, 0)].max(0.0))
}

/// `Tr[ρ (A@i)(B@j)]` for local operators on two distinct parties, without
/// forming the embedded product.
fn expect_two_site(
    rho: &DensityMatrix,
    site_a: usize,
    a: &CMatrix,
    site_b: usize,
    b: &CMatrix,
) -> C64 {
    let structure = rho.structure();
    let strides = structure.strides();
    let (da, db) = (structure.dims()[site_a], structure.dims()[site_b]);
    let (sa, sb) = (strides[site_a], strides[site_b]);
    let m = rho.matrix();
    let total = structure.total_dim();
    let mut acc = C64::new(0.0, 0.0);
    for row in 0..total {
        let ra = (row / sa) % da;
        let rb = (row / sb) % db;
        let base = row - ra * sa - rb * sb;
        for ca in 0..da {
            let fa = a[(ca, ra)];
            if fa == C64::new(0.0, 0.0) {
                continue;
            }
            for cb in 0..db {
                let col = base + ca * sa + cb * sb;
                acc += m[(row, col)] * fa * b[(cb, rb)];
            }
        }
    }
    acc
}

/// Full covariance matrix of `rho` over the operator set, inter-party blocks
/// included. Local blocks are computed from the marginals, cross blocks from
/// direct two-site traces.
#[allow(clippy::needless_range_loop)] // symmetric party-pair indexing
pub fn covariance_matrix(rho: &DensityMatrix, set: &LocalOperatorSet) -> Result<CovarianceMatrix> {
    check_structures(rho, set)?;
    let parties = set.parties();
    let marginals: Vec<DensityMatrix> = (0..parties)
        .map(|site| partial_trace(rho, site))
        .collect::<Result<_>>()?;
    let lens = set.block_lengths();
    let k = set.total_len();

    let mut means = vec![0.0f64; k];
    let mut residue = 0.0f64;
    for i in 0..parties {
        for m in 0..lens[i] {
            let val = marginals[i].expectation(&set.ops(i)[m])?;
            residue = residue.max(val.im.abs());
            means[set.flat_index(i, m)] = val.re;
        }
    }

    let mut matrix = DMatrix::<f64>::zeros(k, k);
    for i in 0..parties {
        for m in 0..lens[i] {
            let a = set.flat_index(i, m);
            for n in m..lens[i] {
                let b = set.flat_index(i, n);
                let lm = &set.ops(i)[m];
                let ln = &set.ops(i)[n];
                let sym = (lm * ln + ln * lm).map(|z| z * 0.5);
                let second = marginals[i].expectation(&sym)?;
                residue = residue.max(second.im.abs());
                let val = second.re - means[a] * means[b];
                matrix[(a, b)] = val;
                matrix[(b, a)] = val;
            }
            for j in i + 1..parties {
                for n in 0..lens[j] {
                    let b = set.flat_index(j, n);
                    let second = expect_two_site(rho, i, &set.ops(i)[m], j, &set.ops(j)[n]);
                    residue = residue.max(second.im.abs());
                    let val = second.re - means[a] * means[b];
                    matrix[(a, b)] = val;
                    matrix[(b, a)] = val;
                }
            }
        }
    }
    if residue > IMAG_RESIDUE_TOL {
        return Err(Error::ResidualTooLarge {
            context: "covariance imaginary residue",
            residual: residue,
            tolerance: IMAG_RESIDUE_TOL,
        });
    }
    check_psd(&matrix, "covariance matrix negativity")?;
    Ok(CovarianceMatrix { matrix, block_lengths: lens })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Entangled,
    NotDetected,
}

impl Verdict {
    pub fn is_entangled(self) -> bool {
        matches!(self, Verdict::Entangled)
    }
}

/// Tolerances a [`WitnessReport`] was produced with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessTolerances {
    pub detection: f64,
    pub qfi_pair_cut: f64,
}

/// Outcome of the eigenvalue criterion for one (state, operator set) pair.
#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub qfi: QfiMatrix,
    /// Covariance matrix of the product of marginals.
    pub gamma_local: CovarianceMatrix,
    pub lambda_max: f64,
    /// Unit-norm top eigenvector of `Q − 4Γ_Π`, reshaped into blocks.
    pub optimal_c: CoefficientVector,
    /// `cᵀ(Q − 4Γ_Π)c` at `optimal_c`; equals `lambda_max` up to roundoff.
    pub witness_value: f64,
    pub verdict: Verdict,
    pub tolerances: WitnessTolerances,
}

impl WitnessReport {
    /// The symmetric difference matrix `Q − 4Γ_Π`.
    pub fn difference(&self) -> DMatrix<f64> {
        self.qfi.matrix() - self.gamma_local.matrix() * 4.0
    }

    /// Witness value `cᵀ(Q − 4Γ_Π)c` at an arbitrary coefficient vector.
    pub fn witness_at(&self, c: &CoefficientVector) -> Result<f64> {
        if c.block_lengths() != self.qfi.block_lengths {
            return Err(Error::DimensionMismatch {
                context: "coefficient blocks vs. report blocks",
                expected: self.qfi.side(),
                got: c.flatten().len(),
            });
        }
        let flat = c.flatten();
        Ok((self.difference() * &flat).dot(&flat))
    }
}

fn descending_symmetric_eig(matrix: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let eig = matrix.clone().symmetric_eigen();
    let d = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = DVector::from_iterator(d, order.iter().map(|&k| eig.eigenvalues[k]));
    let mut vectors = DMatrix::zeros(d, d);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

fn canonical_sign(mut v: DVector<f64>) -> DVector<f64> {
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            v.neg_mut();
        }
    }
    v
}

fn lex_greater(a: &DVector<f64>, b: &DVector<f64>) -> bool {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Greater => return true,
            std::cmp::Ordering::Less => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    false
}

/// Evaluates the eigenvalue criterion: λ_max of `Q − 4Γ_Π` with its unit-norm
/// eigenvector. ENTANGLED iff λ_max exceeds `threshold` (use
/// [`DETECTION_THRESHOLD`] unless there is a reason not to). Degenerate top
/// eigenvalues are resolved deterministically: candidates are sign-fixed and
/// the lexicographically largest eigenvector is reported.
///
/// ```
/// use fisherwit::operators::spin_set;
/// use fisherwit::states::ghz_weighted;
/// use fisherwit::witness::{witness_lambda_max, DETECTION_THRESHOLD};
///
/// let rho = ghz_weighted(3, 0.5, 0.0)?.to_density();
/// let report = witness_lambda_max(&rho, &spin_set(3)?, DETECTION_THRESHOLD)?;
/// assert!(report.verdict.is_entangled());
/// assert!((report.lambda_max - 2.0).abs() < 1e-8);
/// # Ok::<(), fisherwit::Error>(())
/// ```
pub fn witness_lambda_max(
    rho: &DensityMatrix,
    set: &LocalOperatorSet,
    threshold: f64,
) -> Result<WitnessReport> {
    let qfi = qfi_matrix(rho, set)?;
    let pi = product_of_marginals(rho)?;
    let gamma_local = covariance_matrix(&pi, set)?;
    let difference = qfi.matrix() - gamma_local.matrix() * 4.0;
    let (values, vectors) = descending_symmetric_eig(&difference);
    let lambda_max = values[0];

    let tie = 1e-12 * lambda_max.abs().max(1.0);
    let mut best = canonical_sign(vectors.column(0).into_owned());
    for k in 1..values.len() {
        if (values[k] - lambda_max).abs() > tie {
            break;
        }
        let candidate = canonical_sign(vectors.column(k).into_owned());
        if lex_greater(&candidate, &best) {
            best = candidate;
        }
    }
    let witness_value = (&difference * &best).dot(&best);
    let optimal_c = CoefficientVector::from_flat(&set.block_lengths(), best.as_slice())?;
    let verdict = if lambda_max > threshold {
        Verdict::Entangled
    } else {
        Verdict::NotDetected
    };
    Ok(WitnessReport {
        qfi,
        gamma_local,
        lambda_max,
        optimal_c,
        witness_value,
        verdict,
        tolerances: WitnessTolerances { detection: threshold, qfi_pair_cut: QFI_PAIR_CUT },
    })
}

/// Scalar witness `W = cᵀ(Q − 4Γ_Π)c = F_Q[ρ, Â(c)] − 4 Σᵢ Var(cᵢ·Âᵢ)`;
/// positive values certify entanglement.
pub fn witness_value(
    rho: &DensityMatrix,
    set: &LocalOperatorSet,
    c: &CoefficientVector,
) -> Result<f64> {
    set.check_conformal(c)?;
    let qfi = qfi_matrix(rho, set)?;
    let pi = product_of_marginals(rho)?;
    let gamma_local = covariance_matrix(&pi, set)?;
    let flat = c.flatten();
    let difference = qfi.matrix() - gamma_local.matrix() * 4.0;
    Ok((difference * &flat).dot(&flat))
}

fn project_blocks(v: &DVector<f64>, lens: &[usize]) -> DVector<f64> {
    let mut out = v.clone();
    let mut offset = 0;
    for &len in lens {
        let norm = out.rows(offset, len).norm();
        if norm < 1e-14 {
            for idx in offset..offset + len {
                out[idx] = 0.0;
            }
            out[offset] = 1.0;
        } else {
            for idx in offset..offset + len {
                out[idx] /= norm;
            }
        }
        offset += len;
    }
    out
}

fn ascend_blocks(q: &DMatrix<f64>, lens: &[usize], start: DVector<f64>) -> (f64, DVector<f64>) {
    let mut c = project_blocks(&start, lens);
    let mut f = (q * &c).dot(&c);
    let eta_base = 1.0 / q.norm().max(1e-12);
    let mut eta = eta_base;
    let mut streak = 0usize;
    for _ in 0..OPTIMIZER_MAX_ITERS {
        let grad = q * &c * 2.0;
        let mut accepted = false;
        while eta >= 1e-18 {
            let cand = project_blocks(&(&c + &grad * eta), lens);
            let fc = (q * &cand).dot(&cand);
            if fc >= f {
                let rel = (fc - f) / f.abs().max(1.0);
                streak = if rel < OPTIMIZER_REL_TOL { streak + 1 } else { 0 };
                c = cand;
                f = fc;
                eta = (eta * 1.25).min(eta_base * 1e6);
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if !accepted || streak >= OPTIMIZER_STREAK {
            break;
        }
    }
    (f, c)
}

/// Maximizes `cᵀ Q c` under per-party unit-norm blocks (`|cᵢ| = 1`) by
/// projected gradient ascent with 32 multi-starts: the top eigenvector of `Q`
/// projected onto the blocks plus seeded random block directions. The result
/// is the best converged start, tie-broken on the objective and then
/// lexicographically, so it is deterministic per seed.
pub fn constrained_qfi_max(
    rho: &DensityMatrix,
    set: &LocalOperatorSet,
    seed: u64,
) -> Result<(f64, CoefficientVector)> {
    let qfi = qfi_matrix(rho, set)?;
    let q = qfi.matrix();
    let lens = set.block_lengths();
    let total = set.total_len();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (_, vectors) = descending_symmetric_eig(q);
    let mut starts = Vec::with_capacity(OPTIMIZER_STARTS);
    starts.push(vectors.column(0).into_owned());
    for _ in 1..OPTIMIZER_STARTS {
        starts.push(DVector::from_fn(total, |_, _| StandardNormal.sample(&mut rng)));
    }

    let mut best: Option<(f64, DVector<f64>)> = None;
    for start in starts {
        let (f, c) = ascend_blocks(q, &lens, start);
        let c = canonical_sign(c);
        let better = match &best {
            None => true,
            Some((bf, bc)) => f > *bf || (f == *bf && lex_greater(&c, bc)),
        };
        if better {
            best = Some((f, c));
        }
    }
    let (f, c) = best.expect("at least one start");
    Ok((f, CoefficientVector::from_flat(&lens, c.as_slice())?))
}

/// Classical Fisher information of the measurement `povm` at the origin of the
/// phase generated by `generator`: `Σ_m ṗ_m²/p_m` with
/// `ṗ_m = Tr[M_m (−i)[G, ρ]]`, dropping outcomes below [`PROB_FLOOR`].
/// Never exceeds the quantum Fisher information.
pub fn classical_fisher(
    rho: &DensityMatrix,
    generator: &CMatrix,
    povm: &[CMatrix],
) -> Result<f64> {
    let d = rho.total_dim();
    if generator.nrows() != d || generator.ncols() != d {
        return Err(Error::DimensionMismatch {
            context: "generator vs. state",
            expected: d,
            got: generator.nrows(),
        });
    }
    let residual = hermiticity_residual(generator);
    if residual > EIG_HERMITICITY_TOL {
        return Err(Error::NotHermitian { residual, tolerance: EIG_HERMITICITY_TOL });
    }
    if povm.is_empty() {
        return Err(Error::EmptyInput("POVM needs at least one effect"));
    }
    let mut sum = CMatrix::zeros(d, d);
    for effect in povm {
        if effect.nrows() != d || effect.ncols() != d {
            return Err(Error::DimensionMismatch {
                context: "POVM effect vs. state",
                expected: d,
                got: effect.nrows(),
            });
        }
        let dec = crate::tensor::hermitian_eig(effect)?;
        let min = dec.eigenvalues[dec.dim() - 1];
        if min < -crate::tensor::PSD_TOL {
            return Err(Error::NotPositive { min, tolerance: crate::tensor::PSD_TOL });
        }
        sum += effect;
    }
    let completeness = (&sum - CMatrix::identity(d, d))
        .iter()
        .map(|z| z.norm())
        .fold(0.0f64, f64::max);
    if completeness > 1e-10 {
        return Err(Error::IncompletePovm { deviation: completeness });
    }

    // dρ/dθ at θ = 0 under ρ(θ) = e^{−iGθ} ρ e^{iGθ}
    let commutator = generator * rho.matrix() - rho.matrix() * generator;
    let drho = commutator.map(|z| z * C64::new(0.0, -1.0));
    let mut fisher = 0.0;
    for effect in povm {
        let p = trace_product(effect, rho.matrix());
        let pdot = trace_product(effect, &drho);
        if p.re < PROB_FLOOR {
            continue;
        }
        fisher += pdot.re * pdot.re / p.re;
    }
    Ok(fisher)
}

fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let d = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..d {
        for i in 0..d {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}
