//! Dense complex linear algebra over tensor-product Hilbert spaces:
//! local-operator embedding, partial traces, spectral decompositions, and
//! state composition. Party 0 is the leftmost (slowest-varying) Kronecker
//! factor throughout.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Hard cap on the total dimension of any constructed space. Everything here
/// is dense; beyond this the quadratic/cubic costs stop being desk-scale.
pub const DIM_CAP: usize = 4096;

/// Hermiticity tolerance for operators and freshly built states (max |M - M†| entry).
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Hermiticity tolerance accepted by [`hermitian_eig`].
pub const EIG_HERMITICITY_TOL: f64 = 1e-10;
/// Allowed deviation of a density-matrix trace from 1.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues of a state may undershoot zero by at most this much; anything
/// in `[-PSD_TOL, 0)` is treated as roundoff and clamped.
pub const PSD_TOL: f64 = 1e-10;

/// Ordered list of local dimensions defining a tensor-product space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertStructure {
    dims: Vec<usize>,
}

impl HilbertStructure {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::EmptyInput("HilbertStructure needs at least one party"));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidParameter(format!(
                "local dimension {d} is below 2"
            )));
        }
        let total = dims.iter().try_fold(1usize, |acc, &d| {
            acc.checked_mul(d).filter(|&t| t <= DIM_CAP)
        });
        match total {
            Some(_) => Ok(Self { dims }),
            None => Err(Error::DimensionCap {
                total: dims.iter().product::<usize>().max(DIM_CAP + 1),
                cap: DIM_CAP,
            }),
        }
    }

    /// Uniform structure: `n` parties of local dimension `dim`.
    pub fn uniform(n: usize, dim: usize) -> Result<Self> {
        Self::new(vec![dim; n])
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, site: usize) -> Result<usize> {
        self.dims
            .get(site)
            .copied()
            .ok_or(Error::SiteOutOfRange { site, parties: self.dims.len() })
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Suffix products: `stride[i]` is the flat-index step of party `i`.
    pub(crate) fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.dims.len()];
        for i in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.dims[i + 1];
        }
        strides
    }

    /// Concatenation of two structures (tensor product of the spaces).
    pub fn concat(&self, other: &HilbertStructure) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::new(dims)
    }
}

pub(crate) fn hermiticity_residual(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            let r = (m[(i, j)] - m[(j, i)].conj()).norm();
            if r > worst {
                worst = r;
            }
        }
    }
    worst
}

pub(crate) fn symmetrize(m: &CMatrix) -> CMatrix {
    let adj = m.adjoint();
    (m + adj).map(|z| z * 0.5)
}

fn check_square(m: &CMatrix, context: &'static str) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            context,
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// Full spectrum and orthonormal eigenvectors of a Hermitian matrix,
/// eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: DVector<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Σ_k λ_k |v_k⟩⟨v_k|`.
    pub fn reconstruct(&self) -> CMatrix {
        let d = self.dim();
        let mut out = CMatrix::zeros(d, d);
        for k in 0..d {
            let v = self.eigenvectors.column(k);
            let lk = self.eigenvalues[k];
            for j in 0..d {
                let wj = v[j].conj() * lk;
                for i in 0..d {
                    out[(i, j)] += v[i] * wj;
                }
            }
        }
        out
    }
}

/// Hermitian eigendecomposition with descending eigenvalues. The input may
/// deviate from exact Hermiticity by at most [`EIG_HERMITICITY_TOL`]; it is
/// symmetrized before factorization.
pub fn hermitian_eig(m: &CMatrix) -> Result<SpectralDecomposition> {
    let d = check_square(m, "hermitian_eig input")?;
    let residual = hermiticity_residual(m);
    if residual > EIG_HERMITICITY_TOL {
        return Err(Error::NotHermitian { residual, tolerance: EIG_HERMITICITY_TOL });
    }
    let work = symmetrize(m);
    let eig = faer::Mat::<C64>::from_fn(d, d, |i, j| work[(i, j)])
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|_| Error::EigenConvergence)?;
    let (u, s) = (eig.U(), eig.S());
    // faer sorts nondecreasing
    let eigenvalues = DVector::from_iterator(d, (0..d).rev().map(|k| s[k].re));
    let eigenvectors = CMatrix::from_fn(d, d, |i, k| u[(i, d - 1 - k)]);
    Ok(SpectralDecomposition { eigenvalues, eigenvectors })
}

/// Embeds a local operator at `site`: `1 ⊗ … ⊗ op ⊗ … ⊗ 1`.
pub fn kron_embed(op: &CMatrix, site: usize, structure: &HilbertStructure) -> Result<CMatrix> {
    let side = check_square(op, "kron_embed operator")?;
    let local = structure.dim(site)?;
    if side != local {
        return Err(Error::DimensionMismatch {
            context: "kron_embed operator vs. party dimension",
            expected: local,
            got: side,
        });
    }
    let total = structure.total_dim();
    let stride = structure.strides()[site];
    let blocks = total / (local * stride); // number of left-identity repetitions
    let mut out = CMatrix::zeros(total, total);
    for l in 0..blocks {
        let base = l * local * stride;
        for a in 0..local {
            for b in 0..local {
                let v = op[(a, b)];
                if v != C64::new(0.0, 0.0) {
                    for r in 0..stride {
                        out[(base + a * stride + r, base + b * stride + r)] = v;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Reduced state of party `keep`, tracing out all other parties.
pub fn partial_trace(rho: &DensityMatrix, keep: usize) -> Result<DensityMatrix> {
    let structure = rho.structure();
    let local = structure.dim(keep)?;
    let stride = structure.strides()[keep];
    let total = structure.total_dim();
    let m = rho.matrix();
    let mut out = CMatrix::zeros(local, local);
    for z in 0..total {
        let a = (z / stride) % local;
        let rest = z - a * stride;
        for b in 0..local {
            out[(a, b)] += m[(z, rest + b * stride)];
        }
    }
    let reduced = HilbertStructure::new(vec![local])?;
    Ok(DensityMatrix::from_trusted(reduced, out))
}

/// Tensor product of all single-party marginals. Inter-party correlations are
/// erased while every local block of the covariance matrix is preserved.
pub fn product_of_marginals(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let marginals: Result<Vec<DensityMatrix>> = (0..rho.structure().parties())
        .map(|site| partial_trace(rho, site))
        .collect();
    product_state(&marginals?)
}

/// Kronecker product of the given factors; the structure is the concatenation
/// of the factor structures.
pub fn product_state(locals: &[DensityMatrix]) -> Result<DensityMatrix> {
    let (first, rest) = locals
        .split_first()
        .ok_or(Error::EmptyInput("product_state needs at least one factor"))?;
    let mut structure = first.structure().clone();
    let mut matrix = first.matrix().clone();
    for factor in rest {
        structure = structure.concat(factor.structure())?;
        matrix = matrix.kronecker(factor.matrix());
    }
    Ok(DensityMatrix::from_trusted(structure, matrix))
}

/// Convex combination of states over identical structures. Weights must be
/// positive and sum to 1 within [`TRACE_TOL`].
pub fn mix(states: &[DensityMatrix], weights: &[f64]) -> Result<DensityMatrix> {
    let first = states
        .first()
        .ok_or(Error::EmptyInput("mix needs at least one state"))?;
    if states.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            context: "mix states vs. weights",
            expected: states.len(),
            got: weights.len(),
        });
    }
    if weights.iter().any(|&w| w <= 0.0 || !w.is_finite()) {
        return Err(Error::InvalidWeights { deviation: f64::NAN });
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > TRACE_TOL {
        return Err(Error::InvalidWeights { deviation: (total - 1.0).abs() });
    }
    let structure = first.structure();
    let d = structure.total_dim();
    let mut acc = CMatrix::zeros(d, d);
    for (state, &w) in states.iter().zip(weights) {
        if state.structure() != structure {
            return Err(Error::DimensionMismatch {
                context: "mix structure mismatch",
                expected: d,
                got: state.structure().total_dim(),
            });
        }
        acc += state.matrix().map(|z| z * w);
    }
    Ok(DensityMatrix::from_trusted(structure.clone(), acc))
}

/// Hermitian, positive-semidefinite, unit-trace matrix over a [`HilbertStructure`].
///
/// The spectral decomposition is computed once on demand and cached; all
/// operations here are pure, so values are safely shareable across threads.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    structure: HilbertStructure,
    matrix: CMatrix,
    herm_residual: f64,
    spectral: OnceLock<SpectralDecomposition>,
}

impl DensityMatrix {
    /// Validating constructor for untrusted input. The matrix is symmetrized
    /// (rejecting residuals above [`HERMITICITY_TOL`]), its trace checked
    /// against 1 within [`TRACE_TOL`], and its spectrum computed: eigenvalues
    /// in `[-PSD_TOL, 0)` are clamped to zero, anything lower is an error.
    pub fn new(structure: HilbertStructure, matrix: CMatrix) -> Result<Self> {
        let side = check_square(&matrix, "density matrix")?;
        if side != structure.total_dim() {
            return Err(Error::DimensionMismatch {
                context: "density matrix vs. structure",
                expected: structure.total_dim(),
                got: side,
            });
        }
        let herm_residual = hermiticity_residual(&matrix);
        if herm_residual > HERMITICITY_TOL {
            return Err(Error::NotHermitian { residual: herm_residual, tolerance: HERMITICITY_TOL });
        }
        let mut matrix = symmetrize(&matrix);
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceDeviation {
                deviation: (trace - 1.0).abs(),
                tolerance: TRACE_TOL,
            });
        }
        matrix = matrix.map(|z| z / trace);
        let dec = hermitian_eig(&matrix)?;
        let min = dec.eigenvalues[dec.dim() - 1];
        if min < -PSD_TOL {
            return Err(Error::NotPositive { min, tolerance: PSD_TOL });
        }
        let state = Self { structure, matrix, herm_residual, spectral: OnceLock::new() };
        let _ = state.spectral.set(clamp_spectrum(dec));
        Ok(state)
    }

    /// Constructor for matrices that are PSD and unit-trace by construction
    /// (marginals, convex mixtures, Kronecker products of valid states, pure
    /// projectors). Symmetrizes and renormalizes the trace but defers the
    /// spectral decomposition until needed.
    pub(crate) fn from_trusted(structure: HilbertStructure, matrix: CMatrix) -> Self {
        let herm_residual = hermiticity_residual(&matrix);
        debug_assert!(herm_residual <= 1e-9, "trusted state residual {herm_residual:e}");
        let mut matrix = symmetrize(&matrix);
        let trace = matrix.trace().re;
        debug_assert!((trace - 1.0).abs() <= 1e-9, "trusted state trace {trace}");
        matrix = matrix.map(|z| z / trace);
        Self { structure, matrix, herm_residual, spectral: OnceLock::new() }
    }

    pub fn structure(&self) -> &HilbertStructure {
        &self.structure
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Max-entry deviation from Hermiticity seen before symmetrization.
    pub fn herm_residual(&self) -> f64 {
        self.herm_residual
    }

    pub fn total_dim(&self) -> usize {
        self.structure.total_dim()
    }

    /// Spectral decomposition as a probability distribution over orthonormal
    /// states: descending, clamped at zero, renormalized to sum 1.
    pub fn spectral(&self) -> &SpectralDecomposition {
        self.spectral.get_or_init(|| {
            let dec = hermitian_eig(&self.matrix).expect("state was symmetrized");
            let min = dec.eigenvalues[dec.dim() - 1];
            assert!(
                min >= -PSD_TOL,
                "state built from trusted operations has eigenvalue {min:e}"
            );
            clamp_spectrum(dec)
        })
    }

    /// `Tr[ρ M]`.
    pub fn expectation(&self, op: &CMatrix) -> Result<C64> {
        let d = self.total_dim();
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::DimensionMismatch {
                context: "expectation operator",
                expected: d,
                got: op.nrows(),
            });
        }
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..d {
            for i in 0..d {
                acc += self.matrix[(i, j)] * op[(j, i)];
            }
        }
        Ok(acc)
    }

    /// `Tr[ρ²]`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }
}

fn clamp_spectrum(mut dec: SpectralDecomposition) -> SpectralDecomposition {
    for p in dec.eigenvalues.iter_mut() {
        if *p < 0.0 {
            *p = 0.0;
        }
    }
    let total: f64 = dec.eigenvalues.iter().sum();
    if total > 0.0 {
        dec.eigenvalues /= total;
    }
    dec
}

/// Normalized state vector over a [`HilbertStructure`].
#[derive(Debug, Clone)]
pub struct PureState {
    structure: HilbertStructure,
    amplitudes: CVector,
}

impl PureState {
    pub fn new(structure: HilbertStructure, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != structure.total_dim() {
            return Err(Error::DimensionMismatch {
                context: "pure state vs. structure",
                expected: structure.total_dim(),
                got: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceDeviation {
                deviation: (norm - 1.0).abs(),
                tolerance: TRACE_TOL,
            });
        }
        Ok(Self { structure, amplitudes: amplitudes.map(|z| z / norm) })
    }

    pub fn structure(&self) -> &HilbertStructure {
        &self.structure
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// `|ψ⟩⟨ψ|` as a density matrix.
    pub fn to_density(&self) -> DensityMatrix {
        let d = self.amplitudes.len();
        let mut matrix = CMatrix::zeros(d, d);
        for j in 0..d {
            let wj = self.amplitudes[j].conj();
            for i in 0..d {
                matrix[(i, j)] = self.amplitudes[i] * wj;
            }
        }
        DensityMatrix::from_trusted(self.structure.clone(), matrix)
    }

    /// `⟨ψ|M|ψ⟩`.
    pub fn expectation(&self, op: &CMatrix) -> Result<C64> {
        let d = self.amplitudes.len();
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::DimensionMismatch {
                context: "expectation operator",
                expected: d,
                got: op.nrows(),
            });
        }
        let image = op * &self.amplitudes;
        Ok(self.amplitudes.dotc(&image))
    }

    /// Kronecker product of pure factors.
    pub fn product(factors: &[PureState]) -> Result<PureState> {
        let (first, rest) = factors
            .split_first()
            .ok_or(Error::EmptyInput("product of pure states needs a factor"))?;
        let mut structure = first.structure.clone();
        let mut amplitudes = first.amplitudes.clone();
        for f in rest {
            structure = structure.concat(&f.structure)?;
            amplitudes = amplitudes.kronecker(&f.amplitudes);
        }
        PureState::new(structure, amplitudes)
    }
}
