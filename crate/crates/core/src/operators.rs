//! Local-observable factories (Pauli matrices, truncated bosonic ladder and
//! quadrature operators) and the per-party operator sets they assemble into.
//!
//! The quadrature convention is `x̂ = (â + â†)/√2`, `p̂ = (â − â†)/(i√2)`, so
//! `[x̂, p̂] = i`, the vacuum variances are 1/2, and `⟨x̂²⟩ + ⟨p̂²⟩ = 2n + 1`
//! per mode. Truncation corrupts only the last row/column of the commutator.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::tensor::{
    hermiticity_residual, kron_embed, CMatrix, HilbertStructure, C64, HERMITICITY_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

/// Standard 2×2 Pauli matrix.
pub fn pauli(axis: PauliAxis) -> CMatrix {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    match axis {
        PauliAxis::X => CMatrix::from_row_slice(2, 2, &[z, one, one, z]),
        PauliAxis::Y => CMatrix::from_row_slice(
            2,
            2,
            &[z, C64::new(0.0, -1.0), C64::new(0.0, 1.0), z],
        ),
        PauliAxis::Z => CMatrix::from_row_slice(2, 2, &[one, z, z, -one]),
    }
}

fn check_cutoff(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!(
            "mode cutoff must be at least 2, got {dim}"
        )));
    }
    Ok(())
}

/// Truncated annihilation operator: `⟨n−1|â|n⟩ = √n`.
pub fn annihilation(dim: usize) -> Result<CMatrix> {
    check_cutoff(dim)?;
    Ok(CMatrix::from_fn(dim, dim, |i, j| {
        if i + 1 == j {
            C64::new((j as f64).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// Truncated position quadrature `x̂ = (â + â†)/√2`.
pub fn position(dim: usize) -> Result<CMatrix> {
    let a = annihilation(dim)?;
    let adag = a.adjoint();
    Ok((a + adag).map(|z| z * std::f64::consts::FRAC_1_SQRT_2))
}

/// Truncated momentum quadrature `p̂ = (â − â†)/(i√2)`.
pub fn momentum(dim: usize) -> Result<CMatrix> {
    let a = annihilation(dim)?;
    let adag = a.adjoint();
    // 1/(i√2) = −i/√2
    Ok((a - adag).map(|z| z * C64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2)))
}

/// Number operator `n̂ = â†â`, exactly `diag(0, 1, …, dim−1)` under truncation.
pub fn number(dim: usize) -> Result<CMatrix> {
    check_cutoff(dim)?;
    Ok(CMatrix::from_diagonal(&DVector::from_iterator(
        dim,
        (0..dim).map(|n| C64::new(n as f64, 0.0)),
    )))
}

/// Per-party lists of Hermitian local operators available for building
/// collective generators.
#[derive(Debug, Clone)]
pub struct LocalOperatorSet {
    structure: HilbertStructure,
    sets: Vec<Vec<CMatrix>>,
    labels: Vec<Vec<String>>,
}

impl LocalOperatorSet {
    /// Validated set from explicit per-party operators. Every operator must be
    /// Hermitian within [`HERMITICITY_TOL`] and match its party's dimension.
    pub fn custom(structure: HilbertStructure, sets: Vec<Vec<CMatrix>>) -> Result<Self> {
        let labels = sets
            .iter()
            .enumerate()
            .map(|(i, ops)| (0..ops.len()).map(|m| format!("a{i}_{m}")).collect())
            .collect();
        Self::custom_labeled(structure, sets, labels)
    }

    pub fn custom_labeled(
        structure: HilbertStructure,
        sets: Vec<Vec<CMatrix>>,
        labels: Vec<Vec<String>>,
    ) -> Result<Self> {
        if sets.len() != structure.parties() {
            return Err(Error::DimensionMismatch {
                context: "operator set vs. party count",
                expected: structure.parties(),
                got: sets.len(),
            });
        }
        if labels.len() != sets.len()
            || labels.iter().zip(&sets).any(|(l, s)| l.len() != s.len())
        {
            return Err(Error::DimensionMismatch {
                context: "operator labels vs. operators",
                expected: sets.iter().map(Vec::len).sum(),
                got: labels.iter().map(Vec::len).sum(),
            });
        }
        for (i, ops) in sets.iter().enumerate() {
            if ops.is_empty() {
                return Err(Error::EmptyInput("every party needs at least one operator"));
            }
            let dim = structure.dim(i)?;
            for op in ops {
                if op.nrows() != dim || op.ncols() != dim {
                    return Err(Error::DimensionMismatch {
                        context: "local operator vs. party dimension",
                        expected: dim,
                        got: op.nrows(),
                    });
                }
                let residual = hermiticity_residual(op);
                if residual > HERMITICITY_TOL {
                    return Err(Error::NotHermitian { residual, tolerance: HERMITICITY_TOL });
                }
            }
        }
        Ok(Self { structure, sets, labels })
    }

    pub fn structure(&self) -> &HilbertStructure {
        &self.structure
    }

    pub fn parties(&self) -> usize {
        self.sets.len()
    }

    pub fn ops(&self, party: usize) -> &[CMatrix] {
        &self.sets[party]
    }

    pub fn labels(&self, party: usize) -> &[String] {
        &self.labels[party]
    }

    /// Number of operators per party.
    pub fn block_lengths(&self) -> Vec<usize> {
        self.sets.iter().map(Vec::len).collect()
    }

    /// Side length of the Fisher/covariance matrices over this set.
    pub fn total_len(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    /// Flat index of operator `m` of `party` in block (party-major) order.
    pub fn flat_index(&self, party: usize, m: usize) -> usize {
        self.sets[..party].iter().map(Vec::len).sum::<usize>() + m
    }

    pub(crate) fn check_conformal(&self, c: &CoefficientVector) -> Result<()> {
        let expected = self.block_lengths();
        let got = c.block_lengths();
        if expected != got {
            return Err(Error::DimensionMismatch {
                context: "coefficient blocks vs. operator set",
                expected: expected.iter().sum(),
                got: got.iter().sum(),
            });
        }
        Ok(())
    }

    /// The local combination `Σ_m c_m A^{(m)}` on one party's space.
    pub fn local_combination(&self, party: usize, block: &[f64]) -> Result<CMatrix> {
        let ops = self
            .sets
            .get(party)
            .ok_or(Error::SiteOutOfRange { site: party, parties: self.sets.len() })?;
        if block.len() != ops.len() {
            return Err(Error::DimensionMismatch {
                context: "coefficient block vs. party operators",
                expected: ops.len(),
                got: block.len(),
            });
        }
        let dim = ops[0].nrows();
        let mut acc = CMatrix::zeros(dim, dim);
        for (op, &w) in ops.iter().zip(block) {
            if w != 0.0 {
                acc += op.map(|z| z * w);
            }
        }
        Ok(acc)
    }
}

/// Spin-1/2 set: `(σ_x/2, σ_y/2, σ_z/2)` for each of `n` qubits. The identity
/// commutes with everything and is omitted.
pub fn spin_set(n: usize) -> Result<LocalOperatorSet> {
    if n < 1 {
        return Err(Error::InvalidParameter("spin set needs at least one qubit".into()));
    }
    let structure = HilbertStructure::uniform(n, 2)?;
    let half = |m: CMatrix| m.map(|z| z * 0.5);
    let ops = vec![
        half(pauli(PauliAxis::X)),
        half(pauli(PauliAxis::Y)),
        half(pauli(PauliAxis::Z)),
    ];
    let labels = vec!["sx/2".to_string(), "sy/2".to_string(), "sz/2".to_string()];
    LocalOperatorSet::custom_labeled(structure, vec![ops; n], vec![labels; n])
}

/// Quadrature set: `(x̂, p̂)` per mode at the given cutoffs.
pub fn quadrature_set(dims: &[usize]) -> Result<LocalOperatorSet> {
    let structure = HilbertStructure::new(dims.to_vec())?;
    let sets = dims
        .iter()
        .map(|&d| Ok(vec![position(d)?, momentum(d)?]))
        .collect::<Result<Vec<_>>>()?;
    let labels = vec![vec!["x".to_string(), "p".to_string()]; dims.len()];
    LocalOperatorSet::custom_labeled(structure, sets, labels)
}

/// Real block vector weighting the operators of a [`LocalOperatorSet`] into a
/// collective generator.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    blocks: Vec<Vec<f64>>,
}

impl CoefficientVector {
    pub fn new(blocks: Vec<Vec<f64>>) -> Result<Self> {
        if blocks.is_empty() || blocks.iter().any(Vec::is_empty) {
            return Err(Error::EmptyInput("coefficient vector needs non-empty blocks"));
        }
        if blocks.iter().flatten().any(|w| !w.is_finite()) {
            return Err(Error::InvalidParameter("coefficient entries must be finite".into()));
        }
        if blocks.iter().flatten().all(|&w| w == 0.0) {
            return Err(Error::InvalidParameter("coefficient vector must not be all zero".into()));
        }
        Ok(Self { blocks })
    }

    /// Rebuilds the block shape from a flat slice.
    pub fn from_flat(block_lengths: &[usize], flat: &[f64]) -> Result<Self> {
        let total: usize = block_lengths.iter().sum();
        if flat.len() != total {
            return Err(Error::DimensionMismatch {
                context: "flat coefficients vs. block lengths",
                expected: total,
                got: flat.len(),
            });
        }
        let mut blocks = Vec::with_capacity(block_lengths.len());
        let mut offset = 0;
        for &len in block_lengths {
            blocks.push(flat[offset..offset + len].to_vec());
            offset += len;
        }
        Self::new(blocks)
    }

    pub fn blocks(&self) -> &[Vec<f64>] {
        &self.blocks
    }

    pub fn block_lengths(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn flatten(&self) -> DVector<f64> {
        DVector::from_iterator(
            self.blocks.iter().map(Vec::len).sum(),
            self.blocks.iter().flatten().copied(),
        )
    }

    pub fn norm(&self) -> f64 {
        self.blocks.iter().flatten().map(|w| w * w).sum::<f64>().sqrt()
    }
}

/// The collective generator `Â(c) = Σ_i Σ_m c_i^{(m)} Â_i^{(m)}` on the full
/// space; Hermitian for any real coefficients.
pub fn collective_generator(set: &LocalOperatorSet, c: &CoefficientVector) -> Result<CMatrix> {
    set.check_conformal(c)?;
    let total = set.structure().total_dim();
    let mut acc = CMatrix::zeros(total, total);
    for (party, block) in c.blocks().iter().enumerate() {
        if block.iter().all(|&w| w == 0.0) {
            continue;
        }
        let local = set.local_combination(party, block)?;
        acc += kron_embed(&local, party, set.structure())?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::hermitian_eig;
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;
    use num_complex::Complex;

    fn c(re: f64, im: f64) -> C64 {
        Complex::new(re, im)
    }

    #[test]
    fn pauli_matrices() {
        assert_eq!(pauli(PauliAxis::Z)[(0, 0)], c(1.0, 0.0));
        assert_eq!(pauli(PauliAxis::Z)[(1, 1)], c(-1.0, 0.0));
        assert_eq!(pauli(PauliAxis::X)[(0, 1)], c(1.0, 0.0));
        assert_eq!(pauli(PauliAxis::X)[(1, 0)], c(1.0, 0.0));
        for axis in [PauliAxis::X, PauliAxis::Y, PauliAxis::Z] {
            let m = pauli(axis);
            assert_abs_diff_eq!(m.trace().norm(), 0.0, epsilon = 1e-15);
            let dec = hermitian_eig(&m).unwrap();
            assert_abs_diff_eq!(dec.eigenvalues[0], 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(dec.eigenvalues[1], -1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn ladder_matrix_elements() {
        let a = annihilation(2).unwrap();
        assert_eq!(a[(0, 1)], c(1.0, 0.0));
        assert_eq!(a[(1, 0)], c(0.0, 0.0));

        let a4 = annihilation(4).unwrap();
        assert_abs_diff_eq!(a4[(2, 3)].re, 3f64.sqrt(), epsilon = 1e-15);

        let n = number(4).unwrap();
        let built = a4.adjoint() * &a4;
        assert_abs_diff_eq!((built - n).norm(), 0.0, epsilon = 1e-12);
        assert!(annihilation(1).is_err());
    }

    #[test]
    fn quadrature_commutator_is_i_on_interior() {
        let dim = 20;
        let x = position(dim).unwrap();
        let p = momentum(dim).unwrap();
        let comm = &x * &p - &p * &x;
        // truncation corrupts only the last row/column
        for i in 0..dim - 1 {
            for j in 0..dim - 1 {
                let expected = if i == j { c(0.0, 1.0) } else { c(0.0, 0.0) };
                assert!((comm[(i, j)] - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn vacuum_quadrature_variance_is_half() {
        let dim = 6;
        let x = position(dim).unwrap();
        let mut vac = DVector::from_element(dim, c(0.0, 0.0));
        vac[0] = c(1.0, 0.0);
        let mean = (vac.adjoint() * &x * &vac)[(0, 0)];
        let second = (vac.adjoint() * (&x * &x) * &vac)[(0, 0)];
        assert_abs_diff_eq!(mean.norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(second.re - mean.norm_sqr(), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn number_spectrum_counts_excitations() {
        let dec = hermitian_eig(&number(5).unwrap()).unwrap();
        for (k, expected) in (0..5).rev().enumerate() {
            assert_abs_diff_eq!(dec.eigenvalues[k], expected as f64, epsilon = 1e-12);
        }
    }

    #[test]
    fn spin_set_algebra() {
        let set = spin_set(2).unwrap();
        assert_eq!(set.block_lengths(), vec![3, 3]);
        for party in 0..2 {
            for op in set.ops(party) {
                assert_abs_diff_eq!(op.trace().norm(), 0.0, epsilon = 1e-15);
                let sq = op * op;
                let quarter = CMatrix::identity(2, 2).map(|z| z * 0.25);
                assert_abs_diff_eq!((sq - quarter).norm(), 0.0, epsilon = 1e-14);
            }
            let (sx, sy, sz) = (&set.ops(party)[0], &set.ops(party)[1], &set.ops(party)[2]);
            let comm = sx * sy - sy * sx;
            let expected = sz.map(|z| z * c(0.0, 1.0));
            assert_abs_diff_eq!((comm - expected).norm(), 0.0, epsilon = 1e-14);
        }
        assert!(spin_set(0).is_err());
    }

    #[test]
    fn quadrature_set_shape() {
        let set = quadrature_set(&[4, 6]).unwrap();
        assert_eq!(set.block_lengths(), vec![2, 2]);
        for party in 0..2 {
            for op in set.ops(party) {
                assert!(hermiticity_residual(op) < 1e-15);
            }
        }
    }

    #[test]
    fn custom_set_validation() {
        let structure = HilbertStructure::new(vec![2, 10]).unwrap();
        let hybrid = LocalOperatorSet::custom(
            structure.clone(),
            vec![vec![pauli(PauliAxis::X)], vec![position(10).unwrap()]],
        );
        assert!(hybrid.is_ok());

        let non_hermitian = LocalOperatorSet::custom(
            structure.clone(),
            vec![vec![pauli(PauliAxis::X)], vec![annihilation(10).unwrap()]],
        );
        assert!(matches!(non_hermitian, Err(Error::NotHermitian { .. })));

        let empty_party = LocalOperatorSet::custom(structure, vec![vec![pauli(PauliAxis::X)], vec![]]);
        assert!(empty_party.is_err());
    }

    #[test]
    fn collective_generator_builds_jz() {
        let set = spin_set(2).unwrap();
        let c_z = CoefficientVector::new(vec![vec![0.0, 0.0, 1.0]; 2]).unwrap();
        let jz = collective_generator(&set, &c_z).unwrap();
        let expected = CMatrix::from_diagonal(&DVector::from_vec(vec![
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(-1.0, 0.0),
        ]));
        assert_abs_diff_eq!((jz - expected).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn collective_generator_builds_total_x_quadrature() {
        let set = quadrature_set(&[3, 3]).unwrap();
        let cv = CoefficientVector::new(vec![vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let total = collective_generator(&set, &cv).unwrap();
        let x = position(3).unwrap();
        let eye = CMatrix::identity(3, 3);
        let oracle = x.kronecker(&eye) + eye.kronecker(&x);
        assert_abs_diff_eq!((total - oracle).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn collective_generator_single_site_matches_embedding() {
        let set = spin_set(3).unwrap();
        let cv = CoefficientVector::new(vec![
            vec![0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        let gen = collective_generator(&set, &cv).unwrap();
        let oracle = kron_embed(&set.ops(1)[1], 1, set.structure()).unwrap();
        assert_abs_diff_eq!((gen - oracle).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn coefficient_vector_shape_checks() {
        assert!(CoefficientVector::new(vec![]).is_err());
        assert!(CoefficientVector::new(vec![vec![0.0, 0.0]]).is_err());
        let cv = CoefficientVector::from_flat(&[3, 3], &[0.0, 0.0, 1.0, 0.0, 0.0, -1.0]).unwrap();
        assert_eq!(cv.blocks()[1], vec![0.0, 0.0, -1.0]);
        assert_abs_diff_eq!(cv.norm(), 2f64.sqrt(), epsilon = 1e-15);
        assert!(CoefficientVector::from_flat(&[3, 3], &[1.0]).is_err());
    }
}
