//! Acceptance suite: one test per guaranteed behavior, each pinned to its
//! tolerance and cross-checked against an independent oracle where one
//! exists (dense direction grids, finite differences, closed-form values).
//! Run with `--nocapture` to see one pass line per criterion.

use fisherwit::bounds::{combined_xp_criterion, producibility_verdict};
use fisherwit::operators::{
    collective_generator, number, quadrature_set, spin_set, CoefficientVector, LocalOperatorSet,
    PauliAxis,
};
use fisherwit::states::{
    default_cutoff, fock, ghz_weighted, random_mixed, random_pure, random_separable,
};
use fisherwit::tensor::{
    hermitian_eig, kron_embed, mix, partial_trace, product_state, CMatrix, DensityMatrix,
    HilbertStructure, PureState, C64,
};
use fisherwit::witness::{
    classical_fisher, constrained_qfi_max, covariance_matrix, qfi_matrix, quantum_fisher,
    witness_lambda_max, witness_value,
};
use fisherwit_cli::{grid, hybrid_set, run_fig1, run_fig2, run_hybrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const THRESHOLD: f64 = 1e-8;

fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let raw = CMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    });
    (&raw + raw.adjoint()).map(|z| z * 0.5)
}

fn haar_unitary(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let raw = CMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    });
    raw.qr().q()
}

fn projective_povm(basis: &CMatrix) -> Vec<CMatrix> {
    let d = basis.nrows();
    (0..d)
        .map(|k| {
            let col = basis.column(k);
            CMatrix::from_fn(d, d, |i, j| col[i] * col[j].conj())
        })
        .collect()
}

fn variance(rho: &DensityMatrix, op: &CMatrix) -> f64 {
    let mean = rho.expectation(op).unwrap().re;
    let second = rho.expectation(&(op * op)).unwrap().re;
    second - mean * mean
}

/// Operator sets matched to the structures used across the suite.
fn matched_set(structure: &HilbertStructure, flavor: usize) -> LocalOperatorSet {
    let dims = structure.dims();
    match flavor % 3 {
        0 if dims.iter().all(|&d| d == 2) => spin_set(dims.len()).unwrap(),
        1 => quadrature_set(dims).unwrap(),
        _ => {
            let sets = dims
                .iter()
                .map(|&d| {
                    if d == 2 {
                        vec![
                            fisherwit::operators::pauli(PauliAxis::X),
                            fisherwit::operators::pauli(PauliAxis::Z),
                        ]
                    } else {
                        vec![
                            fisherwit::operators::position(d).unwrap(),
                            number(d).unwrap(),
                        ]
                    }
                })
                .collect();
            LocalOperatorSet::custom(structure.clone(), sets).unwrap()
        }
    }
}

#[test]
fn a1_pure_states_satisfy_the_fisher_covariance_identity() {
    let structures = [
        HilbertStructure::new(vec![2, 2]).unwrap(),
        HilbertStructure::new(vec![2, 3]).unwrap(),
        HilbertStructure::new(vec![2, 2, 2]).unwrap(),
    ];
    let mut worst = 0.0f64;
    for seed in 0..200u64 {
        let structure = &structures[(seed % 3) as usize];
        let set = match seed % 3 {
            0 => spin_set(2).unwrap(),
            1 => quadrature_set(&[2, 3]).unwrap(),
            _ => spin_set(3).unwrap(),
        };
        let rho = random_pure(structure, seed).unwrap().to_density();
        let q = qfi_matrix(&rho, &set).unwrap();
        let gamma = covariance_matrix(&rho, &set).unwrap();
        let deviation = (q.matrix() - gamma.matrix() * 4.0)
            .iter()
            .fold(0.0f64, |acc, x| acc.max(x.abs()));
        assert!(deviation < 1e-8, "seed {seed}: |Q - 4Γ|_max = {deviation:e}");
        worst = worst.max(deviation);
    }
    println!("A1 pass: 200 Haar pure states, worst |Q - 4Γ| entry = {worst:.2e} < 1e-8");
}

#[test]
fn a2_separable_states_never_cross_the_detection_threshold() {
    let structures = [
        HilbertStructure::new(vec![2, 2]).unwrap(),
        HilbertStructure::new(vec![3, 3]).unwrap(),
        HilbertStructure::new(vec![2, 2, 2]).unwrap(),
    ];
    let mut worst = f64::NEG_INFINITY;
    for seed in 0..500u64 {
        let structure = &structures[(seed % 3) as usize];
        let set = matched_set(structure, seed as usize);
        let terms = 1 + (seed as usize) % 20;
        let rho = random_separable(structure, terms, seed).unwrap();
        let report = witness_lambda_max(&rho, &set, THRESHOLD).unwrap();
        assert!(
            report.lambda_max <= 1e-8,
            "seed {seed} (terms {terms}): λ_max = {:e}",
            report.lambda_max
        );
        worst = worst.max(report.lambda_max);
    }
    println!("A2 pass: 500 separable mixtures, max λ_max = {worst:.2e} ≤ 1e-8");
}

/// Dense direction grid on the Bloch sphere, poles included.
fn bloch_grid() -> Vec<[f64; 3]> {
    let mut dirs = Vec::new();
    let (n_theta, n_phi) = (9, 16);
    for t in 0..=n_theta {
        let theta = std::f64::consts::PI * t as f64 / n_theta as f64;
        if t == 0 || t == n_theta {
            dirs.push([0.0, 0.0, theta.cos()]);
            continue;
        }
        for p in 0..n_phi {
            let phi = 2.0 * std::f64::consts::PI * p as f64 / n_phi as f64;
            dirs.push([
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                theta.cos(),
            ]);
        }
    }
    dirs
}

/// Maximum of the quadratic form over per-party Bloch directions scaled by
/// `block_scale` each.
#[allow(clippy::needless_range_loop)]
fn grid_max_quadratic(m: &nalgebra::DMatrix<f64>, block_scale: f64) -> f64 {
    let dirs = bloch_grid();
    let nd = dirs.len();
    let block = |i: usize, j: usize| m.view((3 * i, 3 * j), (3, 3)).into_owned();
    // diag[i][d] and bilinear[(i,j)][d1][d2] lookup tables
    let mut diag = vec![vec![0.0f64; nd]; 3];
    let mut cross = vec![vec![vec![0.0f64; nd]; nd]; 3];
    let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
    for i in 0..3 {
        let bii = block(i, i);
        for (d, u) in dirs.iter().enumerate() {
            let mut acc = 0.0;
            for a in 0..3 {
                for b in 0..3 {
                    acc += u[a] * bii[(a, b)] * u[b];
                }
            }
            diag[i][d] = acc;
        }
    }
    for (pi, &(i, j)) in pairs.iter().enumerate() {
        let bij = block(i, j);
        for (d1, u) in dirs.iter().enumerate() {
            for (d2, v) in dirs.iter().enumerate() {
                let mut acc = 0.0;
                for a in 0..3 {
                    for b in 0..3 {
                        acc += u[a] * bij[(a, b)] * v[b];
                    }
                }
                cross[pi][d1][d2] = acc;
            }
        }
    }
    let s2 = block_scale * block_scale;
    let mut best = f64::NEG_INFINITY;
    for d0 in 0..nd {
        for d1 in 0..nd {
            let partial = diag[0][d0] + diag[1][d1] + 2.0 * cross[0][d0][d1];
            for d2 in 0..nd {
                let value = partial
                    + diag[2][d2]
                    + 2.0 * (cross[1][d0][d2] + cross[2][d1][d2]);
                if value > best {
                    best = value;
                }
            }
        }
    }
    best * s2
}

#[test]
fn a3_ghz_benchmark_against_direction_grid_oracle() {
    let set = spin_set(3).unwrap();
    let rho = ghz_weighted(3, 0.5, 0.0).unwrap().to_density();

    let (fisher_opt, c_opt) = constrained_qfi_max(&rho, &set, 0).unwrap();
    assert!((fisher_opt - 9.0).abs() <= 1e-6, "constrained F_Q = {fisher_opt}");
    for block in c_opt.blocks() {
        assert!((block.iter().map(|x| x * x).sum::<f64>().sqrt() - 1.0).abs() < 1e-9);
    }

    let report = witness_lambda_max(&rho, &set, THRESHOLD).unwrap();
    assert!((report.lambda_max - 2.0).abs() <= 1e-8, "λ_max = {}", report.lambda_max);

    // brute-force oracles over the same constraint sets
    let q = qfi_matrix(&rho, &set).unwrap();
    let grid_fisher = grid_max_quadratic(q.matrix(), 1.0);
    assert!((grid_fisher - 9.0).abs() <= 1e-9, "grid oracle F_Q = {grid_fisher}");
    assert!(fisher_opt >= grid_fisher - 1e-6);

    let lambda_grid = grid_max_quadratic(&report.difference(), (1.0f64 / 3.0).sqrt());
    assert!((lambda_grid - 2.0).abs() <= 1e-9, "grid oracle λ = {lambda_grid}");
    assert!(report.lambda_max >= lambda_grid - 1e-9);

    println!(
        "A3 pass: constrained F_Q = {fisher_opt:.9} (grid {grid_fisher:.9}), λ_max = {:.9} (grid {lambda_grid:.9})",
        report.lambda_max
    );
}

#[test]
fn a4_weighted_superposition_sweep_matches_the_blind_region() {
    let q_grid = grid(0.0, 1.0, 0.01).unwrap();
    let table = run_fig2(3, &q_grid, 0.0, 0, THRESHOLD).unwrap();
    assert_eq!(table.rows.len(), 101);
    let boundary = 0.0917;
    let mut checked_blind = 0;
    for row in &table.rows {
        let q = row.sweep_value;
        let lambda = row.values[0];
        let fisher_opt = row.values[1];
        if q == 0.0 || q == 1.0 {
            assert!(lambda <= 1e-8, "q = {q}: λ_max = {lambda:e}");
        } else {
            assert!(lambda > 1e-8, "q = {q}: λ_max = {lambda:e}");
        }
        if q <= boundary || q >= 1.0 - boundary {
            assert!(fisher_opt <= 3.0 + 1e-6, "q = {q}: F_Q = {fisher_opt}");
            checked_blind += 1;
        }
    }
    let mid = &table.rows[50];
    assert_eq!(mid.sweep_value, 0.5);
    assert!(mid.values[1] > 3.0, "F_Q at q = 0.5 is {}", mid.values[1]);
    println!(
        "A4 pass: λ_max positive strictly inside (0,1), zero at endpoints; {checked_blind} blind-region points kept F_Q ≤ 3, F_Q(0.5) = {:.6}",
        mid.values[1]
    );
}

#[test]
fn a5_dephased_cat_sweep_reproduces_the_witness_hierarchy() {
    let s_grid = grid(0.0, 1.0, 0.05).unwrap();
    let table = run_fig1(1.0, &s_grid, 24, THRESHOLD).unwrap();
    assert_eq!(table.rows.len(), 21);

    for row in &table.rows {
        let (s, w_p, w_x, lambda) = (
            row.sweep_value,
            row.values[0],
            row.values[1],
            row.values[2],
        );
        if s <= 0.95 {
            assert!(w_p > 0.0, "s = {s}: w_p = {w_p:e}");
        }
        if s == 1.0 {
            assert!(lambda <= 1e-8, "s = 1: λ_max = {lambda:e}");
        }
        assert!(
            lambda >= w_p.max(w_x) - 1e-9,
            "s = {s}: λ_max {lambda} below witnesses ({w_p}, {w_x})"
        );
    }
    let at = |s: f64| {
        table
            .rows
            .iter()
            .find(|r| (r.sweep_value - s).abs() < 1e-12)
            .unwrap()
    };
    let early = at(0.1);
    assert!(
        early.values[1] > early.values[0],
        "position witness should dominate at s = 0.1: {:?}",
        early.values
    );
    let late = at(0.5);
    assert!(
        late.values[0] > late.values[1],
        "momentum witness should dominate at s = 0.5: {:?}",
        late.values
    );
    println!(
        "A5 pass: w_p > 0 through s = 0.95, λ_max(1) = {:.2e}, w_x {:.4} > w_p {:.4} at s=0.1, w_p {:.4} > w_x {:.4} at s=0.5",
        at(1.0).values[2],
        early.values[1],
        early.values[0],
        late.values[0],
        late.values[1]
    );
}

#[test]
fn a5b_amplitude_scaling_flips_across_the_crossover() {
    let mut lambda_early = Vec::new();
    let mut lambda_late = Vec::new();
    for &alpha in &[1.0, 1.5, 2.0] {
        let cutoff = default_cutoff(alpha);
        let table = run_fig1(alpha, &[0.1, 0.6], cutoff, THRESHOLD).unwrap();
        lambda_early.push(table.rows[0].values[2]);
        lambda_late.push(table.rows[1].values[2]);
    }
    assert!(
        lambda_early[0] < lambda_early[1] && lambda_early[1] < lambda_early[2],
        "λ_max at s = 0.1 should grow with α: {lambda_early:?}"
    );
    assert!(
        lambda_late[0] > lambda_late[1] && lambda_late[1] > lambda_late[2],
        "λ_max at s = 0.6 should shrink with α: {lambda_late:?}"
    );
    println!(
        "A5b pass: λ_max(s=0.1) = {lambda_early:?} increasing, λ_max(s=0.6) = {lambda_late:?} decreasing"
    );
}

#[test]
fn a6_hybrid_state_is_detected_and_the_product_is_not() {
    let cutoff = 16;
    let table = run_hybrid(0, cutoff, THRESHOLD).unwrap();
    let w = table.rows[0].values[0];
    let cross = table.rows[0].values[1];
    assert!(w > 0.0, "w = {w}");
    assert!((cross - 0.5f64.sqrt()).abs() <= 1e-9, "cross covariance = {cross}");

    let set = hybrid_set(cutoff).unwrap();
    let c = CoefficientVector::new(vec![vec![1.0], vec![1.0]]).unwrap();
    let qubit0 = ghz_weighted(1, 1.0, 0.0).unwrap();
    let vacuum = fock(0, cutoff).unwrap();
    let product = PureState::product(&[qubit0, vacuum]).unwrap().to_density();
    let w_product = witness_value(&product, &set, &c).unwrap();
    assert!(w_product <= 1e-8, "product state w = {w_product:e}");
    let gamma = covariance_matrix(&product, &set).unwrap();
    assert!(gamma.matrix()[(0, 1)].abs() <= 1e-10);
    println!(
        "A6 pass: w = {w:.6} > 0 with cross covariance {cross:.9}; product state w = {w_product:.2e}"
    );
}

#[test]
fn a7_vacuum_saturates_the_combined_quadrature_bound() {
    let cutoff = 4;
    for modes in 1..=3usize {
        let set = quadrature_set(&vec![cutoff; modes]).unwrap();
        let vacuum = fock(0, cutoff).unwrap().to_density();
        let rho = product_state(&vec![vacuum; modes]).unwrap();
        let c_x = CoefficientVector::new(vec![vec![1.0, 0.0]; modes]).unwrap();
        let c_p = CoefficientVector::new(vec![vec![0.0, 1.0]; modes]).unwrap();
        let fisher_x = quantum_fisher(&rho, &collective_generator(&set, &c_x).unwrap()).unwrap();
        let fisher_p = quantum_fisher(&rho, &collective_generator(&set, &c_p).unwrap()).unwrap();

        let mut occupation = 0.0;
        for site in 0..modes {
            let n_op = kron_embed(&number(cutoff).unwrap(), site, rho.structure()).unwrap();
            occupation += rho.expectation(&n_op).unwrap().re;
        }
        assert!(occupation.abs() < 1e-12);
        let total = fisher_x + fisher_p;
        assert!(
            (total - 4.0 * modes as f64).abs() <= 1e-9,
            "{modes} modes: F_X + F_P = {total}"
        );
        let verdict = combined_xp_criterion(fisher_x, fisher_p, occupation, modes, THRESHOLD).unwrap();
        assert!(!verdict.detected);
        assert!(verdict.margin.abs() <= 1e-9);
    }
    println!("A7 pass: vacuum saturates F_X + F_P = 4N for N = 1, 2, 3 within 1e-9");
}

#[test]
fn a8_producibility_classes_separate_ghz_from_bell_pairs() {
    let set = spin_set(4).unwrap();
    let c = CoefficientVector::new(vec![vec![0.0, 0.0, 1.0]; 4]).unwrap();

    let ghz = ghz_weighted(4, 0.5, 0.0).unwrap().to_density();
    let deep = producibility_verdict(&ghz, &set, &c, 2, THRESHOLD).unwrap();
    assert!((deep.fisher_value - 16.0).abs() <= 1e-8);
    assert!((deep.bound - 8.0).abs() <= 1e-12);
    assert!(deep.detected);

    let bell = ghz_weighted(2, 0.5, 0.0).unwrap().to_density();
    let pairs = product_state(&[bell.clone(), bell]).unwrap();
    let shallow = producibility_verdict(&pairs, &set, &c, 2, THRESHOLD).unwrap();
    assert!((shallow.fisher_value - 8.0).abs() <= 1e-8);
    assert!((shallow.bound - 8.0).abs() <= 1e-12);
    assert!(!shallow.detected);

    println!(
        "A8 pass: GHZ₄ F_Q = {:.6} > 8 detected beyond pair-producible; Bell pairs F_Q = {:.6} = bound, not detected",
        deep.fisher_value, shallow.fisher_value
    );
}

/// Finite-difference value of the measurement sensitivity at the phase
/// origin: probabilities from the exactly rotated state, central step `h`.
fn finite_difference_fisher(
    rho: &DensityMatrix,
    generator: &CMatrix,
    povm: &[CMatrix],
    h: f64,
) -> f64 {
    let d = rho.total_dim();
    let dec = hermitian_eig(generator).unwrap();
    let rotate = |theta: f64| -> CMatrix {
        let phases = nalgebra::DVector::from_iterator(
            d,
            dec.eigenvalues.iter().map(|&l| C64::from_polar(1.0, -l * theta)),
        );
        let u = &dec.eigenvectors * CMatrix::from_diagonal(&phases) * dec.eigenvectors.adjoint();
        &u * rho.matrix() * u.adjoint()
    };
    let probs = |m: &CMatrix| -> Vec<f64> {
        povm.iter()
            .map(|effect| {
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..d {
                    for i in 0..d {
                        acc += effect[(i, j)] * m[(j, i)];
                    }
                }
                acc.re
            })
            .collect()
    };
    let p0 = probs(rho.matrix());
    let plus = probs(&rotate(h));
    let minus = probs(&rotate(-h));
    let mut oracle = 0.0;
    for m in 0..povm.len() {
        if p0[m] < 1e-12 {
            continue;
        }
        let pdot = (plus[m] - minus[m]) / (2.0 * h);
        oracle += pdot * pdot / p0[m];
    }
    oracle
}

#[test]
fn a9_classical_fisher_sits_below_the_quantum_value_and_matches_finite_differences() {
    // fixed benchmark: Bell state, collective y rotation, computational basis
    let bell = ghz_weighted(2, 0.5, 0.0).unwrap().to_density();
    let set = spin_set(2).unwrap();
    let c_y = CoefficientVector::new(vec![vec![0.0, 1.0, 0.0]; 2]).unwrap();
    let jy = collective_generator(&set, &c_y).unwrap();
    let computational = projective_povm(&CMatrix::identity(4, 4));
    let classical = classical_fisher(&bell, &jy, &computational).unwrap();
    let oracle = finite_difference_fisher(&bell, &jy, &computational, 1e-5);
    let scale = classical.abs().max(oracle.abs()).max(1e-9);
    assert!((classical - oracle).abs() / scale <= 1e-4, "Bell: {classical} vs {oracle}");

    let structures = [
        HilbertStructure::new(vec![2, 2]).unwrap(),
        HilbertStructure::new(vec![3]).unwrap(),
        HilbertStructure::new(vec![2, 3]).unwrap(),
        HilbertStructure::new(vec![4]).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let mut worst_rel = 0.0f64;
    for seed in 0..100u64 {
        let structure = &structures[(seed % 4) as usize];
        let d = structure.total_dim();
        let rho = random_mixed(structure, 3, seed).unwrap();
        let generator = random_hermitian(d, &mut rng);
        let povm = projective_povm(&haar_unitary(d, &mut rng));

        let classical = classical_fisher(&rho, &generator, &povm).unwrap();
        let quantum = quantum_fisher(&rho, &generator).unwrap();
        assert!(
            classical <= quantum + 1e-8,
            "seed {seed}: F_M = {classical} > F_Q = {quantum}"
        );

        let oracle = finite_difference_fisher(&rho, &generator, &povm, 1e-5);
        let scale = classical.abs().max(oracle.abs()).max(1e-9);
        let rel = (classical - oracle).abs() / scale;
        assert!(rel <= 1e-4, "seed {seed}: F_M = {classical}, oracle = {oracle}");
        worst_rel = worst_rel.max(rel);
    }
    println!("A9 pass: 100 POVM triples, F_M ≤ F_Q throughout, worst finite-difference deviation {worst_rel:.2e} relative");
}

#[test]
fn a10_fisher_information_inequalities_hold_on_random_instances() {
    let structure = HilbertStructure::new(vec![2, 2]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4321);

    // convexity of F_Q under mixing
    for seed in 0..40u64 {
        let a = random_mixed(&structure, 2, seed).unwrap();
        let b = random_mixed(&structure, 2, seed + 1000).unwrap();
        let g = random_hermitian(4, &mut rng);
        let t = rng.gen::<f64>() * 0.98 + 0.01;
        let mixed = mix(&[a.clone(), b.clone()], &[t, 1.0 - t]).unwrap();
        let lhs = quantum_fisher(&mixed, &g).unwrap();
        let rhs =
            t * quantum_fisher(&a, &g).unwrap() + (1.0 - t) * quantum_fisher(&b, &g).unwrap();
        assert!(lhs <= rhs + 1e-8, "convexity seed {seed}: {lhs} > {rhs}");
    }

    // variances add over product states
    for seed in 0..40u64 {
        let rho = random_separable(&structure, 1, seed).unwrap();
        let set = spin_set(2).unwrap();
        let blocks: Vec<Vec<f64>> = (0..2)
            .map(|_| (0..3).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect())
            .collect();
        let c = CoefficientVector::new(blocks).unwrap();
        let generator = collective_generator(&set, &c).unwrap();
        let total = variance(&rho, &generator);
        let mut locals = 0.0;
        for (party, block) in c.blocks().iter().enumerate() {
            let local = set.local_combination(party, block).unwrap();
            let marginal = partial_trace(&rho, party).unwrap();
            let m = marginal.expectation(&local).unwrap().re;
            let s = marginal.expectation(&(&local * &local)).unwrap().re;
            locals += s - m * m;
        }
        assert!((total - locals).abs() < 1e-9, "additivity seed {seed}");
    }

    // concavity of the variance under mixing
    for seed in 0..40u64 {
        let a = random_mixed(&structure, 2, 2 * seed).unwrap();
        let b = random_mixed(&structure, 2, 2 * seed + 1).unwrap();
        let g = random_hermitian(4, &mut rng);
        let t = rng.gen::<f64>() * 0.98 + 0.01;
        let mixed = mix(&[a.clone(), b.clone()], &[t, 1.0 - t]).unwrap();
        assert!(
            variance(&mixed, &g) >= t * variance(&a, &g) + (1.0 - t) * variance(&b, &g) - 1e-8,
            "concavity seed {seed}"
        );
    }

    // F_Q ≤ 4 Var, tight on pure states
    for seed in 0..40u64 {
        let g = random_hermitian(4, &mut rng);
        let mixed = random_mixed(&structure, 3, seed).unwrap();
        assert!(
            quantum_fisher(&mixed, &g).unwrap() <= 4.0 * variance(&mixed, &g) + 1e-8,
            "variance bound seed {seed}"
        );
        let pure = random_pure(&structure, seed).unwrap().to_density();
        let gap = quantum_fisher(&pure, &g).unwrap() - 4.0 * variance(&pure, &g);
        assert!(gap.abs() <= 1e-8, "pure equality seed {seed}: gap {gap:e}");
    }

    println!("A10 pass: convexity, variance additivity, variance concavity, and the 4·Var ceiling hold on 160 seeded instances");
}
