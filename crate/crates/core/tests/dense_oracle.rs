mod common;

use common::{apply, complete_loop_unitary, matmul, star_unitary, szegedy_unitary, Dense};
use num_complex::Complex64;
use pst_core::{CVec, Family, Walk, WalkModel};

fn dense_for(model: &WalkModel) -> Dense {
    let spec = model.spec();
    let (n, s, r) = (spec.n, spec.sender - 1, spec.receiver - 1);
    match spec.family {
        Family::Star => star_unitary(n, s, r),
        Family::CompleteLoops => complete_loop_unitary(n, s, r),
        Family::Szegedy => szegedy_unitary(n, s, r),
    }
}

fn real_parts(v: &CVec) -> Vec<f64> {
    v.as_slice().iter().map(|z| z.re).collect()
}

const CASES: &[(Family, usize, usize, usize)] = &[
    (Family::Star, 3, 1, 2),
    (Family::Star, 7, 4, 2),
    (Family::Star, 12, 12, 5),
    (Family::CompleteLoops, 5, 1, 2),
    (Family::CompleteLoops, 7, 3, 6),
    (Family::Szegedy, 5, 1, 2),
    (Family::Szegedy, 7, 6, 3),
];

#[test]
fn matrix_free_step_matches_dense_operator() {
    for &(family, n, s, r) in CASES {
        let model = WalkModel::new(family, n, s, r).unwrap();
        let dense = dense_for(&model);
        let dim = model.dimension();
        for k in 0..dim {
            let got = model.step(&CVec::unit(dim, k)).unwrap();
            assert!(got.as_slice().iter().all(|z| z.im == 0.0));
            let expected = apply(&dense, &real_parts(&CVec::unit(dim, k)));
            for (a, b) in real_parts(&got).iter().zip(&expected) {
                assert!((a - b).abs() < 1e-14, "{family} N={n} column {k}");
            }
        }
    }
}

#[test]
fn closed_form_effective_matches_dense_gram() {
    for &(family, n, s, r) in CASES {
        let model = WalkModel::new(family, n, s, r).unwrap();
        let mut dense = dense_for(&model);
        if model.steps_per_effective() == 2 {
            dense = matmul(&dense, &dense);
        }
        let basis: Vec<Vec<f64>> = model.alpha_basis().unwrap().iter().map(real_parts).collect();
        let u_eff = model.effective();
        for (j, bj) in basis.iter().enumerate() {
            let moved = apply(&dense, bj);
            for (i, bi) in basis.iter().enumerate() {
                let g: f64 = bi.iter().zip(&moved).map(|(a, b)| a * b).sum();
                assert!(
                    (g - u_eff[(i, j)].re).abs() < 1e-12 && u_eff[(i, j)].im == 0.0,
                    "{family} N={n} entry ({i},{j}): {g} vs {}",
                    u_eff[(i, j)].re
                );
            }
        }
    }
}

#[test]
fn dense_operators_are_orthogonal() {
    for &(family, n, s, r) in CASES {
        let model = WalkModel::new(family, n, s, r).unwrap();
        let u = dense_for(&model);
        let d = u.len();
        for i in 0..d {
            for j in 0..d {
                let g: f64 = (0..d).map(|k| u[k][i] * u[k][j]).sum();
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((g - e).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn complex_states_evolve_linearly() {
    let model = WalkModel::new(Family::Szegedy, 6, 2, 4).unwrap();
    let dense = dense_for(&model);
    let dim = model.dimension();
    let v = CVec::new((0..dim).map(|k| Complex64::new((k as f64).sin(), (k as f64 * 0.3).cos())).collect()).unwrap();
    let got = model.step(&v).unwrap();
    let re: Vec<f64> = v.as_slice().iter().map(|z| z.re).collect();
    let im: Vec<f64> = v.as_slice().iter().map(|z| z.im).collect();
    let (ure, uim) = (apply(&dense, &re), apply(&dense, &im));
    for k in 0..dim {
        assert!((got[k] - Complex64::new(ure[k], uim[k])).norm() < 1e-14);
    }
}
