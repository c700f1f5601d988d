//! Coined walk on the complete graph with a self-loop on every vertex.
//!
//! States live on `N^2` amplitudes `|i,j>` (position `i`, coin `j`) stored
//! row-major, so the Grover coin is a per-row update and the flip-flop shift
//! `|i,j> -> |j,i>` is a transpose. Two steps leave a five-dimensional
//! subspace containing `|s> (x) |psi_S>` and `|r> (x) |psi_S>` invariant.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::smallmat::{orthonormality_defect, projection_residual, CMat, CVec, ORTHONORMAL_TOL};
use crate::walk::{check_time, even_transfer_time, validate_labels, Eigenpair, Family, ModelSpec, SpectralData, Walk};

/// Residual allowed when checking closure of the invariant subspace.
pub const CLOSURE_TOL: f64 = 1e-10;

const TRANSPOSE_BLOCK: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompleteLoopModel {
    n: usize,
    sender: usize,
    receiver: usize,
}

/// The four intermediate vectors completing `alpha_1, alpha_2` to an
/// invariant subspace of the two-step operator, before the eigenvalue-1
/// direction is removed.
#[derive(Debug, Clone)]
pub struct IntermediateBasis {
    pub a3: CVec,
    pub a4: CVec,
    pub a5: CVec,
    pub a6: CVec,
}

impl CompleteLoopModel {
    pub fn new(n: usize, sender: usize, receiver: usize) -> Result<Self> {
        validate_labels(Family::CompleteLoops, n, sender, receiver)?;
        Ok(CompleteLoopModel { n, sender, receiver })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Index of `|i,j>` for 1-based position `i` and coin `j`.
    pub fn index(&self, i: usize, j: usize) -> usize {
        (i - 1) * self.n + (j - 1)
    }

    pub fn omega(&self) -> f64 {
        let n = self.n as f64;
        ((n - 4.0) / n).acos()
    }

    fn unmarked(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.n).filter(move |&i| i != self.sender && i != self.receiver)
    }

    /// `|i> (x) |psi_S>`
    fn row_state(&self, i: usize) -> CVec {
        let mut v = CVec::zeros(self.dimension());
        let w = Complex64::new(1.0 / (self.n as f64).sqrt(), 0.0);
        for j in 1..=self.n {
            v[self.index(i, j)] = w;
        }
        v
    }

    pub fn intermediate_basis(&self) -> IntermediateBasis {
        let (s, r) = (self.sender, self.receiver);
        let n = self.n as f64;
        let dim = self.dimension();

        let mut a3 = CVec::zeros(dim);
        let w3 = Complex64::new(1.0 / (2.0 * (n - 2.0)).sqrt(), 0.0);
        for i in self.unmarked() {
            a3[self.index(i, s)] = w3;
            a3[self.index(i, r)] = w3;
        }

        let mut a4 = CVec::zeros(dim);
        let w4 = Complex64::new(1.0 / (n - 2.0), 0.0);
        for i in self.unmarked() {
            for j in self.unmarked() {
                a4[self.index(i, j)] = w4;
            }
        }

        let edge = |row: usize| {
            let mut v = self.row_state(row).scale(Complex64::new((2.0 / (n - 2.0)).sqrt(), 0.0));
            let w = (n / (2.0 * (n - 2.0))).sqrt();
            v[self.index(row, s)] -= w;
            v[self.index(row, r)] -= w;
            v
        };

        IntermediateBasis { a3, a4, a5: edge(s), a6: edge(r) }
    }

    /// The eigenvalue-1 vector of the two-step operator that lies in the
    /// intermediate span but is orthogonal to `alpha_1` and `alpha_2`.
    pub fn discarded_eigenvector(&self) -> CVec {
        let n = self.n as f64;
        combine(&self.intermediate_basis(), [1.0 / n.sqrt(), ((n - 2.0) / (2.0 * n)).sqrt(), 0.5, 0.5])
    }

    /// Alpha basis without the orthonormality and closure checks.
    fn build_alpha_basis(&self) -> Vec<CVec> {
        let n = self.n as f64;
        let ib = self.intermediate_basis();
        let a3 = combine(&ib, [((n - 2.0) / n).sqrt(), -(2.0 / n).sqrt(), 0.0, 0.0]);
        // (a5' - a6') / sqrt(2), built from the intermediate vectors directly
        let a4 = combine(&ib, [0.0, 0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2]);
        let a5 = combine(&ib, [1.0 / n.sqrt(), ((n - 2.0) / (2.0 * n)).sqrt(), -0.5, -0.5]);
        vec![self.initial_state(), self.target_state(), a3, a4, a5]
    }

    fn two_steps(&self, v: &CVec) -> Result<CVec> {
        let mut out = v.clone();
        self.step_in_place(out.as_mut_slice())?;
        self.step_in_place(out.as_mut_slice())?;
        Ok(out)
    }
}

fn combine(ib: &IntermediateBasis, k: [f64; 4]) -> CVec {
    let mut v = CVec::zeros(ib.a3.dim());
    for (c, b) in k.iter().zip([&ib.a3, &ib.a4, &ib.a5, &ib.a6]) {
        if *c != 0.0 {
            v.axpy(Complex64::new(*c, 0.0), b).expect("same dimension");
        }
    }
    v
}

/// Blocked in-place transpose of a square row-major matrix.
fn transpose_in_place(a: &mut [Complex64], n: usize) {
    for bi in (0..n).step_by(TRANSPOSE_BLOCK) {
        for bj in (bi..n).step_by(TRANSPOSE_BLOCK) {
            for i in bi..(bi + TRANSPOSE_BLOCK).min(n) {
                let start = if bi == bj { i + 1 } else { bj };
                for j in start..(bj + TRANSPOSE_BLOCK).min(n) {
                    a.swap(i * n + j, j * n + i);
                }
            }
        }
    }
}

impl Walk for CompleteLoopModel {
    fn spec(&self) -> ModelSpec {
        ModelSpec { family: Family::CompleteLoops, n: self.n, sender: self.sender, receiver: self.receiver }
    }

    fn dimension(&self) -> usize {
        self.n * self.n
    }

    fn steps_per_effective(&self) -> usize {
        2
    }

    fn step_in_place(&self, amplitudes: &mut [Complex64]) -> Result<()> {
        self.check_state(amplitudes)?;
        let n = self.n;
        let scale = 2.0 / n as f64;
        for (i, row) in amplitudes.chunks_exact_mut(n).enumerate() {
            let mean2 = row.iter().sum::<Complex64>() * scale;
            let marked = i + 1 == self.sender || i + 1 == self.receiver;
            if marked {
                row.iter_mut().for_each(|a| *a -= mean2);
            } else {
                row.iter_mut().for_each(|a| *a = mean2 - *a);
            }
        }
        transpose_in_place(amplitudes, n);
        Ok(())
    }

    fn initial_state(&self) -> CVec {
        self.row_state(self.sender)
    }

    fn target_state(&self) -> CVec {
        self.row_state(self.receiver)
    }

    /// Fails with [`Error::Consistency`] if the constructed vectors are not
    /// orthonormal or not closed under two steps.
    fn alpha_basis(&self) -> Result<Vec<CVec>> {
        let basis = self.build_alpha_basis();
        let defect = orthonormality_defect(&basis)?;
        if defect > ORTHONORMAL_TOL {
            return Err(Error::Consistency { check: "alpha basis orthonormality", residual: defect });
        }
        for b in &basis {
            let residual = projection_residual(&basis, &self.two_steps(b)?)?;
            if residual > CLOSURE_TOL {
                return Err(Error::Consistency { check: "alpha basis closure", residual });
            }
        }
        Ok(basis)
    }

    fn effective(&self) -> CMat {
        let n = self.n as f64;
        let n2 = n * n;
        let q = (n - 2.0).sqrt();
        let d = (n - 4.0) * (n - 2.0) / n2;
        let o = -2.0 * (n - 4.0) / n2;
        let e = 4.0 * SQRT_2 * (n - 2.0) / n2;
        let f = 2.0 * q / n;
        let g = 2.0 * SQRT_2 * (n - 4.0) * q / n2;
        let h = 4.0 * (n - 4.0) * q / n2;
        CMat::from_real_rows(&[
            [d, o, e, -f, g],
            [o, d, e, f, g],
            [e, e, (n - 4.0).powi(2) / n2, 0.0, -h],
            [f, -f, 0.0, (n - 4.0) / n, 0.0],
            [-g, -g, h, 0.0, (n2 - 16.0 * n + 32.0) / n2],
        ])
        .expect("5x5")
    }

    fn spectrum(&self) -> SpectralData {
        let omega = self.omega();
        let h = FRAC_1_SQRT_2;
        let q = 0.5 * FRAC_1_SQRT_2;
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let vec = |v: Vec<Complex64>| CVec::new(v).expect("finite");
        let mut eigenpairs =
            vec![Eigenpair { value: c(1.0, 0.0), vector: CVec::from_real(&[0.5, 0.5, h, 0.0, 0.0]).expect("finite") }];
        for sign in [1.0, -1.0] {
            eigenpairs.push(Eigenpair {
                value: Complex64::from_polar(1.0, sign * omega),
                vector: vec(vec![c(0.5, 0.0), c(-0.5, 0.0), c(0.0, 0.0), c(0.0, -sign * h), c(0.0, 0.0)]),
            });
        }
        for sign in [1.0, -1.0] {
            eigenpairs.push(Eigenpair {
                value: Complex64::from_polar(1.0, sign * 2.0 * omega),
                vector: vec(vec![c(q, 0.0), c(q, 0.0), c(-0.5, 0.0), c(0.0, 0.0), c(0.0, sign * h)]),
            });
        }
        SpectralData { omega, phases: vec![0.0, omega, 2.0 * omega], delta: None, eigenpairs }
    }

    /// `cos^2(omega k) sin^4(omega k / 2)` at `t = 2k`. Odd steps report 0;
    /// the closed form says nothing about them.
    fn fidelity_analytic(&self, t: i64) -> Result<f64> {
        let t = check_time(t)?;
        if t % 2 == 1 {
            return Ok(0.0);
        }
        let wk = self.omega() * (t / 2) as f64;
        Ok(wk.cos().powi(2) * (wk / 2.0).sin().powi(4))
    }

    fn analytic_defined_at(&self, t: u64) -> bool {
        t.is_multiple_of(2)
    }

    fn transfer_time(&self) -> u64 {
        even_transfer_time(self.omega(), |t| self.fidelity_analytic(t as i64).unwrap_or(0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smallmat::{matvec, unitarity_defect};

    fn model(n: usize) -> CompleteLoopModel {
        CompleteLoopModel::new(n, 1, 2).unwrap()
    }

    #[test]
    fn model_invariants() {
        assert!(CompleteLoopModel::new(4, 1, 2).is_err());
        assert!(CompleteLoopModel::new(5, 2, 2).is_err());
    }

    #[test]
    fn transpose_matches_naive() {
        for n in [1, 5, 31, 32, 33, 70] {
            let a: Vec<Complex64> = (0..n * n).map(|k| Complex64::new(k as f64, -(k as f64))).collect();
            let mut b = a.clone();
            transpose_in_place(&mut b, n);
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(b[i * n + j], a[j * n + i]);
                }
            }
        }
    }

    #[test]
    fn uniform_unmarked_row_moves_to_column() {
        let m = model(5);
        let v = m.row_state(4);
        let out = m.step(&v).unwrap();
        let w = 1.0 / 5f64.sqrt();
        for i in 1..=5 {
            for j in 1..=5 {
                let expected = if j == 4 { w } else { 0.0 };
                assert!((out[m.index(i, j)] - Complex64::new(expected, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn single_basis_state_step() {
        let m = CompleteLoopModel::new(6, 2, 5).unwrap();
        let (i0, j0) = (3, 4);
        let out = m.step(&CVec::unit(36, m.index(i0, j0))).unwrap();
        for i in 1..=6 {
            for j in 1..=6 {
                let mut expected = if j == i0 { 2.0 / 6.0 } else { 0.0 };
                if (i, j) == (j0, i0) {
                    expected -= 1.0;
                }
                assert!((out[m.index(i, j)].re - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn initial_state_layout() {
        let m = model(7);
        let init = m.initial_state();
        assert!((init.norm() - 1.0).abs() < 1e-15);
        assert_eq!(init.inner(&m.target_state()).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(init.as_slice().iter().filter(|z| z.norm() > 0.0).count(), 7);
    }

    #[test]
    fn alpha_basis_is_orthonormal_and_closed() {
        for n in [5, 6, 30, 64] {
            let basis = model(n).alpha_basis().unwrap();
            assert!(orthonormality_defect(&basis).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn discarded_vector_is_orthogonal_fixed_point() {
        let m = model(30);
        let chi = m.discarded_eigenvector();
        assert!((chi.norm() - 1.0).abs() < 1e-12);
        for a in [m.initial_state(), m.target_state()] {
            assert!(chi.inner(&a).unwrap().norm() <= 1e-12);
        }
        let moved = m.two_steps(&chi).unwrap();
        assert!(moved.sub(&chi).unwrap().max_abs() <= 1e-12);
    }

    #[test]
    fn effective_entries() {
        let u = model(30).effective();
        assert!((u[(0, 0)].re - 26.0 * 28.0 / 900.0).abs() < 1e-15);
        assert!((u[(3, 0)].re - 2.0 * 28f64.sqrt() / 30.0).abs() < 1e-15);
        for n in 5..=100 {
            assert!(unitarity_defect(&model(n).effective()).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn spectrum_eigen_relations() {
        let m = model(30);
        let sd = m.spectrum();
        assert!((sd.omega - (26.0f64 / 30.0).acos()).abs() < 1e-15);
        assert_eq!(sd.phases[2], 2.0 * sd.phases[1]);
        let u = m.effective();
        for p in &sd.eigenpairs {
            let lhs = matvec(&u, &p.vector).unwrap();
            assert!(lhs.sub(&p.vector.scale(p.value)).unwrap().max_abs() <= 1e-12);
        }
    }

    #[test]
    fn analytic_fidelity() {
        let m = model(30);
        assert_eq!(m.fidelity_analytic(0).unwrap(), 0.0);
        assert!((m.fidelity_analytic(12).unwrap() - 0.999_910_982_285_513).abs() < 1e-12);
        assert!(!m.analytic_defined_at(13));
        assert!(m.fidelity_analytic(-1).is_err());
    }

    #[test]
    fn transfer_times() {
        assert_eq!(model(30).transfer_time(), 12);
        assert_eq!(model(100).transfer_time(), 22);
        // 2*pi/omega = 4.588; F(4) = 0.780 beats F(6) = 0.198
        assert_eq!(model(5).transfer_time(), 4);
    }
}
