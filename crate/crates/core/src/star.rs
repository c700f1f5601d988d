//! Coined walk on the star graph with `N` external vertices.
//!
//! The full space has dimension `2N`: indices `0..N` hold `|j,0>` (particle
//! on external vertex `j`, single coin state) and `N..2N` hold `|0,j>`
//! (particle on the centre, coin pointing at `j`). Two steps of the walk
//! leave the span of `{|s,0>, |r,0>, sum_{j != s,r} |j,0>}` invariant.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::Result;
use crate::smallmat::{CMat, CVec};
use crate::walk::{check_time, even_transfer_time, validate_labels, Eigenpair, Family, ModelSpec, SpectralData, Walk};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StarModel {
    n: usize,
    sender: usize,
    receiver: usize,
}

impl StarModel {
    /// `sender` and `receiver` are 1-based external vertex labels.
    pub fn new(n: usize, sender: usize, receiver: usize) -> Result<Self> {
        validate_labels(Family::Star, n, sender, receiver)?;
        Ok(StarModel { n, sender, receiver })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Index of `|j,0>` for the 1-based label `j`.
    pub fn outer_index(&self, label: usize) -> usize {
        label - 1
    }

    /// Index of `|0,j>` for the 1-based label `j`.
    pub fn centre_index(&self, label: usize) -> usize {
        self.n + label - 1
    }

    /// `omega = arccos((N - 4) / N)`
    pub fn omega(&self) -> f64 {
        let n = self.n as f64;
        ((n - 4.0) / n).acos()
    }
}

impl Walk for StarModel {
    fn spec(&self) -> ModelSpec {
        ModelSpec { family: Family::Star, n: self.n, sender: self.sender, receiver: self.receiver }
    }

    fn dimension(&self) -> usize {
        2 * self.n
    }

    fn steps_per_effective(&self) -> usize {
        2
    }

    /// Outer amplitudes hop to the centre (sign flip on the marked vertices);
    /// centre amplitudes are scattered by the Grover coin, `(2/N) sum - self`.
    fn step_in_place(&self, amplitudes: &mut [Complex64]) -> Result<()> {
        self.check_state(amplitudes)?;
        let n = self.n;
        let (outer, centre) = amplitudes.split_at_mut(n);
        let mean2 = centre.iter().sum::<Complex64>() * (2.0 / n as f64);
        for (x, y) in outer.iter_mut().zip(centre.iter_mut()) {
            let hop = *x;
            *x = mean2 - *y;
            *y = hop;
        }
        let (s, r) = (self.sender - 1, self.receiver - 1);
        centre[s] = -centre[s];
        centre[r] = -centre[r];
        Ok(())
    }

    /// `|s,0>`
    fn initial_state(&self) -> CVec {
        CVec::unit(self.dimension(), self.outer_index(self.sender))
    }

    /// `|r,0>`
    fn target_state(&self) -> CVec {
        CVec::unit(self.dimension(), self.outer_index(self.receiver))
    }

    fn alpha_basis(&self) -> Result<Vec<CVec>> {
        let mut rest = CVec::zeros(self.dimension());
        let w = Complex64::new(1.0 / ((self.n - 2) as f64).sqrt(), 0.0);
        for label in (1..=self.n).filter(|&j| j != self.sender && j != self.receiver) {
            rest[self.outer_index(label)] = w;
        }
        Ok(vec![self.initial_state(), self.target_state(), rest])
    }

    fn effective(&self) -> CMat {
        let n = self.n as f64;
        let a = 1.0 - 2.0 / n;
        let b = -2.0 / n;
        let c = 2.0 * (n - 2.0).sqrt() / n;
        let d = 1.0 - 4.0 / n;
        CMat::from_real_rows(&[[a, b, c], [b, a, c], [-c, -c, d]]).expect("3x3")
    }

    fn spectrum(&self) -> SpectralData {
        let omega = self.omega();
        let h = FRAC_1_SQRT_2;
        let chi0 = CVec::from_real(&[h, -h, 0.0]).expect("finite");
        let chi = |sign: f64| {
            CVec::new(vec![Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0), Complex64::new(0.0, sign * h)])
                .expect("finite")
        };
        SpectralData {
            omega,
            phases: vec![0.0, omega],
            delta: None,
            eigenpairs: vec![
                Eigenpair { value: Complex64::new(1.0, 0.0), vector: chi0 },
                Eigenpair { value: Complex64::from_polar(1.0, omega), vector: chi(1.0) },
                Eigenpair { value: Complex64::from_polar(1.0, -omega), vector: chi(-1.0) },
            ],
        }
    }

    /// `sin^4(omega k / 2)` at `t = 2k`; zero at odd `t`, where the particle
    /// sits on the centre.
    fn fidelity_analytic(&self, t: i64) -> Result<f64> {
        let t = check_time(t)?;
        if t % 2 == 1 {
            return Ok(0.0);
        }
        let k = (t / 2) as f64;
        Ok((self.omega() * k / 2.0).sin().powi(4))
    }

    fn transfer_time(&self) -> u64 {
        even_transfer_time(self.omega(), |t| self.fidelity_analytic(t as i64).unwrap_or(0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smallmat::{matvec, orthonormality_defect, projection_residual, unitarity_defect};
    use crate::Error;

    fn star(n: usize) -> StarModel {
        StarModel::new(n, 1, 2).unwrap()
    }

    fn re(xs: &CVec) -> Vec<f64> {
        xs.as_slice().iter().map(|z| z.re).collect()
    }

    #[test]
    fn model_invariants() {
        assert!(StarModel::new(2, 1, 2).is_err());
        assert!(StarModel::new(5, 3, 3).is_err());
        assert!(StarModel::new(5, 1, 6).is_err());
    }

    #[test]
    fn sender_hops_to_centre_with_sign_flip() {
        let m = StarModel::new(6, 2, 5).unwrap();
        let out = m.step(&m.initial_state()).unwrap();
        assert_eq!(out, CVec::unit(12, m.centre_index(2)).scale(Complex64::new(-1.0, 0.0)));
    }

    #[test]
    fn unmarked_vertex_hops_to_centre() {
        let m = StarModel::new(6, 2, 5).unwrap();
        let out = m.step(&CVec::unit(12, m.outer_index(4))).unwrap();
        assert_eq!(out, CVec::unit(12, m.centre_index(4)));
    }

    #[test]
    fn centre_state_scatters() {
        let m = star(4);
        let out = m.step(&CVec::unit(8, m.centre_index(1))).unwrap();
        assert_eq!(re(&out), vec![-0.5, 0.5, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn step_rejects_wrong_dimension() {
        assert_eq!(star(4).step(&CVec::zeros(7)), Err(Error::StateDimension { expected: 8, found: 7 }));
    }

    #[test]
    fn alpha_basis_small_and_closed() {
        let m = StarModel::new(3, 1, 2).unwrap();
        let basis = m.alpha_basis().unwrap();
        assert_eq!(basis[2], CVec::unit(6, m.outer_index(3)));

        for n in [3, 4, 10, 57, 100] {
            let m = star(n);
            let basis = m.alpha_basis().unwrap();
            assert!(orthonormality_defect(&basis).unwrap() <= 1e-12);
            let u2 = m.step(&m.step(&basis[0]).unwrap()).unwrap();
            assert!(projection_residual(&basis, &u2).unwrap() <= 1e-12, "N = {n}");
        }
    }

    #[test]
    fn effective_matrix_values() {
        let m = star(4).effective();
        let h = FRAC_1_SQRT_2;
        let expected = CMat::from_real_rows(&[[0.5, -0.5, h], [-0.5, 0.5, h], [-h, -h, 0.0]]).unwrap();
        assert!(m.sub(&expected).unwrap().max_abs() < 1e-15);
        let col = matvec(&m, &CVec::unit(3, 0)).unwrap();
        assert!((col[2].re + h).abs() < 1e-15);

        assert!((star(100).effective()[(0, 0)].re - 0.98).abs() < 1e-15);
        for n in 3..=200 {
            assert!(unitarity_defect(&star(n).effective()).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn spectrum_values() {
        assert!((star(4).omega() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((star(100).omega() - 0.96f64.acos()).abs() < 1e-15);
        assert!((star(100).omega() - 0.283_794_109_208_328).abs() < 1e-14);
        for n in [3, 7, 100, 1000] {
            let m = star(n);
            let u = m.effective();
            for p in m.spectrum().eigenpairs {
                let lhs = matvec(&u, &p.vector).unwrap();
                let rhs = p.vector.scale(p.value);
                assert!(lhs.sub(&rhs).unwrap().max_abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn analytic_fidelity() {
        let m = star(100);
        assert_eq!(m.fidelity_analytic(0).unwrap(), 0.0);
        assert_eq!(m.fidelity_analytic(21).unwrap(), 0.0);
        assert!((m.fidelity_analytic(22).unwrap() - 0.999_802_856_989_952_2).abs() < 1e-12);
        assert_eq!(m.fidelity_analytic(-2), Err(Error::NegativeTime(-2)));
    }

    #[test]
    fn transfer_times() {
        assert_eq!(star(100).transfer_time(), 22);
        assert_eq!(star(4).transfer_time(), 4);
        assert_eq!(star(10_000).transfer_time(), 222);
        assert_eq!(star(3).transfer_time(), 4);
        assert_eq!(star(25).transfer_time(), 10);
    }
}
