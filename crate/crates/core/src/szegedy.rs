//! Szegedy walk with queries on the complete graph.
//!
//! The bipartite duplication of `K_N` gives `N^2` amplitudes `|i,j>` with `i`
//! a vertex of the original graph and `j` a vertex of the copy, stored
//! row-major. One step is `R_B R_A R_M` with the uniform stochastic matrix
//! `p_ij = (1 - delta_ij) / (N - 1)`; diagonal states `|i,i>` are kept and
//! simply negated by both reflectors.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::complete_loop::CLOSURE_TOL;
use crate::error::{Error, Result};
use crate::smallmat::{orthonormality_defect, projection_residual, solve, CMat, CVec, ORTHONORMAL_TOL};
use crate::walk::{check_time, validate_labels, Eigenpair, Family, ModelSpec, SpectralData, Walk};

/// Offset of the inverse-iteration shift from the eigenvalue it targets.
const SHIFT_OFFSET: f64 = 1e-10;
const INVERSE_ITERATIONS: usize = 4;

/// One of the three reflections making up a Szegedy step.
pub type Reflection = fn(&SzegedyModel, &mut [Complex64]) -> Result<()>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SzegedyModel {
    n: usize,
    sender: usize,
    receiver: usize,
}

impl SzegedyModel {
    pub fn new(n: usize, sender: usize, receiver: usize) -> Result<Self> {
        validate_labels(Family::Szegedy, n, sender, receiver)?;
        Ok(SzegedyModel { n, sender, receiver })
    }

    /// The query, row reflection and column reflection, with names.
    pub const REFLECTIONS: [(&'static str, Reflection); 3] = [
        ("query", SzegedyModel::apply_query),
        ("row reflection", SzegedyModel::apply_row_reflection),
        ("column reflection", SzegedyModel::apply_column_reflection),
    ];

    pub fn n(&self) -> usize {
        self.n
    }

    /// Index of `|i,j>` for 1-based labels.
    pub fn index(&self, i: usize, j: usize) -> usize {
        (i - 1) * self.n + (j - 1)
    }

    /// `sqrt(N^4 - 10N^3 + 35N^2 - 50N + 33)`
    pub fn delta(&self) -> f64 {
        let n = self.n as f64;
        (n.powi(4) - 10.0 * n.powi(3) + 35.0 * n * n - 50.0 * n + 33.0).sqrt()
    }

    /// Non-trivial eigenphases `[omega_1, omega_2, omega_3]`.
    pub fn omegas(&self) -> [f64; 3] {
        let n = self.n as f64;
        let m2 = (n - 1.0) * (n - 1.0);
        let d = self.delta();
        let acos = |x: f64| x.clamp(-1.0, 1.0).acos();
        [acos((4.0 - n + d) / m2), acos((4.0 - n - d) / m2), acos((4.0 * n - n * n - 5.0) / m2)]
    }

    pub fn omega1(&self) -> f64 {
        self.omegas()[0]
    }

    /// `R_M`: phase flip on rows `s` and `r`.
    pub fn apply_query(&self, amplitudes: &mut [Complex64]) -> Result<()> {
        self.check_state(amplitudes)?;
        let n = self.n;
        for label in [self.sender, self.receiver] {
            amplitudes[(label - 1) * n..label * n].iter_mut().for_each(|a| *a = -*a);
        }
        Ok(())
    }

    /// `R_A = 2 sum_i |Phi_i><Phi_i| - I`, a reflection inside each row.
    pub fn apply_row_reflection(&self, amplitudes: &mut [Complex64]) -> Result<()> {
        self.check_state(amplitudes)?;
        let n = self.n;
        let scale = 2.0 / (n - 1) as f64;
        for (i, row) in amplitudes.chunks_exact_mut(n).enumerate() {
            let off_diag = row.iter().sum::<Complex64>() - row[i];
            let mean2 = off_diag * scale;
            row.iter_mut().for_each(|a| *a = mean2 - *a);
            row[i] -= mean2;
        }
        Ok(())
    }

    /// `R_B = 2 sum_j |Psi_j><Psi_j| - I`, a reflection inside each column.
    /// Column sums are accumulated in row order to stay cache friendly.
    pub fn apply_column_reflection(&self, amplitudes: &mut [Complex64]) -> Result<()> {
        self.check_state(amplitudes)?;
        let n = self.n;
        let scale = 2.0 / (n - 1) as f64;
        let mut mean2 = vec![Complex64::new(0.0, 0.0); n];
        for (i, row) in amplitudes.chunks_exact(n).enumerate() {
            for (acc, a) in mean2.iter_mut().zip(row) {
                *acc += a;
            }
            mean2[i] -= row[i];
        }
        mean2.iter_mut().for_each(|m| *m *= scale);
        for (i, row) in amplitudes.chunks_exact_mut(n).enumerate() {
            for (a, m) in row.iter_mut().zip(&mean2) {
                *a = m - *a;
            }
            row[i] -= mean2[i];
        }
        Ok(())
    }

    /// `Phi_i` for the 1-based row label `i`.
    fn phi(&self, i: usize) -> CVec {
        let mut v = CVec::zeros(self.dimension());
        let w = Complex64::new(1.0 / ((self.n - 1) as f64).sqrt(), 0.0);
        for j in (1..=self.n).filter(|&j| j != i) {
            v[self.index(i, j)] = w;
        }
        v
    }

    fn unmarked(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.n).filter(move |&i| i != self.sender && i != self.receiver)
    }

    fn build_alpha_basis(&self) -> Vec<CVec> {
        let (s, r) = (self.sender, self.receiver);
        let n = self.n as f64;
        let dim = self.dimension();
        let real = |x: f64| Complex64::new(x, 0.0);

        let mut a3 = CVec::zeros(dim);
        let w3 = real(1.0 / ((n - 2.0) * (n - 3.0)).sqrt());
        for i in self.unmarked() {
            for j in self.unmarked().filter(|&j| j != i) {
                a3[self.index(i, j)] = w3;
            }
        }

        let row_tail = |row: usize, other: usize| {
            let mut v = CVec::zeros(dim);
            let w = real(1.0 / ((n - 1.0) * (n - 2.0)).sqrt());
            for j in self.unmarked() {
                v[self.index(row, j)] = w;
            }
            v[self.index(row, other)] = real(-((n - 2.0) / (n - 1.0)).sqrt());
            v
        };

        let column = |col: usize| {
            let mut v = CVec::zeros(dim);
            let w = real(1.0 / (n - 2.0).sqrt());
            for i in self.unmarked() {
                v[self.index(i, col)] = w;
            }
            v
        };

        vec![self.phi(s), self.phi(r), a3, row_tail(s, r), row_tail(r, s), column(s), column(r)]
    }

    /// Closed-form eigenvector of the effective operator for eigenvalue 1.
    pub fn chi0(&self) -> CVec {
        let n = self.n as f64;
        let k = n * (n - 3.0);
        let a = FRAC_1_SQRT_2 * ((k + 2.0) / (k + 3.0)).sqrt();
        let b = 1.0 / (2.0 * (k + 3.0)).sqrt();
        CVec::from_real(&[a, -a, 0.0, 0.0, 0.0, b, -b]).expect("finite")
    }
}

/// Eigenvector of `m` for the simple eigenvalue `lambda` by shifted inverse
/// iteration. The result is normalized with its largest component real and
/// positive.
pub(crate) fn inverse_iteration(m: &CMat, lambda: Complex64) -> Result<CVec> {
    let shifted = m.shift(lambda * (1.0 + SHIFT_OFFSET))?;
    let dim = m.rows();
    let start: Vec<Complex64> = (0..dim).map(|k| Complex64::new(1.0, 0.25 * k as f64 - 0.5)).collect();
    let mut x = CVec::new(start)?;
    for _ in 0..INVERSE_ITERATIONS {
        x = solve(&shifted, &x)?;
        let norm = x.norm();
        x = x.scale(Complex64::new(1.0 / norm, 0.0));
    }
    let pivot = x.as_slice().iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).expect("non-empty");
    Ok(x.scale(pivot.conj() / pivot.norm()))
}

impl Walk for SzegedyModel {
    fn spec(&self) -> ModelSpec {
        ModelSpec { family: Family::Szegedy, n: self.n, sender: self.sender, receiver: self.receiver }
    }

    fn dimension(&self) -> usize {
        self.n * self.n
    }

    fn steps_per_effective(&self) -> usize {
        1
    }

    fn step_in_place(&self, amplitudes: &mut [Complex64]) -> Result<()> {
        self.apply_query(amplitudes)?;
        self.apply_row_reflection(amplitudes)?;
        self.apply_column_reflection(amplitudes)
    }

    /// `Phi_s`
    fn initial_state(&self) -> CVec {
        self.phi(self.sender)
    }

    /// `Phi_r`
    fn target_state(&self) -> CVec {
        self.phi(self.receiver)
    }

    fn alpha_basis(&self) -> Result<Vec<CVec>> {
        let basis = self.build_alpha_basis();
        let defect = orthonormality_defect(&basis)?;
        if defect > ORTHONORMAL_TOL {
            return Err(Error::Consistency { check: "alpha basis orthonormality", residual: defect });
        }
        for b in &basis {
            let residual = projection_residual(&basis, &self.step(b)?)?;
            if residual > CLOSURE_TOL {
                return Err(Error::Consistency { check: "alpha basis closure", residual });
            }
        }
        Ok(basis)
    }

    fn effective(&self) -> CMat {
        let n = self.n as f64;
        let m = n - 1.0;
        let (p2, p3) = ((n - 2.0).sqrt(), (n - 3.0).sqrt());
        let m2 = m * m;
        let m32 = m.powf(1.5);
        let m52 = m.powf(2.5);

        let diag12 = (n - 3.0) / m;
        let cross12 = -2.0 * (n - 2.0) / m2;
        let to3 = 2.0 * (n - 3.0).powf(1.5) * p2 / m52;
        let tail = 2.0 * p2 / m2;
        let big = 4.0 * (n - 2.0).powf(1.5) / m52;
        let small = 2.0 * (n - 3.0) * p2 / m52;
        let from12 = -2.0 * ((n - 3.0) * (n - 2.0) / m.powi(3)).sqrt();
        let c33 = (n - 5.0).powi(2) / m2;
        let c34 = 2.0 * p3 / m32;
        let c36 = 2.0 * (n - 5.0) * p3 / m2;
        let c43 = -2.0 * p3 * (n + 1.0) / m52;
        let c45 = 2.0 / m2;
        let c46 = -4.0 / m52;
        let c47 = 2.0 * (n - 3.0) * n / m52;
        let c62 = -2.0 * ((n - 2.0) / m.powi(3)).sqrt();
        let c63 = 2.0 * (n - 3.0).powf(1.5) / m2;
        let c65 = -2.0 * (n - 2.0) / m32;
        let c66 = -(n - 3.0).powi(2) / m2;
        let c67 = 2.0 * (n - 3.0) / m2;

        CMat::from_real_rows(&[
            [diag12, cross12, to3, 0.0, tail, big, small],
            [cross12, diag12, to3, tail, 0.0, small, big],
            [from12, from12, c33, c34, c34, c36, c36],
            [0.0, -tail, c43, -diag12, c45, c46, c47],
            [-tail, 0.0, c43, c45, -diag12, c47, c46],
            [0.0, c62, c63, 0.0, c65, c66, c67],
            [c62, 0.0, c63, c65, 0.0, c67, c66],
        ])
        .expect("7x7")
    }

    /// Closed-form eigenphases and `chi_0`; the remaining eigenvectors are
    /// computed numerically on the 7x7 operator.
    fn spectrum(&self) -> SpectralData {
        let [w1, w2, w3] = self.omegas();
        let u = self.effective();
        let mut eigenpairs = vec![Eigenpair { value: Complex64::new(1.0, 0.0), vector: self.chi0() }];
        for w in [w1, w2, w3] {
            for sign in [1.0, -1.0] {
                let value = Complex64::from_polar(1.0, sign * w);
                let vector = inverse_iteration(&u, value).expect("shift keeps the system regular");
                eigenpairs.push(Eigenpair { value, vector });
            }
        }
        SpectralData { omega: w1, phases: vec![0.0, w1, w2, w3], delta: Some(self.delta()), eigenpairs }
    }

    /// `sin^4(omega_1 t / 2)`, accurate to `O(N^-1/2)`.
    fn fidelity_analytic(&self, t: i64) -> Result<f64> {
        let t = check_time(t)?;
        Ok((self.omega1() * t as f64 / 2.0).sin().powi(4))
    }

    fn transfer_time(&self) -> u64 {
        (PI / self.omega1()).round() as u64
    }
}
