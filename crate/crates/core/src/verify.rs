//! Invariant checks for a single model: unitarity, subspace closure, the
//! closed-form effective operator against full-space simulation, spectral
//! relations and norm conservation.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::experiment::{cross_check, run_transfer, Representations};
use crate::smallmat::{det, matvec, orthonormality_defect, projection_residual, unitarity_defect, CMat, CVec};
use crate::walk::{Family, Walk, WalkModel};

pub const UNITARITY_TOL: f64 = 1e-12;
pub const ORTHONORMAL_TOL: f64 = 1e-12;
pub const CLOSURE_TOL: f64 = 1e-10;
pub const EXACT_TOL: f64 = 1e-10;
pub const EIGEN_TOL: f64 = 1e-12;
pub const DET_TOL: f64 = 1e-8;
pub const NORM_TOL: f64 = 1e-12;
/// Constant `C` in the `C / sqrt(N)` bound on the asymptotic Szegedy fidelity.
pub const SZEGEDY_FIDELITY_CONSTANT: f64 = 5.0;

const RANDOM_STATES: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check { name: name.into(), value, tolerance }
    }

    pub fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

/// Uniformly random amplitudes in the unit square, normalized.
pub fn random_state<R: Rng>(dim: usize, rng: &mut R) -> CVec {
    let amps: Vec<Complex64> =
        (0..dim).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    let v = CVec::new(amps).expect("finite");
    let norm = v.norm();
    v.scale(Complex64::new(1.0 / norm, 0.0))
}

/// `<alpha_i| U^p |alpha_j>` from the matrix-free step, `p` being the number
/// of steps per effective application.
pub fn effective_from_simulation(model: &WalkModel, basis: &[CVec]) -> Result<CMat> {
    let k = basis.len();
    let mut m = CMat::zeros(k, k);
    for (j, b) in basis.iter().enumerate() {
        let moved = evolve_effective(model, b)?;
        for (i, a) in basis.iter().enumerate() {
            m[(i, j)] = a.inner(&moved)?;
        }
    }
    Ok(m)
}

fn evolve_effective(model: &WalkModel, v: &CVec) -> Result<CVec> {
    let mut out = v.clone();
    for _ in 0..model.steps_per_effective() {
        model.step_in_place(out.as_mut_slice())?;
    }
    Ok(out)
}

/// Runs every applicable check on `model`. Random states are drawn from a
/// ChaCha8 stream seeded with `seed`.
pub fn run_checks(model: &WalkModel, seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let u_eff = model.effective();
    checks.push(Check::new("effective operator unitarity", unitarity_defect(&u_eff)?, UNITARITY_TOL));

    let basis = model.alpha_basis()?;
    checks.push(Check::new("alpha basis orthonormality", orthonormality_defect(&basis)?, ORTHONORMAL_TOL));
    let mut closure: f64 = 0.0;
    for b in &basis {
        closure = closure.max(projection_residual(&basis, &evolve_effective(model, b)?)?);
    }
    checks.push(Check::new("invariant subspace closure", closure, CLOSURE_TOL));

    let simulated = effective_from_simulation(model, &basis)?;
    checks.push(Check::new(
        "closed-form effective operator vs simulation",
        simulated.sub(&u_eff)?.max_abs(),
        EXACT_TOL,
    ));

    let spectrum = model.spectrum();
    let mut closed_form: f64 = 0.0;
    let mut numeric: f64 = 0.0;
    for (k, pair) in spectrum.eigenpairs.iter().enumerate() {
        let residual = matvec(&u_eff, &pair.vector)?.sub(&pair.vector.scale(pair.value))?.max_abs();
        // only chi_0 has a closed form for Szegedy; the rest are numeric
        if model.family() == Family::Szegedy && k > 0 {
            numeric = numeric.max(residual);
        } else {
            closed_form = closed_form.max(residual);
        }
    }
    checks.push(Check::new("closed-form eigenpairs", closed_form, EIGEN_TOL));
    if model.family() == Family::Szegedy {
        checks.push(Check::new("numeric eigenpairs", numeric, EXACT_TOL));
        let mut worst: f64 = 0.0;
        for pair in &spectrum.eigenpairs {
            worst = worst.max(det(&u_eff.shift(pair.value)?)?.norm());
        }
        checks.push(Check::new("characteristic equation at analytic eigenvalues", worst, DET_TOL));
    }
    if model.family() == Family::CompleteLoops {
        let doubling = (spectrum.phases[2] - 2.0 * spectrum.phases[1]).abs();
        checks.push(Check::new("eigenphase doubling", doubling, 0.0));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut norm_defect: f64 = 0.0;
    for _ in 0..RANDOM_STATES {
        let v = random_state(model.dimension(), &mut rng);
        norm_defect = norm_defect.max((model.step(&v)?.norm() - 1.0).abs());
    }
    checks.push(Check::new("norm conservation", norm_defect, NORM_TOL));

    if let WalkModel::Szegedy(sz) = model {
        let v = random_state(model.dimension(), &mut rng);
        for (name, op) in crate::SzegedyModel::REFLECTIONS {
            let mut w = v.clone();
            op(sz, w.as_mut_slice())?;
            op(sz, w.as_mut_slice())?;
            checks.push(Check::new(format!("{name} involution"), w.sub(&v)?.max_abs(), NORM_TOL));
        }
    }

    let window = 3 * model.transfer_time();
    checks.push(Check::new("full vs reduced fidelity", cross_check(model, window)?, EXACT_TOL));

    let reprs = Representations { full: true, reduced: false, analytic: true };
    let report = run_transfer(model, window, reprs)?;
    let analytic_gap =
        report.series.iter().filter_map(|p| Some((p.fidelity_full? - p.fidelity_analytic?).abs())).fold(0.0, f64::max);
    let tolerance = match model.family() {
        Family::Szegedy => SZEGEDY_FIDELITY_CONSTANT / (model.spec().n as f64).sqrt(),
        _ => EXACT_TOL,
    };
    checks.push(Check::new("full vs closed-form fidelity", analytic_gap, tolerance));

    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass_for_each_family() {
        for (family, n) in [(Family::Star, 12), (Family::CompleteLoops, 9), (Family::Szegedy, 11)] {
            let model = WalkModel::new(family, n, 2, 5).unwrap();
            for check in run_checks(&model, 7).unwrap() {
                assert!(check.passed(), "{family} {}: {:e}", check.name, check.value);
            }
        }
    }

    #[test]
    fn random_state_is_seeded_and_normalized() {
        let a = random_state(50, &mut ChaCha8Rng::seed_from_u64(3));
        let b = random_state(50, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
        assert!((a.norm() - 1.0).abs() < 1e-15);
    }
}
