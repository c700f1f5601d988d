//! Shared walk abstraction and the model descriptor used by the experiment
//! runner, the CLI and the C API.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complete_loop::CompleteLoopModel;
use crate::error::{Error, Result};
use crate::smallmat::{CMat, CVec};
use crate::star::StarModel;
use crate::szegedy::SzegedyModel;

/// Graph family of a walk model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Star,
    CompleteLoops,
    Szegedy,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Star, Family::CompleteLoops, Family::Szegedy];

    pub fn name(self) -> &'static str {
        match self {
            Family::Star => "star",
            Family::CompleteLoops => "complete-loops",
            Family::Szegedy => "szegedy",
        }
    }

    /// Smallest supported vertex count.
    pub fn min_vertices(self) -> usize {
        match self {
            Family::Star => 3,
            Family::CompleteLoops | Family::Szegedy => 5,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown model '{s}' (expected star, complete-loops or szegedy)"))
    }
}

/// Family, size and marked vertices. Labels are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub family: Family,
    pub n: usize,
    pub sender: usize,
    pub receiver: usize,
}

/// Checks the label and size invariants shared by all families.
pub(crate) fn validate_labels(family: Family, n: usize, sender: usize, receiver: usize) -> Result<()> {
    if n < family.min_vertices() {
        return Err(Error::InvalidModel(format!("{family} walk needs N >= {}, got {n}", family.min_vertices())));
    }
    for (role, label) in [("sender", sender), ("receiver", receiver)] {
        if label == 0 || label > n {
            return Err(Error::InvalidModel(format!("{role} {label} outside 1..={n}")));
        }
    }
    if sender == receiver {
        return Err(Error::InvalidModel(format!("sender and receiver are both {sender}")));
    }
    Ok(())
}

/// One eigenvalue of an effective operator with its eigenvector in the
/// alpha-basis coordinates.
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: Complex64,
    pub vector: CVec,
}

/// Eigenphases and eigenvectors of an effective operator.
#[derive(Debug, Clone)]
pub struct SpectralData {
    /// Phase that sets the transfer period (omega, or omega_1 for Szegedy).
    pub omega: f64,
    /// Distinct non-negative eigenphases, starting with 0.
    pub phases: Vec<f64>,
    /// The radical entering the Szegedy eigenphases.
    pub delta: Option<f64>,
    pub eigenpairs: Vec<Eigenpair>,
}

/// A discrete-time walk with an invariant subspace containing the sender
/// and receiver states.
pub trait Walk {
    fn spec(&self) -> ModelSpec;

    /// Dimension of the full Hilbert space.
    fn dimension(&self) -> usize;

    /// Number of walk steps represented by one application of the effective
    /// operator (2 for the coined walks, 1 for Szegedy).
    fn steps_per_effective(&self) -> usize;

    /// Applies one step of the walk in place without materializing the
    /// evolution operator.
    fn step_in_place(&self, amplitudes: &mut [Complex64]) -> Result<()>;

    fn step(&self, state: &CVec) -> Result<CVec> {
        let mut out = state.clone();
        self.step_in_place(out.as_mut_slice())?;
        Ok(out)
    }

    fn initial_state(&self) -> CVec;

    fn target_state(&self) -> CVec;

    /// Orthonormal basis of the invariant subspace, embedded in the full space.
    fn alpha_basis(&self) -> Result<Vec<CVec>>;

    /// Effective evolution operator in the alpha basis, from the closed form.
    fn effective(&self) -> CMat;

    fn spectrum(&self) -> SpectralData;

    /// Closed-form transfer fidelity after `t` steps.
    fn fidelity_analytic(&self, t: i64) -> Result<f64>;

    /// Whether the closed form is a prediction at step `t` (as opposed to a
    /// reporting convention).
    fn analytic_defined_at(&self, t: u64) -> bool {
        let _ = t;
        true
    }

    /// Predicted number of steps to the first fidelity maximum.
    fn transfer_time(&self) -> u64;

    fn check_state(&self, amplitudes: &[Complex64]) -> Result<()> {
        if amplitudes.len() == self.dimension() {
            Ok(())
        } else {
            Err(Error::StateDimension { expected: self.dimension(), found: amplitudes.len() })
        }
    }
}

/// Even step count near `2*pi/omega` with the larger closed-form fidelity.
///
/// The coined walks return to the external vertices only at even steps, so
/// both even neighbours of `2*pi/omega` are compared; ties go to the one
/// closer to `2*pi/omega`.
pub(crate) fn even_transfer_time(omega: f64, fidelity: impl Fn(u64) -> f64) -> u64 {
    let x = 2.0 * PI / omega;
    let lo = 2 * (x / 2.0).floor() as u64;
    let candidates: &[u64] = if lo == 0 { &[2] } else { &[lo, lo + 2] };
    let mut best = candidates[0];
    for &t in &candidates[1..] {
        let (ft, fb) = (fidelity(t), fidelity(best));
        if ft > fb || (ft == fb && (t as f64 - x).abs() < (best as f64 - x).abs()) {
            best = t;
        }
    }
    best
}

pub(crate) fn check_time(t: i64) -> Result<u64> {
    u64::try_from(t).map_err(|_| Error::NegativeTime(t))
}

/// Any of the three supported walks.
#[derive(Debug, Clone)]
pub enum WalkModel {
    Star(StarModel),
    CompleteLoops(CompleteLoopModel),
    Szegedy(SzegedyModel),
}

impl WalkModel {
    pub fn new(family: Family, n: usize, sender: usize, receiver: usize) -> Result<Self> {
        Ok(match family {
            Family::Star => WalkModel::Star(StarModel::new(n, sender, receiver)?),
            Family::CompleteLoops => WalkModel::CompleteLoops(CompleteLoopModel::new(n, sender, receiver)?),
            Family::Szegedy => WalkModel::Szegedy(SzegedyModel::new(n, sender, receiver)?),
        })
    }

    pub fn from_spec(spec: ModelSpec) -> Result<Self> {
        Self::new(spec.family, spec.n, spec.sender, spec.receiver)
    }

    pub fn family(&self) -> Family {
        self.spec().family
    }

    fn inner(&self) -> &(dyn Walk + Send + Sync) {
        match self {
            WalkModel::Star(m) => m,
            WalkModel::CompleteLoops(m) => m,
            WalkModel::Szegedy(m) => m,
        }
    }
}

impl Walk for WalkModel {
    fn spec(&self) -> ModelSpec {
        self.inner().spec()
    }
    fn dimension(&self) -> usize {
        self.inner().dimension()
    }
    fn steps_per_effective(&self) -> usize {
        self.inner().steps_per_effective()
    }
    fn step_in_place(&self, amplitudes: &mut [Complex64]) -> Result<()> {
        self.inner().step_in_place(amplitudes)
    }
    fn initial_state(&self) -> CVec {
        self.inner().initial_state()
    }
    fn target_state(&self) -> CVec {
        self.inner().target_state()
    }
    fn alpha_basis(&self) -> Result<Vec<CVec>> {
        self.inner().alpha_basis()
    }
    fn effective(&self) -> CMat {
        self.inner().effective()
    }
    fn spectrum(&self) -> SpectralData {
        self.inner().spectrum()
    }
    fn fidelity_analytic(&self, t: i64) -> Result<f64> {
        self.inner().fidelity_analytic(t)
    }
    fn analytic_defined_at(&self, t: u64) -> bool {
        self.inner().analytic_defined_at(t)
    }
    fn transfer_time(&self) -> u64 {
        self.inner().transfer_time()
    }
}
