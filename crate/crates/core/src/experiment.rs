//! Transfer runs: evolve a model in the full space and in its invariant
//! subspace, record fidelity series, locate peaks and sweep over sizes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::smallmat::{coordinates, matvec, CVec};
use crate::walk::{Family, ModelSpec, Walk, WalkModel};

/// Which representations to evolve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representations {
    pub full: bool,
    pub reduced: bool,
    pub analytic: bool,
}

impl Representations {
    pub const ALL: Representations = Representations { full: true, reduced: true, analytic: true };
    pub const NONE: Representations = Representations { full: false, reduced: false, analytic: false };

    /// Parses a comma list such as `full,analytic`.
    pub fn parse_list(list: &str) -> Result<Self, String> {
        let mut out = Self::NONE;
        for item in list.split(',').map(str::trim) {
            match item {
                "full" => out.full = true,
                "reduced" => out.reduced = true,
                "analytic" => out.analytic = true,
                other => return Err(format!("unknown representation '{other}'")),
            }
        }
        Ok(out)
    }
}

impl Default for Representations {
    fn default() -> Self {
        Self::ALL
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub t: u64,
    pub fidelity_full: Option<f64>,
    pub fidelity_reduced: Option<f64>,
    pub fidelity_analytic: Option<f64>,
}

impl SeriesPoint {
    /// The value used for peak detection: full, else reduced, else analytic.
    pub fn primary(&self) -> Option<f64> {
        self.fidelity_full.or(self.fidelity_reduced).or(self.fidelity_analytic)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    pub model: ModelSpec,
    pub steps: u64,
    #[serde(rename = "predicted_T")]
    pub predicted_t: u64,
    pub peak_step: u64,
    pub peak_fidelity: f64,
    pub series: Vec<SeriesPoint>,
}

/// Evolves the model's initial state for `steps` steps and records the
/// squared overlap with the target state in each requested representation.
///
/// The reduced representation only exists at multiples of
/// [`Walk::steps_per_effective`]; other steps leave it empty.
pub fn run_transfer(model: &WalkModel, steps: u64, reprs: Representations) -> Result<TransferReport> {
    let target = model.target_state();

    let mut full = reprs.full.then(|| model.initial_state());

    let reduced = if reprs.reduced {
        let basis = model.alpha_basis()?;
        let start = coordinates(&basis, &model.initial_state())?;
        let target_coords = coordinates(&basis, &target)?;
        Some((model.effective(), start, target_coords))
    } else {
        None
    };
    let mut reduced_state = reduced.as_ref().map(|(_, start, _)| start.clone());
    let period = model.steps_per_effective() as u64;

    let mut series = Vec::with_capacity(steps as usize + 1);
    for t in 0..=steps {
        let fidelity_full = full.as_ref().map(|psi| overlap_sqr(&target, psi));
        let fidelity_reduced = match (&reduced, &reduced_state) {
            (Some((_, _, target_coords)), Some(c)) if t % period == 0 => Some(overlap_sqr(target_coords, c)),
            _ => None,
        };
        let fidelity_analytic = if reprs.analytic && model.analytic_defined_at(t) {
            Some(model.fidelity_analytic(t as i64)?)
        } else {
            None
        };
        series.push(SeriesPoint { t, fidelity_full, fidelity_reduced, fidelity_analytic });

        if t == steps {
            break;
        }
        if let Some(psi) = full.as_mut() {
            model.step_in_place(psi.as_mut_slice())?;
        }
        if let (Some((u_eff, _, _)), Some(c)) = (&reduced, reduced_state.as_mut()) {
            if (t + 1) % period == 0 {
                *c = matvec(u_eff, c)?;
            }
        }
    }

    let (peak_step, peak_fidelity) = find_peak(&series);
    Ok(TransferReport {
        model: model.spec(),
        steps,
        predicted_t: model.transfer_time(),
        peak_step,
        peak_fidelity,
        series,
    })
}

fn overlap_sqr(target: &CVec, psi: &CVec) -> f64 {
    target.inner(psi).expect("same model").norm_sqr()
}

/// Global argmax of the primary fidelity, ties to the earliest step.
fn find_peak(series: &[SeriesPoint]) -> (u64, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for p in series {
        if let Some(f) = p.primary() {
            if f > best.1 {
                best = (p.t, f);
            }
        }
    }
    if best.1.is_finite() {
        best
    } else {
        (0, 0.0)
    }
}

/// Largest `|F_full(t) - F_reduced(t)|` over the steps where the reduced
/// evolution is defined.
pub fn cross_check(model: &WalkModel, steps: u64) -> Result<f64> {
    let reprs = Representations { full: true, reduced: true, analytic: false };
    let report = run_transfer(model, steps, reprs)?;
    Ok(report.series.iter().filter_map(|p| Some((p.fidelity_full? - p.fidelity_reduced?).abs())).fold(0.0, f64::max))
}

/// Sender and receiver labels used for every size in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelPolicy {
    pub sender: usize,
    pub receiver: usize,
}

impl Default for LabelPolicy {
    fn default() -> Self {
        LabelPolicy { sender: 1, receiver: 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    #[serde(rename = "predicted_T")]
    pub predicted_t: u64,
    pub peak_step: u64,
    pub peak_fidelity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub family: Family,
    pub rows: Vec<SweepRow>,
}

/// Runs a full-space transfer for each size with a window of twice the
/// predicted transfer time. Sizes must be strictly increasing.
pub fn sweep(family: Family, sizes: &[usize], labels: LabelPolicy) -> Result<SweepReport> {
    let mut models = Vec::with_capacity(sizes.len());
    let mut prev = None;
    for &n in sizes {
        if prev.is_some_and(|p| n <= p) {
            return Err(Error::InvalidSweep { n, reason: "sizes must be strictly increasing".into() });
        }
        prev = Some(n);
        let model = WalkModel::new(family, n, labels.sender, labels.receiver)
            .map_err(|e| Error::InvalidSweep { n, reason: e.to_string() })?;
        models.push(model);
    }
    if models.is_empty() {
        return Err(Error::InvalidSweep { n: 0, reason: "no sizes given".into() });
    }

    let reprs = Representations { full: true, reduced: false, analytic: false };
    let rows = models
        .par_iter()
        .map(|model| {
            let predicted_t = model.transfer_time();
            let report = run_transfer(model, 2 * predicted_t, reprs)?;
            Ok(SweepRow {
                n: model.spec().n,
                predicted_t,
                peak_step: report.peak_step,
                peak_fidelity: report.peak_fidelity,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport { family, rows })
}
