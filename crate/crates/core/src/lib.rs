//! Perfect state transfer between two marked vertices with discrete-time
//! quantum-walk search dynamics.
//!
//! Three walks are supported: the coined walk on a star graph, the coined
//! walk on a complete graph with self-loops, and Szegedy's walk with queries
//! on the complete graph. Each model provides a matrix-free step on the full
//! state vector, an embedded orthonormal basis of a small invariant subspace,
//! the closed-form effective operator on that subspace, its spectrum and the
//! closed-form transfer fidelity, so the three descriptions can be checked
//! against each other.
//!
//! ```
//! use pst_core::{run_transfer, Family, Representations, Walk, WalkModel};
//!
//! let model = WalkModel::new(Family::Star, 100, 1, 2).unwrap();
//! assert_eq!(model.transfer_time(), 22);
//! let report = run_transfer(&model, 60, Representations::ALL).unwrap();
//! assert_eq!(report.peak_step, 22);
//! ```

pub mod cli;
pub mod complete_loop;
pub mod error;
pub mod experiment;
pub mod smallmat;
pub mod star;
pub mod szegedy;
pub mod verify;
pub mod walk;

pub use complete_loop::CompleteLoopModel;
pub use error::{Error, Result};
pub use experiment::{
    cross_check, run_transfer, sweep, LabelPolicy, Representations, SeriesPoint, SweepReport, SweepRow, TransferReport,
};
pub use smallmat::{CMat, CVec};
pub use star::StarModel;
pub use szegedy::SzegedyModel;
pub use walk::{Eigenpair, Family, ModelSpec, SpectralData, Walk, WalkModel};
