//! Sparse state-vector simulation of the D(S3) quantum double model.
//!
//! Spins are six-level systems on the edges of a square lattice. The crate
//! provides exact S3 arithmetic, gauge (vertex) operators and charge
//! projectors, anyon creation chains, three logical-qubit encodings with a
//! measurement-based gate set, and seeded Monte Carlo experiments.
//!
//! ```
//! use qdouble::{Boundary, ChargeType, Lattice, QuantumDouble};
//!
//! let qd = QuantumDouble::new(Lattice::grid(2, 2, Boundary::Open).unwrap());
//! let gs = qd.ground_state().unwrap();
//! let probs = qd.charge_probabilities(&gs, qdouble::VertexId(0)).unwrap();
//! assert!((probs[ChargeType::Trivial.index()] - 1.0).abs() < 1e-12);
//! ```

pub mod anyons;
pub mod codes;
pub mod decoder;
pub mod double;
mod error;
pub mod exec;
pub mod experiments;
pub mod group;
pub mod lattice;
pub mod noise;
pub mod state;

pub use anyons::{AnyonPair, CreationKind, Flavor};
pub use codes::{CodeRegister, EncodingKind, LogicalQubit};
pub use double::{ChargeType, QuantumDouble, Syndrome};
pub use error::{Error, Result};
pub use exec::Execution;
pub use experiments::ExperimentReport;
pub use group::{GroupElement, Irrep};
pub use lattice::{Attachment, Boundary, Direction, EdgeId, Lattice, Path, PlaquetteId, VertexId};
pub use noise::{ErrorOp, NoiseModel};
pub use state::{SpinDiagonalOp, StateVector};
