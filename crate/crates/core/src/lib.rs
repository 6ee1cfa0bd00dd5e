//! Geometric quantum correlation measures for bipartite qubit/qutrit
//! systems: Schatten p-norm discords, measurement-induced nonlocality,
//! teleportation / remote-state-preparation / CHSH figures of merit,
//! parametrized local Kraus channels, and numerical verification of the
//! factorization decay laws the channel structure induces.

pub mod bloch;
pub mod channels;
pub mod ensembles;
pub mod error;
pub mod factorization;
pub mod linalg;
pub mod measurements;
pub mod measures;
pub mod state;

pub use bloch::{decompose, reconstruct, BlochForm, GeneratorBasis, SupportPattern};
pub use channels::{KrausChannel, LocalChannel, ScalingProfile};
pub use ensembles::{random_in_family, random_mixed, random_pure, FamilyDescriptor};
pub use error::{Error, Result};
pub use factorization::{
    classify, predicted_factor, varrho_scaling_check, verify, weyl_bound_check,
    FactorizationReport, FamilyClassification, Theorem,
};
pub use linalg::{ComplexMatrix, HermitianEig, PNorm, RealMatrix, Side};
pub use measurements::{
    Direction, MeasurementFamily, MeasurementParams, OptimizerSettings, ProjectiveMeasurement,
};
pub use measures::{
    geometric_measure, symmetric_measure, MeasureKind, MeasureResult, MeasureSpec, Method,
};
pub use state::DensityMatrix;
