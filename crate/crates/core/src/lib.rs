//! Continuous-time quantum walks on weighted graphs and certificates for
//! sedentary vertices.
//!
//! The walk is `U_M(t) = exp(itM) = Σ_j e^{itλ_j} E_j` for a real symmetric
//! graph matrix `M` with distinct eigenvalues `λ_j` and projectors `E_j`.
//! A vertex `u` is `C`-sedentary when `|U(t)_{u,u}| >= C > 0` for all `t`.

pub mod error;
pub mod graph;
pub mod matrices;
pub mod sedentary;
pub mod spectral;
pub mod walk;

pub use error::{Error, Result};
pub use graph::{FamilySpec, GraphBuilder, VertexRole, WeightedGraph};
pub use matrices::{assemble, Hamiltonian, MatrixKind};
pub use sedentary::{
    classify, classify_family, family_closed_classification, product_compose, CertificateKind, Classification,
    ClassifyOptions, SedentaryCertificate, SedentaryReport,
};
pub use spectral::{decompose, SpectralDecomposition};
pub use walk::{DiagonalSeries, MinimizeOptions, WalkEvaluator};
