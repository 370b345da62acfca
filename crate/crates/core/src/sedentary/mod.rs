//! Certificates and classification of sedentary vertices.
//!
//! A vertex `u` is `C`-sedentary when `|U(t)_{u,u}| >= C > 0` for all `t`;
//! sharply so when `C` is the infimum and tightly so when it is attained.

pub mod bounds;
pub mod certificate;
pub mod classify;
pub mod families;
pub mod lattice;
pub mod product;

pub use bounds::{
    equality_condition, equality_time, sharpness_parity, sharpness_parity_coords, subset_bound, twin_bound,
    EqualityCheck,
};
pub use certificate::{
    CertificateKind, Classification, OracleEvidence, SedentaryCertificate, SedentaryReport, SupportEntry,
};
pub use classify::{classify, classify_all, classify_decomposed, classify_family, ClassifyOptions};
pub use families::{family_closed_classification, family_closed_for_vertex};
pub use product::{product_compose, ProductFactor};
