use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::matrices::MatrixKind;
use crate::spectral::PeriodicityInfo;
use crate::walk::MinimizationResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CertificateKind {
    TwinBound,
    SubsetBound,
    ProductComposition,
    ClosedFormFamily,
    #[serde(rename = "NotSedentaryPST")]
    NotSedentaryPst,
    NotSedentaryZeroCrossing,
    SharpnessParity,
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CertificateKind::TwinBound => "TwinBound",
            CertificateKind::SubsetBound => "SubsetBound",
            CertificateKind::ProductComposition => "ProductComposition",
            CertificateKind::ClosedFormFamily => "ClosedFormFamily",
            CertificateKind::NotSedentaryPst => "NotSedentaryPST",
            CertificateKind::NotSedentaryZeroCrossing => "NotSedentaryZeroCrossing",
            CertificateKind::SharpnessParity => "SharpnessParity",
        };
        f.write_str(s)
    }
}

/// What is known about `inf_t |U(t)_{u,u}|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classification {
    NotSedentary,
    /// `|U(t)_{u,u}| >= C` for all `t`.
    SedentaryAtLeast(f64),
    /// The infimum equals `C` but need not be attained.
    SharplySedentary(f64),
    /// The minimum equals `C` and is attained.
    TightlySedentary(f64),
    Unresolved,
}

impl Classification {
    pub fn constant(&self) -> Option<f64> {
        match *self {
            Classification::SedentaryAtLeast(c)
            | Classification::SharplySedentary(c)
            | Classification::TightlySedentary(c) => Some(c),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Classification::NotSedentary => "NotSedentary",
            Classification::SedentaryAtLeast(_) => "SedentaryAtLeast",
            Classification::SharplySedentary(_) => "SharplySedentary",
            Classification::TightlySedentary(_) => "TightlySedentary",
            Classification::Unresolved => "Unresolved",
        }
    }

    pub fn is_sedentary(&self) -> bool {
        self.constant().is_some_and(|c| c > 0.0)
    }

    /// Same label and constants within `tol`.
    pub fn approx_eq(&self, other: &Classification, tol: f64) -> bool {
        self.label() == other.label()
            && match (self.constant(), other.constant()) {
                (Some(a), Some(b)) => (a - b).abs() <= tol,
                (None, None) => true,
                _ => false,
            }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.constant() {
            Some(c) => write!(f, "{}({c:.6})", self.label()),
            None => f.write_str(self.label()),
        }
    }
}

impl Serialize for Classification {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One piece of evidence about sedentariness at a vertex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SedentaryCertificate {
    pub kind: CertificateKind,
    /// Eigenvalue indices (into the decomposition) making up `S`, when relevant.
    #[serde(rename = "S")]
    pub subset: Vec<usize>,
    #[serde(rename = "S_eigenvalues")]
    pub subset_eigenvalues: Vec<f64>,
    /// `Σ_{j ∈ S} (E_j)_{u,u}`.
    pub a: Option<f64>,
    /// The constant `C` this certificate provides, in `[0, 1]`.
    pub bound: f64,
    /// Whether `bound` is exact (closed form) rather than read off a grid.
    pub analytic: bool,
    pub equality_times: Option<String>,
    /// The classification this certificate proves on its own, if any.
    pub claim: Option<Classification>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<MinimizationResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SedentaryCertificate {
    pub fn new(kind: CertificateKind, bound: f64) -> Self {
        SedentaryCertificate {
            kind,
            subset: Vec::new(),
            subset_eigenvalues: Vec::new(),
            a: None,
            bound: bound.clamp(0.0, 1.0),
            analytic: true,
            equality_times: None,
            claim: None,
            evidence: None,
            note: None,
        }
    }

    pub fn with_subset(mut self, indices: Vec<usize>, eigenvalues: Vec<f64>, a: f64) -> Self {
        self.subset = indices;
        self.subset_eigenvalues = eigenvalues;
        self.a = Some(a);
        self
    }

    pub fn with_claim(mut self, c: Classification) -> Self {
        self.claim = Some(c);
        self
    }

    pub fn with_times(mut self, s: impl Into<String>) -> Self {
        self.equality_times = Some(s.into());
        self
    }

    pub fn with_note(mut self, s: impl Into<String>) -> Self {
        self.note = Some(s.into());
        self
    }
}

/// Oracle minimum of `|U(t)_{u,u}|` over `[0, window]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEvidence {
    pub minimum: f64,
    pub argmin: f64,
    pub window: f64,
    pub grid: usize,
    pub certified: bool,
}

impl From<MinimizationResult> for OracleEvidence {
    fn from(m: MinimizationResult) -> Self {
        OracleEvidence {
            minimum: m.minimum,
            argmin: m.argmin,
            window: m.window,
            grid: m.grid,
            certified: m.certified_window,
        }
    }
}

impl Serialize for OracleEvidence {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("OracleEvidence", 5)?;
        st.serialize_field("m*", &self.minimum)?;
        st.serialize_field("t*", &self.argmin)?;
        st.serialize_field("window", &self.window)?;
        st.serialize_field("grid", &self.grid)?;
        st.serialize_field("certified", &self.certified)?;
        st.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupportEntry {
    pub eigenvalue: f64,
    pub weight: f64,
}

/// Outcome of classifying one vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct SedentaryReport {
    /// Display name of the graph (family spec, file or custom label).
    pub graph: String,
    pub matrix: MatrixKind,
    pub vertex: usize,
    pub order: usize,
    pub classification: Classification,
    pub certificates: Vec<SedentaryCertificate>,
    pub oracle: Option<OracleEvidence>,
    pub support: Vec<SupportEntry>,
    pub period: Option<PeriodicityInfo>,
    pub notes: Vec<String>,
}

impl SedentaryReport {
    pub fn new(graph: impl Into<String>, matrix: MatrixKind, vertex: usize, order: usize) -> Self {
        SedentaryReport {
            graph: graph.into(),
            matrix,
            vertex,
            order,
            classification: Classification::Unresolved,
            certificates: Vec::new(),
            oracle: None,
            support: Vec::new(),
            period: None,
            notes: Vec::new(),
        }
    }

    /// The constant `C` of the classification, if any.
    pub fn constant(&self) -> Option<f64> {
        self.classification.constant()
    }

    pub fn certificate(&self, kind: CertificateKind) -> Option<&SedentaryCertificate> {
        self.certificates.iter().find(|c| c.kind == kind)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl Serialize for SedentaryReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SedentaryReport", 11)?;
        st.serialize_field("graph", &self.graph)?;
        st.serialize_field("matrix", &self.matrix)?;
        st.serialize_field("vertex", &self.vertex)?;
        st.serialize_field("n", &self.order)?;
        st.serialize_field("classification", self.classification.label())?;
        st.serialize_field("C", &self.classification.constant())?;
        st.serialize_field("certificates", &self.certificates)?;
        st.serialize_field("oracle", &self.oracle)?;
        st.serialize_field("support", &self.support)?;
        st.serialize_field("period", &self.period)?;
        st.serialize_field("notes", &self.notes)?;
        st.end()
    }
}
