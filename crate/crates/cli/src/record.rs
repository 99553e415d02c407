use claw_mwis::{format_weight, parse_weight, Certificate, Weight};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

/// Exact rational as a string next to its nearest `f64`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactValue {
    pub exact: String,
    pub decimal: f64,
}

impl ExactValue {
    pub fn new(w: &Weight) -> Self {
        Self {
            exact: format_weight(w),
            decimal: w.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn value(&self) -> Option<Weight> {
        parse_weight(&self.exact)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateStatus {
    LocallyOptimal,
    IterationCapped,
    NotApplicable,
}

impl CertificateStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CertificateStatus::LocallyOptimal => "locally-optimal",
            CertificateStatus::IterationCapped => "iteration-capped",
            CertificateStatus::NotApplicable => "not-applicable",
        }
    }
}

impl From<Certificate> for CertificateStatus {
    fn from(c: Certificate) -> Self {
        match c {
            Certificate::LocallyOptimal => CertificateStatus::LocallyOptimal,
            Certificate::IterationCapped => CertificateStatus::IterationCapped,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceInfo {
    /// File path or generator description.
    pub source: String,
    pub vertices: usize,
    pub edges: usize,
    pub d: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub size_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pivot: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scale_n: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub warm_start: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_iterations: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: InstanceInfo,
    pub algorithm: String,
    pub config: ConfigEcho,
    pub solution: Vec<usize>,
    pub weight: ExactValue,
    pub iterations: usize,
    pub certificate: CertificateStatus,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle_ratio: Option<ExactValue>,
    /// Set indices when the input was a set system.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub packing: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_ms: Option<f64>,
}

impl RunRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run records serialize")
    }
}
