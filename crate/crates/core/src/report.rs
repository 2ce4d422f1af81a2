//! Provenance metadata attached to every emitted report.

use serde::{Deserialize, Serialize};

use crate::field::FieldCtx;
use crate::TOOL_VERSION;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub tool: String,
    pub tool_version: String,
    pub m: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u8>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ReportMeta {
    /// Metadata for a computation that does not involve a field (digit scans).
    pub fn new(m: u32) -> Self {
        ReportMeta {
            tool: "shds".into(),
            tool_version: TOOL_VERSION.into(),
            m,
            modulus: None,
            convention: None,
            seed: None,
        }
    }

    pub fn for_field(ctx: &FieldCtx) -> Self {
        ReportMeta {
            modulus: Some(ctx.modulus().to_vec()),
            ..Self::new(ctx.m())
        }
    }

    pub fn with_convention(mut self, convention: impl Into<String>) -> Self {
        self.convention = Some(convention.into());
        self
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }
}

/// `{"meta": {...}, "report": ...}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub meta: ReportMeta,
    pub report: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(meta: ReportMeta, report: T) -> Self {
        Envelope { meta, report }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
