//! Self-describing JSON reports.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::cdiff::AConvention;
use crate::field::FieldSpec;

/// Version of the report layout; bumped on incompatible changes.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// A payload wrapped with everything needed to interpret it. Two runs of the
/// same command serialize identically apart from `timestamp`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportEnvelope<T> {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    /// What kind of payload this is, e.g. `spectrum`.
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub field: Option<FieldSpec>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub function: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub convention: Option<AConvention>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub payload: T,
}

impl<T: Serialize> ReportEnvelope<T> {
    pub fn new(kind: &str, payload: T) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        ReportEnvelope {
            schema_version: REPORT_SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME").to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            kind: kind.to_string(),
            field: None,
            function: None,
            convention: None,
            timestamp,
            payload,
        }
    }

    pub fn field(mut self, field: &FieldSpec) -> Self {
        self.field = Some(field.clone());
        self
    }

    pub fn function(mut self, descriptor: impl Into<String>) -> Self {
        self.function = Some(descriptor.into());
        self
    }

    pub fn convention(mut self, conv: AConvention) -> Self {
        self.convention = Some(conv);
        self
    }

    pub fn to_json_pretty(&self) -> crate::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
