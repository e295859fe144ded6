//! Check reports and their JSON and text renderings.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{EngineUsed, Semantics};
use crate::error::{Error, Result};
use crate::semantics::{EvalMode, Verdict};

/// Schema tag written into every JSON report.
pub const REPORT_SCHEMA: &str = "slmc-report/1";

/// One checked subsentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportEntry {
    /// The fresh atom that replaces the subsentence afterwards.
    pub label: String,
    /// The subsentence as it occurs in the input.
    pub sentence: String,
    /// The subsentence with inner subsentences replaced by their labels.
    pub checked: String,
    pub engine: EngineUsed,
    pub mode: Option<EvalMode>,
    /// Verdict per state name.
    pub verdicts: BTreeMap<String, Verdict>,
}

/// Result of [`super::model_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub schema: String,
    pub formula: String,
    pub initial: String,
    pub semantics: Semantics,
    pub verdict: Verdict,
    /// Set when some row comes from a bounded-memory carrier, whose
    /// verdicts describe a restricted semantics.
    pub restricted: bool,
    pub entries: Vec<ReportEntry>,
    pub elapsed_us: u64,
}

impl CheckReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<CheckReport> {
        let r: CheckReport = serde_json::from_str(text)
            .map_err(|e| Error::Validation(format!("malformed report: {e}")))?;
        if r.schema != REPORT_SCHEMA {
            return Err(Error::Validation(format!("unknown report schema `{}`", r.schema)));
        }
        Ok(r)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "formula   {}", self.formula);
        let _ = writeln!(out, "semantics {}", self.semantics);
        for e in &self.entries {
            let mode = e.mode.map(|m| format!(" {m}")).unwrap_or_default();
            let _ = writeln!(out, "{} [{}{}] {}", e.label, e.engine, mode, e.checked);
            for (s, v) in &e.verdicts {
                let _ = writeln!(out, "  {s}: {v}");
            }
        }
        let flag = if self.restricted { " (restricted semantics)" } else { "" };
        let _ = writeln!(out, "verdict at {}: {}{}", self.initial, self.verdict, flag);
        out
    }
}
