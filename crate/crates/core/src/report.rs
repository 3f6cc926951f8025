//! Machine-readable results for identity and oracle checks.

use std::collections::BTreeMap;

use serde::Serialize;

/// Outcome of a single verification: an identity instance or an
/// oracle-equivalence instance, with both sides rendered exactly.
///
/// `check` is a stable kebab-case identifier naming the quantity verified;
/// `context` pins the parameters (n, p, λ, …) as strings. Serialized
/// reports carry exact values; nothing here is rounded.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub context: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
    /// Advisory results are reported but do not fail a suite; used for
    /// ranges outside a formula's stated domain, where a mismatch is a
    /// finding rather than an error.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    #[serde(default)]
    pub advisory: bool,
}

impl CheckResult {
    pub fn new(
        check: impl Into<String>,
        context: &[(&str, String)],
        lhs: impl ToString,
        rhs: impl ToString,
        equal: bool,
    ) -> Self {
        CheckResult {
            check: check.into(),
            context: context
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            equal,
            advisory: false,
        }
    }

    pub fn advisory(mut self) -> Self {
        self.advisory = true;
        self
    }

    /// Deterministic sort key: by check id, then by rendered context.
    pub fn sort_key(&self) -> (String, String) {
        let ctx = self
            .context
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(",");
        (self.check.clone(), ctx)
    }
}
