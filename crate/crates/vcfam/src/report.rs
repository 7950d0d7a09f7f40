//! Machine-readable run reports.
//!
//! Every CLI invocation emits one JSON document with a stable schema. All
//! fields except `elapsed_ms` are deterministic for a fixed command line
//! and seed, so reports can be compared byte-for-byte after dropping that
//! key.

use serde::Serialize;
use std::collections::BTreeMap;

use crate::family::SetFamily;
use crate::formula::BoundReport;
use crate::search::SearchResult;

pub const SCHEMA_VERSION: u32 = 1;

/// How the reported value was obtained.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Formula,
    Search,
    Verify,
    Construct,
}

/// Run status; the CLI maps this to its exit code.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Ok,
    /// A statement this tool is expected to confirm failed to hold.
    ClaimViolated,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub provenance: Provenance,
    pub status: RunStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub terms: BTreeMap<String, String>,
    /// Witness families as lists of sets of 1-based elements.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<Vec<Vec<u32>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unique_up_to_relabelling: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes_explored: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notes: Option<Vec<String>>,
    pub elapsed_ms: u128,
}

impl RunReport {
    pub fn new(command: impl Into<String>, provenance: Provenance) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            params: BTreeMap::new(),
            provenance,
            status: RunStatus::Ok,
            value: None,
            terms: BTreeMap::new(),
            witnesses: None,
            unique_up_to_relabelling: None,
            exact: None,
            nodes_explored: None,
            seed: None,
            notes: None,
            elapsed_ms: 0,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn with_bound(mut self, bound: &BoundReport) -> Self {
        self.value = Some(bound.value.to_string());
        for term in &bound.terms {
            self.terms
                .insert(term.label.clone(), term.value.to_string());
        }
        self
    }

    pub fn with_search(mut self, result: &SearchResult) -> Self {
        self.value = Some(result.value.to_string());
        self.witnesses = Some(result.witnesses.iter().map(family_elements).collect());
        self.unique_up_to_relabelling = result.unique_up_to_relabelling;
        self.exact = Some(result.exact);
        self.nodes_explored = Some(result.nodes_explored);
        self
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.get_or_insert_with(Vec::new).push(text.into());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

pub fn family_elements(f: &SetFamily) -> Vec<Vec<u32>> {
    f.iter().map(|m| m.elements()).collect()
}
