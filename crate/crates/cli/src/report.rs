//! Deterministic run reports: identical inputs (and seed, when sampling)
//! produce byte-identical output. Timing is printed on stderr only, so it
//! never perturbs the report bytes.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::formats::ArrayDoc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    Correcting,
    NotCorrecting,
    Ok,
}

impl Verdict {
    pub fn success(self) -> bool {
        !matches!(self, Verdict::Fail | Verdict::NotCorrecting)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Correcting => "CORRECTING",
            Verdict::NotCorrecting => "NOT-CORRECTING",
            Verdict::Ok => "OK",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRowDoc {
    pub shape: Vec<usize>,
    pub t: Vec<usize>,
    pub vertices: u128,
    pub edges: u64,
    pub del_max: usize,
    pub del_exact: bool,
    pub insdel_max: usize,
    pub insdel_exact: bool,
    pub redundancy: String,
    pub sizes_match: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub stats: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub arrays: BTreeMap<String, ArrayDoc>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub members: Vec<ArrayDoc>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<TableRowDoc>,
}

impl Report {
    pub fn new(command: &str, verdict: Verdict) -> Self {
        Report {
            command: command.to_string(),
            params: BTreeMap::new(),
            verdict,
            seed: None,
            stats: BTreeMap::new(),
            notes: Vec::new(),
            arrays: BTreeMap::new(),
            members: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn stat(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.stats.insert(key.to_string(), value.to_string());
        self
    }

    fn entry_line(doc: &ArrayDoc) -> String {
        let dims: Vec<String> = doc.n.iter().map(|n| n.to_string()).collect();
        let entries: Vec<String> = doc.entries.iter().map(|s| s.to_string()).collect();
        format!("q={} ({}) [{}]", doc.q, dims.join(","), entries.join(" "))
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("== hyperdel {}\n", self.command);
        for (k, v) in &self.params {
            out.push_str(&format!("param {k} = {v}\n"));
        }
        if let Some(seed) = self.seed {
            out.push_str(&format!("seed = {seed}\n"));
        }
        for (k, v) in &self.stats {
            out.push_str(&format!("stat {k} = {v}\n"));
        }
        for note in &self.notes {
            out.push_str(&format!("note {note}\n"));
        }
        for (name, doc) in &self.arrays {
            out.push_str(&format!("array {name} = {}\n", Self::entry_line(doc)));
        }
        for doc in &self.members {
            out.push_str(&format!("member {}\n", Self::entry_line(doc)));
        }
        for row in &self.rows {
            let shape: Vec<String> = row.shape.iter().map(|n| n.to_string()).collect();
            let t: Vec<String> = row.t.iter().map(|n| n.to_string()).collect();
            out.push_str(&format!(
                "row shape=({}) t={} vertices={} edges={} del_max={}{} insdel_max={}{} redundancy={} sizes_match={}\n",
                shape.join(","),
                t.join(","),
                row.vertices,
                row.edges,
                row.del_max,
                if row.del_exact { "" } else { "(inexact)" },
                row.insdel_max,
                if row.insdel_exact { "" } else { "(inexact)" },
                row.redundancy,
                row.sizes_match
            ));
        }
        out.push_str(&format!("verdict {}\n", self.verdict));
        out
    }

    pub fn render_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}
