//! Run reports: per-item verdict records with approximation flags, stable
//! JSON serialization, and replay bookkeeping. Identical configurations
//! produce byte-identical reports.

use serde::{Deserialize, Serialize};

use crate::backend::BackendKind;
use crate::heyting::Verdict;

pub const SCHEMA_VERSION: u32 = 1;

/// Run configuration; the seed fixes all sampling.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunConfig {
    pub backend: BackendKind,
    pub suites: Vec<String>,
    pub fuel: u64,
    pub samples: usize,
    pub cutoff: usize,
    pub rank: usize,
    pub truncation: u64,
    pub prefix: usize,
    pub probes: String,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            backend: BackendKind::Term,
            suites: vec![],
            fuel: crate::comb::Fuel::DEFAULT.get(),
            samples: 8,
            cutoff: 6,
            rank: 4,
            truncation: 1 << 10,
            prefix: 8,
            probes: "default".to_string(),
            seed: 7,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    Confirmed,
    Refuted,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportItem {
    pub suite: String,
    pub item: String,
    /// stable identifier of the claim this item checks
    pub claim: String,
    pub verdict: String,
    pub expected: Expectation,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// marks candidate sweeps that stand in for non-constructive arguments
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub experiment: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub config: RunConfig,
    /// approximation flags in force for every item
    pub probes_used: Vec<String>,
    pub items: Vec<ReportItem>,
    pub confirmed: usize,
    pub refuted: usize,
    pub inconclusive: usize,
    pub unexpected: usize,
}

impl Report {
    pub fn assemble(config: RunConfig, probes_used: Vec<String>, items: Vec<ReportItem>) -> Report {
        let confirmed = items.iter().filter(|i| i.verdict == "confirmed").count();
        let refuted = items.iter().filter(|i| i.verdict == "refuted").count();
        let inconclusive = items.iter().filter(|i| i.verdict == "inconclusive").count();
        let unexpected = items.iter().filter(|i| !i.ok).count();
        Report {
            schema_version: SCHEMA_VERSION,
            config,
            probes_used,
            items,
            confirmed,
            refuted,
            inconclusive,
            unexpected,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "backend={} suites={} seed={} fuel={} cutoff={} trunc={} prefix={} probes=[{}]\n",
            self.config.backend.name(),
            self.config.suites.join(","),
            self.config.seed,
            self.config.fuel,
            self.config.cutoff,
            self.config.truncation,
            self.config.prefix,
            self.probes_used.join(","),
        ));
        for it in &self.items {
            let marker = if it.ok { "ok " } else { "FAIL" };
            let exp = match it.expected {
                Expectation::Confirmed => "confirmed",
                Expectation::Refuted => "refuted",
            };
            out.push_str(&format!(
                "[{marker}] {}/{} ({}) -> {} (expected {}{})\n",
                it.suite,
                it.item,
                it.claim,
                it.verdict,
                exp,
                if it.experiment { ", experiment" } else { "" },
            ));
            if let Some(ce) = &it.counterexample {
                out.push_str(&format!("       counterexample: {ce}\n"));
            }
        }
        out.push_str(&format!(
            "totals: {} confirmed, {} refuted, {} inconclusive, {} unexpected\n",
            self.confirmed, self.refuted, self.inconclusive, self.unexpected
        ));
        out
    }

    pub fn exit_ok(&self) -> bool {
        self.unexpected == 0
    }
}

pub fn item(
    suite: &str,
    name: &str,
    claim: &str,
    verdict: &Verdict,
    expected: Expectation,
) -> ReportItem {
    let ok = match expected {
        Expectation::Confirmed => verdict.is_confirmed(),
        Expectation::Refuted => verdict.is_refuted(),
    };
    let counterexample = match verdict {
        Verdict::Refuted { counterexample, .. } => Some(format!("{counterexample}")),
        _ => None,
    };
    let detail = match verdict {
        Verdict::Refuted { context, .. } => Some(context.clone()),
        Verdict::Inconclusive { reason } => Some(reason.clone()),
        Verdict::Confirmed => None,
    };
    ReportItem {
        suite: suite.to_string(),
        item: name.to_string(),
        claim: claim.to_string(),
        verdict: verdict.tag().to_string(),
        expected,
        ok,
        counterexample,
        detail,
        experiment: false,
    }
}
