//! Report documents with a stable schema, rendered as human-readable text
//! or byte-deterministic JSON. Element lists are emitted in canonical
//! sorted order and timing is never part of the JSON output.

use std::collections::BTreeMap;

use engel_core::engel::EngelClassification;
use engel_core::group::Group;
use engel_core::series::SeriesReport;
use engel_core::verify::CheckReport;
use serde::Serialize;

#[derive(Serialize, Debug, Clone)]
pub struct GroupMeta {
    pub name: String,
    /// `None` for the symbolic infinite engine.
    pub order: Option<u64>,
}

#[derive(Serialize, Debug, Clone)]
pub struct EngelJson {
    pub left: Vec<String>,
    pub bounded_left: BTreeMap<String, u32>,
    pub right: Vec<String>,
    pub bounded_right: BTreeMap<String, u32>,
}

#[derive(Serialize, Debug, Clone)]
pub struct SeriesJson {
    pub upper_central_orders: Vec<u64>,
    pub hypercentral_length: u32,
    pub lower_central_orders: Vec<u64>,
    pub nilpotency_class: Option<u32>,
    pub fitting_order: u64,
    pub baer_order: u64,
    pub rho_order: u64,
}

#[derive(Serialize, Debug, Clone)]
pub struct CheckJson {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Serialize, Debug, Clone)]
pub struct ReportDoc {
    pub group: GroupMeta,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub engel: Option<EngelJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<CheckJson>>,
}

impl ReportDoc {
    pub fn new(name: &str, order: Option<u64>) -> ReportDoc {
        ReportDoc {
            group: GroupMeta {
                name: name.into(),
                order,
            },
            engel: None,
            series: None,
            checks: None,
        }
    }
}

pub fn engel_json(group: &Group, cls: &EngelClassification) -> EngelJson {
    EngelJson {
        left: cls.left.iter().map(|e| group.render(e)).collect(),
        bounded_left: cls
            .bounded_left
            .iter()
            .map(|(e, n)| (group.render(e), *n))
            .collect(),
        right: cls.right.iter().map(|e| group.render(e)).collect(),
        bounded_right: cls
            .bounded_right
            .iter()
            .map(|(e, n)| (group.render(e), *n))
            .collect(),
    }
}

pub fn series_json(report: &SeriesReport) -> SeriesJson {
    SeriesJson {
        upper_central_orders: report.upper.orders().iter().map(|&o| o as u64).collect(),
        hypercentral_length: report.upper.length(),
        lower_central_orders: report.lower.orders.iter().map(|&o| o as u64).collect(),
        nilpotency_class: report.nilpotency_class,
        fitting_order: report.fitting.order() as u64,
        baer_order: report.baer.order() as u64,
        rho_order: report.rho.members.order() as u64,
    }
}

pub fn check_json(report: &CheckReport) -> CheckJson {
    CheckJson {
        name: report.check.clone(),
        passed: report.passed,
        witness: report.witness.clone(),
    }
}

/// Group one check report per catalog group into documents, preserving the
/// catalog order.
pub fn docs_from_checks(reports: &[(String, Option<u64>, Vec<CheckReport>)]) -> Vec<ReportDoc> {
    reports
        .iter()
        .map(|(name, order, checks)| {
            let mut doc = ReportDoc::new(name, *order);
            doc.checks = Some(checks.iter().map(check_json).collect());
            doc
        })
        .collect()
}

pub fn render_text(docs: &[ReportDoc]) -> String {
    let mut out = String::new();
    for doc in docs {
        match doc.group.order {
            Some(order) => out.push_str(&format!("group {} (order {})\n", doc.group.name, order)),
            None => out.push_str(&format!("group {} (infinite)\n", doc.group.name)),
        }
        if let Some(engel) = &doc.engel {
            out.push_str(&format!(
                "  left Engel set     ({:3}): {}\n",
                engel.left.len(),
                engel.left.join(", ")
            ));
            out.push_str(&format!(
                "  right Engel set    ({:3}): {}\n",
                engel.right.len(),
                engel.right.join(", ")
            ));
            let max_l = engel.bounded_left.values().max().copied().unwrap_or(0);
            let max_r = engel.bounded_right.values().max().copied().unwrap_or(0);
            out.push_str(&format!(
                "  bounded degrees: left <= {max_l}, right <= {max_r}\n"
            ));
        }
        if let Some(series) = &doc.series {
            out.push_str(&format!(
                "  upper central orders: {:?} (length {})\n",
                series.upper_central_orders, series.hypercentral_length
            ));
            out.push_str(&format!(
                "  lower central orders: {:?} (class {})\n",
                series.lower_central_orders,
                series
                    .nilpotency_class
                    .map(|c| c.to_string())
                    .unwrap_or_else(|| "none".into())
            ));
            out.push_str(&format!(
                "  fitting {} | baer {} | rho {}\n",
                series.fitting_order, series.baer_order, series.rho_order
            ));
        }
        if let Some(checks) = &doc.checks {
            for c in checks {
                let status = if c.passed { "pass" } else { "FAIL" };
                out.push_str(&format!("  [{status}] {}\n", c.name));
                if let Some(w) = &c.witness {
                    out.push_str(&format!("         witness: {w}\n"));
                }
            }
        }
    }
    out
}

pub fn render_json(docs: &[ReportDoc]) -> String {
    let mut s = if docs.len() == 1 {
        serde_json::to_string_pretty(&docs[0]).expect("report serialization cannot fail")
    } else {
        serde_json::to_string_pretty(docs).expect("report serialization cannot fail")
    };
    s.push('\n');
    s
}
