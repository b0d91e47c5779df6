//! Structured records of inequality checks.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// One inequality `lhs ≤ rhs` inside a report.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Link {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

/// The outcome of checking one inequality, or a chain of them.
///
/// For chains, `lhs`/`rhs`/`slack` describe the tightest link and `links`
/// lists every link. `holds` is true iff every slack is at least `-check_tol`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    pub links: Vec<Link>,
    pub context: Vec<(String, f64)>,
}

impl BoundReport {
    /// A single inequality `lhs ≤ rhs`.
    pub fn single(name: &str, lhs: f64, rhs: f64, check_tol: f64) -> Self {
        Self::chain(name, &[(name, lhs, rhs)], check_tol)
    }

    /// Several inequalities `lhs_i ≤ rhs_i` checked together. An empty chain
    /// holds vacuously.
    pub fn chain(name: &str, links: &[(&str, f64, f64)], check_tol: f64) -> Self {
        let links: Vec<Link> = links
            .iter()
            .map(|&(label, lhs, rhs)| Link { label: label.to_string(), lhs, rhs, slack: rhs - lhs })
            .collect();
        let tightest = links.iter().min_by(|a, b| a.slack.total_cmp(&b.slack));
        let (lhs, rhs, slack) = tightest.map_or((0.0, 0.0, 0.0), |l| (l.lhs, l.rhs, l.slack));
        let holds = links.iter().all(|l| l.slack >= -check_tol && !l.slack.is_nan());
        Self { name: name.to_string(), lhs, rhs, slack, holds, links, context: Vec::new() }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.context.push((key.to_string(), value));
        self
    }

    pub fn context_value(&self, key: &str) -> Option<f64> {
        self.context.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn link(&self, label: &str) -> Option<&Link> {
        self.links.iter().find(|l| l.label == label)
    }
}
