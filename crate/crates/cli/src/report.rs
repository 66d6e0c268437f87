//! Serializable discrimination report.

use serde::{Deserialize, Serialize};
use unidisc::{DiscriminationReport, HullCase, Tolerances};

use crate::files::ProbeDocument;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceDocument {
    pub magic_diagonal: f64,
    pub product: f64,
    pub achievement: f64,
    pub perfect: f64,
    pub spread_slack: f64,
}

impl From<&Tolerances> for ToleranceDocument {
    fn from(t: &Tolerances) -> Self {
        Self {
            magic_diagonal: t.magic_diagonal,
            product: t.product,
            achievement: t.achievement,
            perfect: t.perfect,
            spread_slack: t.spread_slack,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub version: String,
    pub labels: [Option<String>; 2],
    /// Relative phases `ω_j` of `U1†U2` in the magic basis.
    pub omega: [f64; 4],
    pub spread: f64,
    pub fidelity: f64,
    pub priors: [f64; 2],
    pub error_probability: f64,
    pub perfectly_distinguishable: bool,
    /// `"origin-inside"` or `"origin-outside"`.
    pub case: String,
    pub achieved: f64,
    pub fallback_used: bool,
    pub probe: ProbeDocument,
    pub tolerances: ToleranceDocument,
}

impl ReportDocument {
    pub fn new(report: &DiscriminationReport, labels: [Option<String>; 2]) -> Self {
        Self {
            version: TOOL_VERSION.into(),
            labels,
            omega: report.omega.0,
            spread: report.spread,
            fidelity: report.fidelity,
            priors: [report.priors.0, report.priors.1],
            error_probability: report.error_probability,
            perfectly_distinguishable: report.perfectly_distinguishable,
            case: match report.case {
                HullCase::OriginInside => "origin-inside",
                HullCase::OriginOutside => "origin-outside",
            }
            .into(),
            achieved: report.achieved,
            fallback_used: report.fallback_used,
            probe: ProbeDocument::from(&report.probe),
            tolerances: ToleranceDocument::from(&report.tolerances),
        }
    }
}
