//! The seven properties of the implication diagram on one measure.

use serde::{Deserialize, Serialize};

use crate::error::{check_rank, Result};
use crate::measure::BinaryMeasure;
use crate::props::{check_plus, check_property, PlusBase, PlusOptions, PropertyId, PropertyReport};
use crate::weight::Weight;

/// Largest rank for the full battery.
pub const MAX_FIGURE1_RANK: usize = 5;

/// Proven arrows `stronger → weaker`.
const ARROWS: [(&str, &str); 8] = [
    ("cna+", "jnrd+"),
    ("jnrd+", "hnlc+"),
    ("cna", "jnrd"),
    ("jnrd", "hnlc"),
    ("cna+", "cna"),
    ("jnrd+", "jnrd"),
    ("hnlc+", "hnlc"),
    ("cna", "na"),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Figure1Table {
    pub reports: Vec<PropertyReport>,
    /// No proven arrow has a holding source and a failing target, and no
    /// `+` check passes where its base fails.
    pub consistent: bool,
    pub violations: Vec<String>,
}

impl Figure1Table {
    pub fn verdict(&self, property: &str) -> &PropertyReport {
        self.reports.iter().find(|r| r.property == property).expect("property in table")
    }

    pub fn plain_all_hold(&self) -> bool {
        ["na", "cna", "jnrd", "hnlc"].iter().all(|p| self.verdict(p).holds_p())
    }

    pub fn plus_none_fail(&self) -> bool {
        ["cna+", "jnrd+", "hnlc+"].iter().all(|p| !self.verdict(p).fails_p())
    }

    pub fn summary(&self) -> String {
        let cells: Vec<String> = self.reports.iter().map(|r| format!("{}={}", r.property, r.verdict)).collect();
        format!("{} consistent={}", cells.join(" "), self.consistent)
    }
}

/// NA, CNA, JNRD and h-NLC exactly, and the three `+` properties at the
/// given budget, with a consistency check against the proven arrows.
pub fn verify_figure1<W: Weight>(mu: &BinaryMeasure<W>, opts: &PlusOptions) -> Result<Figure1Table> {
    check_rank(mu.n(), MAX_FIGURE1_RANK, "the implication table")?;
    let mut reports = Vec::new();
    for id in [PropertyId::Na, PropertyId::Cna, PropertyId::Jnrd, PropertyId::Hnlc] {
        reports.push(check_property(mu, id)?);
    }
    for base in [PlusBase::Cna, PlusBase::Jnrd, PlusBase::Hnlc] {
        reports.push(if mu.n() < 2 {
            PropertyReport::holds(format!("{}+", base.name())).with_note("single variable")
        } else {
            check_plus(mu, base, opts)?
        });
    }
    let get = |p: &str| reports.iter().find(|r| r.property == p).expect("property in table");
    let mut violations = Vec::new();
    for (a, b) in ARROWS {
        let (ra, rb) = (get(a), get(b));
        // an inconclusive + verdict proves nothing either way
        if ra.holds_p() && rb.fails_p() {
            violations.push(format!("{a} holds but {b} fails"));
        }
        if a.ends_with('+') && !b.ends_with('+') && rb.fails_p() && !ra.fails_p() {
            violations.push(format!("{b} fails but {a} found no violation"));
        }
    }
    Ok(Figure1Table { consistent: violations.is_empty(), reports, violations })
}
