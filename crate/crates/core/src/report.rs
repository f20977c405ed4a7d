use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// One checked statement. `anchor` names the mathematical topic the claim belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub details: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub claims: Vec<Claim>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, id: &str, anchor: &str, status: Status, details: impl Into<String>) {
        self.claims.push(Claim { id: id.to_string(), anchor: anchor.to_string(), status, details: details.into() });
    }

    /// Records pass/fail from a boolean.
    pub fn check(&mut self, id: &str, anchor: &str, ok: bool, details: impl Into<String>) {
        let s = if ok { Status::Pass } else { Status::Fail };
        self.push(id, anchor, s, details);
    }

    pub fn extend(&mut self, other: Report) {
        self.claims.extend(other.claims);
    }

    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn get(&self, id: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.id == id)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.claims {
            writeln!(f, "[{}] {} ({}): {}", c.status, c.id, c.anchor, c.details)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inconclusive_does_not_fail() {
        let mut r = Report::new();
        r.check("a", "x", true, "");
        r.push("b", "x", Status::Inconclusive, "edge");
        assert!(r.passed());
        r.check("c", "x", false, "bad");
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
    }
}
