//! Pass/fail reports shared by the verification operations.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub per_check: Vec<Check>,
    pub notices: Vec<String>,
}

impl CheckReport {
    pub fn new() -> Self {
        CheckReport::default()
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) -> bool {
        self.per_check.push(Check {
            name: name.into(),
            status: Status::from_bool(ok),
            detail: detail.into(),
        });
        ok
    }

    pub fn notice(&mut self, text: impl Into<String>) {
        self.notices.push(text.into());
    }

    pub fn status(&self) -> Status {
        Status::from_bool(self.passed())
    }

    pub fn passed(&self) -> bool {
        self.per_check.iter().all(|c| c.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.per_check.iter().filter(|c| c.status == Status::Fail)
    }

    /// Appends the checks and notices of `other`, prefixing check names.
    pub fn merge(&mut self, prefix: &str, other: CheckReport) {
        for mut c in other.per_check {
            c.name = format!("{prefix}{}", c.name);
            self.per_check.push(c);
        }
        self.notices.extend(other.notices);
    }

    /// `{"notices": [...], "per_check": [...], "status": "pass"|"fail"}` with
    /// sorted keys.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "status": self.status(),
            "per_check": self.per_check,
            "notices": self.notices,
        })
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "status: {}", self.status())?;
        for c in &self.per_check {
            if c.detail.is_empty() {
                writeln!(f, "  {} {}", c.status, c.name)?;
            } else {
                writeln!(f, "  {} {}: {}", c.status, c.name, c.detail)?;
            }
        }
        for n in &self.notices {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_keys_are_sorted() {
        let mut r = CheckReport::new();
        r.check("a", true, "ok");
        r.check("b", false, "bad");
        r.notice("n");
        let text = serde_json::to_string(&r.to_json_value()).unwrap();
        assert_eq!(
            text,
            r#"{"notices":["n"],"per_check":[{"detail":"ok","name":"a","status":"pass"},{"detail":"bad","name":"b","status":"fail"}],"status":"fail"}"#
        );
        assert_eq!(r.failures().count(), 1);
    }
}
