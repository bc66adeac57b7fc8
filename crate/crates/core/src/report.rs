//! Verification and gap reports shared by the checkers.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::math::{fmt_rational, Rational};

/// Serde adapters storing a rational as a `[numerator, denominator]` pair of
/// decimal strings (integers are unbounded).
pub mod serde_rat {
    use num_bigint::BigInt;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::math::Rational;

    pub fn to_pair(x: &Rational) -> [String; 2] {
        [x.numer().to_string(), x.denom().to_string()]
    }

    pub fn from_pair(p: &[String; 2]) -> Result<Rational, String> {
        let n: BigInt = p[0].parse().map_err(|_| format!("bad numerator {:?}", p[0]))?;
        let d: BigInt = p[1].parse().map_err(|_| format!("bad denominator {:?}", p[1]))?;
        if d <= BigInt::from(0) {
            return Err(format!("denominator must be positive, got {d}"));
        }
        Ok(Rational::new(n, d))
    }

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        to_pair(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let p = <[String; 2]>::deserialize(d)?;
        from_pair(&p).map_err(D::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            x.as_ref().map(to_pair).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            let p = Option::<[String; 2]>::deserialize(d)?;
            p.map(|p| from_pair(&p).map_err(D::Error::custom)).transpose()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Vacuous,
    NotApplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Vacuous => "VACUOUS",
            Status::NotApplicable => "NOT-APPLICABLE",
        })
    }
}

/// One failed identity in a verification run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Human-readable description of the offending tuple.
    pub witness: String,
    #[serde(with = "serde_rat::option")]
    pub expected: Option<Rational>,
    #[serde(with = "serde_rat::option")]
    pub found: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub subject: String,
    pub params: BTreeMap<String, String>,
    pub checked: u64,
    pub exhaustive: bool,
    pub sample_seed: Option<u64>,
    pub violation_count: u64,
    /// First violations only; `violation_count` has the total.
    pub violations: Vec<Violation>,
}

pub const MAX_LISTED_VIOLATIONS: usize = 20;

impl VerificationReport {
    pub fn new(subject: &str) -> Self {
        VerificationReport {
            subject: subject.to_string(),
            params: BTreeMap::new(),
            checked: 0,
            exhaustive: true,
            sample_seed: None,
            violation_count: 0,
            violations: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.insert(key.to_string(), value.to_string());
    }

    pub fn record(&mut self, v: Violation) {
        self.violation_count += 1;
        if self.violations.len() < MAX_LISTED_VIOLATIONS {
            self.violations.push(v);
        }
    }

    pub fn pass(&self) -> bool {
        self.violation_count == 0
    }

    pub fn status(&self) -> Status {
        if self.pass() {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.subject, self.status())?;
        for (k, v) in &self.params {
            writeln!(f, "  {k} = {v}")?;
        }
        let mode = if self.exhaustive {
            "exhaustive".to_string()
        } else {
            format!("sampled (seed {})", self.sample_seed.unwrap_or_default())
        };
        writeln!(f, "  checked {} ({mode}), violations {}", self.checked, self.violation_count)?;
        for v in &self.violations {
            let e = v.expected.as_ref().map(fmt_rational).unwrap_or_else(|| "-".into());
            let g = v.found.as_ref().map(fmt_rational).unwrap_or_else(|| "-".into());
            writeln!(f, "  violation: {} expected {e} found {g}", v.witness)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "==")]
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Ge => ">=",
            Relation::Le => "<=",
            Relation::Eq => "==",
        })
    }
}

/// A single inequality `lhs REL rhs` with both sides recorded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub label: String,
    #[serde(with = "serde_rat")]
    pub lhs: Rational,
    pub relation: Relation,
    #[serde(with = "serde_rat")]
    pub rhs: Rational,
    pub status: Status,
    pub witness: Option<String>,
}

impl BoundCheck {
    /// Evaluate the relation; `vacuous` marks bounds that carry no information.
    pub fn new(label: &str, lhs: Rational, relation: Relation, rhs: Rational, vacuous: bool) -> Self {
        let holds = match relation {
            Relation::Ge => lhs >= rhs,
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
        };
        let status = if vacuous {
            Status::Vacuous
        } else if holds {
            Status::Pass
        } else {
            Status::Fail
        };
        BoundCheck { label: label.to_string(), lhs, relation, rhs, status, witness: None }
    }

    pub fn not_applicable(label: &str, lhs: Rational, relation: Relation, rhs: Rational) -> Self {
        BoundCheck { label: label.to_string(), lhs, relation, rhs, status: Status::NotApplicable, witness: None }
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapReport {
    pub name: String,
    pub params: BTreeMap<String, String>,
    #[serde(with = "serde_rat::option")]
    pub eps_star: Option<Rational>,
    pub exhaustive: bool,
    pub paths_enumerated: String,
    pub checks: Vec<BoundCheck>,
    pub notes: Vec<String>,
}

impl GapReport {
    pub fn new(name: &str) -> Self {
        GapReport {
            name: name.to_string(),
            params: BTreeMap::new(),
            eps_star: None,
            exhaustive: true,
            paths_enumerated: "0".into(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.insert(key.to_string(), value.to_string());
    }

    /// Fail if any check failed; pass otherwise (vacuous and not-applicable
    /// checks do not count either way).
    pub fn status(&self) -> Status {
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else if self.checks.iter().any(|c| c.status == Status::Pass) {
            Status::Pass
        } else if self.checks.iter().any(|c| c.status == Status::Vacuous) {
            Status::Vacuous
        } else {
            Status::NotApplicable
        }
    }

    pub fn failed(&self) -> bool {
        self.status() == Status::Fail
    }
}

impl fmt::Display for GapReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.name, self.status())?;
        for (k, v) in &self.params {
            writeln!(f, "  {k} = {v}")?;
        }
        if let Some(e) = &self.eps_star {
            writeln!(f, "  ε* = {}", fmt_rational(e))?;
        }
        writeln!(
            f,
            "  paths enumerated: {} ({})",
            self.paths_enumerated,
            if self.exhaustive { "exhaustive" } else { "partial" }
        )?;
        for c in &self.checks {
            write!(f, "  [{}] {}: {} {} {}", c.status, c.label, fmt_rational(&c.lhs), c.relation, fmt_rational(&c.rhs))?;
            if let Some(w) = &c.witness {
                write!(f, "  (witness {w})")?;
            }
            writeln!(f)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
