//! Stable, machine-readable error codes shared by every module.

use std::fmt;

use serde::{Serialize, Serializer};

/// Error codes surfaced in reports and on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Code {
    Syntax,
    BoundVar,
    Scope,
    Schema,
    Eigenvar,
    Instvar,
    RuleDisabled,
    Split,
    NotFresh,
    Budget,
    Partition,
    Unchecked,
    Modalized,
    NotOneVar,
    Violation,
    Cap,
    Uninterpreted,
    NotRelComplete,
    Signature,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::Syntax => "E-SYNTAX",
            Code::BoundVar => "E-BOUND-VAR",
            Code::Scope => "E-SCOPE",
            Code::Schema => "E-SCHEMA",
            Code::Eigenvar => "E-EIGENVAR",
            Code::Instvar => "E-INSTVAR",
            Code::RuleDisabled => "E-RULE-DISABLED",
            Code::Split => "E-SPLIT",
            Code::NotFresh => "E-NOT-FRESH",
            Code::Budget => "E-BUDGET",
            Code::Partition => "E-PARTITION",
            Code::Unchecked => "E-UNCHECKED",
            Code::Modalized => "E-MODALIZED",
            Code::NotOneVar => "E-NOT-ONEVAR",
            Code::Violation => "E-VIOLATION",
            Code::Cap => "E-CAP",
            Code::Uninterpreted => "E-UNINTERPRETED",
            Code::NotRelComplete => "E-NOT-RELCOMPLETE",
            Code::Signature => "E-SIGNATURE",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Code {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}
