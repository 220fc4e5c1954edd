//! The branch algorithms and the dispatcher that runs them all.

mod dispatch;
pub mod nonaffine;
pub mod qform;
pub mod small;
pub mod tensor;

pub use dispatch::{two_closure, verify_candidate, BranchReport, ClosureReport, OracleMode, Resolution};

use crate::perm::PermutationGroup;

/// Which algorithm produced a candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// The nonaffine cascade before it settles on one of its three cases.
    Nonaffine,
    Imprimitive,
    Product,
    AlmostSimple,
    Small,
    Tensor,
    Qform,
    Oracle,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Nonaffine => "nonaffine",
            Branch::Imprimitive => "imprimitive",
            Branch::Product => "product",
            Branch::AlmostSimple => "almost-simple",
            Branch::Small => "small",
            Branch::Tensor => "tensor",
            Branch::Qform => "qform",
            Branch::Oracle => "oracle",
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A group produced by a branch; `structural` is false for brute-force fallbacks.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub branch: Branch,
    pub group: PermutationGroup,
    pub structural: bool,
}

/// Why a branch produced nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub branch: Branch,
    pub reason: String,
}

impl Failure {
    pub fn new(branch: Branch, reason: impl Into<String>) -> Self {
        Failure { branch, reason: reason.into() }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.branch, self.reason)
    }
}

pub type BranchResult = std::result::Result<Candidate, Failure>;
