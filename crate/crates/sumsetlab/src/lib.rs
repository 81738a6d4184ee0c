//! Exact sumset arithmetic and theorem checkers for additive combinatorics
//! at desk scale: bounded integer sets, Shnirel'man and asymptotic
//! densities, rank-r counting functions, the Dyson transform, and sums in
//! finite abelian groups. Every checker works with exact rationals; there
//! are no tolerance parameters anywhere.

pub mod abgroup;
pub mod bits;
pub mod density;
pub mod dyson;
pub mod error;
pub mod harness;
pub mod intset;
pub mod ranksum;

pub use error::{Error, Result};
pub use intset::{rat, Rational};

/// Outcome of one checker on one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "not-applicable",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
