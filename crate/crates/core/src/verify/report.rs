use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::qcore::Backend;

/// Every identity the engine can check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IdentityId {
    /// `q^h G̃_{m+1}(1)/(m+1) + G̃_{m+1}/(m+1) = [2]_q δ_{m,0}`.
    Recurrence,
    /// `G̃_n(x) = [2]_q/[2]_{q^a} [a]^{n-1} Σ_i (-1)^i q^{ih} G̃_{n,q^a}((x+i)/a)`, odd `a`.
    DistributionG,
    /// `G̃_n(x+y) = Σ_j C(n,j) q^{α(j-1)y} G̃_j(x) [y]^{n-j}`.
    AdditionEq10,
    /// Symmetry in `(a, b)` of the twisted zeta sums.
    SymZetaThm21,
    /// Distribution relation of the zeta function, odd `a`.
    DistZetaEq9,
    /// The distribution relation at `a = 2`.
    Cor22,
    /// Symmetry in `(a, b)` of the twisted Genocchi sums.
    SymGenThm23,
    /// Symmetry in `(a, b)` with `S̃`-sums.
    SymSThm25,
    /// The classical `q = 1` form of the `S̃`-sum symmetry.
    ClassicalCor26,
    /// `ζ̃(-n, x) = G̃_{n+1}(x)/(n+1)`.
    Interpolation,
    /// `ζ̃(s,x) + q^h ζ̃(s,x+1) = [2]_q [x]^{-s}`.
    Funceq,
}

impl IdentityId {
    pub const ALL: [IdentityId; 11] = [
        IdentityId::Recurrence,
        IdentityId::DistributionG,
        IdentityId::AdditionEq10,
        IdentityId::SymZetaThm21,
        IdentityId::DistZetaEq9,
        IdentityId::Cor22,
        IdentityId::SymGenThm23,
        IdentityId::SymSThm25,
        IdentityId::ClassicalCor26,
        IdentityId::Interpolation,
        IdentityId::Funceq,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Recurrence => "RECURRENCE",
            IdentityId::DistributionG => "DISTRIBUTION_G",
            IdentityId::AdditionEq10 => "ADDITION_EQ10",
            IdentityId::SymZetaThm21 => "SYM_ZETA_THM21",
            IdentityId::DistZetaEq9 => "DIST_ZETA_EQ9",
            IdentityId::Cor22 => "COR22",
            IdentityId::SymGenThm23 => "SYM_GEN_THM23",
            IdentityId::SymSThm25 => "SYM_S_THM25",
            IdentityId::ClassicalCor26 => "CLASSICAL_COR26",
            IdentityId::Interpolation => "INTERPOLATION",
            IdentityId::Funceq => "FUNCEQ",
        }
    }

    /// Moduli that must be odd: `(a, b)` for the symmetric identities, `a`
    /// alone for the distribution relations.
    pub fn odd_moduli(self) -> &'static [&'static str] {
        match self {
            IdentityId::SymZetaThm21 | IdentityId::SymGenThm23 | IdentityId::SymSThm25 | IdentityId::ClassicalCor26 => {
                &["a", "b"]
            }
            IdentityId::DistributionG | IdentityId::DistZetaEq9 => &["a"],
            _ => &[],
        }
    }

    /// Backends the identity can be adjudicated on.
    pub fn backends(self) -> &'static [Backend] {
        match self {
            IdentityId::Recurrence
            | IdentityId::DistributionG
            | IdentityId::SymGenThm23
            | IdentityId::SymSThm25
            | IdentityId::AdditionEq10
            | IdentityId::SymZetaThm21 => &[Backend::Exact, Backend::Numeric],
            IdentityId::ClassicalCor26 => &[Backend::Exact],
            IdentityId::DistZetaEq9 | IdentityId::Cor22 | IdentityId::Interpolation | IdentityId::Funceq => {
                &[Backend::Numeric]
            }
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let upper = s.to_ascii_uppercase().replace('-', "_");
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name() == upper)
            .ok_or_else(|| Error::ConfigInvalid(format!("unknown identity {s:?}")))
    }
}

/// Parameters of one case, in grid order.
pub type Params = IndexMap<String, String>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseStatus {
    Pass,
    Fail,
    SkippedInvalid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub params: Params,
    pub backend: Backend,
    /// Exact fraction for exact cases, decimal otherwise.
    pub residual: String,
    pub pass: bool,
    /// Whether this case counts toward the suite verdict.
    pub gated: bool,
    pub status: CaseStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub max_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub id: IdentityId,
    pub cases: Vec<CaseReport>,
    pub summary: Summary,
    /// Every gated case passed.
    pub pass: bool,
}

impl IdentityReport {
    pub fn from_cases(id: IdentityId, cases: Vec<CaseReport>, magnitudes: &[f64]) -> Self {
        let count = |s: CaseStatus| cases.iter().filter(|c| c.status == s).count();
        let summary = Summary {
            total: cases.len(),
            passed: count(CaseStatus::Pass),
            failed: count(CaseStatus::Fail),
            skipped: count(CaseStatus::SkippedInvalid),
            max_residual: magnitudes.iter().copied().fold(0.0, f64::max),
        };
        let pass = cases.iter().all(|c| !c.gated || c.pass);
        Self { id, cases, summary, pass }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub identities: Vec<IdentityReport>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, identities: Vec<IdentityReport>) -> Self {
        let pass = identities.iter().all(|r| r.pass);
        Self { suite: suite.into(), identities, pass }
    }

    pub fn case_count(&self) -> usize {
        self.identities.iter().map(|r| r.cases.len()).sum()
    }
}
