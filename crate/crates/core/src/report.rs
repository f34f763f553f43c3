use std::fmt;

use serde::{Deserialize, Serialize};

use crate::spectral::GridSpec;

/// Default tolerances by error source.
pub mod tolerance {
    /// Spectral identities (rounding only).
    pub const SPECTRAL: f64 = 1e-10;
    /// Inequalities whose sides carry quadrature error.
    pub const QUADRATURE: f64 = 0.03;
    /// Algebraic and pointwise steps.
    pub const EXACT: f64 = 1e-12;
}

/// Which inequality a quotient belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    #[serde(rename = "classical-H1")]
    ClassicalH1,
    #[serde(rename = "fractional-L2")]
    FractionalL2,
    #[serde(rename = "fractional-W")]
    FractionalW,
    Besov,
    #[serde(rename = "refined-q>2")]
    Refined,
    GradientClassical,
    GradientRefined,
    SteinWeiss,
    UBound,
}

impl Identity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Identity::ClassicalH1 => "classical-H1",
            Identity::FractionalL2 => "fractional-L2",
            Identity::FractionalW => "fractional-W",
            Identity::Besov => "besov",
            Identity::Refined => "refined-q>2",
            Identity::GradientClassical => "gradient-classical",
            Identity::GradientRefined => "gradient-refined",
            Identity::SteinWeiss => "stein-weiss",
            Identity::UBound => "u-bound",
        }
    }

    pub fn parse(s: &str) -> Option<Identity> {
        [
            Identity::ClassicalH1,
            Identity::FractionalL2,
            Identity::FractionalW,
            Identity::Besov,
            Identity::Refined,
            Identity::GradientClassical,
            Identity::GradientRefined,
            Identity::SteinWeiss,
            Identity::UBound,
        ]
        .into_iter()
        .find(|i| i.as_str() == s)
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Both sides of one inequality evaluated on one field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientResult {
    pub identity: Identity,
    pub d: usize,
    pub s: f64,
    pub q: f64,
    pub lhs: f64,
    pub rhs: f64,
}

impl QuotientResult {
    /// `lhs / rhs`, undefined when `rhs = 0`.
    pub fn quotient(&self) -> Option<f64> {
        (self.rhs > 0.0).then(|| self.lhs / self.rhs)
    }

    pub fn is_vacuous(&self) -> bool {
        self.lhs == 0.0 && self.rhs == 0.0
    }

    /// Passes when `lhs <= constant * rhs * (1 + tolerance)`.
    pub fn holds_with(&self, constant: f64, tolerance: f64) -> bool {
        self.is_vacuous() || self.lhs <= constant * self.rhs * (1.0 + tolerance)
    }

    pub fn to_report(
        &self,
        grid: &GridSpec,
        bound_constant: Option<f64>,
        tolerance: f64,
    ) -> CheckReport {
        let pass = match bound_constant {
            Some(c) => self.holds_with(c, tolerance),
            None => self.is_vacuous() || self.quotient().is_some_and(f64::is_finite),
        };
        CheckReport {
            identity: self.identity.as_str().to_string(),
            field: None,
            d: self.d,
            n: grid.n(),
            length: grid.length(),
            s: self.s,
            q: self.q,
            lhs: self.lhs,
            rhs: self.rhs,
            quotient: self.quotient(),
            bound_constant,
            pass,
            tolerance,
            vacuous: self.is_vacuous(),
            links: Vec::new(),
        }
    }
}

/// One step of a proof chain: `lhs <= factor * rhs` (or an equality).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainLink {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl ChainLink {
    /// `lhs <= rhs` up to a relative slack.
    pub fn at_most(name: impl Into<String>, lhs: f64, rhs: f64, rel_tol: f64) -> Self {
        ChainLink {
            name: name.into(),
            lhs,
            rhs,
            pass: lhs <= rhs + rel_tol * rhs.abs().max(lhs.abs()),
        }
    }
}

/// Serialized verification record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub identity: String,
    /// Corpus label of the field, when the check ran on one.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub field: Option<String>,
    pub d: usize,
    pub n: usize,
    #[serde(rename = "L")]
    pub length: f64,
    pub s: f64,
    pub q: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub quotient: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bound_constant: Option<f64>,
    pub pass: bool,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub vacuous: bool,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub links: Vec<ChainLink>,
}

impl CheckReport {
    /// A report that is not tied to a field (pure arithmetic checks).
    pub fn scalar(
        identity: impl Into<String>,
        d: usize,
        s: f64,
        q: f64,
        lhs: f64,
        rhs: f64,
        pass: bool,
        tolerance: f64,
    ) -> Self {
        CheckReport {
            identity: identity.into(),
            field: None,
            d,
            n: 0,
            length: 0.0,
            s,
            q,
            lhs,
            rhs,
            quotient: (rhs != 0.0).then(|| lhs / rhs),
            bound_constant: None,
            pass,
            tolerance,
            vacuous: false,
            links: Vec::new(),
        }
    }

    pub fn on_grid(mut self, grid: &GridSpec) -> Self {
        self.n = grid.n();
        self.length = grid.length();
        self
    }

    pub fn with_bound(mut self, constant: f64) -> Self {
        self.bound_constant = Some(constant);
        self
    }

    pub fn with_field(mut self, label: impl Into<String>) -> Self {
        self.field = Some(label.into());
        self
    }

    pub fn with_links(mut self, links: Vec<ChainLink>) -> Self {
        self.pass = self.pass && links.iter().all(|l| l.pass);
        self.links = links;
        self
    }

    pub fn csv_header() -> &'static str {
        "identity,d,n,L,s,q,lhs,rhs,quotient,pass"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:e},{:e},{},{}",
            self.identity,
            self.d,
            self.n,
            self.length,
            self.s,
            self.q,
            self.lhs,
            self.rhs,
            self.quotient.map(|v| format!("{v:e}")).unwrap_or_default(),
            self.pass
        )
    }
}
