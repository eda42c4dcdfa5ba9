//! Ordered records of the computations behind a verdict.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

/// The closed vocabulary of results a trace step may rest on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Citation {
    /// `μ ≤ ρ - 1 ≤ h¹¹ - 1`.
    HodgeIndexBound,
    NoetherFormula,
    /// `e(S) = e(X) - μ` and `K_S² = K_X²` for a contraction of disjoint nodal curves.
    NodalContraction,
    OrbifoldEulerNumber,
    /// `K_S² ≤ 3 e_orb(S)` when `K_S` is nef.
    OrbifoldBmyNef,
    /// `0 ≤ e_orb(S)` when `-K_S` is nef.
    OrbifoldBmyAntiNef,
    /// Discrepancy coefficients from `D_p·E_i = 2 + E_i²`.
    DiscrepancySystem,
    /// Sublattice of finite index in a unimodular lattice has square `|det|`.
    UnimodularSquareDeterminant,
    /// Isotropic image of `M/2M` plus the doubly-even kernel constraint.
    Mod2KernelObstruction,
    /// `μ(X) ≤ μ(Y) + r/2` along the blow-down to the minimal model.
    BlowdownNodalBound,
    /// Euler number of an elliptic fibration is the sum over singular fibres.
    FibrationEulerFormula,
    /// Nodal curves on an irrational ruled surface match the blow-ups fibre by fibre.
    RuledFibreCount,
    /// Enriques-Kodaira classification of surfaces (external).
    SurfaceClassification,
    /// Classification of rational surfaces with `μ = h¹¹ - 2` (external).
    RationalSurfaceClassification,
    /// Known examples and open cases (external).
    ExistenceLedger,
}

impl Citation {
    pub const ALL: [Citation; 15] = [
        Citation::HodgeIndexBound,
        Citation::NoetherFormula,
        Citation::NodalContraction,
        Citation::OrbifoldEulerNumber,
        Citation::OrbifoldBmyNef,
        Citation::OrbifoldBmyAntiNef,
        Citation::DiscrepancySystem,
        Citation::UnimodularSquareDeterminant,
        Citation::Mod2KernelObstruction,
        Citation::BlowdownNodalBound,
        Citation::FibrationEulerFormula,
        Citation::RuledFibreCount,
        Citation::SurfaceClassification,
        Citation::RationalSurfaceClassification,
        Citation::ExistenceLedger,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Citation::HodgeIndexBound => "hodge-index-bound",
            Citation::NoetherFormula => "noether-formula",
            Citation::NodalContraction => "nodal-contraction",
            Citation::OrbifoldEulerNumber => "orbifold-euler-number",
            Citation::OrbifoldBmyNef => "orbifold-bmy-nef",
            Citation::OrbifoldBmyAntiNef => "orbifold-bmy-anti-nef",
            Citation::DiscrepancySystem => "discrepancy-system",
            Citation::UnimodularSquareDeterminant => "unimodular-square-determinant",
            Citation::Mod2KernelObstruction => "mod2-kernel-obstruction",
            Citation::BlowdownNodalBound => "blowdown-nodal-bound",
            Citation::FibrationEulerFormula => "fibration-euler-formula",
            Citation::RuledFibreCount => "ruled-fibre-count",
            Citation::SurfaceClassification => "external:surface-classification",
            Citation::RationalSurfaceClassification => "external:rational-surface-classification",
            Citation::ExistenceLedger => "external:existence-ledger",
        }
    }

    /// Lookup facts taken from the literature rather than computed here.
    pub fn is_external(&self) -> bool {
        self.as_str().starts_with("external:")
    }
}

impl fmt::Display for Citation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Citation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Citation::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| s.to_string())
    }
}

/// Operation name used for steps that are lookups, not computations.
pub const EXTERNAL_CLASSIFICATION: &str = "external_classification";

/// One step of a trace. Values are already rendered (integers in decimal,
/// rationals as `p/q`) so traces serialize byte-for-byte reproducibly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub step: usize,
    pub operation: &'static str,
    pub inputs: Vec<(String, String)>,
    pub outputs: Vec<(String, String)>,
    pub citation: Citation,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    steps: Vec<TraceStep>,
}

impl Trace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push<I, O, K1, V1, K2, V2>(&mut self, operation: &'static str, citation: Citation, inputs: I, outputs: O)
    where
        I: IntoIterator<Item = (K1, V1)>,
        O: IntoIterator<Item = (K2, V2)>,
        K1: ToString,
        V1: ToString,
        K2: ToString,
        V2: ToString,
    {
        let step = self.steps.len() + 1;
        self.steps.push(TraceStep {
            step,
            operation,
            inputs: inputs.into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            outputs: outputs.into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            citation,
        });
    }

    /// Appends another trace, renumbering its steps.
    pub fn extend(&mut self, other: Trace) {
        for mut s in other.steps {
            s.step = self.steps.len() + 1;
            self.steps.push(s);
        }
    }

    pub fn steps(&self) -> &[TraceStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn find(&self, operation: &str) -> impl Iterator<Item = &TraceStep> + '_ {
        let operation = String::from(operation);
        self.steps.iter().filter(move |s| s.operation == operation)
    }
}

impl TraceStep {
    pub fn output(&self, key: &str) -> Option<&str> {
        self.outputs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn input(&self, key: &str) -> Option<&str> {
        self.inputs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}
