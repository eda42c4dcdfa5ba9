//! Decision procedures for surfaces with `μ = h¹¹ - 1` and `μ = h¹¹ - 2`
//! disjoint nodal curves.
//!
//! Every verdict carries a [`Trace`] of the computations that produced it.
//! Facts taken from the classification of surfaces are recorded as
//! [`EXTERNAL_CLASSIFICATION`] steps with an `external:` citation so they are
//! never confused with computed steps.

pub mod fibres;
mod replay;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exact::rational_string;
use crate::f2;
use crate::invariants::{self, SurfaceInvariants};
use crate::lattice::{self, GramMatrix};
use crate::singularity::{self, BmyVerdict, CanonicalClass, OrbifoldSurface};
use crate::trace::{Citation, Trace, EXTERNAL_CLASSIFICATION};

pub use fibres::{elliptic_fibre_search, FibreType, KodairaFibre};
pub use replay::{replay, ReplayTarget};

/// The closed vocabulary of terminal surfaces and cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseTag {
    /// The projective plane.
    P2,
    /// The Hirzebruch surface `F_2`.
    F2,
    /// A fake projective plane.
    Fpp,
    /// The quadric cone in `P^3` over a conic.
    Cone,
    Case1a,
    Case1b,
    Case1c,
    Case1d,
    Case1e,
    Case1f,
    Case2a,
    Case2b,
    Case2c,
    Case2d,
    Case2e,
    Case2f,
}

impl CaseTag {
    pub const ALL: [CaseTag; 16] = [
        CaseTag::P2,
        CaseTag::F2,
        CaseTag::Fpp,
        CaseTag::Cone,
        CaseTag::Case1a,
        CaseTag::Case1b,
        CaseTag::Case1c,
        CaseTag::Case1d,
        CaseTag::Case1e,
        CaseTag::Case1f,
        CaseTag::Case2a,
        CaseTag::Case2b,
        CaseTag::Case2c,
        CaseTag::Case2d,
        CaseTag::Case2e,
        CaseTag::Case2f,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::P2 => "P2",
            CaseTag::F2 => "F2",
            CaseTag::Fpp => "FPP",
            CaseTag::Cone => "cone",
            CaseTag::Case1a => "1-a",
            CaseTag::Case1b => "1-b",
            CaseTag::Case1c => "1-c",
            CaseTag::Case1d => "1-d",
            CaseTag::Case1e => "1-e",
            CaseTag::Case1f => "1-f",
            CaseTag::Case2a => "2-a",
            CaseTag::Case2b => "2-b",
            CaseTag::Case2c => "2-c",
            CaseTag::Case2d => "2-d",
            CaseTag::Case2e => "2-e",
            CaseTag::Case2f => "2-f",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseTag::ALL.into_iter().find(|t| t.as_str() == s).ok_or_else(|| Error::UnknownLabel(String::from(s)))
    }
}

/// A case together with its qualifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseLabel {
    pub tag: CaseTag,
    /// `K²` of the minimal surface, required for `1-f`.
    pub ksq: Option<i64>,
    pub attributes: Vec<(String, String)>,
}

impl CaseLabel {
    pub fn new(tag: CaseTag) -> Self {
        CaseLabel { tag, ksq: None, attributes: Vec::new() }
    }

    pub fn general_type(ksq: i64) -> Self {
        CaseLabel { tag: CaseTag::Case1f, ksq: Some(ksq), attributes: Vec::new() }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.attributes.push((String::from(key), value.to_string()));
        self
    }

    pub fn attribute(&self, key: &str) -> Option<&str> {
        self.attributes.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn with_status(self) -> Self {
        match existence_status(&self) {
            Ok(status) => self.with("existence", status),
            Err(_) => self,
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ksq {
            Some(k) => write!(f, "{} (K^2={k})", self.tag),
            None => write!(f, "{}", self.tag),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExistenceStatus {
    Exists,
    Open,
    Excluded,
}

impl ExistenceStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExistenceStatus::Exists => "exists",
            ExistenceStatus::Open => "open",
            ExistenceStatus::Excluded => "excluded",
        }
    }
}

impl fmt::Display for ExistenceStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Known examples: `1-f` exists for `K² ∈ {2,4,6,8}`, is open for `K² ∈ {1,7}`
/// and impossible for `K² ∈ {3,5}`; every other case has examples.
pub fn existence_status(label: &CaseLabel) -> Result<ExistenceStatus> {
    match (label.tag, label.ksq) {
        (CaseTag::Case1f, Some(2 | 4 | 6 | 8)) => Ok(ExistenceStatus::Exists),
        (CaseTag::Case1f, Some(1 | 7)) => Ok(ExistenceStatus::Open),
        (CaseTag::Case1f, Some(3 | 5)) => Ok(ExistenceStatus::Excluded),
        (CaseTag::Case1f, _) => Err(Error::UnknownLabel(format!("{label}"))),
        _ => Ok(ExistenceStatus::Exists),
    }
}

/// Cases that survive, with the steps that decided them. An empty case list
/// means the input was excluded; the trace then ends with an `excluded` step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationVerdict {
    pub cases: Vec<CaseLabel>,
    pub trace: Trace,
}

impl ClassificationVerdict {
    pub fn is_excluded(&self) -> bool {
        self.cases.is_empty()
    }

    pub fn tags(&self) -> Vec<CaseTag> {
        self.cases.iter().map(|c| c.tag).collect()
    }
}

/// Right-hand side `B` of `4q + 4p_g + h¹¹/2 ≤ B`, the form the nef orbifold
/// BMY inequality takes when `μ = h¹¹ - corank` nodes are contracted.
///
/// With `K² = 10 - 8q + 10p_g - h¹¹`, `e(S) = 2 + c - 4q + 2p_g` and
/// `e_orb = e(S) - (h¹¹ - c)/2`, the inequality `K² ≤ 3 e_orb` rearranges to
/// `B = 9c/2 - 4`.
pub fn nef_bmy_bound(corank: u64) -> BigRational {
    BigRational::new(BigInt::from(9 * corank as i64 - 8), BigInt::from(2))
}

fn orbifold_of(x: &SurfaceInvariants, mu: u64) -> Result<OrbifoldSurface> {
    let c = invariants::contract(*x, mu)?;
    Ok(OrbifoldSurface::with_nodes(c.euler_s(), mu as usize, Some(BigRational::from_integer(BigInt::from(c.ksq_s())))))
}

fn triple(x: &SurfaceInvariants) -> String {
    format!("({}, {}, {})", x.q, x.pg, x.h11)
}

fn push_bmy(trace: &mut Trace, x: &SurfaceInvariants, mu: u64, class: CanonicalClass) -> Result<BmyVerdict> {
    let s = orbifold_of(x, mu)?;
    let e_orb = singularity::orbifold_euler(&s)?;
    let verdict = singularity::bmy_check(&s, class)?;
    let (op, citation) = match class {
        CanonicalClass::Nef => ("bmy_check[nef]", Citation::OrbifoldBmyNef),
        CanonicalClass::AntiNef => ("bmy_check[anti_nef]", Citation::OrbifoldBmyAntiNef),
    };
    trace.push(
        op,
        citation,
        [
            ("(q, pg, h11)", triple(x)),
            ("mu", mu.to_string()),
            ("e(S)", s.euler.to_string()),
            ("K_S^2", x.ksq().to_string()),
        ],
        [
            ("e_orb", rational_string(&e_orb)),
            ("3*e_orb", rational_string(&(e_orb * BigRational::from_integer(BigInt::from(3))))),
            ("verdict", String::from(verdict.as_str())),
        ],
    );
    Ok(verdict)
}

fn push_noether(trace: &mut Trace, x: &SurfaceInvariants) {
    trace.push(
        "noether",
        Citation::NoetherFormula,
        [("q", x.q), ("pg", x.pg), ("h11", x.h11)],
        [("K^2", x.ksq()), ("e", x.euler())],
    );
}

fn push_external(trace: &mut Trace, citation: Citation, fact: &str, conclusion: &str) {
    trace.push(EXTERNAL_CLASSIFICATION, citation, [("fact", fact)], [("conclusion", conclusion)]);
}

fn push_enumeration(trace: &mut Trace, corank: u64, h11_min: u64) -> Vec<SurfaceInvariants> {
    let bound = nef_bmy_bound(corank);
    let solutions = invariants::bmy_solution_enumerator(&bound, h11_min);
    let listed: Vec<String> = solutions.iter().map(triple).collect();
    trace.push(
        "bmy_solution_enumerator",
        Citation::OrbifoldBmyNef,
        [("inequality", format!("4q + 4pg + h11/2 <= {}", rational_string(&bound))), ("h11_min", h11_min.to_string())],
        [("count", solutions.len().to_string()), ("solutions", listed.join("; "))],
    );
    solutions
}

/// Surfaces with `μ = h¹¹ - 1`. The contraction `S` has Picard number 1, so
/// `K_S` is either nef or anti-ample.
pub fn classify_max_nodal(nef_canonical: bool) -> ClassificationVerdict {
    let mut trace = Trace::new();
    let cases = if nef_canonical { max_nodal_nef(&mut trace) } else { max_nodal_anti_ample(&mut trace) };
    ClassificationVerdict { cases, trace }
}

fn max_nodal_nef(trace: &mut Trace) -> Vec<CaseLabel> {
    let mut cases = Vec::new();
    for x in push_enumeration(trace, 1, 1) {
        push_noether(trace, &x);
        let verdict = push_bmy(trace, &x, x.h11 - 1, CanonicalClass::Nef).expect("enumerated solutions are valid");
        debug_assert!(verdict.holds());
        if x.q == 0 && x.pg == 0 && x.ksq() == 9 {
            push_external(
                trace,
                Citation::SurfaceClassification,
                "K_X = f*K_S nef, so X is minimal and not rational; q = pg = 0, K^2 = 9 means general type",
                "fake projective plane",
            );
            cases.push(CaseLabel::new(CaseTag::Fpp).with_status());
        }
    }
    cases
}

/// `L = ⟨K⟩ ⊕ A1^k` with `K² = 9 - k`.
pub fn max_nodal_lattice(k: usize) -> GramMatrix {
    lattice::direct_sum(&GramMatrix::nodal(k), &GramMatrix::scalar(9 - k as i64))
}

fn max_nodal_anti_ample(trace: &mut Trace) -> Vec<CaseLabel> {
    push_external(
        trace,
        Citation::SurfaceClassification,
        "-K_X nef and nonzero gives kappa = -inf; a ruling over a curve of genus >= 1 would contain every nodal curve in fibres, forcing rho(S) >= 2",
        "X is rational, S is a Q-homology plane with nodes",
    );
    let max_k = singularity::max_singular_points_filter(3, 2);
    trace.push(
        "max_singular_points_filter",
        Citation::OrbifoldBmyAntiNef,
        [("e(S)", "3"), ("min_group_order", "2")],
        [("max_k", max_k.to_string())],
    );
    let mut cases = Vec::new();
    for k in 0..=max_k as usize {
        let g = max_nodal_lattice(k);
        let det = lattice::determinant(&g).abs();
        let square = lattice::square_discriminant_test(&g).expect("9 - k > 0 for k <= 6");
        trace.push(
            "square_discriminant_test",
            Citation::UnimodularSquareDeterminant,
            [("k", k.to_string()), ("K^2", (9 - k as i64).to_string())],
            [("|det|", det.to_string()), ("square", square.to_string())],
        );
        if !square {
            continue;
        }
        let (fact, tag) = match k {
            0 => ("rational, rho = 1", CaseTag::P2),
            1 => ("rational, rho = 2, K^2 = 8, contains a (-2)-curve", CaseTag::F2),
            _ => unreachable!("only k = 0, 1 give square determinants"),
        };
        push_external(trace, Citation::SurfaceClassification, fact, tag.as_str());
        cases.push(CaseLabel::new(tag).with("nodes", k).with_status());
    }
    cases
}

/// Origin of the non-nef canonical class for `μ = h¹¹ - 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NonminimalKind {
    /// `K_X` not nef, `κ(X) ≥ 0`.
    KappaNonneg,
    /// `κ = -∞`, irrational.
    IrrationalRuled,
    /// `κ = -∞`, rational.
    Rational,
}

impl NonminimalKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            NonminimalKind::KappaNonneg => "kappa_nonneg",
            NonminimalKind::IrrationalRuled => "irrational_ruled",
            NonminimalKind::Rational => "rational",
        }
    }
}

impl FromStr for NonminimalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kappa_nonneg" | "kappa-nonneg" => Ok(NonminimalKind::KappaNonneg),
            "irrational_ruled" | "irrational-ruled" => Ok(NonminimalKind::IrrationalRuled),
            "rational" => Ok(NonminimalKind::Rational),
            _ => Err(Error::UnknownLabel(String::from(s))),
        }
    }
}

/// Hypothesis on the canonical class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Canonical {
    Nef,
    NotNef(NonminimalKind),
}

/// `μ(X) ≤ μ(Y) + r/2` along `r` blow-downs to the minimal model; `μ` is an
/// integer so the bound is `μ(Y) + ⌊r/2⌋`.
pub fn mu_bound_after_blowdowns(mu_minimal: u64, r: u64) -> u64 {
    mu_minimal + r / 2
}

/// Surfaces with `μ = h¹¹ - 2`.
pub fn classify_near_max(x: SurfaceInvariants, canonical: Canonical) -> Result<ClassificationVerdict> {
    if x.h11 < 2 {
        return Err(Error::HodgeIndex { mu: 0, h11: x.h11 });
    }
    match canonical {
        Canonical::Nef => near_max_nef(x),
        Canonical::NotNef(kind) => {
            check_nonminimal_invariants(&x, kind)?;
            let mut v = nonminimal_decision_tree(kind);
            if kind == NonminimalKind::IrrationalRuled {
                let k = (x.h11 - 2) / 2;
                for c in &mut v.cases {
                    c.attributes.push((String::from("reducible_fibres"), k.to_string()));
                }
            }
            Ok(v)
        }
    }
}

fn check_nonminimal_invariants(x: &SurfaceInvariants, kind: NonminimalKind) -> Result<()> {
    let ok = match kind {
        // Blow-up of a fake projective plane at r ∈ {1, 2} points.
        NonminimalKind::KappaNonneg => x.q == 0 && x.pg == 0 && (2..=3).contains(&x.h11),
        // Ruled over a curve of genus q ≥ 1: p_g = 0 and ρ = 2 + #blow-ups, two per fibre.
        NonminimalKind::IrrationalRuled => x.q >= 1 && x.pg == 0 && x.h11.is_multiple_of(2),
        NonminimalKind::Rational => x.q == 0 && x.pg == 0,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidInvariants(format!(
            "(q, pg, h11) = {} is incompatible with the {} branch",
            triple(x),
            kind.as_str()
        )))
    }
}

fn near_max_nef(x: SurfaceInvariants) -> Result<ClassificationVerdict> {
    let mut trace = Trace::new();
    let mu = x.h11 - 2;
    push_noether(&mut trace, &x);
    let c = invariants::contract(x, mu)?;
    trace.push(
        "contract",
        Citation::NodalContraction,
        [("e(X)", x.euler().to_string()), ("mu", mu.to_string())],
        [("e(S)", c.euler_s().to_string()), ("K_S^2", c.ksq_s().to_string())],
    );
    let verdict = push_bmy(&mut trace, &x, mu, CanonicalClass::Nef)?;
    if !verdict.holds() {
        return Err(Error::ViolatesOrbifoldBmy { q: x.q, pg: x.pg, h11: x.h11 });
    }
    debug_assert!(invariants::bmy_solution_enumerator(&nef_bmy_bound(2), 2).contains(&x));

    let mut cases = Vec::new();
    match (x.q, x.pg, x.h11) {
        (1, 0, 2) => {
            push_external(
                &mut trace,
                Citation::SurfaceClassification,
                "minimal, kappa >= 0, K^2 = 0, e = 0, q = 1, pg = 0",
                "bi-elliptic (kappa = 0) or properly elliptic (kappa = 1)",
            );
            cases.push(CaseLabel::new(CaseTag::Case1a).with("kappa", 0));
            cases.push(CaseLabel::new(CaseTag::Case1b).with("kappa", 1));
        }
        (0, 1, 2) => {
            push_external(
                &mut trace,
                Citation::SurfaceClassification,
                "minimal, K^2 = 18 > 0",
                "general type; K^2 = 3e makes it a ball quotient",
            );
            let ball = verdict == BmyVerdict::Equality;
            cases.push(CaseLabel::new(CaseTag::Case1e).with("ball_quotient", ball));
        }
        (0, 0, 10) => {
            push_external(
                &mut trace,
                Citation::SurfaceClassification,
                "minimal, kappa >= 0, K^2 = 0, e = 12, q = pg = 0",
                "Enriques surface or kappa = 1",
            );
            let fibres = elliptic_fibre_search(x.euler() as u64, mu as usize);
            let found: Vec<String> = fibres.iter().map(|m| fibres::multiset_string(m)).collect();
            trace.push(
                "elliptic_fibre_search",
                Citation::FibrationEulerFormula,
                [("total_euler", x.euler().to_string()), ("nodal_demand", mu.to_string())],
                [("count", found.len().to_string()), ("multisets", found.join("; "))],
            );
            cases.push(CaseLabel::new(CaseTag::Case1c).with("nodal_curves", mu));
            cases.push(CaseLabel::new(CaseTag::Case1d).with("kappa", 1).with("fibres", found.join("; ")));
        }
        (0, 0, h) if (2..=9).contains(&h) => {
            let ksq = x.ksq();
            push_external(&mut trace, Citation::SurfaceClassification, "minimal, kappa >= 0, K^2 > 0", "general type");
            let report = f2::nodal_embedding_obstruction(mu as usize, x.h11 as usize)?;
            let witness = report
                .witness
                .as_ref()
                .map(|w| w.basis().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
                .unwrap_or_else(|| String::from("none"));
            trace.push(
                "nodal_embedding_obstruction",
                Citation::Mod2KernelObstruction,
                [("mu", mu.to_string()), ("ambient_rank", x.h11.to_string())],
                [
                    ("min_kernel_dim", report.min_kernel_dim.to_string()),
                    ("feasible", report.feasible.to_string()),
                    ("witness", witness),
                ],
            );
            if report.feasible {
                cases.push(CaseLabel::general_type(ksq).with("nodal_curves", mu));
            } else {
                trace.push(
                    "excluded",
                    Citation::Mod2KernelObstruction,
                    [("case", "1-f"), ("K^2", ksq.to_string().as_str())],
                    [("status", "excluded")],
                );
            }
        }
        _ => unreachable!("BMY holds only on the enumerated solutions"),
    }
    let cases = cases.into_iter().map(CaseLabel::with_status).collect();
    Ok(ClassificationVerdict { cases, trace })
}

/// The three branches for a non-nef canonical class.
pub fn nonminimal_decision_tree(kind: NonminimalKind) -> ClassificationVerdict {
    let mut trace = Trace::new();
    let cases = match kind {
        NonminimalKind::KappaNonneg => kappa_nonneg(&mut trace),
        NonminimalKind::IrrationalRuled => irrational_ruled(&mut trace),
        NonminimalKind::Rational => {
            push_external(
                &mut trace,
                Citation::RationalSurfaceClassification,
                "rational surfaces with mu = h11 - 2",
                "2-c, 2-d, 2-e, 2-f",
            );
            vec![CaseTag::Case2c, CaseTag::Case2d, CaseTag::Case2e, CaseTag::Case2f]
                .into_iter()
                .map(|t| CaseLabel::new(t).with_status())
                .collect()
        }
    };
    ClassificationVerdict { cases, trace }
}

/// `X → Y` is `r ≥ 1` blow-ups of a minimal `Y`, so
/// `μ(X) = h¹¹(Y) + r - 2` while `μ(Y) ≤ h¹¹(Y) - 1`. Blowing down can add at
/// most `⌊r/2⌋` nodal curves, but at least `r - 1` are needed.
fn kappa_nonneg(trace: &mut Trace) -> Vec<CaseLabel> {
    let mut feasible_r = Vec::new();
    for r in 1..=3u64 {
        let needed = r - 1;
        let allowed = mu_bound_after_blowdowns(0, r);
        let ok = needed <= allowed;
        trace.push(
            "mu_bound_after_blowdowns",
            Citation::BlowdownNodalBound,
            [("r", r.to_string())],
            [
                ("needed mu(X) - mu(Y)", needed.to_string()),
                ("allowed mu(X) - mu(Y)", allowed.to_string()),
                ("feasible", ok.to_string()),
            ],
        );
        if ok {
            feasible_r.push(r);
        }
    }
    trace.push(
        "blowdown_count",
        Citation::BlowdownNodalBound,
        [("needed - allowed", "ceil(r/2) - 1, nondecreasing in r")],
        [("r", feasible_r.iter().map(u64::to_string).collect::<Vec<_>>().join(", "))],
    );
    // Both feasible r need equality, i.e. μ(Y) = h¹¹(Y) - 1.
    let max = classify_max_nodal(true);
    trace.extend(max.trace);
    push_external(
        trace,
        Citation::SurfaceClassification,
        "Y minimal with kappa >= 0 and mu(Y) = h11(Y) - 1 excludes P2 and F2",
        "Y is a fake projective plane, mu(X) = r - 1",
    );
    vec![CaseLabel::new(CaseTag::Case2a)
        .with("blowups", feasible_r.iter().map(u64::to_string).collect::<Vec<_>>().join(" or "))
        .with_status()]
}

fn irrational_ruled(trace: &mut Trace) -> Vec<CaseLabel> {
    push_external(
        trace,
        Citation::SurfaceClassification,
        "kappa = -inf, irrational: ruled over a curve of genus q >= 1; (-2)-curves lie in fibres of the Albanese map",
        "mu(X) = rho(X) - rho(Y), the number of blow-ups",
    );
    // The (-2)-(-1)-(-2) fibre: two blow-ups, two disjoint nodal curves.
    let string = GramMatrix::chain(&[-2, -1, -2]);
    let nodal_in_fibre = (0..string.dim()).filter(|&i| string.get(i, i) == &BigInt::from(-2)).count();
    let blowups_in_fibre = 2;
    let sig = lattice::signature(&string);
    trace.push(
        "fibre_string_certificate",
        Citation::RuledFibreCount,
        [("fibre", "(-2)-(-1)-(-2)")],
        [
            ("blowups", blowups_in_fibre.to_string()),
            ("nodal_curves", nodal_in_fibre.to_string()),
            ("signature", sig.to_string()),
            ("balanced", (nodal_in_fibre == blowups_in_fibre).to_string()),
        ],
    );
    vec![CaseLabel::new(CaseTag::Case2b).with("fibre_string", "(-2)-(-1)-(-2)").with_status()]
}
