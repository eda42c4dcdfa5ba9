//! Full replays of the three classification arguments.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::{
    classify_max_nodal, classify_near_max, nonminimal_decision_tree, push_enumeration, push_external, Canonical,
    CaseTag, ClassificationVerdict, NonminimalKind,
};
use crate::error::{Error, Result};
use crate::trace::{Citation, Trace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReplayTarget {
    /// `μ = h¹¹ - 1`: `P²`, `F_2` or a fake projective plane.
    MaxNodal,
    /// `μ = h¹¹ - 2`: cases `1-a` … `2-f`.
    NearMaxNodal,
    /// Rational homology planes with only nodes.
    NodalHomologyPlane,
}

impl ReplayTarget {
    pub const ALL: [ReplayTarget; 3] =
        [ReplayTarget::MaxNodal, ReplayTarget::NearMaxNodal, ReplayTarget::NodalHomologyPlane];

    pub fn id(&self) -> &'static str {
        match self {
            ReplayTarget::MaxNodal => "theorem-1.3",
            ReplayTarget::NearMaxNodal => "theorem-1.4",
            ReplayTarget::NodalHomologyPlane => "cor-1.2",
        }
    }

    pub fn title(&self) -> &'static str {
        match self {
            ReplayTarget::MaxNodal => "surfaces with h11 - 1 disjoint nodal curves",
            ReplayTarget::NearMaxNodal => "surfaces with h11 - 2 disjoint nodal curves",
            ReplayTarget::NodalHomologyPlane => "rational homology planes whose singular points are all nodes",
        }
    }
}

impl fmt::Display for ReplayTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ReplayTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem-1.3" | "1.3" | "max-nodal" => Ok(ReplayTarget::MaxNodal),
            "theorem-1.4" | "1.4" | "near-max-nodal" => Ok(ReplayTarget::NearMaxNodal),
            "cor-1.2" | "corollary-1.2" | "homology-plane" => Ok(ReplayTarget::NodalHomologyPlane),
            _ => Err(Error::UnknownLabel(String::from(s))),
        }
    }
}

pub fn replay(target: ReplayTarget) -> ClassificationVerdict {
    match target {
        ReplayTarget::MaxNodal => max_nodal(),
        ReplayTarget::NearMaxNodal => near_max_nodal(),
        ReplayTarget::NodalHomologyPlane => homology_plane(),
    }
}

fn max_nodal() -> ClassificationVerdict {
    let mut trace = Trace::new();
    let mut cases = Vec::new();
    for nef in [true, false] {
        let v = classify_max_nodal(nef);
        trace.extend(v.trace);
        cases.extend(v.cases);
    }
    ClassificationVerdict { cases, trace }
}

fn homology_plane() -> ClassificationVerdict {
    let mut trace = Trace::new();
    push_external(
        &mut trace,
        Citation::SurfaceClassification,
        "S has nodes only, so its minimal resolution X has q = pg = 0 and mu(X) = h11(X) - 1",
        "classify X by the maximal-nodal argument",
    );
    let mut v = max_nodal();
    trace.extend(v.trace);
    for case in &mut v.cases {
        if case.tag == CaseTag::F2 {
            push_external(
                &mut trace,
                Citation::SurfaceClassification,
                "contracting the (-2)-section of F2",
                "quadric cone in P3 over a conic",
            );
            case.tag = CaseTag::Cone;
        }
    }
    v.cases.sort_by_key(|c| c.tag);
    ClassificationVerdict { cases: v.cases, trace }
}

fn near_max_nodal() -> ClassificationVerdict {
    let mut trace = Trace::new();
    let mut cases = Vec::new();
    let solutions = push_enumeration(&mut trace, 2, 2);

    let general: Vec<u64> = solutions.iter().filter(|x| x.q == 0 && x.pg == 0).map(|x| x.h11).collect();
    let families = [
        solutions.iter().filter(|x| x.q == 1).map(|x| format!("(i) q=1, pg=0, h11={}", x.h11)).collect::<Vec<_>>(),
        solutions.iter().filter(|x| x.pg == 1).map(|x| format!("(ii) q=0, pg=1, h11={}", x.h11)).collect(),
        match (general.first(), general.last()) {
            (Some(lo), Some(hi)) => alloc::vec![format!("(iii) q=pg=0, {lo} <= h11 <= {hi}")],
            _ => Vec::new(),
        },
    ];
    trace.push(
        "solution_families",
        Citation::OrbifoldBmyNef,
        [("solutions", solutions.len().to_string())],
        families.iter().flatten().enumerate().map(|(i, f)| (format!("family_{}", i + 1), f.clone())),
    );

    for x in &solutions {
        let v = classify_near_max(*x, Canonical::Nef).expect("enumerated solutions satisfy BMY");
        trace.extend(v.trace);
        cases.extend(v.cases);
    }
    for kind in [NonminimalKind::KappaNonneg, NonminimalKind::IrrationalRuled, NonminimalKind::Rational] {
        let v = nonminimal_decision_tree(kind);
        trace.extend(v.trace);
        cases.extend(v.cases);
    }
    ClassificationVerdict { cases, trace }
}
