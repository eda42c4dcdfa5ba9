//! Singular fibres of relatively minimal elliptic fibrations.
//!
//! Each Kodaira type carries its dual graph, built from the type parameters.
//! The nodal capacity of a fibre (how many pairwise disjoint smooth
//! `(-2)`-curves it contains) is the independence number of that graph
//! restricted to the `(-2)`-components. `I_0`, `I_1` and `II` have a single
//! component that is not a `(-2)`-curve, so their capacity is 0.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FibreType {
    /// `I_n`; `I_0` is a smooth elliptic curve.
    I(u32),
    /// `I_n*`.
    IStar(u32),
    II,
    III,
    IV,
    IVStar,
    IIIStar,
    IIStar,
}

impl FibreType {
    pub fn euler(&self) -> u64 {
        match *self {
            FibreType::I(n) => u64::from(n),
            FibreType::IStar(n) => u64::from(n) + 6,
            FibreType::II => 2,
            FibreType::III => 3,
            FibreType::IV => 4,
            FibreType::IVStar => 8,
            FibreType::IIIStar => 9,
            FibreType::IIStar => 10,
        }
    }

    /// Dual graph of the fibre's components.
    pub fn dual_graph(&self) -> DualGraph {
        match *self {
            FibreType::I(0) | FibreType::I(1) | FibreType::II => DualGraph::irreducible_singular(),
            FibreType::I(n) => DualGraph::cycle(n as usize),
            FibreType::III => DualGraph::cycle(2),
            FibreType::IV => DualGraph::cycle(3),
            FibreType::IStar(n) => {
                // D̃_{n+4}: chain c_0 … c_n, two leaves on each end.
                let n = n as usize;
                let mut edges: Vec<(usize, usize)> = (1..=n).map(|i| (i - 1, i)).collect();
                let leaf = n + 1;
                edges.extend([(0, leaf), (0, leaf + 1), (n, leaf + 2), (n, leaf + 3)]);
                DualGraph::minus_two(n + 5, edges)
            }
            FibreType::IVStar => DualGraph::star(&[2, 2, 2]),
            FibreType::IIIStar => DualGraph::star(&[1, 3, 3]),
            FibreType::IIStar => DualGraph::star(&[1, 2, 5]),
        }
    }

    /// Every singular type with Euler number in `1..=max_euler`, in search order.
    pub fn singular_types_up_to(max_euler: u64) -> Vec<FibreType> {
        let mut out: Vec<FibreType> = (1..=max_euler).map(|n| FibreType::I(n as u32)).collect();
        out.extend((0..).map(FibreType::IStar).take_while(|t| t.euler() <= max_euler));
        out.extend(
            [FibreType::II, FibreType::III, FibreType::IV, FibreType::IVStar, FibreType::IIIStar, FibreType::IIStar]
                .into_iter()
                .filter(|t| t.euler() <= max_euler),
        );
        out
    }
}

impl fmt::Display for FibreType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FibreType::I(n) => write!(f, "I{n}"),
            FibreType::IStar(n) => write!(f, "I{n}*"),
            FibreType::II => f.write_str("II"),
            FibreType::III => f.write_str("III"),
            FibreType::IV => f.write_str("IV"),
            FibreType::IVStar => f.write_str("IV*"),
            FibreType::IIIStar => f.write_str("III*"),
            FibreType::IIStar => f.write_str("II*"),
        }
    }
}

impl FromStr for FibreType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t = match s {
            "II" => FibreType::II,
            "III" => FibreType::III,
            "IV" => FibreType::IV,
            "IV*" => FibreType::IVStar,
            "III*" => FibreType::IIIStar,
            "II*" => FibreType::IIStar,
            _ => {
                let rest = s.strip_prefix('I').ok_or_else(|| format!("unknown fibre type {s:?}"))?;
                let (digits, star) = match rest.strip_suffix('*') {
                    Some(d) => (d, true),
                    None => (rest, false),
                };
                let n: u32 = digits.parse().map_err(|_| format!("unknown fibre type {s:?}"))?;
                if star {
                    FibreType::IStar(n)
                } else {
                    FibreType::I(n)
                }
            }
        };
        Ok(t)
    }
}

/// Components of a fibre and their incidences. Multiple intersections are
/// recorded as a single edge since only adjacency matters here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    /// Whether component `i` is a smooth rational `(-2)`-curve.
    pub minus_two: Vec<bool>,
    pub edges: Vec<(usize, usize)>,
}

impl DualGraph {
    fn irreducible_singular() -> Self {
        DualGraph { minus_two: alloc::vec![false], edges: Vec::new() }
    }

    fn minus_two(n: usize, edges: Vec<(usize, usize)>) -> Self {
        DualGraph { minus_two: alloc::vec![true; n], edges }
    }

    fn cycle(n: usize) -> Self {
        let edges = match n {
            2 => alloc::vec![(0, 1)],
            _ => (0..n).map(|i| (i, (i + 1) % n)).collect(),
        };
        Self::minus_two(n, edges)
    }

    /// Centre vertex 0 with arms of the given lengths.
    fn star(arms: &[usize]) -> Self {
        let mut edges = Vec::new();
        let mut next = 1;
        for &len in arms {
            let mut prev = 0;
            for _ in 0..len {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
        }
        Self::minus_two(next, edges)
    }

    pub fn len(&self) -> usize {
        self.minus_two.len()
    }

    pub fn is_empty(&self) -> bool {
        self.minus_two.is_empty()
    }

    fn adjacency(&self) -> Vec<u64> {
        assert!(self.len() <= 64, "dual graphs are limited to 64 components");
        let mut adj = alloc::vec![0u64; self.len()];
        for &(a, b) in &self.edges {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        adj
    }

    /// Largest set of pairwise disjoint `(-2)`-components.
    pub fn max_disjoint_nodal(&self) -> usize {
        let adj = self.adjacency();
        let start = self.minus_two.iter().enumerate().filter(|(_, &m)| m).fold(0u64, |acc, (i, _)| acc | 1 << i);
        independence_number(&adj, start)
    }
}

/// Branch and reduce: a vertex of degree ≤ 1 can always be taken; otherwise
/// branch on a vertex of maximum degree.
fn independence_number(adj: &[u64], alive: u64) -> usize {
    if alive == 0 {
        return 0;
    }
    let mut best_v = 0;
    let mut best_deg = 0;
    let mut bits = alive;
    while bits != 0 {
        let v = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let deg = (adj[v] & alive).count_ones();
        if deg <= 1 {
            return 1 + independence_number(adj, alive & !(adj[v] | 1 << v));
        }
        if deg > best_deg {
            best_deg = deg;
            best_v = v;
        }
    }
    let without = independence_number(adj, alive & !(1 << best_v));
    let with = 1 + independence_number(adj, alive & !(adj[best_v] | 1 << best_v));
    without.max(with)
}

/// A fibre type with its computed numerical data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KodairaFibre {
    pub kind: FibreType,
    pub euler: u64,
    pub nodal_capacity: usize,
}

impl KodairaFibre {
    pub fn new(kind: FibreType) -> Self {
        KodairaFibre { kind, euler: kind.euler(), nodal_capacity: kind.dual_graph().max_disjoint_nodal() }
    }
}

/// Multisets of singular fibres with total Euler number `total_euler` whose
/// nodal capacities add up to at least `nodal_demand`.
///
/// Smooth fibres contribute nothing and are left out. Fibres within a
/// multiset follow [`FibreType::singular_types_up_to`] order, and multisets
/// come out in depth-first order over that list.
pub fn elliptic_fibre_search(total_euler: u64, nodal_demand: usize) -> Vec<Vec<KodairaFibre>> {
    let types: Vec<KodairaFibre> =
        FibreType::singular_types_up_to(total_euler).into_iter().map(KodairaFibre::new).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    walk(&types, 0, total_euler, 0, nodal_demand, &mut current, &mut out);
    out
}

fn walk(
    types: &[KodairaFibre],
    from: usize,
    remaining: u64,
    capacity: usize,
    demand: usize,
    current: &mut Vec<KodairaFibre>,
    out: &mut Vec<Vec<KodairaFibre>>,
) {
    if remaining == 0 {
        if capacity >= demand {
            out.push(current.clone());
        }
        return;
    }
    for (i, f) in types.iter().enumerate().skip(from) {
        if f.euler <= remaining {
            current.push(*f);
            walk(types, i, remaining - f.euler, capacity + f.nodal_capacity, demand, current, out);
            current.pop();
        }
    }
}

pub fn multiset_string(fibres: &[KodairaFibre]) -> String {
    if fibres.is_empty() {
        return String::from("{}");
    }
    let names: Vec<String> = fibres.iter().map(|f| format!("{}", f.kind)).collect();
    format!("{{{}}}", names.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_table() {
        let table = [
            ("I0", 0),
            ("I1", 1),
            ("I5", 5),
            ("I0*", 6),
            ("I3*", 9),
            ("II", 2),
            ("III", 3),
            ("IV", 4),
            ("IV*", 8),
            ("III*", 9),
            ("II*", 10),
        ];
        for (name, e) in table {
            let t: FibreType = name.parse().unwrap();
            assert_eq!(t.euler(), e, "{name}");
            assert_eq!(format!("{t}"), name);
        }
        assert!("V".parse::<FibreType>().is_err());
        assert!("I*".parse::<FibreType>().is_err());
    }

    #[test]
    fn component_counts() {
        // Components: I_n has n, I_n* has n+5, IV*/III*/II* have 7/8/9.
        assert_eq!(FibreType::I(7).dual_graph().len(), 7);
        assert_eq!(FibreType::IStar(2).dual_graph().len(), 7);
        assert_eq!(FibreType::IVStar.dual_graph().len(), 7);
        assert_eq!(FibreType::IIIStar.dual_graph().len(), 8);
        assert_eq!(FibreType::IIStar.dual_graph().len(), 9);
        for t in FibreType::singular_types_up_to(12) {
            let g = t.dual_graph();
            let n = g.len();
            let tree = matches!(t, FibreType::IStar(_) | FibreType::IVStar | FibreType::IIIStar | FibreType::IIStar);
            if tree {
                assert_eq!(g.edges.len(), n - 1, "{t}");
            }
        }
    }

    #[test]
    fn capacities() {
        let cap = |t: FibreType| KodairaFibre::new(t).nodal_capacity;
        assert_eq!(cap(FibreType::I(1)), 0);
        assert_eq!(cap(FibreType::II), 0);
        assert_eq!(cap(FibreType::I(2)), 1);
        assert_eq!(cap(FibreType::I(7)), 3);
        assert_eq!(cap(FibreType::III), 1);
        assert_eq!(cap(FibreType::IV), 1);
        assert_eq!(cap(FibreType::IStar(0)), 4);
        assert_eq!(cap(FibreType::IStar(1)), 4);
        assert_eq!(cap(FibreType::IStar(2)), 5);
        assert_eq!(cap(FibreType::IVStar), 4);
        assert_eq!(cap(FibreType::IIIStar), 5);
        assert_eq!(cap(FibreType::IIStar), 5);
    }

    #[test]
    fn two_i0_star_is_forced() {
        let hits = elliptic_fibre_search(12, 8);
        assert_eq!(hits.len(), 1);
        let kinds: Vec<FibreType> = hits[0].iter().map(|f| f.kind).collect();
        assert_eq!(kinds, [FibreType::IStar(0), FibreType::IStar(0)]);
        assert_eq!(multiset_string(&hits[0]), "{I0*, I0*}");
        assert!(elliptic_fibre_search(12, 9).is_empty());
    }

    #[test]
    fn trivial_budget() {
        assert_eq!(elliptic_fibre_search(0, 0), alloc::vec![Vec::<KodairaFibre>::new()]);
        assert!(elliptic_fibre_search(0, 1).is_empty());
    }

    #[test]
    fn i0_star_alone_reaches_four() {
        let hits = elliptic_fibre_search(6, 4);
        assert!(hits.iter().any(|m| m.len() == 1 && m[0].kind == FibreType::IStar(0)));
        assert!(hits.iter().all(|m| m.iter().map(|f| f.nodal_capacity).sum::<usize>() >= 4));
    }
}
