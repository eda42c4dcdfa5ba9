//! Quotient singularities through their minimal resolutions.
//!
//! A singular point `p` is resolved by curves `E_1 … E_l`. The discrepancy
//! divisor `D_p = Σ a_j E_j` is the unique solution of
//! `D_p · E_i = 2 + E_i²`, and `K_S² = K_{S'}² - Σ_p D_p²`. Only chains
//! (cyclic quotients, Hirzebruch-Jung strings) get a local group order here:
//! for a chain it is the absolute determinant of the intersection matrix.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{self, GramMatrix};

/// Resolution graph of one singular point with its discrepancy data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionString {
    /// Self-intersections `E_j²` (all `≤ -2`), in graph order.
    pub self_intersections: Vec<i64>,
    /// Coefficients `a_j` of `D_p`, each in `[0, 1)`.
    pub discrepancies: Vec<BigRational>,
    /// `D_p² ≤ 0`.
    pub dsq: BigRational,
    /// `|G_p|`; `None` for non-chain graphs.
    pub group_order: Option<BigInt>,
}

impl ResolutionString {
    /// An ordinary node (`A_1`).
    pub fn node() -> Self {
        solve_discrepancies(&[-2]).expect("[-2] is a quotient string")
    }

    pub fn is_rational_double_point(&self) -> bool {
        self.discrepancies.iter().all(Zero::is_zero)
    }
}

/// Self-intersections `-b_i` of the Hirzebruch-Jung resolution of the cyclic
/// quotient singularity of type `(n, q)`: `n/q = b_1 - 1/(b_2 - 1/(…))`.
pub fn hj_string(n: u64, q: u64) -> Result<Vec<i64>> {
    if q == 0 || q >= n || n.gcd(&q) != 1 {
        return Err(Error::InvalidType { n, q });
    }
    let (mut num, mut den) = (n, q);
    let mut out = Vec::new();
    while den != 0 {
        let b = num.div_ceil(den);
        out.push(-(b as i64));
        (num, den) = (den, b * den - num);
    }
    Ok(out)
}

/// Solves the discrepancy system for a chain of curves.
pub fn solve_discrepancies(self_intersections: &[i64]) -> Result<ResolutionString> {
    if self_intersections.is_empty() {
        return Err(Error::NotQuotientString(String::from("empty chain")));
    }
    let g = GramMatrix::chain(self_intersections);
    let mut s = solve_graph(&g)?;
    s.group_order = Some(lattice::determinant(&g).abs());
    Ok(s)
}

/// Solves the discrepancy system for an arbitrary tree of curves given by its
/// Gram matrix. The group order is filled in only when the graph is a chain.
pub fn solve_discrepancies_gram(g: &GramMatrix) -> Result<ResolutionString> {
    let mut s = solve_graph(g)?;
    if is_chain(g) {
        s.group_order = Some(lattice::determinant(g).abs());
    }
    Ok(s)
}

fn solve_graph(g: &GramMatrix) -> Result<ResolutionString> {
    let n = g.dim();
    if n == 0 {
        return Err(Error::NotQuotientString(String::from("empty graph")));
    }
    let mut self_intersections = Vec::with_capacity(n);
    for i in 0..n {
        let b = i64::try_from(g.get(i, i))
            .map_err(|_| Error::NotQuotientString(format!("self-intersection of E_{} too large", i + 1)))?;
        if b > -2 {
            return Err(Error::NotQuotientString(format!("E_{}² = {b} > -2", i + 1)));
        }
        self_intersections.push(b);
        for j in 0..n {
            let e = g.get(i, j);
            if i != j && !(e.is_zero() || e.is_one()) {
                return Err(Error::NotQuotientString(format!("E_{}·E_{} = {e}", i + 1, j + 1)));
            }
        }
    }
    if !lattice::signature(g).is_negative_definite() {
        return Err(Error::NotQuotientString(String::from("intersection matrix not negative definite")));
    }
    let rhs: Vec<BigInt> = self_intersections.iter().map(|&b| BigInt::from(2 + b)).collect();
    let discrepancies = lattice::solve(g, &rhs).expect("negative definite matrices are invertible");
    let dsq = discrepancies.iter().zip(&rhs).map(|(a, r)| a * BigRational::from_integer(r.clone())).sum();
    Ok(ResolutionString { self_intersections, discrepancies, dsq, group_order: None })
}

fn is_chain(g: &GramMatrix) -> bool {
    let n = g.dim();
    let degree = |i: usize| (0..n).filter(|&j| j != i && !g.get(i, j).is_zero()).count();
    let edges: usize = (0..n).map(degree).sum::<usize>() / 2;
    // A connected graph with n-1 edges and max degree 2 is a path; negative
    // definiteness already rules out cycles of (-2)-curves.
    edges + 1 == n && (0..n).all(|i| degree(i) <= 2) && connected(g)
}

fn connected(g: &GramMatrix) -> bool {
    let n = g.dim();
    let mut seen = alloc::vec![false; n];
    let mut stack = alloc::vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !seen[j] && !g.get(i, j).is_zero() {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// `K_S² = K_{S'}² - Σ_p D_p²`.
pub fn ksq_after_contraction(ksq_resolution: &BigRational, singularities: &[ResolutionString]) -> BigRational {
    singularities.iter().fold(ksq_resolution.clone(), |acc, s| acc - &s.dsq)
}

/// Normal surface with quotient singularities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbifoldSurface {
    /// Topological Euler number `e(S)`.
    pub euler: i64,
    pub singularities: Vec<ResolutionString>,
    /// `K_S²`; required only for the nef branch of [`bmy_check`].
    pub ksq: Option<BigRational>,
}

impl OrbifoldSurface {
    pub fn with_nodes(euler: i64, nodes: usize, ksq: Option<BigRational>) -> Self {
        OrbifoldSurface { euler, singularities: alloc::vec![ResolutionString::node(); nodes], ksq }
    }
}

/// `e_orb(S) = e(S) - Σ_p (1 - 1/|G_p|)`.
pub fn orbifold_euler(s: &OrbifoldSurface) -> Result<BigRational> {
    let mut e = BigRational::from_integer(BigInt::from(s.euler));
    for p in &s.singularities {
        let order = p.group_order.as_ref().ok_or(Error::UnsupportedGroupOrder)?;
        e -= BigRational::one() - BigRational::new(BigInt::one(), order.clone());
    }
    Ok(e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CanonicalClass {
    /// `K_S` nef: `K_S² ≤ 3 e_orb(S)`.
    Nef,
    /// `-K_S` nef: `0 ≤ e_orb(S)`.
    AntiNef,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BmyVerdict {
    Satisfied,
    Violated,
    /// Both sides agree; for nef `K_S` this is the ball-quotient case.
    Equality,
}

impl BmyVerdict {
    pub fn holds(&self) -> bool {
        !matches!(self, BmyVerdict::Violated)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            BmyVerdict::Satisfied => "satisfied",
            BmyVerdict::Violated => "violated",
            BmyVerdict::Equality => "equality",
        }
    }
}

/// Evaluates the orbifold BMY inequality matching `class`.
pub fn bmy_check(s: &OrbifoldSurface, class: CanonicalClass) -> Result<BmyVerdict> {
    let e_orb = orbifold_euler(s)?;
    let (lhs, rhs) = match class {
        CanonicalClass::Nef => {
            let ksq = s
                .ksq
                .clone()
                .ok_or_else(|| Error::InvalidInvariants(String::from("K_S² is required for the nef inequality")))?;
            (ksq, e_orb * BigRational::from_integer(BigInt::from(3)))
        }
        CanonicalClass::AntiNef => (BigRational::zero(), e_orb),
    };
    Ok(match lhs.cmp(&rhs) {
        core::cmp::Ordering::Less => BmyVerdict::Satisfied,
        core::cmp::Ordering::Equal => BmyVerdict::Equality,
        core::cmp::Ordering::Greater => BmyVerdict::Violated,
    })
}

/// Largest `k ≥ 0` with `euler - k(1 - 1/min_group_order) ≥ 0`, i.e. the most
/// singular points `e_orb ≥ 0` allows. For a rational homology plane with
/// nodes this gives 6; the sharper bound 5 needs an argument not reproduced here.
pub fn max_singular_points_filter(euler: i64, min_group_order: u64) -> u64 {
    assert!(min_group_order >= 2, "local fundamental groups are nontrivial");
    if euler <= 0 {
        return 0;
    }
    // k (m-1)/m ≤ e  ⇔  k ≤ e m / (m-1)
    let m = u128::from(min_group_order);
    (euler as u128 * m / (m - 1)) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};

    #[test]
    fn hj_examples() {
        assert_eq!(hj_string(2, 1).unwrap(), [-2]);
        assert_eq!(hj_string(5, 2).unwrap(), [-3, -2]);
        assert_eq!(hj_string(4, 1).unwrap(), [-4]);
        assert_eq!(hj_string(7, 3).unwrap(), [-3, -2, -2]);
        assert_eq!(hj_string(5, 4).unwrap(), [-2, -2, -2, -2]);
    }

    #[test]
    fn hj_rejects_bad_types() {
        assert_eq!(hj_string(4, 2), Err(Error::InvalidType { n: 4, q: 2 }));
        assert_eq!(hj_string(3, 3), Err(Error::InvalidType { n: 3, q: 3 }));
        assert_eq!(hj_string(3, 0), Err(Error::InvalidType { n: 3, q: 0 }));
        assert!(hj_string(1, 1).is_err());
    }

    #[test]
    fn node_has_no_discrepancy() {
        let s = solve_discrepancies(&[-2]).unwrap();
        assert_eq!(s.discrepancies, [int(0)]);
        assert_eq!(s.dsq, int(0));
        assert_eq!(s.group_order, Some(BigInt::from(2)));
        assert!(s.is_rational_double_point());
    }

    #[test]
    fn single_minus_three() {
        let s = solve_discrepancies(&[-3]).unwrap();
        assert_eq!(s.discrepancies, [ratio(1, 3)]);
        assert_eq!(s.dsq, ratio(-1, 3));
        assert_eq!(s.group_order, Some(BigInt::from(3)));
    }

    #[test]
    fn five_two_string() {
        let s = solve_discrepancies(&[-3, -2]).unwrap();
        assert_eq!(s.discrepancies, [ratio(2, 5), ratio(1, 5)]);
        assert_eq!(s.dsq, ratio(-2, 5));
        assert_eq!(s.group_order, Some(BigInt::from(5)));
    }

    #[test]
    fn rejects_non_quotient_input() {
        assert!(solve_discrepancies(&[]).is_err());
        assert!(solve_discrepancies(&[-2, -1]).is_err());
        // Affine D4 (an I0* fibre) is negative semidefinite, not definite.
        let d4_affine = GramMatrix::from_graph(&[-2; 5], &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert!(matches!(solve_discrepancies_gram(&d4_affine), Err(Error::NotQuotientString(_))));
    }

    #[test]
    fn ade_trees_have_zero_discrepancy_and_no_order() {
        for label in ["D4", "D7", "E6", "E7", "E8"] {
            let g = lattice::ade_gram(label.parse().unwrap());
            let s = solve_discrepancies_gram(&g).unwrap();
            assert!(s.is_rational_double_point(), "{label}");
            assert_eq!(s.group_order, None, "{label}");
        }
        let a3 = solve_discrepancies_gram(&lattice::ade_gram("A3".parse().unwrap())).unwrap();
        assert_eq!(a3.group_order, Some(BigInt::from(4)));
    }

    #[test]
    fn orbifold_euler_examples() {
        let s = OrbifoldSurface::with_nodes(3, 1, None);
        assert_eq!(orbifold_euler(&s).unwrap(), ratio(5, 2));
        let s = OrbifoldSurface::with_nodes(4, 8, None);
        assert_eq!(orbifold_euler(&s).unwrap(), int(0));
        let s = OrbifoldSurface::with_nodes(3, 0, None);
        assert_eq!(orbifold_euler(&s).unwrap(), int(3));
        let mut s = OrbifoldSurface::with_nodes(3, 0, None);
        s.singularities.push(solve_discrepancies_gram(&lattice::ade_gram("E8".parse().unwrap())).unwrap());
        assert_eq!(orbifold_euler(&s), Err(Error::UnsupportedGroupOrder));
    }

    #[test]
    fn bmy_examples() {
        let fpp = OrbifoldSurface::with_nodes(3, 0, Some(int(9)));
        assert_eq!(bmy_check(&fpp, CanonicalClass::Nef).unwrap(), BmyVerdict::Equality);
        let ball = OrbifoldSurface::with_nodes(6, 0, Some(int(18)));
        assert_eq!(bmy_check(&ball, CanonicalClass::Nef).unwrap(), BmyVerdict::Equality);
        let seven = OrbifoldSurface::with_nodes(3, 7, Some(int(0)));
        assert_eq!(bmy_check(&seven, CanonicalClass::AntiNef).unwrap(), BmyVerdict::Violated);
        let p2 = OrbifoldSurface::with_nodes(3, 0, Some(int(9)));
        assert_eq!(bmy_check(&p2, CanonicalClass::AntiNef).unwrap(), BmyVerdict::Satisfied);
        let k3 = OrbifoldSurface::with_nodes(7, 5, Some(int(3)));
        assert_eq!(bmy_check(&k3, CanonicalClass::Nef).unwrap(), BmyVerdict::Satisfied);
        assert!(bmy_check(&OrbifoldSurface::with_nodes(3, 0, None), CanonicalClass::Nef).is_err());
    }

    #[test]
    fn singular_point_filter() {
        assert_eq!(max_singular_points_filter(3, 2), 6);
        assert_eq!(max_singular_points_filter(3, 3), 4);
        assert_eq!(max_singular_points_filter(0, 2), 0);
        assert_eq!(max_singular_points_filter(-1, 2), 0);
    }

    #[test]
    fn ksq_reconstruction() {
        let sings = [solve_discrepancies(&[-3, -2]).unwrap(), ResolutionString::node()];
        assert_eq!(ksq_after_contraction(&int(1), &sings), ratio(7, 5));
    }
}
