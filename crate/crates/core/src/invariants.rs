//! Numerical invariants of smooth projective surfaces.
//!
//! From `(q, p_g, h¹¹)` Noether's formula gives
//! `e = 2 - 4q + 2p_g + h¹¹` and `K² = 12(1 - q + p_g) - e`.
//! Contracting `μ` disjoint nodal curves drops the Euler number by `μ` and
//! leaves `K²` alone (nodes have zero discrepancy).

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurfaceInvariants {
    pub q: u64,
    pub pg: u64,
    pub h11: u64,
}

impl SurfaceInvariants {
    /// `12 χ(O_X)`.
    pub fn twelve_chi(&self) -> i64 {
        12 * (1 - self.q as i64 + self.pg as i64)
    }

    /// Topological Euler number `e(X)`.
    pub fn euler(&self) -> i64 {
        2 - 4 * self.q as i64 + 2 * self.pg as i64 + self.h11 as i64
    }

    /// `K_X²` from Noether's formula.
    pub fn ksq(&self) -> i64 {
        self.twelve_chi() - self.euler()
    }

    pub fn b1(&self) -> u64 {
        2 * self.q
    }

    pub fn b2(&self) -> u64 {
        self.h11 + 2 * self.pg
    }
}

pub fn noether(q: u64, pg: u64, h11: u64) -> Result<SurfaceInvariants> {
    if h11 == 0 {
        return Err(Error::InvalidInvariants(String::from("h11 must be positive")));
    }
    Ok(SurfaceInvariants { q, pg, h11 })
}

/// A smooth surface together with `μ` disjoint nodal curves to contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ContractionData {
    pub x: SurfaceInvariants,
    pub mu: u64,
}

impl ContractionData {
    /// `e(S) = e(X) - μ`.
    pub fn euler_s(&self) -> i64 {
        self.x.euler() - self.mu as i64
    }

    /// `K_S² = K_X²`.
    pub fn ksq_s(&self) -> i64 {
        self.x.ksq()
    }

    /// `e_orb(S) = e(S) - μ/2`.
    pub fn orbifold_euler(&self) -> BigRational {
        BigRational::new(BigInt::from(2 * self.euler_s() - self.mu as i64), BigInt::from(2))
    }
}

/// Checks the Hodge index bound `0 ≤ μ ≤ h¹¹ - 1`.
pub fn contract(x: SurfaceInvariants, mu: u64) -> Result<ContractionData> {
    if mu + 1 > x.h11 {
        return Err(Error::HodgeIndex { mu, h11: x.h11 });
    }
    Ok(ContractionData { x, mu })
}

/// All `(q, p_g, h¹¹)` with `h¹¹ ≥ h11_min` and `4q + 4p_g + h¹¹/2 ≤ bound`,
/// in lexicographic order.
pub fn bmy_solution_enumerator(bound: &BigRational, h11_min: u64) -> Vec<SurfaceInvariants> {
    let mut out = Vec::new();
    if bound.is_negative() {
        return out;
    }
    // Work with 2·bound: 8q + 8p_g + h¹¹ ≤ 2B, and everything is an integer
    // once we take the floor of 2B.
    let two_b = (bound * BigRational::from_integer(BigInt::from(2))).floor().to_integer();
    let Ok(two_b) = u64::try_from(two_b) else {
        return out;
    };
    for q in 0..=two_b / 8 {
        for pg in 0..=(two_b - 8 * q) / 8 {
            let budget = two_b - 8 * q - 8 * pg;
            for h11 in h11_min.max(1)..=budget {
                out.push(SurfaceInvariants { q, pg, h11 });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};

    fn triple(s: &SurfaceInvariants) -> (u64, u64, u64) {
        (s.q, s.pg, s.h11)
    }

    #[test]
    fn noether_examples() {
        let fpp = noether(0, 0, 1).unwrap();
        assert_eq!((fpp.ksq(), fpp.euler()), (9, 3));
        let ball = noether(0, 1, 2).unwrap();
        assert_eq!((ball.ksq(), ball.euler()), (18, 6));
        let enriques = noether(0, 0, 10).unwrap();
        assert_eq!((enriques.ksq(), enriques.euler()), (0, 12));
        let bielliptic = noether(1, 0, 2).unwrap();
        assert_eq!((bielliptic.ksq(), bielliptic.euler()), (0, 0));
        assert!(noether(0, 0, 0).is_err());
    }

    #[test]
    fn noether_consistency_on_the_box() {
        for q in 0..=4 {
            for pg in 0..=4 {
                for h11 in 1..=20 {
                    let x = noether(q, pg, h11).unwrap();
                    assert_eq!(x.ksq() + x.euler(), 12 * (1 - q as i64 + pg as i64));
                    assert_eq!(x.euler(), 2 - 2 * x.b1() as i64 + x.b2() as i64);
                }
            }
        }
    }

    #[test]
    fn contraction_examples() {
        let c = contract(noether(0, 0, 1).unwrap(), 0).unwrap();
        assert_eq!(c.euler_s(), 3);
        let c = contract(noether(0, 0, 10).unwrap(), 8).unwrap();
        assert_eq!((c.euler_s(), c.orbifold_euler()), (4, int(0)));
        let c = contract(noether(0, 0, 7).unwrap(), 5).unwrap();
        assert_eq!((c.euler_s(), c.orbifold_euler(), c.ksq_s()), (4, ratio(3, 2), 3));
        assert_eq!(contract(noether(0, 0, 3).unwrap(), 3), Err(Error::HodgeIndex { mu: 3, h11: 3 }));
    }

    #[test]
    fn enumerator_examples() {
        let sols: Vec<_> = bmy_solution_enumerator(&int(5), 2).iter().map(triple).collect();
        let mut expected: Vec<_> = (2..=10).map(|h| (0, 0, h)).collect();
        expected.extend([(0, 1, 2), (1, 0, 2)]);
        assert_eq!(sols, expected);
        let sols: Vec<_> = bmy_solution_enumerator(&ratio(1, 2), 1).iter().map(triple).collect();
        assert_eq!(sols, [(0, 0, 1)]);
        assert!(bmy_solution_enumerator(&int(0), 1).is_empty());
        assert!(bmy_solution_enumerator(&int(-3), 1).is_empty());
    }
}
