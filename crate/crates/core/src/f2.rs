//! Mod-2 reduction of the nodal sublattice.
//!
//! Let `L` be the cohomology lattice mod torsion and `M ⊂ L` the span of the
//! `μ` disjoint nodal classes `C_1 … C_μ`. The image of `M/2M ≅ F_2^μ` in
//! `L/2L` is totally isotropic, so it has dimension at most `⌊rank L / 2⌋` and
//! the kernel of `τ: M/2M → L/2L` has dimension at least
//! `μ - ⌊rank L / 2⌋`.
//!
//! A kernel element `Σ C_{i_j}` (k terms) equals `2D` modulo torsion. With
//! `D·K = 0`, adjunction makes `D²` even, so `(Σ C)² = -2k = 4D²` is divisible
//! by 8 and `k ≡ 0 (mod 4)`. The kernel is therefore a doubly-even subspace
//! of `F_2^μ`; if no doubly-even subspace of the forced dimension exists the
//! configuration is impossible.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest `μ` the exhaustive search accepts.
pub const SEARCH_BUDGET: usize = 16;

/// Vector in `F_2^len`; coordinate `i` is bit `i` of `bits`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct F2Vector {
    bits: u32,
    len: u8,
    weight: u8,
}

impl F2Vector {
    pub fn new(bits: u32, len: usize) -> Self {
        assert!(len <= 32, "F2Vector holds at most 32 coordinates");
        let bits = if len == 32 { bits } else { bits & ((1u32 << len) - 1) };
        F2Vector { bits, len: len as u8, weight: bits.count_ones() as u8 }
    }

    pub fn zero(len: usize) -> Self {
        Self::new(0, len)
    }

    pub fn from_coords(coords: &[usize], len: usize) -> Self {
        Self::new(coords.iter().fold(0, |acc, &c| acc | (1 << c)), len)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn weight(&self) -> usize {
        self.weight as usize
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    /// Standard dot product over F2.
    pub fn dot(&self, other: &F2Vector) -> bool {
        (self.bits & other.bits).count_ones() % 2 == 1
    }

    pub fn is_doubly_even(&self) -> bool {
        self.weight.is_multiple_of(4)
    }

    /// Parses `"1101"`, coordinate 0 first.
    pub fn parse(s: &str) -> Option<Self> {
        if s.len() > 32 {
            return None;
        }
        let mut bits = 0;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return None,
            }
        }
        Some(Self::new(bits, s.len()))
    }
}

impl core::ops::Add for F2Vector {
    type Output = F2Vector;

    fn add(self, rhs: F2Vector) -> F2Vector {
        debug_assert_eq!(self.len, rhs.len);
        F2Vector::new(self.bits ^ rhs.bits, self.len())
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Rank over F2 of a list of vectors.
pub fn rank(vectors: &[F2Vector]) -> usize {
    let mut reduced: Vec<u32> = Vec::new();
    for v in vectors {
        let mut x = v.bits;
        for &r in &reduced {
            x = x.min(x ^ r);
        }
        if x != 0 {
            reduced.push(x);
            // Keep the reduction basis sorted by leading bit, largest first.
            reduced.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    reduced.len()
}

/// Subspace of `F_2^ambient` given by an independent basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct F2Subspace {
    ambient: usize,
    basis: Vec<F2Vector>,
}

impl F2Subspace {
    pub fn zero(ambient: usize) -> Self {
        F2Subspace { ambient, basis: Vec::new() }
    }

    /// Returns `None` if the vectors are dependent or of the wrong length.
    pub fn from_basis(ambient: usize, basis: Vec<F2Vector>) -> Option<Self> {
        if basis.iter().any(|v| v.len() != ambient) || rank(&basis) != basis.len() {
            return None;
        }
        Some(F2Subspace { ambient, basis })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[F2Vector] {
        &self.basis
    }

    /// All `2^dim` elements, zero first.
    pub fn elements(&self) -> impl Iterator<Item = F2Vector> + '_ {
        (0u32..1 << self.basis.len()).map(move |mask| {
            self.basis
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(F2Vector::zero(self.ambient), |acc, (_, v)| acc + *v)
        })
    }

    pub fn is_doubly_even(&self) -> bool {
        self.elements().all(|v| v.is_doubly_even())
    }

    /// The standard form vanishes on the subspace.
    pub fn is_totally_isotropic(&self) -> bool {
        self.basis.iter().all(|a| self.basis.iter().all(|b| !a.dot(b)))
    }

    /// Embeds into `F_2^(ambient + 1)` by appending a zero coordinate.
    pub fn pad(&self) -> Self {
        F2Subspace {
            ambient: self.ambient + 1,
            basis: self.basis.iter().map(|v| F2Vector::new(v.bits, self.ambient + 1)).collect(),
        }
    }
}

/// Lower bound `max(0, μ - ⌊ambient_rank/2⌋)` on `dim ker τ`.
pub fn min_kernel_dimension(mu: usize, ambient_rank: usize) -> usize {
    mu.saturating_sub(ambient_rank / 2)
}

/// Exhaustive search for a `target_dim`-dimensional subspace of `F_2^mu`
/// whose vectors all have weight divisible by 4.
///
/// Candidates are reduced row echelon bases. Pivot column sets are visited
/// in lexicographic order; within a pivot set the rows are filled top-down,
/// each row's free coordinates counted upward with the lowest free column as
/// the most significant digit. The first basis found is returned, so results
/// are reproducible.
///
/// A basis spans a doubly-even space iff every basis vector is doubly even and
/// every pair meets in an even number of coordinates (`wt(a+b) = wt a + wt b
/// - 2|a∧b|`). Such a space is self-orthogonal, hence `2·target_dim ≤ mu`.
pub fn doubly_even_subspace_search(mu: usize, target_dim: usize) -> Result<Option<F2Subspace>> {
    if mu > SEARCH_BUDGET {
        return Err(Error::SearchBudgetExceeded { mu, budget: SEARCH_BUDGET });
    }
    if target_dim == 0 {
        return Ok(Some(F2Subspace::zero(mu)));
    }
    if 2 * target_dim > mu {
        return Ok(None);
    }
    let mut pivots: Vec<usize> = (0..target_dim).collect();
    loop {
        if let Some(rows) = search_with_pivots(mu, &pivots) {
            let basis = rows.into_iter().map(|b| F2Vector::new(b, mu)).collect();
            return Ok(Some(F2Subspace { ambient: mu, basis }));
        }
        if !next_combination(&mut pivots, mu) {
            return Ok(None);
        }
    }
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in (i + 1)..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn search_with_pivots(mu: usize, pivots: &[usize]) -> Option<Vec<u32>> {
    let pivot_mask: u32 = pivots.iter().fold(0, |m, &p| m | 1 << p);
    // Candidate rows per pivot, already in search order.
    let mut candidates: Vec<Vec<u32>> = Vec::with_capacity(pivots.len());
    for &p in pivots {
        let free: Vec<usize> = ((p + 1)..mu).filter(|c| pivot_mask >> c & 1 == 0).collect();
        if free.len() < 3 {
            return None;
        }
        let f = free.len();
        let rows: Vec<u32> = (0u32..1 << f)
            .map(|counter| {
                let spread = free
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| counter >> (f - 1 - t) & 1 == 1)
                    .fold(0u32, |acc, (_, &c)| acc | 1 << c);
                spread | 1 << p
            })
            .filter(|row| row.count_ones() % 4 == 0)
            .collect();
        candidates.push(rows);
    }
    let mut chosen = Vec::with_capacity(pivots.len());
    if extend(&candidates, &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}

fn extend(candidates: &[Vec<u32>], chosen: &mut Vec<u32>) -> bool {
    let depth = chosen.len();
    if depth == candidates.len() {
        return true;
    }
    for &row in &candidates[depth] {
        if chosen.iter().all(|&r| (r & row).count_ones() % 2 == 0) {
            chosen.push(row);
            if extend(candidates, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Outcome of the mod-2 argument for `μ` disjoint nodal curves in a lattice of
/// the given rank. `feasible` means "not obstructed by this argument".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionReport {
    pub mu: usize,
    pub ambient_rank: usize,
    pub min_kernel_dim: usize,
    pub feasible: bool,
    pub witness: Option<F2Subspace>,
    pub note: String,
}

pub fn nodal_embedding_obstruction(mu: usize, ambient_rank: usize) -> Result<ObstructionReport> {
    if ambient_rank == 0 {
        return Err(Error::InvalidInvariants(String::from("ambient rank must be at least 1")));
    }
    let min_kernel_dim = min_kernel_dimension(mu, ambient_rank);
    let witness = doubly_even_subspace_search(mu, min_kernel_dim)?;
    let note = match &witness {
        Some(_) if min_kernel_dim == 0 => String::from("no kernel forced"),
        Some(w) => format!("doubly-even subspace of dimension {} in F2^{mu} exists", w.dimension()),
        None => format!(
            "kernel must have dimension >= {min_kernel_dim}, but F2^{mu} has no doubly-even subspace of that dimension"
        ),
    };
    Ok(ObstructionReport { mu, ambient_rank, min_kernel_dim, feasible: witness.is_some(), witness, note })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    #[test]
    fn kernel_bounds() {
        assert_eq!(min_kernel_dimension(5, 7), 2);
        assert_eq!(min_kernel_dimension(3, 5), 1);
        assert_eq!(min_kernel_dimension(0, 3), 0);
        assert_eq!(min_kernel_dimension(2, 10), 0);
    }

    #[test]
    fn searches_from_the_obstruction_argument() {
        assert_eq!(doubly_even_subspace_search(5, 2).unwrap(), None);
        assert_eq!(doubly_even_subspace_search(3, 1).unwrap(), None);
        let zero = doubly_even_subspace_search(0, 0).unwrap().unwrap();
        assert_eq!(zero.dimension(), 0);
        assert_eq!(zero.ambient(), 0);
    }

    #[test]
    fn seven_three_is_the_simplex_code() {
        let w = doubly_even_subspace_search(7, 3).unwrap().unwrap();
        assert_eq!(w.dimension(), 3);
        assert_eq!(rank(w.basis()), 3);
        let weights: Vec<usize> = w.elements().skip(1).map(|v| v.weight()).collect();
        assert_eq!(weights, [4; 7]);
    }

    #[test]
    fn first_hit_is_deterministic() {
        let w = doubly_even_subspace_search(8, 2).unwrap().unwrap();
        let rows: Vec<String> = w.basis().iter().map(|v| format!("{v}")).collect();
        assert_eq!(rows, ["10000111", "01001011"]);
        assert_eq!(doubly_even_subspace_search(8, 2).unwrap(), Some(w));
    }

    #[test]
    fn budget_enforced() {
        assert_eq!(doubly_even_subspace_search(17, 1), Err(Error::SearchBudgetExceeded { mu: 17, budget: 16 }));
        assert!(doubly_even_subspace_search(16, 4).unwrap().is_some());
    }

    #[test]
    fn obstruction_cases() {
        let r = nodal_embedding_obstruction(5, 7).unwrap();
        assert!(!r.feasible && r.witness.is_none() && r.min_kernel_dim == 2);
        let r = nodal_embedding_obstruction(3, 5).unwrap();
        assert!(!r.feasible && r.min_kernel_dim == 1);
        let r = nodal_embedding_obstruction(7, 9).unwrap();
        assert!(r.feasible && r.witness.as_ref().unwrap().dimension() == 3);
        let r = nodal_embedding_obstruction(8, 10).unwrap();
        assert!(r.feasible && r.min_kernel_dim == 3);
        assert!(nodal_embedding_obstruction(1, 0).is_err());
    }

    #[test]
    fn sweep_of_the_near_maximal_regime() {
        let infeasible: Vec<usize> =
            (0..=8).filter(|&mu| !nodal_embedding_obstruction(mu, mu + 2).unwrap().feasible).collect();
        assert_eq!(infeasible, [3, 5]);
    }

    #[test]
    fn bitstrings() {
        let v = F2Vector::parse("1101").unwrap();
        assert_eq!(v.weight(), 3);
        assert_eq!(v.to_string(), "1101");
        assert!(F2Vector::parse("10a").is_none());
        assert!(F2Subspace::from_basis(4, alloc::vec![v, v]).is_none());
    }

    proptest! {
        #[test]
        fn witnesses_are_doubly_even_and_independent(mu in 0usize..=12, d in 0usize..=4) {
            if let Some(w) = doubly_even_subspace_search(mu, d).unwrap() {
                prop_assert_eq!(w.dimension(), d);
                prop_assert_eq!(rank(w.basis()), d);
                prop_assert!(w.is_doubly_even());
                prop_assert!(w.is_totally_isotropic());
                prop_assert!(w.elements().all(|v| [0, 4, 8, 12, 16].contains(&v.weight())));
            }
        }

        #[test]
        fn search_is_monotone(mu in 0usize..=11, d in 1usize..=4) {
            if doubly_even_subspace_search(mu, d).unwrap().is_some() {
                prop_assert!(doubly_even_subspace_search(mu + 1, d).unwrap().is_some());
                prop_assert!(doubly_even_subspace_search(mu, d - 1).unwrap().is_some());
            }
        }

        #[test]
        fn padding_preserves_doubly_even(mu in 4usize..=12) {
            let w = doubly_even_subspace_search(mu, 1).unwrap().unwrap();
            prop_assert!(w.pad().is_doubly_even());
            prop_assert_eq!(w.pad().ambient(), mu + 1);
        }
    }
}
