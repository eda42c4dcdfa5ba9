//! Integer lattices given by symmetric Gram matrices.
//!
//! Everything here is exact: determinants use fraction-free (Bareiss)
//! elimination, signatures come from congruence diagonalization over the
//! rationals, and the Smith form is computed over the integers. Curves are
//! basis vectors with their self-intersection on the diagonal, so a nodal
//! curve is `⟨-2⟩` and a canonical class with `K² = c` is `⟨c⟩`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Symmetric integer matrix. The rank-0 value is the empty lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GramMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl GramMatrix {
    /// The empty lattice: determinant 1, signature (0, 0, 0).
    pub fn empty() -> Self {
        GramMatrix { dim: 0, entries: Vec::new() }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::MalformedGram("no rows; use GramMatrix::empty() for the empty lattice".to_string()));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::MalformedGram(format!("row {i} has {} entries, expected {dim}", row.len())));
            }
            entries.extend(row);
        }
        let g = GramMatrix { dim, entries };
        for i in 0..dim {
            for j in (i + 1)..dim {
                if g.get(i, j) != g.get(j, i) {
                    return Err(Error::MalformedGram(format!("entry ({i}, {j}) != entry ({j}, {i})")));
                }
            }
        }
        Ok(g)
    }

    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    /// Diagonal lattice `⟨d_1⟩ ⊕ … ⊕ ⟨d_n⟩`.
    pub fn diagonal(diag: &[i64]) -> Self {
        let dim = diag.len();
        let mut entries = vec![BigInt::zero(); dim * dim];
        for (i, &d) in diag.iter().enumerate() {
            entries[i * dim + i] = BigInt::from(d);
        }
        GramMatrix { dim, entries }
    }

    /// The rank-one lattice `⟨c⟩`.
    pub fn scalar(c: i64) -> Self {
        Self::diagonal(&[c])
    }

    /// `A1^k`, the lattice spanned by `k` disjoint nodal curves.
    pub fn nodal(k: usize) -> Self {
        Self::diagonal(&vec![-2; k])
    }

    /// Chain of curves with the given self-intersections, consecutive curves meeting once.
    pub fn chain(self_intersections: &[i64]) -> Self {
        let mut g = Self::diagonal(self_intersections);
        for i in 1..g.dim {
            g.set(i - 1, i, BigInt::one());
        }
        g
    }

    /// Gram matrix of a graph of curves: the given diagonal, `+1` on every edge.
    pub fn from_graph(self_intersections: &[i64], edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::diagonal(self_intersections);
        for &(a, b) in edges {
            if a >= g.dim || b >= g.dim || a == b {
                return Err(Error::MalformedGram(format!("bad edge ({a}, {b})")));
            }
            g.set(a, b, BigInt::one());
        }
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.dim == 0
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.dim + j] = v.clone();
        self.entries[j * self.dim + i] = v;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> + '_ {
        // chunks(0) panics, so the empty lattice yields nothing via take(0).
        self.entries.chunks(self.dim.max(1)).take(self.dim)
    }

    fn to_dense(&self) -> Vec<Vec<BigInt>> {
        self.rows().map(<[BigInt]>::to_vec).collect()
    }
}

/// Inertia of a real quadratic form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    /// Dimension of the radical.
    pub zero: usize,
}

impl Signature {
    pub fn rank(&self) -> usize {
        self.positive + self.negative + self.zero
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.zero == 0
    }

    pub fn is_negative_definite(&self) -> bool {
        self.positive == 0 && self.zero == 0
    }
}

impl core::ops::Add for Signature {
    type Output = Signature;

    fn add(self, rhs: Signature) -> Signature {
        Signature {
            positive: self.positive + rhs.positive,
            negative: self.negative + rhs.negative,
            zero: self.zero + rhs.zero,
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.positive, self.negative, self.zero)
    }
}

/// Elementary divisors `d_1 | d_2 | … | d_n`, zeros last.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SmithForm {
    pub elementary_divisors: Vec<BigInt>,
}

impl SmithForm {
    /// Product of the nonzero divisors: the order of the torsion of the cokernel.
    pub fn torsion_order(&self) -> BigInt {
        self.elementary_divisors.iter().filter(|d| !d.is_zero()).product()
    }

    /// Divisors different from 1: the invariant factors of the discriminant group.
    pub fn nontrivial(&self) -> impl Iterator<Item = &BigInt> + '_ {
        self.elementary_divisors.iter().filter(|d| !d.is_one())
    }
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn determinant(g: &GramMatrix) -> BigInt {
    bareiss_determinant(g.to_dense())
}

pub(crate) fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match ((k + 1)..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                // Sylvester's identity guarantees exact division.
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Sign counts of the form, by congruence diagonalization over the rationals.
///
/// Pivots are taken lowest index first. A zero diagonal pivot is replaced by
/// swapping in the first later basis vector with nonzero square; failing
/// that, `e_i ← e_i + e_j` for the first `j` with `(e_i, e_j) ≠ 0`.
pub fn signature(g: &GramMatrix) -> Signature {
    let n = g.dim();
    let mut a: Vec<Vec<BigRational>> =
        g.rows().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let mut sig = Signature::default();
    for i in 0..n {
        if a[i][i].is_zero() {
            if let Some(j) = ((i + 1)..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(i, j);
                for row in a.iter_mut() {
                    row.swap(i, j);
                }
            } else if let Some(j) = ((i + 1)..n).find(|&j| !a[i][j].is_zero()) {
                // New diagonal is a_ii + 2 a_ij + a_jj = 2 a_ij.
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[i][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][i] += v;
                }
            } else {
                sig.zero += 1;
                continue;
            }
        }
        let pivot = a[i][i].clone();
        if pivot.is_positive() {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
        for r in (i + 1)..n {
            if a[r][i].is_zero() {
                continue;
            }
            let factor = &a[r][i] / &pivot;
            for c in i..n {
                let v = &factor * &a[i][c];
                a[r][c] -= v;
            }
            for rr in i..n {
                let v = &factor * &a[rr][i];
                a[rr][r] -= v;
            }
        }
    }
    sig
}

/// Smith normal form of the Gram matrix viewed as an integer matrix.
pub fn smith_normal_form(g: &GramMatrix) -> SmithForm {
    let n = g.dim();
    let mut a = g.to_dense();
    let mut t = 0;
    while t < n {
        let Some((pi, pj)) = min_abs_entry(&a, t) else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in (t + 1)..n {
                let (q, r) = a[i][t].div_mod_floor(&a[t][t]);
                for c in t..n {
                    let v = &q * &a[t][c];
                    a[i][c] -= v;
                }
                dirty |= !r.is_zero();
            }
            for j in (t + 1)..n {
                let (q, r) = a[t][j].div_mod_floor(&a[t][t]);
                for rr in t..n {
                    let v = &q * &a[rr][t];
                    a[rr][j] -= v;
                }
                dirty |= !r.is_zero();
            }
            if dirty {
                // A nonzero remainder is smaller than the pivot: move it in and retry.
                let (pi, pj) = min_abs_entry_in_cross(&a, t);
                a.swap(t, pi);
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                continue;
            }
            // Pivot now isolated; enforce divisibility of the remaining block.
            let bad = ((t + 1)..n)
                .flat_map(|i| ((t + 1)..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_multiple_of(&a[t][t]));
            match bad {
                Some((i, _)) => {
                    for c in t..n {
                        let v = a[i][c].clone();
                        a[t][c] += v;
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            a[t][t] = -a[t][t].clone();
        }
        t += 1;
    }
    let elementary_divisors = (0..n).map(|i| a[i][i].clone()).collect();
    SmithForm { elementary_divisors }
}

fn min_abs_entry(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let n = a.len();
    let mut best: Option<(usize, usize)> = None;
    for i in t..n {
        for j in t..n {
            if a[i][j].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smallest nonzero entry in row `t` or column `t` (the pivot row/column after a pass).
fn min_abs_entry_in_cross(a: &[Vec<BigInt>], t: usize) -> (usize, usize) {
    let n = a.len();
    let mut best = (t, t);
    let cross = ((t..n).map(|i| (i, t))).chain((t..n).map(|j| (t, j)));
    for (i, j) in cross {
        if !a[i][j].is_zero() && a[i][j].abs() < a[best.0][best.1].abs() {
            best = (i, j);
        }
    }
    best
}

/// Orthogonal direct sum; the empty lattice is the identity.
pub fn direct_sum(a: &GramMatrix, b: &GramMatrix) -> GramMatrix {
    let dim = a.dim + b.dim;
    let mut entries = vec![BigInt::zero(); dim * dim];
    for i in 0..a.dim {
        for j in 0..a.dim {
            entries[i * dim + j] = a.get(i, j).clone();
        }
    }
    for i in 0..b.dim {
        for j in 0..b.dim {
            entries[(a.dim + i) * dim + a.dim + j] = b.get(i, j).clone();
        }
    }
    GramMatrix { dim, entries }
}

/// Necessary condition for `g` to sit with finite index in a unimodular lattice:
/// `|det g|` must be a perfect square.
pub fn square_discriminant_test(g: &GramMatrix) -> Result<bool> {
    let det = determinant(g);
    if det.is_zero() {
        return Err(Error::RadicalNonzero);
    }
    Ok(is_perfect_square(&det.abs()))
}

pub fn is_perfect_square(x: &BigInt) -> bool {
    if x.is_negative() {
        return false;
    }
    let r = x.sqrt();
    &(&r * &r) == x
}

/// Root-lattice label `A_n`, `D_n` or `E_6/7/8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AdeLabel {
    A(usize),
    D(usize),
    E(usize),
}

impl AdeLabel {
    pub fn new(family: char, rank: usize) -> Result<Self> {
        let label = match family {
            'A' if rank >= 1 => AdeLabel::A(rank),
            'D' if rank >= 4 => AdeLabel::D(rank),
            'E' if (6..=8).contains(&rank) => AdeLabel::E(rank),
            _ => return Err(Error::InvalidAdeLabel(format!("{family}{rank}"))),
        };
        Ok(label)
    }

    pub fn rank(&self) -> usize {
        match *self {
            AdeLabel::A(n) | AdeLabel::D(n) | AdeLabel::E(n) => n,
        }
    }

    /// Dynkin diagram edges, vertices `0..rank`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.rank();
        match *self {
            AdeLabel::A(_) => (1..n).map(|i| (i - 1, i)).collect(),
            AdeLabel::D(_) => {
                // Chain 0..n-2, both n-2 and n-1 hang off n-3.
                let mut e: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
                e.push((n - 3, n - 1));
                e
            }
            AdeLabel::E(_) => {
                // Chain 0..n-2 with the last vertex attached to vertex 2.
                let mut e: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
                e.push((2, n - 1));
                e
            }
        }
    }
}

impl fmt::Display for AdeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AdeLabel::A(n) => write!(f, "A{n}"),
            AdeLabel::D(n) => write!(f, "D{n}"),
            AdeLabel::E(n) => write!(f, "E{n}"),
        }
    }
}

impl FromStr for AdeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidAdeLabel(String::from(s));
        let mut chars = s.chars();
        let family = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        let rest = chars.as_str();
        if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let rank: usize = rest.parse().map_err(|_| bad())?;
        AdeLabel::new(family, rank).map_err(|_| bad())
    }
}

/// Negative-definite root lattice: diagonal -2, +1 on Dynkin adjacencies.
pub fn ade_gram(label: AdeLabel) -> GramMatrix {
    let n = label.rank();
    GramMatrix::from_graph(&vec![-2; n], &label.edges()).expect("Dynkin edges are in range")
}

/// Solves `g · x = rhs` exactly. Returns `None` when `g` is singular.
///
/// Forward elimination is fraction-free on the augmented integer matrix;
/// only back substitution touches rationals.
pub fn solve(g: &GramMatrix, rhs: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = g.dim();
    assert_eq!(rhs.len(), n, "right-hand side length must match the Gram dimension");
    let mut a: Vec<Vec<BigInt>> = g
        .rows()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.to_vec();
            r.push(b.clone());
            r
        })
        .collect();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let i = ((k + 1)..n).find(|&i| !a[i][k].is_zero())?;
            a.swap(k, i);
        }
        for i in (k + 1)..n {
            for j in (k + 1)..=n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let mut x = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = BigRational::from_integer(a[i][n].clone());
        for j in (i + 1)..n {
            acc -= BigRational::from_integer(a[i][j].clone()) * &x[j];
        }
        x[i] = acc / BigRational::from_integer(a[i][i].clone());
    }
    Some(x)
}
