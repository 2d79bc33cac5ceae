//! Finite Abelian groups built from cyclic `Z_{p^a}` and elementary `Z_p^r`
//! blocks, their endomorphisms, and the search for automorphisms annihilated
//! by `x^4 - x^3 + x^2 - x + 1`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::arith::{gcd, is_prime, Modulus};
use crate::error::{check_budget, Error, Result};

/// Limits for exhaustive scans over group elements or candidate maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Maximum number of candidate matrices scanned per elementary block.
    pub max_candidates: u128,
    /// Maximum group order for element-wise scans.
    pub max_elements: u128,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_candidates: 1 << 24,
            max_elements: 1 << 22,
        }
    }
}

impl SearchBudget {
    /// Budget large enough for `Z_3^4` (3^16 candidates).
    pub fn heavy() -> Self {
        SearchBudget {
            max_candidates: 1 << 36,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimaryComponent {
    /// `Z_{p^exponent}`
    Cyclic { prime: u64, exponent: u32 },
    /// `Z_p^rank`, rank >= 2
    Elementary { prime: u64, rank: usize },
}

impl PrimaryComponent {
    pub fn cyclic(prime: u64, exponent: u32) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::InvalidArgument(format!("{prime} is not prime")));
        }
        if exponent == 0 {
            return Err(Error::InvalidArgument("exponent must be >= 1".into()));
        }
        prime
            .checked_pow(exponent)
            .ok_or_else(|| Error::InvalidArgument(format!("{prime}^{exponent} overflows")))?;
        Ok(PrimaryComponent::Cyclic { prime, exponent })
    }

    /// Rank 1 is normalized to `Cyclic { exponent: 1 }`.
    pub fn elementary(prime: u64, rank: usize) -> Result<Self> {
        if rank == 1 {
            return Self::cyclic(prime, 1);
        }
        if !is_prime(prime) {
            return Err(Error::InvalidArgument(format!("{prime} is not prime")));
        }
        if rank == 0 {
            return Err(Error::InvalidArgument("rank must be >= 1".into()));
        }
        prime
            .checked_pow(rank as u32)
            .ok_or_else(|| Error::InvalidArgument(format!("{prime}^{rank} overflows")))?;
        Ok(PrimaryComponent::Elementary { prime, rank })
    }

    pub fn prime(&self) -> u64 {
        match *self {
            PrimaryComponent::Cyclic { prime, .. } | PrimaryComponent::Elementary { prime, .. } => {
                prime
            }
        }
    }

    /// Modulus of each coordinate.
    pub fn modulus(&self) -> u64 {
        match *self {
            PrimaryComponent::Cyclic { prime, exponent } => prime.pow(exponent),
            PrimaryComponent::Elementary { prime, .. } => prime,
        }
    }

    /// Number of coordinates.
    pub fn dim(&self) -> usize {
        match *self {
            PrimaryComponent::Cyclic { .. } => 1,
            PrimaryComponent::Elementary { rank, .. } => rank,
        }
    }

    pub fn order(&self) -> u64 {
        self.modulus().pow(self.dim() as u32)
    }

    /// Cyclic exponents of this block in the `Z_{p^a1} x ... x Z_{p^am}` form.
    pub fn exponents(&self) -> Vec<u32> {
        match *self {
            PrimaryComponent::Cyclic { exponent, .. } => vec![exponent],
            PrimaryComponent::Elementary { rank, .. } => vec![1; rank],
        }
    }
}

impl fmt::Display for PrimaryComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PrimaryComponent::Cyclic { .. } => write!(f, "Z{}", self.modulus()),
            PrimaryComponent::Elementary { prime, rank } => write!(f, "Z{prime}^{rank}"),
        }
    }
}

/// A direct product of primary blocks.
///
/// Blocks may repeat a prime (e.g. `Z2 x Z8`); such groups can be screened and
/// scanned element-wise, but only groups whose blocks have pairwise distinct
/// primes are searched for pentagonal automorphisms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    components: Vec<PrimaryComponent>,
    order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub coords: Vec<Vec<u64>>,
}

impl AbelianGroup {
    pub fn new(components: Vec<PrimaryComponent>) -> Result<Self> {
        let mut order: u64 = 1;
        for c in &components {
            order = order
                .checked_mul(c.order())
                .ok_or_else(|| Error::InvalidArgument("group order overflows u64".into()))?;
        }
        Ok(AbelianGroup { components, order })
    }

    pub fn trivial() -> Self {
        AbelianGroup {
            components: Vec::new(),
            order: 1,
        }
    }

    /// `Z_n` as the product of its primary parts.
    pub fn cyclic(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModulus(0));
        }
        let comps = crate::arith::factorize(n)
            .into_iter()
            .map(|(p, e)| PrimaryComponent::cyclic(p, e))
            .collect::<Result<Vec<_>>>()?;
        Self::new(comps)
    }

    pub fn elementary(prime: u64, rank: usize) -> Result<Self> {
        Self::new(vec![PrimaryComponent::elementary(prime, rank)?])
    }

    pub fn components(&self) -> &[PrimaryComponent] {
        &self.components
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn has_distinct_primes(&self) -> bool {
        let mut primes: Vec<u64> = self.components.iter().map(|c| c.prime()).collect();
        let len = primes.len();
        primes.sort_unstable();
        primes.dedup();
        primes.len() == len
    }

    /// Exponent multiset of the `p`-primary part, sorted nondecreasing.
    pub fn primary_exponents(&self, p: u64) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .components
            .iter()
            .filter(|c| c.prime() == p)
            .flat_map(|c| c.exponents())
            .collect();
        out.sort_unstable();
        out
    }

    pub fn primes(&self) -> Vec<u64> {
        let mut primes: Vec<u64> = self.components.iter().map(|c| c.prime()).collect();
        primes.sort_unstable();
        primes.dedup();
        primes
    }

    /// Direct product; the blocks of `other` follow those of `self`.
    pub fn product(&self, other: &AbelianGroup) -> Result<AbelianGroup> {
        let mut comps = self.components.clone();
        comps.extend_from_slice(&other.components);
        Self::new(comps)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: self.components.iter().map(|c| vec![0; c.dim()]).collect(),
        }
    }

    fn radices(&self) -> impl Iterator<Item = u64> + '_ {
        self.components
            .iter()
            .flat_map(|c| std::iter::repeat_n(c.modulus(), c.dim()))
    }

    /// Element with mixed-radix index `idx`; the first coordinate is the most
    /// significant digit, so index order is lexicographic on coordinates.
    pub fn element_at(&self, idx: u64) -> GroupElement {
        let radices: Vec<u64> = self.radices().collect();
        let mut digits = vec![0u64; radices.len()];
        let mut rest = idx;
        for (d, &r) in digits.iter_mut().zip(&radices).rev() {
            *d = rest % r;
            rest /= r;
        }
        let mut it = digits.into_iter();
        GroupElement {
            coords: self
                .components
                .iter()
                .map(|c| it.by_ref().take(c.dim()).collect())
                .collect(),
        }
    }

    pub fn index_of(&self, x: &GroupElement) -> u64 {
        self.radices()
            .zip(x.coords.iter().flatten())
            .fold(0, |acc, (r, &v)| acc * r + v)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(move |i| self.element_at(i))
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.coords.len() == self.components.len()
            && self
                .components
                .iter()
                .zip(&x.coords)
                .all(|(c, v)| v.len() == c.dim() && v.iter().all(|&e| e < c.modulus()))
    }

    fn zip_with(
        &self,
        x: &GroupElement,
        y: &GroupElement,
        f: impl Fn(Modulus, u64, u64) -> u64,
    ) -> GroupElement {
        GroupElement {
            coords: self
                .components
                .iter()
                .zip(x.coords.iter().zip(&y.coords))
                .map(|(c, (a, b))| {
                    let m = md(c.modulus());
                    a.iter().zip(b).map(|(&u, &v)| f(m, u, v)).collect()
                })
                .collect(),
        }
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.zip_with(x, y, |m, u, v| m.add(u, v))
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.zip_with(x, y, |m, u, v| m.sub(u, v))
    }

    pub fn neg(&self, x: &GroupElement) -> GroupElement {
        self.sub(&self.zero(), x)
    }

    /// `k * x`
    pub fn times(&self, k: u64, x: &GroupElement) -> GroupElement {
        self.zip_with(x, x, |m, u, _| m.mul(m.reduce(k), u))
    }

    pub fn element_order(&self, x: &GroupElement) -> u64 {
        let mut ord = 1u64;
        for (c, v) in self.components.iter().zip(&x.coords) {
            let m = c.modulus();
            for &e in v {
                let o = m / gcd(e, m);
                ord = ord / gcd(ord, o) * o;
            }
        }
        ord
    }

    /// Histogram `order -> number of elements of that order`.
    pub fn order_histogram(&self, budget: &SearchBudget) -> Result<BTreeMap<u64, u64>> {
        check_budget("group order", self.order as u128, budget.max_elements)?;
        let mut hist = BTreeMap::new();
        for x in self.elements() {
            *hist.entry(self.element_order(&x)).or_insert(0) += 1;
        }
        Ok(hist)
    }

    pub fn count_elements_of_order(&self, k: u64, budget: &SearchBudget) -> Result<u64> {
        Ok(self.order_histogram(budget)?.get(&k).copied().unwrap_or(0))
    }
}

// Every component modulus is at least 2.
#[inline]
fn md(n: u64) -> Modulus {
    Modulus::new(n).expect("component modulus is nonzero")
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "Z1");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Square matrix over `Z_p`, row-major, acting on column vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    dim: usize,
    entries: Vec<u64>,
}

impl Matrix {
    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::ShapeMismatch("matrix must be square".into()));
        }
        Ok(Matrix {
            dim,
            entries: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, 1)
    }

    pub fn scalar(dim: usize, c: u64) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = c;
        }
        Matrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.entries[row * self.dim + col]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.dim).map(<[u64]>::to_vec).collect()
    }

    fn reduced(&self, p: u64) -> Self {
        Matrix {
            dim: self.dim,
            entries: self.entries.iter().map(|&e| e % p).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix, p: u64) -> Matrix {
        let n = self.dim;
        let m = md(p);
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let e = &mut entries[i * n + j];
                    *e = m.add(*e, m.mul(a, other.get(k, j)));
                }
            }
        }
        Matrix { dim: n, entries }
    }

    pub fn mul_vec(&self, v: &[u64], p: u64) -> Vec<u64> {
        let m = md(p);
        (0..self.dim)
            .map(|i| (0..self.dim).fold(0, |acc, j| m.add(acc, m.mul(self.get(i, j), v[j]))))
            .collect()
    }

    fn combine(&self, other: &Matrix, p: u64, f: impl Fn(Modulus, u64, u64) -> u64) -> Matrix {
        let m = md(p);
        Matrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f(m, a, b))
                .collect(),
        }
    }

    /// Determinant over the prime field `Z_p`.
    pub fn det_mod_prime(&self, p: u64) -> u64 {
        let m = md(p);
        let n = self.dim;
        let mut a = self.reduced(p).entries;
        let mut det = 1u64;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return 0;
            };
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = m.neg(det);
            }
            let pv = a[col * n + col];
            det = m.mul(det, pv);
            let inv = m.inverse(pv).expect("nonzero element of a prime field");
            for r in col + 1..n {
                let factor = m.mul(a[r * n + col], inv);
                if factor == 0 {
                    continue;
                }
                for j in col..n {
                    let sub = m.mul(factor, a[col * n + j]);
                    a[r * n + j] = m.sub(a[r * n + j], sub);
                }
            }
        }
        det
    }
}

/// The action of an endomorphism on one block.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockMap {
    Scalar(u64),
    Matrix(Matrix),
}

/// A block-diagonal endomorphism of an [`AbelianGroup`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Endomorphism {
    group: AbelianGroup,
    blocks: Vec<BlockMap>,
}

impl PartialOrd for Endomorphism {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Endomorphism {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.flat_entries().cmp(&other.flat_entries())
    }
}

impl Endomorphism {
    pub fn new(group: &AbelianGroup, blocks: Vec<BlockMap>) -> Result<Self> {
        if blocks.len() != group.components.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} blocks for {} components",
                blocks.len(),
                group.components.len()
            )));
        }
        let blocks = group
            .components
            .iter()
            .zip(blocks)
            .map(|(c, b)| match (c, b) {
                (PrimaryComponent::Cyclic { .. }, BlockMap::Scalar(a)) => {
                    Ok(BlockMap::Scalar(a % c.modulus()))
                }
                (PrimaryComponent::Elementary { rank, prime }, BlockMap::Matrix(m))
                    if m.dim == *rank =>
                {
                    Ok(BlockMap::Matrix(m.reduced(*prime)))
                }
                (c, b) => Err(Error::ShapeMismatch(format!(
                    "block {b:?} does not fit {c}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Endomorphism {
            group: group.clone(),
            blocks,
        })
    }

    /// `c * identity` on every block.
    pub fn scalar(group: &AbelianGroup, c: u64) -> Self {
        let blocks = group
            .components
            .iter()
            .map(|comp| match *comp {
                PrimaryComponent::Cyclic { .. } => BlockMap::Scalar(c % comp.modulus()),
                PrimaryComponent::Elementary { prime, rank } => {
                    BlockMap::Matrix(Matrix::scalar(rank, c % prime))
                }
            })
            .collect();
        Endomorphism {
            group: group.clone(),
            blocks,
        }
    }

    pub fn identity(group: &AbelianGroup) -> Self {
        Self::scalar(group, 1)
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn blocks(&self) -> &[BlockMap] {
        &self.blocks
    }

    /// Concatenated block entries (row-major for matrices).
    pub fn flat_entries(&self) -> Vec<u64> {
        self.blocks
            .iter()
            .flat_map(|b| match b {
                BlockMap::Scalar(a) => vec![*a],
                BlockMap::Matrix(m) => m.entries.clone(),
            })
            .collect()
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        if !self.group.contains(x) {
            return Err(Error::ShapeMismatch(format!(
                "element {:?} is not in {}",
                x.coords, self.group
            )));
        }
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &GroupElement) -> GroupElement {
        GroupElement {
            coords: self
                .group
                .components
                .iter()
                .zip(&self.blocks)
                .zip(&x.coords)
                .map(|((c, b), v)| match b {
                    BlockMap::Scalar(a) => vec![md(c.modulus()).mul(*a, v[0])],
                    BlockMap::Matrix(m) => m.mul_vec(v, c.prime()),
                })
                .collect(),
        }
    }

    fn same_group(&self, other: &Endomorphism) -> Result<()> {
        if self.group != other.group {
            return Err(Error::ShapeMismatch(format!(
                "endomorphisms of {} and {}",
                self.group, other.group
            )));
        }
        Ok(())
    }

    fn zip_blocks(
        &self,
        other: &Endomorphism,
        scalar: impl Fn(Modulus, u64, u64) -> u64,
        matrix: impl Fn(&Matrix, &Matrix, u64) -> Matrix,
    ) -> Result<Endomorphism> {
        self.same_group(other)?;
        let blocks = self
            .group
            .components
            .iter()
            .zip(self.blocks.iter().zip(&other.blocks))
            .map(|(c, pair)| match pair {
                (BlockMap::Scalar(a), BlockMap::Scalar(b)) => {
                    BlockMap::Scalar(scalar(md(c.modulus()), *a, *b))
                }
                (BlockMap::Matrix(a), BlockMap::Matrix(b)) => {
                    BlockMap::Matrix(matrix(a, b, c.prime()))
                }
                _ => unreachable!("blocks validated against the same group"),
            })
            .collect();
        Ok(Endomorphism {
            group: self.group.clone(),
            blocks,
        })
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism> {
        self.zip_blocks(other, |m, a, b| m.mul(a, b), |a, b, p| a.mul(b, p))
    }

    pub fn add(&self, other: &Endomorphism) -> Result<Endomorphism> {
        self.zip_blocks(
            other,
            |m, a, b| m.add(a, b),
            |a, b, p| a.combine(b, p, |m, x, y| m.add(x, y)),
        )
    }

    pub fn sub(&self, other: &Endomorphism) -> Result<Endomorphism> {
        self.zip_blocks(
            other,
            |m, a, b| m.sub(a, b),
            |a, b, p| a.combine(b, p, |m, x, y| m.sub(x, y)),
        )
    }

    pub fn neg(&self) -> Endomorphism {
        Endomorphism::scalar(&self.group, 0)
            .sub(self)
            .expect("same group")
    }

    pub fn pow(&self, k: u32) -> Endomorphism {
        let mut acc = Endomorphism::identity(&self.group);
        for _ in 0..k {
            acc = acc.compose(self).expect("same group");
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.flat_entries().iter().all(|&e| e == 0)
    }

    /// `φ⁴ - φ³ + φ² - φ + ε`
    pub fn pentagonal_poly(&self) -> Endomorphism {
        let id = Endomorphism::identity(&self.group);
        // Horner: (((φ - ε)φ + ε)φ - ε)φ + ε
        let mut acc = self.sub(&id).expect("same group");
        for plus in [true, false, true] {
            acc = acc.compose(self).expect("same group");
            acc = if plus { acc.add(&id) } else { acc.sub(&id) }.expect("same group");
        }
        acc
    }

    pub fn is_automorphism(&self) -> bool {
        self.group
            .components
            .iter()
            .zip(&self.blocks)
            .all(|(c, b)| match b {
                BlockMap::Scalar(a) => gcd(*a, c.modulus()) == 1,
                BlockMap::Matrix(m) => m.det_mod_prime(c.prime()) != 0,
            })
    }

    /// Only the neutral element is fixed.
    pub fn is_regular(&self) -> bool {
        let shifted = self
            .sub(&Endomorphism::identity(&self.group))
            .expect("same group");
        Endomorphism::is_automorphism(&shifted)
    }

    pub fn satisfies_pentagonal_poly(&self) -> bool {
        self.pentagonal_poly().is_zero()
    }
}

/// `|Aut(Z_{p^a1} x ... x Z_{p^am})|` for nondecreasing exponents.
pub fn aut_group_order(p: u64, alphas: &[u32]) -> Result<u128> {
    if alphas.is_empty() || alphas.contains(&0) || alphas.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument(format!(
            "exponents must be positive and nondecreasing: {alphas:?}"
        )));
    }
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let overflow = || Error::InvalidArgument("automorphism group order overflows u128".into());
    let m = alphas.len();
    let pw = |e: u64| -> Result<u128> { (p as u128).checked_pow(e as u32).ok_or_else(overflow) };
    // 1-based positions: d_k = last index with the same exponent, c_k = first.
    let d: Vec<usize> = (0..m)
        .map(|k| (0..m).rev().find(|&l| alphas[l] == alphas[k]).unwrap() + 1)
        .collect();
    let c: Vec<usize> = (0..m)
        .map(|k| (0..m).find(|&l| alphas[l] == alphas[k]).unwrap() + 1)
        .collect();
    let mut total: u128 = 1;
    for k in 0..m {
        let term = pw(d[k] as u64)? - pw(k as u64)?;
        total = total.checked_mul(term).ok_or_else(overflow)?;
    }
    for j in 0..m {
        let term = pw(alphas[j] as u64 * (m - d[j]) as u64)?;
        total = total.checked_mul(term).ok_or_else(overflow)?;
    }
    for i in 0..m {
        let term = pw((alphas[i] as u64 - 1) * (m + 1 - c[i]) as u64)?;
        total = total.checked_mul(term).ok_or_else(overflow)?;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Screen {
    Possible,
    /// Some order `k > 1` is carried by exactly 1, 2 or 3 elements.
    RefutedByOrderCount,
    /// A mixed 2- or 3-primary part whose automorphism group has order prime to 10.
    RefutedByAutOrder,
}

/// Necessary-condition screen for groups that might induce a pentagonal
/// quasigroup.
pub fn screen_group(group: &AbelianGroup, budget: &SearchBudget) -> Result<Screen> {
    for p in group.primes() {
        if p != 2 && p != 3 {
            continue;
        }
        let alphas = group.primary_exponents(p);
        let cyclic = alphas.len() == 1;
        let elementary = alphas.iter().all(|&a| a == 1);
        if !cyclic && !elementary && aut_group_order(p, &alphas)? % 10 != 0 {
            return Ok(Screen::RefutedByAutOrder);
        }
    }
    let hist = group.order_histogram(budget)?;
    if hist
        .iter()
        .any(|(&k, &count)| k > 1 && (1..=3).contains(&count))
    {
        return Ok(Screen::RefutedByOrderCount);
    }
    Ok(Screen::Possible)
}

/// Number of candidate maps scanned for one block.
pub fn candidate_count(component: &PrimaryComponent) -> u128 {
    match *component {
        PrimaryComponent::Cyclic { .. } => component.modulus() as u128,
        PrimaryComponent::Elementary { prime, rank } => {
            (prime as u128).saturating_pow((rank * rank) as u32)
        }
    }
}

/// Progress callback: `(chunks finished, total chunks)`.
pub type Progress<'a> = &'a (dyn Fn(usize, usize) + Sync);

/// Block maps of one component satisfying the pentagonal polynomial, in
/// lexicographic order of their entries.
pub fn component_pentagonal_maps(
    component: &PrimaryComponent,
    budget: &SearchBudget,
    progress: Option<Progress<'_>>,
) -> Result<Vec<BlockMap>> {
    check_budget(
        "candidate maps",
        candidate_count(component),
        budget.max_candidates,
    )?;
    let maps = match *component {
        PrimaryComponent::Cyclic { .. } => {
            let n = md(component.modulus());
            (0..n.get())
                .filter(|&a| crate::arith::pentagonal_quartic(n.residue(a)).value() == 0)
                .map(BlockMap::Scalar)
                .collect()
        }
        PrimaryComponent::Elementary { prime, rank } => {
            let p = u8::try_from(prime)
                .ok()
                .filter(|&p| p < 16)
                .ok_or_else(|| Error::Unsupported(format!("matrix search over Z_{prime}")))?;
            search_matrices(p, rank, progress)
                .into_iter()
                .map(|entries| {
                    BlockMap::Matrix(Matrix {
                        dim: rank,
                        entries: entries.into_iter().map(u64::from).collect(),
                    })
                })
                .collect()
        }
    };
    Ok(maps)
}

/// Exhaustive search over `rank x rank` matrices mod `p` (row-major
/// lexicographic order). Each candidate is rejected as soon as the
/// polynomial fails to annihilate one basis vector.
fn search_matrices(p: u8, rank: usize, progress: Option<Progress<'_>>) -> Vec<Vec<u8>> {
    let row_count = (p as usize).pow(rank as u32);
    let done = std::sync::atomic::AtomicUsize::new(0);
    let chunks: Vec<Vec<Vec<u8>>> = (0..row_count)
        .into_par_iter()
        .map(|first_row| {
            let mut m = vec![0u8; rank * rank];
            let mut v = first_row;
            for j in (0..rank).rev() {
                m[j] = (v % p as usize) as u8;
                v /= p as usize;
            }
            let mut found = Vec::new();
            loop {
                if annihilates_basis(&m, p, rank) {
                    found.push(m.clone());
                }
                // odometer over the entries after the first row
                let mut carry = true;
                let mut i = rank * rank;
                while carry && i > rank {
                    i -= 1;
                    m[i] += 1;
                    if m[i] == p {
                        m[i] = 0;
                    } else {
                        carry = false;
                    }
                }
                if carry {
                    break;
                }
            }
            if let Some(cb) = progress {
                let d = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
                cb(d, row_count);
            }
            found
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

#[inline]
fn annihilates_basis(m: &[u8], p: u8, rank: usize) -> bool {
    let p = p as u32;
    // powers[k] = M^k e_basis
    let mut powers = [[0u32; 16]; 5];
    for basis in 0..rank {
        powers[0] = [0; 16];
        powers[0][basis] = 1;
        for k in 1..5 {
            for i in 0..rank {
                let row = &m[i * rank..(i + 1) * rank];
                let acc: u32 = row
                    .iter()
                    .zip(&powers[k - 1][..rank])
                    .map(|(&a, &b)| a as u32 * b)
                    .sum();
                powers[k][i] = acc % p;
            }
        }
        for i in 0..rank {
            let s =
                powers[4][i] + powers[2][i] + powers[0][i] + 2 * p - powers[3][i] - powers[1][i];
            if !s.is_multiple_of(p) {
                return false;
            }
        }
    }
    true
}

fn require_enumerable(group: &AbelianGroup) -> Result<()> {
    if !group.has_distinct_primes() {
        return Err(Error::Unsupported(format!(
            "{group}: automorphism search needs one block per prime"
        )));
    }
    Ok(())
}

/// All automorphisms of `group` satisfying `φ⁴ - φ³ + φ² - φ + ε = 0`, in
/// lexicographic order of concatenated block entries.
pub fn enumerate_pentagonal_automorphisms(
    group: &AbelianGroup,
    budget: &SearchBudget,
) -> Result<Vec<Endomorphism>> {
    require_enumerable(group)?;
    let per_block = group
        .components
        .iter()
        .map(|c| component_pentagonal_maps(c, budget, None))
        .collect::<Result<Vec<_>>>()?;
    let total: u128 = per_block.iter().map(|v| v.len() as u128).product();
    check_budget("pentagonal automorphism list", total, budget.max_candidates)?;
    let mut out: Vec<Vec<BlockMap>> = vec![Vec::new()];
    for maps in &per_block {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                maps.iter().map(move |m| {
                    let mut next = prefix.clone();
                    next.push(m.clone());
                    next
                })
            })
            .collect();
    }
    let result: Vec<Endomorphism> = out
        .into_iter()
        .map(|blocks| Endomorphism {
            group: group.clone(),
            blocks,
        })
        .collect();
    for phi in &result {
        assert!(
            phi.is_automorphism() && phi.is_regular(),
            "pentagonal map must be a regular automorphism"
        );
    }
    Ok(result)
}

/// Number of pentagonal automorphisms without materializing the product list.
pub fn count_pentagonal_automorphisms(
    group: &AbelianGroup,
    budget: &SearchBudget,
    progress: Option<Progress<'_>>,
) -> Result<u64> {
    require_enumerable(group)?;
    let mut total: u64 = 1;
    for c in &group.components {
        let n = component_pentagonal_maps(c, budget, progress)?.len() as u64;
        total = total.saturating_mul(n);
    }
    Ok(total)
}
