//! Cayley tables, exhaustive identity checks, Toyoda decomposition and
//! subquasigroup closure.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{check_budget, Error, Result};

/// Largest order for which mediality (four variables) is checked by default.
pub const DEFAULT_MEDIAL_LIMIT: usize = 128;

/// A binary operation on `{0, .., n-1}`.
pub trait Operation: Sync {
    fn order(&self) -> usize;
    fn apply(&self, x: usize, y: usize) -> usize;
}

impl<T: Operation + ?Sized> Operation for &T {
    fn order(&self) -> usize {
        (**self).order()
    }
    fn apply(&self, x: usize, y: usize) -> usize {
        (**self).apply(x, y)
    }
}

/// An `n x n` operation table; entry `(x, y)` holds `x·y`. Entries are in
/// range but the table need not be Latin.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CayleyTable {
    n: usize,
    entries: Vec<u32>,
}

impl Operation for CayleyTable {
    fn order(&self) -> usize {
        self.n
    }
    #[inline]
    fn apply(&self, x: usize, y: usize) -> usize {
        self.entries[x * self.n + y] as usize
    }
}

impl CayleyTable {
    pub fn new(n: usize, entries: Vec<u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ShapeMismatch("order must be at least 1".into()));
        }
        if entries.len() != n * n {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for order {n}",
                entries.len()
            )));
        }
        if let Some(&bad) = entries.iter().find(|&&v| v as usize >= n) {
            return Err(Error::ShapeMismatch(format!(
                "entry {bad} out of range for order {n}"
            )));
        }
        Ok(CayleyTable { n, entries })
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::ShapeMismatch(format!(
                "row of length {} in a table of order {n}",
                r.len()
            )));
        }
        Self::new(n, rows.concat())
    }

    /// Materializes any operation.
    pub fn from_operation<O: Operation + ?Sized>(op: &O) -> Self {
        let n = op.order();
        let entries = (0..n * n)
            .into_par_iter()
            .map(|i| op.apply(i / n, i % n) as u32)
            .collect();
        CayleyTable { n, entries }
    }

    pub fn get(&self, x: usize, y: usize) -> usize {
        self.apply(x, y)
    }

    pub fn row(&self, x: usize) -> &[u32] {
        &self.entries[x * self.n..(x + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.n).map(<[u32]>::to_vec).collect()
    }

    pub fn transpose(&self) -> CayleyTable {
        let n = self.n;
        let entries = (0..n * n)
            .map(|i| self.entries[(i % n) * n + i / n])
            .collect();
        CayleyTable { n, entries }
    }

    /// Table of `σ(x)·σ(y) = σ(x·y)` for a bijection `σ` given as a vector.
    pub fn relabel(&self, sigma: &[usize]) -> Result<CayleyTable> {
        let n = self.n;
        if sigma.len() != n || sigma.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(Error::ShapeMismatch(
                "relabeling must be a bijection".into(),
            ));
        }
        if sigma.iter().any(|&s| s >= n) {
            return Err(Error::ShapeMismatch("relabeling out of range".into()));
        }
        let mut entries = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                entries[sigma[x] * n + sigma[y]] = sigma[self.apply(x, y)] as u32;
            }
        }
        Ok(CayleyTable { n, entries })
    }

    /// Parses the text format: an optional `base 0|1` header line, the order
    /// `n`, then `n` rows of `n` whitespace-separated values.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let perr = |line: usize, msg: String| Error::Parse { line, msg };
        let (mut line_no, mut line) = lines.next().ok_or_else(|| perr(1, "empty input".into()))?;
        let mut base = 0u64;
        if let Some(rest) = line.strip_prefix("base") {
            base = match rest.trim() {
                "0" => 0,
                "1" => 1,
                other => return Err(perr(line_no, format!("unknown base {other:?}"))),
            };
            (line_no, line) = lines
                .next()
                .ok_or_else(|| perr(line_no + 1, "missing order line".into()))?;
        }
        let n: usize = line
            .parse()
            .map_err(|_| perr(line_no, format!("expected order, found {line:?}")))?;
        if n == 0 {
            return Err(perr(line_no, "order must be at least 1".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            let (ln, row) = lines
                .next()
                .ok_or_else(|| perr(line_no + r + 1, format!("expected {n} rows, found {r}")))?;
            let values = row
                .split_whitespace()
                .map(|tok| {
                    let v: u64 = tok
                        .parse()
                        .map_err(|_| perr(ln, format!("not a number: {tok:?}")))?;
                    if v < base || v - base >= n as u64 {
                        return Err(perr(ln, format!("value {v} out of range")));
                    }
                    Ok((v - base) as u32)
                })
                .collect::<Result<Vec<_>>>()?;
            if values.len() != n {
                return Err(perr(
                    ln,
                    format!("expected {n} values, found {}", values.len()),
                ));
            }
            entries.extend(values);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(perr(ln, "trailing data after table".into()));
        }
        Self::new(n, entries)
    }

    /// Renders the text format; `base` is 0 or 1.
    pub fn to_text(&self, base: u32) -> String {
        let mut out = String::new();
        if base == 1 {
            out.push_str("base 1\n");
        }
        out.push_str(&format!("{}\n", self.n));
        for row in self.entries.chunks(self.n) {
            let line: Vec<String> = row.iter().map(|v| (v + base).to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write_file(&self, path: &Path, base: u32) -> Result<()> {
        std::fs::write(path, self.to_text(base))?;
        Ok(())
    }
}

impl fmt::Display for CayleyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(0))
    }
}

pub fn validate_latin<O: Operation + ?Sized>(t: &O) -> bool {
    let n = t.order();
    let mut seen = vec![0usize; n];
    for x in 0..n {
        for y in 0..n {
            let v = t.apply(x, y);
            // row x uses stamp 2x+1, column x uses 2x+2
            if v >= n || seen[v] == 2 * x + 1 {
                return false;
            }
            seen[v] = 2 * x + 1;
        }
        for y in 0..n {
            let v = t.apply(y, x);
            if seen[v] == 2 * x + 2 {
                return false;
            }
            seen[v] = 2 * x + 2;
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityName {
    Idempotent,
    Medial,
    Pentagonal,
    Commutative,
    Quadratical,
    Hexagonal,
    GS,
    ARO,
    Stein,
    RightModular,
    C3,
}

impl IdentityName {
    pub const ALL: [IdentityName; 11] = [
        IdentityName::Idempotent,
        IdentityName::Medial,
        IdentityName::Pentagonal,
        IdentityName::Commutative,
        IdentityName::Quadratical,
        IdentityName::Hexagonal,
        IdentityName::GS,
        IdentityName::ARO,
        IdentityName::Stein,
        IdentityName::RightModular,
        IdentityName::C3,
    ];

    /// Number of variables in the defining identity.
    pub fn arity(self) -> u32 {
        match self {
            IdentityName::Idempotent => 1,
            IdentityName::Medial => 4,
            IdentityName::Quadratical | IdentityName::GS | IdentityName::RightModular => 3,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IdentityName::Idempotent => "idempotent",
            IdentityName::Medial => "medial",
            IdentityName::Pentagonal => "pentagonal",
            IdentityName::Commutative => "commutative",
            IdentityName::Quadratical => "quadratical",
            IdentityName::Hexagonal => "hexagonal",
            IdentityName::GS => "GS",
            IdentityName::ARO => "ARO",
            IdentityName::Stein => "Stein",
            IdentityName::RightModular => "right modular",
            IdentityName::C3 => "C3",
        }
    }

    pub fn identity(self) -> &'static str {
        match self {
            IdentityName::Idempotent => "xx = x",
            IdentityName::Medial => "xy.zu = xz.yu",
            IdentityName::Pentagonal => "(xy.x)y.x = y",
            IdentityName::Commutative => "xy = yx",
            IdentityName::Quadratical => "xy.x = zx.yz",
            IdentityName::Hexagonal => "x.yx = y",
            IdentityName::GS => "x(xy.z).z = y",
            IdentityName::ARO => "xy.y = yx.x",
            IdentityName::Stein => "x.xy = yx",
            IdentityName::RightModular => "xy.z = zy.x",
            IdentityName::C3 => "(xy.y)y = x",
        }
    }

    /// Whether the identity holds at one assignment; unused variables are ignored.
    #[inline]
    fn holds_at<O: Operation + ?Sized>(
        self,
        t: &O,
        x: usize,
        y: usize,
        z: usize,
        u: usize,
    ) -> bool {
        let m = |a, b| t.apply(a, b);
        match self {
            IdentityName::Idempotent => m(x, x) == x,
            IdentityName::Medial => m(m(x, y), m(z, u)) == m(m(x, z), m(y, u)),
            IdentityName::Pentagonal => m(m(m(m(x, y), x), y), x) == y,
            IdentityName::Commutative => m(x, y) == m(y, x),
            IdentityName::Quadratical => m(m(x, y), x) == m(m(z, x), m(y, z)),
            IdentityName::Hexagonal => m(x, m(y, x)) == y,
            IdentityName::GS => m(m(x, m(m(x, y), z)), z) == y,
            IdentityName::ARO => m(m(x, y), y) == m(m(y, x), x),
            IdentityName::Stein => m(x, m(x, y)) == m(y, x),
            IdentityName::RightModular => m(m(x, y), z) == m(m(z, y), x),
            IdentityName::C3 => m(m(m(x, y), y), y) == x,
        }
    }
}

impl fmt::Display for IdentityName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exhaustive check of `id` over all `n^arity` assignments.
pub fn satisfies<O: Operation + ?Sized>(t: &O, id: IdentityName) -> bool {
    let n = t.order();
    let ar = id.arity();
    (0..n).into_par_iter().all(|x| {
        let inner = n.pow(ar - 1);
        (0..inner).all(|rest| {
            let y = rest % n;
            let z = (rest / n) % n;
            let u = (rest / n / n) % n;
            id.holds_at(t, x, y, z, u)
        })
    })
}

/// [`satisfies`] with mediality refused above `medial_limit`.
pub fn check_identity<O: Operation + ?Sized>(
    t: &O,
    id: IdentityName,
    medial_limit: usize,
) -> Result<bool> {
    if id == IdentityName::Medial {
        check_budget(
            "order for mediality check",
            t.order() as u128,
            medial_limit as u128,
        )?;
    }
    Ok(satisfies(t, id))
}

/// Latin, idempotent, medial and pentagonal, all checked exhaustively.
pub fn is_pentagonal_quasigroup<O: Operation + ?Sized>(t: &O) -> bool {
    validate_latin(t)
        && satisfies(t, IdentityName::Idempotent)
        && satisfies(t, IdentityName::Pentagonal)
        && satisfies(t, IdentityName::Medial)
}

/// Left and right division arrays of a Latin table.
#[derive(Debug, Clone)]
pub struct Divisions {
    n: usize,
    /// `left[a*n + b] = x` with `a·x = b`
    left: Vec<u32>,
    /// `right[b*n + a] = x` with `x·a = b`
    right: Vec<u32>,
}

impl Divisions {
    pub fn new<O: Operation + ?Sized>(t: &O) -> Result<Self> {
        if !validate_latin(t) {
            return Err(Error::NotLatin);
        }
        let n = t.order();
        let mut left = vec![0u32; n * n];
        let mut right = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                let v = t.apply(x, y);
                left[x * n + v] = y as u32;
                right[v * n + y] = x as u32;
            }
        }
        Ok(Divisions { n, left, right })
    }

    /// `a \ b`: the `x` with `a·x = b`.
    pub fn left(&self, a: usize, b: usize) -> usize {
        self.left[a * self.n + b] as usize
    }

    /// `b / a`: the `x` with `x·a = b`.
    pub fn right(&self, b: usize, a: usize) -> usize {
        self.right[b * self.n + a] as usize
    }
}

/// `(Q, ⊕, φ)` with `x·y = φ(x) ⊕ (y ⊖ φ(y))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToyodaDecomposition {
    pub neutral: usize,
    pub sum: CayleyTable,
    pub phi: Vec<usize>,
    pub negation: Vec<usize>,
    /// Whether `φ⁴ - φ³ + φ² - φ + ε` vanishes over `⊕`.
    pub pentagonal: bool,
}

impl ToyodaDecomposition {
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.sum.apply(x, y)
    }

    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.negation[y])
    }

    pub fn phi(&self, x: usize) -> usize {
        self.phi[x]
    }

    /// `k ⊕`-fold multiple of `x`.
    pub fn times(&self, k: u64, x: usize) -> usize {
        (0..k).fold(self.neutral, |acc, _| self.add(acc, x))
    }

    pub fn product(&self, x: usize, y: usize) -> usize {
        self.add(self.phi[x], self.sub(y, self.phi[y]))
    }

    pub fn reconstruct(&self) -> CayleyTable {
        let n = self.sum.order();
        let entries = (0..n * n)
            .map(|i| self.product(i / n, i % n) as u32)
            .collect();
        CayleyTable { n, entries }
    }

    /// Exhaustive Abelian group axioms for `⊕`.
    pub fn is_abelian_group(&self) -> bool {
        let n = self.sum.order();
        let e = self.neutral;
        let commutative = satisfies(&self.sum, IdentityName::Commutative);
        let neutral = (0..n).all(|x| self.add(e, x) == x);
        let inverses = (0..n).all(|x| self.add(x, self.negation[x]) == e);
        let associative = (0..n).into_par_iter().all(|x| {
            (0..n).all(|y| {
                let xy = self.add(x, y);
                (0..n).all(|z| self.add(xy, z) == self.add(x, self.add(y, z)))
            })
        });
        commutative && neutral && inverses && associative
    }

    pub fn phi_is_automorphism(&self) -> bool {
        let n = self.sum.order();
        let bijective = self.phi.iter().collect::<BTreeSet<_>>().len() == n;
        bijective
            && (0..n).into_par_iter().all(|x| {
                (0..n).all(|y| self.phi[self.add(x, y)] == self.add(self.phi[x], self.phi[y]))
            })
    }

    fn phi_satisfies_pentagonal_poly(&self) -> bool {
        (0..self.sum.order()).all(|x| {
            let p1 = self.phi[x];
            let p2 = self.phi[p1];
            let p3 = self.phi[p2];
            let p4 = self.phi[p3];
            let v = self.add(self.sub(self.add(self.sub(p4, p3), p2), p1), x);
            v == self.neutral
        })
    }
}

/// Recovers `x ⊕ y = (x / e)·(e \ y)` and `φ(x) = x·e`.
///
/// The precondition (idempotent and medial) is established by verifying the
/// result: `⊕` is an Abelian group with neutral `e`, `φ` is a `⊕`-automorphism
/// and the table is reconstructed exactly. Any failure is a
/// [`Error::Precondition`].
pub fn toyoda_decompose(t: &CayleyTable, e: usize) -> Result<ToyodaDecomposition> {
    let n = t.order();
    if e >= n {
        return Err(Error::InvalidArgument(format!(
            "base element {e} out of range"
        )));
    }
    let div = Divisions::new(t)?;
    if !satisfies(t, IdentityName::Idempotent) {
        return Err(Error::Precondition("table is not idempotent".into()));
    }
    let lhs: Vec<usize> = (0..n).map(|x| div.right(x, e)).collect();
    let rhs: Vec<usize> = (0..n).map(|y| div.left(e, y)).collect();
    let entries = (0..n * n)
        .map(|i| t.apply(lhs[i / n], rhs[i % n]) as u32)
        .collect();
    let sum = CayleyTable { n, entries };
    if !validate_latin(&sum) {
        return Err(Error::Precondition(
            "x/e . e\\y is not a group operation".into(),
        ));
    }
    let negation = (0..n)
        .map(|x| (0..n).find(|&y| sum.apply(x, y) == e))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Precondition("e is not neutral for the recovered sum".into()))?;
    let phi = (0..n).map(|x| t.apply(x, e)).collect();
    let mut d = ToyodaDecomposition {
        neutral: e,
        sum,
        phi,
        negation,
        pentagonal: false,
    };
    if !d.is_abelian_group() {
        return Err(Error::Precondition(
            "recovered sum is not an Abelian group".into(),
        ));
    }
    if !d.phi_is_automorphism() {
        return Err(Error::Precondition(
            "x -> x.e is not an automorphism".into(),
        ));
    }
    if d.reconstruct() != *t {
        return Err(Error::Precondition("table is not medial".into()));
    }
    d.pentagonal = d.phi_satisfies_pentagonal_poly();
    Ok(d)
}

/// Least subset containing `seed` and closed under the product.
pub fn generated_subquasigroup<O: Operation + ?Sized>(
    t: &O,
    seed: &BTreeSet<usize>,
) -> Result<BTreeSet<usize>> {
    let n = t.order();
    if seed.is_empty() {
        return Err(Error::InvalidArgument(
            "generating set must be nonempty".into(),
        ));
    }
    if let Some(&x) = seed.iter().find(|&&x| x >= n) {
        return Err(Error::InvalidArgument(format!("element {x} out of range")));
    }
    let mut members: Vec<usize> = Vec::new();
    let mut present = vec![false; n];
    let mut pending: Vec<usize> = seed.iter().copied().collect();
    for &x in &pending {
        present[x] = true;
    }
    while let Some(x) = pending.pop() {
        members.push(x);
        for &y in &members {
            for v in [t.apply(x, y), t.apply(y, x)] {
                if !present[v] {
                    present[v] = true;
                    pending.push(v);
                }
            }
        }
    }
    Ok(members.into_iter().collect())
}

/// Restriction of `t` to a closed subset, relabeled by rank.
pub fn restrict<O: Operation + ?Sized>(t: &O, subset: &BTreeSet<usize>) -> Result<CayleyTable> {
    let elems: Vec<usize> = subset.iter().copied().collect();
    let mut rank = vec![usize::MAX; t.order()];
    for (i, &x) in elems.iter().enumerate() {
        rank[x] = i;
    }
    let m = elems.len();
    let mut entries = Vec::with_capacity(m * m);
    for &x in &elems {
        for &y in &elems {
            let r = rank[t.apply(x, y)];
            if r == usize::MAX {
                return Err(Error::Precondition("subset is not closed".into()));
            }
            entries.push(r as u32);
        }
    }
    CayleyTable::new(m, entries)
}

/// The multiples of `n/m` in a linear pentagonal quasigroup on `Z_n`.
pub fn subquasigroup_of_divisor(n: u64, a: u64, m: u64) -> Result<BTreeSet<usize>> {
    crate::pentagon::make_linear(n, a)?;
    if m == 0 || !n.is_multiple_of(m) {
        return Err(Error::InvalidArgument(format!("{m} does not divide {n}")));
    }
    let step = n / m;
    Ok((0..m).map(|i| (i * step) as usize).collect())
}
