//! k-translatability: `i·j = [i+1]_n · [j+k]_n`, i.e. each row of the
//! naturally ordered table is the previous one shifted right by `k`.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{divisors, gcd, Modulus};
use crate::cayley::Operation;
use crate::error::{Error, Result};
use crate::pentagon::{make_linear, LinearQuasigroup, DEFAULT_TABLE_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TranslatabilityWitness {
    pub k: u64,
    /// Checked entry-wise rather than taken from the closed form.
    pub verified: bool,
}

/// `false` when `k` is outside `[1, n)`.
pub fn is_k_translatable<O: Operation + ?Sized>(t: &O, k: usize) -> bool {
    let n = t.order();
    if k == 0 || k >= n {
        return false;
    }
    (0..n).into_par_iter().all(|i| {
        let next = (i + 1) % n;
        (0..n).all(|j| t.apply(i, j) == t.apply(next, (j + k) % n))
    })
}

pub fn all_translatability_indices<O: Operation + ?Sized>(t: &O) -> Vec<usize> {
    let n = t.order();
    (1..n)
        .into_par_iter()
        .filter(|&k| (0..n).all(|j| t.apply(0, j) == t.apply(1 % n, (j + k) % n)))
        .filter(|&k| is_k_translatable(t, k))
        .collect()
}

/// `k = [1 - a³ - a]_n`.
pub fn linear_translatability_index(n: u64, a: u64) -> Result<u64> {
    let q = make_linear(n, a)?;
    if n < 2 {
        return Err(Error::InvalidArgument(
            "the trivial quasigroup has no translatability index".into(),
        ));
    }
    let m = q.modulus();
    Ok(m.sub(1, m.add(m.pow(a, 3), a)))
}

/// Closed-form index, checked entry-wise when `n` is at most `verify_limit`.
pub fn translatability_witness(
    q: &LinearQuasigroup,
    verify_limit: u64,
) -> Result<TranslatabilityWitness> {
    let k = linear_translatability_index(q.n(), q.a())?;
    let verified = q.n() <= verify_limit && is_k_translatable(q, k as usize);
    Ok(TranslatabilityWitness { k, verified })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KEntry {
    pub n: u64,
    pub a: u64,
    /// `[1 - a]_n`
    pub b: u64,
    /// Whether `(n, a)` passes every pentagonal-coefficient check.
    pub valid: bool,
}

impl KEntry {
    pub fn form(&self) -> String {
        format!("[{}x+{}y]_{}", self.a, self.b, self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KRow {
    pub k: u64,
    /// `k⁴ - 2k³ + 4k² - 3k + 1`
    pub m: u64,
    /// One entry per divisor `n > k` of `m`, ascending.
    pub entries: Vec<KEntry>,
    /// Divisors `1 < n <= k` of `m`, which cannot carry a `k`-translatable form.
    pub excluded: Vec<u64>,
}

pub fn k_polynomial(k: u64) -> Result<u64> {
    let k = k as i128;
    let m = k.pow(4) - 2 * k.pow(3) + 4 * k.pow(2) - 3 * k + 1;
    u64::try_from(m).map_err(|_| Error::InvalidArgument(format!("k = {k} is too large")))
}

/// For each divisor `n > k` of `m`: `a = [-k³ + k² - 3k + 1]_n`.
pub fn quasigroups_for_k(k: u64) -> Result<KRow> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "k must be at least 2, got {k}"
        )));
    }
    let m = k_polynomial(k)?;
    let ki = k as i128;
    let coef = -ki.pow(3) + ki.pow(2) - 3 * ki + 1;
    let mut entries = Vec::new();
    let mut excluded = Vec::new();
    for n in divisors(m) {
        if n == 1 {
            continue;
        }
        if n <= k {
            excluded.push(n);
            continue;
        }
        let md = Modulus::new(n)?;
        let a = md.reduce_signed(coef);
        entries.push(KEntry {
            n,
            a,
            b: md.sub(1, a),
            valid: make_linear(n, a).is_ok(),
        });
    }
    Ok(KRow {
        k,
        m,
        entries,
        excluded,
    })
}

pub fn k_table(k_max: u64) -> Result<Vec<KRow>> {
    if k_max < 2 {
        return Err(Error::InvalidArgument(format!(
            "k_max must be at least 2, got {k_max}"
        )));
    }
    (2..=k_max).into_par_iter().map(quasigroups_for_k).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ARow {
    pub a: u64,
    /// `a⁴ - a³ + a² - a + 1`
    pub m: u64,
    /// `(n, k)` for each divisor `n > a` of `m`, ascending in `n`.
    pub pairs: Vec<(u64, u64)>,
}

/// For each `a` in `2..=a_max`, the moduli where `a` is a pentagonal
/// coefficient and the corresponding translatability index.
pub fn a_table(a_max: u64) -> Result<Vec<ARow>> {
    if a_max < 2 {
        return Err(Error::InvalidArgument(format!(
            "a_max must be at least 2, got {a_max}"
        )));
    }
    (2..=a_max)
        .map(|a| {
            let ai = a as i128;
            let m = u64::try_from(ai.pow(4) - ai.pow(3) + ai.pow(2) - ai + 1)
                .map_err(|_| Error::InvalidArgument(format!("a = {a} is too large")))?;
            let pairs = divisors(m)
                .into_iter()
                .filter(|&n| n > a && gcd(a, n) == 1 && gcd(a - 1, n) == 1)
                .map(|n| Ok((n, linear_translatability_index(n, a)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(ARow { a, m, pairs })
        })
        .collect()
}

/// Default bound for entry-wise verification in reports.
pub const DEFAULT_VERIFY_LIMIT: u64 = DEFAULT_TABLE_LIMIT as u64;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pentagon::{commutative_pentagonal, construct_table, LinearForm};

    fn lin(n: u64, a: u64) -> LinearQuasigroup {
        make_linear(n, a).unwrap()
    }

    #[test]
    fn translatable_examples() {
        assert!(is_k_translatable(&lin(11, 2), 2));
        assert!(is_k_translatable(&lin(11, 6), 10));
        assert!(!is_k_translatable(&lin(11, 2), 3));
        assert!(!is_k_translatable(&lin(11, 2), 0));
        assert!(!is_k_translatable(&lin(11, 2), 11));
    }

    #[test]
    fn index_examples() {
        let t = construct_table(&lin(11, 6)).unwrap();
        assert_eq!(all_translatability_indices(&t), vec![10]);
        assert_eq!(all_translatability_indices(&lin(5, 4)), vec![3]);
        let c2 = construct_table(&commutative_pentagonal(2).unwrap()).unwrap();
        assert!(all_translatability_indices(&c2).is_empty());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(linear_translatability_index(11, 2).unwrap(), 2);
        assert_eq!(linear_translatability_index(61, 3).unwrap(), 32);
        assert_eq!(linear_translatability_index(41, 4).unwrap(), 15);
        assert_eq!(linear_translatability_index(5, 4).unwrap(), 3);
        assert!(linear_translatability_index(25, 4).is_err());
    }

    // One-based presentation: labels 1..n with n standing for 0.
    #[test]
    fn one_based_convention_agrees() {
        for (n, a) in [(11u64, 2u64), (31, 15), (55, 19), (61, 41)] {
            let q = lin(n, a);
            let lbl = |x: u64| if x == 0 { n } else { x };
            let bracket = |x: u64| lbl(x % n);
            let table: Vec<Vec<u64>> = (1..=n)
                .map(|i| (1..=n).map(|j| lbl(q.product(i % n, j % n))).collect())
                .collect();
            let at = |i: u64, j: u64| table[(i - 1) as usize][(j - 1) as usize];
            let k = linear_translatability_index(n, a).unwrap();
            for kk in 1..n {
                let one_based = (1..=n)
                    .all(|i| (1..=n).all(|j| at(i, j) == at(bracket(i + 1), bracket(j + kk))));
                assert_eq!(
                    one_based,
                    is_k_translatable(&q, kk as usize),
                    "n={n} k={kk}"
                );
                assert_eq!(one_based, kk == k);
            }
        }
    }

    #[test]
    fn k_rows() {
        let row = |k| -> Vec<(u64, u64)> {
            quasigroups_for_k(k)
                .unwrap()
                .entries
                .iter()
                .map(|e| (e.n, e.a))
                .collect()
        };
        assert_eq!(quasigroups_for_k(2).unwrap().m, 11);
        assert_eq!(row(2), vec![(11, 2)]);
        assert_eq!(quasigroups_for_k(3).unwrap().m, 55);
        assert_eq!(row(3), vec![(5, 4), (11, 7), (55, 29)]);
        assert_eq!(row(4), vec![(181, 122)]);
        assert_eq!(quasigroups_for_k(10).unwrap().m, 8371);
        assert_eq!(row(10), vec![(11, 6), (761, 593), (8371, 7442)]);
        assert_eq!(quasigroups_for_k(8).unwrap().excluded, vec![5]);
        assert!(quasigroups_for_k(1).is_err());
    }

    #[test]
    fn k_rows_are_consistent() {
        for row in k_table(20).unwrap() {
            let k = row.k;
            for e in &row.entries {
                assert!(e.valid, "k={k} n={}", e.n);
                let m = Modulus::new(e.n).unwrap();
                assert_eq!(m.add(e.a, m.mul(e.b, k)), 0);
                assert_eq!(linear_translatability_index(e.n, e.a).unwrap(), k);
                if e.n <= 4096 {
                    assert!(is_k_translatable(
                        &LinearForm::new(e.n, e.a, e.b).unwrap(),
                        k as usize
                    ));
                }
            }
        }
    }

    #[test]
    fn k_table_rows_in_order() {
        let t = k_table(7).unwrap();
        assert_eq!(
            t.iter().map(|r| r.k).collect::<Vec<_>>(),
            (2..=7).collect::<Vec<_>>()
        );
        let forms: Vec<String> = t[5].entries.iter().map(KEntry::form).collect();
        assert_eq!(forms, ["[27x+5y]_31", "[52x+10y]_61", "[1577x+315y]_1891"]);
    }

    #[test]
    fn a_rows() {
        let t = a_table(3).unwrap();
        assert_eq!(t[0].pairs, vec![(11, 2)]);
        assert_eq!(t[1].pairs, vec![(61, 32)]);
        let t = a_table(4).unwrap();
        assert_eq!(t[2].pairs, vec![(5, 3), (41, 15), (205, 138)]);
    }

    #[test]
    fn witness_flags_verification() {
        let w = translatability_witness(&lin(61, 3), DEFAULT_VERIFY_LIMIT).unwrap();
        assert_eq!(
            w,
            TranslatabilityWitness {
                k: 32,
                verified: true
            }
        );
        let w = translatability_witness(&lin(61, 3), 10).unwrap();
        assert!(!w.verified);
    }
}
