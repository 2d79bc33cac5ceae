//! The five parastrophes of a quasigroup and their classification into
//! identity classes, by closed forms for linear quasigroups and by brute force.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{gcd, pentagonal_quartic, Modulus};
use crate::cayley::{satisfies, CayleyTable, Divisions, IdentityName, Operation};
use crate::error::{Error, Result};
use crate::pentagon::{construct_table, make_linear, LinearForm, LinearQuasigroup};

/// `i` in `1..=5`:
/// `x∘1y = z ⟺ x·z = y`, `x∘2y = z ⟺ z·y = x`, `x∘3y = z ⟺ z·x = y`,
/// `x∘4y = z ⟺ y·z = x`, `x∘5y = z ⟺ y·x = z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ParastropheIndex(u8);

impl ParastropheIndex {
    pub const ALL: [ParastropheIndex; 5] = [
        ParastropheIndex(1),
        ParastropheIndex(2),
        ParastropheIndex(3),
        ParastropheIndex(4),
        ParastropheIndex(5),
    ];

    pub fn new(i: u8) -> Result<Self> {
        if (1..=5).contains(&i) {
            Ok(ParastropheIndex(i))
        } else {
            Err(Error::InvalidArgument(format!(
                "parastrophe index must be 1..5, got {i}"
            )))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl fmt::Display for ParastropheIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q{}", self.0)
    }
}

pub fn parastrophe<O: Operation + ?Sized>(t: &O, i: ParastropheIndex) -> Result<CayleyTable> {
    let n = t.order();
    let div = Divisions::new(t)?;
    let entry = |x: usize, y: usize| -> usize {
        match i.0 {
            1 => div.left(x, y),
            2 => div.right(x, y),
            3 => div.right(y, x),
            4 => div.left(y, x),
            _ => t.apply(y, x),
        }
    };
    let entries = (0..n * n).map(|p| entry(p / n, p % n) as u32).collect();
    CayleyTable::new(n, entries)
}

/// Closed-form coefficients and translatability index of a parastrophe of
/// `[ax + (1-a)y]_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParastropheForm {
    pub index: ParastropheIndex,
    pub x_coef: u64,
    pub y_coef: u64,
    pub n: u64,
    pub k: u64,
}

impl ParastropheForm {
    pub fn form(&self) -> LinearForm {
        LinearForm {
            n: self.n,
            x_coef: self.x_coef,
            y_coef: self.y_coef,
        }
    }
}

pub fn linear_parastrophe(n: u64, a: u64, i: ParastropheIndex) -> Result<ParastropheForm> {
    let q = make_linear(n, a)?;
    let m = q.modulus();
    let a3 = m.pow(a, 3);
    let a4 = m.pow(a, 4);
    let a3_plus_a = m.add(a3, a);
    let one_minus = |v: u64| m.sub(1, v);
    let (x_coef, y_coef, k) = match i.0 {
        1 => (one_minus(a3_plus_a), a3_plus_a, a % n),
        2 => (m.neg(a4), m.add(a4, 1), a3_plus_a),
        3 => (m.add(a4, 1), m.neg(a4), one_minus(a)),
        4 => (a3_plus_a, one_minus(a3_plus_a), m.neg(a4)),
        _ => (one_minus(a), a % n, m.add(a4, 1)),
    };
    Ok(ParastropheForm {
        index: i,
        x_coef,
        y_coef,
        n,
        k,
    })
}

/// Identity classes of `[cx + (1-c)y]_n` from residue conditions on `c`.
pub fn classify_linear(n: u64, c: u64) -> Result<BTreeSet<IdentityName>> {
    let m = Modulus::new(n)?;
    let c = m.reduce(c);
    if n > 1 && (gcd(c, n) != 1 || gcd(m.sub(c, 1), n) != 1) {
        return Err(Error::InvalidArgument(format!(
            "[{c}x+{}y]_{n} is not a quasigroup",
            m.sub(1, c)
        )));
    }
    let c2 = m.mul(c, c);
    let c3 = m.mul(c2, c);
    let zero = |v: u64| v == 0;
    let one = m.reduce(1);
    let mut out = BTreeSet::from([IdentityName::Idempotent, IdentityName::Medial]);
    let conditions = [
        (
            IdentityName::Pentagonal,
            zero(pentagonal_quartic(m.residue(c)).value()),
        ),
        (IdentityName::Commutative, m.mul(2, c) == one),
        // 2c² - 2c + 1
        (
            IdentityName::Quadratical,
            zero(m.add(m.sub(m.mul(2, c2), m.mul(2, c)), 1)),
        ),
        // c² - c + 1
        (IdentityName::Hexagonal, zero(m.add(m.sub(c2, c), 1))),
        // c² - c - 1
        (IdentityName::GS, zero(m.sub(m.sub(c2, c), 1))),
        (IdentityName::ARO, m.mul(2, c2) == one),
        // c² - 3c + 1
        (IdentityName::Stein, zero(m.add(m.sub(c2, m.mul(3, c)), 1))),
        // c² + c - 1
        (IdentityName::RightModular, zero(m.sub(m.add(c2, c), 1))),
        (IdentityName::C3, c3 == one),
    ];
    out.extend(
        conditions
            .into_iter()
            .filter(|&(_, holds)| holds)
            .map(|(id, _)| id),
    );
    Ok(out)
}

/// Every identity that holds, by exhaustive check.
pub fn classify_table<O: Operation + ?Sized>(t: &O) -> BTreeSet<IdentityName> {
    classify_table_among(t, &IdentityName::ALL)
}

pub fn classify_table_among<O: Operation + ?Sized>(
    t: &O,
    ids: &[IdentityName],
) -> BTreeSet<IdentityName> {
    ids.iter().copied().filter(|&id| satisfies(t, id)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Method {
    Formula,
    BruteForce,
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub subject: String,
    pub classes: BTreeSet<IdentityName>,
    pub method: Method,
}

impl Serialize for IdentityName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Identity classes of a linear quasigroup; `Both` fails unless the two
/// methods agree.
pub fn classify_report(n: u64, c: u64, method: Method) -> Result<ClassificationReport> {
    let form = LinearForm::new(n, c, Modulus::new(n)?.sub(1, c))?;
    let formula = || classify_linear(n, c);
    let brute =
        || -> Result<BTreeSet<IdentityName>> { Ok(classify_table(&construct_table(&form)?)) };
    let classes = match method {
        Method::Formula => formula()?,
        Method::BruteForce => {
            formula()?;
            brute()?
        }
        Method::Both => {
            let (f, b) = (formula()?, brute()?);
            if f != b {
                return Err(Error::Inconsistent(format!(
                    "{form}: formula {f:?} vs brute force {b:?}"
                )));
            }
            f
        }
    };
    Ok(ClassificationReport {
        subject: form.to_string(),
        classes,
        method,
    })
}

/// Column of the classification matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Column {
    Original,
    Parastrophe(ParastropheIndex),
}

impl Column {
    pub const ALL: [Column; 6] = [
        Column::Original,
        Column::Parastrophe(ParastropheIndex(1)),
        Column::Parastrophe(ParastropheIndex(2)),
        Column::Parastrophe(ParastropheIndex(3)),
        Column::Parastrophe(ParastropheIndex(4)),
        Column::Parastrophe(ParastropheIndex(5)),
    ];
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Column::Original => f.write_str("Q"),
            Column::Parastrophe(i) => i.fmt(f),
        }
    }
}

/// Rows of the classification matrix.
pub const MATRIX_CLASSES: [IdentityName; 8] = [
    IdentityName::Pentagonal,
    IdentityName::Quadratical,
    IdentityName::Hexagonal,
    IdentityName::GS,
    IdentityName::ARO,
    IdentityName::Stein,
    IdentityName::RightModular,
    IdentityName::C3,
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Always,
    Never,
    Members(Vec<LinearQuasigroup>),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Always => f.write_str("always"),
            Cell::Never => f.write_str("never"),
            Cell::Members(m) => {
                let s: Vec<String> = m.iter().map(|q| q.to_string()).collect();
                f.write_str(&s.join(", "))
            }
        }
    }
}

/// For each class and column, the corpus members whose column quasigroup
/// lies in the class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMatrix {
    pub corpus: Vec<LinearQuasigroup>,
    pub method: Method,
    pub members: BTreeMap<(IdentityName, Column), Vec<LinearQuasigroup>>,
}

impl ClassMatrix {
    pub fn cell(&self, class: IdentityName, column: Column) -> Cell {
        let m = self
            .members
            .get(&(class, column))
            .cloned()
            .unwrap_or_default();
        if m.is_empty() {
            Cell::Never
        } else if m.len() == self.corpus.len() {
            Cell::Always
        } else {
            Cell::Members(m)
        }
    }
}

fn column_classes_formula(q: &LinearQuasigroup, col: Column) -> Result<BTreeSet<IdentityName>> {
    let c = match col {
        Column::Original => q.a(),
        Column::Parastrophe(i) => linear_parastrophe(q.n(), q.a(), i)?.x_coef,
    };
    Ok(classify_linear(q.n(), c)?
        .into_iter()
        .filter(|id| MATRIX_CLASSES.contains(id))
        .collect())
}

fn column_classes_brute(q: &LinearQuasigroup, col: Column) -> Result<BTreeSet<IdentityName>> {
    let base = construct_table(q)?;
    let t = match col {
        Column::Original => base,
        Column::Parastrophe(i) => parastrophe(&base, i)?,
    };
    Ok(classify_table_among(&t, &MATRIX_CLASSES))
}

pub fn parastrophe_class_matrix(
    corpus: &[LinearQuasigroup],
    method: Method,
) -> Result<ClassMatrix> {
    let jobs: Vec<(usize, Column)> = (0..corpus.len())
        .flat_map(|i| Column::ALL.into_iter().map(move |c| (i, c)))
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(i, col)| {
            let q = &corpus[i];
            let classes = match method {
                Method::Formula => column_classes_formula(q, col)?,
                Method::BruteForce => column_classes_brute(q, col)?,
                Method::Both => {
                    let f = column_classes_formula(q, col)?;
                    let b = column_classes_brute(q, col)?;
                    if f != b {
                        return Err(Error::Inconsistent(format!(
                            "{q} {col}: formula {f:?} vs brute force {b:?}"
                        )));
                    }
                    f
                }
            };
            Ok((i, col, classes))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut members: BTreeMap<(IdentityName, Column), Vec<LinearQuasigroup>> = BTreeMap::new();
    for (i, col, classes) in results {
        for class in classes {
            members.entry((class, col)).or_default().push(corpus[i]);
        }
    }
    for v in members.values_mut() {
        v.sort_by_key(|q| (q.n(), q.a()));
    }
    Ok(ClassMatrix {
        corpus: corpus.to_vec(),
        method,
        members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::validate_latin;
    use crate::translat::is_k_translatable;

    fn lin(n: u64, a: u64) -> LinearQuasigroup {
        make_linear(n, a).unwrap()
    }

    fn table(n: u64, c: u64, d: u64) -> CayleyTable {
        construct_table(&LinearForm::new(n, c, d).unwrap()).unwrap()
    }

    fn p(i: u8) -> ParastropheIndex {
        ParastropheIndex::new(i).unwrap()
    }

    #[test]
    fn parastrophe_examples() {
        let t = table(11, 2, 10);
        assert_eq!(parastrophe(&t, p(5)).unwrap(), table(11, 10, 2));
        assert_eq!(parastrophe(&table(5, 4, 2), p(2)).unwrap(), table(5, 4, 2));
        assert!(ParastropheIndex::new(0).is_err());
        assert!(ParastropheIndex::new(6).is_err());
    }

    // Oracle: the defining equivalences, checked by search over z.
    #[test]
    fn parastrophes_satisfy_definitions() {
        let t = table(55, 29, 27);
        let n = 55;
        for i in ParastropheIndex::ALL {
            let pt = parastrophe(&t, i).unwrap();
            assert!(validate_latin(&pt));
            for x in 0..n {
                for y in 0..n {
                    let z = pt.get(x, y);
                    let ok = match i.get() {
                        1 => t.get(x, z) == y,
                        2 => t.get(z, y) == x,
                        3 => t.get(z, x) == y,
                        4 => t.get(y, z) == x,
                        _ => t.get(y, x) == z,
                    };
                    assert!(ok, "{i} x={x} y={y}");
                }
            }
        }
    }

    // ∘1, ∘2, ∘5 swap two roles of (x, y, x·y); ∘3 and ∘4 are the two 3-cycles.
    #[test]
    fn conjugation_structure() {
        for t in [table(61, 3, 59), table(55, 29, 27), table(11, 2, 10)] {
            for i in [1, 2, 5] {
                let once = parastrophe(&t, p(i)).unwrap();
                assert_eq!(parastrophe(&once, p(i)).unwrap(), t, "Q{i}");
            }
            let q3 = parastrophe(&t, p(3)).unwrap();
            assert_eq!(parastrophe(&q3, p(4)).unwrap(), t);
            let q4 = parastrophe(&t, p(4)).unwrap();
            assert_eq!(parastrophe(&q4, p(3)).unwrap(), t);
        }
        // ∘1 followed by ∘4 is not the identity conjugation
        let t = table(61, 3, 59);
        let q1 = parastrophe(&t, p(1)).unwrap();
        assert_ne!(parastrophe(&q1, p(4)).unwrap(), t);
    }

    #[test]
    fn linear_parastrophe_examples() {
        let f = linear_parastrophe(11, 2, p(1)).unwrap();
        assert_eq!((f.x_coef, f.y_coef, f.k), (2, 10, 2));
        let f = linear_parastrophe(5, 4, p(3)).unwrap();
        assert_eq!((f.x_coef, f.y_coef, f.k), (2, 4, 2));
        let f = linear_parastrophe(11, 2, p(4)).unwrap();
        assert_eq!((f.x_coef, f.y_coef, f.k), (10, 2, 6));
    }

    #[test]
    fn linear_parastrophes_match_tables() {
        for (n, a) in [
            (11u64, 2u64),
            (11, 7),
            (31, 27),
            (41, 23),
            (55, 19),
            (71, 14),
        ] {
            let base = construct_table(&lin(n, a)).unwrap();
            for i in ParastropheIndex::ALL {
                let f = linear_parastrophe(n, a, i).unwrap();
                let pt = parastrophe(&base, i).unwrap();
                assert_eq!(pt, construct_table(&f.form()).unwrap(), "n={n} a={a} {i}");
                assert!(is_k_translatable(&pt, f.k as usize));
            }
        }
    }

    #[test]
    fn classify_linear_examples() {
        let has = |n, a, id| classify_linear(n, a).unwrap().contains(&id);
        assert!(has(5, 4, IdentityName::Quadratical) && has(5, 4, IdentityName::Pentagonal));
        assert!(has(11, 8, IdentityName::GS) && has(11, 8, IdentityName::Pentagonal));
        assert!(has(31, 27, IdentityName::ARO) && has(31, 27, IdentityName::Pentagonal));
        assert!(has(11, 7, IdentityName::RightModular));
        assert!(has(11, 6, IdentityName::Commutative));
        assert!(classify_linear(10, 5).is_err());
    }

    #[test]
    fn classify_table_examples() {
        use IdentityName::*;
        assert_eq!(
            classify_table(&table(5, 4, 2)),
            BTreeSet::from([Idempotent, Medial, Pentagonal, Quadratical, Stein])
        );
        let c = classify_table(&table(11, 6, 6));
        assert!(c.contains(&Commutative) && c.contains(&Pentagonal));
        assert!(!classify_table(&table(11, 2, 10)).contains(&Hexagonal));
    }

    #[test]
    fn formula_matches_brute_force_for_all_small_linear_quasigroups() {
        for n in 2..=40u64 {
            for c in 0..n {
                if gcd(c, n) != 1 || gcd((c + n - 1) % n, n) != 1 {
                    continue;
                }
                let r = classify_report(n, c, Method::Both);
                assert!(r.is_ok(), "n={n} c={c}: {r:?}");
            }
        }
    }

    fn class_index(class: IdentityName, m: Modulus, a: u64) -> Option<u64> {
        let k = match class {
            IdentityName::Quadratical => m.sub(1, m.mul(2, a)),
            IdentityName::Hexagonal => m.sub(1, a),
            IdentityName::GS => m.add(a, 1),
            IdentityName::ARO => m.neg(m.add(m.mul(2, a), 1)),
            IdentityName::Stein => m.sub(a, 1),
            IdentityName::RightModular => m.neg(m.add(1, a)),
            _ => return None,
        };
        Some(k)
    }

    #[test]
    fn translatability_laws_for_classes() {
        for n in 3..=100u64 {
            let m = Modulus::new(n).unwrap();
            for a in 2..n {
                if gcd(a, n) != 1 || gcd(a - 1, n) != 1 {
                    continue;
                }
                let classes = classify_linear(n, a).unwrap();
                // x·y = ax + (1-a)y is k-translatable iff a + (1-a)k = 0
                let translatable = |k: u64| m.add(a, m.mul(m.sub(1, a), k)) == 0;
                for class in MATRIX_CLASSES {
                    if let Some(k) = class_index(class, m, a) {
                        assert_eq!(
                            classes.contains(&class),
                            k != 0 && translatable(k),
                            "{class} n={n} a={a}"
                        );
                    }
                }
                if classes.contains(&IdentityName::C3) {
                    let inv = m.inverse(m.sub(1, m.mul(a, a))).expect("1-a² invertible");
                    assert!(translatable(inv), "C3 n={n} a={a}");
                }
            }
        }
    }

    #[test]
    fn translatability_laws_by_table_for_small_orders() {
        for n in 3..=30u64 {
            let m = Modulus::new(n).unwrap();
            for a in 2..n {
                if gcd(a, n) != 1 || gcd(a - 1, n) != 1 {
                    continue;
                }
                let t = construct_table(&LinearForm::new(n, a, m.sub(1, a)).unwrap()).unwrap();
                let classes = classify_table(&t);
                for class in MATRIX_CLASSES {
                    if let Some(k) = class_index(class, m, a) {
                        assert_eq!(classes.contains(&class), is_k_translatable(&t, k as usize));
                    }
                }
            }
        }
    }

    #[test]
    fn small_matrix() {
        let corpus = vec![lin(5, 4), lin(11, 2), lin(11, 6), lin(11, 7), lin(11, 8)];
        let m = parastrophe_class_matrix(&corpus, Method::Both).unwrap();
        assert_eq!(
            m.cell(IdentityName::Pentagonal, Column::Parastrophe(p(2))),
            Cell::Always
        );
        for col in Column::ALL {
            assert_eq!(m.cell(IdentityName::Hexagonal, col), Cell::Never);
        }
        assert_eq!(
            m.cell(IdentityName::GS, Column::Parastrophe(p(4))),
            Cell::Members(vec![lin(5, 4)])
        );
        assert_eq!(
            m.cell(IdentityName::GS, Column::Original).to_string(),
            "[8x+4y]_11"
        );
    }
}
