//! Pentagonal quasigroups from coefficients over `Z_n` and from automorphisms
//! of finite Abelian groups.

use std::fmt;

use crate::abelian::{AbelianGroup, BlockMap, Endomorphism, GroupElement, PrimaryComponent};
use crate::arith::{factorize, gcd, pentagonal_quartic, Modulus};
use crate::cayley::{CayleyTable, Operation};
use crate::error::{check_budget, Error, InvalidCoefficient, Result};

/// Largest order materialized as a Cayley table by default.
pub const DEFAULT_TABLE_LIMIT: usize = 4096;

/// Largest group order an [`AutomorphismQuasigroup`] precomputes maps for.
pub const MAX_GROUP_ORDER: u64 = 1 << 22;

/// `x·y = [c x + d y]_n`, not necessarily a quasigroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    pub n: u64,
    pub x_coef: u64,
    pub y_coef: u64,
}

impl LinearForm {
    pub fn new(n: u64, x_coef: u64, y_coef: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModulus(0));
        }
        Ok(LinearForm {
            n,
            x_coef: x_coef % n,
            y_coef: y_coef % n,
        })
    }

    pub fn eval(&self, x: u64, y: u64) -> u64 {
        let m = Modulus::new(self.n).expect("nonzero modulus");
        m.add(m.mul(self.x_coef, x), m.mul(self.y_coef, y))
    }
}

impl Operation for LinearForm {
    fn order(&self) -> usize {
        self.n as usize
    }
    #[inline]
    fn apply(&self, x: usize, y: usize) -> usize {
        self.eval(x as u64, y as u64) as usize
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}x+{}y]_{}", self.x_coef, self.y_coef, self.n)
    }
}

/// `x·y = [a x + (1-a) y]_n` with `a` satisfying the pentagonal quartic and
/// `gcd(a, n) = gcd(a - 1, n) = 1`. The order-1 quasigroup has `a = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearQuasigroup {
    n: u64,
    a: u64,
}

pub fn make_linear(n: u64, a: u64) -> Result<LinearQuasigroup> {
    let m = Modulus::new(n)?;
    if n == 1 {
        return if a == 0 {
            Ok(LinearQuasigroup { n, a })
        } else {
            Err(Error::InvalidCoefficient {
                n,
                a,
                reason: InvalidCoefficient::OutOfRange,
            })
        };
    }
    let fail = |reason| Err(Error::InvalidCoefficient { n, a, reason });
    if a <= 1 || a >= n {
        return fail(InvalidCoefficient::OutOfRange);
    }
    if gcd(a, n) != 1 {
        return fail(InvalidCoefficient::NotCoprime);
    }
    if gcd(a - 1, n) != 1 {
        return fail(InvalidCoefficient::NotRegular);
    }
    if pentagonal_quartic(m.residue(a)).value() != 0 {
        return fail(InvalidCoefficient::QuarticNonzero);
    }
    Ok(LinearQuasigroup { n, a })
}

impl LinearQuasigroup {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    /// `[1 - a]_n`
    pub fn b(&self) -> u64 {
        self.modulus().sub(1, self.a)
    }

    pub fn modulus(&self) -> Modulus {
        Modulus::new(self.n).expect("validated")
    }

    pub fn form(&self) -> LinearForm {
        LinearForm {
            n: self.n,
            x_coef: self.a,
            y_coef: self.b(),
        }
    }

    pub fn product(&self, x: u64, y: u64) -> u64 {
        self.form().eval(x, y)
    }
}

impl Operation for LinearQuasigroup {
    fn order(&self) -> usize {
        self.n as usize
    }
    #[inline]
    fn apply(&self, x: usize, y: usize) -> usize {
        self.product(x as u64, y as u64) as usize
    }
}

impl fmt::Display for LinearQuasigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.form().fmt(f)
    }
}

/// `{a, -a², a³, -a⁴}` reduced mod `n`, sorted and deduplicated.
pub fn four_forms(n: u64, a: u64) -> Result<Vec<u64>> {
    let q = make_linear(n, a)?;
    let m = q.modulus();
    let mut out = vec![a, m.neg(m.pow(a, 2)), m.pow(a, 3), m.neg(m.pow(a, 4))];
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Orders allowed by the congruence test: `n ≡ 0` or `1 (mod 5)`.
pub fn order_passes_mod5(n: u64) -> bool {
    n.is_multiple_of(5) || n % 5 == 1
}

/// Materializes any operation up to [`DEFAULT_TABLE_LIMIT`].
pub fn construct_table<O: Operation + ?Sized>(q: &O) -> Result<CayleyTable> {
    construct_table_within(q, DEFAULT_TABLE_LIMIT)
}

pub fn construct_table_within<O: Operation + ?Sized>(q: &O, limit: usize) -> Result<CayleyTable> {
    check_budget("table order", q.order() as u128, limit as u128)?;
    Ok(CayleyTable::from_operation(q))
}

/// `x·y = φ(x) + (ε - φ)(y)` for a pentagonal automorphism `φ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismQuasigroup {
    group: AbelianGroup,
    phi: Endomorphism,
    radices: Vec<u64>,
    phi_idx: Vec<u32>,
    psi_idx: Vec<u32>,
}

impl AutomorphismQuasigroup {
    pub fn new(group: &AbelianGroup, phi: Endomorphism) -> Result<Self> {
        if phi.group() != group {
            return Err(Error::ShapeMismatch(format!(
                "endomorphism of {} used on {group}",
                phi.group()
            )));
        }
        if !phi.is_automorphism() {
            return Err(Error::Precondition("map is not an automorphism".into()));
        }
        if !phi.satisfies_pentagonal_poly() {
            return Err(Error::Precondition(
                "map does not satisfy x^4 - x^3 + x^2 - x + 1 = 0".into(),
            ));
        }
        check_budget(
            "group order",
            group.order() as u128,
            MAX_GROUP_ORDER as u128,
        )?;
        let psi = Endomorphism::identity(group).sub(&phi)?;
        let index_map = |f: &Endomorphism| -> Vec<u32> {
            group
                .elements()
                .map(|x| group.index_of(&f.apply(&x).expect("element of group")) as u32)
                .collect()
        };
        let radices = group
            .components()
            .iter()
            .flat_map(|c| std::iter::repeat_n(c.modulus(), c.dim()))
            .collect();
        Ok(AutomorphismQuasigroup {
            group: group.clone(),
            phi_idx: index_map(&phi),
            psi_idx: index_map(&psi),
            phi,
            radices,
        })
    }

    pub fn from_linear(q: &LinearQuasigroup) -> Result<Self> {
        let group = AbelianGroup::cyclic(q.n())?;
        let blocks = group
            .components()
            .iter()
            .map(|c| BlockMap::Scalar(q.a() % c.modulus()))
            .collect();
        let phi = Endomorphism::new(&group, blocks)?;
        Self::new(&group, phi)
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn phi(&self) -> &Endomorphism {
        &self.phi
    }

    /// Mixed-radix addition of element indices.
    fn add_indices(&self, mut x: usize, mut y: usize) -> usize {
        let mut out = 0usize;
        let mut scale = 1usize;
        for &r in self.radices.iter().rev() {
            let r = r as usize;
            let d = (x % r + y % r) % r;
            out += d * scale;
            scale *= r;
            x /= r;
            y /= r;
        }
        out
    }

    pub fn product_elements(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let i = self.apply(
            self.group.index_of(x) as usize,
            self.group.index_of(y) as usize,
        );
        self.group.element_at(i as u64)
    }
}

impl Operation for AutomorphismQuasigroup {
    fn order(&self) -> usize {
        self.group.order() as usize
    }
    #[inline]
    fn apply(&self, x: usize, y: usize) -> usize {
        self.add_indices(self.phi_idx[x] as usize, self.psi_idx[y] as usize)
    }
}

/// The derived forms `-φ²`, `φ³`, `-φ⁴`, giving `x∗y = φ²(y-x)+y`,
/// `x∘y = φ³(x-y)+y` and `x⋄y = φ⁴(y-x)+y`.
pub fn phi_power_forms(q: &AutomorphismQuasigroup) -> Result<[AutomorphismQuasigroup; 3]> {
    let phi = q.phi();
    let g = q.group();
    Ok([
        AutomorphismQuasigroup::new(g, phi.pow(2).neg())?,
        AutomorphismQuasigroup::new(g, phi.pow(3))?,
        AutomorphismQuasigroup::new(g, phi.pow(4).neg())?,
    ])
}

/// Component-wise product; element `(x1, x2)` has index `x1 * |Q2| + x2`.
pub fn direct_product(
    q1: &AutomorphismQuasigroup,
    q2: &AutomorphismQuasigroup,
) -> Result<AutomorphismQuasigroup> {
    let group = q1.group().product(q2.group())?;
    let mut blocks = q1.phi().blocks().to_vec();
    blocks.extend_from_slice(q2.phi().blocks());
    let phi = Endomorphism::new(&group, blocks)?;
    AutomorphismQuasigroup::new(&group, phi)
}

/// `x·y = 6x + 6y` on `Z_11^m`.
pub fn commutative_pentagonal(m: usize) -> Result<AutomorphismQuasigroup> {
    check_budget(
        "group order",
        11u128.saturating_pow(m as u32),
        MAX_GROUP_ORDER as u128,
    )?;
    let group = if m == 0 {
        AbelianGroup::trivial()
    } else {
        AbelianGroup::new(vec![PrimaryComponent::elementary(11, m)?])?
    };
    AutomorphismQuasigroup::new(&group, Endomorphism::scalar(&group, 6))
}

/// Prime-power factors `(p^e, a mod p^e)`, primes ascending.
pub fn coprime_decompose(q: &LinearQuasigroup) -> Result<Vec<LinearQuasigroup>> {
    factorize(q.n())
        .into_iter()
        .map(|(p, e)| {
            let pe = p.pow(e);
            make_linear(pe, q.a() % pe)
        })
        .collect()
}

/// `sigma[x]` is the index of `x ∈ Z_n` in [`AbelianGroup::cyclic`]`(n)`.
pub fn crt_labels(n: u64) -> Result<Vec<usize>> {
    let group = AbelianGroup::cyclic(n)?;
    check_budget("group order", n as u128, MAX_GROUP_ORDER as u128)?;
    Ok((0..n)
        .map(|x| {
            let coords = group
                .components()
                .iter()
                .map(|c| vec![x % c.modulus()])
                .collect();
            group.index_of(&GroupElement { coords }) as usize
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::Matrix;
    use crate::cayley::{is_pentagonal_quasigroup, satisfies, IdentityName};

    fn lin(n: u64, a: u64) -> LinearQuasigroup {
        make_linear(n, a).unwrap()
    }

    #[test]
    fn make_linear_examples() {
        assert!(make_linear(5, 4).is_ok());
        assert!(make_linear(11, 6).is_ok());
        assert!(matches!(
            make_linear(25, 4),
            Err(Error::InvalidCoefficient {
                reason: InvalidCoefficient::QuarticNonzero,
                ..
            })
        ));
        assert!(matches!(
            make_linear(11, 1),
            Err(Error::InvalidCoefficient {
                reason: InvalidCoefficient::OutOfRange,
                ..
            })
        ));
        assert!(matches!(
            make_linear(10, 5),
            Err(Error::InvalidCoefficient {
                reason: InvalidCoefficient::NotCoprime,
                ..
            })
        ));
        assert!(matches!(
            make_linear(10, 3),
            Err(Error::InvalidCoefficient {
                reason: InvalidCoefficient::NotRegular,
                ..
            })
        ));
        assert!(make_linear(1, 0).is_ok());
        assert!(make_linear(0, 0).is_err());
    }

    #[test]
    fn four_forms_examples() {
        assert_eq!(four_forms(11, 2).unwrap(), vec![2, 6, 7, 8]);
        assert_eq!(four_forms(5, 4).unwrap(), vec![4]);
        assert_eq!(four_forms(61, 3).unwrap(), vec![3, 27, 41, 52]);
    }

    #[test]
    fn four_forms_match_solutions_for_prime_moduli() {
        for n in 2..200u64 {
            let roots: Vec<u64> = crate::arith::solve_pentagonal_residues(Modulus::new(n).unwrap())
                .unwrap()
                .into_iter()
                .map(|r| r.value())
                .collect();
            for &a in &roots {
                let forms = four_forms(n, a).unwrap();
                assert!(forms.iter().all(|f| roots.contains(f)));
                if crate::arith::is_prime(n) {
                    assert_eq!(forms, roots, "n={n}");
                }
            }
        }
    }

    #[test]
    fn built_tables_are_pentagonal() {
        for n in 2..=61u64 {
            for r in crate::arith::solve_pentagonal_residues(Modulus::new(n).unwrap()).unwrap() {
                let t = construct_table(&lin(n, r.value())).unwrap();
                assert!(is_pentagonal_quasigroup(&t), "n={n} a={}", r.value());
            }
        }
        let t = construct_table(&lin(1, 0)).unwrap();
        assert_eq!(t.order(), 1);
        assert!(is_pentagonal_quasigroup(&t));
    }

    #[test]
    fn order_congruence_from_roots() {
        for n in 2..=200u64 {
            let roots = crate::arith::solve_pentagonal_residues(Modulus::new(n).unwrap()).unwrap();
            if !roots.is_empty() {
                assert!([0, 1, 5, 6].contains(&(n % 10)), "n={n}");
                assert!(order_passes_mod5(n));
            }
        }
    }

    #[test]
    fn z5_squared_matrix_table() {
        let g = AbelianGroup::elementary(5, 2).unwrap();
        let m = Matrix::from_rows(&[vec![0, 1], vec![4, 3]]).unwrap();
        let phi = Endomorphism::new(&g, vec![BlockMap::Matrix(m)]).unwrap();
        let q = AutomorphismQuasigroup::new(&g, phi).unwrap();
        let t = construct_table(&q).unwrap();
        assert_eq!(t.order(), 25);
        assert!(is_pentagonal_quasigroup(&t));
        let bad = Endomorphism::identity(&g);
        assert!(AutomorphismQuasigroup::new(&g, bad).is_err());
    }

    #[test]
    fn table_budget() {
        assert!(matches!(
            construct_table(&lin(9091, 10)),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(construct_table_within(&lin(9091, 10), 10_000).is_ok());
    }

    #[test]
    fn automorphism_form_of_linear_matches_table() {
        for (n, a) in [(55, 29), (11, 2), (61, 3), (5, 4)] {
            let q = lin(n, a);
            let aq = AutomorphismQuasigroup::from_linear(&q).unwrap();
            let sigma = crt_labels(n).unwrap();
            let lin_t = construct_table(&q).unwrap().relabel(&sigma).unwrap();
            assert_eq!(construct_table(&aq).unwrap(), lin_t);
        }
    }

    #[test]
    fn phi_power_forms_match_four_forms() {
        let q = AutomorphismQuasigroup::from_linear(&lin(11, 2)).unwrap();
        let derived = phi_power_forms(&q).unwrap();
        let mut tables: Vec<CayleyTable> = derived
            .iter()
            .map(|d| construct_table(d).unwrap())
            .collect();
        tables.sort_by_key(|t| t.get(1, 0));
        let expected: Vec<CayleyTable> = [6u64, 7, 8]
            .iter()
            .map(|&a| construct_table(&lin(11, a)).unwrap())
            .collect();
        assert_eq!(tables, expected);
        for d in &derived {
            let t = construct_table(d).unwrap();
            assert!(is_pentagonal_quasigroup(&t));
            assert!(satisfies(&t, IdentityName::Idempotent));
        }
        let q5 = AutomorphismQuasigroup::from_linear(&lin(5, 4)).unwrap();
        let base = construct_table(&q5).unwrap();
        for d in phi_power_forms(&q5).unwrap() {
            assert_eq!(construct_table(&d).unwrap(), base);
        }
    }

    fn product_table(t1: &CayleyTable, t2: &CayleyTable) -> CayleyTable {
        // Oracle: pair tables directly.
        let (n1, n2) = (t1.order(), t2.order());
        let n = n1 * n2;
        let rows: Vec<Vec<u32>> = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let a = t1.get(x / n2, y / n2);
                        let b = t2.get(x % n2, y % n2);
                        (a * n2 + b) as u32
                    })
                    .collect()
            })
            .collect();
        CayleyTable::from_rows(&rows).unwrap()
    }

    #[test]
    fn direct_products() {
        let q5 = AutomorphismQuasigroup::from_linear(&lin(5, 4)).unwrap();
        let p = direct_product(&q5, &q5).unwrap();
        let t = construct_table(&p).unwrap();
        assert_eq!(t.order(), 25);
        assert!(is_pentagonal_quasigroup(&t));
        let t5 = construct_table(&q5).unwrap();
        assert_eq!(t, product_table(&t5, &t5));

        let c1 = commutative_pentagonal(1).unwrap();
        let c2 = construct_table(&direct_product(&c1, &c1).unwrap()).unwrap();
        assert_eq!(
            c2,
            construct_table(&commutative_pentagonal(2).unwrap()).unwrap()
        );
        assert!(satisfies(&c2, IdentityName::Commutative));

        let trivial = commutative_pentagonal(0).unwrap();
        let same = direct_product(&q5, &trivial).unwrap();
        assert_eq!(construct_table(&same).unwrap(), t5);
    }

    #[test]
    fn commutative_examples() {
        let c1 = construct_table(&commutative_pentagonal(1).unwrap()).unwrap();
        assert_eq!(c1, construct_table(&lin(11, 6)).unwrap());
        let c0 = construct_table(&commutative_pentagonal(0).unwrap()).unwrap();
        assert_eq!(c0.order(), 1);
        let c2 = construct_table(&commutative_pentagonal(2).unwrap()).unwrap();
        assert_eq!(c2.order(), 121);
        assert!(satisfies(&c2, IdentityName::Commutative));
        assert!(satisfies(&c2, IdentityName::Pentagonal));
        assert!(commutative_pentagonal(9).is_err());
    }

    #[test]
    fn coprime_decompose_examples() {
        let parts = |n, a| -> Vec<(u64, u64)> {
            coprime_decompose(&lin(n, a))
                .unwrap()
                .into_iter()
                .map(|q| (q.n(), q.a()))
                .collect()
        };
        assert_eq!(parts(55, 29), vec![(5, 4), (11, 7)]);
        assert_eq!(parts(11, 2), vec![(11, 2)]);
        assert_eq!(parts(55, 19), vec![(5, 4), (11, 8)]);
    }

    #[test]
    fn coprime_decompose_is_isomorphic_via_crt() {
        for n in 2..=121u64 {
            for r in crate::arith::solve_pentagonal_residues(Modulus::new(n).unwrap()).unwrap() {
                let q = lin(n, r.value());
                let factors = coprime_decompose(&q).unwrap();
                let mut acc = commutative_pentagonal(0).unwrap();
                for f in &factors {
                    let fq = AutomorphismQuasigroup::from_linear(f).unwrap();
                    acc = direct_product(&acc, &fq).unwrap();
                }
                let sigma = crt_labels(n).unwrap();
                let expected = construct_table(&q).unwrap().relabel(&sigma).unwrap();
                assert_eq!(construct_table(&acc).unwrap(), expected, "n={n}");
            }
        }
    }

    #[test]
    fn display_forms() {
        assert_eq!(lin(11, 2).to_string(), "[2x+10y]_11");
        assert_eq!(lin(5, 4).b(), 2);
    }
}
