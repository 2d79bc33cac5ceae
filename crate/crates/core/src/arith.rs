//! Exact modular arithmetic on canonical residues.
//!
//! Every product is widened to `u128` before reduction, so all operations are
//! exact for any modulus that fits in a `u64`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest modulus accepted by [`solve_pentagonal_residues`]; the solver is an
/// exhaustive scan.
pub const MAX_SCAN_MODULUS: u64 = 1_000_000;

/// A positive modulus `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModulus(n));
        }
        Ok(Modulus(n))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u64 {
        x % self.0
    }

    /// Canonical representative of a signed integer.
    #[inline]
    pub fn reduce_signed(self, x: i128) -> u64 {
        x.rem_euclid(self.0 as i128) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.0 as u128) as u64
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        let (a, b) = (a % self.0, b % self.0);
        if a >= b {
            a - b
        } else {
            self.0 - (b - a)
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        self.sub(0, a)
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    pub fn pow(self, base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.0;
        let mut b = base % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, if `gcd(a, n) = 1`.
    pub fn inverse(self, a: u64) -> Option<u64> {
        let (g, x, _) = ext_gcd(a as i128 % self.0 as i128, self.0 as i128);
        if g != 1 {
            return None;
        }
        Some(self.reduce_signed(x))
    }

    pub fn residue(self, value: u64) -> Residue {
        Residue {
            value: value % self.0,
            modulus: self,
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A residue class stored canonically in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: Modulus,
}

impl Residue {
    pub fn new(value: u64, n: u64) -> Result<Self> {
        Ok(Modulus::new(n)?.residue(value))
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    pub fn pow(self, exp: u64) -> Residue {
        self.modulus.residue(self.modulus.pow(self.value, exp))
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_{}", self.value, self.modulus)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// All positive divisors of `m`, ascending. `divisors(0)` is empty.
pub fn divisors(m: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(m) {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    if m == 0 {
        divs.clear();
    }
    divs.sort_unstable();
    divs
}

/// `[a^4 - a^3 + a^2 - a + 1]_n`, evaluated by Horner's rule.
pub fn pentagonal_quartic(a: Residue) -> Residue {
    let n = a.modulus();
    let x = a.value();
    // ((((x - 1) x + 1) x - 1) x + 1)
    let mut acc = n.reduce(1);
    for sign_positive in [false, true, false, true] {
        acc = n.mul(acc, x);
        acc = if sign_positive {
            n.add(acc, 1)
        } else {
            n.sub(acc, 1)
        };
    }
    n.residue(acc)
}

/// `[a^5]_n = [-1]_n`.
pub fn fifth_power_check(a: Residue) -> bool {
    let n = a.modulus();
    a.pow(5).value() == n.neg(1)
}

/// All `1 < a < n` with `gcd(a, n) = gcd(a - 1, n) = 1` and a vanishing
/// pentagonal quartic, ascending.
pub fn solve_pentagonal_residues(n: Modulus) -> Result<Vec<Residue>> {
    let nv = n.get();
    if nv < 2 {
        return Err(Error::InvalidArgument(format!(
            "modulus must be at least 2, got {nv}"
        )));
    }
    if nv > MAX_SCAN_MODULUS {
        return Err(Error::BudgetExceeded {
            what: "modulus for exhaustive root scan",
            size: nv as u128,
            limit: MAX_SCAN_MODULUS as u128,
        });
    }
    Ok((2..nv)
        .map(|a| n.residue(a))
        .filter(|&a| pentagonal_quartic(a).value() == 0)
        .filter(|a| gcd(a.value(), nv) == 1 && gcd(a.value() - 1, nv) == 1)
        .collect())
}
