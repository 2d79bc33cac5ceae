//! Survey of all Abelian groups up to a given order for pentagonal
//! automorphisms.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::{
    candidate_count, count_pentagonal_automorphisms, screen_group, AbelianGroup, PrimaryComponent,
    Progress, Screen, SearchBudget,
};
use crate::arith::factorize;
use crate::error::{Error, Result};
use crate::pentagon::order_passes_mod5;

/// Default bound on survey and group-listing orders.
pub const DEFAULT_MAX_ORDER: u64 = 100;

/// An isomorphism type: one partition of the exponent per prime dividing
/// the order, each partition nondecreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupType {
    pub order: u64,
    pub parts: Vec<(u64, Vec<u32>)>,
}

impl GroupType {
    /// Every primary part is cyclic or elementary.
    pub fn is_supported(&self) -> bool {
        self.parts
            .iter()
            .all(|(_, part)| part.len() == 1 || part.iter().all(|&e| e == 1))
    }

    pub fn to_group(&self) -> Result<AbelianGroup> {
        let mut comps = Vec::new();
        for (p, part) in &self.parts {
            if part.len() > 1 && part.iter().all(|&e| e == 1) {
                comps.push(PrimaryComponent::elementary(*p, part.len())?);
            } else {
                for &e in part {
                    comps.push(PrimaryComponent::cyclic(*p, e)?);
                }
            }
        }
        AbelianGroup::new(comps)
    }
}

/// Elementary parts as `Zp^r`, mixed parts factor by factor, and all cyclic
/// primary parts merged into one `Zm`, e.g. `Z2^4 x Z5`, `Z55`, `Z2 x Z8`.
impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names = Vec::new();
        let mut cyclic = 1u64;
        for (p, part) in &self.parts {
            if part.len() == 1 {
                cyclic *= p.pow(part[0]);
            } else if part.iter().all(|&e| e == 1) {
                names.push(format!("Z{p}^{}", part.len()));
            } else {
                names.extend(part.iter().map(|&e| format!("Z{}", p.pow(e))));
            }
        }
        if cyclic > 1 || names.is_empty() {
            names.push(format!("Z{cyclic}"));
        }
        f.write_str(&names.join(" x "))
    }
}

/// Partitions of `e` into nondecreasing positive parts, the one-part
/// partition first.
fn partitions(e: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            let mut p = prefix.clone();
            p.reverse();
            out.push(p);
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(e, e, &mut Vec::new(), &mut out);
    out
}

pub fn abelian_groups_of_order(n: u64) -> Result<Vec<GroupType>> {
    abelian_groups_of_order_within(n, DEFAULT_MAX_ORDER)
}

pub fn abelian_groups_of_order_within(n: u64, bound: u64) -> Result<Vec<GroupType>> {
    if n == 0 {
        return Err(Error::InvalidArgument("order must be positive".into()));
    }
    if n > bound {
        return Err(Error::BudgetExceeded {
            what: "group order",
            size: n as u128,
            limit: bound as u128,
        });
    }
    let mut out = vec![GroupType {
        order: n,
        parts: Vec::new(),
    }];
    for (p, e) in factorize(n) {
        out = out
            .into_iter()
            .flat_map(|g| {
                partitions(e).into_iter().map(move |part| {
                    let mut parts = g.parts.clone();
                    parts.push((p, part));
                    GroupType { order: n, parts }
                })
            })
            .collect();
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Enumerated,
    RefutedByOrderCount,
    RefutedByAutOrder,
    RefutedByOrderMod5,
    /// The search exceeds the default budget and heavy mode was off.
    Deferred,
    /// Unsupported shape that no screen refutes.
    Unresolved,
}

impl Verdict {
    pub fn explanation(self) -> &'static str {
        match self {
            Verdict::Enumerated => "exhaustive automorphism search",
            Verdict::RefutedByOrderCount => {
                "some order k > 1 is carried by only 1, 2 or 3 elements"
            }
            Verdict::RefutedByAutOrder => "automorphism group order is not divisible by 10",
            Verdict::RefutedByOrderMod5 => "order is not congruent to 0 or 1 mod 5",
            Verdict::Deferred => "search needs heavy mode",
            Verdict::Unresolved => "shape not enumerable and not refuted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerationRecord {
    pub order: u64,
    pub group: String,
    /// `None` when the search was not run.
    pub count: Option<u64>,
    pub verdict: Verdict,
}

impl EnumerationRecord {
    pub fn is_positive(&self) -> bool {
        self.verdict == Verdict::Enumerated && self.count.unwrap_or(0) > 0
    }
}

#[derive(Clone, Copy)]
pub struct SurveyOptions<'a> {
    pub heavy: bool,
    pub budget: SearchBudget,
    pub max_order_limit: u64,
    pub progress: Option<Progress<'a>>,
}

impl Default for SurveyOptions<'_> {
    fn default() -> Self {
        SurveyOptions {
            heavy: false,
            budget: SearchBudget::default(),
            max_order_limit: DEFAULT_MAX_ORDER,
            progress: None,
        }
    }
}

fn classify(ty: &GroupType, opts: &SurveyOptions<'_>) -> Result<EnumerationRecord> {
    let record = |count, verdict| EnumerationRecord {
        order: ty.order,
        group: ty.to_string(),
        count,
        verdict,
    };
    if !order_passes_mod5(ty.order) {
        return Ok(record(Some(0), Verdict::RefutedByOrderMod5));
    }
    let group = ty.to_group()?;
    match screen_group(&group, &opts.budget)? {
        Screen::RefutedByOrderCount => return Ok(record(Some(0), Verdict::RefutedByOrderCount)),
        Screen::RefutedByAutOrder => return Ok(record(Some(0), Verdict::RefutedByAutOrder)),
        Screen::Possible => {}
    }
    if !ty.is_supported() {
        return Ok(record(None, Verdict::Unresolved));
    }
    let needed = group
        .components()
        .iter()
        .map(candidate_count)
        .max()
        .unwrap_or(0);
    let budget = if needed > opts.budget.max_candidates {
        if !opts.heavy {
            return Ok(record(None, Verdict::Deferred));
        }
        SearchBudget {
            max_candidates: needed,
            ..opts.budget
        }
    } else {
        opts.budget
    };
    let count = count_pentagonal_automorphisms(&group, &budget, opts.progress)?;
    Ok(record(Some(count), Verdict::Enumerated))
}

/// One record per isomorphism type of order `2..=max_order`, ordered by
/// order and then by exponent partitions.
pub fn survey(max_order: u64, opts: &SurveyOptions<'_>) -> Result<Vec<EnumerationRecord>> {
    if max_order > opts.max_order_limit {
        return Err(Error::BudgetExceeded {
            what: "survey order",
            size: max_order as u128,
            limit: opts.max_order_limit as u128,
        });
    }
    let types = (2..=max_order)
        .map(|n| abelian_groups_of_order_within(n, opts.max_order_limit))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    types.par_iter().map(|ty| classify(ty, opts)).collect()
}
