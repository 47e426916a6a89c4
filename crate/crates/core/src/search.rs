//! Bounded exhaustive search for integer solutions.
//!
//! The bound is on term magnitude: an assignment qualifies when every
//! `|c prod a^x| <= max_value` and the sum is exactly zero. Since every
//! base has absolute value at least 2, each exponent range is finite under
//! the bound, so the search is a complete enumeration of a finite box.
//!
//! Factors are assigned largest base first (shortest exponent range
//! outermost). Two prunes keep the tree small, both exact:
//!
//! * magnitude: an exponent stops growing once the term cannot stay within
//!   the bound even with all other factors at exponent 1;
//! * interval: partial sums carry a signed range for each unfinished term;
//!   if zero falls outside the total range, the subtree is dead.
//!
//! Everything runs in i128; accepted solutions are re-verified with
//! arbitrary precision before being returned.

use crate::equation::{family_equation, Equation, FamilyPattern, PatternError, SignPattern};
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

/// Largest supported term-magnitude bound; keeps partial products well
/// inside i128.
pub const MAX_SEARCH_BOUND: u64 = 1_000_000_000_000_000_000;

/// Cap on `|term|` for the enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBound {
    max_value: u64,
}

impl SearchBound {
    pub fn new(max_value: u64) -> Result<Self, SearchError> {
        if !(2..=MAX_SEARCH_BOUND).contains(&max_value) {
            return Err(SearchError::InvalidBound(max_value));
        }
        Ok(SearchBound { max_value })
    }

    pub fn max_value(&self) -> u64 {
        self.max_value
    }
}

impl Default for SearchBound {
    /// 10^12: small enough to finish quickly, large enough to reproduce
    /// every known solution of the consecutive-base family many times over.
    fn default() -> Self {
        SearchBound {
            max_value: 1_000_000_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("base {base} under variable {variable} has |base| <= 1; its exponent range is unbounded")]
    UnboundedBase { base: i64, variable: String },
    #[error("search bound must be between 2 and {MAX_SEARCH_BOUND}, got {0}")]
    InvalidBound(u64),
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

struct FactorSlot {
    term: usize,
    base: i64,
    var: usize,
}

struct Search<'a> {
    bound: i128,
    order: &'a [FactorSlot],
    partial: Vec<i128>,
    min_rest: Vec<i128>,
    neg_rest: Vec<u32>,
    unassigned: Vec<u32>,
    exps: Vec<u64>,
    results: Vec<Vec<u64>>,
}

impl Search<'_> {
    fn range_of(&self, t: usize) -> (i128, i128) {
        if self.unassigned[t] == 0 {
            return (self.partial[t], self.partial[t]);
        }
        if self.neg_rest[t] > 0 {
            return (-self.bound, self.bound);
        }
        let floor = self.partial[t] * self.min_rest[t];
        if self.partial[t] > 0 {
            (floor, self.bound)
        } else {
            (-self.bound, floor)
        }
    }

    fn dfs(&mut self, depth: usize) {
        if depth == self.order.len() {
            if self.partial.iter().sum::<i128>() == 0 {
                self.results.push(self.exps.clone());
            }
            return;
        }
        let (mut lo, mut hi) = (0i128, 0i128);
        for t in 0..self.partial.len() {
            let (a, b) = self.range_of(t);
            lo += a;
            hi += b;
        }
        if lo > 0 || hi < 0 {
            return;
        }

        let slot = &self.order[depth];
        let (t, base, var) = (slot.term, slot.base, slot.var);
        let mag = base.unsigned_abs() as i128;
        let saved = self.partial[t];
        self.min_rest[t] /= mag;
        self.neg_rest[t] -= (base < 0) as u32;
        self.unassigned[t] -= 1;

        let mut value = saved * base as i128;
        let mut x = 1u64;
        loop {
            match value.unsigned_abs().checked_mul(self.min_rest[t] as u128) {
                Some(m) if m <= self.bound as u128 => {}
                _ => break,
            }
            self.partial[t] = value;
            self.exps[var] = x;
            self.dfs(depth + 1);
            match value.checked_mul(base as i128) {
                Some(v) => value = v,
                None => break,
            }
            x += 1;
        }

        self.partial[t] = saved;
        self.min_rest[t] *= mag;
        self.neg_rest[t] += (base < 0) as u32;
        self.unassigned[t] += 1;
    }
}

/// Enumerates every assignment with all term magnitudes within the bound
/// and sum exactly zero, sorted lexicographically by exponents in variable
/// appearance order. A constant-only zero equation yields one empty
/// assignment.
pub fn brute_force_solutions(
    eq: &Equation,
    bound: &SearchBound,
) -> Result<Vec<BTreeMap<String, u64>>, SearchError> {
    let b = bound.max_value as i128;
    let vars: Vec<String> = eq.variables().iter().map(|s| s.to_string()).collect();
    let var_index: BTreeMap<&str, usize> = vars
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();

    let mut order = Vec::new();
    let mut partial = Vec::new();
    let mut min_rest = Vec::new();
    let mut neg_rest = Vec::new();
    let mut unassigned = Vec::new();
    for (ti, term) in eq.terms().iter().enumerate() {
        let mut rest = 1i128;
        let mut negs = 0u32;
        for f in &term.factors {
            if f.base.unsigned_abs() <= 1 {
                return Err(SearchError::UnboundedBase {
                    base: f.base,
                    variable: f.variable.clone(),
                });
            }
            rest = rest.saturating_mul(f.base.unsigned_abs() as i128);
            negs += (f.base < 0) as u32;
            order.push(FactorSlot {
                term: ti,
                base: f.base,
                var: var_index[f.variable.as_str()],
            });
        }
        // minimal magnitude of this term (all exponents 1); if it already
        // exceeds the bound no assignment can qualify
        if (term.coefficient.unsigned_abs() as i128).saturating_mul(rest) > b {
            return Ok(Vec::new());
        }
        partial.push(term.coefficient as i128);
        min_rest.push(rest);
        neg_rest.push(negs);
        unassigned.push(term.factors.len() as u32);
    }
    order.sort_by_key(|s| std::cmp::Reverse(s.base.unsigned_abs()));

    let mut search = Search {
        bound: b,
        order: &order,
        partial,
        min_rest,
        neg_rest,
        unassigned,
        exps: vec![0; vars.len()],
        results: Vec::new(),
    };
    search.dfs(0);
    let mut results = search.results;
    results.sort_unstable();

    let out: Vec<BTreeMap<String, u64>> = results
        .into_iter()
        .map(|exps| {
            vars.iter()
                .zip(&exps)
                .map(|(v, &e)| (v.clone(), e))
                .collect()
        })
        .collect();
    for assignment in &out {
        assert!(
            eq.evaluate(assignment).is_zero(),
            "search result fails exact re-verification"
        );
    }
    Ok(out)
}

/// Per-n solution tuples `(x, y, z, w)` for the family over a base range.
pub fn family_solution_table(
    delta: SignPattern,
    n_from: u64,
    n_to: u64,
    bound: &SearchBound,
) -> Result<BTreeMap<u64, Vec<[u64; 4]>>, SearchError> {
    let mut table = BTreeMap::new();
    for n in n_from..=n_to {
        let eq = family_equation(FamilyPattern::new(n, delta)?);
        let sols = brute_force_solutions(&eq, bound)?;
        table.insert(
            n,
            sols.iter()
                .map(|s| [s["x"], s["y"], s["z"], s["w"]])
                .collect(),
        );
    }
    Ok(table)
}
