//! Exact solvability of `sum c_i prod a_ij^x_ij ≡ 0 (mod M)` in positive
//! exponents, with checkable certificates.
//!
//! Each factor ranges over finitely many exponent classes (the tail plus
//! one class per period step of its orbit mod M), so the decision is a
//! finite enumeration. The engine:
//!
//! 1. computes orbit shapes without materializing orbits, so resource caps
//!    are enforced before any large work starts;
//! 2. prefilters by prime power: the sum must vanish mod every `q^e || M`,
//!    and an unsolvable component settles the question immediately;
//! 3. splits the terms into two blocks balanced by class-count product
//!    (largest first, greedily to the lighter block), enumerates the
//!    smaller block's achievable residue sums into a lookup structure, and
//!    streams the larger block against it, stopping at the first match;
//! 4. on solvable, re-fixes one variable at a time (appearance order,
//!    smallest exponent first) to produce the lexicographically minimal
//!    witness, and re-verifies it by independent modular evaluation.
//!
//! Unsolvable certificates are exhaustive by construction: the block
//! enumeration covers every combination of exponent classes.

use crate::arith::{
    add_mod, check_modulus, divisors, factorize, mul_mod, pow_mod, reduce_signed, ArithError,
};
use crate::equation::Equation;
use crate::orbit::orbit_shape;
use crate::parser::format_equation;
use serde::Serialize;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

/// Default cap on the streamed (larger) block's enumeration count.
pub const DEFAULT_MAX_PAIRS: u128 = 1 << 40;
/// Default cap on the stored (smaller) block's enumeration count.
pub const DEFAULT_MAX_BLOCK: u64 = 1 << 26;
/// Moduli up to this use a bitset for the stored block; larger moduli use a
/// sorted table.
const BITSET_MAX_MODULUS: u64 = 1 << 30;

/// Resource knobs for the decider. `max_pairs` bounds how many residue-sum
/// enumerations the streamed block may take (the environment variable
/// `EXPOSK_MAX_PAIRS` overrides the default); `max_block` bounds the stored
/// block, whose sums are kept in memory.
#[derive(Debug, Clone)]
pub struct DeciderConfig {
    pub max_pairs: u128,
    pub max_block: u64,
}

impl Default for DeciderConfig {
    fn default() -> Self {
        let max_pairs = std::env::var("EXPOSK_MAX_PAIRS")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(DEFAULT_MAX_PAIRS);
        DeciderConfig {
            max_pairs,
            max_block: DEFAULT_MAX_BLOCK,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    /// The decision would exceed a configured cap. Never a wrong answer:
    /// the caller learns that no decision was made.
    #[error("resource cap exceeded: {0}")]
    ResourceExceeded(String),
    #[error("{equation} is solvable mod {modulus}; shrinking needs an unsolvable starting modulus")]
    NotUnsolvable { equation: String, modulus: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Solvability {
    Solvable,
    Unsolvable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassKind {
    Exact,
    Cyclic,
}

/// One variable's exponent class at the certificate modulus. `exact`
/// classes are single exponents within the orbit tail; `cyclic` classes
/// are residues mod the orbit period, with `floor` the smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentClass {
    pub variable: String,
    pub kind: ClassKind,
    pub representative: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub floor: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrbitShape {
    pub tail: u64,
    pub period: u64,
}

/// Outcome of a solvability decision, serializable as JSON.
///
/// For `unsolvable` results, `unsolvable_component` names the prime power
/// `q^e || M` that already has no solution, when one exists; absence of the
/// field means the full modulus was needed. For `solvable` results the
/// witness fields give the lexicographically minimal solution classes and a
/// concrete member of each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolvabilityCertificate {
    pub schema: u32,
    pub equation: String,
    pub modulus: u64,
    pub status: Solvability,
    pub orbit_summary: BTreeMap<String, OrbitShape>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unsolvable_component: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BTreeMap<String, ExponentClass>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_exponents: Option<BTreeMap<String, u64>>,
}

/// Equation preprocessed for modular work: variables indexed in appearance
/// order, terms as (coefficient, [(variable index, base)]).
struct EqInfo {
    vars: Vec<String>,
    var_base: Vec<i64>,
    terms: Vec<(i64, Vec<(usize, i64)>)>,
}

impl EqInfo {
    fn new(eq: &Equation) -> Self {
        let mut vars = Vec::new();
        let mut var_base = Vec::new();
        let mut index = HashMap::new();
        let mut terms = Vec::new();
        for t in eq.terms() {
            let mut fs = Vec::with_capacity(t.factors.len());
            for f in &t.factors {
                let idx = *index.entry(f.variable.clone()).or_insert_with(|| {
                    vars.push(f.variable.clone());
                    var_base.push(f.base);
                    vars.len() - 1
                });
                fs.push((idx, f.base));
            }
            terms.push((t.coefficient, fs));
        }
        EqInfo {
            vars,
            var_base,
            terms,
        }
    }

    fn shapes(&self, m: u64) -> Result<Vec<(u64, u64)>, ArithError> {
        self.var_base
            .iter()
            .map(|&b| orbit_shape(b, m))
            .collect()
    }
}

struct InstFactor {
    base_mod: u64,
    classes: u64,
}

struct InstTerm {
    scale: u64,
    factors: Vec<InstFactor>,
}

impl InstTerm {
    fn combos(&self) -> u128 {
        self.factors
            .iter()
            .fold(1u128, |p, f| p.saturating_mul(f.classes as u128))
    }
}

/// One concrete decision problem: free terms plus a folded constant, all
/// residues already reduced mod `m`.
struct Instance {
    m: u64,
    constant: u64,
    terms: Vec<InstTerm>,
}

fn build_instance(
    info: &EqInfo,
    m: u64,
    fixed: &[Option<u64>],
) -> Result<Instance, ArithError> {
    let mut constant = 0u64;
    let mut terms = Vec::new();
    for (coeff, factors) in &info.terms {
        let mut scale = reduce_signed(*coeff, m);
        let mut free = Vec::new();
        for &(var, base) in factors {
            let base_mod = reduce_signed(base, m);
            match fixed[var] {
                Some(e) => scale = mul_mod(scale, pow_mod(base_mod, e, m), m),
                None => {
                    let (t, p) = orbit_shape(base, m)?;
                    free.push(InstFactor {
                        base_mod,
                        classes: t + p,
                    });
                }
            }
        }
        if free.is_empty() {
            constant = add_mod(constant, scale, m);
        } else {
            terms.push(InstTerm {
                scale,
                factors: free,
            });
        }
    }
    Ok(Instance { m, constant, terms })
}

/// Depth-first enumeration of a block's achievable residue sums. Factor
/// residues are produced by running multiplication, so nothing is
/// materialized. The visitor returns false to abort (used on first match).
struct SumEnum<'a> {
    m: u64,
    terms: &'a [InstTerm],
}

impl SumEnum<'_> {
    fn run<F: FnMut(u64) -> bool>(&self, visit: &mut F) -> bool {
        self.term(0, 0, visit)
    }

    fn term<F: FnMut(u64) -> bool>(&self, ti: usize, acc: u64, visit: &mut F) -> bool {
        if ti == self.terms.len() {
            return visit(acc);
        }
        self.factor(ti, 0, self.terms[ti].scale, acc, visit)
    }

    fn factor<F: FnMut(u64) -> bool>(
        &self,
        ti: usize,
        fi: usize,
        partial: u64,
        acc: u64,
        visit: &mut F,
    ) -> bool {
        let t = &self.terms[ti];
        if fi == t.factors.len() {
            return self.term(ti + 1, add_mod(acc, partial, self.m), visit);
        }
        let f = &t.factors[fi];
        let mut r = f.base_mod;
        for _ in 0..f.classes {
            if !self.factor(ti, fi + 1, mul_mod(partial, r, self.m), acc, visit) {
                return false;
            }
            r = mul_mod(r, f.base_mod, self.m);
        }
        true
    }
}

thread_local! {
    static STORED_BITS: RefCell<Vec<u64>> = const { RefCell::new(Vec::new()) };
}

/// Decides one instance. The smaller block's sums go into a bitset (small
/// moduli) or a sorted table; the larger block streams against it.
fn decide_raw(inst: &Instance, cfg: &DeciderConfig) -> Result<bool, SolveError> {
    if inst.terms.is_empty() {
        return Ok(inst.constant == 0);
    }

    let mut order: Vec<usize> = (0..inst.terms.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(inst.terms[i].combos()));
    let mut block_a: Vec<usize> = Vec::new();
    let mut block_b: Vec<usize> = Vec::new();
    let (mut prod_a, mut prod_b) = (1u128, 1u128);
    for &i in &order {
        let c = inst.terms[i].combos();
        if prod_a <= prod_b {
            block_a.push(i);
            prod_a = prod_a.saturating_mul(c);
        } else {
            block_b.push(i);
            prod_b = prod_b.saturating_mul(c);
        }
    }
    let (stored_idx, streamed_idx, stored_n, streamed_n) = if prod_a <= prod_b {
        (block_a, block_b, prod_a, prod_b)
    } else {
        (block_b, block_a, prod_b, prod_a)
    };
    if stored_n > cfg.max_block as u128 {
        return Err(SolveError::ResourceExceeded(format!(
            "stored block needs {stored_n} enumerations, cap {} (max_block)",
            cfg.max_block
        )));
    }
    if streamed_n > cfg.max_pairs {
        return Err(SolveError::ResourceExceeded(format!(
            "streamed block needs {streamed_n} enumerations, cap {} (max_pairs, \
             override with EXPOSK_MAX_PAIRS)",
            cfg.max_pairs
        )));
    }

    let pick = |idx: &[usize]| -> Vec<InstTerm> {
        idx.iter()
            .map(|&i| InstTerm {
                scale: inst.terms[i].scale,
                factors: inst.terms[i]
                    .factors
                    .iter()
                    .map(|f| InstFactor {
                        base_mod: f.base_mod,
                        classes: f.classes,
                    })
                    .collect(),
            })
            .collect()
    };
    let stored = pick(&stored_idx);
    let streamed = pick(&streamed_idx);
    let m = inst.m;
    let k = inst.constant;
    let store_enum = SumEnum { m, terms: &stored };
    let stream_enum = SumEnum {
        m,
        terms: &streamed,
    };
    // a streamed sum s matches iff -(s + constant) is a stored sum
    let target = |s: u64| {
        let v = add_mod(s, k, m);
        if v == 0 {
            0
        } else {
            m - v
        }
    };

    if m <= BITSET_MAX_MODULUS {
        STORED_BITS.with(|cell| {
            let mut bits = cell.borrow_mut();
            let words = (m as usize).div_ceil(64);
            if bits.len() < words {
                bits.resize(words, 0);
            }
            store_enum.run(&mut |s| {
                bits[(s >> 6) as usize] |= 1 << (s & 63);
                true
            });
            let mut hit = false;
            stream_enum.run(&mut |s| {
                let t = target(s);
                if bits[(t >> 6) as usize] >> (t & 63) & 1 == 1 {
                    hit = true;
                    return false;
                }
                true
            });
            // replay the stored enumeration to clear exactly the set bits;
            // cheaper than zeroing the whole buffer for sparse blocks
            store_enum.run(&mut |s| {
                bits[(s >> 6) as usize] &= !(1 << (s & 63));
                true
            });
            Ok(hit)
        })
    } else {
        let mut sums = Vec::with_capacity(stored_n as usize);
        store_enum.run(&mut |s| {
            sums.push(s);
            true
        });
        sums.sort_unstable();
        sums.dedup();
        let mut hit = false;
        stream_enum.run(&mut |s| {
            if sums.binary_search(&target(s)).is_ok() {
                hit = true;
                return false;
            }
            true
        });
        Ok(hit)
    }
}

fn class_of(variable: &str, e: u64, shape: (u64, u64)) -> ExponentClass {
    if e <= shape.0 {
        ExponentClass {
            variable: variable.to_string(),
            kind: ClassKind::Exact,
            representative: e,
            period: None,
            floor: None,
        }
    } else {
        ExponentClass {
            variable: variable.to_string(),
            kind: ClassKind::Cyclic,
            representative: e,
            period: Some(shape.1),
            floor: Some(e),
        }
    }
}

/// Fixes variables one at a time, smallest exponent first, re-deciding the
/// rest. Yields the lexicographically minimal witness (in appearance
/// order). Only called on instances already known solvable.
fn reconstruct_witness(
    info: &EqInfo,
    m: u64,
    shapes: &[(u64, u64)],
    cfg: &DeciderConfig,
) -> Result<BTreeMap<String, u64>, SolveError> {
    let mut fixed: Vec<Option<u64>> = vec![None; info.vars.len()];
    for v in 0..info.vars.len() {
        let limit = shapes[v].0 + shapes[v].1;
        let mut chosen = None;
        for e in 1..=limit {
            fixed[v] = Some(e);
            if decide_raw(&build_instance(info, m, &fixed)?, cfg)? {
                chosen = Some(e);
                break;
            }
        }
        match chosen {
            Some(e) => fixed[v] = Some(e),
            None => unreachable!(
                "solvable instance lost all witnesses while fixing {}",
                info.vars[v]
            ),
        }
    }
    Ok(info
        .vars
        .iter()
        .zip(&fixed)
        .map(|(name, e)| (name.clone(), e.expect("all variables fixed")))
        .collect())
}

fn summary_map(info: &EqInfo, shapes: &[(u64, u64)]) -> BTreeMap<String, OrbitShape> {
    info.vars
        .iter()
        .zip(shapes)
        .map(|(name, &(tail, period))| (name.clone(), OrbitShape { tail, period }))
        .collect()
}

/// Decides solvability of `eq ≡ 0 (mod modulus)` with default caps.
pub fn has_solution_mod(
    eq: &Equation,
    modulus: u64,
) -> Result<SolvabilityCertificate, SolveError> {
    has_solution_mod_with(eq, modulus, &DeciderConfig::default())
}

/// Decides solvability with explicit resource caps.
pub fn has_solution_mod_with(
    eq: &Equation,
    modulus: u64,
    cfg: &DeciderConfig,
) -> Result<SolvabilityCertificate, SolveError> {
    check_modulus(modulus)?;
    let info = EqInfo::new(eq);
    let shapes = info.shapes(modulus)?;
    let base_cert = |status, component, witness, exponents| SolvabilityCertificate {
        schema: crate::SCHEMA_VERSION,
        equation: format_equation(eq),
        modulus,
        status,
        orbit_summary: summary_map(&info, &shapes),
        unsolvable_component: component,
        witness,
        witness_exponents: exponents,
    };

    let no_fixed = vec![None; info.vars.len()];
    let mut components: Vec<u64> = factorize(modulus)
        .iter()
        .map(|(&q, &e)| q.pow(e))
        .collect();
    components.sort_unstable();
    if components.len() > 1 {
        for &qe in &components {
            match decide_raw(&build_instance(&info, qe, &no_fixed)?, cfg) {
                // an uncheckable component cannot decide anything; the full
                // modulus below gives the honest answer or error
                Err(SolveError::ResourceExceeded(_)) => continue,
                Err(e) => return Err(e),
                Ok(true) => continue,
                Ok(false) => {
                    return Ok(base_cert(Solvability::Unsolvable, Some(qe), None, None))
                }
            }
        }
    }

    if decide_raw(&build_instance(&info, modulus, &no_fixed)?, cfg)? {
        let exponents = reconstruct_witness(&info, modulus, &shapes, cfg)?;
        // independent re-verification by direct modular evaluation
        let mut sum = 0u64;
        for (coeff, factors) in &info.terms {
            let mut val = reduce_signed(*coeff, modulus);
            for &(var, base) in factors {
                let e = exponents[&info.vars[var]];
                val = mul_mod(val, pow_mod(reduce_signed(base, modulus), e, modulus), modulus);
            }
            sum = add_mod(sum, val, modulus);
        }
        assert_eq!(sum, 0, "witness failed independent re-verification");
        let witness = info
            .vars
            .iter()
            .enumerate()
            .map(|(v, name)| {
                (
                    name.clone(),
                    class_of(name, exponents[name], shapes[v]),
                )
            })
            .collect();
        Ok(base_cert(
            Solvability::Solvable,
            None,
            Some(witness),
            Some(exponents),
        ))
    } else {
        Ok(base_cert(Solvability::Unsolvable, None, None, None))
    }
}

/// Minimal divisor of `modulus` (≥ 2) where the equation is still
/// unsolvable. Requires `modulus` itself unsolvable. Divisors are scanned
/// ascending, so the result is globally minimal; in particular every proper
/// divisor of the result admits solutions.
pub fn shrink_modulus(eq: &Equation, modulus: u64) -> Result<u64, SolveError> {
    shrink_modulus_with(eq, modulus, &DeciderConfig::default())
}

pub fn shrink_modulus_with(
    eq: &Equation,
    modulus: u64,
    cfg: &DeciderConfig,
) -> Result<u64, SolveError> {
    let full = has_solution_mod_with(eq, modulus, cfg)?;
    if full.status == Solvability::Solvable {
        return Err(SolveError::NotUnsolvable {
            equation: format_equation(eq),
            modulus,
        });
    }
    for d in divisors(modulus) {
        if d < 2 || d == modulus {
            continue;
        }
        if has_solution_mod_with(eq, d, cfg)?.status == Solvability::Unsolvable {
            return Ok(d);
        }
    }
    Ok(modulus)
}
