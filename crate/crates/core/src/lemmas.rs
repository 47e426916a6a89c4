//! Machine-evaluable congruence restrictions on the four-term family and
//! the residue-class classifier built on top of them.
//!
//! Each generator reduces the family equation modulo a fixed quantity
//! (3, 4, n+1, n+2) and emits the resulting case disjunction: at least one
//! case must hold for every solution. Constraints are concrete and
//! decidable given (n, assignment); nothing here re-derives the symbolic
//! proof chains, the conclusions are simply checked numerically.
//!
//! For the all-minus pattern the generators emit the sharper specialized
//! case lists (the x >= 2 fact eliminates the x = 1 branch modulo n+2, and
//! modulo 4 the n = 2 mod 4 class collapses to "x is odd").

use crate::arith::pow_mod;
use crate::equation::SignPattern;
use serde::Serialize;
use std::collections::BTreeMap;

pub const SOURCE_MOD3: &str = "mod3";
pub const SOURCE_MOD4: &str = "mod4";
pub const SOURCE_MOD_N_PLUS_1: &str = "mod-n-plus-1";
pub const SOURCE_MOD_N_PLUS_2: &str = "mod-n-plus-2";
pub const SOURCE_X_GE_2: &str = "x-ge-2";

pub const CITE_ALL_MINUS: &str = "all-minus-classification";
pub const CITE_RESIDUE_CLASS: &str = "residue-class-criterion";
pub const CITE_MOD3: &str = "mod3-obstruction";
pub const CITE_UNIVERSAL: &str = "universal-identity";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// A single decidable restriction on solutions (x, y, z, w) for base n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Constraint {
    Parity {
        variable: String,
        parity: Parity,
    },
    VarEq {
        variable: String,
        value: u64,
    },
    VarGt {
        variable: String,
        value: u64,
    },
    Contradiction,
    /// (n + offset) divides constant; constant 0 is divisible by anything,
    /// so that case is vacuously true.
    NPlusDivides {
        offset: u8,
        constant: u64,
    },
    /// n = 2^k - offset for some k >= 2.
    NIsPow2Minus {
        offset: u8,
    },
    /// n = multiplier * h - offset for some odd h dividing
    /// 2^(v-1) + sign * s(v), where s(v) = 1 for offset 1 and (-1)^v for
    /// offset 2, v being the value of the coupled variable.
    NOddFactorForm {
        offset: u8,
        multiplier: u8,
        sign: i8,
        variable: String,
    },
}

/// One lemma application: at least one case (a conjunction) must hold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseDisjunction {
    pub source: String,
    pub cases: Vec<Vec<Constraint>>,
}

impl CaseDisjunction {
    pub fn admits(&self, n: u64, assignment: &BTreeMap<String, u64>) -> bool {
        self.cases
            .iter()
            .any(|case| case.iter().all(|c| evaluate(c, n, assignment)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum VerdictStatus {
    NoSolutionProved,
    KnownSolutions {
        solutions: Vec<[u64; 4]>,
        complete: bool,
    },
    NotCovered,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremVerdict {
    #[serde(flatten)]
    pub status: VerdictStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub citation: Option<String>,
}

fn pvar(variable: &str, parity: Parity) -> Constraint {
    Constraint::Parity {
        variable: variable.to_string(),
        parity,
    }
}

/// Parity forced by a sign equation (-1)^v = s: even exactly when s = +1.
fn even_iff(s: i8) -> Parity {
    debug_assert!(s == 1 || s == -1);
    if s == 1 {
        Parity::Even
    } else {
        Parity::Odd
    }
}

fn var_eq(variable: &str, value: u64) -> Constraint {
    Constraint::VarEq {
        variable: variable.to_string(),
        value,
    }
}

fn var_gt(variable: &str, value: u64) -> Constraint {
    Constraint::VarGt {
        variable: variable.to_string(),
        value,
    }
}

fn noff(offset: u8, multiplier: u8, sign: i8, variable: &str) -> Constraint {
    Constraint::NOddFactorForm {
        offset,
        multiplier,
        sign,
        variable: variable.to_string(),
    }
}

/// Decides a constraint concretely. The assignment must cover every
/// variable the constraint mentions.
pub fn evaluate(c: &Constraint, n: u64, assignment: &BTreeMap<String, u64>) -> bool {
    let value_of = |v: &str| -> u64 {
        *assignment
            .get(v)
            .unwrap_or_else(|| panic!("assignment missing variable {v}"))
    };
    match c {
        Constraint::Parity { variable, parity } => {
            let even = value_of(variable) % 2 == 0;
            (*parity == Parity::Even) == even
        }
        Constraint::VarEq { variable, value } => value_of(variable) == *value,
        Constraint::VarGt { variable, value } => value_of(variable) > *value,
        Constraint::Contradiction => false,
        Constraint::NPlusDivides { offset, constant } => {
            *constant == 0 || constant % (n + *offset as u64) == 0
        }
        Constraint::NIsPow2Minus { offset } => {
            let t = n + *offset as u64;
            t >= 4 && t.is_power_of_two()
        }
        Constraint::NOddFactorForm {
            offset,
            multiplier,
            sign,
            variable,
        } => {
            let v = value_of(variable);
            let total = n + *offset as u64;
            if total % *multiplier as u64 != 0 {
                return false;
            }
            let h = total / *multiplier as u64;
            if h % 2 == 0 {
                return false;
            }
            // e*s(v) with s(v) = 1 for offset 1, (-1)^v for offset 2
            let es = if *offset == 1 || v % 2 == 0 {
                *sign as i128
            } else {
                -(*sign as i128)
            };
            // divisibility route: h | 2^(v-1) + es, via modular power
            let residue = (pow_mod(2, v - 1, h) as i128 + es).rem_euclid(h as i128);
            let holds = residue == 0;
            if v <= 64 {
                // exact route must agree wherever it applies
                let t = (1i128 << (v - 1)) + es;
                assert_eq!(
                    t.rem_euclid(h as i128) == 0,
                    holds,
                    "odd-factor routes disagree at n={n}, v={v}"
                );
            }
            holds
        }
    }
}

/// Reduction modulo 3: one conjunction of parity facts, or an outright
/// contradiction when n = 1 mod 3 forces d3 = +1.
pub fn mod3_constraints(delta: SignPattern, n: u64) -> CaseDisjunction {
    assert!(n >= 2);
    let SignPattern(d1, d2, d3) = delta;
    let cases = match n % 3 {
        // d1 + d2 (-1)^z = 0 mod 3
        0 => vec![vec![pvar("z", even_iff(-d1 * d2))]],
        // 1 + d1 (-1)^y + d3 = 0 mod 3, impossible unless d3 = +1
        1 => {
            if d3 == -1 {
                vec![vec![Constraint::Contradiction]]
            } else {
                vec![vec![pvar("y", even_iff(d1))]]
            }
        }
        // (-1)^x + d2 + d3 (-1)^w = 0 mod 3 needs all three signs equal
        _ => vec![vec![pvar("x", even_iff(d2)), pvar("w", even_iff(d2 * d3))]],
    };
    CaseDisjunction {
        source: SOURCE_MOD3.to_string(),
        cases,
    }
}

fn mod4_general(delta: SignPattern, n: u64) -> Vec<Vec<Constraint>> {
    let SignPattern(d1, d2, d3) = delta;
    match n % 4 {
        // d1 + d2 2^z + d3 (-1)^w = 0 mod 4
        0 => vec![
            vec![pvar("w", even_iff(-d1 * d3)), var_gt("z", 1)],
            vec![pvar("w", even_iff(d1 * d3)), var_eq("z", 1)],
        ],
        // 1 + d1 2^y + d2 (-1)^z = 0 mod 4
        1 => vec![
            vec![pvar("z", even_iff(-d2)), var_gt("y", 1)],
            vec![pvar("z", even_iff(d2)), var_eq("y", 1)],
        ],
        // 2^x + d1 (-1)^y + d3 = 0 mod 4
        2 => vec![
            vec![pvar("y", even_iff(-d1 * d3)), var_gt("x", 1)],
            vec![pvar("y", even_iff(d1 * d3)), var_eq("x", 1)],
        ],
        // (-1)^x + d2 + d3 2^w = 0 mod 4
        _ => vec![
            vec![pvar("x", even_iff(-d2)), var_gt("w", 1)],
            vec![pvar("x", even_iff(d2)), var_eq("w", 1)],
        ],
    }
}

/// Reduction modulo 4, with the two sharper all-minus classes: reduction
/// modulo 8 pins (z, w) when 8 | n, and for n = 2 mod 4 the combined
/// argument leaves only "x odd".
pub fn mod4_constraints(delta: SignPattern, n: u64) -> CaseDisjunction {
    assert!(n >= 2);
    let cases = if delta.is_all_minus() && n % 8 == 0 {
        // 1 + 2^z + 3^w = 0 mod 8 forces z = 2 and w odd
        vec![vec![var_eq("z", 2), pvar("w", Parity::Odd)]]
    } else if delta.is_all_minus() && n % 4 == 2 {
        vec![vec![pvar("x", Parity::Odd)]]
    } else {
        mod4_general(delta, n)
    };
    CaseDisjunction {
        source: SOURCE_MOD4.to_string(),
        cases,
    }
}

/// Reduction modulo n+1: (-1)^x + d2 + d3 2^w = 0 mod n+1.
pub fn mod_nplus1_constraints(delta: SignPattern, n: u64) -> CaseDisjunction {
    assert!(n >= 2);
    let SignPattern(_, d2, d3) = delta;
    let e = d2 * d3;
    let cases = vec![
        // signs cancel, so n+1 divides 2^w
        vec![
            pvar("x", even_iff(-d2)),
            Constraint::NIsPow2Minus { offset: 1 },
        ],
        // w = 1: n+1 divides 2(d2 + d3), which is 0 or +-4
        vec![
            pvar("x", even_iff(d2)),
            var_eq("w", 1),
            Constraint::NPlusDivides {
                offset: 1,
                constant: (2 * (d2 + d3)).unsigned_abs() as u64,
            },
        ],
        // w > 1: odd part of n+1 divides 2^(w-1) + d2 d3
        vec![pvar("x", even_iff(d2)), var_gt("w", 1), noff(1, 1, e, "w")],
        vec![pvar("x", even_iff(d2)), var_gt("w", 1), noff(1, 2, e, "w")],
    ];
    CaseDisjunction {
        source: SOURCE_MOD_N_PLUS_1.to_string(),
        cases,
    }
}

fn mod_nplus2_general(delta: SignPattern) -> Vec<Vec<Constraint>> {
    let SignPattern(d1, _, d3) = delta;
    vec![
        // signs cancel, so n+2 divides 2^x
        vec![
            pvar("y", even_iff(-d1 * d3)),
            Constraint::NIsPow2Minus { offset: 2 },
        ],
        // x = 1: n+2 divides 2 - 2 d3, which is 0 or 4
        vec![
            pvar("y", even_iff(d1 * d3)),
            var_eq("x", 1),
            Constraint::NPlusDivides {
                offset: 2,
                constant: (2 - 2 * d3).unsigned_abs() as u64,
            },
        ],
        // x > 1: odd part of n+2 divides 2^(x-1) + d3 (-1)^x
        vec![
            pvar("y", even_iff(d1 * d3)),
            var_gt("x", 1),
            noff(2, 1, d3, "x"),
        ],
        vec![
            pvar("y", even_iff(d1 * d3)),
            var_gt("x", 1),
            noff(2, 2, d3, "x"),
        ],
    ]
}

/// Reduction modulo n+2: (-2)^x + d1 (-1)^y + d3 = 0 mod n+2. For the
/// all-minus pattern x >= 2 always holds, so the x = 1 case disappears and
/// the x > 1 guard is redundant.
pub fn mod_nplus2_constraints(delta: SignPattern, n: u64) -> CaseDisjunction {
    assert!(n >= 2);
    let cases = if delta.is_all_minus() {
        vec![
            vec![
                pvar("y", Parity::Odd),
                Constraint::NIsPow2Minus { offset: 2 },
            ],
            vec![pvar("y", Parity::Even), noff(2, 1, -1, "x")],
            vec![pvar("y", Parity::Even), noff(2, 2, -1, "x")],
        ]
    } else {
        mod_nplus2_general(delta)
    };
    CaseDisjunction {
        source: SOURCE_MOD_N_PLUS_2.to_string(),
        cases,
    }
}

/// All lemma applications for (delta, n), in dependency order. For the
/// all-minus pattern with n >= 3 the x >= 2 fact leads the list (the sum
/// of the three right-hand terms already exceeds n).
pub fn deduction_trace(delta: SignPattern, n: u64) -> Vec<CaseDisjunction> {
    assert!(n >= 2);
    let mut out = Vec::new();
    if delta.is_all_minus() && n >= 3 {
        out.push(CaseDisjunction {
            source: SOURCE_X_GE_2.to_string(),
            cases: vec![vec![var_gt("x", 1)]],
        });
    }
    out.push(mod3_constraints(delta, n));
    out.push(mod4_constraints(delta, n));
    out.push(mod_nplus1_constraints(delta, n));
    out.push(mod_nplus2_constraints(delta, n));
    out
}

/// Residue classes of n for which the sign pattern is proved unsolvable
/// (away from the listed small exceptions).
fn residue_class_applies(delta: SignPattern, n: u64) -> bool {
    let (m8, m16) = (n % 8, n % 16);
    match (delta.0, delta.1, delta.2) {
        (1, 1, -1) => m16 == 4 || m16 == 8 || m8 == 1 || m8 == 2,
        (1, -1, -1) => m8 == 4 || n % 4 == 1 || m8 == 2 || m8 == 3,
        (-1, 1, 1) => m16 == 8 || m16 == 12 || m8 == 5 || n % 4 == 2 || m8 == 3,
        (-1, 1, -1) => m16 == 4 || m16 == 8 || m8 == 1 || m8 == 2 || m8 == 3,
        _ => false,
    }
}

fn residue_class_exceptions(delta: SignPattern, n: u64) -> Option<Vec<[u64; 4]>> {
    match ((delta.0, delta.1, delta.2), n) {
        ((1, -1, -1), 2) => Some(vec![[1, 3, 1, 2], [3, 4, 3, 2], [5, 2, 2, 2]]),
        ((1, -1, -1), 3) => Some(vec![[3, 1, 2, 1]]),
        ((-1, 1, 1), 3) => Some(vec![[1, 3, 2, 2]]),
        ((-1, 1, -1), 2) => Some(vec![[2, 1, 1, 1], [4, 3, 2, 1], [6, 1, 3, 3]]),
        ((-1, 1, -1), 3) => Some(vec![[3, 2, 2, 2]]),
        _ => None,
    }
}

fn verdict(status: VerdictStatus, citation: &str) -> TheoremVerdict {
    TheoremVerdict {
        status,
        citation: Some(citation.to_string()),
    }
}

/// Looks (delta, n) up in the proved results: the complete all-minus
/// classification, the residue-class criterion with its small exceptions,
/// the mod-3 obstruction, and the two universal identities.
pub fn classify(delta: SignPattern, n: u64) -> TheoremVerdict {
    assert!(n >= 2);
    if delta.is_all_minus() {
        let status = match n {
            2 => VerdictStatus::KnownSolutions {
                solutions: vec![[5, 1, 1, 2]],
                complete: true,
            },
            3 => VerdictStatus::KnownSolutions {
                solutions: vec![[3, 2, 1, 1]],
                complete: true,
            },
            _ => VerdictStatus::NoSolutionProved,
        };
        return verdict(status, CITE_ALL_MINUS);
    }
    if residue_class_applies(delta, n) {
        let status = match residue_class_exceptions(delta, n) {
            Some(solutions) => VerdictStatus::KnownSolutions {
                solutions,
                complete: true,
            },
            None => VerdictStatus::NoSolutionProved,
        };
        return verdict(status, CITE_RESIDUE_CLASS);
    }
    if delta.2 == -1 && n % 3 == 1 {
        return verdict(VerdictStatus::NoSolutionProved, CITE_MOD3);
    }
    match (delta.0, delta.1, delta.2) {
        // n + (n+1)^2 + (n+3) = (n+2)^2 identically
        (1, -1, 1) => verdict(
            VerdictStatus::KnownSolutions {
                solutions: vec![[1, 2, 2, 1]],
                complete: false,
            },
            CITE_UNIVERSAL,
        ),
        // n + (n+3) = (n+1) + (n+2) identically
        (-1, -1, 1) => verdict(
            VerdictStatus::KnownSolutions {
                solutions: vec![[1, 1, 1, 1]],
                complete: false,
            },
            CITE_UNIVERSAL,
        ),
        _ => TheoremVerdict {
            status: VerdictStatus::NotCovered,
            citation: None,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::{family_equation, FamilyPattern};
    use crate::search::{brute_force_solutions, SearchBound};

    fn sp(s: &str) -> SignPattern {
        s.parse().unwrap()
    }

    fn asg(x: u64, y: u64, z: u64, w: u64) -> BTreeMap<String, u64> {
        [("x", x), ("y", y), ("z", z), ("w", w)]
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect()
    }

    const ALL_PATTERNS: [&str; 7] = ["++-", "+-+", "+--", "-++", "-+-", "--+", "---"];

    #[test]
    fn mod3_cases_frozen() {
        // all-minus: d1 d2 = 1 so z odd
        let d = mod3_constraints(sp("---"), 9);
        assert_eq!(d.source, "mod3");
        assert_eq!(d.cases, vec![vec![pvar("z", Parity::Odd)]]);
        // n = 1 mod 3 with d3 = -1 is impossible
        let d = mod3_constraints(sp("---"), 10);
        assert_eq!(d.cases, vec![vec![Constraint::Contradiction]]);
        // d2 = -1: x odd; d2 d3 = 1: w even
        let d = mod3_constraints(sp("+--"), 5);
        assert_eq!(
            d.cases,
            vec![vec![pvar("x", Parity::Odd), pvar("w", Parity::Even)]]
        );
        // d3 = +1 keeps n = 1 mod 3 alive: d1 = 1 forces y even
        let d = mod3_constraints(sp("+-+"), 4);
        assert_eq!(d.cases, vec![vec![pvar("y", Parity::Even)]]);
    }

    #[test]
    fn mod4_cases_frozen() {
        let d = mod4_constraints(sp("---"), 8);
        assert_eq!(d.source, "mod4");
        assert_eq!(
            d.cases,
            vec![vec![var_eq("z", 2), pvar("w", Parity::Odd)]]
        );
        let d = mod4_constraints(sp("---"), 6);
        assert_eq!(d.cases, vec![vec![pvar("x", Parity::Odd)]]);
        // d2 = +1, n = 3 mod 4: the sign equation (-1)^x = -d2 pairs x odd
        // with w > 1; the solution (3,1,1,2) of the n=3 pattern sits in
        // that first case
        let d = mod4_constraints(sp("++-"), 7);
        assert_eq!(
            d.cases,
            vec![
                vec![pvar("x", Parity::Odd), var_gt("w", 1)],
                vec![pvar("x", Parity::Even), var_eq("w", 1)],
            ]
        );
        // all-minus away from the special classes keeps the generic form
        let d = mod4_constraints(sp("---"), 4);
        assert_eq!(
            d.cases,
            vec![
                vec![pvar("w", Parity::Odd), var_gt("z", 1)],
                vec![pvar("w", Parity::Even), var_eq("z", 1)],
            ]
        );
    }

    #[test]
    fn mod_nplus1_cases_frozen() {
        // all-minus: case (ii) collapses to (n+1) | 4, meaning n = 3
        let d = mod_nplus1_constraints(sp("---"), 5);
        assert_eq!(d.source, "mod-n-plus-1");
        assert_eq!(
            d.cases,
            vec![
                vec![
                    pvar("x", Parity::Even),
                    Constraint::NIsPow2Minus { offset: 1 }
                ],
                vec![
                    pvar("x", Parity::Odd),
                    var_eq("w", 1),
                    Constraint::NPlusDivides {
                        offset: 1,
                        constant: 4
                    }
                ],
                vec![pvar("x", Parity::Odd), var_gt("w", 1), noff(1, 1, 1, "w")],
                vec![pvar("x", Parity::Odd), var_gt("w", 1), noff(1, 2, 1, "w")],
            ]
        );
        // d2 = +1 flips the parities: case (i) carries x odd
        let d = mod_nplus1_constraints(sp("++-"), 5);
        assert_eq!(
            d.cases[0],
            vec![
                pvar("x", Parity::Odd),
                Constraint::NIsPow2Minus { offset: 1 }
            ]
        );
        // d2 + d3 = 0 makes the w = 1 case vacuous
        assert_eq!(
            d.cases[1],
            vec![
                pvar("x", Parity::Even),
                var_eq("w", 1),
                Constraint::NPlusDivides {
                    offset: 1,
                    constant: 0
                }
            ]
        );
        assert_eq!(d.cases[2], vec![
            pvar("x", Parity::Even),
            var_gt("w", 1),
            noff(1, 1, -1, "w")
        ]);
    }

    #[test]
    fn mod_nplus2_cases_frozen() {
        // all-minus drops the x = 1 case and the x > 1 guard entirely
        let d = mod_nplus2_constraints(sp("---"), 6);
        assert_eq!(d.source, "mod-n-plus-2");
        assert_eq!(
            d.cases,
            vec![
                vec![
                    pvar("y", Parity::Odd),
                    Constraint::NIsPow2Minus { offset: 2 }
                ],
                vec![pvar("y", Parity::Even), noff(2, 1, -1, "x")],
                vec![pvar("y", Parity::Even), noff(2, 2, -1, "x")],
            ]
        );
        // generic four-case form for other patterns
        let d = mod_nplus2_constraints(sp("+--"), 5);
        assert_eq!(
            d.cases,
            vec![
                vec![
                    pvar("y", Parity::Even),
                    Constraint::NIsPow2Minus { offset: 2 }
                ],
                vec![
                    pvar("y", Parity::Odd),
                    var_eq("x", 1),
                    Constraint::NPlusDivides {
                        offset: 2,
                        constant: 4
                    }
                ],
                vec![pvar("y", Parity::Odd), var_gt("x", 1), noff(2, 1, -1, "x")],
                vec![pvar("y", Parity::Odd), var_gt("x", 1), noff(2, 2, -1, "x")],
            ]
        );
    }

    #[test]
    fn specialization_matches_general_after_normalization() {
        // dropping cases that assert x = 1 and stripping x > 1 guards from
        // the generic all-minus instance must give the specialized list
        let general = mod_nplus2_general(sp("---"));
        let normalized: Vec<Vec<Constraint>> = general
            .into_iter()
            .filter(|case| !case.contains(&var_eq("x", 1)))
            .map(|case| {
                case.into_iter()
                    .filter(|c| *c != var_gt("x", 1))
                    .collect()
            })
            .collect();
        assert_eq!(normalized, mod_nplus2_constraints(sp("---"), 7).cases);

        // modulo 4 the n = 2 mod 4 all-minus class is NOT a substitution
        // instance: the generic form constrains (y, x), the specialized
        // fact is "x odd", proved by combining the other reductions
        let generic = mod4_general(sp("---"), 6);
        assert_eq!(
            generic,
            vec![
                vec![pvar("y", Parity::Odd), var_gt("x", 1)],
                vec![pvar("y", Parity::Even), var_eq("x", 1)],
            ]
        );
        assert_ne!(generic, mod4_constraints(sp("---"), 6).cases);
    }

    #[test]
    fn evaluate_basics() {
        let a = asg(3, 2, 1, 1);
        assert!(evaluate(&pvar("z", Parity::Odd), 3, &a));
        assert!(!evaluate(&pvar("x", Parity::Even), 3, &a));
        assert!(evaluate(&var_eq("w", 1), 3, &a));
        assert!(evaluate(&var_gt("x", 1), 3, &a));
        assert!(!evaluate(&Constraint::Contradiction, 3, &a));
        // 6 + 2 = 8 = 2^3
        assert!(evaluate(&Constraint::NIsPow2Minus { offset: 2 }, 6, &a));
        assert!(!evaluate(&Constraint::NIsPow2Minus { offset: 2 }, 5, &a));
        // k >= 2 means n + 1 = 2 does not qualify
        assert!(!evaluate(&Constraint::NIsPow2Minus { offset: 1 }, 1, &a));
        // 3 + 1 = 4 divides 4
        assert!(evaluate(
            &Constraint::NPlusDivides {
                offset: 1,
                constant: 4
            },
            3,
            &a
        ));
        assert!(!evaluate(
            &Constraint::NPlusDivides {
                offset: 1,
                constant: 4
            },
            7,
            &a
        ));
        // zero is divisible by everything
        assert!(evaluate(
            &Constraint::NPlusDivides {
                offset: 1,
                constant: 0
            },
            7,
            &a
        ));
    }

    #[test]
    fn evaluate_odd_factor_form() {
        // n = 4, w = 3: h = n+1 = 5 odd and 5 | 2^2 + 1
        assert!(evaluate(&noff(1, 1, 1, "w"), 4, &asg(1, 1, 1, 3)));
        // n = 9 = 2*5 - 1: h = 5 odd and 5 | 2^2 + 1
        assert!(evaluate(&noff(1, 2, 1, "w"), 9, &asg(1, 1, 1, 3)));
        // n = 3, x = 3: h = n+2 = 5 and 2^2 - (-1)^3 = 5
        assert!(evaluate(&noff(2, 1, -1, "x"), 3, &asg(3, 1, 1, 1)));
        // x = 4 gives 2^3 - 1 = 7, not divisible by 5
        assert!(!evaluate(&noff(2, 1, -1, "x"), 3, &asg(4, 1, 1, 1)));
        // even h never qualifies: n = 3, multiplier 2 gives h = 2
        assert!(!evaluate(&noff(1, 2, 1, "w"), 3, &asg(1, 1, 1, 3)));
        // non-integer h: n = 2, multiplier 2 gives (n+1)/2 not integral
        assert!(!evaluate(&noff(1, 2, 1, "w"), 2, &asg(1, 1, 1, 3)));
    }

    #[test]
    fn odd_factor_form_beyond_exact_range() {
        // v = 100: 2^99 = (-1)^99 = -1 mod 3, so 3 | 2^99 + 1; n = 2 has
        // h = n+1 = 3
        assert!(evaluate(&noff(1, 1, 1, "w"), 2, &asg(1, 1, 1, 100)));
        // h = 5: 2^99 = 2^3 = 3 mod 5, so 2^99 + 1 = 4 mod 5
        assert!(!evaluate(&noff(1, 1, 1, "w"), 4, &asg(1, 1, 1, 100)));
        // boundary of the exact route; with h = 3 the form holds exactly
        // for even v (odd exponent v-1 puts 2^(v-1) at -1 mod 3)
        assert!(evaluate(&noff(1, 1, 1, "w"), 2, &asg(1, 1, 1, 64)));
        assert!(!evaluate(&noff(1, 1, 1, "w"), 2, &asg(1, 1, 1, 65)));
        assert!(evaluate(&noff(1, 1, 1, "w"), 2, &asg(1, 1, 1, 66)));
    }

    #[test]
    fn dual_routes_agree_on_grid() {
        // the assert inside evaluate fires on any disagreement
        for n in 2..=40u64 {
            for v in 1..=64u64 {
                for offset in [1u8, 2] {
                    for multiplier in [1u8, 2] {
                        for sign in [1i8, -1] {
                            let c = noff(offset, multiplier, sign, "w");
                            evaluate(&c, n, &asg(1, 1, 1, v));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn trace_order_and_x_ge_2_gate() {
        let sources = |delta: &str, n: u64| -> Vec<String> {
            deduction_trace(sp(delta), n)
                .iter()
                .map(|d| d.source.clone())
                .collect()
        };
        assert_eq!(
            sources("---", 5),
            ["x-ge-2", "mod3", "mod4", "mod-n-plus-1", "mod-n-plus-2"]
        );
        assert_eq!(
            sources("---", 2),
            ["mod3", "mod4", "mod-n-plus-1", "mod-n-plus-2"]
        );
        assert_eq!(
            sources("++-", 5),
            ["mod3", "mod4", "mod-n-plus-1", "mod-n-plus-2"]
        );
        let trace = deduction_trace(sp("---"), 5);
        assert_eq!(trace[0].cases, vec![vec![var_gt("x", 1)]]);
    }

    #[test]
    fn classify_frozen_verdicts() {
        let v = classify(sp("---"), 7);
        assert_eq!(v.status, VerdictStatus::NoSolutionProved);
        assert_eq!(v.citation.as_deref(), Some("all-minus-classification"));

        let v = classify(sp("---"), 2);
        assert_eq!(
            v.status,
            VerdictStatus::KnownSolutions {
                solutions: vec![[5, 1, 1, 2]],
                complete: true
            }
        );
        let v = classify(sp("---"), 3);
        assert_eq!(
            v.status,
            VerdictStatus::KnownSolutions {
                solutions: vec![[3, 2, 1, 1]],
                complete: true
            }
        );

        // 20 = 4 mod 16
        let v = classify(sp("++-"), 20);
        assert_eq!(v.status, VerdictStatus::NoSolutionProved);
        assert_eq!(v.citation.as_deref(), Some("residue-class-criterion"));

        // 7 misses every residue class of the ++- criterion but 7 = 1 mod 3
        // with d3 = -1
        let v = classify(sp("++-"), 7);
        assert_eq!(v.status, VerdictStatus::NoSolutionProved);
        assert_eq!(v.citation.as_deref(), Some("mod3-obstruction"));

        let v = classify(sp("+-+"), 9);
        assert_eq!(
            v.status,
            VerdictStatus::KnownSolutions {
                solutions: vec![[1, 2, 2, 1]],
                complete: false
            }
        );
        assert_eq!(v.citation.as_deref(), Some("universal-identity"));

        let v = classify(sp("--+"), 17);
        assert_eq!(
            v.status,
            VerdictStatus::KnownSolutions {
                solutions: vec![[1, 1, 1, 1]],
                complete: false
            }
        );

        // sporadic solutions exist at n = 3 for ++- and nothing is claimed
        let v = classify(sp("++-"), 3);
        assert_eq!(v.status, VerdictStatus::NotCovered);
        assert_eq!(v.citation, None);

        let v = classify(sp("-+-"), 2);
        assert_eq!(
            v.status,
            VerdictStatus::KnownSolutions {
                solutions: vec![[2, 1, 1, 1], [4, 3, 2, 1], [6, 1, 3, 3]],
                complete: true
            }
        );
        let v = classify(sp("-++"), 3);
        assert_eq!(
            v.status,
            VerdictStatus::KnownSolutions {
                solutions: vec![[1, 3, 2, 2]],
                complete: true
            }
        );
    }

    #[test]
    fn soundness_against_search() {
        let bound = SearchBound::new(1_000_000).unwrap();
        for pat in ALL_PATTERNS {
            let delta = sp(pat);
            for n in 2..=30u64 {
                let eq = family_equation(FamilyPattern::new(n, delta).unwrap());
                let sols = brute_force_solutions(&eq, &bound).unwrap();
                let trace = deduction_trace(delta, n);
                for s in &sols {
                    for d in &trace {
                        assert!(
                            d.admits(n, s),
                            "{pat} n={n}: {} rejects the solution {s:?}",
                            d.source
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn classify_consistent_with_search() {
        let bound = SearchBound::new(1_000_000).unwrap();
        for pat in ALL_PATTERNS {
            let delta = sp(pat);
            for n in 2..=30u64 {
                let eq = family_equation(FamilyPattern::new(n, delta).unwrap());
                let found: Vec<[u64; 4]> = brute_force_solutions(&eq, &bound)
                    .unwrap()
                    .iter()
                    .map(|s| [s["x"], s["y"], s["z"], s["w"]])
                    .collect();
                match classify(delta, n).status {
                    VerdictStatus::NoSolutionProved => {
                        assert!(found.is_empty(), "{pat} n={n}: found {found:?}");
                    }
                    VerdictStatus::KnownSolutions {
                        solutions,
                        complete,
                    } => {
                        for s in &solutions {
                            let a = asg(s[0], s[1], s[2], s[3]);
                            assert!(eq.is_solution(&a), "{pat} n={n}: listed {s:?}");
                        }
                        if complete {
                            // every listed tuple is tiny, so the search
                            // bound sees them all
                            assert_eq!(found, solutions, "{pat} n={n}");
                        } else {
                            for s in &solutions {
                                assert!(found.contains(s), "{pat} n={n}");
                            }
                        }
                    }
                    VerdictStatus::NotCovered => {}
                }
            }
        }
    }

    #[test]
    fn verdict_serialization_shape() {
        let v = classify(sp("---"), 2);
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["status"], "known-solutions");
        assert_eq!(json["complete"], true);
        assert_eq!(json["solutions"][0][0], 5);
        assert_eq!(json["citation"], "all-minus-classification");
        let v = classify(sp("++-"), 3);
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["status"], "not-covered");
        assert!(json.get("citation").is_none());
    }

    #[test]
    fn constraint_serialization_shape() {
        let c = noff(2, 1, -1, "x");
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(json["kind"], "n-odd-factor-form");
        assert_eq!(json["offset"], 2);
        assert_eq!(json["sign"], -1);
        let c = pvar("w", Parity::Odd);
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(json["kind"], "parity");
        assert_eq!(json["parity"], "odd");
    }
}
