//! Equation model: signed sums of products of exponentials.
//!
//! An [`Equation`] is `sum_i c_i * prod_j a_ij ^ x_ij = 0` with integer
//! coefficients and bases and one exponent variable per factor. Variables
//! are globally unique, so each base is raised to its own unknown.
//!
//! The consecutive-base family `n^x ± (n+1)^y ± (n+2)^z ± (n+3)^w = 0`
//! gets first-class support through [`SignPattern`] and [`FamilyPattern`];
//! the all-plus pattern is excluded because a sum of positive terms never
//! vanishes.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// One exponential factor `base ^ variable`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub base: i64,
    pub variable: String,
}

/// One summand `coefficient * prod factors`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coefficient: i64,
    pub factors: Vec<Factor>,
}

impl Term {
    pub fn constant(c: i64) -> Self {
        Term {
            coefficient: c,
            factors: Vec::new(),
        }
    }

    pub fn power(coefficient: i64, base: i64, variable: impl Into<String>) -> Self {
        Term {
            coefficient,
            factors: vec![Factor {
                base,
                variable: variable.into(),
            }],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquationError {
    #[error("an equation needs at least one term")]
    Empty,
    #[error("term {0} has coefficient 0")]
    ZeroCoefficient(usize),
    #[error("base {base} under variable {variable} is degenerate (0 and 1 have constant powers)")]
    DegenerateBase { base: i64, variable: String },
    #[error("variable {0} appears more than once")]
    DuplicateVariable(String),
}

/// A validated equation `sum of terms = 0`.
///
/// Invariants: at least one term, no zero coefficient, every base outside
/// {0, 1}, and no variable name reused across factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Equation {
    terms: Vec<Term>,
}

impl Equation {
    pub fn new(terms: Vec<Term>) -> Result<Self, EquationError> {
        if terms.is_empty() {
            return Err(EquationError::Empty);
        }
        let mut seen = std::collections::HashSet::new();
        for (i, t) in terms.iter().enumerate() {
            if t.coefficient == 0 {
                return Err(EquationError::ZeroCoefficient(i));
            }
            for f in &t.factors {
                if f.base == 0 || f.base == 1 {
                    return Err(EquationError::DegenerateBase {
                        base: f.base,
                        variable: f.variable.clone(),
                    });
                }
                if !seen.insert(f.variable.clone()) {
                    return Err(EquationError::DuplicateVariable(f.variable.clone()));
                }
            }
        }
        Ok(Equation { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Variable names in order of first appearance.
    pub fn variables(&self) -> Vec<&str> {
        let mut out = Vec::new();
        for t in &self.terms {
            for f in &t.factors {
                out.push(f.variable.as_str());
            }
        }
        out
    }

    /// Exact value of the left side at the given exponent assignment.
    ///
    /// Every variable of the equation must be present and >= 1; extra
    /// entries are ignored.
    pub fn evaluate(&self, assignment: &BTreeMap<String, u64>) -> BigInt {
        let mut sum = BigInt::zero();
        for t in &self.terms {
            let mut val = BigInt::from(t.coefficient);
            for f in &t.factors {
                let x = *assignment
                    .get(&f.variable)
                    .unwrap_or_else(|| panic!("no value for variable {}", f.variable));
                assert!(x >= 1, "exponents start at 1");
                val *= BigInt::from(f.base).pow(x as u32);
            }
            sum += val;
        }
        sum
    }

    /// True when the assignment is an exact solution.
    pub fn is_solution(&self, assignment: &BTreeMap<String, u64>) -> bool {
        self.evaluate(assignment).is_zero()
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::parser::format_equation(self))
    }
}

/// Signs `(d1, d2, d3)` attached to `(n+1)^y`, `(n+2)^z`, `(n+3)^w`, each
/// `+1` or `-1`, never all `+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignPattern(pub i8, pub i8, pub i8);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("sign pattern must be three characters from {{+,-}}, got {0:?}")]
    Malformed(String),
    #[error("pattern +++ has no solutions and is not part of the family")]
    AllPlus,
    #[error("family base must satisfy n >= 2, got {0}")]
    BaseTooSmall(u64),
}

impl SignPattern {
    pub fn new(d1: i8, d2: i8, d3: i8) -> Result<Self, PatternError> {
        for d in [d1, d2, d3] {
            if d != 1 && d != -1 {
                return Err(PatternError::Malformed(format!("({d1},{d2},{d3})")));
            }
        }
        if (d1, d2, d3) == (1, 1, 1) {
            return Err(PatternError::AllPlus);
        }
        Ok(SignPattern(d1, d2, d3))
    }

    /// All seven admissible patterns, in lexicographic order with `+` first.
    pub fn all() -> [SignPattern; 7] {
        [
            SignPattern(1, 1, -1),
            SignPattern(1, -1, 1),
            SignPattern(1, -1, -1),
            SignPattern(-1, 1, 1),
            SignPattern(-1, 1, -1),
            SignPattern(-1, -1, 1),
            SignPattern(-1, -1, -1),
        ]
    }

    pub fn is_all_minus(&self) -> bool {
        *self == SignPattern(-1, -1, -1)
    }
}

impl FromStr for SignPattern {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let sign = |c: char| match c {
            '+' => Some(1i8),
            '-' => Some(-1i8),
            _ => None,
        };
        let chars: Vec<i8> = s.chars().filter_map(sign).collect();
        if chars.len() != 3 || s.chars().count() != 3 {
            return Err(PatternError::Malformed(s.to_string()));
        }
        SignPattern::new(chars[0], chars[1], chars[2])
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in [self.0, self.1, self.2] {
            write!(f, "{}", if d == 1 { '+' } else { '-' })?;
        }
        Ok(())
    }
}

/// A member of the consecutive-base family: base `n >= 2` plus signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyPattern {
    pub n: u64,
    pub delta: SignPattern,
}

impl FamilyPattern {
    pub fn new(n: u64, delta: SignPattern) -> Result<Self, PatternError> {
        if n < 2 {
            return Err(PatternError::BaseTooSmall(n));
        }
        Ok(FamilyPattern { n, delta })
    }
}

impl fmt::Display for FamilyPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} {}", self.n, self.delta)
    }
}

/// Builds `n^x + d1 (n+1)^y + d2 (n+2)^z + d3 (n+3)^w = 0` with the
/// conventional variable names.
pub fn family_equation(pattern: FamilyPattern) -> Equation {
    let n = pattern.n as i64;
    let SignPattern(d1, d2, d3) = pattern.delta;
    Equation::new(vec![
        Term::power(1, n, "x"),
        Term::power(d1 as i64, n + 1, "y"),
        Term::power(d2 as i64, n + 2, "z"),
        Term::power(d3 as i64, n + 3, "w"),
    ])
    .expect("family terms are valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assign(pairs: &[(&str, u64)]) -> BTreeMap<String, u64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn validation_rejects_bad_shapes() {
        assert_eq!(Equation::new(vec![]), Err(EquationError::Empty));
        assert_eq!(
            Equation::new(vec![Term::constant(0)]),
            Err(EquationError::ZeroCoefficient(0))
        );
        assert!(matches!(
            Equation::new(vec![Term::power(1, 1, "x")]),
            Err(EquationError::DegenerateBase { base: 1, .. })
        ));
        assert!(matches!(
            Equation::new(vec![Term::power(1, 0, "x")]),
            Err(EquationError::DegenerateBase { base: 0, .. })
        ));
        assert_eq!(
            Equation::new(vec![Term::power(1, 2, "x"), Term::power(-1, 3, "x")]),
            Err(EquationError::DuplicateVariable("x".into()))
        );
    }

    #[test]
    fn negative_bases_are_allowed() {
        let eq = Equation::new(vec![Term::power(1, -2, "x"), Term::constant(-4)]).unwrap();
        assert!(eq.is_solution(&assign(&[("x", 2)])));
        assert!(!eq.is_solution(&assign(&[("x", 3)])));
    }

    #[test]
    fn variables_in_appearance_order() {
        let eq = family_equation(FamilyPattern::new(2, "+--".parse().unwrap()).unwrap());
        assert_eq!(eq.variables(), ["x", "y", "z", "w"]);
    }

    #[test]
    fn family_known_solutions_evaluate_to_zero() {
        // 2^x + 3^y - 4^z - 5^w: 2 + 27 - 4 - 25 = 0
        let eq = family_equation(FamilyPattern::new(2, "+--".parse().unwrap()).unwrap());
        assert!(eq.is_solution(&assign(&[("x", 1), ("y", 3), ("z", 1), ("w", 2)])));
        assert!(eq.is_solution(&assign(&[("x", 3), ("y", 4), ("z", 3), ("w", 2)])));
        assert!(eq.is_solution(&assign(&[("x", 5), ("y", 2), ("z", 2), ("w", 2)])));
        // 2^x - 3^y - 4^z - 5^w: 32 - 3 - 4 - 25 = 0
        let eq = family_equation(FamilyPattern::new(2, "---".parse().unwrap()).unwrap());
        assert!(eq.is_solution(&assign(&[("x", 5), ("y", 1), ("z", 1), ("w", 2)])));
        // 3^x - 4^y - 5^z - 6^w: 27 - 16 - 5 - 6 = 0
        let eq = family_equation(FamilyPattern::new(3, "---".parse().unwrap()).unwrap());
        assert!(eq.is_solution(&assign(&[("x", 3), ("y", 2), ("z", 1), ("w", 1)])));
    }

    #[test]
    fn evaluate_handles_multi_factor_terms() {
        // 6^a - 2^b 3^c = 0 at a=b=c
        let eq = Equation::new(vec![
            Term::power(1, 6, "a"),
            Term {
                coefficient: -1,
                factors: vec![
                    Factor {
                        base: 2,
                        variable: "b".into(),
                    },
                    Factor {
                        base: 3,
                        variable: "c".into(),
                    },
                ],
            },
        ])
        .unwrap();
        assert!(eq.is_solution(&assign(&[("a", 4), ("b", 4), ("c", 4)])));
        assert!(!eq.is_solution(&assign(&[("a", 4), ("b", 4), ("c", 3)])));
    }

    #[test]
    fn sign_pattern_parsing() {
        assert_eq!("+--".parse::<SignPattern>(), SignPattern::new(1, -1, -1));
        assert_eq!(
            "+++".parse::<SignPattern>(),
            Err(PatternError::AllPlus)
        );
        assert!(matches!(
            "+-".parse::<SignPattern>(),
            Err(PatternError::Malformed(_))
        ));
        assert!(matches!(
            "+-*".parse::<SignPattern>(),
            Err(PatternError::Malformed(_))
        ));
        for p in SignPattern::all() {
            assert_eq!(p.to_string().parse::<SignPattern>(), Ok(p));
        }
        assert!(matches!(
            FamilyPattern::new(1, SignPattern(1, 1, -1)),
            Err(PatternError::BaseTooSmall(1))
        ));
    }
}
