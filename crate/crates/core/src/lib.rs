//! Decision procedures for purely exponential Diophantine equations
//! `c_1 * a_11^x_11 * ... + c_2 * ... + c_k = 0` where the unknowns occur
//! only in the exponents.
//!
//! The crate answers three kinds of questions about such an equation:
//!
//! * does it have a solution modulo a given M (an exact decision, with a
//!   certificate either way) — [`congruence`];
//! * is there a modulus that witnesses the absence of integer solutions,
//!   and how small can it be made — [`witness`];
//! * what are all integer solutions with term sizes below a bound —
//!   [`search`].
//!
//! The four-term family `n^x ± (n+1)^y ± (n+2)^z ± (n+3)^w = 0` gets
//! dedicated constructors, residue-class classification ([`lemmas`]) and a
//! range verifier for the modulus `12(n+1)(n+2)`.

pub mod arith;
pub mod congruence;
pub mod equation;
pub mod lemmas;
pub mod orbit;
pub mod parser;
pub mod report;
pub mod search;
pub mod witness;

pub use congruence::{has_solution_mod, shrink_modulus, DeciderConfig, SolvabilityCertificate};
pub use equation::{family_equation, Equation, FamilyPattern, SignPattern, Term};
pub use parser::{format_equation, parse_equation};
pub use search::{brute_force_solutions, SearchBound};
pub use witness::{search_modulus, verify_family_range, WitnessSearchConfig};

/// Version string reported in JSON output and by the C API.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Schema tag stamped on every serialized artifact.
pub const SCHEMA_VERSION: u32 = 1;
