//! Search for a witness modulus: an M at which a congruence obstruction
//! proves the equation has no solutions at all.
//!
//! Candidates come from a ladder of exponent bounds. For a rung L the
//! candidate modulus is
//!
//! ```text
//!   M(L) = 2^min(2 + v2(L), 6) * prod { odd prime p <= prime_bound : (p-1) | L }
//! ```
//!
//! folded (by lcm) with any requested extra factors, and capped under
//! `max_modulus` by dropping the largest primes first. The design makes
//! lambda(M(L)) divide a small multiple of L, so every power orbit mod M(L)
//! is short and the decision stays cheap even for the largest rungs.
//!
//! For the four-term consecutive-base family there is a dedicated strategy:
//! try 12(n+1)(n+2) before the ladder, since that modulus is known to kill
//! the all-minus pattern for every n >= 4.

use crate::arith::{gcd, is_prime, ArithError, MAX_MODULUS};
use crate::congruence::{
    has_solution_mod_with, shrink_modulus_with, DeciderConfig, Solvability,
    SolvabilityCertificate, SolveError,
};
use crate::equation::{family_equation, Equation, FamilyPattern, PatternError, SignPattern};
use crate::SCHEMA_VERSION;
use serde::Serialize;
use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use thiserror::Error;

pub const DEFAULT_LADDER: [u64; 12] = [1, 2, 4, 6, 8, 12, 16, 24, 36, 48, 60, 120];
pub const DEFAULT_PRIME_BOUND: u64 = 10_000;
pub const DEFAULT_MAX_WITNESS_MODULUS: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessSearchConfig {
    /// Exponent bounds L to climb, strictly ascending.
    pub ladder: Vec<u64>,
    /// Odd primes up to this bound are eligible for M(L).
    pub prime_bound: u64,
    /// Candidates are capped under this value by dropping largest primes.
    pub max_modulus: u64,
    /// Folded into every candidate by lcm (e.g. known bad prime powers).
    pub extra_factors: Vec<u64>,
}

impl Default for WitnessSearchConfig {
    fn default() -> Self {
        WitnessSearchConfig {
            ladder: DEFAULT_LADDER.to_vec(),
            prime_bound: DEFAULT_PRIME_BOUND,
            max_modulus: DEFAULT_MAX_WITNESS_MODULUS,
            extra_factors: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("ladder must be nonempty, strictly ascending, all entries >= 1")]
    BadLadder,
    #[error("prime bound must be between 3 and 1000000, got {0}")]
    BadPrimeBound(u64),
    #[error("max modulus must be between 4 and {MAX_MODULUS}, got {0}")]
    BadMaxModulus(u64),
    #[error("range must satisfy 4 <= from <= to, got {from}..={to}")]
    BadRange { from: u64, to: u64 },
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

impl WitnessSearchConfig {
    fn validate(&self) -> Result<(), WitnessError> {
        if self.ladder.is_empty()
            || self.ladder.windows(2).any(|w| w[0] >= w[1])
            || self.ladder[0] == 0
        {
            return Err(WitnessError::BadLadder);
        }
        if !(3..=crate::arith::TRIAL_DIVISION_BOUND).contains(&self.prime_bound) {
            return Err(WitnessError::BadPrimeBound(self.prime_bound));
        }
        if !(4..=MAX_MODULUS).contains(&self.max_modulus) {
            return Err(WitnessError::BadMaxModulus(self.max_modulus));
        }
        Ok(())
    }

    /// M(L) for one rung, or None when even the 2-part folded with the
    /// extra factors cannot fit under the cap.
    pub fn candidate_modulus(&self, l: u64) -> Option<u64> {
        assert!(l >= 1);
        let two_part = 1u64 << (2 + l.trailing_zeros()).min(6);
        let mut primes: Vec<u64> = (3..=self.prime_bound)
            .step_by(2)
            .filter(|&p| l % (p - 1) == 0 && is_prime(p))
            .collect();
        loop {
            let mut m = Some(two_part);
            for &p in &primes {
                m = m.and_then(|v| v.checked_mul(p));
            }
            for &e in &self.extra_factors {
                if e >= 2 {
                    m = m.and_then(|v| (v / gcd(v, e)).checked_mul(e));
                }
            }
            match m {
                Some(v) if v <= self.max_modulus => return Some(v),
                _ => {
                    primes.pop()?;
                }
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum WitnessOutcome {
    /// A modulus proving unsolvability, already shrunk to the smallest
    /// unsolvable divisor and certified.
    Found {
        certificate: SolvabilityCertificate,
    },
    NotFound {
        tried: Vec<u64>,
        resource_limited: Vec<u64>,
        reason: String,
    },
}

/// Decides one candidate; Ok(Some) carries a certificate at the smallest
/// unsolvable divisor of m.
fn try_modulus(
    eq: &Equation,
    m: u64,
    config: &DeciderConfig,
) -> Result<Option<SolvabilityCertificate>, SolveError> {
    let cert = has_solution_mod_with(eq, m, config)?;
    if cert.status == Solvability::Solvable {
        return Ok(None);
    }
    let small = shrink_modulus_with(eq, m, config)?;
    if small == m {
        return Ok(Some(cert));
    }
    let shrunk = has_solution_mod_with(eq, small, config)?;
    assert_eq!(shrunk.status, Solvability::Unsolvable);
    Ok(Some(shrunk))
}

fn run_ladder(
    eq: &Equation,
    prepend: &[u64],
    config: &WitnessSearchConfig,
    decider: &DeciderConfig,
) -> Result<WitnessOutcome, WitnessError> {
    config.validate()?;
    let mut tried = Vec::new();
    let mut resource_limited = Vec::new();
    let mut seen = BTreeSet::new();
    let candidates = prepend
        .iter()
        .copied()
        .filter(|&m| (2..=config.max_modulus).contains(&m))
        .chain(config.ladder.iter().filter_map(|&l| config.candidate_modulus(l)));
    for m in candidates {
        if !seen.insert(m) {
            continue;
        }
        tried.push(m);
        match try_modulus(eq, m, decider) {
            Ok(Some(cert)) => return Ok(WitnessOutcome::Found { certificate: cert }),
            Ok(None) => {}
            Err(SolveError::ResourceExceeded(_)) => resource_limited.push(m),
            Err(e) => return Err(e.into()),
        }
    }
    let reason = if !resource_limited.is_empty() && resource_limited.len() == tried.len() {
        format!(
            "resource limits prevented deciding any of the {} candidate moduli",
            tried.len()
        )
    } else if resource_limited.is_empty() {
        format!("all {} candidate moduli admit solutions", tried.len())
    } else {
        format!(
            "{} of {} candidate moduli admit solutions; {} exceeded resource limits",
            tried.len() - resource_limited.len(),
            tried.len(),
            resource_limited.len()
        )
    };
    Ok(WitnessOutcome::NotFound {
        tried,
        resource_limited,
        reason,
    })
}

/// Climbs the ladder until some M(L) proves unsolvability.
pub fn search_modulus(
    eq: &Equation,
    config: &WitnessSearchConfig,
    decider: &DeciderConfig,
) -> Result<WitnessOutcome, WitnessError> {
    run_ladder(eq, &[], config, decider)
}

/// Family strategy: try 12(n+1)(n+2) outright, then the ladder with the
/// family's own bases folded in.
pub fn search_modulus_for_family(
    pattern: FamilyPattern,
    config: &WitnessSearchConfig,
    decider: &DeciderConfig,
) -> Result<WitnessOutcome, WitnessError> {
    let n = pattern.n;
    let eq = family_equation(pattern);
    let corollary = 12u64
        .checked_mul(n + 1)
        .and_then(|v| v.checked_mul(n + 2));
    let mut config = config.clone();
    for e in [12, n + 1, n + 2, n + 3] {
        config.extra_factors.push(e);
    }
    run_ladder(&eq, &corollary.map_or(vec![], |m| vec![m]), &config, decider)
}

pub fn corollary_modulus(n: u64) -> u64 {
    12 * (n + 1) * (n + 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessStatus {
    /// The corollary modulus proves there are no solutions for this n.
    Verified,
    /// The congruence admits solutions at this modulus.
    NotAWitness,
    /// Resource limits prevented a decision.
    Incomplete,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyWitnessEntry {
    pub n: u64,
    pub modulus: u64,
    pub status: WitnessStatus,
    /// Congruence classes per variable (tail + period of its orbit).
    pub classes: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub delta: String,
    pub from: u64,
    pub to: u64,
    pub verified: usize,
    pub not_witness: usize,
    pub incomplete: usize,
    pub all_verified: bool,
    pub entries: Vec<FamilyWitnessEntry>,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub parallel: usize,
    pub timings: bool,
    pub progress: bool,
    pub decider: DeciderConfig,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            parallel: 1,
            timings: false,
            progress: false,
            decider: DeciderConfig::default(),
        }
    }
}

fn verify_one(delta: SignPattern, n: u64, opts: &VerifyOptions) -> FamilyWitnessEntry {
    let eq = family_equation(FamilyPattern::new(n, delta).expect("n >= 4"));
    let m = corollary_modulus(n);
    let start = std::time::Instant::now();
    let (status, classes) = match has_solution_mod_with(&eq, m, &opts.decider) {
        Ok(cert) => {
            let classes = cert
                .orbit_summary
                .iter()
                .map(|(v, s)| (v.clone(), s.tail + s.period))
                .collect();
            let status = match cert.status {
                Solvability::Unsolvable => WitnessStatus::Verified,
                Solvability::Solvable => WitnessStatus::NotAWitness,
            };
            (status, classes)
        }
        Err(SolveError::ResourceExceeded(_)) => (WitnessStatus::Incomplete, BTreeMap::new()),
        Err(e) => panic!("corollary modulus {m} must be admissible: {e}"),
    };
    FamilyWitnessEntry {
        n,
        modulus: m,
        status,
        classes,
        millis: opts.timings.then(|| start.elapsed().as_millis() as u64),
    }
}

/// Checks the corollary modulus 12(n+1)(n+2) against every n in the range.
pub fn verify_family_range(
    delta: SignPattern,
    from: u64,
    to: u64,
    opts: &VerifyOptions,
) -> Result<VerificationReport, WitnessError> {
    if from < 4 || from > to {
        return Err(WitnessError::BadRange { from, to });
    }
    let ns: Vec<u64> = (from..=to).collect();
    let done = AtomicUsize::new(0);
    let total = ns.len();
    let step = |n: &u64| {
        let entry = verify_one(delta, *n, opts);
        if opts.progress {
            let k = done.fetch_add(1, Ordering::Relaxed) + 1;
            if k % 250 == 0 || k == total {
                eprintln!("verified {k}/{total} moduli");
            }
        }
        entry
    };
    let entries: Vec<FamilyWitnessEntry> = if opts.parallel > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.parallel)
            .build()
            .expect("thread pool");
        pool.install(|| {
            use rayon::prelude::*;
            ns.par_iter().map(step).collect()
        })
    } else {
        ns.iter().map(step).collect()
    };
    let verified = entries
        .iter()
        .filter(|e| e.status == WitnessStatus::Verified)
        .count();
    let not_witness = entries
        .iter()
        .filter(|e| e.status == WitnessStatus::NotAWitness)
        .count();
    let incomplete = entries.len() - verified - not_witness;
    Ok(VerificationReport {
        schema: SCHEMA_VERSION,
        delta: delta.to_string(),
        from,
        to,
        verified,
        not_witness,
        incomplete,
        all_verified: verified == entries.len(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_equation;

    fn pattern(n: u64, s: &str) -> FamilyPattern {
        FamilyPattern::new(n, s.parse::<SignPattern>().unwrap()).unwrap()
    }

    #[test]
    fn ladder_moduli_frozen() {
        let c = WitnessSearchConfig::default();
        let ms: Vec<u64> = DEFAULT_LADDER
            .iter()
            .map(|&l| c.candidate_modulus(l).unwrap())
            .collect();
        assert_eq!(
            ms,
            [
                4,
                24,
                240,
                168,
                480,
                21840,
                16320,
                43680,
                15_353_520,
                1_485_120,
                454_293_840,
                37_252_094_880
            ]
        );
        assert!(ms.iter().all(|&m| m <= c.max_modulus));
    }

    #[test]
    fn candidate_capping_drops_largest_primes() {
        let c = WitnessSearchConfig {
            max_modulus: 1_000_000,
            ..WitnessSearchConfig::default()
        };
        // full M(120) = 32*3*5*7*11*13*31*41*61; dropping 61, 41, 31 lands
        // at 32*3*5*7*11*13 = 480480
        assert_eq!(c.candidate_modulus(120), Some(480_480));
    }

    #[test]
    fn extra_factors_fold_by_lcm() {
        let c = WitnessSearchConfig {
            extra_factors: vec![7, 9],
            ..WitnessSearchConfig::default()
        };
        // M(2) = 24, lcm with 7 then 9 gives 504
        assert_eq!(c.candidate_modulus(2), Some(504));
    }

    #[test]
    fn config_validation() {
        let mut c = WitnessSearchConfig::default();
        c.ladder = vec![];
        assert!(matches!(c.validate(), Err(WitnessError::BadLadder)));
        c.ladder = vec![4, 4];
        assert!(matches!(c.validate(), Err(WitnessError::BadLadder)));
        c.ladder = vec![1, 2];
        c.prime_bound = 1;
        assert!(matches!(c.validate(), Err(WitnessError::BadPrimeBound(1))));
    }

    #[test]
    fn family_search_uses_corollary_modulus() {
        let out = search_modulus_for_family(
            pattern(4, "---"),
            &WitnessSearchConfig::default(),
            &DeciderConfig::default(),
        )
        .unwrap();
        match out {
            WitnessOutcome::Found { certificate } => {
                assert_eq!(certificate.status, Solvability::Unsolvable);
                // shrunk well below 12*5*6 = 360; mod 3 already kills n = 4
                assert_eq!(certificate.modulus, 3);
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn solvable_family_reports_not_found() {
        // n + (n+1)^2 + (n+3) = (n+2)^2 identically, so no modulus works
        let out = search_modulus_for_family(
            pattern(2, "+-+"),
            &WitnessSearchConfig::default(),
            &DeciderConfig::default(),
        )
        .unwrap();
        match out {
            WitnessOutcome::NotFound {
                tried,
                resource_limited,
                ..
            } => {
                assert!(tried.len() >= DEFAULT_LADDER.len());
                assert!(resource_limited.is_empty());
            }
            other => panic!("expected not-found, got {other:?}"),
        }
    }

    #[test]
    fn generic_search_finds_small_witness() {
        // odd + odd - odd is odd, never zero mod 2
        let eq = parse_equation("3^x + 5^y - 7^z = 0").unwrap();
        let out = search_modulus(
            &eq,
            &WitnessSearchConfig::default(),
            &DeciderConfig::default(),
        )
        .unwrap();
        match out {
            WitnessOutcome::Found { certificate } => {
                assert_eq!(certificate.modulus, 2);
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn verify_range_small_window() {
        let report =
            verify_family_range("---".parse().unwrap(), 4, 12, &VerifyOptions::default()).unwrap();
        assert!(report.all_verified);
        assert_eq!(report.verified, 9);
        assert_eq!(report.entries.len(), 9);
        for e in &report.entries {
            assert_eq!(e.status, WitnessStatus::Verified);
            assert_eq!(e.modulus, corollary_modulus(e.n));
            assert_eq!(e.classes.len(), 4);
            assert!(e.millis.is_none());
        }
        assert_eq!(report.entries[0].modulus, 360);
    }

    #[test]
    fn verify_range_rejects_bad_range() {
        let opts = VerifyOptions::default();
        assert!(matches!(
            verify_family_range("---".parse().unwrap(), 3, 10, &opts),
            Err(WitnessError::BadRange { .. })
        ));
        assert!(matches!(
            verify_family_range("---".parse().unwrap(), 10, 4, &opts),
            Err(WitnessError::BadRange { .. })
        ));
    }

    #[test]
    fn verify_range_flags_solvable_pattern() {
        // (1,1,1,1) solves the --+ pattern for every n, so the corollary
        // modulus can never witness it
        let report =
            verify_family_range("--+".parse().unwrap(), 4, 6, &VerifyOptions::default()).unwrap();
        assert!(!report.all_verified);
        assert_eq!(report.not_witness, 3);
    }

    #[test]
    fn timings_gated_by_option() {
        let opts = VerifyOptions {
            timings: true,
            ..VerifyOptions::default()
        };
        let report = verify_family_range("---".parse().unwrap(), 4, 4, &opts).unwrap();
        assert!(report.entries[0].millis.is_some());
    }

    #[test]
    fn ladder_lambda_stays_small() {
        // the whole point of the ladder: unit group exponent divides a
        // small multiple of L
        let c = WitnessSearchConfig::default();
        for &l in &DEFAULT_LADDER {
            let m = c.candidate_modulus(l).unwrap();
            let lambda = crate::arith::carmichael(m);
            assert_eq!(lambda % l, 0, "lambda({m}) = {lambda} not a multiple of {l}");
            assert!(lambda <= 2 * l.max(8), "lambda({m}) = {lambda} too big for L = {l}");
        }
    }
}
