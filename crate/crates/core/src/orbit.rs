//! Orbits of `a^x mod M` for `x >= 1`.
//!
//! Such a sequence is eventually periodic with a tail `t` and a minimal
//! period `p`: the residues `a^1, ..., a^t` occur exactly once and the
//! residues `a^(t+1), ..., a^(t+p)` repeat forever. The tail is bounded by
//! `floor(log2 M)` (it comes from prime powers shared between `a` and `M`)
//! and the period divides the Carmichael function of the coprime part.
//!
//! Two independent routes produce the shape `(t, p)`:
//!
//! * enumeration — a first-exponent map for small moduli, Brent's cycle
//!   finder above that ([`power_orbit`]);
//! * structure — per prime power, either the multiplicative order or the
//!   exponent at which the power collapses to 0, combined by lcm/max
//!   ([`orbit_shape`]).
//!
//! The congruence engine uses [`orbit_shape`] to cost a decision before
//! materializing any residue table.

use crate::arith::{
    check_modulus, factorize, mul_mod, multiplicative_order, reduce_signed, ArithError,
};
use serde::Serialize;
use std::collections::HashMap;

/// Moduli below this use the value-seen map; larger ones use Brent's
/// algorithm to keep detection memory flat.
const SEEN_MAP_THRESHOLD: u64 = 1 << 20;

/// The eventually periodic sequence `a^x mod M`, `x >= 1`.
///
/// `residues[i]` is `a^(i+1) mod M` for `0 <= i < tail + period`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerOrbit {
    pub base: i64,
    pub modulus: u64,
    pub tail: u64,
    pub period: u64,
    pub residues: Vec<u64>,
}

impl PowerOrbit {
    /// Residue of `base^x` for any `x >= 1` by the closed form.
    pub fn residue_at(&self, x: u64) -> u64 {
        assert!(x >= 1, "exponents start at 1");
        let idx = if x <= self.tail {
            x - 1
        } else {
            self.tail + (x - self.tail - 1) % self.period
        };
        self.residues[idx as usize]
    }

    /// Number of distinct exponent classes: `tail` exact ones plus
    /// `period` cyclic ones.
    pub fn class_count(&self) -> u64 {
        self.tail + self.period
    }
}

fn validate_base(base: i64) -> Result<(), ArithError> {
    if base == 0 || base == 1 {
        return Err(ArithError::InvalidBase(base));
    }
    Ok(())
}

/// Computes the orbit of `base^x mod modulus` by direct enumeration.
///
/// `base` may be any integer other than 0 and 1 (negative bases reduce
/// mod `modulus` first); `2 <= modulus <= 2^62`.
pub fn power_orbit(base: i64, modulus: u64) -> Result<PowerOrbit, ArithError> {
    validate_base(base)?;
    check_modulus(modulus)?;
    let a = reduce_signed(base, modulus);
    let (tail, period) = if modulus < SEEN_MAP_THRESHOLD {
        shape_by_seen_map(a, modulus)
    } else {
        shape_by_brent(a, modulus)
    };
    Ok(PowerOrbit {
        base,
        modulus,
        tail,
        period,
        residues: materialize(a, modulus, tail + period),
    })
}

/// First `len` residues `a^1 .. a^len` by iterated multiplication.
pub(crate) fn materialize(a: u64, m: u64, len: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(len as usize);
    let mut r = a % m;
    for _ in 0..len {
        out.push(r);
        r = mul_mod(r, a, m);
    }
    out
}

fn shape_by_seen_map(a: u64, m: u64) -> (u64, u64) {
    let mut first_seen: HashMap<u64, u64> = HashMap::new();
    let mut r = a % m;
    let mut i = 0u64; // r == a^(i+1)
    loop {
        match first_seen.entry(r) {
            std::collections::hash_map::Entry::Occupied(e) => {
                let j = *e.get();
                return (j, i - j);
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(i);
            }
        }
        r = mul_mod(r, a, m);
        i += 1;
    }
}

fn shape_by_brent(a: u64, m: u64) -> (u64, u64) {
    let a = a % m;
    // find the minimal period with power-of-two search windows
    let mut power = 1u64;
    let mut lam = 1u64;
    let mut tortoise = a;
    let mut hare = mul_mod(a, a, m);
    while tortoise != hare {
        if power == lam {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare = mul_mod(hare, a, m);
        lam += 1;
    }
    // find the minimal tail with two pointers lam apart
    let mut tortoise = a;
    let mut hare = a;
    for _ in 0..lam {
        hare = mul_mod(hare, a, m);
    }
    let mut mu = 0u64;
    while tortoise != hare {
        tortoise = mul_mod(tortoise, a, m);
        hare = mul_mod(hare, a, m);
        mu += 1;
    }
    (mu, lam)
}

/// Computes the orbit shape `(tail, period)` without enumerating the orbit.
///
/// Per prime power `q^e || M`: a base coprime to `q` contributes its
/// multiplicative order as a pure period; a base sharing `q` collapses to 0
/// at exponent `ceil(e / v_q(base))` and contributes only tail. The global
/// tail is the max, the global period the lcm.
pub fn orbit_shape(base: i64, modulus: u64) -> Result<(u64, u64), ArithError> {
    validate_base(base)?;
    check_modulus(modulus)?;
    let a = reduce_signed(base, modulus);
    if a == 0 {
        return Ok((0, 1));
    }
    if a == 1 {
        return Ok((0, 1));
    }
    let mut tail = 0u64;
    let mut period = 1u64;
    for (&q, &e) in factorize(modulus).iter() {
        let qe = q.pow(e);
        let aq = a % qe;
        if aq == 0 {
            // every positive power is 0 mod q^e
            continue;
        }
        let mut v = 0u32;
        let mut rest = aq;
        while rest % q == 0 {
            rest /= q;
            v += 1;
        }
        if v == 0 {
            let ord = multiplicative_order(aq as i64, qe)?;
            period = period / crate::arith::gcd(period, ord) * ord;
        } else {
            // a^x mod q^e is 0 exactly when v*x >= e
            let collapse_at = (e as u64).div_ceil(v as u64);
            tail = tail.max(collapse_at - 1);
        }
    }
    Ok((tail, period))
}
