//! Fixed-width modular arithmetic on `u64` with `u128` intermediates.
//!
//! Moduli are capped at 2^62 so that a product of two reduced residues and
//! the signed differences used by the CRT solver always fit in 128 bits.
//! Factorization runs trial division over a sieved prime table, then a
//! deterministic Miller-Rabin test and Brent's variant of Pollard rho for
//! the 64-bit remainder.

use once_cell::sync::Lazy;
use std::collections::BTreeMap;
use thiserror::Error;

/// Largest modulus accepted anywhere in the crate.
pub const MAX_MODULUS: u64 = 1 << 62;

/// Trial division covers all primes up to this bound before Pollard rho
/// takes over.
pub const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("modulus {0} is below 2")]
    ModulusTooSmall(u64),
    #[error("modulus {0} exceeds the engine capacity of 2^62")]
    ModulusTooLarge(u64),
    #[error("combined CRT modulus exceeds the engine capacity of 2^62")]
    CombinedModulusTooLarge,
    #[error("residue classes {0} (mod {1}) and {2} (mod {3}) have no common lift")]
    Inconsistent(u64, u64, u64, u64),
    #[error("{a} is not invertible mod {m} (gcd {g})")]
    NotCoprime { a: u64, m: u64, g: u64 },
    #[error("base {0} must not be 0 or 1")]
    InvalidBase(i64),
}

/// Checks `2 <= m <= MAX_MODULUS`.
pub fn check_modulus(m: u64) -> Result<(), ArithError> {
    if m < 2 {
        Err(ArithError::ModulusTooSmall(m))
    } else if m > MAX_MODULUS {
        Err(ArithError::ModulusTooLarge(m))
    } else {
        Ok(())
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut base = base % m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Least non-negative residue of a signed integer.
#[inline]
pub fn reduce_signed(a: i64, m: u64) -> u64 {
    debug_assert!(m <= MAX_MODULUS);
    a.rem_euclid(m as i64) as u64
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

static SMALL_PRIMES: Lazy<Vec<u32>> = Lazy::new(|| {
    let limit = TRIAL_DIVISION_BOUND as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::with_capacity(80_000);
    for p in 2..=limit {
        if !composite[p] {
            primes.push(p as u32);
            let mut q = p * p;
            while q <= limit {
                composite[q] = true;
                q += p;
            }
        }
    }
    primes
});

/// Deterministic Miller-Rabin for the full 64-bit range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    // This witness set is known to be exact for every n < 2^64.
    'witness: for a in [2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's cycle variant of Pollard rho. `n` must be odd, composite and
/// free of factors below the trial division bound.
fn pollard_rho(n: u64) -> u64 {
    debug_assert!(n > 1 && n % 2 == 1 && !is_prime(n));
    const BATCH: u64 = 128;
    for c in 1u64.. {
        let f = |x: u64| add_mod(mul_mod(x, x, n), c, n);
        let mut y = 2u64;
        let mut r = 1u64;
        let mut q = 1u64;
        let mut g = 1u64;
        let mut x = 0u64;
        let mut ys = 0u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0u64;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            // the batched gcd overshot; replay one step at a time
            g = 1;
            while g == 1 {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
            }
        }
        if g < n {
            return g;
        }
    }
    unreachable!("pollard rho exhausted parameter space")
}

/// Prime factorization as an ordered `prime -> exponent` map.
///
/// Accepts any `n >= 1`; `factorize(1)` is the empty map.
pub fn factorize(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    if n <= 1 {
        return out;
    }
    for &p in SMALL_PRIMES.iter() {
        let p = p as u64;
        if p * p > n {
            break;
        }
        if n % p == 0 {
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.insert(p, e);
        }
    }
    if n == 1 {
        return out;
    }
    // remainder has no factor below the trial bound; split it recursively
    let mut stack = vec![n];
    while let Some(v) = stack.pop() {
        if is_prime(v) {
            *out.entry(v).or_insert(0) += 1;
            continue;
        }
        let d = pollard_rho(v);
        stack.push(d);
        stack.push(v / d);
    }
    out
}

/// All divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (&p, &e) in factorize(n).iter() {
        let prev = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(prev.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

/// Combines congruences `x ≡ r_i (mod m_i)` into a single class modulo the
/// lcm of all moduli, or reports that no common lift exists.
pub fn crt_combine(pairs: &[(u64, u64)]) -> Result<(u64, u64), ArithError> {
    let mut r0: u64 = 0;
    let mut m0: u64 = 1;
    for &(r, m) in pairs {
        if m == 0 {
            return Err(ArithError::ModulusTooSmall(0));
        }
        if m > MAX_MODULUS {
            return Err(ArithError::ModulusTooLarge(m));
        }
        let r = r % m.max(1);
        let g = gcd(m0, m);
        let (diff, sign) = if r >= r0 { (r - r0, true) } else { (r0 - r, false) };
        if diff % g != 0 {
            return Err(ArithError::Inconsistent(r0, m0, r, m));
        }
        let lcm = (m0 / g) as u128 * m as u128;
        if lcm > MAX_MODULUS as u128 {
            return Err(ArithError::CombinedModulusTooLarge);
        }
        let lcm = lcm as u64;
        let m1 = m0 / g;
        let m2 = m / g;
        // r0 + m0 * k ≡ r (mod m), so k ≡ ±diff/g * inv(m1) (mod m2)
        let step = (diff / g) % m2.max(1);
        let k = if m2 == 1 {
            0
        } else {
            let inv = mod_inverse(m1 % m2, m2).expect("m1/g and m/g are coprime");
            let k = mul_mod(step, inv, m2);
            if sign {
                k
            } else {
                (m2 - k) % m2
            }
        };
        r0 = (r0 as u128 + m0 as u128 * k as u128).rem_euclid(lcm as u128) as u64;
        m0 = lcm;
    }
    Ok((r0, m0))
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Carmichael function: the exponent of the unit group modulo `m`.
pub fn carmichael(m: u64) -> u64 {
    let mut lam = 1u64;
    for (&p, &e) in factorize(m).iter() {
        let comp = if p == 2 {
            match e {
                1 => 1,
                2 => 2,
                _ => 1u64 << (e - 2),
            }
        } else {
            p.pow(e - 1) * (p - 1)
        };
        lam = lam / gcd(lam, comp) * comp;
    }
    lam
}

/// Multiplicative order of `a` modulo `m`. Requires `gcd(a, m) = 1`.
pub fn multiplicative_order(a: i64, m: u64) -> Result<u64, ArithError> {
    check_modulus(m)?;
    let a = reduce_signed(a, m);
    let g = gcd(a, m);
    if g != 1 {
        return Err(ArithError::NotCoprime { a, m, g });
    }
    let mut order = carmichael(m);
    for (&r, _) in factorize(order).iter() {
        while order % r == 0 && pow_mod(a, order / r, m) == 1 {
            order /= r;
        }
    }
    Ok(order)
}
