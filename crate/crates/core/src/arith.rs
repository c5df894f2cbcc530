//! Elementary integer arithmetic on machine words.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).len() == 1 && factorize(n)[0].1 == 1
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// p-adic valuation of a nonzero integer.
pub fn val_p(mut n: u64, p: u64) -> u32 {
    assert!(n != 0, "valuation of zero");
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// p-adic valuation of a nonzero big integer.
pub fn val_p_big(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Splits n = p^s * m with p not dividing m.
pub fn split_p(mut n: u64, p: u64) -> (u32, u64) {
    let mut s = 0;
    while n.is_multiple_of(p) {
        n /= p;
        s += 1;
    }
    (s, n)
}

pub fn is_power_of(mut n: u64, p: u64) -> bool {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// |n| is a power of p (including 1).
pub fn is_power_of_big(n: &BigInt, p: u64) -> bool {
    let p = BigInt::from(p);
    let mut n = n.abs();
    if n.is_zero() {
        return false;
    }
    while (&n % &p).is_zero() {
        n /= &p;
    }
    n.is_one()
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed integer into [0, m).
pub fn rem_euclid(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

/// Multiplicative order of a modulo m; a must be a unit.
pub fn mult_order(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let phi = euler_phi(m);
    let mut ord = phi;
    for (q, _) in factorize(phi) {
        while ord.is_multiple_of(q) && pow_mod(a, ord / q, m) == 1 {
            ord /= q;
        }
    }
    ord
}

/// Inverse of a modulo m, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

pub fn big_pow(base: u64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// Reduces a big integer into [0, m).
pub fn big_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a % m;
    if r.is_negative() {
        r + m
    } else {
        r
    }
}

/// Inverse of a modulo m for big integers.
pub fn big_inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = big_mod(a, m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(big_mod(&e.x, m))
}

/// Smallest primitive root modulo p^e (p odd, or p^e in {2, 4}).
pub fn primitive_root_prime_power(p: u64, e: u32) -> u64 {
    let m = p.pow(e);
    if m == 2 {
        return 1;
    }
    if m == 4 {
        return 3;
    }
    assert!(p != 2, "(Z/2^e)^x is not cyclic for e >= 3");
    let phi = euler_phi(m);
    (2..m)
        .find(|&g| gcd(g, p) == 1 && mult_order(g, m) == phi)
        .expect("odd prime powers have primitive roots")
}

/// Chinese remainder: x = a mod m1, x = b mod m2 with coprime moduli.
pub fn crt(a: u64, m1: u64, b: u64, m2: u64) -> u64 {
    let inv = inv_mod(m1 % m2, m2).expect("coprime moduli");
    let t = mul_mod((b + m2 - a % m2) % m2, inv, m2);
    a + m1 * t
}
