//! Small integer helpers shared across modules.

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / gcd(a, b)).checked_mul(b)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map_or(false, |sq| sq <= n) {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// `base^exp` if it fits in a `u64`.
pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

/// `a * b mod n` without overflow.
pub fn mod_mul(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

/// Multiplicative order of `base` modulo `n` (requires `gcd(base, n) = 1`),
/// or `None` once `cap` iterations are exhausted.
pub fn mult_order(base: u64, n: u64, cap: u64) -> Option<u64> {
    if n == 1 {
        return Some(1);
    }
    let b = base % n;
    let mut acc = b;
    let mut k = 1u64;
    while acc != 1 {
        if k >= cap {
            return None;
        }
        acc = mod_mul(acc, b, n);
        k += 1;
    }
    Some(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_lcm_basics() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(gcd(7, 0), 7);
        assert_eq!(lcm(4, 6), Some(12));
        assert_eq!(lcm(2, 3), Some(6));
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
    }

    #[test]
    fn orders() {
        // 3 mod 8 has order 2, 2 mod 7 has order 3, 5 mod 624 has order 4
        assert_eq!(mult_order(3, 8, 100), Some(2));
        assert_eq!(mult_order(2, 7, 100), Some(3));
        assert_eq!(mult_order(5, 624, 100), Some(4));
        assert_eq!(mult_order(2, 1_000_003, 2), None);
    }
}
