//! Rational-integer helpers: gcds, roots, primes, Kronecker symbols.

use num_integer::Integer;

pub fn gcd(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Largest `r` with `r^k <= n`.
pub fn iroot(n: u128, k: u32) -> u128 {
    match k {
        0 => panic!("zeroth root"),
        1 => n,
        2 => isqrt(n),
        _ => {
            if n < 2 {
                return n;
            }
            let mut r = (n as f64).powf(1.0 / k as f64) as u128;
            let pow_le = |r: u128| match r.checked_pow(k) {
                Some(v) => v <= n,
                None => false,
            };
            while r > 0 && !pow_le(r) {
                r -= 1;
            }
            while pow_le(r + 1) {
                r += 1;
            }
            r
        }
    }
}

pub fn is_squarefree(n: i128) -> bool {
    let mut n = n.unsigned_abs();
    if n == 0 {
        return false;
    }
    let mut p = 2u128;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Sieve of Eratosthenes, primes `<= n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

/// Trial division up to `bound`, the cofactor is then checked with
/// Miller-Rabin. Returns `None` if a composite cofactor survives.
pub fn factor_with_bound(n: u64, bound: u64) -> Option<Vec<(u64, u32)>> {
    assert!(n > 0, "factor of zero");
    let mut n = n;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p <= bound && p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        if p.saturating_mul(p) > n || is_prime(n) {
            out.push((n, 1));
        } else {
            return None;
        }
    }
    Some(out)
}

/// Full factorization; desk-scale inputs only.
pub fn factor(n: u64) -> Vec<(u64, u32)> {
    factor_with_bound(n, u64::MAX).expect("unbounded trial division always completes")
}

/// Kronecker symbol `(a / n)` for `n >= 1`.
pub fn kronecker(a: i128, n: u64) -> i32 {
    assert!(n >= 1);
    let mut n = n as i128;
    let mut a = a;
    let mut result = 1i32;
    while n % 2 == 0 {
        n /= 2;
        let r = a.rem_euclid(8);
        if a % 2 == 0 {
            return 0;
        }
        if r == 3 || r == 5 {
            result = -result;
        }
    }
    // Jacobi symbol (a / n) with n odd
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// A square root of `a` modulo the odd prime `p` (Tonelli-Shanks), if one exists.
pub fn sqrt_mod_prime(a: i128, p: u64) -> Option<u64> {
    let a = a.rem_euclid(p as i128) as u64;
    if p == 2 {
        return Some(a);
    }
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots() {
        assert_eq!(isqrt(24), 4);
        assert_eq!(isqrt(25), 5);
        assert_eq!(iroot(26, 3), 2);
        assert_eq!(iroot(27, 3), 3);
        assert_eq!(iroot(1 << 40, 4), 1 << 10);
        assert_eq!(iroot(0, 3), 0);
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for p in primes_up_to(200).into_iter().filter(|&p| p > 2) {
            for a in [-4i128, -3, -20, -7, 5, 12] {
                let e = pow_mod(a.rem_euclid(p as i128) as u64, (p - 1) / 2, p);
                let expect = if a.rem_euclid(p as i128) == 0 {
                    0
                } else if e == 1 {
                    1
                } else {
                    -1
                };
                assert_eq!(kronecker(a, p), expect, "a={a} p={p}");
            }
        }
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-7, 2), 1);
    }

    #[test]
    fn tonelli_shanks() {
        for p in [3u64, 5, 13, 17, 41, 97, 65537] {
            for a in 0..40i128 {
                if let Some(r) = sqrt_mod_prime(a, p) {
                    assert_eq!((r as u128 * r as u128) % p as u128, a.rem_euclid(p as i128) as u128);
                }
            }
        }
    }

    #[test]
    fn factoring() {
        assert_eq!(factor(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor(1), vec![]);
        assert_eq!(factor(1_000_003), vec![(1_000_003, 1)]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(561));
        assert!(is_squarefree(-5));
        assert!(!is_squarefree(-4));
    }

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(240i128, 46i128), (-7, 3), (0, 5), (12, -18)] {
            let (g, x, y) = ext_gcd(a, b);
            assert_eq!(a * x + b * y, g);
            assert_eq!(g, gcd(a, b));
        }
    }
}
