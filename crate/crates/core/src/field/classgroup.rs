//! Reduced positive definite binary quadratic forms.

use crate::arith::gcd;

/// Reduce `a x^2 + b xy + c y^2` (negative discriminant, `a > 0`) to the unique
/// reduced form: `|b| <= a <= c`, and `b >= 0` whenever `|b| = a` or `a = c`.
pub fn reduce_form(mut a: i128, mut b: i128, c: i128) -> (i128, i128, i128) {
    let disc = b * b - 4 * a * c;
    assert!(disc < 0 && a > 0, "form ({a},{b},{c}) is not positive definite");
    loop {
        let two_a = 2 * a;
        let k = (a - b).div_euclid(two_a);
        b += k * two_a;
        let c = (b * b - disc) / (4 * a);
        if a > c {
            (a, b) = (c, -b);
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        return (a, b, c);
    }
}

/// All primitive reduced forms of discriminant `disc < 0`, sorted.
pub fn reduced_forms(disc: i128) -> Vec<(i128, i128, i128)> {
    assert!(disc < 0);
    let mut out = Vec::new();
    let mut a = 1i128;
    while 3 * a * a <= -disc {
        for b in (-a + 1)..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (a == c && b < 0) {
                continue;
            }
            if gcd(gcd(a, b), c) != 1 {
                continue;
            }
            out.push((a, b, c));
        }
        a += 1;
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_class_numbers() {
        // h(D) for small fundamental discriminants
        for (d, h) in [(-3, 1), (-4, 1), (-7, 1), (-8, 1), (-15, 2), (-20, 2), (-23, 3), (-56, 4), (-84, 4), (-163, 1)] {
            assert_eq!(reduced_forms(d).len(), h, "D = {d}");
        }
    }

    #[test]
    fn reduction_is_idempotent_and_invariant() {
        for f in reduced_forms(-84) {
            assert_eq!(reduce_form(f.0, f.1, f.2), f);
        }
        // (a, b, c) ~ (a, b + 2a, ...) ~ (c, -b, a)
        assert_eq!(reduce_form(2, 6, 7), reduce_form(2, 2, 3));
        assert_eq!(reduce_form(3, -2, 2), (2, 2, 3));
    }
}
