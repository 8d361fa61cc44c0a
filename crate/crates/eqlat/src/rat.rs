//! Exact rational scalars.
//!
//! All coordinates and values in the engine are arbitrary-precision
//! rationals; nothing is ever rounded. [`Rat`] is a re-export of
//! `num_rational::BigRational`, plus a handful of small constructors and
//! predicates the rest of the crate leans on.

use alloc::string::ToString;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number.
pub type Rat = num_rational::BigRational;

/// The rational `n`.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// The rational `n / d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// `2^k` for any integer `k` (negative exponents give dyadic fractions).
pub fn pow2(k: i32) -> Rat {
    let one = BigInt::one();
    if k >= 0 {
        Rat::from_integer(one << (k as usize))
    } else {
        Rat::new(one.clone(), one << ((-k) as usize))
    }
}

/// Midpoint of `a` and `b`.
pub fn midpoint(a: &Rat, b: &Rat) -> Rat {
    (a + b) / rat(2)
}

/// True when `r` is a dyadic rational (denominator a power of two).
pub fn is_dyadic(r: &Rat) -> bool {
    // The denominator of a canonical `BigRational` is positive.
    r.denom().magnitude().count_ones() == 1
}

/// Splits the positive integer `q` as `2^k * m` with `m` odd,
/// returning `(k, m)`.
pub fn split_pow2(q: &BigInt) -> (u64, BigInt) {
    debug_assert!(q.is_positive());
    let k = q.magnitude().trailing_zeros().unwrap_or(0);
    (k, q >> k)
}

/// Modular inverse of `a` modulo `m` (`m >= 1`), when it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    use num_integer::Integer;
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    let mut x = e.x % m;
    if x.is_negative() {
        x += m;
    }
    Some(x)
}

/// Displays a rational as `p/q`, or just `p` for integers.
pub fn display(r: &Rat) -> alloc::string::String {
    r.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow2_handles_both_signs() {
        assert_eq!(pow2(3), rat(8));
        assert_eq!(pow2(0), rat(1));
        assert_eq!(pow2(-2), ratio(1, 4));
    }

    #[test]
    fn dyadic_detection() {
        assert!(is_dyadic(&rat(5)));
        assert!(is_dyadic(&ratio(3, 8)));
        assert!(is_dyadic(&ratio(-7, 16)));
        assert!(!is_dyadic(&ratio(1, 3)));
        assert!(!is_dyadic(&ratio(5, 6)));
    }

    #[test]
    fn splitting_powers_of_two() {
        let (k, m) = split_pow2(&BigInt::from(24));
        assert_eq!(k, 3);
        assert_eq!(m, BigInt::from(3));
        let (k, m) = split_pow2(&BigInt::from(1));
        assert_eq!(k, 0);
        assert_eq!(m, BigInt::from(1));
    }

    #[test]
    fn modular_inverse() {
        let inv = mod_inverse(&BigInt::from(2), &BigInt::from(3)).unwrap();
        assert_eq!(inv, BigInt::from(2));
        assert_eq!(mod_inverse(&BigInt::from(2), &BigInt::from(4)), None);
    }

    #[test]
    fn rationals_display_reduced() {
        assert_eq!(display(&ratio(2, 4)), "1/2");
        assert_eq!(display(&rat(-3)), "-3");
        assert_eq!(display(&ratio(-3, 6)), "-1/2");
    }
}
