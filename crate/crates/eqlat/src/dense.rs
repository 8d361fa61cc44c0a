//! Shifted dyadic dense sets and disjoint dense taggings.
//!
//! The decidable stand-ins for "disjoint dense subsets of the reals" are
//! sets of the form `shift + D` where `D` is the dyadic rationals. Two such
//! sets coincide exactly when their shifts differ by a dyadic rational, so
//! shifts are canonicalized to a representative with odd denominator in
//! `[0, 1)` and structural equality becomes set equality. Membership,
//! disjointness, and "pick an element in a window" are all exact.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{is_dyadic, mod_inverse, rat, split_pow2, Rat};

/// The dense set `shift + {k / 2^n}`, with the shift in canonical form
/// (odd denominator, value in `[0, 1)`). `shift == 0` is the plain dyadics.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DenseSet {
    shift: Rat,
}

impl DenseSet {
    /// The dyadic rationals.
    pub fn dyadic() -> Self {
        DenseSet { shift: rat(0) }
    }

    /// The dyadics shifted by `s`, canonicalizing the representation:
    /// `s + D = s' + D` whenever `s - s'` is dyadic, so the stored shift is
    /// the unique representative with odd denominator in `[0, 1)`.
    pub fn shifted(s: Rat) -> Self {
        DenseSet {
            shift: canonical_shift(s),
        }
    }

    pub fn shift(&self) -> &Rat {
        &self.shift
    }

    pub fn contains(&self, x: &Rat) -> bool {
        is_dyadic(&(x - &self.shift))
    }

    /// Whether the two sets are disjoint (equivalently, distinct).
    pub fn disjoint(&self, other: &DenseSet) -> bool {
        self.shift != other.shift
    }

    /// Deterministically picks an element of the set in the open window
    /// `(lo, hi)`, preferring the coarsest dyadic level that meets the
    /// window and, within that level, the element closest to the window
    /// midpoint (ties toward the smaller value).
    pub fn pick_in(&self, lo: &Rat, hi: &Rat) -> Result<Rat> {
        if lo >= hi {
            return Err(Error::InvalidConstraint(format!(
                "empty window ({lo}, {hi})"
            )));
        }
        // Work in the shifted coordinate: find a dyadic in (lo', hi').
        let lo2 = lo - &self.shift;
        let hi2 = hi - &self.shift;
        let target = (&lo2 + &hi2) / rat(2);
        let mut level: i32 = 0;
        loop {
            // Dyadics at level n: k / 2^n. Find candidates nearest target.
            let denom = crate::rat::pow2(level);
            let scaled = &target * &denom;
            let k = scaled.floor().to_integer();
            for cand_k in [k.clone(), &k + 1, &k - 1, &k + 2] {
                let cand = Rat::new(cand_k, denom.to_integer());
                if cand > lo2 && cand < hi2 {
                    return Ok(cand + &self.shift);
                }
            }
            level += 1;
            if level > 4096 {
                return Err(Error::Internal(
                    "dyadic refinement failed to meet a nonempty open window".into(),
                ));
            }
        }
    }

    /// A canonical element of the set (the shift itself).
    pub fn representative(&self) -> Rat {
        self.shift.clone()
    }
}

impl fmt::Display for DenseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift.is_zero() {
            write!(f, "dyadic")
        } else {
            write!(f, "dyadic+{}", self.shift)
        }
    }
}

fn canonical_shift(s: Rat) -> Rat {
    // Write s = p / (2^k * m) with m odd. Modulo dyadics, s is congruent to
    // (p * inverse(2^k) mod m) / m, which lies in [0, 1) and has odd
    // denominator. For dyadic s (m == 1) the representative is 0.
    let p = s.numer().clone();
    let q = s.denom().clone();
    let (k, m) = split_pow2(&q);
    if m.is_one() {
        return rat(0);
    }
    let two_k = BigInt::one() << k;
    let inv = mod_inverse(&two_k, &m).expect("2^k is invertible modulo an odd number");
    let mut num = (p * inv) % &m;
    if num.is_negative() {
        num += &m;
    }
    Rat::new(num, m)
}

/// The rule assigning one of two tags to every rational point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TagRule {
    /// Tag 0 at dyadic points, tag 1 elsewhere.
    DyadicSplit,
}

impl fmt::Display for TagRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TagRule::DyadicSplit => write!(f, "dyadic-split"),
        }
    }
}

/// Two disjoint dense sets plus a tag rule: the data for building least
/// hereditary families with prescribed shape.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DenseTagging {
    d0: DenseSet,
    d1: DenseSet,
    rule: TagRule,
}

impl DenseTagging {
    pub fn new(d0: DenseSet, d1: DenseSet, rule: TagRule) -> Result<Self> {
        if !d0.disjoint(&d1) {
            return Err(Error::InvalidTagging(format!(
                "sets must be disjoint, both equal {d0}"
            )));
        }
        Ok(DenseTagging { d0, d1, rule })
    }

    /// The default tagging: plain dyadics vs dyadics shifted by 1/3.
    pub fn default_pair() -> Self {
        DenseTagging {
            d0: DenseSet::dyadic(),
            d1: DenseSet::shifted(crate::rat::ratio(1, 3)),
            rule: TagRule::DyadicSplit,
        }
    }

    pub fn d0(&self) -> &DenseSet {
        &self.d0
    }

    pub fn d1(&self) -> &DenseSet {
        &self.d1
    }

    pub fn rule(&self) -> TagRule {
        self.rule
    }

    /// The tag of a point under the rule.
    pub fn tag(&self, x: &Rat) -> u8 {
        match self.rule {
            TagRule::DyadicSplit => {
                if is_dyadic(x) {
                    0
                } else {
                    1
                }
            }
        }
    }

    /// The dense set a function value must avoid at `x` for membership.
    pub fn forbidden_at(&self, x: &Rat) -> &DenseSet {
        if self.tag(x) == 0 {
            &self.d0
        } else {
            &self.d1
        }
    }

    /// Whether the value `v` is allowed at `x` (not in the forbidden set).
    pub fn allows(&self, x: &Rat, v: &Rat) -> bool {
        !self.forbidden_at(x).contains(v)
    }

    /// Deterministically picks a value near `target` lying in neither dense
    /// set, trying `target ± 1/q` for odd `q = 3, 5, 7, ...` until a
    /// candidate avoids both sets (at most three odd denominators can
    /// collide with the two shifts, so this terminates quickly).
    pub fn pick_free(&self, target: &Rat) -> Rat {
        let mut q: i64 = 3;
        loop {
            for cand in [
                target + crate::rat::ratio(1, q),
                target - crate::rat::ratio(1, q),
                crate::rat::ratio(1, q),
            ] {
                if !self.d0.contains(&cand) && !self.d1.contains(&cand) {
                    return cand;
                }
            }
            q += 2;
        }
    }

    pub fn describe(&self) -> String {
        format!("d0 = {}, d1 = {}, rule = {}", self.d0, self.d1, self.rule)
    }
}

/// Collects the distinct canonical shifts of a list of dense sets; useful
/// for validating that a batch of sets is pairwise disjoint.
pub fn all_disjoint(sets: &[DenseSet]) -> bool {
    let mut shifts: Vec<&Rat> = sets.iter().map(|d| d.shift()).collect();
    shifts.sort();
    shifts.windows(2).all(|w| w[0] != w[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};

    #[test]
    fn canonical_shifts_identify_equal_sets() {
        // 5/6 = 1/2 + 1/3, and 1/2 is dyadic, so shift 5/6 equals shift 1/3.
        let a = DenseSet::shifted(ratio(5, 6));
        let b = DenseSet::shifted(ratio(1, 3));
        assert_eq!(a, b);
        assert!(!a.disjoint(&b));
        let c = DenseSet::shifted(ratio(3, 4));
        assert_eq!(c, DenseSet::dyadic());
    }

    #[test]
    fn membership_respects_the_shift() {
        let d = DenseSet::shifted(ratio(1, 3));
        assert!(d.contains(&ratio(1, 3)));
        assert!(d.contains(&ratio(5, 6))); // 5/6 - 1/3 = 1/2
        assert!(!d.contains(&rat(0)));
        assert!(DenseSet::dyadic().contains(&ratio(-3, 8)));
    }

    #[test]
    fn pick_in_prefers_coarse_levels() {
        let d = DenseSet::dyadic();
        // (0, 2) at level 0 contains integer 1.
        assert_eq!(d.pick_in(&rat(0), &rat(2)).unwrap(), rat(1));
        // (0, 1) needs level 1: picks 1/2.
        assert_eq!(d.pick_in(&rat(0), &rat(1)).unwrap(), ratio(1, 2));
        // Narrow window far from zero.
        let x = d.pick_in(&ratio(33, 16), &ratio(35, 16)).unwrap();
        assert!(d.contains(&x));
        assert!(x > ratio(33, 16) && x < ratio(35, 16));
        // Shifted set returns members of itself.
        let s = DenseSet::shifted(ratio(1, 3));
        let y = s.pick_in(&rat(0), &ratio(1, 10)).unwrap();
        assert!(s.contains(&y));
        assert!(y > rat(0) && y < ratio(1, 10));
    }

    #[test]
    fn tagging_requires_disjoint_sets() {
        let t = DenseTagging::new(
            DenseSet::dyadic(),
            DenseSet::shifted(ratio(5, 6)),
            TagRule::DyadicSplit,
        )
        .unwrap();
        assert_eq!(t.tag(&rat(0)), 0);
        assert_eq!(t.tag(&ratio(1, 3)), 1);
        assert!(DenseTagging::new(
            DenseSet::shifted(ratio(1, 3)),
            DenseSet::shifted(ratio(5, 6)),
            TagRule::DyadicSplit
        )
        .is_err());
    }

    #[test]
    fn pick_free_avoids_both_sets() {
        let t = DenseTagging::default_pair();
        for target in [rat(0), rat(1), ratio(1, 3), ratio(-7, 2)] {
            let v = t.pick_free(&target);
            assert!(!t.d0().contains(&v));
            assert!(!t.d1().contains(&v));
        }
    }

    #[test]
    fn allows_checks_the_right_set() {
        let t = DenseTagging::default_pair();
        // At a dyadic point the forbidden set is the dyadics.
        assert!(!t.allows(&rat(0), &ratio(1, 2)));
        assert!(t.allows(&rat(0), &ratio(1, 3)));
        // At a non-dyadic point the forbidden set is dyadic+1/3.
        assert!(!t.allows(&ratio(1, 3), &ratio(1, 3)));
        assert!(t.allows(&ratio(1, 3), &ratio(1, 2)));
    }
}
