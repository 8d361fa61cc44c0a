//! Canonical subsets of the extended value line.
//!
//! A [`ValueSet`] describes, for a family of functions and a fixed abscissa
//! `x`, the set of values `{g(x)}` the family attains there. Components may
//! reach `-inf`/`+inf` (always with open ends), so the whole line and rays
//! are representable exactly.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};
use crate::rat::Rat;

/// An endpoint of a value-line component.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VEnd {
    NegInf,
    Fin(Rat),
    PosInf,
}

impl VEnd {
    fn cmp_ends(&self, other: &VEnd) -> Ordering {
        match (self, other) {
            (VEnd::NegInf, VEnd::NegInf) | (VEnd::PosInf, VEnd::PosInf) => Ordering::Equal,
            (VEnd::NegInf, _) | (_, VEnd::PosInf) => Ordering::Less,
            (_, VEnd::NegInf) | (VEnd::PosInf, _) => Ordering::Greater,
            (VEnd::Fin(a), VEnd::Fin(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for VEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VEnd::NegInf => write!(f, "-inf"),
            VEnd::PosInf => write!(f, "+inf"),
            VEnd::Fin(r) => write!(f, "{r}"),
        }
    }
}

/// One maximal interval of values; infinite ends are necessarily open.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VComp {
    lo: VEnd,
    hi: VEnd,
    lo_closed: bool,
    hi_closed: bool,
}

impl VComp {
    pub fn new(lo: VEnd, hi: VEnd, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        if matches!(lo, VEnd::NegInf | VEnd::PosInf) && lo_closed {
            return Err(Error::InvalidSet("infinite end cannot be closed".into()));
        }
        if matches!(hi, VEnd::NegInf | VEnd::PosInf) && hi_closed {
            return Err(Error::InvalidSet("infinite end cannot be closed".into()));
        }
        match lo.cmp_ends(&hi) {
            Ordering::Greater => Err(Error::InvalidSet(format!(
                "value interval out of order: {lo} > {hi}"
            ))),
            Ordering::Equal if !(lo_closed && hi_closed) => Err(Error::InvalidSet(format!(
                "degenerate value interval at {lo} must be a closed point"
            ))),
            _ => Ok(VComp {
                lo,
                hi,
                lo_closed,
                hi_closed,
            }),
        }
    }

    pub fn point(v: Rat) -> Self {
        VComp {
            lo: VEnd::Fin(v.clone()),
            hi: VEnd::Fin(v),
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn lo(&self) -> &VEnd {
        &self.lo
    }

    pub fn hi(&self) -> &VEnd {
        &self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn contains(&self, v: &Rat) -> bool {
        let above = match self.lo.cmp_ends(&VEnd::Fin(v.clone())) {
            Ordering::Less => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Greater => false,
        };
        let below = match VEnd::Fin(v.clone()).cmp_ends(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above && below
    }
}

impl fmt::Display for VComp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            if let VEnd::Fin(v) = &self.lo {
                return write!(f, "{{{v}}}");
            }
        }
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { "[" } else { "(" },
            self.lo,
            self.hi,
            if self.hi_closed { "]" } else { ")" },
        )
    }
}

/// Canonical finite union of value intervals and points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ValueSet {
    comps: Vec<VComp>,
}

impl ValueSet {
    pub fn empty() -> Self {
        ValueSet { comps: Vec::new() }
    }

    pub fn full_line() -> Self {
        ValueSet {
            comps: vec![VComp {
                lo: VEnd::NegInf,
                hi: VEnd::PosInf,
                lo_closed: false,
                hi_closed: false,
            }],
        }
    }

    pub fn point(v: Rat) -> Self {
        ValueSet {
            comps: vec![VComp::point(v)],
        }
    }

    pub fn from_components(comps: Vec<VComp>) -> Self {
        ValueSet {
            comps: merge(comps),
        }
    }

    pub fn components(&self) -> &[VComp] {
        &self.comps
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn is_full_line(&self) -> bool {
        self.comps.len() == 1
            && self.comps[0].lo == VEnd::NegInf
            && self.comps[0].hi == VEnd::PosInf
    }

    pub fn contains(&self, v: &Rat) -> bool {
        self.comps.iter().any(|c| c.contains(v))
    }

    pub fn union(&self, other: &ValueSet) -> ValueSet {
        let mut comps = self.comps.clone();
        comps.extend(other.comps.iter().cloned());
        ValueSet::from_components(comps)
    }
}

impl fmt::Display for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "empty");
        }
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn merge(mut comps: Vec<VComp>) -> Vec<VComp> {
    comps.sort_by(|a, b| {
        a.lo
            .cmp_ends(&b.lo)
            .then_with(|| b.lo_closed.cmp(&a.lo_closed))
            .then_with(|| a.hi.cmp_ends(&b.hi))
    });
    let mut out: Vec<VComp> = Vec::with_capacity(comps.len());
    for c in comps {
        if let Some(last) = out.last_mut() {
            let overlaps = match last.hi.cmp_ends(&c.lo) {
                Ordering::Greater => true,
                Ordering::Equal => last.hi_closed || c.lo_closed,
                Ordering::Less => false,
            };
            if overlaps {
                match last.hi.cmp_ends(&c.hi) {
                    Ordering::Less => {
                        last.hi = c.hi;
                        last.hi_closed = c.hi_closed;
                    }
                    Ordering::Equal => last.hi_closed |= c.hi_closed,
                    Ordering::Greater => {}
                }
                continue;
            }
        }
        out.push(c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};

    #[test]
    fn rays_and_full_line() {
        let below = ValueSet::from_components(vec![VComp::new(
            VEnd::NegInf,
            VEnd::Fin(rat(3)),
            false,
            false,
        )
        .unwrap()]);
        let above = ValueSet::from_components(vec![VComp::new(
            VEnd::Fin(rat(3)),
            VEnd::PosInf,
            true,
            false,
        )
        .unwrap()]);
        assert!(below.contains(&rat(2)));
        assert!(!below.contains(&rat(3)));
        assert!(above.contains(&rat(3)));
        let u = below.union(&above);
        assert!(u.is_full_line());
    }

    #[test]
    fn points_merge_into_touching_intervals() {
        let open = ValueSet::from_components(vec![VComp::new(
            VEnd::Fin(rat(0)),
            VEnd::Fin(rat(1)),
            false,
            false,
        )
        .unwrap()]);
        let p = ValueSet::point(rat(1));
        let u = open.union(&p);
        assert_eq!(u.components().len(), 1);
        assert!(u.contains(&rat(1)));
        assert!(u.contains(&ratio(1, 2)));
        assert!(!u.contains(&rat(0)));
    }

    #[test]
    fn closed_infinite_ends_are_rejected() {
        assert!(VComp::new(VEnd::NegInf, VEnd::Fin(rat(0)), true, true).is_err());
        assert!(VComp::new(VEnd::Fin(rat(0)), VEnd::PosInf, true, true).is_err());
    }

    #[test]
    fn display_formats() {
        let s = ValueSet::from_components(vec![
            VComp::new(VEnd::NegInf, VEnd::Fin(rat(3)), false, true).unwrap(),
            VComp::point(rat(5)),
        ]);
        assert_eq!(alloc::format!("{s}"), "(-inf, 3] | {5}");
    }
}
