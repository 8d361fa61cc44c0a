//! Finite unions of rational intervals and points inside a bounded domain.
//!
//! A [`RealSet`] is kept in canonical form: components sorted by left
//! endpoint, pairwise disjoint, and never touching in a way that could be
//! merged (so equality of values is equality of sets). All topology is
//! relative to the ambient domain `[lo, hi]`: the domain itself is clopen,
//! and a component like `[lo, c)` counts as open in the domain.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};
use crate::pl::{Domain, PLFunc};
use crate::rat::{midpoint, rat, Rat};

/// One maximal interval of a [`RealSet`]: `lo < hi` with any endpoint
/// closedness, or a single point (`lo == hi`, both ends closed).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Component {
    lo: Rat,
    hi: Rat,
    lo_closed: bool,
    hi_closed: bool,
}

impl Component {
    pub fn new(lo: Rat, hi: Rat, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        match lo.cmp(&hi) {
            Ordering::Greater => Err(Error::InvalidSet(format!(
                "component endpoints out of order: {lo} > {hi}"
            ))),
            Ordering::Equal if !(lo_closed && hi_closed) => Err(Error::InvalidSet(format!(
                "degenerate component at {lo} must be a closed point"
            ))),
            _ => Ok(Component {
                lo,
                hi,
                lo_closed,
                hi_closed,
            }),
        }
    }

    pub fn point(p: Rat) -> Self {
        Component {
            lo: p.clone(),
            hi: p,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rat) -> bool {
        let above_lo = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let below_hi = match x.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above_lo && below_hi
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "{{{}}}", self.lo)
        } else {
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
}

/// Topological classification of a [`RealSet`] inside its domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SetClass {
    pub closed: bool,
    pub open: bool,
    pub regular_open: bool,
}

/// A canonical finite union of intervals and points in a bounded domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RealSet {
    domain: Domain,
    comps: Vec<Component>,
}

impl RealSet {
    pub fn empty(domain: &Domain) -> Self {
        RealSet {
            domain: domain.clone(),
            comps: Vec::new(),
        }
    }

    /// The whole domain as a set.
    pub fn full(domain: &Domain) -> Self {
        RealSet {
            domain: domain.clone(),
            comps: vec![Component {
                lo: domain.lo().clone(),
                hi: domain.hi().clone(),
                lo_closed: true,
                hi_closed: true,
            }],
        }
    }

    pub fn point(domain: &Domain, p: Rat) -> Result<Self> {
        domain.check_contains(&p, "point")?;
        Ok(RealSet {
            domain: domain.clone(),
            comps: vec![Component::point(p)],
        })
    }

    pub fn interval(
        domain: &Domain,
        lo: Rat,
        hi: Rat,
        lo_closed: bool,
        hi_closed: bool,
    ) -> Result<Self> {
        let c = Component::new(lo, hi, lo_closed, hi_closed)?;
        RealSet::from_components(domain, vec![c])
    }

    /// Builds a set from arbitrary components, validating containment in the
    /// domain and merging overlapping or touching pieces.
    pub fn from_components(domain: &Domain, comps: Vec<Component>) -> Result<Self> {
        for c in &comps {
            if *c.lo() < *domain.lo() || *c.hi() > *domain.hi() {
                return Err(Error::OutsideDomain(format!(
                    "component {c} not inside domain {domain}"
                )));
            }
        }
        Ok(RealSet {
            domain: domain.clone(),
            comps: merge(comps),
        })
    }

    /// Builds from raw `(lo, hi, lo_closed, hi_closed)` tuples.
    pub fn from_raw_parts(domain: Domain, parts: Vec<(Rat, Rat, bool, bool)>) -> Result<Self> {
        let comps = parts
            .into_iter()
            .map(|(lo, hi, lc, hc)| Component::new(lo, hi, lc, hc))
            .collect::<Result<Vec<_>>>()?;
        RealSet::from_components(&domain, comps)
    }

    /// The set containing exactly the given points.
    pub fn from_points(domain: &Domain, pts: &[Rat]) -> Result<Self> {
        for p in pts {
            domain.check_contains(p, "point")?;
        }
        RealSet::from_components(domain, pts.iter().cloned().map(Component::point).collect())
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn components(&self) -> &[Component] {
        &self.comps
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.comps.len() == 1
            && self.comps[0].lo == *self.domain.lo()
            && self.comps[0].hi == *self.domain.hi()
            && self.comps[0].lo_closed
            && self.comps[0].hi_closed
    }

    pub fn contains_point(&self, x: &Rat) -> bool {
        self.comps.iter().any(|c| c.contains(x))
    }

    /// If every component is a single point, returns the points in order.
    pub fn as_points(&self) -> Option<Vec<Rat>> {
        if self.comps.iter().all(Component::is_point) {
            Some(self.comps.iter().map(|c| c.lo.clone()).collect())
        } else {
            None
        }
    }

    pub fn union(&self, other: &RealSet) -> Result<RealSet> {
        self.domain.check_same(&other.domain)?;
        let mut comps = self.comps.clone();
        comps.extend(other.comps.iter().cloned());
        Ok(RealSet {
            domain: self.domain.clone(),
            comps: merge(comps),
        })
    }

    pub fn intersect(&self, other: &RealSet) -> Result<RealSet> {
        self.domain.check_same(&other.domain)?;
        let mut out: Vec<Component> = Vec::new();
        for a in &self.comps {
            for b in &other.comps {
                if let Some(c) = intersect_components(a, b) {
                    out.push(c);
                }
            }
        }
        Ok(RealSet {
            domain: self.domain.clone(),
            comps: merge(out),
        })
    }

    pub fn difference(&self, other: &RealSet) -> Result<RealSet> {
        self.intersect(&other.complement())
    }

    /// Complement inside the domain.
    pub fn complement(&self) -> RealSet {
        let mut out: Vec<Component> = Vec::new();
        // Cursor walks left to right; `included` says whether the cursor
        // position itself is still outside the set.
        let mut cursor = self.domain.lo().clone();
        let mut included = true;
        for c in &self.comps {
            match cursor.cmp(&c.lo) {
                Ordering::Less => {
                    let gap = Component {
                        lo: cursor.clone(),
                        hi: c.lo.clone(),
                        lo_closed: included,
                        hi_closed: !c.lo_closed,
                    };
                    if !gap.is_point() || (gap.lo_closed && gap.hi_closed) {
                        out.push(gap);
                    }
                }
                Ordering::Equal => {
                    if included && !c.lo_closed {
                        out.push(Component::point(cursor.clone()));
                    }
                }
                Ordering::Greater => {}
            }
            cursor = c.hi.clone();
            included = !c.hi_closed;
        }
        match cursor.cmp(self.domain.hi()) {
            Ordering::Less => {
                out.push(Component {
                    lo: cursor,
                    hi: self.domain.hi().clone(),
                    lo_closed: included,
                    hi_closed: true,
                });
            }
            Ordering::Equal => {
                if included {
                    out.push(Component::point(cursor));
                }
            }
            Ordering::Greater => {}
        }
        RealSet {
            domain: self.domain.clone(),
            comps: merge(out),
        }
    }

    /// Topological closure in the domain.
    pub fn closure(&self) -> RealSet {
        let comps = self
            .comps
            .iter()
            .map(|c| Component {
                lo: c.lo.clone(),
                hi: c.hi.clone(),
                lo_closed: true,
                hi_closed: true,
            })
            .collect();
        RealSet {
            domain: self.domain.clone(),
            comps: merge(comps),
        }
    }

    /// Topological interior in the domain (domain endpoints included when the
    /// set covers a neighbourhood of them in the domain).
    pub fn interior(&self) -> RealSet {
        self.complement().closure().complement()
    }

    pub fn classify(&self) -> SetClass {
        let closed = *self == self.closure();
        let open = *self == self.interior();
        let regular_open = *self == self.closure().interior();
        SetClass {
            closed,
            open,
            regular_open,
        }
    }

    pub fn is_closed(&self) -> bool {
        *self == self.closure()
    }

    pub fn is_open(&self) -> bool {
        *self == self.interior()
    }

    pub fn is_regular_open(&self) -> bool {
        *self == self.closure().interior()
    }

    pub fn is_subset(&self, other: &RealSet) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    /// Two sets are separated when neither meets the closure of the other.
    pub fn separated(&self, other: &RealSet) -> Result<bool> {
        Ok(self.closure().intersect(other)?.is_empty()
            && self.intersect(&other.closure())?.is_empty())
    }

    /// Exact distance function `x -> dist(x, closure(self))` as a
    /// piecewise-linear function; errors on the empty set.
    pub fn distance_function(&self) -> Result<PLFunc> {
        if self.is_empty() {
            return Err(Error::InvalidSet(
                "distance function of the empty set".into(),
            ));
        }
        let cl = self.closure();
        let mut pts: Vec<(Rat, Rat)> = Vec::new();
        let dom = &self.domain;
        let first = &cl.comps[0];
        if *dom.lo() < first.lo {
            pts.push((dom.lo().clone(), &first.lo - dom.lo()));
        }
        for (i, c) in cl.comps.iter().enumerate() {
            pts.push((c.lo.clone(), rat(0)));
            if !c.is_point() {
                pts.push((c.hi.clone(), rat(0)));
            }
            if let Some(next) = cl.comps.get(i + 1) {
                let m = midpoint(&c.hi, &next.lo);
                pts.push((m, (&next.lo - &c.hi) / rat(2)));
            }
        }
        let last = cl.comps.last().unwrap();
        if last.hi < *dom.hi() {
            pts.push((dom.hi().clone(), dom.hi() - &last.hi));
        }
        PLFunc::new(pts)
    }
}

impl fmt::Display for RealSet {
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

/// True when the sets are pairwise separated (and pairwise distinct).
pub fn family_separated(parts: &[RealSet]) -> Result<bool> {
    for i in 0..parts.len() {
        for j in (i + 1)..parts.len() {
            if parts[i] == parts[j] {
                return Err(Error::InvalidSet(format!(
                    "duplicate part: {}",
                    parts[i]
                )));
            }
            if !parts[i].separated(&parts[j])? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn intersect_components(a: &Component, b: &Component) -> Option<Component> {
    let (lo, lo_closed) = match a.lo.cmp(&b.lo) {
        Ordering::Greater => (a.lo.clone(), a.lo_closed),
        Ordering::Less => (b.lo.clone(), b.lo_closed),
        Ordering::Equal => (a.lo.clone(), a.lo_closed && b.lo_closed),
    };
    let (hi, hi_closed) = match a.hi.cmp(&b.hi) {
        Ordering::Less => (a.hi.clone(), a.hi_closed),
        Ordering::Greater => (b.hi.clone(), b.hi_closed),
        Ordering::Equal => (a.hi.clone(), a.hi_closed && b.hi_closed),
    };
    match lo.cmp(&hi) {
        Ordering::Less => Some(Component {
            lo,
            hi,
            lo_closed,
            hi_closed,
        }),
        Ordering::Equal if lo_closed && hi_closed => Some(Component::point(lo)),
        _ => None,
    }
}

/// Sorts components and merges every overlapping or touching pair, yielding
/// the canonical component list.
fn merge(mut comps: Vec<Component>) -> Vec<Component> {
    comps.sort_by(|a, b| {
        a.lo.cmp(&b.lo)
            .then_with(|| b.lo_closed.cmp(&a.lo_closed))
            .then_with(|| a.hi.cmp(&b.hi))
    });
    let mut out: Vec<Component> = Vec::with_capacity(comps.len());
    for c in comps {
        if let Some(last) = out.last_mut() {
            let overlaps = match last.hi.cmp(&c.lo) {
                Ordering::Greater => true,
                Ordering::Equal => last.hi_closed || c.lo_closed,
                Ordering::Less => false,
            };
            if overlaps {
                match last.hi.cmp(&c.hi) {
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

    fn dom() -> Domain {
        Domain::new(rat(0), rat(4)).unwrap()
    }

    fn iv(lo: i64, hi: i64, lc: bool, hc: bool) -> RealSet {
        RealSet::interval(&dom(), rat(lo), rat(hi), lc, hc).unwrap()
    }

    #[test]
    fn canonical_merge_of_touching_components() {
        let a = iv(0, 1, true, false);
        let b = iv(1, 2, true, true);
        let u = a.union(&b).unwrap();
        assert_eq!(u, iv(0, 2, true, true));
        // Touching open ends do not merge.
        let c = iv(0, 1, true, false);
        let d = iv(1, 2, false, true);
        let v = c.union(&d).unwrap();
        assert_eq!(v.components().len(), 2);
        // ... but adding the point in between merges everything.
        let w = v.union(&RealSet::point(&dom(), rat(1)).unwrap()).unwrap();
        assert_eq!(w, iv(0, 2, true, true));
    }

    #[test]
    fn complement_walks_gaps_and_endpoints() {
        let s = iv(1, 2, false, true);
        let c = s.complement();
        assert_eq!(c.components().len(), 2);
        assert!(c.contains_point(&rat(0)));
        assert!(c.contains_point(&rat(1)));
        assert!(!c.contains_point(&ratio(3, 2)));
        assert!(!c.contains_point(&rat(2)));
        assert!(c.contains_point(&rat(4)));
        assert_eq!(c.complement(), s);
    }

    #[test]
    fn complement_of_point_and_of_full() {
        let p = RealSet::point(&dom(), rat(2)).unwrap();
        let c = p.complement();
        assert_eq!(c.components().len(), 2);
        assert_eq!(RealSet::full(&dom()).complement(), RealSet::empty(&dom()));
        assert_eq!(RealSet::empty(&dom()).complement(), RealSet::full(&dom()));
    }

    #[test]
    fn closure_and_interior_in_subspace_topology() {
        let s = iv(1, 2, false, false);
        assert_eq!(s.closure(), iv(1, 2, true, true));
        assert_eq!(s.interior(), s);
        // [0, 1) is open in the domain [0, 4]: 0 is a domain endpoint.
        let half = iv(0, 1, true, false);
        assert!(half.is_open());
        assert!(!half.is_closed());
        // Interior of [1, 2] is (1, 2).
        assert_eq!(iv(1, 2, true, true).interior(), iv(1, 2, false, false));
        // The full domain is clopen.
        let f = RealSet::full(&dom());
        assert!(f.is_open() && f.is_closed());
    }

    #[test]
    fn regular_open_detection() {
        assert!(iv(1, 2, false, false).is_regular_open());
        assert!(iv(0, 1, true, false).is_regular_open());
        // (1,2) union (2,3) is open but not regular open.
        let s = iv(1, 2, false, false).union(&iv(2, 3, false, false)).unwrap();
        assert!(s.is_open());
        assert!(!s.is_regular_open());
        assert!(RealSet::empty(&dom()).is_regular_open());
    }

    #[test]
    fn set_algebra_round_trips() {
        let a = iv(0, 2, true, true);
        let b = iv(1, 3, true, true);
        let i = a.intersect(&b).unwrap();
        assert_eq!(i, iv(1, 2, true, true));
        let d = a.difference(&b).unwrap();
        assert_eq!(d, iv(0, 1, true, false));
        let u = a.union(&b).unwrap();
        assert_eq!(u, iv(0, 3, true, true));
    }

    #[test]
    fn separation_is_about_closures() {
        // [0,1) and [1,2]: disjoint but NOT separated (closures meet).
        let a = iv(0, 1, true, false);
        let b = iv(1, 2, true, true);
        assert!(a.intersect(&b).unwrap().is_empty());
        assert!(!a.separated(&b).unwrap());
        // [0,1] and [2,3] are separated.
        let c = iv(0, 1, true, true);
        let d = iv(2, 3, true, true);
        assert!(c.separated(&d).unwrap());
        assert!(family_separated(&[c, d]).unwrap());
    }

    #[test]
    fn family_separated_rejects_duplicates() {
        let c = iv(0, 1, true, true);
        assert!(family_separated(&[c.clone(), c]).is_err());
    }

    #[test]
    fn distance_function_is_exact() {
        let s = RealSet::from_points(&dom(), &[rat(1), rat(3)]).unwrap();
        let d = s.distance_function().unwrap();
        assert_eq!(d.eval(&rat(0)).unwrap(), rat(1));
        assert_eq!(d.eval(&rat(1)).unwrap(), rat(0));
        assert_eq!(d.eval(&rat(2)).unwrap(), rat(1));
        assert_eq!(d.eval(&rat(3)).unwrap(), rat(0));
        assert_eq!(d.eval(&rat(4)).unwrap(), rat(1));
        assert_eq!(d.eval(&ratio(5, 2)).unwrap(), ratio(1, 2));
    }

    #[test]
    fn points_view() {
        let s = RealSet::from_points(&dom(), &[rat(3), rat(1)]).unwrap();
        assert_eq!(s.as_points().unwrap(), vec![rat(1), rat(3)]);
        assert!(iv(0, 1, true, true).as_points().is_none());
        assert_eq!(RealSet::empty(&dom()).as_points().unwrap(), Vec::<Rat>::new());
    }
}
