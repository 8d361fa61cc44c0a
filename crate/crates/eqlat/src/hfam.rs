//! Hereditary families of closed sets over a finite grid or the full
//! piecewise-linear universe.
//!
//! A hereditary family is a downward-closed collection of closed subsets of
//! the domain. On a [`Grid`] every subset is a bitmask and a family is an
//! explicit downset given by its maximal elements; on the full universe the
//! families that arise are described symbolically ([`HFam`]).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use core::fmt;

use crate::error::{Error, Result};
use crate::pl::Domain;
use crate::rat::Rat;
use crate::realset::RealSet;

/// Hard cap on grid size so subsets fit comfortably in a `u32` mask.
pub const MAX_GRID: usize = 20;

/// A finite set of sample points in a domain, the universe for exhaustive
/// computations. Subsets are encoded as bitmasks: bit `i` is `points[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grid {
    domain: Domain,
    points: Vec<Rat>,
}

impl Grid {
    pub fn new(domain: Domain, mut points: Vec<Rat>) -> Result<Self> {
        points.sort();
        points.dedup();
        if points.is_empty() {
            return Err(Error::InvalidGrid("grid needs at least one point".into()));
        }
        if points.len() > MAX_GRID {
            return Err(Error::InvalidGrid(format!(
                "grid of {} points exceeds the maximum of {MAX_GRID}",
                points.len()
            )));
        }
        for p in &points {
            domain.check_contains(p, "grid point")?;
        }
        Ok(Grid { domain, points })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> &[Rat] {
        &self.points
    }

    /// The mask with every grid point set.
    pub fn full_mask(&self) -> u32 {
        if self.points.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.points.len()) - 1
        }
    }

    /// The grid points selected by `mask`, as a set of points.
    pub fn mask_to_set(&self, mask: u32) -> Result<RealSet> {
        self.check_mask(mask)?;
        let pts: Vec<Rat> = self
            .points
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, p)| p.clone())
            .collect();
        RealSet::from_points(&self.domain, &pts)
    }

    /// The mask of a set of grid points; errors when the set contains
    /// anything that is not a grid point.
    pub fn set_to_mask(&self, set: &RealSet) -> Result<u32> {
        let pts = set.as_points().ok_or_else(|| {
            Error::InvalidGrid(format!("{set} is not a finite set of points"))
        })?;
        let mut mask = 0u32;
        for p in &pts {
            match self.points.iter().position(|q| q == p) {
                Some(i) => mask |= 1 << i,
                None => {
                    return Err(Error::InvalidGrid(format!("{p} is not a grid point")))
                }
            }
        }
        Ok(mask)
    }

    pub fn check_mask(&self, mask: u32) -> Result<()> {
        if mask & !self.full_mask() != 0 {
            return Err(Error::InvalidGrid(format!(
                "mask {mask:#x} has bits beyond the {} grid points",
                self.points.len()
            )));
        }
        Ok(())
    }

    /// Number of subsets (`2^len`).
    pub fn subset_count(&self) -> u64 {
        1u64 << self.points.len()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "grid{{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}} in {}", self.domain)
    }
}

/// The universe a computation ranges over: all subsets of a finite grid, or
/// all closed sets of the piecewise-linear line fragment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Universe {
    FiniteGrid(Grid),
    PlClosed(Domain),
}

impl Universe {
    pub fn domain(&self) -> &Domain {
        match self {
            Universe::FiniteGrid(g) => g.domain(),
            Universe::PlClosed(d) => d,
        }
    }

    pub fn as_grid(&self) -> Option<&Grid> {
        match self {
            Universe::FiniteGrid(g) => Some(g),
            Universe::PlClosed(_) => None,
        }
    }

    /// Errors unless this universe is a finite grid.
    pub fn require_grid(&self, op: &'static str) -> Result<&Grid> {
        self.as_grid().ok_or_else(|| Error::Unsupported {
            op,
            detail: "requires a finite-grid universe".into(),
        })
    }
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Universe::FiniteGrid(g) => write!(f, "{g}"),
            Universe::PlClosed(d) => write!(f, "pl-closed{d}"),
        }
    }
}

/// An explicit downward-closed family of grid subsets, stored by its
/// maximal elements (a canonical antichain, sorted ascending as masks).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Downset {
    grid: Grid,
    maximal: Vec<u32>,
}

impl Downset {
    /// The empty family (no sets at all, not even the empty set).
    pub fn empty_family(grid: Grid) -> Self {
        Downset {
            grid,
            maximal: Vec::new(),
        }
    }

    /// The family `{∅}`.
    pub fn only_empty_set(grid: Grid) -> Self {
        Downset {
            grid,
            maximal: vec![0],
        }
    }

    /// The family of all subsets.
    pub fn all_subsets(grid: Grid) -> Self {
        let m = grid.full_mask();
        Downset {
            grid,
            maximal: vec![m],
        }
    }

    /// Downward closure of the given generator sets.
    pub fn from_generators(grid: Grid, gens: &[u32]) -> Result<Self> {
        for &g in gens {
            grid.check_mask(g)?;
        }
        let mut maximal: Vec<u32> = Vec::new();
        for &g in gens {
            if maximal.iter().any(|&m| g & !m == 0) {
                continue; // g is contained in an existing maximal set
            }
            maximal.retain(|&m| m | g != g || m == g);
            maximal.push(g);
        }
        maximal.sort_unstable();
        maximal.dedup();
        Ok(Downset { grid, maximal })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// The canonical antichain of maximal sets.
    pub fn maximal(&self) -> &[u32] {
        &self.maximal
    }

    /// True when the family has no members at all.
    pub fn is_empty_family(&self) -> bool {
        self.maximal.is_empty()
    }

    pub fn contains(&self, mask: u32) -> bool {
        self.maximal.iter().any(|&m| mask & !m == 0)
    }

    /// Every member set, ascending as masks.
    pub fn members(&self) -> Vec<u32> {
        let mut out: Vec<u32> = Vec::new();
        for mask in 0..self.grid.subset_count() as u32 {
            if self.contains(mask) {
                out.push(mask);
            }
        }
        out
    }

    pub fn member_count(&self) -> u64 {
        self.members().len() as u64
    }

    /// Set-inclusion of families over the same grid.
    pub fn subset_of(&self, other: &Downset) -> Result<bool> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid(
                "comparing downsets over different grids".into(),
            ));
        }
        Ok(self.maximal.iter().all(|&m| other.contains(m)))
    }

    /// Intersection of two families over the same grid.
    pub fn intersect(&self, other: &Downset) -> Result<Downset> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid(
                "intersecting downsets over different grids".into(),
            ));
        }
        let mut gens: Vec<u32> = Vec::new();
        for &a in &self.maximal {
            for &b in &other.maximal {
                gens.push(a & b);
            }
        }
        Downset::from_generators(self.grid.clone(), &gens)
    }
}

impl fmt::Display for Downset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "downset[")?;
        for (i, &m) in self.maximal.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let set = self
                .grid
                .mask_to_set(m)
                .expect("maximal masks are validated");
            write!(f, "{set}")?;
        }
        write!(f, "]")
    }
}

/// A hereditary family of closed sets, in one of the closed forms the
/// engine produces and consumes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HFam {
    /// No sets at all.
    Empty,
    /// Every closed subset of the domain.
    Full,
    /// An explicit downset of grid subsets.
    Downset(Downset),
    /// Every closed subset of a fixed set `X`.
    ClosedSubsets(RealSet),
    /// Closed sets that fit inside one of finitely many pairwise separated
    /// parts: the union of `ClosedSubsets(part)` over the parts.
    SeparatedUnion(Vec<RealSet>),
}

impl HFam {
    /// Builds a separated union, validating pairwise separation, and
    /// canonicalizing the trivial cases.
    pub fn separated_union(parts: Vec<RealSet>) -> Result<HFam> {
        if parts.is_empty() {
            return Err(Error::NotSeparated(
                "a separated union needs at least one part (use ClosedSubsets(∅) for {∅})"
                    .into(),
            ));
        }
        if parts.len() == 1 {
            return Ok(HFam::ClosedSubsets(parts.into_iter().next().unwrap()));
        }
        if !crate::realset::family_separated(&parts)? {
            return Err(Error::NotSeparated(format!(
                "parts are not pairwise separated: {}",
                parts
                    .iter()
                    .map(|p| format!("{p}"))
                    .collect::<Vec<_>>()
                    .join(" ; ")
            )));
        }
        let mut sorted = parts;
        sorted.sort();
        Ok(HFam::SeparatedUnion(sorted))
    }

    /// Membership of a single set (non-closed sets are simply not members).
    pub fn contains_set(&self, e: &RealSet) -> Result<bool> {
        if !e.is_closed() {
            return Ok(false);
        }
        Ok(match self {
            HFam::Empty => false,
            HFam::Full => true,
            HFam::Downset(d) => match d.grid().set_to_mask(e) {
                Ok(mask) => d.contains(mask),
                Err(_) => false,
            },
            HFam::ClosedSubsets(x) => e.is_subset(x)?,
            HFam::SeparatedUnion(parts) => {
                let mut found = false;
                for p in parts {
                    if e.is_subset(p)? {
                        found = true;
                        break;
                    }
                }
                found
            }
        })
    }

    /// Converts to an explicit downset over `grid` (the grid's subsets that
    /// belong to the family). Errors when the family is an explicit downset
    /// over a different grid.
    pub fn to_downset(&self, grid: &Grid) -> Result<Downset> {
        Ok(match self {
            HFam::Empty => Downset::empty_family(grid.clone()),
            HFam::Full => Downset::all_subsets(grid.clone()),
            HFam::Downset(d) => {
                if d.grid() != grid {
                    return Err(Error::InvalidGrid(
                        "downset is over a different grid".into(),
                    ));
                }
                d.clone()
            }
            HFam::ClosedSubsets(x) => {
                let mut mask = 0u32;
                for (i, p) in grid.points().iter().enumerate() {
                    if x.contains_point(p) {
                        mask |= 1 << i;
                    }
                }
                Downset::from_generators(grid.clone(), &[mask])?
            }
            HFam::SeparatedUnion(parts) => {
                let mut gens: Vec<u32> = Vec::new();
                for part in parts {
                    let mut mask = 0u32;
                    for (i, p) in grid.points().iter().enumerate() {
                        if part.contains_point(p) {
                            mask |= 1 << i;
                        }
                    }
                    gens.push(mask);
                }
                Downset::from_generators(grid.clone(), &gens)?
            }
        })
    }

    /// The union of all member sets, as a subset of the domain.
    pub fn union_support(&self, domain: &Domain) -> Result<RealSet> {
        Ok(match self {
            HFam::Empty => RealSet::empty(domain),
            HFam::Full => RealSet::full(domain),
            HFam::Downset(d) => {
                let mut acc = RealSet::empty(d.grid().domain());
                for &m in d.maximal() {
                    acc = acc.union(&d.grid().mask_to_set(m)?)?;
                }
                acc
            }
            HFam::ClosedSubsets(x) => x.clone(),
            HFam::SeparatedUnion(parts) => {
                let mut acc = RealSet::empty(domain);
                for p in parts {
                    acc = acc.union(p)?;
                }
                acc
            }
        })
    }

    /// True when the family has no members at all.
    pub fn is_empty_family(&self) -> bool {
        match self {
            HFam::Empty => true,
            HFam::Downset(d) => d.is_empty_family(),
            _ => false,
        }
    }

    /// Semantic inclusion of families over the given universe.
    pub fn subset_of(&self, other: &HFam, universe: &Universe) -> Result<bool> {
        if let Universe::FiniteGrid(grid) = universe {
            let a = self.to_downset(grid)?;
            let b = other.to_downset(grid)?;
            return a.subset_of(&b);
        }
        // Full piecewise-linear universe: structural case analysis.
        if self.is_empty_family() {
            return Ok(true);
        }
        Ok(match (self, other) {
            (_, HFam::Full) => true,
            (_, HFam::Empty) => false, // self is nonempty here
            (HFam::Empty, _) => true,
            (HFam::Full, o) => {
                // Full ⊆ o only if o also contains the whole domain (and
                // then, being a downset, everything).
                o.contains_set(&RealSet::full(universe.domain()))?
            }
            (HFam::Downset(d), o) => {
                let mut ok = true;
                for &m in d.maximal() {
                    let set = d.grid().mask_to_set(m)?;
                    if !o.contains_set(&set)? {
                        ok = false;
                        break;
                    }
                }
                ok
            }
            (HFam::ClosedSubsets(x), o) => {
                if x.is_empty() {
                    o.contains_set(x)?
                } else {
                    match o {
                        HFam::ClosedSubsets(y) => x.is_subset(y)?,
                        HFam::SeparatedUnion(parts) => {
                            // Every closed subset of x must fit in a single
                            // part, which forces x itself into one part.
                            let mut ok = false;
                            for p in parts {
                                if x.is_subset(p)? {
                                    ok = true;
                                    break;
                                }
                            }
                            ok
                        }
                        HFam::Downset(d) => match d.grid().set_to_mask(x) {
                            Ok(mask) => d.contains(mask),
                            Err(_) => false,
                        },
                        _ => unreachable!("Empty/Full handled above"),
                    }
                }
            }
            (HFam::SeparatedUnion(parts), o) => {
                let mut ok = true;
                for p in parts {
                    if !HFam::ClosedSubsets(p.clone()).subset_of(o, universe)? {
                        ok = false;
                        break;
                    }
                }
                ok
            }
        })
    }

    /// Semantic equality over the given universe.
    pub fn same_family(&self, other: &HFam, universe: &Universe) -> Result<bool> {
        Ok(self.subset_of(other, universe)? && other.subset_of(self, universe)?)
    }
}

impl fmt::Display for HFam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HFam::Empty => write!(f, "empty-family"),
            HFam::Full => write!(f, "all-closed-sets"),
            HFam::Downset(d) => write!(f, "{d}"),
            HFam::ClosedSubsets(x) => write!(f, "closed-subsets-of({x})"),
            HFam::SeparatedUnion(parts) => {
                write!(f, "separated-union[")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "]")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pl::Domain;
    use crate::rat::rat;

    fn dom() -> Domain {
        Domain::new(rat(0), rat(4)).unwrap()
    }

    fn grid3() -> Grid {
        Grid::new(dom(), vec![rat(1), rat(2), rat(3)]).unwrap()
    }

    #[test]
    fn masks_round_trip() {
        let g = grid3();
        let s = g.mask_to_set(0b101).unwrap();
        assert_eq!(s.as_points().unwrap(), vec![rat(1), rat(3)]);
        assert_eq!(g.set_to_mask(&s).unwrap(), 0b101);
        assert!(g.set_to_mask(&RealSet::point(&dom(), rat(0)).unwrap()).is_err());
        assert!(g.check_mask(0b1000).is_err());
    }

    #[test]
    fn downsets_store_maximal_antichains() {
        let g = grid3();
        let d = Downset::from_generators(g.clone(), &[0b011, 0b001, 0b100]).unwrap();
        assert_eq!(d.maximal(), &[0b011, 0b100]);
        assert!(d.contains(0b010));
        assert!(d.contains(0));
        assert!(!d.contains(0b101));
        assert_eq!(d.members().len(), 5); // {}, {1}, {2}, {1,2}, {3}
        assert!(!d.is_empty_family());
        assert!(Downset::empty_family(g.clone()).is_empty_family());
        assert_eq!(Downset::only_empty_set(g).members(), vec![0]);
    }

    #[test]
    fn downset_intersection_is_memberwise() {
        let g = grid3();
        let a = Downset::from_generators(g.clone(), &[0b011]).unwrap();
        let b = Downset::from_generators(g.clone(), &[0b110]).unwrap();
        let i = a.intersect(&b).unwrap();
        assert_eq!(i.maximal(), &[0b010]);
        assert!(a.subset_of(&Downset::all_subsets(g)).unwrap());
    }

    #[test]
    fn hfam_membership_and_downset_views() {
        let g = grid3();
        let u = Universe::FiniteGrid(g.clone());
        let x = RealSet::interval(&dom(), rat(0), rat(2), true, true).unwrap();
        let fam = HFam::ClosedSubsets(x);
        // Grid points 1 and 2 lie in [0,2]; 3 does not.
        let d = fam.to_downset(&g).unwrap();
        assert_eq!(d.maximal(), &[0b011]);
        assert!(fam
            .contains_set(&RealSet::point(&dom(), rat(1)).unwrap())
            .unwrap());
        assert!(!fam
            .contains_set(&RealSet::point(&dom(), rat(3)).unwrap())
            .unwrap());
        // Non-closed sets are never members.
        let half_open = RealSet::interval(&dom(), rat(1), rat(2), true, false).unwrap();
        assert!(!fam.contains_set(&half_open).unwrap());
        assert!(fam.subset_of(&HFam::Full, &u).unwrap());
        assert!(!HFam::Full.subset_of(&fam, &u).unwrap());
    }

    #[test]
    fn separated_union_validates_and_canonicalizes() {
        let a = RealSet::interval(&dom(), rat(0), rat(1), true, true).unwrap();
        let b = RealSet::interval(&dom(), rat(2), rat(3), true, true).unwrap();
        let fam = HFam::separated_union(vec![b.clone(), a.clone()]).unwrap();
        match &fam {
            HFam::SeparatedUnion(parts) => assert_eq!(parts, &vec![a.clone(), b.clone()]),
            _ => panic!("expected separated union"),
        }
        // Touching parts are rejected.
        let c = RealSet::interval(&dom(), rat(1), rat(2), true, true).unwrap();
        assert!(HFam::separated_union(vec![a.clone(), c]).is_err());
        // A single part collapses to ClosedSubsets.
        assert!(matches!(
            HFam::separated_union(vec![a.clone()]).unwrap(),
            HFam::ClosedSubsets(_)
        ));
        // Membership: a two-point set across parts is not a member.
        let across = RealSet::from_points(&dom(), &[rat(1), rat(2)]).unwrap();
        assert!(!fam.contains_set(&across).unwrap());
        let inside = RealSet::from_points(&dom(), &[rat(2), rat(3)]).unwrap();
        assert!(fam.contains_set(&inside).unwrap());
    }

    #[test]
    fn pl_universe_subset_matrix() {
        let u = Universe::PlClosed(dom());
        let a = RealSet::interval(&dom(), rat(0), rat(1), true, true).unwrap();
        let b = RealSet::interval(&dom(), rat(2), rat(3), true, true).unwrap();
        let ab = HFam::separated_union(vec![a.clone(), b.clone()]).unwrap();
        let big = HFam::ClosedSubsets(RealSet::full(&dom()));
        assert!(ab.subset_of(&big, &u).unwrap());
        assert!(!big.subset_of(&ab, &u).unwrap());
        // ClosedSubsets(x) ⊆ separated union iff x fits in one part.
        let inside = HFam::ClosedSubsets(a.clone());
        assert!(inside.subset_of(&ab, &u).unwrap());
        let spanning = HFam::ClosedSubsets(a.union(&b).unwrap());
        assert!(!spanning.subset_of(&ab, &u).unwrap());
        // Full equals ClosedSubsets(full domain) semantically.
        assert!(HFam::Full
            .same_family(&HFam::ClosedSubsets(RealSet::full(&dom())), &u)
            .unwrap());
        assert!(HFam::Empty.subset_of(&ab, &u).unwrap());
        assert!(!ab.subset_of(&HFam::Empty, &u).unwrap());
    }
}
