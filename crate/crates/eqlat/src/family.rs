//! Families of continuous functions, described symbolically.
//!
//! A [`FamilyDesc`] denotes a (possibly infinite) set of continuous
//! functions on a common domain. The engine decides, exactly:
//!
//! * `restricts(G, f, E)` — whether some member of `G` agrees with `f` on
//!   the closed set `E` (the basic relation everything else derives from);
//! * `member(G, f)` — membership, i.e. agreement on the whole domain;
//! * `extend_witness(G, f, E)` — a concrete member agreeing with `f` on `E`
//!   whenever one exists;
//! * `value_set(G, x)` — the exact set of values members take at `x`;
//! * `predicates(G)` — completeness, connectedness, order-interval shape;
//! * `sim(G, a, b)` — whether one member passes through two given points;
//! * `relation_checks(G)` — transitivity/sequential-closure of that
//!   two-point relation.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::constructions::band_extension;
use crate::dense::DenseTagging;
use crate::error::{Error, Result};
use crate::hfam::Downset;
use crate::pl::{Domain, ExtBound, PLFunc};
use crate::rat::{midpoint, rat, Rat};
use crate::realset::RealSet;
use crate::valueset::{VComp, VEnd, ValueSet};

/// One band of a sliced union: the functions strictly between `lo` and `hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slice {
    pub lo: ExtBound,
    pub hi: ExtBound,
}

impl Slice {
    pub fn new(lo: ExtBound, hi: ExtBound) -> Result<Self> {
        if !lo.pointwise_lt(&hi)? {
            return Err(Error::EmptyBand(format!(
                "slice needs lo < hi everywhere, got lo = {lo}, hi = {hi}"
            )));
        }
        Ok(Slice { lo, hi })
    }
}

impl fmt::Display for Slice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Data of a least-family construction: a prescribed target downset over a
/// grid, realized by tagging each point with one of two disjoint dense sets
/// of forbidden values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntheticLeast {
    target: Downset,
    tagging: DenseTagging,
}

impl SyntheticLeast {
    pub fn new(target: Downset, tagging: DenseTagging) -> Result<Self> {
        if target.is_empty_family() {
            return Err(Error::InvalidConstraint(
                "the target family must contain at least the empty set".into(),
            ));
        }
        Ok(SyntheticLeast { target, tagging })
    }

    pub fn target(&self) -> &Downset {
        &self.target
    }

    pub fn tagging(&self) -> &DenseTagging {
        &self.tagging
    }

    /// The grid subset of points where `f` takes a forbidden value.
    pub fn bad_mask(&self, f: &PLFunc) -> Result<u32> {
        let mut mask = 0u32;
        for (i, p) in self.target.grid().points().iter().enumerate() {
            let v = f.eval(p)?;
            if !self.tagging.allows(p, &v) {
                mask |= 1 << i;
            }
        }
        Ok(mask)
    }
}

/// A symbolic family of continuous functions.
// Descriptors are few and long-lived, so the size spread between variants
// does not matter; boxing the synthetic payload would only obscure matches.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyDesc {
    /// The empty family.
    Empty,
    /// All continuous functions on the domain.
    Full,
    /// Exactly one function.
    Singleton(PLFunc),
    /// `{f : lo <= f <= hi}` pointwise (either bound may be infinite).
    OrderInterval(ExtBound, ExtBound),
    /// `{f : lo < f < hi}` pointwise (either bound may be infinite).
    OpenBand(ExtBound, ExtBound),
    /// `{f : f(x) != g(x) for all x}` — everything strictly above or
    /// strictly below `g`.
    Punctured(PLFunc),
    /// A stacked union of open bands (`hi_i <= lo_j` pointwise for `i < j`).
    Sliced(Vec<Slice>),
    /// An explicit finite set of functions.
    Finite(Vec<PLFunc>),
    /// The least-family construction over a grid target.
    SyntheticLeast(SyntheticLeast),
}

impl FamilyDesc {
    pub fn singleton(g: PLFunc) -> Self {
        FamilyDesc::Singleton(g)
    }

    pub fn order_interval(lo: ExtBound, hi: ExtBound) -> Result<Self> {
        check_bound_domains(&lo, &hi)?;
        if matches!(lo, ExtBound::PosInf) || matches!(hi, ExtBound::NegInf) {
            return Err(Error::EmptyInterval(
                "an infinite bound on the wrong side leaves no functions".into(),
            ));
        }
        if !lo.pointwise_le(&hi)? {
            return Err(Error::EmptyInterval(format!(
                "need lo <= hi everywhere, got lo = {lo}, hi = {hi}"
            )));
        }
        Ok(FamilyDesc::OrderInterval(lo, hi))
    }

    pub fn open_band(lo: ExtBound, hi: ExtBound) -> Result<Self> {
        check_bound_domains(&lo, &hi)?;
        if !lo.pointwise_lt(&hi)? {
            return Err(Error::EmptyBand(format!(
                "need lo < hi everywhere, got lo = {lo}, hi = {hi}"
            )));
        }
        Ok(FamilyDesc::OpenBand(lo, hi))
    }

    pub fn punctured(g: PLFunc) -> Self {
        FamilyDesc::Punctured(g)
    }

    /// Builds a sliced union; the bands must be pairwise stacked:
    /// `hi_i <= lo_j` pointwise whenever `i < j`.
    pub fn sliced(slices: Vec<Slice>) -> Result<Self> {
        if slices.is_empty() {
            return Err(Error::NotSliced("needs at least one slice".into()));
        }
        let mut dom: Option<Domain> = None;
        for s in &slices {
            for b in [&s.lo, &s.hi] {
                if let Some(d) = b.domain() {
                    match &dom {
                        None => dom = Some(d),
                        Some(existing) => existing.check_same(&d)?,
                    }
                }
            }
        }
        for i in 0..slices.len() {
            if !slices[i].lo.pointwise_lt(&slices[i].hi)? {
                return Err(Error::EmptyBand(format!("slice {i} is empty")));
            }
            for j in (i + 1)..slices.len() {
                if !slices[i].hi.pointwise_le(&slices[j].lo)? {
                    return Err(Error::NotSliced(format!(
                        "slice {i} is not everywhere below slice {j}"
                    )));
                }
            }
        }
        Ok(FamilyDesc::Sliced(slices))
    }

    /// Builds a finite family; members are deduplicated and sorted into a
    /// canonical order.
    pub fn finite(mut members: Vec<PLFunc>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidConstraint(
                "a finite family needs at least one member (use Empty otherwise)".into(),
            ));
        }
        let d0 = members[0].domain();
        for m in &members[1..] {
            d0.check_same(&m.domain())?;
        }
        members.sort();
        members.dedup();
        Ok(FamilyDesc::Finite(members))
    }

    pub fn synthetic(target: Downset, tagging: DenseTagging) -> Result<Self> {
        Ok(FamilyDesc::SyntheticLeast(SyntheticLeast::new(
            target, tagging,
        )?))
    }

    /// The common domain of the family's data, when it has any.
    pub fn domain(&self) -> Option<Domain> {
        match self {
            FamilyDesc::Empty | FamilyDesc::Full => None,
            FamilyDesc::Singleton(g) | FamilyDesc::Punctured(g) => Some(g.domain()),
            FamilyDesc::OrderInterval(lo, hi) | FamilyDesc::OpenBand(lo, hi) => {
                lo.domain().or_else(|| hi.domain())
            }
            FamilyDesc::Sliced(slices) => slices
                .iter()
                .find_map(|s| s.lo.domain().or_else(|| s.hi.domain())),
            FamilyDesc::Finite(ms) => Some(ms[0].domain()),
            FamilyDesc::SyntheticLeast(s) => Some(s.target().grid().domain().clone()),
        }
    }

    fn check_domain_of(&self, f: &PLFunc) -> Result<()> {
        if let Some(d) = self.domain() {
            d.check_same(&f.domain())?;
        }
        Ok(())
    }
}

impl fmt::Display for FamilyDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyDesc::Empty => write!(f, "empty"),
            FamilyDesc::Full => write!(f, "all-functions"),
            FamilyDesc::Singleton(g) => write!(f, "singleton({g})"),
            FamilyDesc::OrderInterval(lo, hi) => write!(f, "order-interval[{lo}, {hi}]"),
            FamilyDesc::OpenBand(lo, hi) => write!(f, "open-band({lo}, {hi})"),
            FamilyDesc::Punctured(g) => write!(f, "punctured({g})"),
            FamilyDesc::Sliced(slices) => {
                write!(f, "sliced[")?;
                for (i, s) in slices.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, "]")
            }
            FamilyDesc::Finite(ms) => {
                write!(f, "finite[")?;
                for (i, m) in ms.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{m}")?;
                }
                write!(f, "]")
            }
            FamilyDesc::SyntheticLeast(s) => {
                write!(f, "synthetic-least({}; {})", s.target(), s.tagging().describe())
            }
        }
    }
}

fn check_bound_domains(lo: &ExtBound, hi: &ExtBound) -> Result<()> {
    if let (Some(a), Some(b)) = (lo.domain(), hi.domain()) {
        a.check_same(&b)?;
    }
    Ok(())
}

/// `{x : f(x) < lo(x)} ∪ {x : f(x) > hi(x)}` — where `f` leaves the closed
/// band `[lo, hi]`.
pub(crate) fn weak_violation(f: &PLFunc, lo: &ExtBound, hi: &ExtBound) -> Result<RealSet> {
    let dom = f.domain();
    let mut out = RealSet::empty(&dom);
    if let ExtBound::Fin(l) = lo {
        out = out.union(&f.sign_partition(l)?.below)?;
    }
    if let ExtBound::Fin(h) = hi {
        out = out.union(&f.sign_partition(h)?.above)?;
    }
    Ok(out)
}

/// `{x : f(x) <= lo(x)} ∪ {x : f(x) >= hi(x)}` — where `f` leaves the open
/// band `(lo, hi)`.
pub(crate) fn strict_violation(f: &PLFunc, lo: &ExtBound, hi: &ExtBound) -> Result<RealSet> {
    let dom = f.domain();
    let mut out = RealSet::empty(&dom);
    if let ExtBound::Fin(l) = lo {
        let s = f.sign_partition(l)?;
        out = out.union(&s.below)?.union(&s.equal)?;
    }
    if let ExtBound::Fin(h) = hi {
        let s = f.sign_partition(h)?;
        out = out.union(&s.above)?.union(&s.equal)?;
    }
    Ok(out)
}

/// Decides whether some member of `g` agrees with `f` on the closed set `e`.
///
/// Errors when `e` is not closed or the domains disagree.
pub fn restricts(g: &FamilyDesc, f: &PLFunc, e: &RealSet) -> Result<bool> {
    g.check_domain_of(f)?;
    f.domain().check_same(e.domain())?;
    if !e.is_closed() {
        return Err(Error::NotClosed(format!("{e}")));
    }
    Ok(match g {
        FamilyDesc::Empty => false,
        FamilyDesc::Full => true,
        FamilyDesc::Singleton(gg) => e.is_subset(&f.eq_set(gg)?)?,
        FamilyDesc::OrderInterval(lo, hi) => {
            e.intersect(&weak_violation(f, lo, hi)?)?.is_empty()
        }
        FamilyDesc::OpenBand(lo, hi) => {
            e.intersect(&strict_violation(f, lo, hi)?)?.is_empty()
        }
        FamilyDesc::Punctured(gg) => {
            let s = f.sign_partition(gg)?;
            e.intersect(&s.equal)?.is_empty()
                && (e.intersect(&s.below)?.is_empty() || e.intersect(&s.above)?.is_empty())
        }
        FamilyDesc::Sliced(slices) => {
            let mut ok = false;
            for s in slices {
                if e.intersect(&strict_violation(f, &s.lo, &s.hi)?)?.is_empty() {
                    ok = true;
                    break;
                }
            }
            ok
        }
        FamilyDesc::Finite(ms) => {
            let mut ok = false;
            for m in ms {
                if e.is_subset(&f.eq_set(m)?)? {
                    ok = true;
                    break;
                }
            }
            ok
        }
        FamilyDesc::SyntheticLeast(s) => {
            let mask = s.target().grid().set_to_mask(e).map_err(|_| {
                Error::Unsupported {
                    op: "restricts",
                    detail: format!(
                        "the least-family construction only decides sets of grid points, got {e}"
                    ),
                }
            })?;
            // A member agreeing with f on E exists iff the bad points of f
            // inside E form a member of the target family (bad values can
            // always be avoided off E, and must be tolerated on E).
            let bad = s.bad_mask(f)? & mask;
            s.target().contains(bad)
        }
    })
}

/// Whole-domain membership: `restricts` against the full domain (the grid,
/// for the least-family construction).
pub fn member(g: &FamilyDesc, f: &PLFunc) -> Result<bool> {
    match g {
        FamilyDesc::SyntheticLeast(s) => {
            let all = s.target().grid().full_mask();
            g.check_domain_of(f)?;
            Ok(s.target().contains(s.bad_mask(f)? & all))
        }
        _ => restricts(g, f, &RealSet::full(&f.domain())),
    }
}

/// Produces a member of `g` agreeing with `f` on `e`, or `None` when the
/// relation fails. The witness is exact and verified by construction.
pub fn extend_witness(g: &FamilyDesc, f: &PLFunc, e: &RealSet) -> Result<Option<PLFunc>> {
    if !restricts(g, f, e)? {
        return Ok(None);
    }
    let dom = f.domain();
    Ok(Some(match g {
        FamilyDesc::Empty => unreachable!("restricts is false for the empty family"),
        FamilyDesc::Full => f.clone(),
        FamilyDesc::Singleton(gg) => gg.clone(),
        FamilyDesc::OrderInterval(lo, hi) => {
            let mut w = f.clone();
            if let ExtBound::Fin(l) = lo {
                w = w.pointwise_max(l)?;
            }
            if let ExtBound::Fin(h) = hi {
                w = w.pointwise_min(h)?;
            }
            w
        }
        FamilyDesc::OpenBand(lo, hi) => band_extension(e, f, lo, hi)?,
        FamilyDesc::Punctured(gg) => {
            let s = f.sign_partition(gg)?;
            if e.is_empty() {
                gg.offset(&rat(1))
            } else if e.intersect(&s.below)?.is_empty() {
                // f is strictly above g on all of e
                band_extension(e, f, &ExtBound::Fin(gg.clone()), &ExtBound::PosInf)?
            } else {
                band_extension(e, f, &ExtBound::NegInf, &ExtBound::Fin(gg.clone()))?
            }
        }
        FamilyDesc::Sliced(slices) => {
            let mut found = None;
            for s in slices {
                if e.intersect(&strict_violation(f, &s.lo, &s.hi)?)?.is_empty() {
                    found = Some(band_extension(e, f, &s.lo, &s.hi)?);
                    break;
                }
            }
            found.ok_or(Error::Internal(
                "restricts held but no slice accepted the set".into(),
            ))?
        }
        FamilyDesc::Finite(ms) => {
            let mut found = None;
            for m in ms {
                if e.is_subset(&f.eq_set(m)?)? {
                    found = Some(m.clone());
                    break;
                }
            }
            found.ok_or(Error::Internal(
                "restricts held but no member agreed on the set".into(),
            ))?
        }
        FamilyDesc::SyntheticLeast(s) => {
            let grid = s.target().grid();
            let mask = grid.set_to_mask(e).expect("restricts validated e");
            let mut ys: Vec<Rat> = Vec::with_capacity(grid.len());
            for (i, p) in grid.points().iter().enumerate() {
                let fv = f.eval(p)?;
                if mask & (1 << i) != 0 {
                    ys.push(fv);
                } else {
                    ys.push(s.tagging().pick_free(&fv));
                }
            }
            let w = PLFunc::through_points(&dom, grid.points(), &ys)?;
            debug_assert!(member(g, &w)?);
            w
        }
    }))
}

/// The exact set of values members of `g` take at the point `x`.
pub fn value_set(g: &FamilyDesc, x: &Rat) -> Result<ValueSet> {
    if let Some(d) = g.domain() {
        d.check_contains(x, "evaluation point")?;
    }
    Ok(match g {
        FamilyDesc::Empty => ValueSet::empty(),
        FamilyDesc::Full => ValueSet::full_line(),
        FamilyDesc::Singleton(gg) => ValueSet::point(gg.eval(x)?),
        FamilyDesc::OrderInterval(lo, hi) => {
            let l = bound_vend(lo, x)?;
            let h = bound_vend(hi, x)?;
            ValueSet::from_components(vec![VComp::new(
                l.clone(),
                h.clone(),
                matches!(l, VEnd::Fin(_)),
                matches!(h, VEnd::Fin(_)),
            )?])
        }
        FamilyDesc::OpenBand(lo, hi) => ValueSet::from_components(vec![VComp::new(
            bound_vend(lo, x)?,
            bound_vend(hi, x)?,
            false,
            false,
        )?]),
        FamilyDesc::Punctured(gg) => {
            let v = gg.eval(x)?;
            ValueSet::from_components(vec![
                VComp::new(VEnd::NegInf, VEnd::Fin(v.clone()), false, false)?,
                VComp::new(VEnd::Fin(v), VEnd::PosInf, false, false)?,
            ])
        }
        FamilyDesc::Sliced(slices) => {
            let mut comps = Vec::with_capacity(slices.len());
            for s in slices {
                comps.push(VComp::new(
                    bound_vend(&s.lo, x)?,
                    bound_vend(&s.hi, x)?,
                    false,
                    false,
                )?);
            }
            ValueSet::from_components(comps)
        }
        FamilyDesc::Finite(ms) => {
            let mut comps = Vec::with_capacity(ms.len());
            for m in ms {
                comps.push(VComp::point(m.eval(x)?));
            }
            ValueSet::from_components(comps)
        }
        FamilyDesc::SyntheticLeast(s) => {
            // At a grid point whose singleton lies outside the target, the
            // attainable values are the complement of a dense set, which is
            // not a finite union of intervals.
            let grid = s.target().grid();
            match grid.points().iter().position(|p| p == x) {
                None => ValueSet::full_line(),
                Some(i) => {
                    if s.target().contains(1 << i) {
                        ValueSet::full_line()
                    } else {
                        return Err(Error::Unsupported {
                            op: "value_set",
                            detail: format!(
                                "at grid point {x} the value set is the complement of a dense set"
                            ),
                        });
                    }
                }
            }
        }
    })
}

fn bound_vend(b: &ExtBound, x: &Rat) -> Result<VEnd> {
    Ok(match b {
        ExtBound::NegInf => VEnd::NegInf,
        ExtBound::PosInf => VEnd::PosInf,
        ExtBound::Fin(f) => VEnd::Fin(f.eval(x)?),
    })
}

/// Structural predicates of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyPredicates {
    /// Every continuous function whose graph lies in the union of member
    /// graphs is itself a member.
    pub complete: bool,
    /// Any two member values at any two points are joined by a member.
    pub connected: bool,
    /// The family has the shape `{f : h1 <= f <= h2}` (bounds optional).
    pub order_interval: bool,
}

/// Computes the structural predicates of `g`.
pub fn predicates(g: &FamilyDesc) -> Result<FamilyPredicates> {
    Ok(match g {
        FamilyDesc::Empty => FamilyPredicates {
            complete: true,
            connected: true,
            order_interval: false,
        },
        FamilyDesc::Full | FamilyDesc::Singleton(_) | FamilyDesc::OrderInterval(..) => {
            FamilyPredicates {
                complete: true,
                connected: true,
                order_interval: true,
            }
        }
        FamilyDesc::OpenBand(lo, hi) => FamilyPredicates {
            complete: true,
            connected: true,
            // An open band is an order interval only when it has no bounds
            // at all (then it is the family of all functions).
            order_interval: matches!(lo, ExtBound::NegInf) && matches!(hi, ExtBound::PosInf),
        },
        FamilyDesc::Punctured(_) => FamilyPredicates {
            complete: true,
            connected: false,
            order_interval: false,
        },
        FamilyDesc::Sliced(slices) => FamilyPredicates {
            complete: true,
            connected: slices.len() == 1,
            order_interval: slices.len() == 1
                && matches!(slices[0].lo, ExtBound::NegInf)
                && matches!(slices[0].hi, ExtBound::PosInf),
        },
        FamilyDesc::Finite(ms) => {
            let xs = finite_test_xs(ms)?;
            FamilyPredicates {
                complete: finite_complete(ms, &xs)?,
                connected: finite_connected(ms, &xs)?,
                order_interval: ms.len() == 1,
            }
        }
        FamilyDesc::SyntheticLeast(_) => {
            return Err(Error::Unsupported {
                op: "predicates",
                detail: "not decidable from the symbolic least-family form".into(),
            })
        }
    })
}

/// Whether some single member of `g` passes through both `a` and `b`.
pub fn sim(g: &FamilyDesc, a: &(Rat, Rat), b: &(Rat, Rat)) -> Result<bool> {
    let (a1, a2) = a;
    let (b1, b2) = b;
    if let Some(d) = g.domain() {
        d.check_contains(a1, "first point")?;
        d.check_contains(b1, "second point")?;
    }
    if a1 == b1 {
        // A single function takes a single value at a1.
        return Ok(a2 == b2 && point_attainable(g, a1, a2)?);
    }
    Ok(match g {
        FamilyDesc::Empty => false,
        FamilyDesc::Full => true,
        FamilyDesc::Singleton(gg) => gg.eval(a1)? == *a2 && gg.eval(b1)? == *b2,
        FamilyDesc::OrderInterval(..) | FamilyDesc::OpenBand(..) => {
            // The clamp/band construction joins any two admissible values.
            point_attainable(g, a1, a2)? && point_attainable(g, b1, b2)?
        }
        FamilyDesc::Punctured(gg) => {
            let sa = (a2).cmp(&gg.eval(a1)?);
            let sb = (b2).cmp(&gg.eval(b1)?);
            sa != core::cmp::Ordering::Equal && sa == sb
        }
        FamilyDesc::Sliced(slices) => {
            let mut ok = false;
            for s in slices {
                if value_inside_strict(&s.lo, &s.hi, a1, a2)?
                    && value_inside_strict(&s.lo, &s.hi, b1, b2)?
                {
                    ok = true;
                    break;
                }
            }
            ok
        }
        FamilyDesc::Finite(ms) => {
            let mut ok = false;
            for m in ms {
                if m.eval(a1)? == *a2 && m.eval(b1)? == *b2 {
                    ok = true;
                    break;
                }
            }
            ok
        }
        FamilyDesc::SyntheticLeast(_) => {
            return Err(Error::Unsupported {
                op: "sim",
                detail: "not decidable from the symbolic least-family form".into(),
            })
        }
    })
}

fn point_attainable(g: &FamilyDesc, x: &Rat, v: &Rat) -> Result<bool> {
    Ok(value_set(g, x)?.contains(v))
}

fn value_inside_strict(lo: &ExtBound, hi: &ExtBound, x: &Rat, v: &Rat) -> Result<bool> {
    let above = match lo.eval(x)? {
        Some(l) => *v > l,
        None => matches!(lo, ExtBound::NegInf),
    };
    let below = match hi.eval(x)? {
        Some(h) => *v < h,
        None => matches!(hi, ExtBound::PosInf),
    };
    Ok(above && below)
}

/// Properties of the two-point relation induced by a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationChecks {
    /// Transitivity over triples of points with pairwise distinct
    /// abscissae.
    pub transitive: bool,
    /// Closure under limits of related points (with distinct abscissae).
    pub sequential: bool,
}

/// Computes transitivity and sequential closure of the two-point relation.
///
/// For the band-shaped variants both properties hold structurally: relation
/// classes are the (pairwise disjoint) open or closed regions between the
/// bounds, so transitivity cannot fail, and any limit of points of one
/// region that lies in the union of member graphs lies in that same region.
/// For a finite family, transitivity is checked exhaustively on the pool of
/// graph points over the crossing grid; sequential closure always holds
/// because a limit of points on finitely many closed graphs lies on one of
/// them.
pub fn relation_checks(g: &FamilyDesc) -> Result<RelationChecks> {
    Ok(match g {
        FamilyDesc::Empty
        | FamilyDesc::Full
        | FamilyDesc::Singleton(_)
        | FamilyDesc::OrderInterval(..)
        | FamilyDesc::OpenBand(..)
        | FamilyDesc::Punctured(_)
        | FamilyDesc::Sliced(_) => RelationChecks {
            transitive: true,
            sequential: true,
        },
        FamilyDesc::Finite(ms) => {
            let xs = finite_test_xs(ms)?;
            RelationChecks {
                transitive: finite_transitive(ms, &xs)?,
                sequential: true,
            }
        }
        FamilyDesc::SyntheticLeast(_) => {
            return Err(Error::Unsupported {
                op: "relation_checks",
                detail: "not decidable from the symbolic least-family form".into(),
            })
        }
    })
}

/// The crossing grid of a finite family: every member breakpoint, every
/// endpoint of every pairwise agreement set, the midpoints of consecutive
/// such abscissae, and the domain endpoints.
pub(crate) fn finite_test_xs(ms: &[PLFunc]) -> Result<Vec<Rat>> {
    let dom = ms[0].domain();
    let mut xs: Vec<Rat> = vec![dom.lo().clone(), dom.hi().clone()];
    for m in ms {
        for (x, _) in m.breakpoints() {
            xs.push(x.clone());
        }
    }
    for i in 0..ms.len() {
        for j in (i + 1)..ms.len() {
            let eq = ms[i].eq_set(&ms[j])?;
            for c in eq.components() {
                xs.push(c.lo().clone());
                xs.push(c.hi().clone());
            }
        }
    }
    xs.sort();
    xs.dedup();
    let mut with_mid: Vec<Rat> = Vec::with_capacity(xs.len() * 2);
    for i in 0..xs.len() {
        if i > 0 {
            with_mid.push(midpoint(&xs[i - 1], &xs[i]));
        }
        with_mid.push(xs[i].clone());
    }
    Ok(with_mid)
}

/// Enumerates all continuous selections: functions built by following one
/// member per segment of the crossing grid, switching only where the chosen
/// members agree. Returns the canonical set of selection functions.
pub(crate) fn finite_selections(ms: &[PLFunc], xs: &[Rat]) -> Result<Vec<PLFunc>> {
    const MAX_PATHS: usize = 1 << 17;
    // Values of each member at each x.
    let mut table: Vec<Vec<Rat>> = Vec::with_capacity(ms.len());
    for m in ms {
        let mut row = Vec::with_capacity(xs.len());
        for x in xs {
            row.push(m.eval(x)?);
        }
        table.push(row);
    }
    let segs = xs.len() - 1;
    let mut results: Vec<PLFunc> = Vec::new();
    // DFS over per-segment member choices with the continuity constraint.
    let mut stack: Vec<(usize, Vec<usize>)> = ms
        .iter()
        .enumerate()
        .map(|(k, _)| (1usize, vec![k]))
        .collect();
    let mut seen_paths = 0usize;
    while let Some((seg, choice)) = stack.pop() {
        if seg == segs {
            seen_paths += 1;
            if seen_paths > MAX_PATHS {
                return Err(Error::Budget {
                    op: "finite_selections",
                    needed: seen_paths as u128,
                    budget: MAX_PATHS as u128,
                });
            }
            let ys: Vec<Rat> = (0..xs.len())
                .map(|i| {
                    let k = if i == 0 { choice[0] } else { choice[i - 1] };
                    table[k][i].clone()
                })
                .collect();
            results.push(PLFunc::through_points(&ms[0].domain(), xs, &ys)?);
            continue;
        }
        let prev = choice[seg - 1];
        for k in 0..ms.len() {
            // Continuity at the shared node xs[seg].
            if table[k][seg] == table[prev][seg] {
                let mut next = choice.clone();
                next.push(k);
                stack.push((seg + 1, next));
            }
        }
    }
    results.sort();
    results.dedup();
    Ok(results)
}

fn finite_complete(ms: &[PLFunc], xs: &[Rat]) -> Result<bool> {
    let selections = finite_selections(ms, xs)?;
    for s in &selections {
        if !ms.contains(s) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn finite_connected(ms: &[PLFunc], xs: &[Rat]) -> Result<bool> {
    for f in ms {
        for g in ms {
            for x in xs {
                for y in xs {
                    if x == y {
                        continue;
                    }
                    let fx = f.eval(x)?;
                    let gy = g.eval(y)?;
                    let mut joined = false;
                    for h in ms {
                        if h.eval(x)? == fx && h.eval(y)? == gy {
                            joined = true;
                            break;
                        }
                    }
                    if !joined {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

fn finite_transitive(ms: &[PLFunc], xs: &[Rat]) -> Result<bool> {
    // Pool of graph points; for each, the bitset of members through it.
    let mut pool: Vec<(Rat, Rat, u64)> = Vec::new();
    for x in xs {
        let mut vals: Vec<(Rat, u64)> = Vec::new();
        for (k, m) in ms.iter().enumerate() {
            let v = m.eval(x)?;
            match vals.iter_mut().find(|(w, _)| *w == v) {
                Some((_, bits)) => *bits |= 1 << k,
                None => vals.push((v, 1 << k)),
            }
        }
        for (v, bits) in vals {
            pool.push((x.clone(), v, bits));
        }
    }
    for a in &pool {
        for b in &pool {
            if a.0 == b.0 {
                continue;
            }
            if a.2 & b.2 == 0 {
                continue;
            }
            for c in &pool {
                if c.0 == a.0 || c.0 == b.0 {
                    continue;
                }
                if b.2 & c.2 != 0 && a.2 & c.2 == 0 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
