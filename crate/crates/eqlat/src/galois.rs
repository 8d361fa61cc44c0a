//! The Galois connection between families of continuous functions and
//! hereditary families of closed sets: the restriction relation, the two
//! polarity maps, their closure operator, least elements, fixed-point
//! lattices, and the witness constructions used to certify exclusions.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::dense::DenseTagging;
use crate::error::{Error, Result};
use crate::family::{
    restricts, strict_violation, weak_violation, FamilyDesc, SyntheticLeast,
};
use crate::hfam::{Downset, Grid, HFam, Universe};
use crate::pl::{Domain, ExtBound, PLFunc};
use crate::rat::{rat, ratio, Rat};
use crate::realset::RealSet;

/// Work cap for choice-vector and pattern enumerations.
const ENUM_BUDGET: u128 = 1 << 20;
/// Cap on the number of fixed points a lattice may collect.
const LATTICE_BUDGET: usize = 4096;

/// True for descriptors that denote all continuous functions; for these the
/// restriction relation holds unconditionally.
fn is_everything(g: &FamilyDesc) -> bool {
    match g {
        FamilyDesc::Full => true,
        FamilyDesc::OrderInterval(ExtBound::NegInf, ExtBound::PosInf) => true,
        FamilyDesc::OpenBand(ExtBound::NegInf, ExtBound::PosInf) => true,
        FamilyDesc::Sliced(slices) => {
            slices.len() == 1
                && slices[0].lo == ExtBound::NegInf
                && slices[0].hi == ExtBound::PosInf
        }
        _ => false,
    }
}

/// The restriction relation: `f` relates to the closed set `e` when some
/// member of the family agrees with `f` on all of `e`.
pub fn relation(g: &FamilyDesc, f: &PLFunc, e: &RealSet) -> Result<bool> {
    restricts(g, f, e)
}

/// The left polarity map: the family of all universe sets to which every
/// function in `fs` relates. An empty `fs` yields the full family.
pub fn e_of(g: &FamilyDesc, fs: &[PLFunc], u: &Universe) -> Result<HFam> {
    if fs.is_empty() {
        return Ok(HFam::Full);
    }
    for f in fs {
        u.domain().check_same(&f.domain())?;
        if let Some(gd) = g.domain() {
            gd.check_same(&f.domain())?;
        }
    }
    if matches!(g, FamilyDesc::Empty) {
        return Ok(HFam::Empty);
    }
    if is_everything(g) {
        return Ok(HFam::Full);
    }
    match u {
        Universe::FiniteGrid(grid) => {
            let mut acc = Downset::all_subsets(grid.clone());
            for f in fs {
                acc = acc.intersect(&accepted_downset(g, f, grid)?)?;
            }
            Ok(HFam::Downset(acc))
        }
        Universe::PlClosed(dom) => e_of_pl(g, fs, dom),
    }
}

/// The sets of a grid to which a single function relates, as a downset.
/// Acceptance is antitone in the set, so the result is generated by the
/// per-variant maximal accepted sets.
fn accepted_downset(g: &FamilyDesc, f: &PLFunc, grid: &Grid) -> Result<Downset> {
    let pts = grid.points();
    let mask_where = |pred: &mut dyn FnMut(&Rat, &Rat) -> Result<bool>| -> Result<u32> {
        let mut m = 0u32;
        for (i, p) in pts.iter().enumerate() {
            if pred(p, &f.eval(p)?)? {
                m |= 1 << i;
            }
        }
        Ok(m)
    };
    let gens: Vec<u32> = match g {
        FamilyDesc::Singleton(gg) => {
            vec![mask_where(&mut |p, v| Ok(*v == gg.eval(p)?))?]
        }
        FamilyDesc::OrderInterval(lo, hi) => {
            vec![mask_where(&mut |p, v| bound_ok(lo, hi, p, v, false))?]
        }
        FamilyDesc::OpenBand(lo, hi) => {
            vec![mask_where(&mut |p, v| bound_ok(lo, hi, p, v, true))?]
        }
        FamilyDesc::Punctured(gg) => vec![
            mask_where(&mut |p, v| Ok(*v < gg.eval(p)?))?,
            mask_where(&mut |p, v| Ok(*v > gg.eval(p)?))?,
        ],
        FamilyDesc::Sliced(slices) => {
            let mut gs = Vec::with_capacity(slices.len());
            for s in slices {
                gs.push(mask_where(&mut |p, v| bound_ok(&s.lo, &s.hi, p, v, true))?);
            }
            gs
        }
        FamilyDesc::Finite(ms) => {
            let mut gs = Vec::with_capacity(ms.len());
            for m in ms {
                gs.push(mask_where(&mut |p, v| Ok(*v == m.eval(p)?))?);
            }
            gs
        }
        FamilyDesc::SyntheticLeast(s) => {
            if s.target().grid() != grid {
                return Err(Error::InvalidGrid(
                    "the synthetic family is tied to a different grid".into(),
                ));
            }
            let bad = s.bad_mask(f)?;
            let co = grid.full_mask() & !bad;
            // E is accepted iff bad ∩ E lies in the target, so the maximal
            // accepted sets extend the target's maximal traces on the bad
            // set by every good point.
            s.target().maximal().iter().map(|&m| (m & bad) | co).collect()
        }
        FamilyDesc::Empty | FamilyDesc::Full => unreachable!("handled by e_of"),
    };
    Downset::from_generators(grid.clone(), &gens)
}

/// Weak or strict band test for one value against extended bounds.
fn bound_ok(lo: &ExtBound, hi: &ExtBound, x: &Rat, v: &Rat, strict: bool) -> Result<bool> {
    let lo_ok = match lo {
        ExtBound::NegInf => true,
        ExtBound::PosInf => false,
        ExtBound::Fin(l) => {
            let lv = l.eval(x)?;
            if strict {
                lv < *v
            } else {
                lv <= *v
            }
        }
    };
    let hi_ok = match hi {
        ExtBound::PosInf => true,
        ExtBound::NegInf => false,
        ExtBound::Fin(h) => {
            let hv = h.eval(x)?;
            if strict {
                *v < hv
            } else {
                *v <= hv
            }
        }
    };
    Ok(lo_ok && hi_ok)
}

fn e_of_pl(g: &FamilyDesc, fs: &[PLFunc], dom: &Domain) -> Result<HFam> {
    match g {
        FamilyDesc::Singleton(gg) => {
            let mut x = RealSet::full(dom);
            for f in fs {
                x = x.intersect(&f.eq_set(gg)?)?;
            }
            Ok(HFam::ClosedSubsets(x))
        }
        FamilyDesc::OrderInterval(lo, hi) => {
            let mut x = RealSet::full(dom);
            for f in fs {
                let ok = RealSet::full(dom).difference(&weak_violation(f, lo, hi)?)?;
                x = x.intersect(&ok)?;
            }
            Ok(HFam::ClosedSubsets(x))
        }
        FamilyDesc::OpenBand(lo, hi) => {
            let mut x = RealSet::full(dom);
            for f in fs {
                let ok = RealSet::full(dom).difference(&strict_violation(f, lo, hi)?)?;
                x = x.intersect(&ok)?;
            }
            Ok(HFam::ClosedSubsets(x))
        }
        FamilyDesc::Punctured(gg) => {
            let mut regions: Vec<Vec<RealSet>> = Vec::with_capacity(fs.len());
            for f in fs {
                let s = f.sign_partition(gg)?;
                regions.push(vec![s.below, s.above]);
            }
            let parts = choice_parts(&regions, dom)?;
            parts_to_hfam(parts, dom, false)
        }
        FamilyDesc::Sliced(slices) => {
            let mut regions: Vec<Vec<RealSet>> = Vec::with_capacity(fs.len());
            for f in fs {
                let mut opts = Vec::with_capacity(slices.len());
                for s in slices {
                    opts.push(
                        RealSet::full(dom)
                            .difference(&strict_violation(f, &s.lo, &s.hi)?)?,
                    );
                }
                regions.push(opts);
            }
            let parts = choice_parts(&regions, dom)?;
            parts_to_hfam(parts, dom, false)
        }
        FamilyDesc::Finite(ms) => {
            let mut regions: Vec<Vec<RealSet>> = Vec::with_capacity(fs.len());
            for f in fs {
                let mut opts = Vec::with_capacity(ms.len());
                for m in ms {
                    opts.push(f.eq_set(m)?);
                }
                regions.push(opts);
            }
            let parts = choice_parts(&regions, dom)?;
            parts_to_hfam(parts, dom, true)
        }
        FamilyDesc::SyntheticLeast(_) => Err(Error::Unsupported {
            op: "e_of",
            detail: "synthetic families are grid-relative; use a finite-grid universe"
                .into(),
        }),
        FamilyDesc::Empty | FamilyDesc::Full => unreachable!("handled by e_of"),
    }
}

/// All nonempty intersections of one option region per function, reduced to
/// an antichain under inclusion.
fn choice_parts(regions: &[Vec<RealSet>], dom: &Domain) -> Result<Vec<RealSet>> {
    let mut total: u128 = 1;
    for r in regions {
        total = total.saturating_mul(r.len() as u128);
        if total > ENUM_BUDGET {
            return Err(Error::Budget {
                op: "e_of",
                needed: total,
                budget: ENUM_BUDGET,
            });
        }
    }
    let mut parts: Vec<RealSet> = Vec::new();
    let mut idx = vec![0usize; regions.len()];
    loop {
        let mut x = RealSet::full(dom);
        for (f, r) in regions.iter().enumerate() {
            x = x.intersect(&r[idx[f]])?;
            if x.is_empty() {
                break;
            }
        }
        if !x.is_empty() && !parts.contains(&x) {
            parts.push(x);
        }
        // Advance the mixed-radix counter.
        let mut k = 0;
        loop {
            if k == regions.len() {
                // Keep only inclusion-maximal parts.
                let survivors: Vec<RealSet> = parts
                    .iter()
                    .filter(|p| {
                        !parts
                            .iter()
                            .any(|q| *p != q && p.is_subset(q).unwrap_or(false))
                    })
                    .cloned()
                    .collect();
                return Ok(survivors);
            }
            idx[k] += 1;
            if idx[k] < regions[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Wraps maximal accepted parts into the most specific family form. When
/// `check_separated` is set (finite families, whose parts are equalizer
/// intersections), overlapping parts make the family inexpressible.
fn parts_to_hfam(parts: Vec<RealSet>, dom: &Domain, check_separated: bool) -> Result<HFam> {
    if parts.is_empty() {
        return Ok(HFam::ClosedSubsets(RealSet::empty(dom)));
    }
    if check_separated {
        for (i, a) in parts.iter().enumerate() {
            for b in parts.iter().skip(i + 1) {
                if !a.separated(b)? {
                    return Err(Error::Unsupported {
                        op: "e_of",
                        detail: "the accepted sets do not split into separated \
                                 groups; use a finite-grid universe"
                            .into(),
                    });
                }
            }
        }
    }
    HFam::separated_union(parts)
}

/// The right polarity map, tested one function at a time: true iff `f`
/// relates to every set of the family. Infinite families are decided by the
/// per-variant finite reductions; acceptance is antitone in the set, so
/// explicit downsets are tested on their maximal sets only.
pub fn f_member(g: &FamilyDesc, e_fam: &HFam, f: &PLFunc, u: &Universe) -> Result<bool> {
    match e_fam {
        HFam::Empty => Ok(true),
        HFam::Full => match u {
            Universe::FiniteGrid(grid) => {
                restricts(g, f, &grid.mask_to_set(grid.full_mask())?)
            }
            Universe::PlClosed(dom) => restricts(g, f, &RealSet::full(dom)),
        },
        HFam::Downset(d) => {
            for &m in d.maximal() {
                if !restricts(g, f, &d.grid().mask_to_set(m)?)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        HFam::ClosedSubsets(x) => on_all_closed_subsets(g, f, x),
        HFam::SeparatedUnion(parts) => {
            for p in parts {
                if !on_all_closed_subsets(g, f, p)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Does `f` relate to every closed subset of `x`? The reduction table per
/// family variant; unsupported pairs error out rather than guess.
fn on_all_closed_subsets(g: &FamilyDesc, f: &PLFunc, x: &RealSet) -> Result<bool> {
    if let Some(gd) = g.domain() {
        gd.check_same(x.domain())?;
    }
    f.domain().check_same(x.domain())?;
    Ok(match g {
        // The empty family relates to nothing, and ∅ is always a member set.
        FamilyDesc::Empty => false,
        FamilyDesc::Full => true,
        // Agreement with g on every singleton of x is agreement on x.
        FamilyDesc::Singleton(gg) => x.is_subset(&f.eq_set(gg)?)?,
        FamilyDesc::OrderInterval(lo, hi) => {
            weak_violation(f, lo, hi)?.intersect(x)?.is_empty()
        }
        FamilyDesc::OpenBand(lo, hi) => {
            strict_violation(f, lo, hi)?.intersect(x)?.is_empty()
        }
        // Every two-point subset forces one strict sign of f - g across x.
        FamilyDesc::Punctured(gg) => {
            let s = f.sign_partition(gg)?;
            s.equal.intersect(x)?.is_empty()
                && (s.below.intersect(x)?.is_empty() || s.above.intersect(x)?.is_empty())
        }
        // Stacked bands are pointwise disjoint, so two-point subsets force a
        // single slice to serve all of x.
        FamilyDesc::Sliced(slices) => {
            let mut ok = false;
            for s in slices {
                if strict_violation(f, &s.lo, &s.hi)?.intersect(x)?.is_empty() {
                    ok = true;
                    break;
                }
            }
            ok
        }
        // Finitely many members and arbitrary finite subsets of x: picking
        // one disagreement point per member defeats any mixed assignment,
        // so a single member must agree on all of x.
        FamilyDesc::Finite(ms) => {
            let mut ok = false;
            for m in ms {
                if x.is_subset(&f.eq_set(m)?)? {
                    ok = true;
                    break;
                }
            }
            ok
        }
        FamilyDesc::SyntheticLeast(s) => {
            let mask = s.target().grid().set_to_mask(x).map_err(|_| Error::Unsupported {
                op: "f_member",
                detail: "synthetic families decide only sets of grid points".into(),
            })?;
            s.target().contains(s.bad_mask(f)? & mask)
        }
    })
}

/// The closure operator (left polarity after right polarity), computed by
/// the per-variant closed form.
pub fn closure(g: &FamilyDesc, e_fam: &HFam, u: &Universe) -> Result<HFam> {
    if let HFam::Downset(d) = e_fam {
        if let Universe::FiniteGrid(grid) = u {
            if d.grid() != grid {
                return Err(Error::InvalidGrid(
                    "the family's grid differs from the universe grid".into(),
                ));
            }
        }
    }
    if matches!(g, FamilyDesc::Empty) {
        // Nothing relates to anything: a nonempty input forces no functions
        // at all on the other side, whose polar is everything.
        return Ok(if e_fam.is_empty_family() {
            HFam::Empty
        } else {
            HFam::Full
        });
    }
    if is_everything(g) || matches!(e_fam, HFam::Full) {
        return Ok(HFam::Full);
    }
    match g {
        // Weak bounds violate on closed sets, and a function agreeing on
        // the support can be bent arbitrarily beyond its closure.
        FamilyDesc::Singleton(_) | FamilyDesc::OrderInterval(..) => match u {
            Universe::FiniteGrid(grid) => {
                let d = e_fam.to_downset(grid)?;
                let union = d.maximal().iter().fold(0u32, |a, &m| a | m);
                Ok(HFam::Downset(Downset::from_generators(
                    grid.clone(),
                    &[union],
                )?))
            }
            Universe::PlClosed(dom) => Ok(HFam::ClosedSubsets(
                e_fam.union_support(dom)?.closure(),
            )),
        },
        // Strict bounds violate on arbitrary sets: the support is NOT
        // closed over — closed subsets of a non-closed union are exactly
        // the fixed points that distinguish this variant.
        FamilyDesc::OpenBand(..) => match u {
            Universe::FiniteGrid(grid) => {
                let d = e_fam.to_downset(grid)?;
                let union = d.maximal().iter().fold(0u32, |a, &m| a | m);
                Ok(HFam::Downset(Downset::from_generators(
                    grid.clone(),
                    &[union],
                )?))
            }
            Universe::PlClosed(dom) => {
                Ok(HFam::ClosedSubsets(e_fam.union_support(dom)?))
            }
        },
        FamilyDesc::Sliced(slices) if slices.len() == 1 => {
            // A single slice is an open band.
            let band = FamilyDesc::OpenBand(slices[0].lo.clone(), slices[0].hi.clone());
            closure(&band, e_fam, u)
        }
        // Sets that are not topologically separated must be served by one
        // sign (one slice), so they merge; separated groups stay apart.
        FamilyDesc::Punctured(_) | FamilyDesc::Sliced(_) => match e_fam {
            HFam::ClosedSubsets(x) => Ok(HFam::ClosedSubsets(x.clone())),
            HFam::SeparatedUnion(parts) => {
                let merged = chain_components(parts)?;
                parts_to_hfam(merged, u.domain(), false)
            }
            HFam::Downset(d) => {
                let mut parts: Vec<RealSet> = Vec::new();
                for &m in d.maximal() {
                    if m != 0 {
                        parts.push(d.grid().mask_to_set(m)?);
                    }
                }
                let merged = chain_components(&parts)?;
                parts_to_hfam(merged, u.domain(), false)
            }
            HFam::Empty => Ok(HFam::ClosedSubsets(RealSet::empty(u.domain()))),
            HFam::Full => unreachable!("handled above"),
        },
        FamilyDesc::Finite(ms) => {
            let grid = u.require_grid("closure of a finite family")?;
            let d = e_fam.to_downset(grid)?;
            Ok(HFam::Downset(finite_closure_grid(ms, &d, grid)?))
        }
        FamilyDesc::SyntheticLeast(s) => {
            let grid = u.require_grid("closure of a synthetic family")?;
            if s.target().grid() != grid {
                return Err(Error::InvalidGrid(
                    "the synthetic family is tied to a different grid".into(),
                ));
            }
            let d = e_fam.to_downset(grid)?;
            Ok(HFam::Downset(synthetic_closure(s, &d)?))
        }
        FamilyDesc::Empty | FamilyDesc::Full => unreachable!("handled above"),
    }
}

/// Groups sets into chain components: two sets land in one component when
/// they are not topologically separated, directly or through intermediates.
/// Returns the per-component unions.
fn chain_components(parts: &[RealSet]) -> Result<Vec<RealSet>> {
    let n = parts.len();
    let mut root: Vec<usize> = (0..n).collect();
    fn find(root: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while root[i] != i {
            root[i] = root[root[i]];
            i = root[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if !parts[i].separated(&parts[j])? {
                let (a, b) = (find(&mut root, i), find(&mut root, j));
                root[a] = b;
            }
        }
    }
    let mut groups: Vec<(usize, RealSet)> = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        let r = find(&mut root, i);
        match groups.iter_mut().find(|(g, _)| *g == r) {
            Some((_, acc)) => *acc = acc.union(part)?,
            None => groups.push((r, part.clone())),
        }
    }
    let mut out: Vec<RealSet> = groups.into_iter().map(|(_, s)| s).collect();
    out.sort();
    Ok(out)
}

/// Exact closure for a finite family over a grid, by enumerating the
/// agreement patterns of all test functionsineq. A function matters only
/// through which members it agrees with at each grid point; every pattern
/// drawn from the per-point value classes (plus a fresh value) is realized
/// by some PL function.
fn finite_closure_grid(ms: &[PLFunc], d: &Downset, grid: &Grid) -> Result<Downset> {
    let pts = grid.points();
    let n = pts.len();
    // Per point: the distinct member-value classes as member bitmasks, plus
    // the fresh class (agreeing with nobody).
    let mut options: Vec<Vec<u64>> = Vec::with_capacity(n);
    for p in pts {
        let mut classes: Vec<(Rat, u64)> = Vec::new();
        for (k, m) in ms.iter().enumerate() {
            let v = m.eval(p)?;
            match classes.iter_mut().find(|(w, _)| *w == v) {
                Some((_, bits)) => *bits |= 1 << k,
                None => classes.push((v, 1 << k)),
            }
        }
        let mut opts: Vec<u64> = classes.into_iter().map(|(_, b)| b).collect();
        opts.push(0); // fresh value
        options.push(opts);
    }
    let mut total: u128 = 1;
    for o in &options {
        total = total.saturating_mul(o.len() as u128);
    }
    if total > ENUM_BUDGET {
        return Err(Error::Budget {
            op: "closure",
            needed: total,
            budget: ENUM_BUDGET,
        });
    }
    let mut acc: Option<Downset> = None;
    let mut idx = vec![0usize; n];
    loop {
        // Agreement masks of this pattern, one per member.
        let mut agree: Vec<u32> = vec![0; ms.len()];
        for (p, &c) in idx.iter().enumerate() {
            let bits = options[p][c];
            for (k, a) in agree.iter_mut().enumerate() {
                if bits >> k & 1 == 1 {
                    *a |= 1 << p;
                }
            }
        }
        // Keep patterns whose realizations relate to every family member.
        let consistent = d
            .maximal()
            .iter()
            .all(|&mx| agree.iter().any(|&a| mx & !a == 0));
        if consistent {
            let ds = Downset::from_generators(grid.clone(), &agree)?;
            acc = Some(match acc {
                None => ds,
                Some(prev) => prev.intersect(&ds)?,
            });
        }
        let mut k = 0;
        loop {
            if k == n {
                return acc.ok_or_else(|| {
                    Error::Internal(
                        "a member's own pattern is always consistent".into(),
                    )
                });
            }
            idx[k] += 1;
            if idx[k] < options[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Exact closure for a synthetic family: a function matters only through
/// its bad set (grid points carrying a forbidden value), and every bad set
/// is realizable.
fn synthetic_closure(s: &SyntheticLeast, d: &Downset) -> Result<Downset> {
    let grid = s.target().grid();
    let full = grid.full_mask();
    let count = (full as u128 + 1).saturating_mul(full as u128 + 1);
    if count > ENUM_BUDGET {
        return Err(Error::Budget {
            op: "closure",
            needed: count,
            budget: ENUM_BUDGET,
        });
    }
    let bads: Vec<u32> = (0..=full)
        .filter(|&b| d.maximal().iter().all(|&mx| s.target().contains(b & mx)))
        .collect();
    let accepted: Vec<u32> = (0..=full)
        .filter(|&e| bads.iter().all(|&b| s.target().contains(b & e)))
        .collect();
    Downset::from_generators(grid.clone(), &accepted)
}

/// The least fixed point of the closure operator: the polar of all
/// continuous functions.
pub fn least_element(g: &FamilyDesc, u: &Universe) -> Result<HFam> {
    match g {
        FamilyDesc::Empty => Err(Error::Unsupported {
            op: "least_element",
            detail: "the empty family's fixed points are exactly the empty and \
                     full families; enumerate its lattice instead"
                .into(),
        }),
        // A finite family leaves a finite value set at every point, so only
        // the empty set relates to every function.
        FamilyDesc::Finite(_) if matches!(u, Universe::PlClosed(_)) => Ok(
            HFam::ClosedSubsets(RealSet::empty(u.domain())),
        ),
        _ => {
            let bottom = match u {
                Universe::FiniteGrid(grid) => {
                    HFam::Downset(Downset::only_empty_set(grid.clone()))
                }
                Universe::PlClosed(dom) => HFam::ClosedSubsets(RealSet::empty(dom)),
            };
            closure(g, &bottom, u)
        }
    }
}

/// A fixed-point lattice over a finite grid: all hereditary families fixed
/// by the closure operator, with their Hasse diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    pub grid: Grid,
    pub elements: Vec<Downset>,
    /// Cover edges `(i, j)` meaning element `i` is covered by element `j`.
    pub edges: Vec<(usize, usize)>,
    pub least: usize,
    pub greatest: usize,
}

/// Enumerates every hereditary family over the grid, keeps the fixed points
/// of the closure operator, and assembles their Hasse diagram. Verifies
/// that pairwise infima are intersections before returning.
pub fn lattice(g: &FamilyDesc, grid: &Grid) -> Result<Lattice> {
    let u = Universe::FiniteGrid(grid.clone());
    let mut elements: Vec<Downset> = Vec::new();
    for d in crate::oracle::enum_downsets(grid)? {
        let c = closure(g, &HFam::Downset(d.clone()), &u)?;
        if c.to_downset(grid)? == d {
            elements.push(d);
        }
        if elements.len() > LATTICE_BUDGET {
            return Err(Error::Budget {
                op: "lattice",
                needed: elements.len() as u128,
                budget: LATTICE_BUDGET as u128,
            });
        }
    }
    let m = elements.len();
    let mut le = vec![vec![false; m]; m];
    for i in 0..m {
        for j in 0..m {
            le[i][j] = elements[i].subset_of(&elements[j])?;
        }
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i == j || !le[i][j] {
                continue;
            }
            let covered = (0..m).any(|k| k != i && k != j && le[i][k] && le[k][j]);
            if !covered {
                edges.push((i, j));
            }
        }
    }
    let least = (0..m)
        .find(|&i| (0..m).all(|j| le[i][j]))
        .ok_or_else(|| Error::Internal("a closure lattice has a least element".into()))?;
    let greatest = (0..m)
        .find(|&i| (0..m).all(|j| le[j][i]))
        .ok_or_else(|| Error::Internal("a closure lattice has a greatest element".into()))?;
    // The infimum of two fixed points must be their intersection; in
    // particular the intersection must itself be a fixed point.
    for i in 0..m {
        for j in i + 1..m {
            let inter = elements[i].intersect(&elements[j])?;
            if !elements.contains(&inter) {
                return Err(Error::Internal(
                    "a pairwise intersection of fixed points escaped the lattice"
                        .into(),
                ));
            }
        }
    }
    Ok(Lattice {
        grid: grid.clone(),
        elements,
        edges,
        least,
        greatest,
    })
}

/// The cone over `g` at apex `a`: equals `g` exactly at `a` and exceeds it
/// by `|x - a|` elsewhere.
pub fn cone(g: &PLFunc, a: &Rat) -> Result<PLFunc> {
    let dom = g.domain();
    dom.check_contains(a, "cone apex")?;
    let mut nodes: Vec<(Rat, Rat)> = Vec::new();
    if *a > *dom.lo() {
        nodes.push((dom.lo().clone(), a - dom.lo()));
    }
    nodes.push((a.clone(), rat(0)));
    if *a < *dom.hi() {
        nodes.push((dom.hi().clone(), dom.hi() - a));
    }
    let tent = PLFunc::new(nodes)?;
    g.add(&tent)
}

/// The touching witness at `z`: the same cone construction, named for its
/// role (meets `g` only at the touch point).
pub fn touch(g: &PLFunc, z: &Rat) -> Result<PLFunc> {
    cone(g, z)
}

/// Adds a piecewise-linear profile to `g` that is strictly positive on the
/// regular open set `u_set`, strictly negative on the exterior of `u_set`,
/// and zero exactly on the boundary.
pub fn sign_split(g: &PLFunc, u_set: &RealSet) -> Result<PLFunc> {
    let dom = g.domain();
    dom.check_same(u_set.domain())?;
    if !u_set.is_regular_open() {
        return Err(Error::NotRegularOpen(format!("{u_set}")));
    }
    let ext = u_set.closure().complement();
    let mut nodes: Vec<(Rat, Rat)> = Vec::new();
    let push = |x: Rat, v: Rat, nodes: &mut Vec<(Rat, Rat)>| -> Result<()> {
        if let Some((_, old)) = nodes.iter().find(|(nx, _)| *nx == x) {
            if *old != v {
                return Err(Error::Internal(
                    "conflicting sign-profile node values".into(),
                ));
            }
            return Ok(());
        }
        nodes.push((x, v));
        Ok(())
    };
    for (set, sign) in [(u_set, rat(1)), (&ext, rat(-1))] {
        for c in set.components() {
            // A regular open set has no isolated points, so lo < hi and the
            // midpoint is a genuine interior node. Component ends carry the
            // sign only where the set is clopen (at domain ends); elsewhere
            // they are boundary zeros shared with the neighboring side.
            let lo_v = if c.lo_closed() { sign.clone() } else { rat(0) };
            let hi_v = if c.hi_closed() { sign.clone() } else { rat(0) };
            push(c.lo().clone(), lo_v, &mut nodes)?;
            push(c.hi().clone(), hi_v, &mut nodes)?;
            push((c.lo() + c.hi()) / rat(2), sign.clone(), &mut nodes)?;
        }
    }
    // Domain ends claimed by neither side sit on the boundary.
    for end in [dom.lo(), dom.hi()] {
        if !nodes.iter().any(|(x, _)| x == end) {
            nodes.push((end.clone(), rat(0)));
        }
    }
    nodes.sort_by(|a, b| a.0.cmp(&b.0));
    let profile = PLFunc::new(nodes)?;
    let out = g.add(&profile)?;
    debug_assert!({
        let s = out
            .sign_partition(g)
            .expect("the sum shares g's domain by construction");
        s.above == *u_set && s.below == ext
    });
    Ok(out)
}

/// The hereditary family of all closed sets avoiding the point `x`.
pub fn a_x(dom: &Domain, x: &Rat) -> Result<HFam> {
    dom.check_contains(x, "excluded point")?;
    let full = RealSet::full(dom);
    let hole = RealSet::point(dom, x.clone())?;
    Ok(HFam::ClosedSubsets(full.difference(&hole)?))
}

/// The hereditary family of closed sets lying wholly inside the regular
/// open set `u` or wholly inside its exterior.
pub fn b_u(u_set: &RealSet) -> Result<HFam> {
    if !u_set.is_regular_open() {
        return Err(Error::NotRegularOpen(format!("{u_set}")));
    }
    let ext = u_set.closure().complement();
    let parts: Vec<RealSet> = [u_set.clone(), ext]
        .into_iter()
        .filter(|p| !p.is_empty())
        .collect();
    HFam::separated_union(parts)
}

/// Builds the synthetic family whose least fixed point is exactly `target`.
pub fn synthetic_least_family(target: Downset, tagging: DenseTagging) -> Result<FamilyDesc> {
    FamilyDesc::synthetic(target, tagging)
}

/// For a set outside the synthetic family's target, a function carrying a
/// forbidden value at every point of the set (and a free value elsewhere):
/// the concrete obstruction that keeps the set out of the closure.
pub fn exclusion_witness(s: &SyntheticLeast, e: u32) -> Result<PLFunc> {
    let grid = s.target().grid();
    grid.check_mask(e)?;
    if s.target().contains(e) {
        return Err(Error::InvalidConstraint(
            "the set belongs to the target family; only excluded sets have \
             exclusion witnesses"
                .into(),
        ));
    }
    let pts = grid.points();
    let mut ys: Vec<Rat> = Vec::with_capacity(pts.len());
    for (i, p) in pts.iter().enumerate() {
        if e >> i & 1 == 1 {
            ys.push(s.tagging().forbidden_at(p).representative());
        } else {
            ys.push(s.tagging().pick_free(&rat(0)));
        }
    }
    let f = PLFunc::through_points(grid.domain(), pts, &ys)?;
    debug_assert_eq!(
        s.bad_mask(&f).expect("the witness lives on the target grid"),
        e
    );
    Ok(f)
}

/// A finite family over a small grid whose closure fixes every nonempty
/// hereditary family: for each nonempty grid subset (stage `a`, carrying
/// the fresh level `1/(a+1)`) and each of its points, one member equal to
/// the level everywhere except a narrow tent at that point.
pub fn all_hereditary_generator(grid: &Grid) -> Result<FamilyDesc> {
    let n = grid.len();
    if n > 3 {
        return Err(Error::Budget {
            op: "all_hereditary_generator",
            needed: n as u128,
            budget: 3,
        });
    }
    let dom = grid.domain().clone();
    let pts = grid.points();
    // Narrow enough that a tent at one grid point leaves all others alone.
    let mut delta = (dom.hi() - dom.lo()) / rat(2);
    for w in pts.windows(2) {
        let half = (&w[1] - &w[0]) / rat(2);
        if half < delta {
            delta = half;
        }
    }
    let mut members: Vec<PLFunc> = Vec::new();
    let mut taken: Vec<Rat> = Vec::new();
    for stage in 1..(1u32 << n) {
        let level = ratio(1, stage as i64 + 1);
        // Fresh by construction: levels are distinct and every peak exceeds
        // 1 while every level stays below it.
        let peak = &level + rat(1);
        if taken.contains(&level) || taken.contains(&peak) {
            return Err(Error::Internal("stage levels collide".into()));
        }
        taken.push(level.clone());
        taken.push(peak.clone());
        for (i, p) in pts.iter().enumerate() {
            if stage >> i & 1 == 0 {
                continue;
            }
            let mut nodes: Vec<(Rat, Rat)> = Vec::new();
            let lo_val = if p == dom.lo() { peak.clone() } else { level.clone() };
            let hi_val = if p == dom.hi() { peak.clone() } else { level.clone() };
            nodes.push((dom.lo().clone(), lo_val));
            let left = p - &delta;
            if left > *dom.lo() {
                nodes.push((left, level.clone()));
            }
            if p > dom.lo() && p < dom.hi() {
                nodes.push((p.clone(), peak.clone()));
            }
            let right = p + &delta;
            if right < *dom.hi() {
                nodes.push((right, level.clone()));
            }
            nodes.push((dom.hi().clone(), hi_val));
            members.push(PLFunc::new(nodes)?);
        }
    }
    FamilyDesc::finite(members)
}
