//! Deterministic random generators shared by the integration batteries.
//!
//! Everything is driven by a seeded ChaCha stream so failures reproduce
//! exactly; no generator touches the system RNG.
#![allow(dead_code)]

use eqlat::rat::{rat, ratio, Rat};
use eqlat::{
    DenseTagging, Domain, Downset, ExtBound, FamilyDesc, Grid, PLFunc, RealSet, Slice,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small rational: numerator in −24..=24, denominator in 1..=4.
pub fn rrat(r: &mut ChaCha8Rng) -> Rat {
    ratio(r.gen_range(-24..=24), r.gen_range(1..=4))
}

/// A rational strictly between `lo` and `hi` (both ends excluded).
pub fn rrat_between(r: &mut ChaCha8Rng, lo: &Rat, hi: &Rat) -> Rat {
    let k = rat(r.gen_range(1..=15));
    lo.clone() + (hi.clone() - lo.clone()) * k / rat(16)
}

/// A random PL function on `dom` with up to three interior breakpoints.
pub fn rpl(r: &mut ChaCha8Rng, dom: &Domain) -> PLFunc {
    let extra = r.gen_range(0..=3);
    let mut xs: Vec<Rat> = Vec::new();
    for _ in 0..extra {
        let x = rrat_between(r, dom.lo(), dom.hi());
        if !xs.contains(&x) {
            xs.push(x);
        }
    }
    xs.push(dom.lo().clone());
    xs.push(dom.hi().clone());
    xs.sort();
    xs.dedup();
    let ys: Vec<Rat> = (0..xs.len()).map(|_| rrat(r)).collect();
    PLFunc::through_points(dom, &xs, &ys).expect("random nodes are valid")
}

/// A random PL function whose values are strictly positive.
pub fn rpl_pos(r: &mut ChaCha8Rng, dom: &Domain) -> PLFunc {
    let extra = r.gen_range(0..=2);
    let mut xs: Vec<Rat> = Vec::new();
    for _ in 0..extra {
        let x = rrat_between(r, dom.lo(), dom.hi());
        if !xs.contains(&x) {
            xs.push(x);
        }
    }
    xs.push(dom.lo().clone());
    xs.push(dom.hi().clone());
    xs.sort();
    xs.dedup();
    let ys: Vec<Rat> = (0..xs.len())
        .map(|_| ratio(r.gen_range(1..=16), r.gen_range(1..=4)))
        .collect();
    PLFunc::through_points(dom, &xs, &ys).expect("random nodes are valid")
}

/// A random canonical set: union of up to three intervals/points in `dom`.
pub fn rset(r: &mut ChaCha8Rng, dom: &Domain) -> RealSet {
    let mut s = RealSet::empty(dom);
    for _ in 0..r.gen_range(0..=3) {
        let piece = if r.gen_bool(0.25) {
            RealSet::point(dom, rrat_between(r, dom.lo(), dom.hi())).expect("interior point")
        } else {
            let a = rrat_between(r, dom.lo(), dom.hi());
            let b = rrat_between(r, dom.lo(), dom.hi());
            if a == b {
                RealSet::point(dom, a).expect("interior point")
            } else {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                RealSet::interval(dom, lo, hi, r.gen_bool(0.5), r.gen_bool(0.5))
                    .expect("nonempty interval")
            }
        };
        s = s.union(&piece).expect("same domain");
    }
    s
}

/// A random closed set (possibly empty).
pub fn rclosed(r: &mut ChaCha8Rng, dom: &Domain) -> RealSet {
    rset(r, dom).closure()
}

/// `count` pairwise separated closed intervals/points, left to right.
pub fn spaced_parts(r: &mut ChaCha8Rng, dom: &Domain, count: usize) -> Vec<RealSet> {
    let mut cuts: Vec<Rat> = Vec::new();
    while cuts.len() < 2 * count {
        let x = rrat_between(r, dom.lo(), dom.hi());
        if !cuts.contains(&x) {
            cuts.push(x);
        }
    }
    cuts.sort();
    (0..count)
        .map(|i| {
            let a = cuts[2 * i].clone();
            let b = cuts[2 * i + 1].clone();
            if r.gen_bool(0.25) {
                RealSet::point(dom, a).expect("interior point")
            } else {
                RealSet::interval(dom, a, b, true, true).expect("nonempty interval")
            }
        })
        .collect()
}

/// A random hereditary family of grid subsets (occasionally the empty family).
pub fn rdownset(r: &mut ChaCha8Rng, grid: &Grid) -> Downset {
    if r.gen_bool(0.05) {
        return Downset::empty_family(grid.clone());
    }
    let full = grid.full_mask();
    let gens: Vec<u32> = (0..r.gen_range(1..=3)).map(|_| r.gen_range(0..=full)).collect();
    Downset::from_generators(grid.clone(), &gens).expect("masks fit the grid")
}

/// Number of family shapes `rfamily` can produce; the last one (synthetic)
/// only supports finite-grid universes.
pub const FAMILY_SHAPES: usize = 9;
pub const PL_FAMILY_SHAPES: usize = 8;

/// A random family of the given shape index.  Shapes 0..=7 work over any
/// universe; shape 8 (synthetic) is grid-only and uses `grid` as its carrier.
pub fn rfamily(r: &mut ChaCha8Rng, shape: usize, dom: &Domain, grid: &Grid) -> FamilyDesc {
    match shape {
        0 => FamilyDesc::Empty,
        1 => FamilyDesc::Full,
        2 => FamilyDesc::singleton(rpl(r, dom)),
        3 => match r.gen_range(0..4) {
            0 => FamilyDesc::order_interval(ExtBound::NegInf, ExtBound::Fin(rpl(r, dom))),
            1 => FamilyDesc::order_interval(ExtBound::Fin(rpl(r, dom)), ExtBound::PosInf),
            2 => {
                let lo = rpl(r, dom);
                let hi = if r.gen_bool(0.2) {
                    lo.clone()
                } else {
                    lo.add(&rpl_pos(r, dom)).expect("same domain")
                };
                FamilyDesc::order_interval(ExtBound::Fin(lo), ExtBound::Fin(hi))
            }
            _ => FamilyDesc::order_interval(ExtBound::NegInf, ExtBound::PosInf),
        }
        .expect("ordered bounds"),
        4 => match r.gen_range(0..4) {
            0 => FamilyDesc::open_band(ExtBound::NegInf, ExtBound::Fin(rpl(r, dom))),
            1 => FamilyDesc::open_band(ExtBound::Fin(rpl(r, dom)), ExtBound::PosInf),
            2 => {
                let lo = rpl(r, dom);
                let hi = lo.add(&rpl_pos(r, dom)).expect("same domain");
                FamilyDesc::open_band(ExtBound::Fin(lo), ExtBound::Fin(hi))
            }
            _ => FamilyDesc::open_band(ExtBound::NegInf, ExtBound::PosInf),
        }
        .expect("nonempty band"),
        5 => FamilyDesc::punctured(rpl(r, dom)),
        6 => {
            let base = rpl(r, dom);
            let k = r.gen_range(1..=3);
            let mut slices = Vec::with_capacity(k);
            let mut level = rat(0);
            for i in 0..k {
                let lo = if i == 0 && r.gen_bool(0.4) {
                    ExtBound::NegInf
                } else {
                    ExtBound::Fin(base.offset(&level))
                };
                level += ratio(r.gen_range(1..=8), 2);
                let hi = if i + 1 == k && r.gen_bool(0.4) {
                    ExtBound::PosInf
                } else {
                    ExtBound::Fin(base.offset(&level))
                };
                if r.gen_bool(0.5) {
                    // leave a gap before the next slice
                    level += ratio(r.gen_range(1..=4), 2);
                }
                slices.push(Slice::new(lo, hi).expect("nonempty band"));
            }
            FamilyDesc::sliced(slices).expect("stacked slices")
        }
        7 => {
            let k = r.gen_range(1..=3);
            FamilyDesc::finite((0..k).map(|_| rpl(r, dom)).collect())
                .expect("at least one member")
        }
        8 => {
            let mut t = rdownset(r, grid);
            if t.is_empty_family() {
                t = Downset::from_generators(grid.clone(), &[0]).expect("empty mask fits");
            }
            FamilyDesc::synthetic(t, DenseTagging::default_pair()).expect("nonempty target")
        }
        _ => unreachable!("shape index out of range"),
    }
}

/// True when the member list of `d` is closed under removing points.
pub fn downward_closed(d: &Downset) -> bool {
    let members = d.members();
    let set: std::collections::BTreeSet<u32> = members.iter().copied().collect();
    members.iter().all(|&m| {
        (0..32)
            .filter(|b| m >> b & 1 == 1)
            .all(|b| set.contains(&(m & !(1u32 << b))))
    })
}

/// A point belonging to the (nonempty) set: an endpoint of its first
/// component when that end is closed, otherwise the component midpoint.
pub fn point_in(s: &RealSet) -> Rat {
    let c = &s.components()[0];
    if c.lo_closed() {
        c.lo().clone()
    } else if c.hi_closed() {
        c.hi().clone()
    } else {
        (c.lo().clone() + c.hi().clone()) / rat(2)
    }
}
