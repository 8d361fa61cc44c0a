//! Enumeration oracles: brute-force double-polar computation over finite
//! grids straight from the restriction relation, independent of the
//! closed-form operators, with a concrete excluding function for every
//! rejected set.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::family::{finite_selections, finite_test_xs, restricts, FamilyDesc};
use crate::galois::{closure, cone, sign_split, touch};
use crate::hfam::{Downset, Grid, HFam, Universe};
use crate::pl::{ExtBound, PLFunc};
use crate::rat::{rat, Rat};
use crate::realset::RealSet;

/// Default work cap for oracle enumerations.
pub const DEFAULT_BUDGET: u128 = 1 << 20;

/// A sorted set of candidate ordinate values for grid enumerations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueLattice {
    values: Vec<Rat>,
}

impl ValueLattice {
    pub fn new(mut values: Vec<Rat>) -> Result<Self> {
        values.sort();
        values.dedup();
        if values.is_empty() {
            return Err(Error::InvalidConstraint(
                "a value lattice needs at least one value".into(),
            ));
        }
        Ok(ValueLattice { values })
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Every piecewise-linear interpolant through one lattice value per grid
/// point: the workhorse search space for brute-force closures.
pub fn enum_pl(grid: &Grid, values: &ValueLattice, budget: u128) -> Result<Vec<PLFunc>> {
    let n = grid.len();
    let k = values.len() as u128;
    let total = k
        .checked_pow(n as u32)
        .ok_or(Error::Budget {
            op: "enum_pl",
            needed: u128::MAX,
            budget,
        })?;
    if total > budget {
        return Err(Error::Budget {
            op: "enum_pl",
            needed: total,
            budget,
        });
    }
    let pts = grid.points();
    let mut out = Vec::with_capacity(total as usize);
    let mut idx = vec![0usize; n];
    loop {
        let ys: Vec<Rat> = idx.iter().map(|&c| values.values()[c].clone()).collect();
        out.push(PLFunc::through_points(grid.domain(), pts, &ys)?);
        let mut c = 0;
        loop {
            if c == n {
                return Ok(out);
            }
            idx[c] += 1;
            if idx[c] < values.len() {
                break;
            }
            idx[c] = 0;
            c += 1;
        }
    }
}

/// Every hereditary family over the grid. The count is the Dedekind number
/// of the grid size (3, 6, 20, 168, 7581 for one to five points), so grids
/// beyond five points are rejected.
pub fn enum_downsets(grid: &Grid) -> Result<Vec<Downset>> {
    let n = grid.len();
    if n > 5 {
        return Err(Error::Budget {
            op: "enum_downsets",
            needed: n as u128,
            budget: 5,
        });
    }
    let masks = 1u32 << n;
    // DFS over masks in ascending order (a linear extension of inclusion):
    // a mask may enter only when every immediate predecessor is in, which
    // makes the collected bitsets exactly the downward-closed families.
    fn rec(mask: u32, masks: u32, cur: u64, out: &mut Vec<u64>) {
        if mask == masks {
            out.push(cur);
            return;
        }
        rec(mask + 1, masks, cur, out);
        let mut bits = mask;
        let mut ok = true;
        while bits != 0 {
            let low = bits & bits.wrapping_neg();
            if cur >> (mask & !low) & 1 == 0 {
                ok = false;
                break;
            }
            bits &= bits - 1;
        }
        if ok {
            rec(mask + 1, masks, cur | 1u64 << mask, out);
        }
    }
    let mut families: Vec<u64> = Vec::new();
    rec(0, masks, 0, &mut families);
    let mut out = Vec::with_capacity(families.len());
    for bits in families {
        let gens: Vec<u32> = (0..masks).filter(|&m| bits >> m & 1 == 1).collect();
        out.push(Downset::from_generators(grid.clone(), &gens)?);
    }
    Ok(out)
}

/// Characteristic ordinate values of a family over a grid: every defining
/// function's value at every grid point, all pairwise midpoints, and
/// sentinels one unit beyond the extremes. Families with no defining
/// functions fall back to `{-1, 0, 1}`.
pub fn default_value_lattice(g: &FamilyDesc, grid: &Grid) -> Result<ValueLattice> {
    let mut base: Vec<Rat> = Vec::new();
    let mut defining: Vec<&PLFunc> = Vec::new();
    match g {
        FamilyDesc::Empty | FamilyDesc::Full => {}
        FamilyDesc::Singleton(gg) | FamilyDesc::Punctured(gg) => defining.push(gg),
        FamilyDesc::OrderInterval(lo, hi) | FamilyDesc::OpenBand(lo, hi) => {
            for b in [lo, hi] {
                if let ExtBound::Fin(f) = b {
                    defining.push(f);
                }
            }
        }
        FamilyDesc::Sliced(slices) => {
            for s in slices {
                for b in [&s.lo, &s.hi] {
                    if let ExtBound::Fin(f) = b {
                        defining.push(f);
                    }
                }
            }
        }
        FamilyDesc::Finite(ms) => defining.extend(ms.iter()),
        FamilyDesc::SyntheticLeast(s) => {
            for p in grid.points() {
                base.push(s.tagging().forbidden_at(p).representative());
            }
            base.push(s.tagging().pick_free(&rat(0)));
        }
    }
    for f in defining {
        for p in grid.points() {
            base.push(f.eval(p)?);
        }
    }
    base.sort();
    base.dedup();
    if base.is_empty() {
        return ValueLattice::new(vec![rat(-1), rat(0), rat(1)]);
    }
    let mut vals = base.clone();
    for i in 0..base.len() {
        for j in (i + 1)..base.len() {
            vals.push((&base[i] + &base[j]) / rat(2));
        }
    }
    vals.push(base.first().unwrap() - &rat(1));
    vals.push(base.last().unwrap() + &rat(1));
    ValueLattice::new(vals)
}

/// Quarter of the smallest gap between structure points (consecutive grid
/// points, or the domain ends for a one-point grid): small enough that the
/// neighborhoods below stay pairwise separated and miss other grid points.
fn grid_delta(grid: &Grid) -> Rat {
    let dom = grid.domain();
    let mut delta = (dom.hi() - dom.lo()) / rat(4);
    for w in grid.points().windows(2) {
        let q = (&w[1] - &w[0]) / rat(4);
        if q < delta {
            delta = q;
        }
    }
    delta
}

/// The union of small regular-open neighborhoods (in the subspace topology
/// of the domain) around the grid points selected by `mask`.
fn delta_neighborhood(grid: &Grid, mask: u32, delta: &Rat) -> Result<RealSet> {
    let dom = grid.domain();
    let mut u = RealSet::empty(dom);
    for (i, p) in grid.points().iter().enumerate() {
        if mask >> i & 1 == 0 {
            continue;
        }
        let (lo, lo_closed) = if p - delta <= *dom.lo() {
            (dom.lo().clone(), true)
        } else {
            (p - delta, false)
        };
        let (hi, hi_closed) = if p + delta >= *dom.hi() {
            (dom.hi().clone(), true)
        } else {
            (p + delta, false)
        };
        u = u.union(&RealSet::interval(dom, lo, hi, lo_closed, hi_closed)?)?;
    }
    Ok(u)
}

/// Hand-tailored candidate members per family shape: functions built to
/// agree with the family exactly on the given support set and to defeat
/// everything beyond it. Together with `enum_pl` they form the oracle's
/// search pool.
pub fn witness_pool(g: &FamilyDesc, support: &RealSet, grid: &Grid) -> Result<Vec<PLFunc>> {
    grid.domain().check_same(support.domain())?;
    if let Some(gd) = g.domain() {
        gd.check_same(grid.domain())?;
    }
    let dom = grid.domain();
    let pts = grid.points();
    let dist = if support.is_empty() {
        None
    } else {
        Some(support.distance_function()?)
    };
    let mut pool: Vec<PLFunc> = Vec::new();
    match g {
        FamilyDesc::Empty | FamilyDesc::Full => {}
        FamilyDesc::Singleton(gg) => {
            pool.push(gg.clone());
            // Agrees with the target exactly on the support's closure.
            match &dist {
                Some(d) => pool.push(gg.add(d)?),
                None => pool.push(gg.offset(&rat(1))),
            }
            for p in pts {
                pool.push(cone(gg, p)?);
            }
        }
        FamilyDesc::OrderInterval(lo, hi) => {
            if let ExtBound::Fin(l) = lo {
                pool.push(l.clone());
                // Sits on the lower bound over the support, dips below it
                // everywhere else: the universal excluder.
                match &dist {
                    Some(d) => pool.push(l.add(&d.scale(&rat(-1)))?),
                    None => pool.push(l.offset(&rat(-1))),
                }
            }
            if let ExtBound::Fin(h) = hi {
                pool.push(h.clone());
                if matches!(lo, ExtBound::NegInf) {
                    match &dist {
                        Some(d) => pool.push(h.add(d)?),
                        None => pool.push(h.offset(&rat(1))),
                    }
                }
            }
        }
        FamilyDesc::OpenBand(lo, hi) => {
            if !matches!((lo, hi), (ExtBound::NegInf, ExtBound::PosInf)) {
                let mid = ExtBound::band_midline(lo, hi, dom)?;
                // Strictly inside at every grid point but one, where it
                // touches a bound: excludes exactly the sets through that
                // point.
                for (i, q) in pts.iter().enumerate() {
                    let mut ys = Vec::with_capacity(pts.len());
                    for (j, p) in pts.iter().enumerate() {
                        if i == j {
                            let v = match (lo, hi) {
                                (ExtBound::Fin(l), _) => l.eval(q)?,
                                (_, ExtBound::Fin(h)) => h.eval(q)?,
                                _ => unreachable!("one bound is finite here"),
                            };
                            ys.push(v);
                        } else {
                            ys.push(mid.eval(p)?);
                        }
                    }
                    pool.push(PLFunc::through_points(dom, pts, &ys)?);
                }
                pool.push(mid);
            }
        }
        FamilyDesc::Punctured(gg) => {
            pool.push(gg.clone());
            pool.push(gg.offset(&rat(1)));
            pool.push(gg.offset(&rat(-1)));
            for p in pts {
                pool.push(touch(gg, p)?);
            }
            // One sign profile per proper nonempty subset of the grid:
            // above the target on the subset, below it on the complement.
            let delta = grid_delta(grid);
            let full = grid.full_mask();
            for t in 1..full {
                let u_set = delta_neighborhood(grid, t, &delta)?;
                pool.push(sign_split(gg, &u_set)?);
            }
        }
        FamilyDesc::Sliced(slices) => {
            let mids: Vec<PLFunc> = slices
                .iter()
                .map(|s| ExtBound::band_midline(&s.lo, &s.hi, dom))
                .collect::<Result<_>>()?;
            // Every assignment of one slice per grid point, realized
            // through the slice midlines.
            const SLICE_BUDGET: u128 = 1 << 12;
            let total = (slices.len() as u128)
                .checked_pow(pts.len() as u32)
                .unwrap_or(u128::MAX);
            if total > SLICE_BUDGET {
                return Err(Error::Budget {
                    op: "witness_pool",
                    needed: total,
                    budget: SLICE_BUDGET,
                });
            }
            let mut idx = vec![0usize; pts.len()];
            'assign: loop {
                let mut ys = Vec::with_capacity(pts.len());
                for (j, p) in pts.iter().enumerate() {
                    ys.push(mids[idx[j]].eval(p)?);
                }
                pool.push(PLFunc::through_points(dom, pts, &ys)?);
                let mut c = 0;
                loop {
                    if c == pts.len() {
                        break 'assign;
                    }
                    idx[c] += 1;
                    if idx[c] < slices.len() {
                        break;
                    }
                    idx[c] = 0;
                    c += 1;
                }
            }
            pool.extend(mids.iter().cloned());
            // A value caught between or beyond the slices, spliced in at
            // one grid point at a time: excludes sets reaching that point.
            let out_bound: Option<&PLFunc> = match (&slices[0].lo, &slices[slices.len() - 1].hi)
            {
                (ExtBound::Fin(l), _) => Some(l),
                (_, ExtBound::Fin(h)) => Some(h),
                _ => match &slices[0].hi {
                    ExtBound::Fin(h0) => Some(h0),
                    _ => None,
                },
            };
            if let Some(ob) = out_bound {
                for (i, q) in pts.iter().enumerate() {
                    let mut ys = Vec::with_capacity(pts.len());
                    for (j, p) in pts.iter().enumerate() {
                        ys.push(if i == j { ob.eval(q)? } else { mids[0].eval(p)? });
                    }
                    pool.push(PLFunc::through_points(dom, pts, &ys)?);
                }
            }
        }
        FamilyDesc::Finite(ms) => {
            pool.extend(ms.iter().cloned());
            let xs = finite_test_xs(ms)?;
            pool.extend(finite_selections(ms, &xs)?);
        }
        FamilyDesc::SyntheticLeast(s) => {
            if s.target().grid() != grid {
                return Err(Error::InvalidGrid(
                    "the synthetic family is tied to a different grid".into(),
                ));
            }
            // One function per bad-set pattern: forbidden representatives
            // on the pattern, a globally free value elsewhere.
            let free = s.tagging().pick_free(&rat(0));
            for b in 0..=grid.full_mask() {
                let mut ys = Vec::with_capacity(pts.len());
                for (i, p) in pts.iter().enumerate() {
                    if b >> i & 1 == 1 {
                        ys.push(s.tagging().forbidden_at(p).representative());
                    } else {
                        ys.push(free.clone());
                    }
                }
                pool.push(PLFunc::through_points(dom, pts, &ys)?);
            }
        }
    }
    Ok(pool)
}

/// The result of a brute-force double-polar computation: the tightest
/// family the pool could establish, plus one excluding function per
/// rejected set.
#[derive(Debug, Clone)]
pub struct BruteClosure {
    /// Always a superset of the true closure; equal when the pool is rich
    /// enough.
    pub upper: Downset,
    /// For each grid set outside `upper`, a pool function relating to every
    /// input set but not to this one.
    pub certificates: BTreeMap<u32, PLFunc>,
}

/// Computes the double polar of `e_fam` under `g` straight from the
/// restriction relation: keeps the pool functions relating to every input
/// set, then keeps the grid sets every survivor relates to.
pub fn brute_closure(
    g: &FamilyDesc,
    e_fam: &HFam,
    grid: &Grid,
    pool: &[PLFunc],
    budget: u128,
) -> Result<BruteClosure> {
    let d = e_fam.to_downset(grid)?;
    let work = (pool.len() as u128).saturating_mul(grid.subset_count() as u128);
    if work > budget {
        return Err(Error::Budget {
            op: "brute_closure",
            needed: work,
            budget,
        });
    }
    // The relation is antitone in the set, so the maximal input sets decide
    // membership of the whole family.
    let input_sets: Vec<RealSet> = d
        .maximal()
        .iter()
        .map(|&m| grid.mask_to_set(m))
        .collect::<Result<_>>()?;
    let mut members: Vec<&PLFunc> = Vec::new();
    'pool: for f in pool {
        for e in &input_sets {
            if !restricts(g, f, e)? {
                continue 'pool;
            }
        }
        members.push(f);
    }
    let mut accepted: Vec<u32> = Vec::new();
    let mut certificates: BTreeMap<u32, PLFunc> = BTreeMap::new();
    for mask in 0..grid.subset_count() as u32 {
        let e = grid.mask_to_set(mask)?;
        let mut excluder: Option<&PLFunc> = None;
        for f in &members {
            if !restricts(g, f, &e)? {
                excluder = Some(f);
                break;
            }
        }
        match excluder {
            None => accepted.push(mask),
            Some(f) => {
                certificates.insert(mask, (*f).clone());
            }
        }
    }
    Ok(BruteClosure {
        upper: Downset::from_generators(grid.clone(), &accepted)?,
        certificates,
    })
}

/// A side-by-side verdict: the closed-form closure against the brute-force
/// upper bound. `pass` means they agree exactly; the certificates then
/// witness every exclusion the closed form claims.
#[derive(Debug, Clone)]
pub struct OracleVerdict {
    pub pass: bool,
    pub theorem: Downset,
    pub upper: Downset,
    pub certificates: BTreeMap<u32, PLFunc>,
}

/// Runs the closed-form closure and the brute-force oracle on the same
/// input and compares. The pool is the default value-lattice enumeration
/// plus the tailored witnesses over the input's support.
pub fn oracle_verify(
    g: &FamilyDesc,
    e_fam: &HFam,
    grid: &Grid,
    budget: u128,
) -> Result<OracleVerdict> {
    let u = Universe::FiniteGrid(grid.clone());
    let theorem = closure(g, e_fam, &u)?.to_downset(grid)?;
    let mut pool = enum_pl(grid, &default_value_lattice(g, grid)?, budget)?;
    let support_mask = e_fam
        .to_downset(grid)?
        .maximal()
        .iter()
        .fold(0u32, |a, &m| a | m);
    let support = grid.mask_to_set(support_mask)?;
    pool.extend(witness_pool(g, &support, grid)?);
    let bc = brute_closure(g, e_fam, grid, &pool, budget)?;
    let pass = theorem == bc.upper;
    Ok(OracleVerdict {
        pass,
        theorem,
        upper: bc.upper,
        certificates: bc.certificates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Slice;
    use crate::pl::Domain;
    use crate::rat::ratio;

    fn dom() -> Domain {
        Domain::new(rat(0), rat(4)).unwrap()
    }

    fn konst(v: i64) -> PLFunc {
        PLFunc::constant(&dom(), rat(v))
    }

    fn grid3() -> Grid {
        Grid::new(dom(), vec![rat(0), rat(2), rat(4)]).unwrap()
    }

    #[test]
    fn downset_counts_match_the_free_distributive_lattice() {
        for (n, count) in [(1usize, 3usize), (2, 6), (3, 20), (4, 168), (5, 7581)] {
            let pts: Vec<Rat> = (0..n).map(|i| rat(i as i64)).collect();
            let grid = Grid::new(dom(), pts).unwrap();
            assert_eq!(enum_downsets(&grid).unwrap().len(), count, "n = {n}");
        }
        let pts: Vec<Rat> = (0..6).map(|i| ratio(i, 2)).collect();
        let grid6 = Grid::new(dom(), pts).unwrap();
        assert!(matches!(
            enum_downsets(&grid6),
            Err(Error::Budget { op: "enum_downsets", .. })
        ));
    }

    #[test]
    fn pl_enumeration_counts_and_budget() {
        let values = ValueLattice::new(vec![rat(0), rat(1), rat(1), rat(0)]).unwrap();
        assert_eq!(values.len(), 2);
        let fns = enum_pl(&grid3(), &values, 1 << 20).unwrap();
        assert_eq!(fns.len(), 8);
        // Distinct functions.
        for (i, f) in fns.iter().enumerate() {
            for g in fns.iter().skip(i + 1) {
                assert_ne!(f, g);
            }
        }
        assert!(matches!(
            enum_pl(&grid3(), &values, 7),
            Err(Error::Budget { op: "enum_pl", .. })
        ));
    }

    #[test]
    fn default_lattices_carry_characteristic_values() {
        let v = default_value_lattice(&FamilyDesc::singleton(konst(2)), &grid3()).unwrap();
        assert_eq!(v.values(), &[rat(1), rat(2), rat(3)]);
        let v = default_value_lattice(&FamilyDesc::Full, &grid3()).unwrap();
        assert_eq!(v.values(), &[rat(-1), rat(0), rat(1)]);
        let band = FamilyDesc::order_interval(
            ExtBound::Fin(konst(0)),
            ExtBound::Fin(konst(2)),
        )
        .unwrap();
        let v = default_value_lattice(&band, &grid3()).unwrap();
        assert_eq!(v.values(), &[rat(-1), rat(0), rat(1), rat(2), rat(3)]);
    }

    #[test]
    fn oracle_agrees_with_closed_forms_across_variants() {
        let grid = grid3();
        let fams = [
            FamilyDesc::Empty,
            FamilyDesc::Full,
            FamilyDesc::singleton(konst(0)),
            FamilyDesc::order_interval(ExtBound::Fin(konst(0)), ExtBound::Fin(konst(2)))
                .unwrap(),
            FamilyDesc::open_band(ExtBound::Fin(konst(0)), ExtBound::PosInf).unwrap(),
            FamilyDesc::punctured(konst(0)),
            FamilyDesc::finite(vec![konst(0), konst(1)]).unwrap(),
            FamilyDesc::sliced(vec![
                Slice::new(ExtBound::NegInf, ExtBound::Fin(konst(0))).unwrap(),
                Slice::new(ExtBound::Fin(konst(0)), ExtBound::PosInf).unwrap(),
            ])
            .unwrap(),
        ];
        let inputs = [
            Downset::empty_family(grid.clone()),
            Downset::only_empty_set(grid.clone()),
            Downset::from_generators(grid.clone(), &[0b011]).unwrap(),
            Downset::from_generators(grid.clone(), &[0b001, 0b100]).unwrap(),
            Downset::all_subsets(grid.clone()),
        ];
        for g in &fams {
            for d in &inputs {
                let v = oracle_verify(g, &HFam::Downset(d.clone()), &grid, DEFAULT_BUDGET)
                    .unwrap();
                assert!(
                    v.pass,
                    "family {g} on {d}: theorem {} vs oracle {}",
                    v.theorem, v.upper
                );
            }
        }
    }

    #[test]
    fn oracle_covers_the_synthetic_family() {
        let grid = grid3();
        let target = Downset::from_generators(grid.clone(), &[0b011, 0b100]).unwrap();
        let g = FamilyDesc::synthetic(
            target.clone(),
            crate::dense::DenseTagging::default_pair(),
        )
        .unwrap();
        let inputs = [
            Downset::only_empty_set(grid.clone()),
            target.clone(),
            Downset::from_generators(grid.clone(), &[0b001]).unwrap(),
        ];
        for d in &inputs {
            let v =
                oracle_verify(&g, &HFam::Downset(d.clone()), &grid, DEFAULT_BUDGET).unwrap();
            assert!(v.pass, "input {d}: theorem {} vs oracle {}", v.theorem, v.upper);
        }
    }

    #[test]
    fn certificates_relate_to_inputs_and_defeat_their_sets() {
        let grid = grid3();
        let g = FamilyDesc::punctured(konst(0));
        let d = Downset::from_generators(grid.clone(), &[0b001, 0b100]).unwrap();
        let v = oracle_verify(&g, &HFam::Downset(d.clone()), &grid, DEFAULT_BUDGET).unwrap();
        assert!(v.pass);
        assert!(!v.certificates.is_empty());
        for (mask, f) in &v.certificates {
            assert!(!v.upper.contains(*mask));
            let e = grid.mask_to_set(*mask).unwrap();
            assert!(!restricts(&g, f, &e).unwrap(), "certificate must defeat its set");
            for &m in d.maximal() {
                let input = grid.mask_to_set(m).unwrap();
                assert!(
                    restricts(&g, f, &input).unwrap(),
                    "certificate must relate to every input set"
                );
            }
        }
    }

    #[test]
    fn brute_closure_budget_guard() {
        let grid = grid3();
        let pool = vec![konst(0); 10];
        let err = brute_closure(
            &FamilyDesc::singleton(konst(0)),
            &HFam::Downset(Downset::only_empty_set(grid.clone())),
            &grid,
            &pool,
            10,
        );
        assert!(matches!(err, Err(Error::Budget { op: "brute_closure", .. })));
    }

    #[test]
    fn witness_pools_have_the_tailored_shapes() {
        let grid = grid3();
        let support = RealSet::from_points(&dom(), &[rat(0), rat(2)]).unwrap();
        // Target, distance witness, and one cone per grid point.
        let pool =
            witness_pool(&FamilyDesc::singleton(konst(1)), &support, &grid).unwrap();
        assert_eq!(pool.len(), 5);
        // Target, three touches, two offsets, and six sign profiles.
        let pool =
            witness_pool(&FamilyDesc::punctured(konst(0)), &support, &grid).unwrap();
        assert_eq!(pool.len(), 3 + 3 + 6);
        // All four witnesses relate to the support as input demands.
        let empty = RealSet::empty(&dom());
        let pool = witness_pool(
            &FamilyDesc::order_interval(ExtBound::Fin(konst(0)), ExtBound::Fin(konst(2)))
                .unwrap(),
            &empty,
            &grid,
        )
        .unwrap();
        assert_eq!(pool.len(), 3);
    }
}
