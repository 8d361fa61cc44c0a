//! Constructive algorithms: extensions into bands, staged increasing
//! bijections with dense-value constraints, oscillation, and the two slice
//! transformations.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::dense::DenseSet;
use crate::error::{Error, Result};
use crate::family::{predicates, relation_checks, strict_violation, FamilyDesc, Slice};
use crate::pl::{Domain, ExtBound, PLFunc};
use crate::rat::{pow2, rat, Rat};
use crate::realset::RealSet;

/// Extends values prescribed on a closed set to a function lying strictly
/// inside the open band `(lo, hi)` on the whole domain.
///
/// Off the prescribed set the extension follows the chord between the
/// nearest prescribed points (or their constant continuation) whenever that
/// chord stays strictly inside the band at the node being placed, and falls
/// back to the band midline otherwise. Strictness at every node plus
/// linearity of all three graphs between consecutive nodes makes the result
/// strictly inside everywhere.
pub fn band_extension(
    e: &RealSet,
    values: &PLFunc,
    lo: &ExtBound,
    hi: &ExtBound,
) -> Result<PLFunc> {
    let dom = values.domain();
    dom.check_same(e.domain())?;
    for b in [lo, hi] {
        if let Some(bd) = b.domain() {
            dom.check_same(&bd)?;
        }
    }
    if !lo.pointwise_lt(hi)? {
        return Err(Error::EmptyBand(format!("lo = {lo}, hi = {hi}")));
    }
    if !e.is_closed() {
        return Err(Error::NotClosed(format!("{e}")));
    }
    if !e.intersect(&strict_violation(values, lo, hi)?)?.is_empty() {
        return Err(Error::InvalidConstraint(format!(
            "prescribed values leave the open band on part of {e}"
        )));
    }
    let midline = ExtBound::band_midline(lo, hi, &dom)?;

    // Node abscissae: domain ends, set-component endpoints, and every
    // breakpoint of the data.
    let mut xs: Vec<Rat> = vec![dom.lo().clone(), dom.hi().clone()];
    for c in e.components() {
        xs.push(c.lo().clone());
        xs.push(c.hi().clone());
    }
    for f in [Some(values), lo.as_fin(), hi.as_fin(), Some(&midline)]
        .into_iter()
        .flatten()
    {
        for (x, _) in f.breakpoints() {
            xs.push(x.clone());
        }
    }
    xs.sort();
    xs.dedup();

    // Anchor endpoints of the prescribed set, for chord interpolation.
    let anchors: Vec<(Rat, Rat)> = e.components().iter().map(|c| (c.lo().clone(), c.hi().clone())).collect();
    let chord_at = |x: &Rat| -> Result<Option<Rat>> {
        // Nearest prescribed point to the left and right of x.
        let mut left: Option<&Rat> = None;
        let mut right: Option<&Rat> = None;
        for (alo, ahi) in &anchors {
            if ahi < x {
                left = Some(ahi);
            }
            if alo > x && right.is_none() {
                right = Some(alo);
            }
        }
        Ok(match (left, right) {
            (None, None) => None,
            (Some(a), None) => Some(values.eval(a)?),
            (None, Some(b)) => Some(values.eval(b)?),
            (Some(a), Some(b)) => {
                let va = values.eval(a)?;
                let vb = values.eval(b)?;
                Some(&va + (&vb - &va) * (x - a) / (b - a))
            }
        })
    };
    let strictly_inside = |x: &Rat, v: &Rat| -> Result<bool> {
        let above = match lo.eval(x)? {
            Some(l) => *v > l,
            None => true,
        };
        let below = match hi.eval(x)? {
            Some(h) => *v < h,
            None => true,
        };
        Ok(above && below)
    };

    let mut nodes: Vec<(Rat, Rat)> = Vec::with_capacity(xs.len());
    for x in &xs {
        let y = if e.contains_point(x) {
            values.eval(x)?
        } else {
            match chord_at(x)? {
                Some(c) if strictly_inside(x, &c)? => c,
                _ => midline.eval(x)?,
            }
        };
        nodes.push((x.clone(), y));
    }
    let w = PLFunc::new(nodes)?;
    debug_assert!(strict_violation(&w, lo, hi)?.is_empty());
    debug_assert!(e.is_subset(&w.eq_set(values)?)?);
    Ok(w)
}

/// A constraint for [`incr_bijection`]: at abscissa `x` the function value
/// must belong to the dense set `values`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijectionConstraint {
    pub x: Rat,
    pub values: DenseSet,
}

/// The result of the staged bijection construction: the final function and
/// the full stage trace (starting from the affine seed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncrBijection {
    pub result: PLFunc,
    pub stages: Vec<PLFunc>,
}

/// Builds an increasing piecewise-linear bijection from interval `i` onto
/// interval `j` whose value at each constrained abscissa lies in the given
/// dense set.
///
/// Stage `n` fixes the value at the `n`-th constraint point inside a window
/// that keeps every piece slope above half the seed slope (so the function
/// stays strictly increasing and onto) and within `2^-(n+1)` of the previous
/// stage.
pub fn incr_bijection(
    i: &Domain,
    j: &Domain,
    constraints: &[BijectionConstraint],
) -> Result<IncrBijection> {
    for (a, c) in constraints.iter().enumerate() {
        if *c.x() <= *i.lo() || *c.x() >= *i.hi() {
            return Err(Error::InvalidConstraint(format!(
                "constraint point {} must lie strictly inside {i}",
                c.x()
            )));
        }
        for d in &constraints[..a] {
            if d.x() == c.x() {
                return Err(Error::InvalidConstraint(format!(
                    "duplicate constraint point {}",
                    c.x()
                )));
            }
        }
    }
    let seed = PLFunc::affine(i, j.lo().clone(), j.hi().clone());
    let half_slope = j.length() / i.length() / rat(2);
    let mut committed: Vec<Rat> = vec![i.lo().clone(), i.hi().clone()];
    let mut cur = seed.clone();
    let mut stages = vec![seed];
    for (n, c) in constraints.iter().enumerate() {
        let x = c.x();
        // Committed neighbours of x.
        let u = committed.iter().filter(|p| **p < *x).max().unwrap().clone();
        let v = committed.iter().filter(|p| **p > *x).min().unwrap().clone();
        let yu = cur.eval(&u)?;
        let yv = cur.eval(&v)?;
        let fx = cur.eval(x)?;
        // Slope window keeping both new pieces steeper than half_slope.
        let slope_lo = &yu + &half_slope * (x - &u);
        let slope_hi = &yv - &half_slope * (&v - x);
        // Drift window around the previous stage's value.
        let eps = pow2(-(n as i32) - 1);
        let drift_lo = &fx - &eps;
        let drift_hi = &fx + &eps;
        let lo = if slope_lo > drift_lo { slope_lo } else { drift_lo };
        let hi = if slope_hi < drift_hi { slope_hi } else { drift_hi };
        debug_assert!(lo < hi, "the feasibility window is provably nonempty");
        let y = c.values().pick_in(&lo, &hi)?;
        // Rebuild from all committed nodes plus the new one.
        committed.push(x.clone());
        committed.sort();
        let mut nodes: Vec<(Rat, Rat)> = Vec::with_capacity(committed.len());
        for p in &committed {
            let val = if p == x { y.clone() } else { cur.eval(p)? };
            nodes.push((p.clone(), val));
        }
        cur = PLFunc::new(nodes)?;
        stages.push(cur.clone());
    }
    Ok(IncrBijection {
        result: cur,
        stages,
    })
}

impl BijectionConstraint {
    pub fn new(x: Rat, values: DenseSet) -> Self {
        BijectionConstraint { x, values }
    }

    pub fn x(&self) -> &Rat {
        &self.x
    }

    pub fn values(&self) -> &DenseSet {
        &self.values
    }
}

/// Exact oscillation of `f` on `[a, b]`: the difference between the largest
/// and smallest value `f` takes there.
pub fn oscillation(f: &PLFunc, a: &Rat, b: &Rat) -> Result<Rat> {
    let dom = f.domain();
    dom.check_contains(a, "left end")?;
    dom.check_contains(b, "right end")?;
    if a > b {
        return Err(Error::InvalidConstraint(format!(
            "interval ends out of order: {a} > {b}"
        )));
    }
    let mut vals = vec![f.eval(a)?, f.eval(b)?];
    for (x, y) in f.breakpoints() {
        if x > a && x < b {
            vals.push(y.clone());
        }
    }
    let max = vals.iter().max().unwrap().clone();
    let min = vals.iter().min().unwrap().clone();
    Ok(max - min)
}

/// Tightens a list of possibly overlapping band descriptions into a stacked
/// sliced system over the same enumeration order:
///
/// * `h_lo[n] = max(lo[n], hi[m] for m < n)` (ascending pass),
/// * `h_hi[n] = min(hi[n], h_lo[m] for m > n)` (descending pass).
///
/// The output bands satisfy `h_hi[i] <= h_lo[j]` pointwise for `i < j` by
/// construction; the input is rejected when some tightened band comes out
/// empty.
pub fn sliced_normalize(raw: &[Slice]) -> Result<Vec<Slice>> {
    if raw.is_empty() {
        return Err(Error::NotSliced("needs at least one slice".into()));
    }
    let mut h_lo: Vec<ExtBound> = Vec::with_capacity(raw.len());
    for (n, s) in raw.iter().enumerate() {
        let mut acc = s.lo.clone();
        for m in raw.iter().take(n) {
            acc = acc.pointwise_max(&m.hi)?;
        }
        h_lo.push(acc);
    }
    let mut h_hi: Vec<ExtBound> = vec![ExtBound::PosInf; raw.len()];
    for n in (0..raw.len()).rev() {
        let mut acc = raw[n].hi.clone();
        for l in h_lo.iter().skip(n + 1) {
            acc = acc.pointwise_min(l)?;
        }
        h_hi[n] = acc;
    }
    let mut out = Vec::with_capacity(raw.len());
    for (n, (lo, hi)) in h_lo.into_iter().zip(h_hi).enumerate() {
        if !lo.pointwise_lt(&hi)? {
            return Err(Error::NotSliced(format!(
                "slice {n} has an empty tightened band (lo = {lo}, hi = {hi})"
            )));
        }
        out.push(Slice::new(lo, hi)?);
    }
    // The stacked invariant holds by the formulas; re-validate anyway.
    FamilyDesc::sliced(out.clone())?;
    Ok(out)
}

/// Decomposes a family whose connected components are open bands into an
/// explicit sliced union.
///
/// Preconditions: the family must be complete and its two-point relation
/// transitive and sequentially closed; each failing predicate is named in
/// the error. Families whose components are not open bands (a single
/// function, a closed order interval with a finite bound, a finite family)
/// are rejected as unsupported.
pub fn slice_decompose(g: &FamilyDesc) -> Result<FamilyDesc> {
    let p = predicates(g)?;
    if !p.complete {
        return Err(Error::PredicateFailed {
            op: "slice_decompose",
            predicate: "complete",
        });
    }
    let r = relation_checks(g)?;
    if !r.transitive {
        return Err(Error::PredicateFailed {
            op: "slice_decompose",
            predicate: "transitive",
        });
    }
    if !r.sequential {
        return Err(Error::PredicateFailed {
            op: "slice_decompose",
            predicate: "sequential",
        });
    }
    match g {
        FamilyDesc::Full => FamilyDesc::sliced(vec![Slice::new(
            ExtBound::NegInf,
            ExtBound::PosInf,
        )?]),
        FamilyDesc::OpenBand(lo, hi) => {
            FamilyDesc::sliced(vec![Slice::new(lo.clone(), hi.clone())?])
        }
        FamilyDesc::OrderInterval(ExtBound::NegInf, ExtBound::PosInf) => {
            FamilyDesc::sliced(vec![Slice::new(ExtBound::NegInf, ExtBound::PosInf)?])
        }
        FamilyDesc::Sliced(slices) => FamilyDesc::sliced(slices.clone()),
        FamilyDesc::Punctured(gg) => FamilyDesc::sliced(vec![
            Slice::new(ExtBound::NegInf, ExtBound::Fin(gg.clone()))?,
            Slice::new(ExtBound::Fin(gg.clone()), ExtBound::PosInf)?,
        ]),
        FamilyDesc::Empty => Err(Error::Unsupported {
            op: "slice_decompose",
            detail: "the empty family has no slices".into(),
        }),
        _ => Err(Error::Unsupported {
            op: "slice_decompose",
            detail: format!("components of {g} are not open bands"),
        }),
    }
}
