//! Piecewise-linear rational functions on a bounded closed interval.
//!
//! A [`PLFunc`] is stored in canonical form: a strictly increasing list of
//! breakpoints whose first and last abscissae are the domain endpoints, with
//! no collinear interior breakpoint. Two values of this type compare equal
//! exactly when they denote the same function, so `PLFunc` can be used as a
//! set/map key.
//!
//! [`ExtBound`] extends `PLFunc` with whole-function `-inf` / `+inf` bounds
//! for describing one-sided and two-sided bands.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};
use crate::rat::{rat, Rat};
use crate::realset::RealSet;

/// A bounded closed interval `[lo, hi]` with `lo < hi`, the common domain of
/// all functions and sets in one computation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Domain {
    lo: Rat,
    hi: Rat,
}

impl Domain {
    /// Creates `[lo, hi]`; rejects `lo >= hi`.
    pub fn new(lo: Rat, hi: Rat) -> Result<Self> {
        if lo >= hi {
            return Err(Error::InvalidDomain(format!(
                "need lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Domain { lo, hi })
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    /// Closed containment test.
    pub fn contains(&self, x: &Rat) -> bool {
        *x >= self.lo && *x <= self.hi
    }

    pub fn length(&self) -> Rat {
        &self.hi - &self.lo
    }

    /// Errors unless `x` lies in the domain.
    pub fn check_contains(&self, x: &Rat, what: &str) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutsideDomain(format!("{what} {x} not in {self}")))
        }
    }

    /// Errors unless the two domains coincide.
    pub fn check_same(&self, other: &Domain) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::DomainMismatch(format!("{self} vs {other}")))
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Pointwise combination operators for two functions on the same domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineOp {
    Add,
    Sub,
    Min,
    Max,
    /// Pointwise average `(f + g) / 2`.
    Avg,
}

/// A continuous piecewise-linear function in canonical breakpoint form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PLFunc {
    /// Strictly increasing in the first coordinate; at least two entries;
    /// no interior point collinear with its neighbours.
    points: Vec<(Rat, Rat)>,
}

impl PLFunc {
    /// Builds a function from breakpoints, canonicalizing the representation.
    ///
    /// Requires at least two points with strictly increasing abscissae. The
    /// first and last abscissae become the domain endpoints.
    pub fn new(points: Vec<(Rat, Rat)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidBreakpoints(format!(
                "need at least 2 breakpoints, got {}",
                points.len()
            )));
        }
        for w in points.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidBreakpoints(format!(
                    "abscissae must be strictly increasing, got {} then {}",
                    w[0].0, w[1].0
                )));
            }
        }
        Ok(PLFunc {
            points: canonicalize(points),
        })
    }

    /// The constant function `y` on `domain`.
    pub fn constant(domain: &Domain, y: Rat) -> Self {
        PLFunc {
            points: vec![(domain.lo().clone(), y.clone()), (domain.hi().clone(), y)],
        }
    }

    /// The affine function through `(lo, y_lo)` and `(hi, y_hi)`.
    pub fn affine(domain: &Domain, y_lo: Rat, y_hi: Rat) -> Self {
        PLFunc {
            points: vec![
                (domain.lo().clone(), y_lo),
                (domain.hi().clone(), y_hi),
            ],
        }
    }

    /// Interpolates the given values at grid points, extended as constants to
    /// the domain endpoints. `xs` must be strictly increasing and inside the
    /// domain; `ys` matches `xs` in length.
    pub fn through_points(domain: &Domain, xs: &[Rat], ys: &[Rat]) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidBreakpoints(format!(
                "{} abscissae but {} values",
                xs.len(),
                ys.len()
            )));
        }
        if xs.is_empty() {
            return Ok(PLFunc::constant(domain, rat(0)));
        }
        for w in xs.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidBreakpoints(
                    "grid abscissae must be strictly increasing".into(),
                ));
            }
        }
        for x in xs {
            domain.check_contains(x, "grid point")?;
        }
        let mut pts: Vec<(Rat, Rat)> = Vec::with_capacity(xs.len() + 2);
        if xs[0] != *domain.lo() {
            pts.push((domain.lo().clone(), ys[0].clone()));
        }
        for (x, y) in xs.iter().zip(ys.iter()) {
            pts.push((x.clone(), y.clone()));
        }
        if xs[xs.len() - 1] != *domain.hi() {
            pts.push((domain.hi().clone(), ys[ys.len() - 1].clone()));
        }
        PLFunc::new(pts)
    }

    pub fn breakpoints(&self) -> &[(Rat, Rat)] {
        &self.points
    }

    pub fn domain(&self) -> Domain {
        Domain {
            lo: self.points[0].0.clone(),
            hi: self.points[self.points.len() - 1].0.clone(),
        }
    }

    /// Exact evaluation; errors outside the domain.
    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        let n = self.points.len();
        if *x < self.points[0].0 || *x > self.points[n - 1].0 {
            return Err(Error::OutsideDomain(format!(
                "{x} not in {}",
                self.domain()
            )));
        }
        // Index of the last breakpoint with abscissa <= x.
        let i = match self
            .points
            .binary_search_by(|p| p.0.partial_cmp(x).unwrap_or(Ordering::Less))
        {
            Ok(i) => return Ok(self.points[i].1.clone()),
            Err(i) => i - 1,
        };
        let (x0, y0) = &self.points[i];
        let (x1, y1) = &self.points[i + 1];
        Ok(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
    }

    /// Pointwise combination of two functions on the same domain.
    ///
    /// `Min`/`Max` insert exact crossing points so the result is again a
    /// canonical piecewise-linear function.
    pub fn combine(&self, other: &PLFunc, op: CombineOp) -> Result<PLFunc> {
        self.domain().check_same(&other.domain())?;
        let xs = merge_abscissae(&self.points, &other.points);
        let mut nodes: Vec<(Rat, Rat, Rat)> = Vec::with_capacity(xs.len());
        for x in xs {
            let a = self.eval(&x)?;
            let b = other.eval(&x)?;
            nodes.push((x, a, b));
        }
        let mut out: Vec<(Rat, Rat)> = Vec::with_capacity(nodes.len());
        let two = rat(2);
        let emit = |x: &Rat, a: &Rat, b: &Rat, out: &mut Vec<(Rat, Rat)>| {
            let y = match op {
                CombineOp::Add => a + b,
                CombineOp::Sub => a - b,
                CombineOp::Min => if a <= b { a.clone() } else { b.clone() },
                CombineOp::Max => if a >= b { a.clone() } else { b.clone() },
                CombineOp::Avg => (a + b) / &two,
            };
            out.push((x.clone(), y));
        };
        for i in 0..nodes.len() {
            if matches!(op, CombineOp::Min | CombineOp::Max) && i > 0 {
                // Insert the crossing of the two graphs inside the previous
                // segment when the difference changes strict sign.
                let (x0, a0, b0) = &nodes[i - 1];
                let (x1, a1, b1) = &nodes[i];
                let d0 = a0 - b0;
                let d1 = a1 - b1;
                let s0 = d0.cmp(&rat(0));
                let s1 = d1.cmp(&rat(0));
                if (s0 == Ordering::Less && s1 == Ordering::Greater)
                    || (s0 == Ordering::Greater && s1 == Ordering::Less)
                {
                    let t = &d0 / (&d0 - &d1);
                    let xc = x0 + (x1 - x0) * &t;
                    let yc = self.eval(&xc)?;
                    out.push((xc, yc));
                }
            }
            let (x, a, b) = &nodes[i];
            emit(x, a, b, &mut out);
        }
        PLFunc::new(out)
    }

    pub fn add(&self, other: &PLFunc) -> Result<PLFunc> {
        self.combine(other, CombineOp::Add)
    }

    pub fn sub(&self, other: &PLFunc) -> Result<PLFunc> {
        self.combine(other, CombineOp::Sub)
    }

    pub fn pointwise_min(&self, other: &PLFunc) -> Result<PLFunc> {
        self.combine(other, CombineOp::Min)
    }

    pub fn pointwise_max(&self, other: &PLFunc) -> Result<PLFunc> {
        self.combine(other, CombineOp::Max)
    }

    pub fn avg(&self, other: &PLFunc) -> Result<PLFunc> {
        self.combine(other, CombineOp::Avg)
    }

    /// Adds the constant `c` pointwise.
    pub fn offset(&self, c: &Rat) -> PLFunc {
        PLFunc {
            points: self
                .points
                .iter()
                .map(|(x, y)| (x.clone(), y + c))
                .collect(),
        }
    }

    /// Multiplies all values by the constant `c` pointwise.
    pub fn scale(&self, c: &Rat) -> PLFunc {
        // Abscissae are untouched, so revalidation cannot fail; scaling by
        // zero may merge breakpoints, which `new` re-canonicalizes.
        PLFunc::new(
            self.points
                .iter()
                .map(|(x, y)| (x.clone(), y * c))
                .collect(),
        )
        .expect("scaling keeps abscissae strictly increasing")
    }

    /// Least value attained on the domain.
    pub fn min_value(&self) -> Rat {
        self.points.iter().map(|p| &p.1).min().unwrap().clone()
    }

    /// Greatest value attained on the domain.
    pub fn max_value(&self) -> Rat {
        self.points.iter().map(|p| &p.1).max().unwrap().clone()
    }

    /// `self <= other` everywhere.
    pub fn pointwise_le(&self, other: &PLFunc) -> Result<bool> {
        let d = self.sub(other)?;
        Ok(d.max_value() <= rat(0))
    }

    /// `self < other` everywhere.
    pub fn pointwise_lt(&self, other: &PLFunc) -> Result<bool> {
        let d = self.sub(other)?;
        Ok(d.max_value() < rat(0))
    }

    /// The set `{x : self(x) = other(x)}` (always closed).
    pub fn eq_set(&self, other: &PLFunc) -> Result<RealSet> {
        Ok(self.sign_partition(other)?.equal)
    }

    /// Splits the domain into the three sets where `self` is below, equal to,
    /// and above `other`. The equal part is closed, the other two are open in
    /// the domain, and the three partition the domain exactly.
    pub fn sign_partition(&self, other: &PLFunc) -> Result<SignSets> {
        let d = self.sub(other)?;
        let domain = d.domain();
        let zero = rat(0);
        // Collect maximal runs of each sign by walking nodes and inserting
        // zero crossings.
        let pts = d.breakpoints();
        let mut events: Vec<(Rat, Ordering)> = Vec::new();
        for i in 0..pts.len() {
            if i > 0 {
                let (x0, y0) = &pts[i - 1];
                let (x1, y1) = &pts[i];
                let s0 = y0.cmp(&zero);
                let s1 = y1.cmp(&zero);
                if (s0 == Ordering::Less && s1 == Ordering::Greater)
                    || (s0 == Ordering::Greater && s1 == Ordering::Less)
                {
                    let t = y0 / (y0 - y1);
                    let xc = x0 + (x1 - x0) * &t;
                    events.push((xc, Ordering::Equal));
                }
            }
            events.push((pts[i].0.clone(), pts[i].1.cmp(&zero)));
        }
        // Between consecutive events the sign is constant and equals the sign
        // at both endpoints unless one endpoint is zero; take the non-zero
        // endpoint sign, or zero if both are (a whole equal segment).
        let mut below: Vec<(Rat, Rat, bool, bool)> = Vec::new();
        let mut equal: Vec<(Rat, Rat, bool, bool)> = Vec::new();
        let mut above: Vec<(Rat, Rat, bool, bool)> = Vec::new();
        let push_point = |x: &Rat, bucket: &mut Vec<(Rat, Rat, bool, bool)>| {
            bucket.push((x.clone(), x.clone(), true, true));
        };
        for i in 0..events.len() {
            let (x, s) = &events[i];
            match s {
                Ordering::Less => push_point(x, &mut below),
                Ordering::Equal => push_point(x, &mut equal),
                Ordering::Greater => push_point(x, &mut above),
            }
            if i + 1 < events.len() {
                let (x1, s1) = &events[i + 1];
                let seg_sign = match (s, s1) {
                    (Ordering::Equal, Ordering::Equal) => Ordering::Equal,
                    (Ordering::Equal, t) => *t,
                    (t, _) => *t,
                };
                let seg = (x.clone(), x1.clone(), false, false);
                match seg_sign {
                    Ordering::Less => below.push(seg),
                    Ordering::Equal => equal.push(seg),
                    Ordering::Greater => above.push(seg),
                }
            }
        }
        Ok(SignSets {
            below: RealSet::from_raw_parts(domain.clone(), below)?,
            equal: RealSet::from_raw_parts(domain.clone(), equal)?,
            above: RealSet::from_raw_parts(domain, above)?,
        })
    }
}

impl fmt::Display for PLFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pl[")?;
        for (i, (x, y)) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({x}, {y})")?;
        }
        write!(f, "]")
    }
}

/// The below/equal/above decomposition produced by
/// [`PLFunc::sign_partition`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignSets {
    pub below: RealSet,
    pub equal: RealSet,
    pub above: RealSet,
}

fn canonicalize(points: Vec<(Rat, Rat)>) -> Vec<(Rat, Rat)> {
    let mut out: Vec<(Rat, Rat)> = Vec::with_capacity(points.len());
    for p in points {
        while out.len() >= 2 {
            let (x0, y0) = &out[out.len() - 2];
            let (x1, y1) = &out[out.len() - 1];
            // Drop the middle point when (x0,y0), (x1,y1), p are collinear.
            let lhs = (y1 - y0) * (&p.0 - x1);
            let rhs = (&p.1 - y1) * (x1 - x0);
            if lhs == rhs {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

fn merge_abscissae(a: &[(Rat, Rat)], b: &[(Rat, Rat)]) -> Vec<Rat> {
    let mut xs: Vec<Rat> = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(p), Some(q)) => match p.0.cmp(&q.0) {
                Ordering::Less => {
                    i += 1;
                    p.0.clone()
                }
                Ordering::Greater => {
                    j += 1;
                    q.0.clone()
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    p.0.clone()
                }
            },
            (Some(p), None) => {
                i += 1;
                p.0.clone()
            }
            (None, Some(q)) => {
                j += 1;
                q.0.clone()
            }
            (None, None) => unreachable!(),
        };
        xs.push(next);
    }
    xs
}

/// A whole-function bound: a finite piecewise-linear function or one of the
/// two improper bounds `-inf` / `+inf`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtBound {
    NegInf,
    Fin(PLFunc),
    PosInf,
}

impl ExtBound {
    pub fn as_fin(&self) -> Option<&PLFunc> {
        match self {
            ExtBound::Fin(f) => Some(f),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtBound::Fin(_))
    }

    /// Domain of the finite part, if any.
    pub fn domain(&self) -> Option<Domain> {
        self.as_fin().map(|f| f.domain())
    }

    /// `self <= other` pointwise (infinite bounds compare as expected).
    pub fn pointwise_le(&self, other: &ExtBound) -> Result<bool> {
        Ok(match (self, other) {
            (ExtBound::NegInf, _) | (_, ExtBound::PosInf) => true,
            (ExtBound::PosInf, _) | (_, ExtBound::NegInf) => false,
            (ExtBound::Fin(a), ExtBound::Fin(b)) => a.pointwise_le(b)?,
        })
    }

    /// `self < other` pointwise. `NegInf < NegInf` is false, so a band with
    /// two equal infinite bounds is correctly reported empty.
    pub fn pointwise_lt(&self, other: &ExtBound) -> Result<bool> {
        Ok(match (self, other) {
            (ExtBound::NegInf, ExtBound::NegInf) | (ExtBound::PosInf, ExtBound::PosInf) => false,
            (ExtBound::NegInf, _) | (_, ExtBound::PosInf) => true,
            (ExtBound::PosInf, _) | (_, ExtBound::NegInf) => false,
            (ExtBound::Fin(a), ExtBound::Fin(b)) => a.pointwise_lt(b)?,
        })
    }

    /// Value at `x`, `None` for an infinite bound.
    pub fn eval(&self, x: &Rat) -> Result<Option<Rat>> {
        match self {
            ExtBound::Fin(f) => Ok(Some(f.eval(x)?)),
            _ => Ok(None),
        }
    }

    /// Pointwise maximum of two bounds.
    pub fn pointwise_max(&self, other: &ExtBound) -> Result<ExtBound> {
        Ok(match (self, other) {
            (ExtBound::PosInf, _) | (_, ExtBound::PosInf) => ExtBound::PosInf,
            (ExtBound::NegInf, b) => b.clone(),
            (a, ExtBound::NegInf) => a.clone(),
            (ExtBound::Fin(a), ExtBound::Fin(b)) => ExtBound::Fin(a.pointwise_max(b)?),
        })
    }

    /// Pointwise minimum of two bounds.
    pub fn pointwise_min(&self, other: &ExtBound) -> Result<ExtBound> {
        Ok(match (self, other) {
            (ExtBound::NegInf, _) | (_, ExtBound::NegInf) => ExtBound::NegInf,
            (ExtBound::PosInf, b) => b.clone(),
            (a, ExtBound::PosInf) => a.clone(),
            (ExtBound::Fin(a), ExtBound::Fin(b)) => ExtBound::Fin(a.pointwise_min(b)?),
        })
    }

    /// A canonical function strictly between two bounds that bound a
    /// non-empty band: the average of two finite bounds, a unit offset from a
    /// single finite bound, or zero when both bounds are infinite.
    pub fn band_midline(lo: &ExtBound, hi: &ExtBound, domain: &Domain) -> Result<PLFunc> {
        Ok(match (lo, hi) {
            (ExtBound::Fin(a), ExtBound::Fin(b)) => a.avg(b)?,
            (ExtBound::Fin(a), ExtBound::PosInf) => a.offset(&rat(1)),
            (ExtBound::NegInf, ExtBound::Fin(b)) => b.offset(&rat(-1)),
            (ExtBound::NegInf, ExtBound::PosInf) => PLFunc::constant(domain, rat(0)),
            _ => {
                return Err(Error::EmptyBand(format!(
                    "no function lies strictly between {lo} and {hi}"
                )))
            }
        })
    }
}

impl fmt::Display for ExtBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtBound::NegInf => write!(f, "-inf"),
            ExtBound::PosInf => write!(f, "+inf"),
            ExtBound::Fin(g) => write!(f, "{g}"),
        }
    }
}
