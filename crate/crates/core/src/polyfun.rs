//! Polygonal functions on `[0,1]`, sawtooth blocks, variation and Cauchy
//! names.
//!
//! A sawtooth `M_A(v, r)` has `r` symmetric triangular teeth of height `v`
//! and equal width on `A`: it is `0` at every tooth boundary and `v` at every
//! tooth midpoint, so its total variation is `2vr`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{bail, Result};
use crate::exactnum::{Partition, Rational};
use num_traits::ToPrimitive;

/// A function that can be evaluated exactly at rationals of `[0,1]`.
pub trait ExactFunction {
    fn eval(&self, x: &Rational) -> Result<Rational>;
}

/// A function that can be approximated at rationals to any precision.
///
/// `approx(x, n)` is within `2^-n` of the value at `x`.
pub trait RealFunction {
    fn approx(&self, x: &Rational, prec: u32) -> Result<Rational>;

    /// The exact value, when the function admits one.
    fn exact(&self, _x: &Rational) -> Option<Result<Rational>> {
        None
    }
}

impl<F: ExactFunction + ?Sized> RealFunction for F {
    fn approx(&self, x: &Rational, _prec: u32) -> Result<Rational> {
        self.eval(x)
    }

    fn exact(&self, x: &Rational) -> Option<Result<Rational>> {
        Some(self.eval(x))
    }
}

/// Adapter turning a closure into an [`ExactFunction`].
pub struct FromFn<F>(pub F);

impl<F: Fn(&Rational) -> Rational> ExactFunction for FromFn<F> {
    fn eval(&self, x: &Rational) -> Result<Rational> {
        Ok((self.0)(x))
    }
}

/// Exact sup-distance between two functions of the same representation.
pub trait SupDistance {
    fn sup_distance(&self, other: &Self) -> Result<Rational>;
}

fn check_unit(x: &Rational) -> Result<()> {
    if x.is_negative() || x > &Rational::one() {
        bail!(Range, "point {x} outside [0,1]");
    }
    Ok(())
}

/// `S_f(a, b) = (f(b) - f(a)) / (b - a)`.
pub fn slope<F: ExactFunction + ?Sized>(f: &F, a: &Rational, b: &Rational) -> Result<Rational> {
    if a == b {
        bail!(Invalid, "slope needs a != b (got {a} twice)");
    }
    Ok((f.eval(b)? - f.eval(a)?) / (b - a))
}

/// `V(f, Π)` together with the partition it was computed on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariationValue {
    pub value: Rational,
    pub partition: Partition,
}

/// `V(f, Π) = Σ |f(t_{i+1}) - f(t_i)|`.
pub fn variation<F: ExactFunction + ?Sized>(f: &F, partition: &Partition) -> Result<VariationValue> {
    let vals = partition.points().iter().map(|t| f.eval(t)).collect::<Result<Vec<_>>>()?;
    let value = vals.windows(2).map(|w| (&w[1] - &w[0]).abs()).sum();
    Ok(VariationValue { value, partition: partition.clone() })
}

/// A piecewise-linear function on `[0,1]` with rational breakpoints.
#[derive(Clone, PartialEq, Eq)]
pub struct PolygonalFunction {
    points: Vec<(Rational, Rational)>,
}

impl PolygonalFunction {
    /// Breakpoints must have strictly increasing `x` from `0` to `1`.
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self> {
        if points.len() < 2 {
            bail!(Invalid, "a polygonal function needs at least two breakpoints");
        }
        if !points[0].0.is_zero() || points[points.len() - 1].0 != Rational::one() {
            bail!(Invalid, "breakpoints must start at x = 0 and end at x = 1");
        }
        if let Some(w) = points.windows(2).find(|w| w[0].0 >= w[1].0) {
            bail!(Invalid, "breakpoint x-values not increasing at {}", w[1].0);
        }
        Ok(PolygonalFunction { points })
    }

    pub fn identity() -> Self {
        PolygonalFunction {
            points: alloc::vec![(Rational::zero(), Rational::zero()), (Rational::one(), Rational::one())],
        }
    }

    pub fn constant(c: Rational) -> Self {
        PolygonalFunction { points: alloc::vec![(Rational::zero(), c.clone()), (Rational::one(), c)] }
    }

    /// Samples `f` at the given points (which must include `0` and `1`).
    pub fn interpolate<F: ExactFunction + ?Sized>(f: &F, xs: &[Rational]) -> Result<Self> {
        let points = xs.iter().map(|x| Ok((x.clone(), f.eval(x)?))).collect::<Result<Vec<_>>>()?;
        PolygonalFunction::new(points)
    }

    /// `M_[a,b](v, r)` extended by zero to `[0,1]`.
    pub fn sawtooth(a: &Rational, b: &Rational, v: &Rational, r: u64) -> Result<Self> {
        Ok(SawtoothBlock::new(a.clone(), b.clone(), v.clone(), r)?.to_polygonal())
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    pub fn xs(&self) -> impl Iterator<Item = &Rational> {
        self.points.iter().map(|p| &p.0)
    }

    pub fn breakpoint_partition(&self) -> Partition {
        Partition::new(self.xs().cloned().collect()).expect("breakpoints are increasing")
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        check_unit(x)?;
        let i = self.points.partition_point(|p| &p.0 <= x);
        if i == self.points.len() {
            return Ok(self.points[i - 1].1.clone());
        }
        let (x0, y0) = &self.points[i - 1];
        if x0 == x {
            return Ok(y0.clone());
        }
        let (x1, y1) = &self.points[i];
        Ok(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
    }

    /// Adds breakpoints at `extra` without changing the function.
    pub fn refine<'a, I: IntoIterator<Item = &'a Rational>>(&self, extra: I) -> Result<Self> {
        let part = self.breakpoint_partition().refine(extra)?;
        PolygonalFunction::interpolate(self, part.points())
    }

    /// Drops breakpoints that lie on the segment through their neighbours.
    pub fn simplify(&self) -> Self {
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(self.points.len());
        for p in &self.points {
            while out.len() >= 2 {
                let (x0, y0) = &out[out.len() - 2];
                let (x1, y1) = &out[out.len() - 1];
                if (y1 - y0) * (&p.0 - x1) == (&p.1 - y1) * (x1 - x0) {
                    out.pop();
                } else {
                    break;
                }
            }
            out.push(p.clone());
        }
        PolygonalFunction { points: out }
    }

    fn combine(&self, other: &Self, op: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let xs: BTreeSet<&Rational> = self.xs().chain(other.xs()).collect();
        let points = xs
            .into_iter()
            .map(|x| {
                let y = op(&self.eval(x).expect("in range"), &other.eval(x).expect("in range"));
                (x.clone(), y)
            })
            .collect();
        PolygonalFunction { points }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PolygonalFunction { points: self.points.iter().map(|(x, y)| (x.clone(), y * c)).collect() }
    }

    /// Exact `sup |f - g|` over `[0,1]`, attained at a breakpoint of `f - g`.
    pub fn sup_distance(&self, other: &Self) -> Rational {
        self.sub(other).points.iter().map(|(_, y)| y.abs()).max().expect("nonempty")
    }

    pub fn sup_norm(&self) -> Rational {
        self.points.iter().map(|(_, y)| y.abs()).max().expect("nonempty")
    }

    /// Exact total variation, realized by the breakpoint partition.
    pub fn total_variation(&self) -> Rational {
        self.points.windows(2).map(|w| (&w[1].1 - &w[0].1).abs()).sum()
    }

    /// `t ↦ 𝐯_f(t)`, polygonal on the same breakpoints.
    pub fn running_variation(&self) -> Self {
        let mut acc = Rational::zero();
        let mut points = Vec::with_capacity(self.points.len());
        points.push((self.points[0].0.clone(), Rational::zero()));
        for w in self.points.windows(2) {
            acc += (&w[1].1 - &w[0].1).abs();
            points.push((w[1].0.clone(), acc.clone()));
        }
        PolygonalFunction { points }
    }

    /// Largest absolute segment slope, the Lipschitz constant of `f`.
    pub fn lipschitz(&self) -> Rational {
        self.points
            .windows(2)
            .map(|w| ((&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0)).abs())
            .max()
            .expect("nonempty")
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.points.windows(2).all(|w| w[0].1 <= w[1].1)
    }
}

impl ExactFunction for PolygonalFunction {
    fn eval(&self, x: &Rational) -> Result<Rational> {
        PolygonalFunction::eval(self, x)
    }
}

impl SupDistance for PolygonalFunction {
    fn sup_distance(&self, other: &Self) -> Result<Rational> {
        Ok(PolygonalFunction::sup_distance(self, other))
    }
}

impl fmt::Debug for PolygonalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Polygonal")?;
        f.debug_list().entries(self.points.iter().map(|(x, y)| (x, y))).finish()
    }
}

/// A closed-form sawtooth `M_[left,right](height, teeth)`, zero outside its
/// interval. Nothing is materialized, so tooth counts like `2^20` are cheap.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SawtoothBlock {
    left: Rational,
    right: Rational,
    height: Rational,
    teeth: u64,
}

impl SawtoothBlock {
    pub fn new(left: Rational, right: Rational, height: Rational, teeth: u64) -> Result<Self> {
        if left.is_negative() || right > Rational::one() {
            bail!(Range, "sawtooth interval [{left}, {right}] leaves [0,1]");
        }
        if left >= right {
            bail!(Invalid, "degenerate sawtooth interval [{left}, {right}]");
        }
        if !height.is_positive() {
            bail!(Invalid, "sawtooth height must be positive, got {height}");
        }
        if teeth == 0 {
            bail!(Invalid, "sawtooth needs at least one tooth");
        }
        Ok(SawtoothBlock { left, right, height, teeth })
    }

    pub fn left(&self) -> &Rational {
        &self.left
    }

    pub fn right(&self) -> &Rational {
        &self.right
    }

    pub fn height(&self) -> &Rational {
        &self.height
    }

    pub fn teeth(&self) -> u64 {
        self.teeth
    }

    pub fn width(&self) -> Rational {
        &self.right - &self.left
    }

    /// `2 v r`.
    pub fn variation(&self) -> Rational {
        Rational::from(2) * &self.height * Rational::from_integer(self.teeth)
    }

    /// `2 v r / |A|`, the slope of every tooth flank.
    pub fn lipschitz(&self) -> Rational {
        self.variation() / self.width()
    }

    /// Position of `x` in tooth units, clamped to `[0, r]`.
    fn tooth_coord(&self, x: &Rational) -> Rational {
        if x <= &self.left {
            return Rational::zero();
        }
        if x >= &self.right {
            return Rational::from_integer(self.teeth);
        }
        (x - &self.left) / self.width() * Rational::from_integer(self.teeth)
    }

    pub fn value_at(&self, x: &Rational) -> Rational {
        if x <= &self.left || x >= &self.right {
            return Rational::zero();
        }
        let t = self.tooth_coord(x);
        let frac = &t - Rational::from_integer(t.floor());
        let dist = (Rational::from(2) * frac - Rational::one()).abs();
        &self.height * (Rational::one() - dist)
    }

    /// `𝐯(x)` of the block alone: `2 v t` where `t` is the tooth coordinate.
    pub fn running_variation_at(&self, x: &Rational) -> Rational {
        Rational::from(2) * &self.height * self.tooth_coord(x)
    }

    /// The `j`-th of the `2r + 1` tooth-boundary and apex points.
    pub fn half_point(&self, j: u64) -> Rational {
        let step = self.width() / Rational::from_integer(2 * self.teeth);
        &self.left + step * Rational::from_integer(j)
    }

    /// The flank `[a, b]` (between a zero and an apex) containing `x`.
    pub fn flank_containing(&self, x: &Rational) -> Option<(Rational, Rational)> {
        if x < &self.left || x > &self.right {
            return None;
        }
        let t2 = self.tooth_coord(x) * Rational::from(2);
        let j = t2.floor().to_u64().expect("tooth index fits").min(2 * self.teeth - 1);
        Some((self.half_point(j), self.half_point(j + 1)))
    }

    /// Full breakpoint list, extended by zero to `[0,1]`.
    pub fn to_polygonal(&self) -> PolygonalFunction {
        let mut points = Vec::with_capacity(2 * self.teeth as usize + 3);
        if self.left.is_positive() {
            points.push((Rational::zero(), Rational::zero()));
        }
        for j in 0..=2 * self.teeth {
            let y = if j % 2 == 1 { self.height.clone() } else { Rational::zero() };
            points.push((self.half_point(j), y));
        }
        if self.right < Rational::one() {
            points.push((Rational::one(), Rational::zero()));
        }
        PolygonalFunction { points }
    }
}

impl ExactFunction for SawtoothBlock {
    fn eval(&self, x: &Rational) -> Result<Rational> {
        check_unit(x)?;
        Ok(self.value_at(x))
    }
}

/// A finite sum of sawtooth blocks with pairwise interior-disjoint intervals.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BlockFunction {
    blocks: Vec<SawtoothBlock>,
    prefix_variation: Vec<Rational>,
}

impl BlockFunction {
    pub fn new(mut blocks: Vec<SawtoothBlock>) -> Result<Self> {
        blocks.sort();
        if let Some(w) = blocks.windows(2).find(|w| w[0].right > w[1].left) {
            bail!(
                Invalid,
                "blocks [{}, {}] and [{}, {}] overlap",
                w[0].left,
                w[0].right,
                w[1].left,
                w[1].right
            );
        }
        let mut prefix_variation = Vec::with_capacity(blocks.len() + 1);
        let mut acc = Rational::zero();
        prefix_variation.push(acc.clone());
        for b in &blocks {
            acc += b.variation();
            prefix_variation.push(acc.clone());
        }
        Ok(BlockFunction { blocks, prefix_variation })
    }

    pub fn zero() -> Self {
        BlockFunction::new(Vec::new()).expect("empty")
    }

    pub fn blocks(&self) -> &[SawtoothBlock] {
        &self.blocks
    }

    /// The block whose closed interval contains `x`, if any.
    pub fn block_at(&self, x: &Rational) -> Option<&SawtoothBlock> {
        let i = self.blocks.partition_point(|b| &b.left <= x);
        if i == 0 {
            return None;
        }
        let b = &self.blocks[i - 1];
        (x <= &b.right).then_some(b)
    }

    pub fn value_at(&self, x: &Rational) -> Rational {
        self.block_at(x).map(|b| b.value_at(x)).unwrap_or_else(Rational::zero)
    }

    pub fn total_variation(&self) -> Rational {
        self.prefix_variation.last().expect("nonempty").clone()
    }

    pub fn running_variation_at(&self, x: &Rational) -> Rational {
        let done = self.blocks.partition_point(|b| &b.right <= x);
        let mut v = self.prefix_variation[done].clone();
        if let Some(b) = self.blocks.get(done) {
            if &b.left < x {
                v += b.running_variation_at(x);
            }
        }
        v
    }

    /// `𝐯_f` as a function.
    pub fn running_variation(&self) -> CumulativeVariation {
        CumulativeVariation(self.clone())
    }

    pub fn lipschitz(&self) -> Rational {
        self.blocks.iter().map(SawtoothBlock::lipschitz).max().unwrap_or_else(Rational::zero)
    }

    pub fn sup_norm(&self) -> Rational {
        self.blocks.iter().map(|b| b.height.clone()).max().unwrap_or_else(Rational::zero)
    }

    pub fn breakpoint_count(&self) -> u128 {
        self.blocks.iter().map(|b| 2 * b.teeth as u128 + 1).sum::<u128>() + 2
    }

    /// Materializes the function, refusing beyond `limit` breakpoints.
    pub fn to_polygonal(&self, limit: usize) -> Result<PolygonalFunction> {
        if self.breakpoint_count() > limit as u128 {
            bail!(Budget, "{} breakpoints exceed the limit {limit}", self.breakpoint_count());
        }
        let mut xs: BTreeSet<Rational> = BTreeSet::new();
        xs.insert(Rational::zero());
        xs.insert(Rational::one());
        for b in &self.blocks {
            for j in 0..=2 * b.teeth {
                xs.insert(b.half_point(j));
            }
        }
        let xs: Vec<Rational> = xs.into_iter().collect();
        PolygonalFunction::interpolate(self, &xs)
    }
}

/// Breakpoint budget used when overlapping blocks must be materialized to
/// compare them.
const CLUSTER_LIMIT: u128 = 1 << 22;

impl SupDistance for BlockFunction {
    /// Blocks shared by both functions cancel; the rest are grouped into
    /// overlapping clusters, each of which is compared at its breakpoints.
    fn sup_distance(&self, other: &Self) -> Result<Rational> {
        let mine: BTreeSet<&SawtoothBlock> = self.blocks.iter().collect();
        let theirs: BTreeSet<&SawtoothBlock> = other.blocks.iter().collect();
        let mut diff: Vec<(&SawtoothBlock, bool)> = mine
            .difference(&theirs)
            .map(|b| (*b, true))
            .chain(theirs.difference(&mine).map(|b| (*b, false)))
            .collect();
        diff.sort_by(|a, b| a.0.cmp(b.0));
        let mut best = Rational::zero();
        let mut i = 0;
        while i < diff.len() {
            let mut j = i + 1;
            let mut reach = diff[i].0.right.clone();
            while j < diff.len() && diff[j].0.left < reach {
                reach = reach.max(diff[j].0.right.clone());
                j += 1;
            }
            let cluster = &diff[i..j];
            if cluster.len() == 1 {
                best = best.max(cluster[0].0.height.clone());
            } else {
                let count: u128 = cluster.iter().map(|(b, _)| 2 * b.teeth as u128 + 1).sum();
                if count > CLUSTER_LIMIT {
                    bail!(Budget, "overlapping blocks need {count} breakpoints to compare");
                }
                let mut xs: BTreeSet<Rational> = BTreeSet::new();
                for (b, _) in cluster {
                    for k in 0..=2 * b.teeth {
                        xs.insert(b.half_point(k));
                    }
                }
                for x in &xs {
                    let d: Rational = cluster
                        .iter()
                        .map(|(b, plus)| if *plus { b.value_at(x) } else { -b.value_at(x) })
                        .sum();
                    best = best.max(d.abs());
                }
            }
            i = j;
        }
        Ok(best)
    }
}

impl ExactFunction for BlockFunction {
    fn eval(&self, x: &Rational) -> Result<Rational> {
        check_unit(x)?;
        Ok(self.value_at(x))
    }
}

/// The running variation `𝐯_f` of a [`BlockFunction`].
#[derive(Clone, Debug)]
pub struct CumulativeVariation(pub BlockFunction);

impl ExactFunction for CumulativeVariation {
    fn eval(&self, x: &Rational) -> Result<Rational> {
        check_unit(x)?;
        Ok(self.0.running_variation_at(x))
    }
}

/// The first violating pair of a Cauchy-name check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CauchyViolation {
    pub s: usize,
    pub r: usize,
    pub distance: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CauchyReport {
    pub up_to: usize,
    pub pairs_checked: usize,
    pub violation: Option<CauchyViolation>,
}

impl CauchyReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

/// A materialized prefix `f_0, ..., f_S` of a Cauchy name.
#[derive(Clone, Debug)]
pub struct CauchyName<F> {
    stages: Vec<F>,
}

impl<F> CauchyName<F> {
    pub fn new(stages: Vec<F>) -> Result<Self> {
        if stages.is_empty() {
            bail!(Invalid, "a Cauchy name needs at least one stage");
        }
        Ok(CauchyName { stages })
    }

    pub fn stages(&self) -> &[F] {
        &self.stages
    }

    pub fn stage(&self, s: usize) -> Result<&F> {
        match self.stages.get(s) {
            Some(f) => Ok(f),
            None => bail!(Budget, "stage {s} not materialized (have {})", self.stages.len()),
        }
    }

    /// Highest materialized stage.
    pub fn depth(&self) -> usize {
        self.stages.len() - 1
    }
}

impl<F: SupDistance> CauchyName<F> {
    /// Checks `sup |f_s - f_r| <= 2^-s` for every `s < r <= up_to`.
    pub fn validate(&self, up_to: usize) -> Result<CauchyReport> {
        if up_to > self.depth() {
            bail!(Budget, "stage {up_to} not materialized (have {})", self.stages.len());
        }
        let mut pairs = 0;
        for s in 0..up_to {
            let bound = Rational::pow2(-(s as i64));
            for r in s + 1..=up_to {
                pairs += 1;
                let d = self.stages[s].sup_distance(&self.stages[r])?;
                if d > bound {
                    return Ok(CauchyReport {
                        up_to,
                        pairs_checked: pairs,
                        violation: Some(CauchyViolation { s, r, distance: d }),
                    });
                }
            }
        }
        Ok(CauchyReport { up_to, pairs_checked: pairs, violation: None })
    }
}

impl<F: ExactFunction> RealFunction for CauchyName<F> {
    /// Stage `n + 1` is within `2^-(n+1)` of the limit.
    fn approx(&self, x: &Rational, prec: u32) -> Result<Rational> {
        self.stage(prec as usize + 1)?.eval(x)
    }
}
