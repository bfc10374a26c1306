//! Rational presentations of functions on `[0,1] ∩ ℚ`.
//!
//! A presentation `Z` answers threshold queries `(p, q)`: it must contain
//! `(p, q)` when `g(p) < q` and must omit it when `g(p) > q`. The function is
//! recovered as `g_Z(p) = inf { q : (p, q) ∈ Z }`.
//!
//! Points and thresholds are numbered once and for all:
//!
//! * [`unit_rational`]: `0, 1, 1/2, 1/3, 2/3, 1/4, 3/4, ...` (by
//!   denominator, then numerator).
//! * [`signed_rational`]: `-1, 0, 1`, then for each height `h >= 2` the
//!   fractions `a/b` in lowest terms with `max(|a|, b) = h`, ascending.
//! * [`PairEnumeration`]: Cantor pairing of the two.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::error::{bail, Error, Result};
use crate::exactnum::{gcd_u64, pair, totient, unpair, Partition, Rational};
use crate::polyfun::{ExactFunction, RealFunction};
use crate::Verdict;

/// Answer of a presentation to a threshold query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    In,
    Out,
    /// The query could not be settled within the presentation's budget.
    Undecided,
}

impl Membership {
    pub fn from_bool(member: bool) -> Self {
        if member {
            Membership::In
        } else {
            Membership::Out
        }
    }
}

/// A (possibly budgeted) rational presentation.
pub trait Presentation {
    fn member(&self, p: &Rational, q: &Rational) -> Result<Membership>;
}

impl<P: Presentation + ?Sized> Presentation for &P {
    fn member(&self, p: &Rational, q: &Rational) -> Result<Membership> {
        (**self).member(p, q)
    }
}

fn to_u64(x: &BigInt, what: &str) -> Result<u64> {
    match x.to_u64() {
        Some(v) => Ok(v),
        None => bail!(Range, "{what} {x} too large to index"),
    }
}

/// The `i`-th element of the canonical listing of `[0,1] ∩ ℚ`.
pub fn unit_rational(i: u64) -> Rational {
    match i {
        0 => Rational::zero(),
        1 => Rational::one(),
        _ => {
            let mut rem = i - 2;
            let mut d = 2u64;
            loop {
                let phi = totient(d);
                if rem < phi {
                    let a = (1..d).filter(|&a| gcd_u64(a, d) == 1).nth(rem as usize).expect("rank < phi");
                    return Rational::new(a as i64, d as i64);
                }
                rem -= phi;
                d += 1;
            }
        }
    }
}

/// Inverse of [`unit_rational`].
pub fn unit_rational_index(p: &Rational) -> Result<u64> {
    if p.is_negative() || p > &Rational::one() {
        bail!(Range, "point {p} outside [0,1]");
    }
    if p.is_zero() {
        return Ok(0);
    }
    if p == &Rational::one() {
        return Ok(1);
    }
    let a = to_u64(p.numer(), "numerator")?;
    let b = to_u64(p.denom(), "denominator")?;
    let before: u64 = (2..b).map(totient).sum();
    let rank = (1..a).filter(|&k| gcd_u64(k, b) == 1).count() as u64;
    Ok(2 + before + rank)
}

fn height(q: &Rational) -> BigInt {
    core::cmp::max(q.numer().abs(), q.denom().clone())
}

fn height_level(h: u64) -> Vec<Rational> {
    let hi = h as i64;
    let mut level: Vec<Rational> = Vec::with_capacity(4 * totient(h) as usize);
    for a in -(hi - 1)..hi {
        if gcd_u64(a.unsigned_abs(), h) == 1 {
            level.push(Rational::new(a, hi));
        }
    }
    for b in 1..hi {
        if gcd_u64(b as u64, h) == 1 {
            level.push(Rational::new(hi, b));
            level.push(Rational::new(-hi, b));
        }
    }
    level.sort();
    level
}

/// The `j`-th element of the canonical listing of `ℚ` by height.
pub fn signed_rational(j: u64) -> Rational {
    if j < 3 {
        return Rational::from(j as i64 - 1);
    }
    let mut rem = j - 3;
    let mut h = 2u64;
    loop {
        let count = 4 * totient(h);
        if rem < count {
            return height_level(h).swap_remove(rem as usize);
        }
        rem -= count;
        h += 1;
    }
}

/// Inverse of [`signed_rational`].
pub fn signed_rational_index(q: &Rational) -> Result<u64> {
    let h = to_u64(&height(q), "height")?;
    if h == 1 {
        return Ok((q.numer().to_i64().expect("height one") + 1) as u64);
    }
    let before: u64 = (2..h).map(|g| 4 * totient(g)).sum();
    let rank = height_level(h).binary_search(q).expect("q has height h");
    Ok(3 + before + rank as u64)
}

/// The listing `n ↦ (p_n, q_n)` of `([0,1] ∩ ℚ) × ℚ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PairEnumeration;

impl PairEnumeration {
    pub fn get(&self, n: u64) -> (Rational, Rational) {
        let (i, j) = unpair(n);
        (unit_rational(i), signed_rational(j))
    }

    pub fn index(&self, p: &Rational, q: &Rational) -> Result<u64> {
        let i = unit_rational_index(p)?;
        let j = signed_rational_index(q)?;
        match i.checked_add(j) {
            Some(s) if s < (1 << 31) => Ok(pair(i, j)),
            _ => bail!(Range, "pair ({p}, {q}) too large to index"),
        }
    }

    /// The index of `(p, q)` when it is below `bound`, without computing
    /// large indices.
    pub fn index_below(&self, p: &Rational, q: &Rational, bound: u64) -> Result<Option<u64>> {
        if p.is_negative() || p > &Rational::one() {
            bail!(Range, "point {p} outside [0,1]");
        }
        // unit index >= denominator, signed index >= 4 (height - 2) + 3
        let den_big = p.denom() >= &BigInt::from(bound.max(2));
        let h = height(q);
        let h_big = h > BigInt::from(bound / 4 + 2);
        if den_big || h_big {
            return Ok(None);
        }
        let n = self.index(p, q)?;
        Ok((n < bound).then_some(n))
    }

    /// The first `n` pairs.
    pub fn prefix(&self, n: u64) -> Vec<(Rational, Rational)> {
        (0..n).map(|i| self.get(i)).collect()
    }
}

/// Witness search effort for [`gz_bracket`] and the checks built on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Largest `e` tried when looking for witnesses `±2^e`.
    pub max_exponent: u32,
    /// Largest bisection precision.
    pub max_precision: u32,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_exponent: 32, max_precision: 40 }
    }
}

/// `Z = { (p, q) : f(p) < q }` for a function with exact values.
pub struct ExactPresentation<F>(pub F);

impl<F: ExactFunction> Presentation for ExactPresentation<F> {
    fn member(&self, p: &Rational, q: &Rational) -> Result<Membership> {
        Ok(Membership::from_bool(&self.0.eval(p)? < q))
    }
}

/// A presentation given by a closure.
pub struct PredicatePresentation<F>(pub F);

impl<F: Fn(&Rational, &Rational) -> Membership> Presentation for PredicatePresentation<F> {
    fn member(&self, p: &Rational, q: &Rational) -> Result<Membership> {
        Ok((self.0)(p, q))
    }
}

/// A finite table of decided pairs; everything else is undecided.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TablePresentation {
    entries: BTreeMap<(Rational, Rational), bool>,
}

impl TablePresentation {
    pub fn new() -> Self {
        TablePresentation::default()
    }

    pub fn insert(&mut self, p: Rational, q: Rational, member: bool) -> Result<()> {
        if let Some(&old) = self.entries.get(&(p.clone(), q.clone())) {
            if old != member {
                bail!(Invalid, "pair ({p}, {q}) given both memberships");
            }
        }
        self.entries.insert((p, q), member);
        Ok(())
    }

    /// Builds the table from indexed rows, checking each row against the
    /// canonical enumeration.
    pub fn from_indexed(rows: &[(u64, Rational, Rational, bool)]) -> Result<Self> {
        let e = PairEnumeration;
        let mut t = TablePresentation::new();
        for (n, p, q, m) in rows {
            let (ep, eq) = e.get(*n);
            if &ep != p || &eq != q {
                bail!(Invalid, "row {n} names ({p}, {q}) but the enumeration gives ({ep}, {eq})");
            }
            t.insert(p.clone(), q.clone(), *m)?;
        }
        Ok(t)
    }

    /// Queries `z` on the first `n` enumerated pairs; undecided pairs are
    /// left out.
    pub fn materialize<P: Presentation + ?Sized>(z: &P, n: u64) -> Result<Self> {
        let mut t = TablePresentation::new();
        for (p, q) in PairEnumeration.prefix(n) {
            match z.member(&p, &q)? {
                Membership::In => t.insert(p, q, true)?,
                Membership::Out => t.insert(p, q, false)?,
                Membership::Undecided => {}
            }
        }
        Ok(t)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Rational, &Rational, bool)> {
        self.entries.iter().map(|((p, q), m)| (p, q, *m))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Presentation for TablePresentation {
    fn member(&self, p: &Rational, q: &Rational) -> Result<Membership> {
        Ok(match self.entries.get(&(p.clone(), q.clone())) {
            Some(&m) => Membership::from_bool(m),
            None => Membership::Undecided,
        })
    }
}

/// Brackets `[lo, hi]` around `g_Z(p)` with `hi - lo <= 2^{1-n}`.
///
/// `lo` is an out-witness and `hi` an in-witness, so `lo <= g_Z(p) <= hi`.
pub fn gz_bracket<P: Presentation + ?Sized>(
    z: &P,
    p: &Rational,
    n: u32,
    budget: SearchBudget,
) -> Result<(Rational, Rational)> {
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    let mut candidates = alloc::vec![Rational::zero()];
    for e in 0..=budget.max_exponent {
        candidates.push(Rational::pow2(e as i64));
        candidates.push(-Rational::pow2(e as i64));
    }
    for q in candidates {
        if lo.is_some() && hi.is_some() {
            break;
        }
        match z.member(p, &q)? {
            Membership::In => {
                if hi.as_ref().is_none_or(|h| &q < h) {
                    hi = Some(q);
                }
            }
            Membership::Out => {
                if lo.as_ref().is_none_or(|l| &q > l) {
                    lo = Some(q);
                }
            }
            Membership::Undecided => {}
        }
    }
    let (mut lo, mut hi) = match (lo, hi) {
        (Some(l), Some(h)) => (l, h),
        (None, _) => bail!(Budget, "no out-witness for p = {p} within ±2^{}", budget.max_exponent),
        (_, None) => bail!(Budget, "no in-witness for p = {p} within ±2^{}", budget.max_exponent),
    };
    if lo > hi {
        bail!(Invalid, "presentation not monotone at p = {p}: ({p}, {hi}) in but ({p}, {lo}) out");
    }
    let target = Rational::pow2(1 - n as i64);
    let floor = Rational::pow2(-(budget.max_precision as i64));
    while &hi - &lo > target {
        if &hi - &lo <= floor {
            bail!(Budget, "bisection at p = {p} reached precision 2^-{}", budget.max_precision);
        }
        let w = &hi - &lo;
        let probes = [
            &lo + &w * Rational::new(1, 2),
            &lo + &w * Rational::new(1, 3),
            &lo + &w * Rational::new(2, 3),
        ];
        let mut moved = false;
        for q in probes {
            match z.member(p, &q)? {
                Membership::In => {
                    hi = q;
                    moved = true;
                    break;
                }
                Membership::Out => {
                    lo = q;
                    moved = true;
                    break;
                }
                Membership::Undecided => {}
            }
        }
        if !moved {
            bail!(Budget, "membership undecided near p = {p} within [{lo}, {hi}]");
        }
    }
    Ok((lo, hi))
}

/// `q` with `|q - g_Z(p)| <= 2^-n`.
pub fn gz_eval<P: Presentation + ?Sized>(z: &P, p: &Rational, n: u32, budget: SearchBudget) -> Result<Rational> {
    let (lo, hi) = gz_bracket(z, p, n, budget)?;
    Ok(lo.midpoint(&hi))
}

/// `g_Z` viewed as an approximable function.
pub struct PresentedFunction<P> {
    pub z: P,
    pub budget: SearchBudget,
}

impl<P: Presentation> RealFunction for PresentedFunction<P> {
    fn approx(&self, x: &Rational, prec: u32) -> Result<Rational> {
        gz_eval(&self.z, x, prec, self.budget)
    }
}

/// A clause of the presentation definition that failed on the sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PresentationViolation {
    /// Clause (i): no sampled threshold is in (`missing_in`) or out.
    NoWitness { p: Rational, missing_in: bool },
    /// Clause (ii): `(p, q_in) ∈ Z` but `(p, q_out) ∉ Z` with `q_in < q_out`.
    NotMonotone { p: Rational, q_in: Rational, q_out: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationReport {
    pub verdict: Verdict,
    pub pairs_checked: usize,
    pub undecided: usize,
    pub violations: Vec<PresentationViolation>,
}

/// Checks both clauses of the definition on `points × thresholds`.
///
/// Undecided answers are skipped; a point whose only missing witness is
/// hidden behind undecided answers makes the verdict undecided.
pub fn validate_presentation<P: Presentation + ?Sized>(
    z: &P,
    points: &[Rational],
    thresholds: &[Rational],
) -> Result<PresentationReport> {
    let mut qs = thresholds.to_vec();
    qs.sort();
    qs.dedup();
    let mut report = PresentationReport { verdict: Verdict::Pass, pairs_checked: 0, undecided: 0, violations: Vec::new() };
    for p in points {
        let mut first_in: Option<Rational> = None;
        let mut any_out = false;
        let mut undecided_here = false;
        for q in &qs {
            report.pairs_checked += 1;
            match z.member(p, q)? {
                Membership::In => {
                    if first_in.is_none() {
                        first_in = Some(q.clone());
                    }
                }
                Membership::Out => {
                    any_out = true;
                    if let Some(qi) = &first_in {
                        report.violations.push(PresentationViolation::NotMonotone {
                            p: p.clone(),
                            q_in: qi.clone(),
                            q_out: q.clone(),
                        });
                    }
                }
                Membership::Undecided => {
                    report.undecided += 1;
                    undecided_here = true;
                }
            }
        }
        for (missing, missing_in) in [(first_in.is_none(), true), (!any_out, false)] {
            if missing {
                if undecided_here {
                    report.verdict = report.verdict.and(Verdict::Undecided);
                } else {
                    report.violations.push(PresentationViolation::NoWitness { p: p.clone(), missing_in });
                }
            }
        }
    }
    if !report.violations.is_empty() {
        report.verdict = Verdict::Fail;
    }
    Ok(report)
}

/// How the targets of [`shift_sequence`] are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftMode {
    /// Step `i` keeps `a_{i+1}` away from `-f(p_i)` for the `i`-th point of
    /// [`unit_rational`], so `f(p) + a != 0` at every rational `p`.
    Points,
    /// Step `i` keeps `a_{i+1}` away from `q_i - f(p_i)` for the `i`-th pair
    /// of [`PairEnumeration`], so `f(p) + a` is irrational at every `p`.
    Pairs,
}

/// Rationals `a_0 = 0, a_1, ..., a_N` with `|a_i - a_{i+1}| < 4^-i` and
/// `|t_i - a_{i+1}| > 4^-i / 2` for the targets `t_i` of the mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftSequence {
    pub mode: ShiftMode,
    pub terms: Vec<Rational>,
}

impl ShiftSequence {
    pub fn steps(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn last(&self) -> &Rational {
        self.terms.last().expect("a_0 always present")
    }

    /// Bound on `|a - a_N|` for the limit `a`: `Σ_{j>=N} (5/8) 4^-j`.
    pub fn tail_bound(&self) -> Rational {
        Rational::new(5, 6) * Rational::pow2(-2 * self.steps() as i64)
    }

    /// The target `t_i` that step `i` avoided, computed exactly.
    pub fn target<F: ExactFunction + ?Sized>(&self, f: &F, i: u64) -> Result<Rational> {
        shift_target(self.mode, i, |p| f.eval(p))
    }

    /// Re-checks both step constraints exactly.
    pub fn verify<F: ExactFunction + ?Sized>(&self, f: &F) -> Result<bool> {
        for i in 0..self.steps() {
            let step = Rational::pow2(-2 * i as i64);
            let a = &self.terms[i];
            let b = &self.terms[i + 1];
            if (a - b).abs() >= step {
                return Ok(false);
            }
            let t = self.target(f, i as u64)?;
            if (&t - b).abs() <= step * Rational::new(1, 2) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn shift_target(mode: ShiftMode, i: u64, f: impl Fn(&Rational) -> Result<Rational>) -> Result<Rational> {
    Ok(match mode {
        ShiftMode::Points => -f(&unit_rational(i))?,
        ShiftMode::Pairs => {
            let (p, q) = PairEnumeration.get(i);
            q - f(&p)?
        }
    })
}

/// Builds `a_0, ..., a_steps`.
///
/// Each step tries `a_i ± (5/8) 4^-i` and keeps the candidate farther from
/// an approximation of the target to within `4^-i / 16`; the kept candidate
/// is then more than `(9/16) 4^-i` from the true target.
pub fn shift_sequence<F: RealFunction + ?Sized>(f: &F, mode: ShiftMode, steps: usize) -> Result<ShiftSequence> {
    let mut terms = alloc::vec![Rational::zero()];
    for i in 0..steps {
        let prec = 2 * i as u32 + 4;
        let t = shift_target(mode, i as u64, |p| f.approx(p, prec))?;
        let step = Rational::new(5, 8) * Rational::pow2(-2 * i as i64);
        let a = &terms[i];
        let up = a + &step;
        let down = a - &step;
        let next = if (&up - &t).abs() >= (&down - &t).abs() { up } else { down };
        terms.push(next);
    }
    Ok(ShiftSequence { mode, terms })
}

/// The presentation of `f + a` for the limit `a` of a pair-mode shift.
///
/// Pairs with index `j < N` are decided from the sign of
/// `f(p_j) + a_{j+1} - q_j`, which is at least `(9/16) 4^-j` in magnitude.
/// Other pairs compare `f(p) + a_N` with `q` at increasing precision and are
/// undecided once `max_precision` is reached.
pub struct ShiftedPresentation<F> {
    f: F,
    shift: ShiftSequence,
    max_precision: u32,
}

pub fn presentation_from_shifted<F: RealFunction>(
    f: F,
    shift: ShiftSequence,
    max_precision: u32,
) -> Result<ShiftedPresentation<F>> {
    if shift.mode != ShiftMode::Pairs {
        bail!(Invalid, "presentations need a pair-mode shift sequence");
    }
    Ok(ShiftedPresentation { f, shift, max_precision })
}

impl<F: RealFunction> ShiftedPresentation<F> {
    pub fn shift(&self) -> &ShiftSequence {
        &self.shift
    }

    fn sign_at(&self, p: &Rational, q: &Rational, a: &Rational, slack: &Rational) -> Result<Option<bool>> {
        if let Some(v) = self.f.exact(p) {
            let d = v? + a - q;
            return Ok((&d.abs() > slack).then(|| d.is_negative()));
        }
        let mut prec = 4;
        loop {
            let d = self.f.approx(p, prec)? + a - q;
            if d.abs() > slack + Rational::pow2(-(prec as i64)) {
                return Ok(Some(d.is_negative()));
            }
            if prec >= self.max_precision {
                return Ok(None);
            }
            prec = (prec * 2).min(self.max_precision);
        }
    }
}

impl<F: RealFunction> Presentation for ShiftedPresentation<F> {
    fn member(&self, p: &Rational, q: &Rational) -> Result<Membership> {
        let n = self.shift.steps() as u64;
        let decided = match PairEnumeration.index_below(p, q, n)? {
            Some(j) => {
                let v = self.f.approx(p, 2 * j as u32 + 4)?;
                let d = v + &self.shift.terms[j as usize + 1] - q;
                Some(d.is_negative())
            }
            None => self.sign_at(p, q, self.shift.last(), &self.shift.tail_bound())?,
        };
        Ok(decided.map(Membership::from_bool).unwrap_or(Membership::Undecided))
    }
}

/// Something that can bracket a function value at a rational point.
pub trait Bracket {
    /// `lo <= value(p) <= hi`, tighter as `n` grows.
    fn bracket(&self, p: &Rational, n: u32) -> Result<(Rational, Rational)>;
}

/// Exact values as degenerate brackets.
pub struct ExactBracket<'a, F: ?Sized>(pub &'a F);

impl<F: ExactFunction + ?Sized> Bracket for ExactBracket<'_, F> {
    fn bracket(&self, p: &Rational, _n: u32) -> Result<(Rational, Rational)> {
        let v = self.0.eval(p)?;
        Ok((v.clone(), v))
    }
}

/// `g_Z` bracketed by in/out witnesses.
pub struct PresentationBracket<'a, P: ?Sized> {
    pub z: &'a P,
    pub budget: SearchBudget,
}

impl<P: Presentation + ?Sized> Bracket for PresentationBracket<'_, P> {
    fn bracket(&self, p: &Rational, n: u32) -> Result<(Rational, Rational)> {
        gz_bracket(self.z, p, n, self.budget)
    }
}

/// Outcome of one budgeted universal check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub verdict: Verdict,
    /// Human-readable certificate: the witnesses used, or why the check
    /// stopped.
    pub certificate: String,
}

fn precision_ladder(max: u32) -> impl Iterator<Item = u32> {
    let mut n = 2u32;
    core::iter::from_fn(move || {
        if n > max {
            return None;
        }
        let cur = n;
        n = if n >= max { max + 1 } else { (n * 2).min(max) };
        Some(cur)
    })
}

/// Checks `f(y) - f(x) <= g(y) - g(x)` on each pair.
///
/// For exact inputs the verdict is exact. For bracketed inputs the check is
/// the universal statement read at the budget: it fails with a witness when
/// brackets refute it, passes when brackets prove it or no refutation turns
/// up by `max_precision`, and is undecided when a bracket cannot be found.
pub fn slope_order_check(
    f: &dyn Bracket,
    g: &dyn Bracket,
    pairs: &[(Rational, Rational)],
    max_precision: u32,
) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::with_capacity(pairs.len());
    for (x, y) in pairs {
        if x >= y {
            bail!(Invalid, "slope-order pair needs x < y, got ({x}, {y})");
        }
        let mut outcome = None;
        for n in precision_ladder(max_precision) {
            let brackets = (|| -> Result<_> { Ok((f.bracket(x, n)?, f.bracket(y, n)?, g.bracket(x, n)?, g.bracket(y, n)?)) })();
            let ((fxl, fxh), (fyl, fyh), (gxl, gxh), (gyl, gyh)) = match brackets {
                Ok(b) => b,
                Err(Error::Budget(m)) => {
                    outcome = Some(CheckOutcome { verdict: Verdict::Undecided, certificate: m });
                    break;
                }
                Err(e) => return Err(e),
            };
            let f_low = &fyl - &fxh;
            let g_high = &gyh - &gxl;
            if f_low > g_high {
                outcome = Some(CheckOutcome {
                    verdict: Verdict::Fail,
                    certificate: alloc::format!(
                        "at ({x}, {y}): f(y) - f(x) >= {f_low} > {g_high} >= g(y) - g(x)"
                    ),
                });
                break;
            }
            let f_high = &fyh - &fxl;
            let g_low = &gyl - &gxh;
            if f_high <= g_low {
                outcome = Some(CheckOutcome {
                    verdict: Verdict::Pass,
                    certificate: alloc::format!("at ({x}, {y}): f(y) - f(x) <= {f_high} <= {g_low} <= g(y) - g(x)"),
                });
                break;
            }
        }
        out.push(outcome.unwrap_or_else(|| CheckOutcome {
            verdict: Verdict::Pass,
            certificate: alloc::format!("at ({x}, {y}): no refutation up to precision 2^-{max_precision}"),
        }));
    }
    Ok(out)
}

/// Checks `V(g_Z, Π) <= k` on each partition.
///
/// A refutation is a set of brackets whose lower bounds on the increments
/// `|g(t_{i+1}) - g(t_i)|` already sum past `k`; each lower bound has the
/// form `q_r - q_s` with `(t, q_r) ∉ Z` and `(t', q_s) ∈ Z`.
pub fn bv_bound_check<P: Presentation + ?Sized>(
    z: &P,
    k: &Rational,
    partitions: &[Partition],
    budget: SearchBudget,
) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::with_capacity(partitions.len());
    for part in partitions {
        let mut outcome = None;
        for n in precision_ladder(budget.max_precision) {
            let brackets: Result<Vec<_>> = part.points().iter().map(|t| gz_bracket(z, t, n, budget)).collect();
            let brackets = match brackets {
                Ok(b) => b,
                Err(Error::Budget(m)) => {
                    outcome = Some(CheckOutcome { verdict: Verdict::Undecided, certificate: m });
                    break;
                }
                Err(e) => return Err(e),
            };
            let mut lower = Rational::zero();
            let mut upper = Rational::zero();
            for w in brackets.windows(2) {
                let ((al, ah), (bl, bh)) = (&w[0], &w[1]);
                let rise_lo = bl - ah;
                let fall_lo = al - bh;
                lower += rise_lo.max(fall_lo).max(Rational::zero());
                upper += (bh - al).max(ah - bl);
            }
            if &lower > k {
                outcome = Some(CheckOutcome {
                    verdict: Verdict::Fail,
                    certificate: alloc::format!("V(g, {part}) >= {lower} > {k} from witnesses at precision 2^-{n}"),
                });
                break;
            }
            if &upper <= k {
                outcome = Some(CheckOutcome {
                    verdict: Verdict::Pass,
                    certificate: alloc::format!("V(g, {part}) <= {upper} <= {k}"),
                });
                break;
            }
        }
        out.push(outcome.unwrap_or_else(|| CheckOutcome {
            verdict: Verdict::Pass,
            certificate: alloc::format!(
                "V(g, {part}) <= {k} unrefuted up to precision 2^-{}",
                budget.max_precision
            ),
        }));
    }
    Ok(out)
}
