//! Scale-indexed pseudo-derivative bounds, the steep-slope witness finder
//! for the measure-tree gadget, slope trees, and `L`-interval alternation
//! sequences with their union-measure bound.
//!
//! `S_f(a, b) = (f(b) - f(a)) / (b - a)`. No pseudo-derivative value is ever
//! computed; only bounds at a given scale `h`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::exactnum::{DyadicString, Rational};
use crate::gadgets::{wwkl_block, TreeFamily, WwklSum};
use crate::polyfun::{slope, ExactFunction, PolygonalFunction, RealFunction, SawtoothBlock};
use crate::trees::BinaryTree;

/// Upper and lower chord slopes over admissible grid pairs at scale `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeEstimate {
    pub h: Rational,
    pub upper: Rational,
    pub lower: Rational,
    pub upper_pair: (Rational, Rational),
    pub lower_pair: (Rational, Rational),
    pub pairs: usize,
}

/// Sup and inf of `S_f(a, b)` over grid points `a <= x <= b` with
/// `0 < b - a < h`.
pub fn pseudo_slope_bounds<F: ExactFunction + ?Sized>(
    f: &F,
    x: &Rational,
    h: &Rational,
    grid: &[Rational],
) -> Result<SlopeEstimate> {
    if !h.is_positive() {
        bail!(Range, "scale h = {h} must be positive");
    }
    let pts: BTreeSet<&Rational> = grid.iter().filter(|p| !p.is_negative() && *p <= &Rational::one()).collect();
    let left: Vec<&Rational> = pts.iter().copied().filter(|p| *p <= x).collect();
    let right: Vec<&Rational> = pts.iter().copied().filter(|p| *p >= x).collect();
    let mut best: Option<SlopeEstimate> = None;
    for a in &left {
        let fa = f.eval(a)?;
        for b in &right {
            let w = *b - *a;
            if !w.is_positive() || &w >= h {
                continue;
            }
            let s = (f.eval(b)? - &fa) / &w;
            let pair = ((*a).clone(), (*b).clone());
            match &mut best {
                None => {
                    best = Some(SlopeEstimate {
                        h: h.clone(),
                        upper: s.clone(),
                        lower: s,
                        upper_pair: pair.clone(),
                        lower_pair: pair,
                        pairs: 1,
                    })
                }
                Some(e) => {
                    e.pairs += 1;
                    if s > e.upper {
                        e.upper = s.clone();
                        e.upper_pair = pair.clone();
                    }
                    if s < e.lower {
                        e.lower = s;
                        e.lower_pair = pair;
                    }
                }
            }
        }
    }
    match best {
        Some(e) => Ok(e),
        None => bail!(Invalid, "no admissible grid pair around {x} at scale {h}"),
    }
}

/// `x`, the breakpoints of `f` within `h` of `x`, and the points
/// `x ± h·j/2^res` for `0 < j < 2^res`, clipped to `[0,1]`.
pub fn polygonal_grid(f: &PolygonalFunction, x: &Rational, h: &Rational, res: u32) -> Vec<Rational> {
    let mut out: BTreeSet<Rational> = BTreeSet::new();
    out.insert(x.clone());
    for p in f.xs() {
        if (p - x).abs() < *h {
            out.insert(p.clone());
        }
    }
    let n = 1i64 << res;
    for j in 1..n {
        let d = h * &Rational::new(j, n);
        for p in [x + &d, x - &d] {
            if !p.is_negative() && p <= Rational::one() {
                out.insert(p);
            }
        }
    }
    out.into_iter().collect()
}

/// Dyadic grid `{i / 2^res}` together with `x`.
pub fn dyadic_grid(x: &Rational, res: u32) -> Vec<Rational> {
    let n = 1i64 << res;
    let mut v: Vec<Rational> = (0..=n).map(|i| Rational::new(i, n)).collect();
    v.push(x.clone());
    v
}

/// A steep chord of the measure-tree gadget sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeWitness {
    pub n: usize,
    pub sigma: DyadicString,
    pub a: Rational,
    pub b: Rational,
    pub slope: Rational,
    /// Bound on the slope contribution of the `f_m`, `m > N`, that the
    /// partial sum leaves out.
    pub tail: Rational,
}

impl SlopeWitness {
    /// `|S(a, b)| - tail`, a lower bound on the slope of the full sum.
    pub fn certified(&self) -> Rational {
        self.slope.abs() - &self.tail
    }
}

/// The flank of `block` containing `x`: adjacent zero and apex points.
pub fn block_witness(block: &SawtoothBlock, x: &Rational) -> Option<(Rational, Rational)> {
    block.flank_containing(x)
}

/// Least `n` with `2^{3n-1} > K`.
pub fn witness_depth(k: &Rational) -> usize {
    let mut n = 0usize;
    while Rational::pow2(3 * n as i64 - 1) <= *k {
        n += 1;
    }
    n
}

/// A chord `[a, b] ∋ x` with `b - a = 2^{-5n-1-|σ|} < δ` and
/// `|S_f(a, b)| > K` for the partial sum `f`, taking the least `n` with
/// `2^{3n-1} > K` and a covering `σ ∈ T̃_n` short enough.
pub fn witness_slope(
    fam: &TreeFamily,
    sum: &WwklSum,
    x: &Rational,
    delta: &Rational,
    k: &Rational,
) -> Result<SlopeWitness> {
    let big_n = sum.parts.len() - 1;
    let mut n = witness_depth(k);
    loop {
        if n > big_n.min(fam.n_max()) {
            bail!(Budget, "witness needs n = {n} but the sum stops at N = {big_n}");
        }
        if let Some(sigma) = fam.covering(n, x)? {
            let width = Rational::pow2(-(sigma.len() as i64));
            if &width < delta {
                let block = wwkl_block(n, sigma)?;
                let (a, b) = block.flank_containing(x).expect("x lies in I_σ");
                let s = slope(sum, &a, &b)?;
                let tail = Rational::pow2(5 * n as i64 + 1) * Rational::pow2(-2 * big_n as i64) / Rational::from(3);
                let w = SlopeWitness { n, sigma: sigma.clone(), a, b, slope: s, tail };
                if w.certified() > *k {
                    return Ok(w);
                }
            }
        } else if n == witness_depth(k) {
            bail!(Budget, "{x} is not covered by T̃_{n} within its pathless depth");
        }
        n += 1;
    }
}

/// A chord of the rational jump function around a rational `x < 1` with a
/// certified slope above `K`: `[x, x + t]` picks up the jump `2^-i` at
/// `x = q_i`.
pub fn jump_witness(x: &Rational, k: &Rational) -> Result<(Rational, Rational, Rational)> {
    if x.is_negative() || x >= &Rational::one() {
        bail!(Range, "jump witness needs 0 <= x < 1, got {x}");
    }
    let i = crate::present::unit_rational_index(x)?;
    let jump = Rational::pow2(-(i as i64));
    let mut t = Rational::one() - x;
    while &jump / &t <= *k {
        t = t / Rational::from(2);
    }
    let b = x + &t;
    // every term of the sum is nonnegative, so the partial sums bound the
    // increment from below
    let prec = i as u32 + 1;
    let lower = crate::gadgets::jump_function(&b, prec) - crate::gadgets::jump_function(x, prec);
    Ok((x.clone(), b, lower / t))
}

/// `T_m` materialized to `depth`, with the level-count certificate.
#[derive(Clone, Debug)]
pub struct SlopeTree {
    pub m: u32,
    pub depth: usize,
    pub levels: Vec<Vec<DyadicString>>,
    pub excluded: Vec<usize>,
}

impl SlopeTree {
    pub fn tree(&self) -> Result<BinaryTree> {
        BinaryTree::explicit(self.levels.iter().flatten().cloned(), self.depth)
    }

    pub fn measures(&self) -> Vec<Rational> {
        self.levels
            .iter()
            .enumerate()
            .map(|(n, l)| Rational::from(l.len() as i64) * Rational::pow2(-(n as i64)))
            .collect()
    }

    /// `excluded(m + k) <= 2^k` for every certified level.
    pub fn count_certificate(&self) -> bool {
        self.excluded.iter().enumerate().all(|(len, &c)| {
            let k = len as i64 - self.m as i64;
            if k < 0 {
                c == 0
            } else {
                k >= 63 || c as u128 <= 1u128 << k
            }
        })
    }

    /// `μ_n(T_m) >= 1 - 2^-m` at every level.
    pub fn measure_certificate(&self) -> bool {
        let bound = Rational::one() - Rational::pow2(-(self.m as i64));
        self.measures().iter().all(|mu| mu >= &bound)
    }
}

/// `θ(s, m, τ)`: the stage-`s` test that `S_f(l_τ, r_τ) <= 2^m`, read from
/// approximations at precision `s + |τ| + m + 2`.
pub fn theta<F: RealFunction + ?Sized>(f: &F, s: usize, m: u32, tau: &DyadicString) -> Result<bool> {
    Cached::new(f).theta(s, m, tau)
}

/// Memoized evaluation; exact functions are cached per point only.
struct Cached<'a, F: ?Sized> {
    f: &'a F,
    exact: bool,
    values: BTreeMap<(Rational, u32), Rational>,
}

impl<'a, F: RealFunction + ?Sized> Cached<'a, F> {
    fn new(f: &'a F) -> Self {
        let exact = f.exact(&Rational::zero()).is_some();
        Cached { f, exact, values: BTreeMap::new() }
    }

    fn value(&mut self, x: &Rational, p: u32) -> Result<Rational> {
        let key = (x.clone(), if self.exact { 0 } else { p });
        if let Some(v) = self.values.get(&key) {
            return Ok(v.clone());
        }
        let v = self.f.approx(x, p)?;
        self.values.insert(key, v.clone());
        Ok(v)
    }

    fn theta(&mut self, s: usize, m: u32, tau: &DyadicString) -> Result<bool> {
        let p = (s + tau.len() + m as usize + 2) as u32;
        let i = tau.interval();
        let rise = self.value(i.right(), p)? - self.value(i.left(), p)?;
        let slack = Rational::pow2(1 - p as i64);
        Ok(rise <= Rational::pow2(m as i64 - tau.len() as i64) + slack)
    }
}

/// `T_m = {σ : θ(s, m, τ) for all τ ⪯ σ and s < |σ|}` to `depth`.
pub fn slope_tree<F: RealFunction + ?Sized>(f: &F, m: u32, depth: usize) -> Result<SlopeTree> {
    let p = 40;
    let (f0, f1) = (f.approx(&Rational::zero(), p)?, f.approx(&Rational::one(), p)?);
    let slack = Rational::pow2(-(p as i64) + 1);
    if f0 < -slack.clone() || f1 < &f0 - &slack || f1 > Rational::one() + &slack {
        bail!(Range, "slope tree needs 0 <= f(0) <= f(1) <= 1, got f(0) = {f0}, f(1) = {f1}");
    }
    if depth > 22 {
        bail!(Budget, "slope tree depth {depth} too large");
    }
    let mut ev = Cached::new(f);
    let mut levels = alloc::vec![alloc::vec![DyadicString::empty()]];
    let mut excluded = alloc::vec![0usize];
    for len in 1..=depth {
        let mut next = Vec::new();
        for sigma in &levels[len - 1] {
            for b in [false, true] {
                let c = sigma.child(b);
                // proper prefixes already passed every s < len - 1
                let mut keep = true;
                'check: for j in 0..=len {
                    let tau = c.prefix(j);
                    let stages = if j == len { 0..len } else { len - 1..len };
                    for s in stages {
                        if !ev.theta(s, m, &tau)? {
                            keep = false;
                            break 'check;
                        }
                    }
                }
                if keep {
                    next.push(c);
                }
            }
        }
        excluded.push((1usize << len) - next.len());
        levels.push(next);
    }
    Ok(SlopeTree { m, depth, levels, excluded })
}

/// `(p·i·2^-n + q, p·(i+1)·2^-n + q)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LInterval {
    pub n: u32,
    pub p: Rational,
    pub q: Rational,
    pub i: i64,
}

impl LInterval {
    pub fn raw_left(&self) -> Rational {
        &self.p * Rational::from(self.i) * Rational::pow2(-(self.n as i64)) + &self.q
    }

    pub fn raw_right(&self) -> Rational {
        &self.p * Rational::from(self.i + 1) * Rational::pow2(-(self.n as i64)) + &self.q
    }

    /// Endpoints after intersecting with `[0,1]`, if nonempty.
    pub fn endpoints(&self) -> Option<(Rational, Rational)> {
        let a = self.raw_left().max(Rational::zero());
        let b = self.raw_right().min(Rational::one());
        (a < b).then_some((a, b))
    }

    pub fn length(&self) -> Rational {
        self.endpoints().map_or_else(Rational::zero, |(a, b)| b - a)
    }

    pub fn params(&self) -> (&Rational, &Rational) {
        (&self.p, &self.q)
    }

    /// Whether `x` lies in the closure.
    pub fn touches(&self, x: &Rational) -> bool {
        self.endpoints().is_some_and(|(a, b)| &a <= x && x <= &b)
    }

    /// Containment of the clipped intervals; `strict` excludes equality.
    pub fn within(&self, other: &LInterval, strict: bool) -> bool {
        match (self.endpoints(), other.endpoints()) {
            (Some((a, b)), Some((c, d))) => c <= a && b <= d && (!strict || c < a || b < d),
            _ => false,
        }
    }

    pub fn slope<F: ExactFunction + ?Sized>(&self, f: &F) -> Result<Rational> {
        match self.endpoints() {
            Some((a, b)) => slope(f, &a, &b),
            None => bail!(Invalid, "L-interval misses [0,1]"),
        }
    }
}

fn check_l(l: &[(Rational, Rational)]) -> Result<()> {
    if let Some((p, _)) = l.iter().find(|(p, _)| !p.is_positive()) {
        bail!(Invalid, "L entries need p > 0, got p = {p}");
    }
    Ok(())
}

/// `(p,q)`-intervals at level `n` whose closure contains `x`: one, or two
/// when `x` is a shared endpoint.
fn level_cover(x: &Rational, p: &Rational, q: &Rational, n: u32) -> Vec<LInterval> {
    let t = (x - q) * Rational::pow2(n as i64) / p;
    let fl = t.floor();
    let i: i64 = num_traits::ToPrimitive::to_i64(&fl).unwrap_or(i64::MAX - 1);
    let mut out = Vec::new();
    let mut push = |i: i64| {
        let a = LInterval { n, p: p.clone(), q: q.clone(), i };
        if a.endpoints().is_some() && a.touches(x) {
            out.push(a);
        }
    };
    if t.is_integer() {
        push(i - 1);
    }
    push(i);
    out
}

/// For each `(p,q) ∈ L`, the `(p,q)`-intervals of the least level `n` with
/// `p·2^-n <= h` whose closure contains `x`.
pub fn l_interval_cover(x: &Rational, l: &[(Rational, Rational)], h: &Rational) -> Result<Vec<LInterval>> {
    check_l(l)?;
    if !h.is_positive() {
        bail!(Range, "h = {h} must be positive");
    }
    let mut out = Vec::new();
    for (p, q) in l {
        let mut n = 0u32;
        while &(p * &Rational::pow2(-(n as i64))) > h {
            n += 1;
        }
        out.extend(level_cover(x, p, q, n));
    }
    Ok(out)
}

/// `A_0 ⊋ A_1 ⊋ ... ⊋ A_{2n}` with `S_f(A_{2i}) < γ` and
/// `S_f(A_{2i+1}) > β`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternationSequence {
    pub intervals: Vec<LInterval>,
    pub slopes: Vec<Rational>,
}

impl AlternationSequence {
    pub fn depth(&self) -> usize {
        self.intervals.len() / 2
    }

    pub fn last(&self) -> &LInterval {
        self.intervals.last().expect("nonempty")
    }

    /// Checks nesting and the alternating slope conditions exactly.
    pub fn verify<F: ExactFunction + ?Sized>(&self, f: &F, beta: &Rational, gamma: &Rational) -> Result<bool> {
        if self.intervals.len().is_multiple_of(2) {
            return Ok(false);
        }
        for (j, a) in self.intervals.iter().enumerate() {
            let s = a.slope(f)?;
            let ok = if j % 2 == 0 { &s < gamma } else { &s > beta };
            if !ok || (j > 0 && !a.within(&self.intervals[j - 1], true)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The `((p,q), (r,s))` labels if the sequence is uniform.
    pub fn uniform_params(&self) -> Option<((Rational, Rational), (Rational, Rational))> {
        let even = (self.intervals[0].p.clone(), self.intervals[0].q.clone());
        let odd = self.intervals.get(1).map_or_else(|| even.clone(), |a| (a.p.clone(), a.q.clone()));
        let ok = self.intervals.iter().enumerate().all(|(j, a)| {
            let want = if j % 2 == 0 { &even } else { &odd };
            (&a.p, &a.q) == (&want.0, &want.1)
        });
        ok.then_some((even, odd))
    }
}

/// Result of [`alternation_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternationResult {
    pub sequence: AlternationSequence,
    pub subsequence: AlternationSequence,
}

/// Searches the `L`-intervals with closure containing `x`, at levels up to
/// `depth`, for an `n`-depth alternation sequence, and extracts the deepest
/// uniform `(p,q);(r,s)` subsequence from it.
pub fn alternation_search<F: ExactFunction + ?Sized>(
    f: &F,
    l: &[(Rational, Rational)],
    beta: &Rational,
    gamma: &Rational,
    n: usize,
    x: &Rational,
    depth: u32,
) -> Result<Option<AlternationResult>> {
    check_l(l)?;
    if !(gamma.is_positive() && beta > gamma) {
        bail!(Invalid, "alternation needs β > γ > 0, got β = {beta}, γ = {gamma}");
    }
    let mut cands: Vec<LInterval> = Vec::new();
    for (p, q) in l {
        for lev in 0..=depth {
            cands.extend(level_cover(x, p, q, lev));
        }
    }
    cands.sort();
    cands.dedup();
    let slopes = cands.iter().map(|c| c.slope(f)).collect::<Result<Vec<_>>>()?;
    let len = 2 * n + 1;
    let fits = |j: usize, c: usize| if j.is_multiple_of(2) { &slopes[c] < gamma } else { &slopes[c] > beta };
    // can[j][c]: a valid tail A_j, ..., A_{2n} exists starting at candidate c
    let mut can = alloc::vec![alloc::vec![false; cands.len()]; len];
    for j in (0..len).rev() {
        for c in 0..cands.len() {
            can[j][c] = fits(j, c)
                && (j + 1 == len || (0..cands.len()).any(|d| can[j + 1][d] && cands[d].within(&cands[c], true)));
        }
    }
    let Some(mut cur) = (0..cands.len()).find(|&c| can[0][c]) else { return Ok(None) };
    let mut picks = alloc::vec![cur];
    for row in &can[1..len] {
        cur = (0..cands.len()).find(|&d| row[d] && cands[d].within(&cands[cur], true)).expect("tail exists");
        picks.push(cur);
    }
    let sequence = AlternationSequence {
        intervals: picks.iter().map(|&c| cands[c].clone()).collect(),
        slopes: picks.iter().map(|&c| slopes[c].clone()).collect(),
    };
    let subsequence = uniform_subsequence(&sequence, l);
    Ok(Some(AlternationResult { sequence, subsequence }))
}

/// The deepest subsequence whose even terms share one `(p,q)` and odd terms
/// share one `(r,s)`, found greedily for each label pair.
pub fn uniform_subsequence(seq: &AlternationSequence, l: &[(Rational, Rational)]) -> AlternationSequence {
    let mut best: Option<AlternationSequence> = None;
    for pq in l {
        for rs in l {
            let mut picked: Vec<usize> = Vec::new();
            let mut want_even = true;
            for (j, a) in seq.intervals.iter().enumerate() {
                let label = if want_even { pq } else { rs };
                if (j % 2 == 0) == want_even && (&a.p, &a.q) == (&label.0, &label.1) {
                    picked.push(j);
                    want_even = !want_even;
                }
            }
            if picked.len().is_multiple_of(2) {
                picked.pop();
            }
            if picked.is_empty() {
                continue;
            }
            let cand = AlternationSequence {
                intervals: picked.iter().map(|&j| seq.intervals[j].clone()).collect(),
                slopes: picked.iter().map(|&j| seq.slopes[j].clone()).collect(),
            };
            if best.as_ref().is_none_or(|b| cand.intervals.len() > b.intervals.len()) {
                best = Some(cand);
            }
        }
    }
    best.expect("the first interval alone is uniform")
}

/// Disjoint normal form of a union of closed intervals.
pub fn union_normal_form(mut parts: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    parts.sort();
    let mut out: Vec<(Rational, Rational)> = Vec::new();
    for (a, b) in parts {
        match out.last_mut() {
            Some(last) if a <= last.1 => {
                if b > last.1 {
                    last.1 = b;
                }
            }
            _ => out.push((a, b)),
        }
    }
    out
}

/// Lengths and masses of the unions `Ā_i` and the verified inequality chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnionMeasure {
    pub lengths: Vec<Rational>,
    pub masses: Vec<Rational>,
    pub bound: Rational,
    pub chain_holds: bool,
}

impl UnionMeasure {
    /// `|Ā_{2n}|`.
    pub fn measure(&self) -> Rational {
        self.lengths.last().cloned().unwrap_or_else(Rational::zero)
    }
}

/// `Ā_i = ⋃_s A^s_i` over chains sharing `(p,q);(r,s)`, with
/// `|Ā_{2i+2}| <= |Ā_{2i+1}| < Δ_f(Ā_{2i+1})/β <= Δ_f(Ā_{2i})/β < (γ/β)|Ā_{2i}|`
/// checked exactly for every `i < n`, and `|Ā_{2n}| < (γ/β)^n |Ā_0|`.
pub fn alternation_union_measure<F: ExactFunction + ?Sized>(
    chains: &[AlternationSequence],
    f: &F,
    beta: &Rational,
    gamma: &Rational,
) -> Result<UnionMeasure> {
    let Some(first) = chains.first() else {
        return Ok(UnionMeasure { lengths: Vec::new(), masses: Vec::new(), bound: Rational::zero(), chain_holds: true });
    };
    let Some(params) = first.uniform_params() else {
        bail!(Invalid, "chain is not a uniform (p,q);(r,s) sequence");
    };
    for c in chains {
        if c.intervals.len() != first.intervals.len() || c.uniform_params().as_ref() != Some(&params) {
            bail!(Invalid, "chains mix (p,q);(r,s) parameters or depths");
        }
    }
    let len = first.intervals.len();
    let n = len / 2;
    let mut lengths = Vec::with_capacity(len);
    let mut masses = Vec::with_capacity(len);
    for j in 0..len {
        let form = union_normal_form(chains.iter().filter_map(|c| c.intervals[j].endpoints()).collect());
        let mut size = Rational::zero();
        let mut mass = Rational::zero();
        for (a, b) in &form {
            size += b - a;
            mass += f.eval(b)? - f.eval(a)?;
        }
        lengths.push(size);
        masses.push(mass);
    }
    let ratio = gamma / beta;
    let mut ok = true;
    for i in 0..n {
        let (e, o, e2) = (2 * i, 2 * i + 1, 2 * i + 2);
        ok &= lengths[e2] <= lengths[o];
        ok &= lengths[o] < &masses[o] / beta;
        ok &= masses[o] <= masses[e];
        ok &= &masses[e] / beta < &ratio * &lengths[e];
    }
    let bound = ratio.pow(n as i32) * &lengths[0];
    ok &= n == 0 || lengths[len - 1] < bound;
    Ok(UnionMeasure { lengths, masses, bound, chain_holds: ok })
}

/// Node slopes of the staircase: `3/4` on even dyadic blocks and `5/2` on
/// odd ones.
fn staircase_node(j: u32) -> Rational {
    let base = if j.is_multiple_of(2) { Rational::new(3, 4) } else { Rational::new(5, 8) };
    base * Rational::pow2(-4 * (j as i64 / 2))
}

/// Two half-scale copies of a monotone staircase through
/// `(4^-j, c_j)`, `c_0 = 3/4`, `c_1 = 5/8`, `c_{j+2} = c_j / 16`, on
/// `[0, 1/2]` and `[1/2, 1]`. Dyadic blocks `[0, 4^-j]` of one copy have
/// slope `3/4` for even `j` and `5/2` for odd `j`, so `γ = 1`, `β = 2`
/// and `L = {(1, 0)}` give alternation sequences at `0` and `1/2`.
pub fn staircase(levels: u32) -> PolygonalFunction {
    let half = Rational::new(1, 2);
    let mut pts: Vec<(Rational, Rational)> = Vec::new();
    let copy_at = |x0: &Rational, y0: &Rational, pts: &mut Vec<(Rational, Rational)>| {
        pts.push((x0.clone(), y0.clone()));
        for j in (0..=levels).rev() {
            let x = x0 + &(&half * &Rational::pow2(-2 * j as i64));
            let y = y0 + &(&half * &staircase_node(j));
            pts.push((x, y));
        }
    };
    copy_at(&Rational::zero(), &Rational::zero(), &mut pts);
    let top = &half * &staircase_node(0);
    let mut second = Vec::new();
    copy_at(&half, &top, &mut second);
    pts.extend(second.into_iter().skip(1));
    PolygonalFunction::new(pts).expect("staircase nodes increase")
}

/// `γ = 1`, `β = 2`, `L = {(1, 0)}`.
pub fn staircase_parameters() -> (Rational, Rational, Vec<(Rational, Rational)>) {
    (Rational::from(2), Rational::one(), alloc::vec![(Rational::one(), Rational::zero())])
}
