//! The Jordan tree, its variation branch, presentations read off branches,
//! and the range decoders for the sawtooth gadgets.
//!
//! Bits of a branch `τ` are indexed by [`PairEnumeration`]: `τ(r) = 1` means
//! `(p_r, q_r)` is in the presentation being built. A string belongs to the
//! Jordan tree of `f` with bound `M` when, for all `r, s < |τ|`:
//!
//! * (r0) `q_r <= 0` forces `τ(r) = 0` and `q_r >= M` forces `τ(r) = 1`;
//! * (r1) `p_r <= p_s`, `q_r >= q_s` and `τ(r) = 0` force `τ(s) = 0`;
//! * (r2) `p_r <= p_s`, `τ(r) = 0` and `τ(s) = 1` force
//!   `|f(p_s) - f(p_r)| <= q_s - q_r`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{bail, Error, Result};
use crate::exactnum::{unpair, DyadicString, Rational};
use crate::gadgets::{aca_point, aca_stage_point, InjectiveMap};
use crate::polyfun::{ExactFunction, PolygonalFunction, RealFunction};
use crate::present::{Bracket, Membership, PairEnumeration, Presentation, SearchBudget};
use crate::trees::{bounded_width_path, max_prefix_free, BinaryTree, WidthPath};
use crate::Verdict;

fn pairs_prefix(n: usize) -> Vec<(Rational, Rational)> {
    PairEnumeration.prefix(n as u64)
}

fn check_bound(m: &Rational) -> Result<()> {
    if !m.is_positive() {
        bail!(Invalid, "variation bound M must be positive, got {m}");
    }
    Ok(())
}

/// Index of each distinct point among `pairs`, with the point list.
fn distinct_points(pairs: &[(Rational, Rational)]) -> (Vec<usize>, Vec<Rational>) {
    let mut ids: BTreeMap<&Rational, usize> = BTreeMap::new();
    let mut pts = Vec::new();
    let idx = pairs
        .iter()
        .map(|(p, _)| {
            *ids.entry(p).or_insert_with(|| {
                pts.push(p.clone());
                pts.len() - 1
            })
        })
        .collect();
    (idx, pts)
}

/// Checks (r0) and (r1) for a new index `s` against all earlier ones.
fn structural_failure(
    pairs: &[(Rational, Rational)],
    bits: &[bool],
    m: &Rational,
    s: usize,
) -> Option<String> {
    let (ps, qs) = &pairs[s];
    if !qs.is_positive() && bits[s] {
        return Some(alloc::format!("(r0): q_{s} = {qs} <= 0 but bit {s} is 1"));
    }
    if qs >= m && !bits[s] {
        return Some(alloc::format!("(r0): q_{s} = {qs} >= M but bit {s} is 0"));
    }
    for (r, (pr, qr)) in pairs[..s].iter().enumerate() {
        for (a, b, pa, qa, pb, qb) in [(r, s, pr, qr, ps, qs), (s, r, ps, qs, pr, qr)] {
            if pa <= pb && qa >= qb && !bits[a] && bits[b] {
                return Some(alloc::format!("(r1): indices {a}, {b} at ({pa}, {qa}), ({pb}, {qb})"));
            }
        }
    }
    None
}

/// Pairs `(a, b)` with `p_a <= p_b`, bit `a = 0` and bit `b = 1` that
/// involve index `s` and an earlier index.
fn r2_pairs(pairs: &[(Rational, Rational)], bits: &[bool], s: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for r in 0..s {
        for (a, b) in [(r, s), (s, r)] {
            if pairs[a].0 <= pairs[b].0 && !bits[a] && bits[b] {
                out.push((a, b));
            }
        }
    }
    out
}

/// The first length at which `tau` leaves the Jordan tree of an exactly
/// evaluable `f`, with the violated clause. `None` means every prefix of
/// `tau`, and `tau` itself, is a member.
pub fn jordan_first_failure(
    f: &dyn ExactFunction,
    m: &Rational,
    tau: &DyadicString,
) -> Result<Option<(usize, String)>> {
    check_bound(m)?;
    let pairs = pairs_prefix(tau.len());
    let (idx, pts) = distinct_points(&pairs);
    let vals = pts.iter().map(|p| f.eval(p)).collect::<Result<Vec<_>>>()?;
    let bits = tau.bits();
    for s in 0..tau.len() {
        if let Some(why) = structural_failure(&pairs, bits, m, s) {
            return Ok(Some((s + 1, why)));
        }
        for (a, b) in r2_pairs(&pairs, bits, s) {
            let rise = (&vals[idx[b]] - &vals[idx[a]]).abs();
            let room = &pairs[b].1 - &pairs[a].1;
            if rise > room {
                return Ok(Some((s + 1, alloc::format!("(r2): |f({}) - f({})| = {rise} > {room}", pairs[b].0, pairs[a].0))));
            }
        }
    }
    Ok(None)
}

/// Membership of `tau` in the Jordan tree of a bracketed `f`.
///
/// (r2) is refuted by brackets, proved by brackets, or else accepted as
/// unrefuted at `max_precision`; `Undecided` means a bracket could not be
/// produced.
pub fn jordan_tree_member(f: &dyn Bracket, m: &Rational, tau: &DyadicString, max_precision: u32) -> Result<Verdict> {
    Ok(jordan_tree_check(f, m, tau, max_precision)?.0)
}

/// As [`jordan_tree_member`], with a certificate line.
pub fn jordan_tree_check(
    f: &dyn Bracket,
    m: &Rational,
    tau: &DyadicString,
    max_precision: u32,
) -> Result<(Verdict, String)> {
    check_bound(m)?;
    let pairs = pairs_prefix(tau.len());
    let bits = tau.bits();
    let mut open: Vec<(usize, usize)> = Vec::new();
    for s in 0..tau.len() {
        if let Some(why) = structural_failure(&pairs, bits, m, s) {
            return Ok((Verdict::Fail, why));
        }
        open.extend(r2_pairs(&pairs, bits, s));
    }
    let (idx, pts) = distinct_points(&pairs);
    let mut n = 2u32;
    loop {
        let brackets = match pts.iter().map(|p| f.bracket(p, n)).collect::<Result<Vec<_>>>() {
            Ok(b) => b,
            Err(Error::Budget(why)) => return Ok((Verdict::Undecided, why)),
            Err(e) => return Err(e),
        };
        let mut still = Vec::new();
        for (a, b) in open {
            let (al, ah) = &brackets[idx[a]];
            let (bl, bh) = &brackets[idx[b]];
            let lo = bl - ah;
            let hi = bh - al;
            let room = &pairs[b].1 - &pairs[a].1;
            let lower = if lo.is_positive() {
                lo.clone()
            } else if hi.is_negative() {
                -hi.clone()
            } else {
                Rational::zero()
            };
            if lower > room {
                return Ok((
                    Verdict::Fail,
                    alloc::format!("(r2): |f({}) - f({})| >= {lower} > {room}", pairs[b].0, pairs[a].0),
                ));
            }
            if lo.abs().max(hi.abs()) > room {
                still.push((a, b));
            }
        }
        open = still;
        if open.is_empty() {
            return Ok((Verdict::Pass, alloc::format!("all clauses hold for |τ| = {}", tau.len())));
        }
        if n >= max_precision {
            return Ok((
                Verdict::Pass,
                alloc::format!("{} (r2) instances unrefuted up to precision 2^-{max_precision}", open.len()),
            ));
        }
        n = (n * 2).min(max_precision);
    }
}

/// `Z_{𝐯_f} | k`: bit `s` is `1` iff `𝐯_f(p_s) < q_s` or `q_s >= M`.
///
/// The second disjunct only matters when `𝐯_f(p_s) = M = q_s`, where (r0)
/// demands a `1`.
pub fn variation_branch(f: &PolygonalFunction, m: &Rational, k: usize) -> Result<DyadicString> {
    check_bound(m)?;
    let total = f.total_variation();
    if &total > m {
        bail!(Invalid, "total variation {total} exceeds the bound M = {m}");
    }
    let v = f.running_variation();
    let bits = pairs_prefix(k)
        .iter()
        .map(|(p, q)| Ok(&v.eval(p)? < q || q >= m))
        .collect::<Result<Vec<_>>>()?;
    Ok(DyadicString::from_bits(bits))
}

/// A presentation read off a finite branch: index `r < |branch|` is decided
/// by bit `r`, everything else is undecided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchPresentation {
    branch: DyadicString,
    pairs: Vec<(Rational, Rational)>,
}

/// Checks that `branch` is in the Jordan tree and wraps it as a
/// presentation.
pub fn extract_presentation(
    f: &dyn Bracket,
    m: &Rational,
    branch: &DyadicString,
    max_precision: u32,
) -> Result<BranchPresentation> {
    let (verdict, why) = jordan_tree_check(f, m, branch, max_precision)?;
    match verdict {
        Verdict::Pass => Ok(BranchPresentation::new(branch.clone())),
        Verdict::Fail => bail!(Invalid, "branch rejected by the Jordan tree: {why}"),
        Verdict::Undecided => bail!(Budget, "branch membership undecided: {why}"),
    }
}

/// Result of the decided-pair checks on a [`BranchPresentation`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecidedPairReport {
    pub indices: usize,
    pub pairs_checked: usize,
    pub monotone: Verdict,
    pub slope_order: Verdict,
    pub first_failure: Option<String>,
}

impl BranchPresentation {
    pub fn new(branch: DyadicString) -> Self {
        let pairs = pairs_prefix(branch.len());
        BranchPresentation { branch, pairs }
    }

    pub fn branch(&self) -> &DyadicString {
        &self.branch
    }

    /// `(index, p, q, member)` for every decided index.
    pub fn decided(&self) -> Vec<(u64, Rational, Rational, bool)> {
        self.pairs
            .iter()
            .enumerate()
            .map(|(i, (p, q))| (i as u64, p.clone(), q.clone(), self.branch.bit(i)))
            .collect()
    }

    /// The bracket `[max out-threshold, min in-threshold]` at `p` from the
    /// decided indices, when both sides are present.
    pub fn decided_bracket(&self, p: &Rational) -> Option<(Rational, Rational)> {
        let mut lo: Option<&Rational> = None;
        let mut hi: Option<&Rational> = None;
        for (i, (pi, qi)) in self.pairs.iter().enumerate() {
            if pi != p {
                continue;
            }
            if self.branch.bit(i) {
                hi = Some(hi.map_or(qi, |h| h.min(qi)));
            } else {
                lo = Some(lo.map_or(qi, |l| l.max(qi)));
            }
        }
        Some((lo?.clone(), hi?.clone()))
    }

    /// Monotonicity (clause (r1) read on the presentation) and slope order
    /// against `f` on all decided index pairs below `limit`.
    pub fn check_decided(&self, f: &dyn ExactFunction, limit: usize) -> Result<DecidedPairReport> {
        let n = limit.min(self.pairs.len());
        let bits = self.branch.bits();
        let mut rep = DecidedPairReport {
            indices: n,
            pairs_checked: 0,
            monotone: Verdict::Pass,
            slope_order: Verdict::Pass,
            first_failure: None,
        };
        for r in 0..n {
            for s in 0..n {
                if r == s {
                    continue;
                }
                rep.pairs_checked += 1;
                let (pr, qr) = &self.pairs[r];
                let (ps, qs) = &self.pairs[s];
                if pr <= ps && qr >= qs && !bits[r] && bits[s] {
                    rep.monotone = Verdict::Fail;
                    rep.first_failure.get_or_insert_with(|| {
                        alloc::format!("g({pr}) >= {qr} but g({ps}) <= {qs}")
                    });
                }
                if pr < ps && !bits[r] && bits[s] {
                    let rise = f.eval(ps)? - f.eval(pr)?;
                    if rise > qs - qr {
                        rep.slope_order = Verdict::Fail;
                        rep.first_failure.get_or_insert_with(|| {
                            alloc::format!("f({ps}) - f({pr}) = {rise} > {} >= g({ps}) - g({pr})", qs - qr)
                        });
                    }
                }
            }
        }
        Ok(rep)
    }
}

impl Presentation for BranchPresentation {
    fn member(&self, p: &Rational, q: &Rational) -> Result<Membership> {
        Ok(match PairEnumeration.index_below(p, q, self.branch.len() as u64)? {
            Some(i) => Membership::from_bool(self.branch.bit(i as usize)),
            None => Membership::Undecided,
        })
    }
}

/// Recovered range, modulus values and per-element certificates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecodeReport {
    pub recovered: BTreeSet<u64>,
    pub gamma: BTreeMap<u64, u64>,
    pub undecided: BTreeSet<u64>,
    pub certificates: BTreeMap<u64, String>,
}

/// Recovers `rng(h) ∩ [0, bound)` from a non-decreasing `g` dominating the
/// slopes of the ACA gadget of `h`.
///
/// `γ(n)` is the `k` of the least pair code `⟨m, k⟩` such that
/// `g̃_m(q_n) - g̃_m(q_{n,k}) + 2·2^-m < 2^-n`, where `g̃_m` approximates `g`
/// to within `2^-m`. Then `n ∈ rng(h)` iff `h(k) = n` for some
/// `k < max(γ(n), n + 1)`. Codes are searched up to `max_code`.
pub fn decode_aca(g: &dyn RealFunction, h: &InjectiveMap, bound: u64, max_code: u64) -> Result<DecodeReport> {
    let mut rep = DecodeReport::default();
    for n in 0..bound {
        let qn = aca_point(n);
        let mut cache: BTreeMap<u32, Rational> = BTreeMap::new();
        let mut found = None;
        for code in 0..=max_code {
            let (m, k) = unpair(code);
            let m = m as u32;
            let top = match cache.get(&m) {
                Some(v) => v.clone(),
                None => {
                    let v = g.approx(&qn, m)?;
                    cache.insert(m, v.clone());
                    v
                }
            };
            let lower = g.approx(&aca_stage_point(n, k), m)?;
            let lhs = top - lower + Rational::pow2(1 - m as i64);
            if lhs < Rational::pow2(-(n as i64)) {
                found = Some((m, k));
                break;
            }
        }
        let Some((m, k)) = found else {
            rep.undecided.insert(n);
            rep.certificates.insert(n, alloc::format!("no ⟨m,k⟩ <= {max_code} satisfies θ({n}, m, k)"));
            continue;
        };
        rep.gamma.insert(n, k);
        let limit = k.max(n + 1);
        match (0..limit).find(|&j| h.get(j) == Some(n)) {
            Some(j) => {
                rep.recovered.insert(n);
                rep.certificates.insert(n, alloc::format!("γ = {k} via m = {m}; h({j}) = {n}"));
            }
            None => {
                rep.certificates.insert(n, alloc::format!("γ = {k} via m = {m}; h(j) != {n} for all j < {limit}"));
            }
        }
    }
    Ok(rep)
}

/// `Δ(k) = max { g(0.σ + 2^-k) - g(0.σ) : σ ∈ T, |σ| = k }` for
/// `k = 0..=depth`; an empty level gives `0`.
pub fn level_jumps(g: &dyn ExactFunction, t: &BinaryTree, depth: usize) -> Result<Vec<Rational>> {
    let levels = t.levels(depth)?;
    let mut out = Vec::with_capacity(depth + 1);
    for level in &levels {
        let mut best = Rational::zero();
        for s in level {
            let i = s.interval();
            best = best.max(g.eval(i.right())? - g.eval(i.left())?);
        }
        out.push(best);
    }
    Ok(out)
}

/// Output of the Case-1 decoder.
#[derive(Clone, Debug)]
pub struct Case1Result {
    pub report: DecodeReport,
    pub deltas: Vec<Rational>,
    pub path: DyadicString,
}

/// The Case-1 decoder: recovers the dead strings of `t` (as length-lex
/// codes below `bound`) and walks the leftmost path through the rest.
///
/// `γ(n)` is the least `k <= depth` with `Δ(k) < 2^-n`; then `n ∈ rng(h)`
/// iff `h(k) = n` for some `k <= max(2^γ(n), n)`.
pub fn decode_wkl_case1(
    g: &dyn ExactFunction,
    t: &BinaryTree,
    h: &InjectiveMap,
    bound: u64,
    depth: usize,
    path_len: usize,
) -> Result<Case1Result> {
    if path_len > depth {
        bail!(Budget, "path length {path_len} exceeds the depth {depth}");
    }
    let deltas = level_jumps(g, t, depth)?;
    let mut rep = DecodeReport::default();
    for n in 0..bound {
        let thr = Rational::pow2(-(n as i64));
        let Some(gamma) = deltas.iter().position(|d| d < &thr) else {
            bail!(CaseMismatch, "Δ(k) >= 2^-{n} for every k <= {depth}; try the jump case");
        };
        rep.gamma.insert(n, gamma as u64);
        let limit = if gamma >= 63 { u64::MAX } else { (1u64 << gamma).max(n) };
        match h.preimage(n).filter(|&k| k <= limit) {
            Some(k) => {
                rep.recovered.insert(n);
                rep.certificates.insert(n, alloc::format!("γ = {gamma}; h({k}) = {n}"));
            }
            None => {
                rep.certificates.insert(n, alloc::format!("γ = {gamma}; h(k) != {n} for all k <= {limit}"));
            }
        }
    }
    let dead = |s: &DyadicString| -> Result<bool> {
        let c = s.code().to_u64().filter(|&c| c < bound);
        match c {
            Some(c) => Ok(rep.recovered.contains(&c)),
            None => bail!(Budget, "string {s} has code beyond the decoded bound {bound}"),
        }
    };
    let mut path = DyadicString::empty();
    if !t.contains(&path) || dead(&path)? {
        bail!(CaseMismatch, "the root is not extendible");
    }
    while path.len() < path_len {
        let mut next = None;
        for b in [false, true] {
            let c = path.child(b);
            if t.contains(&c) && !dead(&c)? {
                next = Some(c);
                break;
            }
        }
        match next {
            Some(c) => path = c,
            None => bail!(InvariantViolation, "no extendible child of {path} in the decoded tree"),
        }
    }
    Ok(Case1Result { report: rep, deltas, path })
}

/// `g(y) - g(x) >=_L z`: an in-threshold at `x` and an out-threshold at `y`,
/// both from the grid `L`, at least `z` apart.
pub fn jump_at_least_l<P: Presentation + ?Sized>(
    z: &P,
    x: &Rational,
    y: &Rational,
    grid: &[Rational],
    amount: &Rational,
) -> Result<bool> {
    let mut lowest_in: Option<&Rational> = None;
    for q in grid {
        if z.member(x, q)? == Membership::In {
            lowest_in = Some(q);
            break;
        }
    }
    let Some(a) = lowest_in else { return Ok(false) };
    for q in grid.iter().rev() {
        if z.member(y, q)? == Membership::Out {
            return Ok(q - a >= *amount);
        }
    }
    Ok(false)
}

/// Output of the Case-2 decoder.
#[derive(Clone, Debug)]
pub struct Case2Result {
    pub width_bound: usize,
    pub max_prefix_free: usize,
    pub path: WidthPath,
}

/// The Case-2 decoder: restricts `t` to strings whose interval carries a
/// grid-certified jump of `g` of at least `2^{-M-2}`, checks the prefix-free
/// bound `K·2^{M+2}` and runs the bounded-width path finder.
pub fn decode_wkl_case2<P: Presentation + Sync>(
    z: &P,
    t: &BinaryTree,
    m: u32,
    k: u64,
    depth: usize,
    path_len: usize,
) -> Result<Case2Result> {
    let scale = 1u64 << (m + 2);
    let top = k.checked_mul(scale).filter(|&v| v < (1 << 24));
    let Some(top) = top else { bail!(Range, "grid K·2^(M+2) too large") };
    let grid: Vec<Rational> = (0..=top).map(|i| Rational::new(i as i64, scale as i64)).collect();
    let amount = Rational::pow2(-(m as i64) - 2);
    let levels = t.levels(depth)?;
    let mut hat: BTreeSet<DyadicString> = BTreeSet::new();
    for level in &levels {
        for s in level {
            let i = s.interval();
            if jump_at_least_l(z, i.left(), i.right(), &grid, &amount)? {
                hat.insert(s.clone());
            }
        }
    }
    if let Some(s) = hat.iter().find(|s| s.parent().is_some_and(|p| !hat.contains(&p))) {
        bail!(InvariantViolation, "jump subtree not prefix-closed at {s}");
    }
    if !hat.iter().any(|s| s.len() == depth) {
        bail!(CaseMismatch, "no string of length {depth} carries a jump >=_L 2^-{}", m + 2);
    }
    let that = BinaryTree::explicit(hat, depth)?;
    let width_bound = (k * scale) as usize;
    let anti = max_prefix_free(&that, depth)?;
    if anti.size > width_bound {
        bail!(
            InvariantViolation,
            "prefix-free subset of size {} exceeds K·2^(M+2) = {width_bound}",
            anti.size
        );
    }
    let path = bounded_width_path(&that, width_bound + 1, path_len)?;
    Ok(Case2Result { width_bound, max_prefix_free: anti.size, path })
}

/// Which decoder the selector picked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WklCase {
    Continuous,
    Jump,
}

/// Heuristic case split: a jump case when `Δ(depth) > 2^-M`.
pub fn select_case(g: &dyn ExactFunction, t: &BinaryTree, m: u32, depth: usize) -> Result<WklCase> {
    let deltas = level_jumps(g, t, depth)?;
    Ok(if deltas[depth] > Rational::pow2(-(m as i64)) { WklCase::Jump } else { WklCase::Continuous })
}

/// Budget used when a decoder has to bracket presentation values.
pub fn default_budget() -> SearchBudget {
    SearchBudget::default()
}

/// Length-lex code of `s` as `u64`.
pub fn string_code(s: &DyadicString) -> Result<u64> {
    match s.code().to_u64() {
        Some(c) => Ok(c),
        None => bail!(Range, "string {s} too long to encode"),
    }
}

/// The string with code `c`.
pub fn string_of_code(c: u64) -> DyadicString {
    DyadicString::from_code(&BigUint::from(c))
}
