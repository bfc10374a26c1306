//! Binary trees, open-set codes, level measures, tree powers and the
//! bounded-width path finder.
//!
//! A code `S` names the open set of sequences with a prefix in `S`. Its
//! complement tree `T_S` holds the strings none of whose prefixes (the
//! string itself included) lies in `S`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{bail, Result};
use crate::exactnum::{DyadicInterval, DyadicString, Rational};

/// Upper bound on the number of nodes a level scan may visit.
pub const NODE_LIMIT: usize = 1 << 22;

/// A set of strings naming an open subset of Cantor space.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OpenSetCode {
    strings: BTreeSet<DyadicString>,
}

impl OpenSetCode {
    pub fn new<I: IntoIterator<Item = DyadicString>>(strings: I) -> Self {
        OpenSetCode { strings: strings.into_iter().collect() }
    }

    pub fn empty() -> Self {
        OpenSetCode::default()
    }

    pub fn strings(&self) -> &BTreeSet<DyadicString> {
        &self.strings
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.strings.iter().map(DyadicString::len).max().unwrap_or(0)
    }

    /// Some prefix of `s`, possibly `s` itself, is in the code.
    pub fn covers(&self, s: &DyadicString) -> bool {
        (0..=s.len()).any(|n| self.strings.contains(&s.prefix(n)))
    }

    /// The first pair `(a, b)` with `a` a proper prefix of `b`, if any.
    pub fn prefix_conflict(&self) -> Option<(DyadicString, DyadicString)> {
        for b in &self.strings {
            for n in 0..b.len() {
                let a = b.prefix(n);
                if self.strings.contains(&a) {
                    return Some((a, b.clone()));
                }
            }
        }
        None
    }

    /// `μ(S) = Σ 2^{-|σ|}`, defined here only for prefix-free codes.
    pub fn prefix_free_measure(&self) -> Result<Rational> {
        if let Some((a, b)) = self.prefix_conflict() {
            bail!(Invalid, "code is not prefix-free: {a} is a prefix of {b}");
        }
        Ok(self.strings.iter().map(|s| Rational::pow2(-(s.len() as i64))).sum())
    }

    /// `T_S`, materializable up to `cap`.
    pub fn complement_tree(&self, cap: usize) -> BinaryTree {
        BinaryTree { kind: TreeKind::Complement(Arc::new(self.clone())), cap }
    }
}

/// How [`canonicalize_code`] rewrites a code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CanonicalMode {
    /// `{ σ 0^k 1 : σ ∈ S, k < padding }`.
    General { padding: usize },
    /// `{ σ 0^i }` for a point of the form `σ 0^∞`.
    DyadicPoint { sigma: DyadicString, i: usize },
}

pub fn canonicalize_code(code: &OpenSetCode, mode: &CanonicalMode) -> OpenSetCode {
    match mode {
        CanonicalMode::General { padding } => {
            let mut out = BTreeSet::new();
            for s in &code.strings {
                let mut t = s.clone();
                for _ in 0..*padding {
                    out.insert(t.child(true));
                    t.push(false);
                }
            }
            OpenSetCode { strings: out }
        }
        CanonicalMode::DyadicPoint { sigma, i } => {
            let zeros = DyadicString::from_bits(alloc::vec![false; *i]);
            OpenSetCode::new([sigma.concat(&zeros)])
        }
    }
}

type Predicate = dyn Fn(&DyadicString) -> bool + Send + Sync;

#[derive(Clone)]
enum TreeKind {
    Full,
    Complement(Arc<OpenSetCode>),
    Explicit(Arc<BTreeSet<DyadicString>>),
    Power(Arc<BinaryTree>, usize),
    Predicate(Arc<Predicate>),
}

/// A prefix-closed set of strings with decidable membership and a depth cap
/// for materialization.
#[derive(Clone)]
pub struct BinaryTree {
    kind: TreeKind,
    cap: usize,
}

impl fmt::Debug for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            TreeKind::Full => alloc::string::String::from("full"),
            TreeKind::Complement(s) => alloc::format!("complement of {:?}", s.strings),
            TreeKind::Explicit(s) => alloc::format!("explicit ({} strings)", s.len()),
            TreeKind::Power(t, n) => alloc::format!("power {n} of {t:?}"),
            TreeKind::Predicate(_) => alloc::string::String::from("predicate"),
        };
        write!(f, "BinaryTree({kind}, cap {})", self.cap)
    }
}

/// Greedy block parse of `s` against `t`: the number of boundary blocks
/// stripped and the start of the final block.
fn parse_blocks(t: &BinaryTree, s: &DyadicString, limit: usize) -> Option<(usize, usize)> {
    let mut start = 0;
    let mut blocks = 0;
    'outer: loop {
        let mut block = DyadicString::empty();
        if !t.contains(&block) {
            return None;
        }
        let from = start;
        for i in from..s.len() {
            block.push(s.bit(i));
            if !t.contains(&block) {
                blocks += 1;
                if blocks > limit {
                    return None;
                }
                start = i + 1;
                continue 'outer;
            }
        }
        return Some((blocks, start));
    }
}

impl BinaryTree {
    pub fn full(cap: usize) -> Self {
        BinaryTree { kind: TreeKind::Full, cap }
    }

    /// The explicit tree on `strings`, which must be prefix-closed.
    pub fn explicit<I: IntoIterator<Item = DyadicString>>(strings: I, cap: usize) -> Result<Self> {
        let set: BTreeSet<DyadicString> = strings.into_iter().collect();
        for s in &set {
            if let Some(p) = s.parent() {
                if !set.contains(&p) {
                    bail!(Invalid, "tree not prefix-closed: {s} present but {p} missing");
                }
            }
        }
        Ok(BinaryTree { kind: TreeKind::Explicit(Arc::new(set)), cap })
    }

    /// `T_{{σ}}`, the strings with no prefix equal to `σ`.
    pub fn avoid_prefix(sigma: DyadicString, cap: usize) -> Self {
        OpenSetCode::new([sigma]).complement_tree(cap)
    }

    /// A tree given by a membership predicate. The predicate must be
    /// prefix-closed; see [`BinaryTree::validate_prefix_closed`].
    pub fn from_predicate<F>(pred: F, cap: usize) -> Self
    where
        F: Fn(&DyadicString) -> bool + Send + Sync + 'static,
    {
        BinaryTree { kind: TreeKind::Predicate(Arc::new(pred)), cap }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn with_cap(&self, cap: usize) -> Self {
        BinaryTree { kind: self.kind.clone(), cap }
    }

    pub fn contains(&self, s: &DyadicString) -> bool {
        match &self.kind {
            TreeKind::Full => true,
            TreeKind::Complement(code) => !code.covers(s),
            TreeKind::Explicit(set) => set.contains(s),
            TreeKind::Power(base, n) => parse_blocks(base, s, n - 1).is_some(),
            TreeKind::Predicate(p) => p(s),
        }
    }

    fn check_depth(&self, n: usize) -> Result<()> {
        if n > self.cap {
            bail!(Budget, "depth {n} exceeds the tree's cap {}", self.cap);
        }
        Ok(())
    }

    /// Levels `0..=depth`, found by expanding children of members.
    pub fn levels(&self, depth: usize) -> Result<Vec<Vec<DyadicString>>> {
        self.check_depth(depth)?;
        let mut out = Vec::with_capacity(depth + 1);
        let root = DyadicString::empty();
        let mut cur = if self.contains(&root) { alloc::vec![root] } else { Vec::new() };
        let mut visited = cur.len();
        out.push(cur.clone());
        for _ in 0..depth {
            let mut next = Vec::with_capacity(cur.len() * 2);
            for s in &cur {
                for b in [false, true] {
                    let c = s.child(b);
                    if self.contains(&c) {
                        next.push(c);
                    }
                }
            }
            visited += next.len();
            if visited > NODE_LIMIT {
                bail!(Budget, "level scan exceeds {NODE_LIMIT} nodes");
            }
            out.push(next.clone());
            cur = next;
        }
        Ok(out)
    }

    pub fn level(&self, n: usize) -> Result<Vec<DyadicString>> {
        Ok(self.levels(n)?.pop().expect("levels include n"))
    }

    /// `|{σ ∈ T : |σ| = n}| / 2^n`.
    pub fn level_measure(&self, n: usize) -> Result<Rational> {
        let count = self.level(n)?.len();
        Ok(Rational::from(count as i64) * Rational::pow2(-(n as i64)))
    }

    /// All level measures `μ_0, ..., μ_depth`.
    pub fn level_measures(&self, depth: usize) -> Result<Vec<Rational>> {
        Ok(self
            .levels(depth)?
            .iter()
            .enumerate()
            .map(|(n, l)| Rational::from(l.len() as i64) * Rational::pow2(-(n as i64)))
            .collect())
    }

    /// Checks every string up to `depth` exhaustively; returns the first
    /// member whose parent is missing.
    pub fn validate_prefix_closed(&self, depth: usize) -> Result<()> {
        self.check_depth(depth)?;
        if depth >= 23 {
            bail!(Budget, "exhaustive prefix check to depth {depth} is too large");
        }
        let mut prev: Vec<bool> = alloc::vec![self.contains(&DyadicString::empty())];
        for n in 1..=depth {
            let mut cur = Vec::with_capacity(1 << n);
            for (v, s) in DyadicString::all_of_length(n).enumerate() {
                let inside = self.contains(&s);
                if inside && !prev[v >> 1] {
                    bail!(Invalid, "tree not prefix-closed: {s} present but its parent is missing");
                }
                cur.push(inside);
            }
            prev = cur;
        }
        Ok(())
    }

    /// `τ ∉ T` with parent in `T`, for `|τ| <= depth`, in length-lex order.
    pub fn boundary(&self, depth: usize) -> Result<Vec<DyadicString>> {
        if depth == 0 {
            return Ok(Vec::new());
        }
        let levels = self.levels(depth - 1)?;
        let mut out = Vec::new();
        for level in &levels {
            for s in level {
                for b in [false, true] {
                    let c = s.child(b);
                    if !self.contains(&c) {
                        out.push(c);
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Whether some extension of `s` of length `d` lies in `T`.
    pub fn has_extension_at(&self, s: &DyadicString, d: usize) -> bool {
        if !self.contains(s) {
            return false;
        }
        if s.len() >= d {
            return s.len() == d;
        }
        let mut frontier = alloc::vec![s.clone()];
        for _ in s.len()..d {
            let mut next = Vec::new();
            for t in &frontier {
                for b in [false, true] {
                    let c = t.child(b);
                    if self.contains(&c) {
                        next.push(c);
                    }
                }
            }
            if next.is_empty() {
                return false;
            }
            frontier = next;
        }
        true
    }

    /// `T^n`: concatenations of fewer than `n` boundary blocks followed by a
    /// member of `T`.
    pub fn power(&self, n: usize) -> Result<BinaryTree> {
        if n == 0 {
            bail!(Invalid, "tree power needs n >= 1");
        }
        if n == 1 {
            return Ok(self.clone());
        }
        Ok(BinaryTree { kind: TreeKind::Power(Arc::new(self.clone()), n), cap: self.cap })
    }
}

/// Certified level measures of a tree power.
#[derive(Clone, Debug)]
pub struct PowerCertificate {
    pub tree: BinaryTree,
    pub n: usize,
    pub q: Rational,
    /// `1 - q^n`.
    pub bound: Rational,
    /// `μ_d(T^n)` for `d = 0..=depth`.
    pub measures: Vec<Rational>,
}

impl PowerCertificate {
    pub fn min_measure(&self) -> &Rational {
        self.measures.iter().min().expect("depth 0 included")
    }
}

/// Builds `T^n` and certifies `μ_d(T^n) >= 1 - q^n` for every `d <= depth`.
///
/// The base must itself satisfy `μ_depth(T) >= 1 - q`.
pub fn compose_power(t: &BinaryTree, q: &Rational, n: usize, depth: usize) -> Result<PowerCertificate> {
    if q.is_negative() || q > &Rational::one() {
        bail!(Range, "q = {q} outside [0,1]");
    }
    let base = t.level_measure(depth)?;
    let one = Rational::one();
    if base < &one - q {
        bail!(Invalid, "base tree has μ_{depth} = {base} < 1 - {q}");
    }
    let tree = t.power(n)?;
    let measures = tree.level_measures(depth)?;
    let bound = &one - q.pow(n as i32);
    let best = measures.iter().min().expect("nonempty").clone();
    if best < bound {
        bail!(Budget, "certified only μ(T^{n}) >= {best} at depth {depth}, short of {bound}");
    }
    Ok(PowerCertificate { tree, n, q: q.clone(), bound, measures })
}

/// The tail of `z` after its maximal decomposition into boundary blocks of
/// `t`, using at most `n - 1` blocks.
pub fn tail_extract(z: &DyadicString, t: &BinaryTree, n: usize) -> Result<DyadicString> {
    if n == 0 {
        bail!(Invalid, "tree power needs n >= 1");
    }
    match parse_blocks(t, z, n - 1) {
        Some((_, start)) => Ok(z.suffix_from(start)),
        None => bail!(Invalid, "{z} is not in T^{n}"),
    }
}

/// The reals consistent with a finite prefix.
pub fn pi_map(prefix: &DyadicString) -> DyadicInterval {
    prefix.interval()
}

/// A largest prefix-free subset of the materialized tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Antichain {
    pub size: usize,
    pub members: Vec<DyadicString>,
}

/// Maximum prefix-free subset of `t` within depth `depth`.
///
/// Dynamic programming over the materialized tree:
/// `w(σ) = max(1, Σ w(children))`. The witness takes a node itself whenever
/// its children cannot do better, so each witness member spans a chain.
pub fn max_prefix_free(t: &BinaryTree, depth: usize) -> Result<Antichain> {
    let levels = t.levels(depth)?;
    if levels[0].is_empty() {
        return Ok(Antichain { size: 0, members: Vec::new() });
    }
    let mut width: BTreeMap<DyadicString, BigUint> = BTreeMap::new();
    for level in levels.iter().rev() {
        for s in level {
            let kids: BigUint = [false, true].iter().filter_map(|&b| width.get(&s.child(b))).sum();
            let w = if kids > BigUint::one() { kids } else { BigUint::one() };
            width.insert(s.clone(), w);
        }
    }
    let root = DyadicString::empty();
    let size = width[&root].clone();
    let mut members = Vec::new();
    let mut stack = alloc::vec![root];
    while let Some(s) = stack.pop() {
        let kids: Vec<DyadicString> =
            [true, false].iter().map(|&b| s.child(b)).filter(|c| width.contains_key(c)).collect();
        let sum: BigUint = kids.iter().map(|c| &width[c]).sum();
        if sum > BigUint::one() {
            stack.extend(kids);
        } else {
            members.push(s);
        }
    }
    members.sort();
    let size = match usize::try_from(&size) {
        Ok(s) => s,
        Err(_) => bail!(Budget, "antichain size {size} overflows"),
    };
    debug_assert!(!members.is_empty() || size.is_zero());
    Ok(Antichain { size, members })
}

/// Output of [`bounded_width_path`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WidthPath {
    pub path: DyadicString,
    pub antichain: Antichain,
    /// The antichain member the path runs through.
    pub member: DyadicString,
    pub cap: usize,
}

/// A length-`n` member of `t` below which `t` reaches its cap, following the
/// bounded-width argument: take a largest prefix-free `P`, keep the members
/// that still have extensions at the cap (each spans a chain), and follow
/// the lexicographically least of them.
pub fn bounded_width_path(t: &BinaryTree, k: usize, n: usize) -> Result<WidthPath> {
    let cap = t.cap();
    if cap < n {
        bail!(Budget, "cap {cap} is below the requested length {n}");
    }
    let anti = max_prefix_free(t, cap)?;
    if anti.size >= k {
        bail!(
            Invalid,
            "prefix-free subset of size {} violates the bound < {k}: {:?}",
            anti.size,
            anti.members
        );
    }
    let member = anti
        .members
        .iter()
        .filter(|m| t.has_extension_at(m, cap))
        .min_by(|a, b| a.bits().cmp(b.bits()))
        .cloned();
    let Some(member) = member else {
        bail!(Budget, "no node reaches the cap {cap}");
    };
    let mut s = member.clone();
    while s.len() < cap {
        let succ: Vec<DyadicString> =
            [false, true].iter().map(|&b| s.child(b)).filter(|c| t.has_extension_at(c, cap)).collect();
        if succ.len() != 1 {
            bail!(InvariantViolation, "antichain member {member} does not span a chain at {s}");
        }
        s = succ.into_iter().next().expect("one successor");
    }
    let path = if n <= member.len() { member.prefix(n) } else { s.prefix(n) };
    Ok(WidthPath { path, antichain: anti, member, cap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn s(t: &str) -> DyadicString {
        t.parse().unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn comb(teeth: usize, cap: usize) -> BinaryTree {
        BinaryTree::from_predicate(
            move |x: &DyadicString| {
                let ones = x.bits().iter().filter(|&&b| b).count();
                ones == 0 || (ones == 1 && x.bit(x.len() - 1) && x.len() - 1 < teeth)
            },
            cap,
        )
    }

    #[test]
    fn complement_examples() {
        let full = OpenSetCode::empty().complement_tree(8);
        assert_eq!(full.level_measure(6).unwrap(), r(1, 1));
        let t = OpenSetCode::new([s("1")]).complement_tree(8);
        assert_eq!(t.level(2).unwrap(), vec![s("00"), s("01")]);
        assert_eq!(t.level_measure(2).unwrap(), r(1, 2));
        let t = BinaryTree::avoid_prefix(s("11"), 12);
        for n in 2..=12 {
            assert_eq!(t.level_measure(n).unwrap(), r(3, 4));
        }
    }

    #[test]
    fn level_measure_examples() {
        assert_eq!(BinaryTree::full(5).level_measure(5).unwrap(), r(1, 1));
        let root = BinaryTree::explicit([DyadicString::empty()], 4).unwrap();
        assert_eq!(root.level_measure(1).unwrap(), r(0, 1));
        assert_eq!(BinaryTree::avoid_prefix(s("11"), 5).level_measure(5).unwrap(), r(24, 32));
        assert!(BinaryTree::full(3).level_measure(4).is_err());
    }

    #[test]
    fn prefix_free_examples() {
        assert_eq!(OpenSetCode::new([s("0")]).prefix_free_measure().unwrap(), r(1, 2));
        assert_eq!(OpenSetCode::new([s("00"), s("01"), s("10")]).prefix_free_measure().unwrap(), r(3, 4));
        assert_eq!(OpenSetCode::empty().prefix_free_measure().unwrap(), r(0, 1));
        let err = OpenSetCode::new([s("0"), s("01")]).prefix_free_measure().unwrap_err();
        assert!(alloc::format!("{err}").contains("01"));
    }

    #[test]
    fn boundary_examples() {
        assert_eq!(BinaryTree::avoid_prefix(s("11"), 8).boundary(8).unwrap(), vec![s("11")]);
        assert!(BinaryTree::full(8).boundary(8).unwrap().is_empty());
        let root = BinaryTree::explicit([DyadicString::empty()], 4).unwrap();
        assert_eq!(root.boundary(4).unwrap(), vec![s("0"), s("1")]);
    }

    #[test]
    fn compose_examples() {
        let t = BinaryTree::avoid_prefix(s("11"), 6);
        let c = compose_power(&t, &r(1, 4), 2, 6).unwrap();
        assert_eq!(c.measures[4], r(15, 16));
        assert_eq!(c.bound, r(15, 16));
        let one = compose_power(&t, &r(1, 4), 1, 6).unwrap();
        for d in 0..=6 {
            assert_eq!(one.measures[d], t.level_measure(d).unwrap());
        }
        let full = compose_power(&BinaryTree::full(6), &r(0, 1), 3, 6).unwrap();
        assert!(full.measures.iter().all(|m| m == &r(1, 1)));
        assert!(compose_power(&t, &r(1, 8), 2, 6).is_err());
    }

    #[test]
    fn tail_examples() {
        let t = BinaryTree::avoid_prefix(s("11"), 12);
        assert_eq!(tail_extract(&s("11010"), &t, 2).unwrap(), s("010"));
        assert_eq!(tail_extract(&s("0100"), &t, 2).unwrap(), s("0100"));
        assert_eq!(tail_extract(&s("11110"), &t, 3).unwrap(), s("0"));
        assert!(tail_extract(&s("11110"), &t, 2).is_err());
    }

    #[test]
    fn canonicalize_examples() {
        let c = canonicalize_code(&OpenSetCode::new([s("1")]), &CanonicalMode::General { padding: 2 });
        assert_eq!(c, OpenSetCode::new([s("11"), s("101")]));
        assert!(canonicalize_code(&OpenSetCode::empty(), &CanonicalMode::General { padding: 3 }).is_empty());
        let before = OpenSetCode::new([s("1")]).complement_tree(3).level_measure(3).unwrap();
        let after = c.complement_tree(3).level_measure(3).unwrap();
        assert!(after >= before);
        let d = canonicalize_code(&OpenSetCode::empty(), &CanonicalMode::DyadicPoint { sigma: s("01"), i: 3 });
        assert_eq!(d, OpenSetCode::new([s("01000")]));
        assert_eq!(d.prefix_free_measure().unwrap(), r(1, 32));
    }

    #[test]
    fn path_examples() {
        let t = comb(5, 12);
        assert_eq!(bounded_width_path(&t, 7, 12).unwrap().path, s("000000000000"));
        let t = BinaryTree::from_predicate(|x: &DyadicString| x.len() <= 3 || x.bits().iter().all(|&b| b), 10);
        assert_eq!(bounded_width_path(&t, 9, 10).unwrap().path, s("1111111111"));
        let alt = BinaryTree::from_predicate(|x: &DyadicString| x.bits().iter().enumerate().all(|(i, &b)| b == (i % 2 == 1)), 8);
        assert_eq!(bounded_width_path(&alt, 2, 8).unwrap().path, s("01010101"));
        assert!(bounded_width_path(&BinaryTree::full(6), 5, 6).is_err());
        assert!(bounded_width_path(&alt, 2, 9).is_err());
    }

    #[test]
    fn max_prefix_free_small() {
        let a = max_prefix_free(&comb(5, 12), 12).unwrap();
        assert_eq!(a.size, 6);
        assert_eq!(a.members.len(), 6);
        let a = max_prefix_free(&BinaryTree::full(3), 3).unwrap();
        assert_eq!(a.size, 8);
    }

    #[test]
    fn prefix_closure_validation() {
        assert!(BinaryTree::explicit([s("0")], 3).is_err());
        let bad = BinaryTree::from_predicate(|x: &DyadicString| x.len() != 1, 3);
        assert!(bad.validate_prefix_closed(3).is_err());
        assert!(BinaryTree::avoid_prefix(s("101"), 6).validate_prefix_closed(6).is_ok());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn code() -> impl Strategy<Value = OpenSetCode> {
            proptest::collection::vec((1usize..6, any::<u64>()), 0..5).prop_map(|v| {
                OpenSetCode::new(v.into_iter().map(|(len, bits)| {
                    DyadicString::from_bits((0..len).map(|i| bits >> i & 1 == 1).collect())
                }))
            })
        }

        proptest! {
            #[test]
            fn level_measure_nonincreasing(c in code()) {
                let m = c.complement_tree(10).level_measures(10).unwrap();
                for w in m.windows(2) {
                    prop_assert!(w[1] <= w[0]);
                }
            }

            #[test]
            fn prefix_free_complement_sum(len in 1usize..6, picks in any::<u32>()) {
                let c = OpenSetCode::new(DyadicString::all_of_length(len).filter(|x| {
                    let v = x.value().iter_u64_digits().next().unwrap_or(0);
                    picks >> (v % 32) & 1 == 1
                }));
                let m = c.prefix_free_measure().unwrap() + c.complement_tree(len).level_measure(len).unwrap();
                prop_assert_eq!(m, Rational::one());
            }

            #[test]
            fn power_bound_holds(c in code(), n in 1usize..4) {
                let t = c.complement_tree(9);
                let q = Rational::one() - t.level_measure(9).unwrap();
                let cert = compose_power(&t, &q, n, 9);
                prop_assert!(cert.is_ok(), "{:?}", cert.err());
            }

            #[test]
            fn canonicalize_never_shrinks(c in code(), padding in 1usize..6) {
                let t = c.complement_tree(9);
                let u = canonicalize_code(&c, &CanonicalMode::General { padding }).complement_tree(9);
                let a = t.level_measures(9).unwrap();
                let b = u.level_measures(9).unwrap();
                for (x, y) in a.iter().zip(&b) {
                    prop_assert!(y >= x);
                }
            }
        }
    }
}
