//! Sawtooth gadgets: the range-encoding gadget for an injective map, the
//! tree gadget over the boundary of a tree, the measure-tree family and its
//! sum, the rational jump function and the separation gadget.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::error::{bail, Result};
use crate::exactnum::{DyadicString, Rational};
use crate::polyfun::{BlockFunction, CauchyName, ExactFunction, PolygonalFunction, RealFunction, SawtoothBlock};
use crate::present::{unit_rational, Membership, Presentation};
use crate::trees::BinaryTree;

/// Largest number of boundary blocks a gadget stage will materialize.
pub const BLOCK_LIMIT: usize = 1 << 16;

/// A finite injective map `k ↦ h(k)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InjectiveMap {
    forward: BTreeMap<u64, u64>,
    backward: BTreeMap<u64, u64>,
}

impl InjectiveMap {
    pub fn new<I: IntoIterator<Item = (u64, u64)>>(pairs: I) -> Result<Self> {
        let mut m = InjectiveMap::default();
        for (k, n) in pairs {
            if let Some(old) = m.forward.get(&k) {
                if *old != n {
                    bail!(Invalid, "h({k}) given twice: {old} and {n}");
                }
                continue;
            }
            if let Some(j) = m.backward.get(&n) {
                bail!(Invalid, "h is not injective: h({j}) = h({k}) = {n}");
            }
            m.forward.insert(k, n);
            m.backward.insert(n, k);
        }
        Ok(m)
    }

    pub fn get(&self, k: u64) -> Option<u64> {
        self.forward.get(&k).copied()
    }

    pub fn preimage(&self, n: u64) -> Option<u64> {
        self.backward.get(&n).copied()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.forward.iter().map(|(&k, &n)| (k, n))
    }

    pub fn range(&self) -> BTreeSet<u64> {
        self.backward.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// `k` with `k > h(k)`: the indices that receive teeth.
    pub fn active(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.pairs().filter(|&(k, n)| k > n)
    }
}

/// `q_n = 1 - 2^{-n-1}`.
pub fn aca_point(n: u64) -> Rational {
    Rational::one() - Rational::pow2(-(n as i64) - 1)
}

/// `q_{n,s} = q_n - 2^{-n-s-1}`.
pub fn aca_stage_point(n: u64, s: u64) -> Rational {
    aca_point(n) - Rational::pow2(-(n as i64) - (s as i64) - 1)
}

/// `I_k = [q_{h(k),k}, q_{h(k),k+1}]`.
pub fn aca_interval(n: u64, k: u64) -> (Rational, Rational) {
    (aca_stage_point(n, k), aca_stage_point(n, k + 1))
}

/// One stage of a gadget construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetStage {
    pub f: BlockFunction,
    pub stage: usize,
    pub provenance: String,
}

impl GadgetStage {
    pub fn to_polygonal(&self, limit: usize) -> Result<PolygonalFunction> {
        self.f.to_polygonal(limit)
    }

    /// `(left, right, variation)` per block.
    pub fn block_variations(&self) -> Vec<(Rational, Rational, Rational)> {
        self.f.blocks().iter().map(|b| (b.left().clone(), b.right().clone(), b.variation())).collect()
    }

    /// Whether the block intervals are pairwise interior-disjoint, compared
    /// exhaustively.
    pub fn blocks_disjoint(&self) -> bool {
        let bs = self.f.blocks();
        (0..bs.len()).all(|i| (i + 1..bs.len()).all(|j| bs[i].right() <= bs[j].left() || bs[j].right() <= bs[i].left()))
    }
}

impl ExactFunction for GadgetStage {
    fn eval(&self, x: &Rational) -> Result<Rational> {
        self.f.eval(x)
    }
}

fn block(left: Rational, right: Rational, k: u64, n: u64) -> Result<SawtoothBlock> {
    if k - n >= 64 {
        bail!(Range, "2^({k} - {n}) teeth do not fit");
    }
    SawtoothBlock::new(left, right, Rational::pow2(-(k as i64)), 1u64 << (k - n))
}

/// `f_s`: the block `M_{I_k}(2^-k, 2^{k-h(k)})` for every `k` with
/// `s >= k > h(k)`, zero elsewhere.
pub fn aca_gadget(h: &InjectiveMap, s: usize) -> Result<GadgetStage> {
    let mut blocks = Vec::new();
    for (k, n) in h.active().filter(|&(k, _)| k <= s as u64) {
        let (a, b) = aca_interval(n, k);
        blocks.push(block(a, b, k, n)?);
    }
    Ok(GadgetStage { f: BlockFunction::new(blocks)?, stage: s, provenance: alloc::format!("aca h={} s={s}", map_text(h)) })
}

/// Stages `0..=s` of [`aca_gadget`].
pub fn aca_cauchy(h: &InjectiveMap, s: usize) -> Result<CauchyName<BlockFunction>> {
    CauchyName::new((0..=s).map(|t| aca_gadget(h, t).map(|g| g.f)).collect::<Result<_>>()?)
}

fn map_text(h: &InjectiveMap) -> String {
    let parts: Vec<String> = h.pairs().map(|(k, n)| alloc::format!("{k}:{n}")).collect();
    parts.join(",")
}

/// The dead strings of `t` (members with no extension at `depth`) in
/// length-lex order, as codes, assigned to `k = delay, delay + 1, ...`.
///
/// A positive `delay` lets `k > h(k)` happen for small codes, so that the
/// tree gadget gets teeth.
pub fn nonext_map(t: &BinaryTree, depth: usize, delay: u64) -> Result<InjectiveMap> {
    let levels = t.levels(depth)?;
    let mut codes = Vec::new();
    for level in &levels[..depth] {
        for s in level {
            if !t.has_extension_at(s, depth) {
                match s.code().to_u64() {
                    Some(c) => codes.push(c),
                    None => bail!(Range, "code of {s} does not fit"),
                }
            }
        }
    }
    InjectiveMap::new(codes.into_iter().enumerate().map(|(j, c)| (j as u64 + delay, c)))
}

/// The tree gadget: `M_{I_{σ̃_k}}(2^-k, 2^{k-h(k)})` on the `k`-th boundary
/// string of `t` (length-lex, lengths up to `depth`) for every `k` with
/// `s >= k > h(k)`.
pub fn wkl_gadget(t: &BinaryTree, h: &InjectiveMap, s: usize, depth: usize) -> Result<GadgetStage> {
    let boundary = t.boundary(depth)?;
    if boundary.windows(2).any(|w| w[0] >= w[1]) {
        bail!(Invalid, "boundary enumeration is not sorted length-first");
    }
    let mut blocks = Vec::new();
    for (k, n) in h.active().filter(|&(k, _)| k <= s as u64) {
        let Some(sigma) = boundary.get(k as usize) else {
            bail!(Budget, "σ̃_{k} is longer than depth {depth} ({} boundary strings)", boundary.len());
        };
        let i = sigma.interval();
        blocks.push(block(i.left().clone(), i.right().clone(), k, n)?);
    }
    Ok(GadgetStage { f: BlockFunction::new(blocks)?, stage: s, provenance: alloc::format!("wkl h={} s={s} depth={depth}", map_text(h)) })
}

/// Stages `0..=s` of [`wkl_gadget`].
pub fn wkl_cauchy(t: &BinaryTree, h: &InjectiveMap, s: usize, depth: usize) -> Result<CauchyName<BlockFunction>> {
    CauchyName::new((0..=s).map(|u| wkl_gadget(t, h, u, depth).map(|g| g.f)).collect::<Result<_>>()?)
}

/// Powers `T_n = T^{i_n}` of a base tree with measure at least `ε` at its
/// declared depth `D`, together with their boundaries `T̃_n`.
///
/// The base boundary `T̃` is taken up to length `D`; `T̃_n` is the set of
/// concatenations of `i_n` strings of `T̃`, and has measure `m^{i_n}` where
/// `m = 1 - μ_D(T)`.
#[derive(Clone, Debug)]
pub struct TreeFamily {
    pub base: BinaryTree,
    pub epsilon: Rational,
    pub depth: usize,
    pub indices: Vec<usize>,
    pub boundaries: Vec<Vec<DyadicString>>,
    pub measures: Vec<Rational>,
}

/// Least `i >= 1` with `(1 - ε)^i <= 2^{-4n}`.
pub fn power_index(epsilon: &Rational, n: usize) -> Result<usize> {
    if !epsilon.is_positive() || epsilon > &Rational::one() {
        bail!(Range, "ε = {epsilon} must lie in (0, 1]");
    }
    let q = Rational::one() - epsilon;
    let target = Rational::pow2(-4 * n as i64);
    let mut acc = q.clone();
    for i in 1..=4096 {
        if acc <= target {
            return Ok(i);
        }
        acc = &acc * &q;
    }
    bail!(Budget, "no power index below 4096 for ε = {epsilon}, n = {n}");
}

/// Builds the family for `n = 0..=n_max`.
pub fn tree_family_from_pathless(t: &BinaryTree, epsilon: &Rational, depth: usize, n_max: usize) -> Result<TreeFamily> {
    let mu = t.level_measure(depth)?;
    if &mu < epsilon {
        bail!(Invalid, "certificate missing: μ_{depth}(T) = {mu} < ε = {epsilon}");
    }
    let base = t.boundary(depth)?;
    let base_measure: Rational = base.iter().map(|s| Rational::pow2(-(s.len() as i64))).sum();
    let mut fam = TreeFamily {
        base: t.clone(),
        epsilon: epsilon.clone(),
        depth,
        indices: Vec::new(),
        boundaries: Vec::new(),
        measures: Vec::new(),
    };
    for n in 0..=n_max {
        let i = power_index(epsilon, n)?;
        if u32::try_from(i).ok().and_then(|e| base.len().max(1).checked_pow(e)).is_none_or(|c| c > BLOCK_LIMIT) {
            bail!(Budget, "T̃_{n} would have {}^{i} strings", base.len());
        }
        let mut layer = alloc::vec![DyadicString::empty()];
        for _ in 0..i {
            layer = layer.iter().flat_map(|p| base.iter().map(move |b| p.concat(b))).collect();
        }
        layer.sort();
        fam.measures.push(base_measure.pow(i as i32));
        fam.indices.push(i);
        fam.boundaries.push(layer);
    }
    Ok(fam)
}

/// The shipped family: `T` avoids `0000` and `0110`, `ε = 7/8`, `D = 4`,
/// `n <= 4`.
pub fn shipped_family() -> TreeFamily {
    let code = crate::trees::OpenSetCode::new(["0000", "0110"].map(|s| s.parse().expect("literal")));
    tree_family_from_pathless(&code.complement_tree(64), &Rational::new(7, 8), 4, 4).expect("shipped family")
}

impl TreeFamily {
    pub fn n_max(&self) -> usize {
        self.indices.len() - 1
    }

    /// `T_n = T^{i_n}`.
    pub fn member(&self, n: usize) -> Result<BinaryTree> {
        self.base.power(self.index(n)?)
    }

    pub fn index(&self, n: usize) -> Result<usize> {
        match self.indices.get(n) {
            Some(&i) => Ok(i),
            None => bail!(Range, "family has members up to n = {}", self.n_max()),
        }
    }

    pub fn boundary(&self, n: usize) -> Result<&[DyadicString]> {
        self.index(n)?;
        Ok(&self.boundaries[n])
    }

    /// Declared depth past which `T_n` is treated as pathless.
    pub fn pathless_depth(&self, n: usize) -> Result<usize> {
        Ok(self.index(n)? * self.depth)
    }

    /// The block of `f_n` on `I_σ`: `M_{I_σ}(2^{-2n-|σ|}, 2^{5n})`.
    pub fn block(&self, n: usize, sigma: &DyadicString) -> Result<SawtoothBlock> {
        wwkl_block(n, sigma)
    }

    /// The `σ ∈ T̃_n` with `x ∈ I_σ`, preferring the one with `x` interior.
    pub fn covering(&self, n: usize, x: &Rational) -> Result<Option<&DyadicString>> {
        let b = self.boundary(n)?;
        let mut edge = None;
        for s in b {
            let i = s.interval();
            if i.contains_interior(x) {
                return Ok(Some(s));
            }
            if edge.is_none() && i.contains(x) {
                edge = Some(s);
            }
        }
        Ok(edge)
    }
}

/// `M_{I_σ}(2^{-2n-|σ|}, 2^{5n})`.
pub fn wwkl_block(n: usize, sigma: &DyadicString) -> Result<SawtoothBlock> {
    if 5 * n >= 64 {
        bail!(Range, "2^(5·{n}) teeth do not fit");
    }
    let i = sigma.interval();
    SawtoothBlock::new(
        i.left().clone(),
        i.right().clone(),
        Rational::pow2(-2 * n as i64 - sigma.len() as i64),
        1u64 << (5 * n),
    )
}

/// `f_{n,s}`: the blocks of `f_n` with `|σ| <= s`.
pub fn wwkl_gadget(fam: &TreeFamily, n: usize, s: usize) -> Result<GadgetStage> {
    let blocks = fam
        .boundary(n)?
        .iter()
        .filter(|x| x.len() <= s)
        .map(|x| wwkl_block(n, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(GadgetStage { f: BlockFunction::new(blocks)?, stage: s, provenance: alloc::format!("wwkl n={n} s={s}") })
}

/// Stages `0..=s` of [`wwkl_gadget`].
pub fn wwkl_cauchy(fam: &TreeFamily, n: usize, s: usize) -> Result<CauchyName<BlockFunction>> {
    CauchyName::new((0..=s).map(|u| wwkl_gadget(fam, n, u).map(|g| g.f)).collect::<Result<_>>()?)
}

/// Outcome of the exact checks of properties (i)-(iii) for one `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WwklProperties {
    pub n: usize,
    pub strings: usize,
    pub sup_bound: bool,
    pub lipschitz: Rational,
    pub lipschitz_bound: Rational,
    pub variation: Rational,
    pub variation_bound: Rational,
}

impl WwklProperties {
    pub fn holds(&self) -> bool {
        self.sup_bound && self.lipschitz <= self.lipschitz_bound && self.variation <= self.variation_bound
    }
}

/// Checks, for `f_n` at full stage:
///
/// * (i) `0 <= f_m <= 2^{-2m-|σ|}` on `I_σ` for every `σ ∈ T̃_n`, `n <= m <= n_max`;
/// * (ii) the Lipschitz constant is at most `2^{3n+1}`;
/// * (iii) `𝐯_{f_n} <= 2^{1-n}`.
pub fn wwkl_properties(fam: &TreeFamily, n: usize) -> Result<WwklProperties> {
    let full = |m: usize| -> Result<BlockFunction> {
        let s = fam.boundary(m)?.iter().map(|x| x.len()).max().unwrap_or(0);
        Ok(wwkl_gadget(fam, m, s)?.f)
    };
    let fnn = full(n)?;
    let mut sup_bound = true;
    for m in n..=fam.n_max() {
        let fm = full(m)?;
        for sigma in fam.boundary(n)? {
            let i = sigma.interval();
            let bound = Rational::pow2(-2 * m as i64 - sigma.len() as i64);
            for b in fm.blocks() {
                let overlaps = b.left() < i.right() && i.left() < b.right();
                if overlaps && (b.height() > &bound || b.height().is_negative()) {
                    sup_bound = false;
                }
            }
        }
    }
    Ok(WwklProperties {
        n,
        strings: fam.boundary(n)?.len(),
        sup_bound,
        lipschitz: fnn.lipschitz(),
        lipschitz_bound: Rational::pow2(3 * n as i64 + 1),
        variation: fnn.total_variation(),
        variation_bound: Rational::pow2(1 - n as i64),
    })
}

/// `Σ_{n <= N} f_{n,s}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WwklSum {
    pub parts: Vec<GadgetStage>,
}

/// Builds the partial sum up to `big_n` at stage `s`.
pub fn wwkl_sum(fam: &TreeFamily, big_n: usize, s: usize) -> Result<WwklSum> {
    Ok(WwklSum { parts: (0..=big_n).map(|n| wwkl_gadget(fam, n, s)).collect::<Result<_>>()? })
}

impl WwklSum {
    /// `Σ 𝐯_{f_n}`, exact.
    pub fn certified_variation(&self) -> Rational {
        self.parts.iter().map(|p| p.f.total_variation()).sum()
    }

    /// `Σ_{n <= N} 2^{1-n}`.
    pub fn general_bound(&self) -> Rational {
        (0..self.parts.len()).map(|n| Rational::pow2(1 - n as i64)).sum()
    }

    /// Certified bound on `Σ_{j > n} 𝐯_{f_j}`: exact terms up to `N`, plus
    /// `2^{1-N}` for everything beyond.
    pub fn tail_variation(&self, n: usize) -> Rational {
        let big_n = self.parts.len() - 1;
        let exact: Rational = self.parts.iter().skip(n + 1).map(|p| p.f.total_variation()).sum();
        exact + Rational::pow2(1 - big_n as i64)
    }

    pub fn lipschitz_through(&self, n: usize) -> Rational {
        self.parts.iter().take(n + 1).map(|p| p.f.lipschitz()).sum()
    }

    /// `(n, δ)` such that disjoint intervals of total length below `δ`
    /// carry total increment below `ε`: the tail beyond `n` is below `ε/2`
    /// and `δ = ε / (2 Σ_{j<=n} Lip(f_j))`.
    pub fn continuity_modulus(&self, epsilon: &Rational) -> Result<(usize, Rational)> {
        let half = epsilon / &Rational::from(2);
        for n in 0..self.parts.len() {
            if self.tail_variation(n) < half {
                let lip = self.lipschitz_through(n);
                let delta = if lip.is_zero() { Rational::one() } else { &half / &lip };
                return Ok((n, delta));
            }
        }
        bail!(Budget, "tail bound never drops below ε/2 = {half}; increase N");
    }
}

impl ExactFunction for WwklSum {
    fn eval(&self, x: &Rational) -> Result<Rational> {
        let mut acc = Rational::zero();
        for p in &self.parts {
            acc += p.f.eval(x)?;
        }
        Ok(acc)
    }
}

/// `f(p) = Σ_{q_i < p} 2^-i` over the canonical enumeration of
/// `[0,1] ∩ ℚ`.
#[derive(Clone, Copy, Debug, Default)]
pub struct JumpFunction;

/// The partial sum over `i <= n + 1`; the tail is at most `2^{-n-1}`.
pub fn jump_function(p: &Rational, n: u32) -> Rational {
    (0..=u64::from(n) + 1)
        .filter(|&i| &unit_rational(i) < p)
        .map(|i| Rational::pow2(-(i as i64)))
        .sum()
}

impl RealFunction for JumpFunction {
    fn approx(&self, x: &Rational, prec: u32) -> Result<Rational> {
        Ok(jump_function(x, prec))
    }
}

/// A staged enumeration: `(element, stage)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StagedSet {
    pub entries: Vec<(u64, u64)>,
}

impl StagedSet {
    pub fn new<I: IntoIterator<Item = (u64, u64)>>(entries: I) -> Self {
        StagedSet { entries: entries.into_iter().collect() }
    }

    /// Earliest stage at which `e` appears.
    pub fn stage_of(&self, e: u64) -> Option<u64> {
        self.entries.iter().filter(|(x, _)| *x == e).map(|(_, s)| *s).min()
    }

    pub fn elements(&self) -> BTreeSet<u64> {
        self.entries.iter().map(|(e, _)| *e).collect()
    }
}

/// The separation gadget for disjoint staged sets `A`, `B`.
#[derive(Clone, Debug)]
pub struct SeparationGadget {
    pub a: StagedSet,
    pub b: StagedSet,
    pub max_element: u64,
}

/// Stage at which an element `e` entering at stage `t` moves its node.
pub fn adjustment_stage(e: u64, t: u64) -> u64 {
    t.max(2 * e).max(3)
}

/// Builds the gadget after checking `A ∩ B = ∅`.
pub fn separation_gadget(a: StagedSet, b: StagedSet, max_element: u64) -> Result<SeparationGadget> {
    if let Some(e) = a.elements().intersection(&b.elements()).next() {
        bail!(Invalid, "A and B share {e}");
    }
    if let Some(e) = a.elements().union(&b.elements()).find(|&&e| e > max_element) {
        bail!(Range, "element {e} exceeds the declared maximum {max_element}");
    }
    if max_element >= 60 {
        bail!(Range, "max element {max_element} too large");
    }
    Ok(SeparationGadget { a, b, max_element })
}

impl SeparationGadget {
    /// `r_e` as of stage `s`.
    pub fn node_value(&self, e: u64, s: u64) -> Rational {
        let base = Rational::pow2(-(e as i64));
        let adj = |t: u64| {
            let u = adjustment_stage(e, t);
            (u <= s).then(|| Rational::pow2(-(u as i64)))
        };
        if let Some(d) = self.a.stage_of(e).and_then(adj) {
            return base - d;
        }
        if let Some(d) = self.b.stage_of(e).and_then(adj) {
            return base + d;
        }
        base
    }

    /// `f_s`: interpolates `(0, 0)` and `(2^-e, r_e)` for `e <= max_element`.
    pub fn stage(&self, s: u64) -> Result<PolygonalFunction> {
        let mut pts = alloc::vec![(Rational::zero(), Rational::zero())];
        for e in (0..=self.max_element).rev() {
            pts.push((Rational::pow2(-(e as i64)), self.node_value(e, s)));
        }
        PolygonalFunction::new(pts)
    }

    /// Stages `0..=s`.
    pub fn cauchy(&self, s: u64) -> Result<CauchyName<PolygonalFunction>> {
        CauchyName::new((0..=s).map(|t| self.stage(t)).collect::<Result<_>>()?)
    }

    /// Last stage at which any node moves.
    pub fn final_stage(&self) -> u64 {
        self.a.entries.iter().chain(&self.b.entries).map(|&(e, t)| adjustment_stage(e, t)).max().unwrap_or(0)
    }

    /// Whether `r_e` is strictly decreasing in `e` at stage `s`.
    pub fn nodes_ordered(&self, s: u64) -> bool {
        (0..self.max_element).all(|e| self.node_value(e, s) > self.node_value(e + 1, s))
            && self.node_value(self.max_element, s).is_positive()
    }
}

/// `X = {e : (2^-e, 2^-e) ∈ Z}` for `e <= max_element`, with the undecided
/// elements.
pub fn decode_separation<P: Presentation + ?Sized>(z: &P, max_element: u64) -> Result<(BTreeSet<u64>, BTreeSet<u64>)> {
    let mut x = BTreeSet::new();
    let mut open = BTreeSet::new();
    for e in 0..=max_element {
        let p = Rational::pow2(-(e as i64));
        match z.member(&p, &p)? {
            Membership::In => {
                x.insert(e);
            }
            Membership::Out => {}
            Membership::Undecided => {
                open.insert(e);
            }
        }
    }
    Ok((x, open))
}
