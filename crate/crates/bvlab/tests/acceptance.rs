//! Acceptance run: one line per criterion, nonzero exit on any failure.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use bvlab_core::deriv::{alternation_search, alternation_union_measure, slope_tree, staircase, staircase_parameters, witness_depth, witness_slope};
use bvlab_core::gadgets::{
    aca_cauchy, aca_gadget, aca_interval, decode_separation, nonext_map, separation_gadget, shipped_family, wkl_cauchy,
    wwkl_cauchy, wwkl_gadget, wwkl_properties, wwkl_sum, InjectiveMap, StagedSet,
};
use bvlab_core::jordan::{decode_aca, decode_wkl_case2, extract_presentation, jordan_first_failure, variation_branch};
use bvlab_core::polyfun::{CauchyName, FromFn, SupDistance};
use bvlab_core::present::{ExactBracket, ExactPresentation};
use bvlab_core::trees::{bounded_width_path, compose_power, max_prefix_free};
use bvlab_core::{BinaryTree, BlockFunction, DyadicString, ExactFunction, PolygonalFunction, Rational, SawtoothBlock};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(res: bvlab_core::Result<T>) -> Result<T, String> {
    res.map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("sawtooth variation identity", sawtooth_variation),
        ("ACA gadget and decoder round trip", aca_round_trip),
        ("Cauchy-name validity of every gadget family", cauchy_validity),
        ("Jordan tree branch and extracted presentation", jordan_tree),
        ("bounded-width path finder", path_finder),
        ("Case-2 width bound", case2_width),
        ("measure composition", measure_composition),
        ("slope-tree certificate", slope_tree_certificate),
        ("WWKL gadget properties and slope witness", wwkl_gadget_properties),
        ("alternation chain", alternation_chain),
        ("separation gadget", separation),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("PASS [{}] {name}: {detail} ({secs:.2} s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name}: {detail} ({secs:.2} s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

/// Sum of `|Δy|` over consecutive breakpoints.
fn breakpoint_variation(pts: &[(Rational, Rational)]) -> Rational {
    pts.windows(2).map(|w| (&w[1].1 - &w[0].1).abs()).sum()
}

fn sawtooth_variation() -> Outcome {
    let start = Instant::now();
    let mut combos: Vec<(Rational, Rational, Rational, u64)> = vec![
        (r(0, 1), r(1, 1), r(1, 1), 1),
        (r(0, 1), r(1, 1), r(1, 2), 3),
        (r(1, 4), r(3, 4), r(2, 1), 5),
        (r(0, 1), r(1, 3), r(1, 7), 8),
        (r(1, 8), r(1, 2), r(5, 3), 16),
        (r(2, 5), r(9, 10), r(3, 11), 7),
    ];
    let aca: [(u64, u64); 6] = [(3, 1), (5, 2), (8, 0), (12, 11), (12, 4), (10, 3)];
    for &(k, n) in &aca {
        let (a, b) = aca_interval(n, k);
        combos.push((a, b, Rational::pow2(-(k as i64)), 1 << (k - n)));
    }
    for (idx, (a, b, v, teeth)) in combos.iter().enumerate() {
        let expect = Rational::from(2) * v * Rational::from(*teeth as i64);
        // own breakpoints: zeros at even multiples of the half tooth, apexes at odd ones
        let half = (b - a) / Rational::from(2 * *teeth as i64);
        let own: Vec<(Rational, Rational)> = (0..=2 * *teeth)
            .map(|i| (a + &(&half * &Rational::from(i as i64)), if i % 2 == 0 { Rational::zero() } else { v.clone() }))
            .collect();
        ensure(breakpoint_variation(&own) == expect, || format!("oracle breakpoints disagree with 2vr for combo {idx}"))?;
        let p = lib(PolygonalFunction::sawtooth(a, b, v, *teeth))?;
        let tv = p.total_variation();
        ensure(tv == expect, || format!("combo {idx}: total_variation {tv} != 2vr = {expect}"))?;
        ensure(breakpoint_variation(p.breakpoints()) == expect, || format!("combo {idx}: breakpoint sum differs"))?;
        for (x, y) in &own {
            let got = lib(p.eval(x))?;
            ensure(&got == y, || format!("combo {idx}: M({x}) = {got}, expected {y}"))?;
        }
        let blk = lib(SawtoothBlock::new(a.clone(), b.clone(), v.clone(), *teeth))?;
        ensure(blk.variation() == expect, || format!("combo {idx}: block variation {}", blk.variation()))?;
    }
    for &(k, n) in &aca {
        let (a, b) = aca_interval(n, k);
        let p = lib(PolygonalFunction::sawtooth(&a, &b, &Rational::pow2(-(k as i64)), 1 << (k - n)))?;
        ensure(p.total_variation() == Rational::pow2(1 - n as i64), || format!("M(2^-{k}, 2^{}) variation is not 2^(1-{n})", k - n))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 1.0, || format!("took {secs:.2} s, limit 1 s"))?;
    Ok(format!("{} combinations exact, 6 ACA parameterizations give 2^(1-h(k))", combos.len()))
}

fn random_injection(g: &mut ChaCha8Rng) -> InjectiveMap {
    let mut values: Vec<u64> = (0..16).collect();
    values.shuffle(g);
    InjectiveMap::new((0..12).map(|k| (k, values[k as usize]))).expect("injective by construction")
}

fn aca_round_trip() -> Outcome {
    let start = Instant::now();
    let mut g = rng(2);
    let mut decided = 0;
    for trial in 0..100 {
        let h = random_injection(&mut g);
        let truth: BTreeSet<u64> = (0..12).filter_map(|k| h.get(k)).filter(|&n| n < 8).collect();
        let v = lib(aca_gadget(&h, 12))?.f.running_variation();
        let dec = lib(decode_aca(&v, &h, 8, 100_000))?;
        ensure(dec.undecided.is_empty(), || format!("trial {trial}: undecided {:?}", dec.undecided))?;
        ensure(dec.recovered == truth, || format!("trial {trial}: recovered {:?}, rng(h) ∩ [0,8) = {truth:?}", dec.recovered))?;
        decided += 8;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 30.0, || format!("took {secs:.2} s, limit 30 s"))?;
    Ok(format!("100 maps, {decided} membership answers match brute force"))
}

/// Blocks keyed by interval and shape.
fn block_keys(f: &BlockFunction) -> BTreeSet<(Rational, Rational, Rational, u64)> {
    f.blocks().iter().map(|b| (b.left().clone(), b.right().clone(), b.height().clone(), b.teeth())).collect()
}

/// Stages whose blocks only accumulate: `sup |f_s - f_t|` is the tallest
/// block present at `t` but not at `s`.
fn check_block_family(name: &str, c: &CauchyName<BlockFunction>) -> Result<usize, String> {
    let rep = lib(c.validate(12))?;
    ensure(rep.violation.is_none(), || format!("{name}: library reports {:?}", rep.violation))?;
    let stages = c.stages();
    let mut pairs = 0;
    for s in 0..=12 {
        let ks = block_keys(&stages[s]);
        for t in s + 1..=12 {
            let kt = block_keys(&stages[t]);
            ensure(ks.is_subset(&kt), || format!("{name}: stage {s} blocks not kept at {t}"))?;
            let sup = kt.difference(&ks).map(|k| k.2.clone()).max().unwrap_or_else(Rational::zero);
            ensure(sup <= Rational::pow2(-(s as i64)), || format!("{name}: sup |f_{s} - f_{t}| = {sup}"))?;
            let got = lib(stages[s].sup_distance(&stages[t]))?;
            ensure(got == sup, || format!("{name}: library sup distance {got} != {sup} at ({s}, {t})"))?;
            pairs += 1;
        }
    }
    Ok(pairs)
}

/// Values of a polygonal function at sorted `xs`, by a linear sweep.
fn sweep(pts: &[(Rational, Rational)], xs: &[Rational]) -> Vec<Rational> {
    let mut j = 0;
    xs.iter()
        .map(|x| {
            while j + 2 < pts.len() && &pts[j + 1].0 <= x {
                j += 1;
            }
            let (x0, y0) = &pts[j];
            let (x1, y1) = &pts[j + 1];
            y0 + &((y1 - y0) * (x - x0) / (x1 - x0))
        })
        .collect()
}

fn own_sup(f: &PolygonalFunction, g: &PolygonalFunction) -> Rational {
    let xs: Vec<Rational> = f.xs().chain(g.xs()).cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let (a, b) = (sweep(f.breakpoints(), &xs), sweep(g.breakpoints(), &xs));
    a.iter().zip(&b).map(|(u, v)| (u - v).abs()).max().unwrap_or_else(Rational::zero)
}

fn random_staged(g: &mut ChaCha8Rng) -> (StagedSet, StagedSet) {
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for e in 0..16u64 {
        match g.gen_range(0..3) {
            0 => a.push((e, g.gen_range(0..24))),
            1 => b.push((e, g.gen_range(0..24))),
            _ => {}
        }
    }
    (StagedSet::new(a), StagedSet::new(b))
}

fn cauchy_validity() -> Outcome {
    let mut g = rng(3);
    let mut pairs = 0;
    let mut families = 0;
    for i in 0..5 {
        let h = random_injection(&mut g);
        pairs += check_block_family(&format!("aca #{i}"), &lib(aca_cauchy(&h, 12))?)?;
        families += 1;
    }
    let mut trees = vec![("comb:5".to_string(), bvlab::inputs::tree("comb:5", 12).map_err(|e| e.to_string())?)];
    for i in 0..3 {
        let (set, cap) = random_tree(&mut g, 12, 5);
        trees.push((format!("random tree #{i}"), lib(BinaryTree::explicit(set, cap))?));
    }
    for (name, t) in &trees {
        let depth = t.cap();
        let h = lib(nonext_map(t, depth, 3))?;
        pairs += check_block_family(&format!("wkl {name}"), &lib(wkl_cauchy(t, &h, 12, depth))?)?;
        families += 1;
    }
    let fam = shipped_family();
    for n in 0..=4 {
        pairs += check_block_family(&format!("wwkl n = {n}"), &lib(wwkl_cauchy(&fam, n, 12))?)?;
        families += 1;
    }
    for i in 0..5 {
        let (a, b) = random_staged(&mut g);
        let sep = lib(separation_gadget(a, b, 15))?;
        let c = lib(sep.cauchy(12))?;
        let rep = lib(c.validate(12))?;
        ensure(rep.violation.is_none(), || format!("separation #{i}: {:?}", rep.violation))?;
        for s in 0..=12 {
            for t in s + 1..=12 {
                let (fs, ft) = (&c.stages()[s], &c.stages()[t]);
                let d = own_sup(fs, ft);
                ensure(d <= Rational::pow2(-(s as i64)), || format!("separation #{i}: sup |f_{s} - f_{t}| = {d}"))?;
                ensure(d == fs.sup_distance(ft), || format!("separation #{i}: library sup differs at ({s}, {t})"))?;
                pairs += 1;
            }
        }
        families += 1;
    }
    Ok(format!("{families} families, {pairs} stage pairs s < t <= 12 within 2^-s"))
}

fn random_polygonal(g: &mut ChaCha8Rng) -> PolygonalFunction {
    let inner = g.gen_range(1..7);
    let mut xs: BTreeSet<i64> = BTreeSet::new();
    while xs.len() < inner {
        xs.insert(g.gen_range(1..32));
    }
    let mut pts = vec![(r(0, 1), r(g.gen_range(-8..=8), 8))];
    for x in xs {
        pts.push((r(x, 32), r(g.gen_range(-8..=8), 8)));
    }
    pts.push((r(1, 1), r(g.gen_range(-8..=8), 8)));
    PolygonalFunction::new(pts).expect("increasing nodes")
}

/// Running variation from the breakpoints, interpolated linearly.
fn own_running_variation(f: &PolygonalFunction, x: &Rational) -> Rational {
    let pts = f.breakpoints();
    let mut acc = Rational::zero();
    for w in pts.windows(2) {
        let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
        let rise = (y1 - y0).abs();
        if x >= x1 {
            acc += &rise;
        } else {
            if x > x0 {
                acc += rise * (x - x0) / (x1 - x0);
            }
            break;
        }
    }
    acc
}

fn jordan_tree() -> Outcome {
    let mut g = rng(4);
    let mut checked = 0;
    for trial in 0..20 {
        let f = random_polygonal(&mut g);
        let m = Rational::from_integer(f.total_variation().ceil()) + Rational::one();
        let b = lib(variation_branch(&f, &m, 200))?;
        ensure(b.len() == 200, || format!("trial {trial}: branch length {}", b.len()))?;
        let fail = lib(jordan_first_failure(&f, &m, &b))?;
        ensure(fail.is_none(), || format!("trial {trial}: branch leaves the tree: {fail:?}"))?;
        let z = lib(extract_presentation(&ExactBracket(&f), &m, &b, 24))?;
        let rep = lib(z.check_decided(&f, 50))?;
        ensure(rep.monotone.as_str() == "pass" && rep.slope_order.as_str() == "pass", || {
            format!("trial {trial}: {:?}", rep.first_failure)
        })?;
        let rows: Vec<_> = z.decided().into_iter().filter(|row| row.0 < 50).collect();
        for (i, p, q, member) in &rows {
            let v = own_running_variation(&f, p);
            let want = &v < q || q >= &m;
            ensure(*member == want, || format!("trial {trial}: index {i} at ({p}, {q}) decided {member}, v = {v}"))?;
        }
        // refutation search: an out-threshold at x and an in-threshold at y
        for (_, x, qx, mx) in &rows {
            for (_, y, qy, my) in &rows {
                if *mx || !*my {
                    continue;
                }
                ensure(!(x <= y && qx >= qy), || format!("trial {trial}: monotonicity refuted at {x}, {y}"))?;
                if x < y {
                    let rise = lib(f.eval(y))? - lib(f.eval(x))?;
                    ensure(rise <= qy - qx, || format!("trial {trial}: slope order refuted at {x}, {y}"))?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("20 functions, branches of length 200 accepted, {checked} decided out/in pairs below 50 unrefuted"))
}

/// Prefix closure of `count` random strings, one of them of length `cap`.
fn random_tree(g: &mut ChaCha8Rng, cap: usize, count: usize) -> (BTreeSet<DyadicString>, usize) {
    let mut set = BTreeSet::new();
    for i in 0..count {
        let len = if i == 0 { cap } else { g.gen_range(0..=cap) };
        let s = DyadicString::from_bits((0..len).map(|_| g.gen_bool(0.5)).collect());
        for j in 0..=len {
            set.insert(s.prefix(j));
        }
    }
    (set, cap)
}

/// All prefix-closed trees inside the full tree of depth `d`.
fn all_trees(d: usize) -> Vec<BTreeSet<DyadicString>> {
    fn below(node: DyadicString, d: usize) -> Vec<BTreeSet<DyadicString>> {
        let mut out = vec![BTreeSet::from([node.clone()])];
        if node.len() == d {
            return out;
        }
        let kid = |b: bool| {
            let mut v = vec![BTreeSet::new()];
            v.extend(below(node.child(b), d));
            v
        };
        let (left, right) = (kid(false), kid(true));
        out.clear();
        for l in &left {
            for rt in &right {
                let mut s: BTreeSet<DyadicString> = l.union(rt).cloned().collect();
                s.insert(node.clone());
                out.push(s);
            }
        }
        out
    }
    below(DyadicString::empty(), d)
}

fn leaves(set: &BTreeSet<DyadicString>) -> usize {
    set.iter().filter(|s| !set.contains(&s.child(false)) && !set.contains(&s.child(true))).count()
}

fn path_finder() -> Outcome {
    let mut cases: Vec<BTreeSet<DyadicString>> = all_trees(3).into_iter().filter(|s| leaves(s) <= 5).collect();
    let exhaustive = cases.len();
    let mut g = rng(5);
    while cases.len() < exhaustive + 80 {
        let cap = g.gen_range(4..=16);
        let count = g.gen_range(1..=5);
        cases.push(random_tree(&mut g, cap, count).0);
    }
    for (i, set) in cases.iter().enumerate() {
        let longest = set.iter().map(|s| s.len()).max().expect("root");
        let want = set.iter().filter(|s| s.len() == longest).min_by(|a, b| a.bits().cmp(b.bits())).expect("nonempty");
        let t = lib(BinaryTree::explicit(set.iter().cloned(), longest))?;
        let width = leaves(set);
        let anti = lib(max_prefix_free(&t, longest))?;
        ensure(anti.size == width, || format!("tree {i}: prefix-free width {} != {width} leaves", anti.size))?;
        let w = lib(bounded_width_path(&t, 6, longest))?;
        ensure(&w.path == want, || format!("tree {i}: path {} != brute-force {want}", w.path))?;
    }
    Ok(format!("{} trees ({exhaustive} exhaustive at depth 3, {} random to depth 16), width <= 5", cases.len(), cases.len() - exhaustive))
}

/// `Σ jump · [x >= at]`.
struct Steps(Vec<(Rational, Rational)>);

impl ExactFunction for Steps {
    fn eval(&self, x: &Rational) -> bvlab_core::Result<Rational> {
        Ok(self.0.iter().filter(|(at, _)| x >= at).map(|(_, j)| j.clone()).sum())
    }
}

fn case2_width() -> Outcome {
    let mut g = rng(6);
    let (m, k) = (1u32, 1u64);
    let scale = 1i64 << (m + 2);
    let grid: Vec<Rational> = (0..=k as i64 * scale).map(|i| r(i, scale)).collect();
    let amount = r(1, scale);
    let mut details = Vec::new();
    for inst in 0..10 {
        let depth = g.gen_range(8..=14);
        let count = g.gen_range(1..=5);
        let (set, _) = random_tree(&mut g, depth, count);
        let t = lib(BinaryTree::explicit(set.iter().cloned(), depth))?;
        let deep: Vec<&DyadicString> = set.iter().filter(|s| s.len() == depth).collect();
        let pi = deep[g.gen_range(0..deep.len())];
        let iv = pi.interval();
        let mut steps = vec![(iv.left() + &(iv.length() / Rational::from(2)), r(1, 4))];
        for _ in 0..g.gen_range(0..=3) {
            steps.push((r(g.gen_range(1..=64), 64), r(1, 4)));
        }
        let f = Steps(steps);
        // T^ by grid arithmetic: least in-threshold above g(l), greatest out-threshold at most g(r)
        let mut hat = BTreeSet::new();
        for s in &set {
            let i = s.interval();
            let (gl, gr) = (lib(f.eval(i.left()))?, lib(f.eval(i.right()))?);
            let a = grid.iter().find(|q| &gl < *q);
            let b = grid.iter().rev().find(|q| *q <= &gr);
            if let (Some(a), Some(b)) = (a, b) {
                if b - a >= amount {
                    hat.insert(s.clone());
                }
            }
        }
        let width = leaves(&hat);
        let bound = (k * scale as u64) as usize;
        let res = lib(decode_wkl_case2(&ExactPresentation(f), &t, m, k, depth, depth))?;
        ensure(res.width_bound == bound, || format!("instance {inst}: width bound {}", res.width_bound))?;
        ensure(res.max_prefix_free == width, || format!("instance {inst}: largest prefix-free {} != oracle {width}", res.max_prefix_free))?;
        ensure(width <= bound, || format!("instance {inst}: width {width} exceeds K 2^(M+2) = {bound}"))?;
        let p = &res.path.path;
        ensure(p.len() == depth && hat.contains(p) && t.contains(p), || format!("instance {inst}: path {p} not in T^"))?;
        details.push(width.to_string());
    }
    Ok(format!("10 instances at depth <= 14, widths {} <= 8", details.join(",")))
}

fn measure_composition() -> Outcome {
    let cap = 12;
    let t = BinaryTree::avoid_prefix("11".parse().expect("literal"), cap);
    let q = r(1, 4);
    let mut n2 = None;
    for n in 1..=4usize {
        let cert = lib(compose_power(&t, &q, n, cap))?;
        let bound = Rational::one() - q.pow(n as i32);
        ensure(cert.bound == bound, || format!("n = {n}: bound {} != 1 - q^n", cert.bound))?;
        let bad = DyadicString::from_bits(vec![true; 2 * n]);
        for d in 0..=cap {
            let kept = DyadicString::all_of_length(d).filter(|s| !bad.is_prefix_of(s)).count();
            let mu = Rational::new(kept as i64, 1 << d);
            ensure(cert.measures[d] == mu, || format!("n = {n}, d = {d}: μ = {}, enumeration gives {mu}", cert.measures[d]))?;
            ensure(mu >= bound, || format!("n = {n}, d = {d}: μ = {mu} below {bound}"))?;
        }
        if n == 2 {
            n2 = Some(cert.measures[cap].clone());
        }
    }
    let n2 = n2.expect("n = 2 ran");
    ensure(n2 == r(15, 16), || format!("n = 2 value {n2}, expected 15/16"))?;
    Ok(format!("n <= 4, d <= 12 match enumeration and 1 - q^n; n = 2 gives {n2}"))
}

fn slope_suite() -> Vec<(&'static str, Box<dyn ExactFunction>)> {
    let poly = |pts: &[(i64, i64, i64, i64)]| {
        PolygonalFunction::new(pts.iter().map(|&(a, b, c, d)| (r(a, b), r(c, d))).collect()).expect("nodes")
    };
    vec![
        ("identity", Box::new(PolygonalFunction::identity())),
        ("x^2", Box::new(FromFn(|x: &Rational| x * x))),
        ("x^3", Box::new(FromFn(|x: &Rational| x * x * x))),
        ("jump 1/2 at 1/2", Box::new(FromFn(|x: &Rational| if x >= &r(1, 2) { r(1, 2) } else { Rational::zero() }))),
        ("jump 1 at 1/3", Box::new(FromFn(|x: &Rational| if x >= &r(1, 3) { Rational::one() } else { Rational::zero() }))),
        ("staircase", Box::new(staircase(6))),
        ("zero", Box::new(PolygonalFunction::constant(Rational::zero()))),
        ("steep ramp", Box::new(poly(&[(0, 1, 0, 1), (1, 4, 0, 1), (5, 16, 1, 2), (1, 1, 1, 1)]))),
        ("x^8", Box::new(FromFn(|x: &Rational| x.pow(8)))),
        ("three jumps", Box::new(Steps(vec![(r(1, 4), r(1, 4)), (r(1, 2), r(1, 4)), (r(3, 4), r(1, 4))]))),
    ]
}

fn slope_tree_certificate() -> Outcome {
    let mut levels = 0;
    for (name, f) in slope_suite() {
        for m in 0..=4u32 {
            let depth = m as usize + 8;
            let st = lib(slope_tree(f.as_ref(), m, depth))?;
            let mut values: BTreeMap<Rational, Rational> = BTreeMap::new();
            let mut at = |x: &Rational| -> Result<Rational, String> {
                if let Some(v) = values.get(x) {
                    return Ok(v.clone());
                }
                let v = lib(f.eval(x))?;
                values.insert(x.clone(), v.clone());
                Ok(v)
            };
            for len in 0..=depth {
                // the slack shrinks with the stage, so s = len - 1 binds
                let s = len.saturating_sub(1);
                let mut keep = BTreeSet::new();
                for sigma in DyadicString::all_of_length(len) {
                    let mut ok = true;
                    for j in 0..=len {
                        let iv = sigma.prefix(j).interval();
                        let rise = at(iv.right())? - at(iv.left())?;
                        let p = (s + j + m as usize + 2) as i64;
                        if rise > Rational::pow2(m as i64 - j as i64) + Rational::pow2(1 - p) {
                            ok = false;
                            break;
                        }
                    }
                    if ok {
                        keep.insert(sigma);
                    }
                }
                let got: BTreeSet<DyadicString> = st.levels[len].iter().cloned().collect();
                ensure(got == keep, || format!("{name}, m = {m}, length {len}: level differs from brute force"))?;
                let excluded = (1usize << len) - keep.len();
                ensure(st.excluded[len] == excluded, || format!("{name}, m = {m}: excluded count at {len}"))?;
                let allowed = if len < m as usize { 0 } else { 1usize << (len - m as usize) };
                ensure(excluded <= allowed, || format!("{name}, m = {m}: {excluded} excluded at length {len} > {allowed}"))?;
                let mu = Rational::new(keep.len() as i64, 1 << len);
                let bound = Rational::one() - Rational::pow2(-(m as i64));
                ensure(mu >= bound, || format!("{name}, m = {m}: μ_{len} = {mu} < {bound}"))?;
                levels += 1;
            }
            ensure(st.count_certificate() && st.measure_certificate(), || format!("{name}, m = {m}: certificate rejected"))?;
        }
    }
    Ok(format!("10 functions, m <= 4, k <= 8: {levels} levels match brute force within 2^k and 1 - 2^-m"))
}

fn wwkl_gadget_properties() -> Outcome {
    let start = Instant::now();
    let fam = shipped_family();
    for n in 0..=4usize {
        let p = lib(wwkl_properties(&fam, n))?;
        ensure(p.holds(), || format!("n = {n}: {p:?}"))?;
        let strings = lib(fam.boundary(n))?;
        let lip = if strings.is_empty() { Rational::zero() } else { Rational::pow2(3 * n as i64 + 1) };
        let mass: Rational = strings.iter().map(|s| Rational::pow2(-(s.len() as i64))).sum();
        let v = Rational::pow2(3 * n as i64 + 1) * mass;
        ensure(p.lipschitz == lip && p.lipschitz <= Rational::pow2(3 * n as i64 + 1), || format!("n = {n}: Lip {} vs {lip}", p.lipschitz))?;
        ensure(p.variation == v && v <= Rational::pow2(1 - n as i64), || format!("n = {n}: V {} vs {v}", p.variation))?;
        let top = strings.iter().map(|s| s.len()).max().unwrap_or(0);
        let fnn = lib(wwkl_gadget(&fam, n, top))?.f;
        let own_lip = fnn.blocks().iter().map(|b| Rational::from(2 * b.teeth() as i64) * b.height() / b.width()).max();
        ensure(own_lip.unwrap_or_else(Rational::zero) == lip, || format!("n = {n}: block slopes disagree"))?;
        let own_v: Rational = fnn.blocks().iter().map(|b| Rational::from(2 * b.teeth() as i64) * b.height()).sum();
        ensure(own_v == v, || format!("n = {n}: block variations disagree"))?;
        // (i): blocks of f_m meet I_σ only through extensions of σ
        let ours: BTreeSet<&DyadicString> = strings.iter().collect();
        for m in n..=fam.n_max() {
            for tau in lib(fam.boundary(m))? {
                let h = Rational::pow2(-2 * m as i64 - tau.len() as i64);
                for j in 0..=tau.len() {
                    let sigma = tau.prefix(j);
                    if ours.contains(&sigma) {
                        ensure(h <= Rational::pow2(-2 * m as i64 - sigma.len() as i64), || format!("f_{m} too tall on I_{sigma}"))?;
                    }
                }
                for sigma in &ours {
                    if sigma.len() > tau.len() && tau.is_prefix_of(sigma) && h > Rational::pow2(-2 * m as i64 - sigma.len() as i64) {
                        return Err(format!("f_{m} block on I_{tau} exceeds the bound on I_{sigma}"));
                    }
                }
            }
        }
    }
    let sum = lib(wwkl_sum(&fam, 4, 64))?;
    let (x, delta) = (r(3, 8), r(1, 16));
    let mut lines = Vec::new();
    for k in [10i64, 100, 1000] {
        let k = Rational::from(k);
        let mut n = 0;
        while Rational::pow2(3 * n as i64 - 1) <= k {
            n += 1;
        }
        ensure(witness_depth(&k) == n, || format!("K = {k}: witness depth {}", witness_depth(&k)))?;
        let w = lib(witness_slope(&fam, &sum, &x, &delta, &k))?;
        ensure(w.n == n, || format!("K = {k}: used n = {}, expected {n}", w.n))?;
        let slope = (lib(sum.eval(&w.b))? - lib(sum.eval(&w.a))?) / (&w.b - &w.a);
        ensure(slope == w.slope, || format!("K = {k}: slope {} vs recomputed {slope}", w.slope))?;
        let tail = Rational::pow2(5 * n as i64 + 1) * Rational::pow2(-8) / Rational::from(3);
        let cert = slope.abs() - &tail;
        ensure(cert > k && w.a <= x && x <= w.b && &w.b - &w.a < delta, || format!("K = {k}: certified {cert} on [{}, {}]", w.a, w.b))?;
        lines.push(format!("K = {k}: n = {n}, {cert}"));
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.2} s, limit 60 s"))?;
    Ok(format!("sup, Lipschitz and variation bounds exact for n <= 4; {}", lines.join("; ")))
}

/// Disjoint union of closed intervals.
fn merge(mut parts: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    parts.sort();
    let mut out: Vec<(Rational, Rational)> = Vec::new();
    for (a, b) in parts {
        if let Some(last) = out.last_mut() {
            if a <= last.1 {
                last.1 = last.1.clone().max(b);
                continue;
            }
        }
        out.push((a, b));
    }
    out
}

fn alternation_chain() -> Outcome {
    let f = staircase(12);
    let (beta, gamma, l) = staircase_parameters();
    let xs = [r(0, 1), r(1, 2)];
    let mut lines = Vec::new();
    for n in 0..=3usize {
        let mut chains = Vec::new();
        for x in &xs {
            let Some(res) = lib(alternation_search(&f, &l, &beta, &gamma, n, x, 16))? else {
                return Err(format!("no chain of depth {n} at {x}"));
            };
            let sub = res.subsequence;
            ensure(sub.intervals.len() == 2 * n + 1, || format!("n = {n}, x = {x}: uniform part has {} intervals", sub.intervals.len()))?;
            let mut prev: Option<(Rational, Rational)> = None;
            for (j, a) in sub.intervals.iter().enumerate() {
                let w = Rational::pow2(-(a.n as i64));
                let lo = (Rational::from(a.i) * &w).max(Rational::zero());
                let hi = (Rational::from(a.i + 1) * &w).min(Rational::one());
                ensure(&lo <= x && x <= &hi, || format!("n = {n}: A_{j} misses {x}"))?;
                let s = (lib(f.eval(&hi))? - lib(f.eval(&lo))?) / (&hi - &lo);
                let ok = if j % 2 == 0 { s < gamma } else { s > beta };
                ensure(ok, || format!("n = {n}, x = {x}: slope {s} on A_{j}"))?;
                if let Some((pl, ph)) = &prev {
                    ensure(pl <= &lo && &hi <= ph && (pl < &lo || &hi < ph), || format!("n = {n}, x = {x}: A_{j} not strictly nested"))?;
                }
                prev = Some((lo, hi));
            }
            ensure(lib(sub.verify(&f, &beta, &gamma))?, || format!("n = {n}, x = {x}: library verify rejects"))?;
            chains.push(sub);
        }
        let u = lib(alternation_union_measure(&chains, &f, &beta, &gamma))?;
        let mut lengths = Vec::new();
        let mut masses = Vec::new();
        for j in 0..=2 * n {
            let parts = chains.iter().filter_map(|c| c.intervals[j].endpoints()).collect();
            let mut len = Rational::zero();
            let mut mass = Rational::zero();
            for (a, b) in merge(parts) {
                mass += lib(f.eval(&b))? - lib(f.eval(&a))?;
                len += b - a;
            }
            lengths.push(len);
            masses.push(mass);
        }
        ensure(u.lengths == lengths && u.masses == masses, || format!("n = {n}: union lengths or masses differ"))?;
        let ratio = &gamma / &beta;
        for i in 0..n {
            let (e, o, e2) = (2 * i, 2 * i + 1, 2 * i + 2);
            ensure(lengths[e2] <= lengths[o], || format!("n = {n}: |Ā_{e2}| > |Ā_{o}|"))?;
            ensure(lengths[o] < &masses[o] / &beta, || format!("n = {n}: |Ā_{o}| >= Δ/β"))?;
            ensure(masses[o] <= masses[e], || format!("n = {n}: Δ(Ā_{o}) > Δ(Ā_{e})"))?;
            ensure(&masses[e] / &beta < &ratio * &lengths[e], || format!("n = {n}: Δ(Ā_{e})/β >= (γ/β)|Ā_{e}|"))?;
        }
        let bound = ratio.pow(n as i32) * &lengths[0];
        ensure(n == 0 || lengths[2 * n] < bound, || format!("n = {n}: |Ā_2n| = {} not below {bound}", lengths[2 * n]))?;
        ensure(u.chain_holds && u.bound == bound, || format!("n = {n}: library chain verdict differs"))?;
        lines.push(format!("n = {n}: {} <= {bound}", lengths[2 * n]));
    }
    Ok(lines.join("; "))
}

fn separation() -> Outcome {
    let mut g = rng(11);
    let mut decided = 0;
    for trial in 0..20 {
        let (a, b) = random_staged(&mut g);
        let (sa, sb) = (a.elements(), b.elements());
        let sep = lib(separation_gadget(a, b, 15))?;
        let last = sep.final_stage();
        let f = lib(sep.stage(last))?;
        ensure(lib(sep.stage(last + 5))? == f, || format!("trial {trial}: stage moves after {last}"))?;
        let (x, open) = lib(decode_separation(&ExactPresentation(f), 15))?;
        for e in 0..16u64 {
            if open.contains(&e) {
                continue;
            }
            decided += 1;
            ensure(!sa.contains(&e) || x.contains(&e), || format!("trial {trial}: {e} ∈ A but not in X"))?;
            ensure(!sb.contains(&e) || !x.contains(&e), || format!("trial {trial}: {e} ∈ B ∩ X"))?;
        }
    }
    Ok(format!("20 pairs, {decided} decided elements respect A ⊆ X and X ∩ B = ∅"))
}

fn leaf_runs(dir: &std::path::Path) -> Vec<Vec<String>> {
    let poly = dir.join("f.polyfun");
    let pres = dir.join("z.ratpres");
    let p = |x: &std::path::Path| x.to_string_lossy().into_owned();
    let runs: Vec<Vec<&str>> = vec![
        vec!["gadget", "aca", "--h", "2:0,3:1", "--stage", "12", "--check-variation"],
        vec!["gadget", "wkl", "--tree", "comb:5", "--depth", "12"],
        vec!["gadget", "wwkl", "--n", "4", "--resolution", "6"],
        vec!["gadget", "jump", "--x", "1/3", "--K", "50"],
        vec!["gadget", "sep", "--a", "1:4,3:2", "--b", "2:5", "--max", "6"],
        vec!["jordan", "tree-member", "--f", "sawtooth:1:2", "--m", "5", "--tau", "00000100"],
        vec!["jordan", "branch", "--f", "sawtooth:1:2", "--m", "5", "--k", "60"],
        vec!["jordan", "decode-aca", "--h", "2:0,3:1,5:4"],
        vec!["jordan", "decode-wkl", "--tree", "comb:5", "--depth", "10"],
        vec!["measure", "level", "--tree", "avoid-prefix:11", "--depth", "8"],
        vec!["measure", "prefix-free", "--tree", "comb:4", "--depth", "8", "--K", "6"],
        vec!["measure", "compose", "--tree", "avoid-prefix:11", "--q", "1/4", "--n", "2", "--depth", "8"],
        vec!["measure", "canonicalize", "--code", "0,01,110"],
        vec!["measure", "tail", "--z", "0110100", "--tree", "avoid-prefix:11", "--n", "3", "--depth", "8"],
        vec!["deriv", "bounds", "--f", "sawtooth:1:2", "--x", "1/3", "--h", "1/2,1/4"],
        vec!["deriv", "witness", "--K", "3,10", "--delta", "1/16", "--x", "3/8"],
        vec!["deriv", "slope-tree", "--f", "identity", "--m", "2", "--k", "4"],
        vec!["deriv", "alternation", "--n", "2"],
        vec!["present", "eval", "--z", "sawtooth:1:2", "--p", "1/3"],
        vec!["present", "validate", "--z", "identity"],
        vec!["present", "shift", "--f", "identity", "--steps", "8"],
    ];
    let mut out: Vec<Vec<String>> = runs.into_iter().map(|r| r.into_iter().map(String::from).collect()).collect();
    out.push(vec!["gadget".into(), "aca".into(), "--h".into(), "4:1".into(), "--export".into(), p(&poly)]);
    out.push(vec!["jordan".into(), "extract".into(), "--f".into(), p(&poly), "--m".into(), "4".into(), "--k".into(), "80".into(), "--export".into(), p(&pres)]);
    out.push(vec!["present".into(), "eval".into(), "--z".into(), p(&pres), "--p".into(), "1/2".into()]);
    out
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_bvlab");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut leaves = BTreeSet::new();
    let runs = leaf_runs(dir.path());
    for args in &runs {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let csv = dir.path().join(format!("out{rep}.csv"));
            let out = Command::new(bin).args(args).arg("--csv").arg(&csv).output().map_err(|e| e.to_string())?;
            let code = out.status.code();
            ensure(matches!(code, Some(0) | Some(2)), || {
                format!("{}: exit {code:?}: {}", args.join(" "), String::from_utf8_lossy(&out.stderr))
            })?;
            let table = std::fs::read(&csv).map_err(|e| e.to_string())?;
            outputs.push((out.stdout, table));
        }
        ensure(outputs[0] == outputs[1], || format!("{}: reports differ between runs", args.join(" ")))?;
        leaves.insert(format!("{} {}", args[0], args[1]));
    }
    Ok(format!("{} runs over {} subcommands byte-identical (report and CSV)", runs.len(), leaves.len()))
}
