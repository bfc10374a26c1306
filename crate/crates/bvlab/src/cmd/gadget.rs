use bvlab_core::deriv::jump_witness;
use bvlab_core::gadgets::{
    aca_cauchy, aca_gadget, aca_interval, jump_function, nonext_map, separation_gadget, shipped_family, wkl_cauchy,
    wkl_gadget, wwkl_cauchy, wwkl_properties, wwkl_sum, GadgetStage, InjectiveMap, StagedSet, BLOCK_LIMIT,
};
use bvlab_core::present::ExactPresentation;
use bvlab_core::{ExactFunction, Rational, Verdict};

use super::{cauchy_row, join, write};
use crate::cli::GadgetCmd;
use crate::error::CliError;
use crate::formats::write_polyfun;
use crate::inputs;
use crate::report::{Report, Table};

pub fn run(cmd: GadgetCmd) -> Result<Report, CliError> {
    match cmd {
        GadgetCmd::Aca { h, stage, check_variation, export } => aca(&h, stage, check_variation, export.as_deref()),
        GadgetCmd::Wkl { tree, depth, delay, stage, export } => wkl(&tree, depth.depth, delay, stage, export.as_deref()),
        GadgetCmd::Wwkl { n, stage, epsilon, resolution } => wwkl(n, stage, &epsilon, resolution),
        GadgetCmd::Jump { x, n, k } => jump(&x, n, &k),
        GadgetCmd::Sep { a, b, max, export } => sep(a, b, max, export.as_deref()),
    }
}

pub(crate) fn map_text(h: &InjectiveMap) -> String {
    join(h.pairs().map(|(k, n)| format!("{k}:{n}")))
}

/// Breakpoints of the stage with the running variation at each.
fn graph_table(g: &GadgetStage) -> Result<(Table, bvlab_core::PolygonalFunction), CliError> {
    let p = g.to_polygonal(BLOCK_LIMIT)?;
    let mut t = Table::new(["x", "f", "v"]);
    for (x, y) in p.breakpoints() {
        t.push([x.to_string(), y.to_string(), g.f.running_variation_at(x).to_string()]);
    }
    Ok((t, p))
}

fn block_rows(rep: &mut Report, g: &GadgetStage, intervals: &[(u64, u64, Rational, Rational)]) {
    for (k, n, a, b) in intervals {
        let bound = Rational::pow2(1 - *n as i64);
        match g.f.blocks().iter().find(|blk| blk.left() == a && blk.right() == b) {
            Some(blk) => {
                let v = blk.variation();
                let verdict = Verdict::from_bool(v == bound);
                let cert = format!("M(2^-{k}, 2^{}) on [{a}, {b}]: 2 * 2^-{k} * 2^{}", k - n, k - n);
                rep.result(format!("V(f, I_{k}) = 2^(1-h({k})) with h({k}) = {n}"), v, Some(bound.to_string()), verdict, cert);
            }
            None => {
                rep.result(format!("V(f, I_{k}) = 2^(1-h({k}))"), "missing", Some(bound.to_string()), Verdict::Fail, format!("no block on [{a}, {b}]"));
            }
        }
    }
}

fn common_rows(rep: &mut Report, g: &GadgetStage, expected_total: Rational) {
    let disjoint = g.blocks_disjoint();
    rep.result("block intervals pairwise interior-disjoint (blocks)", g.f.blocks().len(), None, Verdict::from_bool(disjoint), "exhaustive pairwise comparison");
    let total = g.f.total_variation();
    let verdict = Verdict::from_bool(total == expected_total);
    rep.result("total variation equals the sum of block variations", total, Some(expected_total.to_string()), verdict, "Σ 2^(1-h(k)) over active blocks");
}

fn aca(h: &InjectiveMap, stage: usize, check_variation: bool, export: Option<&std::path::Path>) -> Result<Report, CliError> {
    let mut rep = Report::new("gadget-aca");
    rep.param("h", map_text(h)).param("stage", stage).param("check_variation", check_variation);
    rep.budget("stage", stage);
    let g = aca_gadget(h, stage)?;
    let active: Vec<_> = h
        .active()
        .filter(|&(k, _)| k <= stage as u64)
        .map(|(k, n)| {
            let (a, b) = aca_interval(n, k);
            (k, n, a, b)
        })
        .collect();
    if check_variation {
        block_rows(&mut rep, &g, &active);
    }
    let expected = active.iter().map(|(_, n, _, _)| Rational::pow2(1 - *n as i64)).sum();
    common_rows(&mut rep, &g, expected);
    cauchy_row(&mut rep, &aca_cauchy(h, stage)?, stage)?;
    let (table, p) = graph_table(&g)?;
    rep.table = Some(table);
    if let Some(path) = export {
        write(path, &write_polyfun(&p))?;
    }
    Ok(rep)
}

fn wkl(spec: &str, depth: usize, delay: u64, stage: usize, export: Option<&std::path::Path>) -> Result<Report, CliError> {
    let mut rep = Report::new("gadget-wkl");
    rep.param("tree", spec).param("delay", delay).param("stage", stage);
    rep.budget("depth", depth).budget("stage", stage);
    let t = inputs::tree(spec, depth)?;
    let h = nonext_map(&t, depth, delay)?;
    rep.param("h", map_text(&h));
    let g = wkl_gadget(&t, &h, stage, depth)?;
    let boundary = t.boundary(depth)?;
    let active: Vec<_> = h
        .active()
        .filter(|&(k, _)| k <= stage as u64)
        .map(|(k, n)| {
            let i = boundary[k as usize].interval();
            (k, n, i.left().clone(), i.right().clone())
        })
        .collect();
    block_rows(&mut rep, &g, &active);
    let expected = active.iter().map(|(_, n, _, _)| Rational::pow2(1 - *n as i64)).sum();
    common_rows(&mut rep, &g, expected);
    cauchy_row(&mut rep, &wkl_cauchy(&t, &h, stage, depth)?, stage)?;
    let (table, p) = graph_table(&g)?;
    rep.table = Some(table);
    if let Some(path) = export {
        write(path, &write_polyfun(&p))?;
    }
    Ok(rep)
}

fn wwkl(big_n: usize, stage: usize, epsilon: &Rational, resolution: u32) -> Result<Report, CliError> {
    let mut rep = Report::new("gadget-wwkl");
    rep.param("N", big_n).param("stage", stage).param("epsilon", epsilon).param("family", "complement of {0000,0110}, depth 4");
    rep.budget("stage", stage).budget("resolution", resolution);
    let fam = shipped_family();
    for n in 0..=big_n {
        let p = wwkl_properties(&fam, n)?;
        let cert = format!("{} strings in the boundary of T_{n} (power {})", p.strings, fam.index(n)?);
        rep.result(format!("0 <= f_m <= 2^(-2m-|σ|) on I_σ, σ in T~_{n}, m >= {n}"), p.strings, None, Verdict::from_bool(p.sup_bound), cert.clone());
        rep.result(format!("Lip(f_{n}) <= 2^(3n+1)"), &p.lipschitz, Some(p.lipschitz_bound.to_string()), Verdict::from_bool(p.lipschitz <= p.lipschitz_bound), cert.clone());
        rep.result(format!("V(f_{n}) <= 2^(1-n)"), &p.variation, Some(p.variation_bound.to_string()), Verdict::from_bool(p.variation <= p.variation_bound), cert);
        let up_to = stage.min(12);
        cauchy_row(&mut rep, &wwkl_cauchy(&fam, n, up_to)?, up_to)?;
    }
    let sum = wwkl_sum(&fam, big_n, stage)?;
    let total = sum.certified_variation();
    let bound = sum.general_bound();
    rep.result(format!("Σ_(n<={big_n}) V(f_n) <= Σ 2^(1-n)"), &total, Some(bound.to_string()), Verdict::from_bool(total <= bound), "exact block sums");
    let (n, delta) = sum.continuity_modulus(epsilon)?;
    let half = epsilon / &Rational::from(2);
    let tail = sum.tail_variation(n);
    let cert = format!("n = {n}, δ = {delta}: Lip through n = {}", sum.lipschitz_through(n));
    rep.result("tail variation beyond n below ε/2", &tail, Some(half.to_string()), Verdict::from_bool(tail < half), cert);
    let mut table = Table::new(["x", "f", "v"]);
    let steps = 1i64 << resolution;
    for i in 0..=steps {
        let x = Rational::new(i, steps);
        let v: Rational = sum.parts.iter().map(|p| p.f.running_variation_at(&x)).sum();
        table.push([x.to_string(), sum.eval(&x)?.to_string(), v.to_string()]);
    }
    rep.table = Some(table);
    Ok(rep)
}

fn jump(x: &Rational, n: u32, k: &Rational) -> Result<Report, CliError> {
    let mut rep = Report::new("gadget-jump");
    rep.param("x", x).param("n", n).param("K", k);
    rep.budget("n", n);
    let v = jump_function(x, n);
    let tail = Rational::pow2(-(n as i64) - 1);
    let finer = jump_function(x, n + 16);
    let hi = &v + &tail;
    let ok = v <= finer && finer <= hi;
    let cert = format!("f_(n+16)(x) = {finer} lies in [{v}, {hi}]");
    rep.result("f(x) within 2^(-n-1) above the partial sum", &v, Some(hi.to_string()), Verdict::from_bool(ok), cert);
    let (a, b, s) = jump_witness(x, k)?;
    let ok = &a <= x && x <= &b && &s > k;
    rep.result("S_f(a, b) > K with a <= x <= b", &s, Some(k.to_string()), Verdict::from_bool(ok), format!("a = {a}, b = {b}"));
    Ok(rep)
}

fn sep(a: StagedSet, b: StagedSet, max: u64, export: Option<&std::path::Path>) -> Result<Report, CliError> {
    let mut rep = Report::new("gadget-sep");
    let staged = |s: &StagedSet| join(s.entries.iter().map(|(e, t)| format!("{e}:{t}")));
    rep.param("A", staged(&a)).param("B", staged(&b)).param("max", max);
    let g = separation_gadget(a, b, max)?;
    let last = g.final_stage();
    rep.budget("stage", last);
    let ordered = (0..=last).all(|s| g.nodes_ordered(s));
    rep.result("nodes r_e strictly decreasing and positive at every stage", last, None, Verdict::from_bool(ordered), "checked at stages 0..final");
    cauchy_row(&mut rep, &g.cauchy(last)?, last as usize)?;
    let f = g.stage(last)?;
    let (x, open) = bvlab_core::gadgets::decode_separation(&ExactPresentation(f.clone()), max)?;
    let sa = g.a.elements();
    let sb = g.b.elements();
    let undecided = if open.is_empty() { String::new() } else { format!("; undecided {}", join(&open)) };
    rep.result("A ⊆ X", join(&x), Some(join(&sa)), Verdict::from_bool(sa.is_subset(&x)), format!("X = {{e : f(2^-e) < 2^-e}}{undecided}"));
    rep.result("X ∩ B = ∅", join(&x), Some(join(&sb)), Verdict::from_bool(x.is_disjoint(&sb)), format!("B = {{{}}}", join(&sb)));
    let mut table = Table::new(["x", "f"]);
    for (px, py) in f.breakpoints() {
        table.push([px.to_string(), py.to_string()]);
    }
    rep.table = Some(table);
    if let Some(path) = export {
        write(path, &write_polyfun(&f))?;
    }
    Ok(rep)
}
