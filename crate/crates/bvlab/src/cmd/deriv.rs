use bvlab_core::deriv::{
    alternation_search, alternation_union_measure, polygonal_grid, pseudo_slope_bounds, slope_tree,
    staircase_parameters, witness_slope,
};
use bvlab_core::gadgets::{shipped_family, wwkl_sum};
use bvlab_core::{PolygonalFunction, Rational, Verdict};

use super::join;
use crate::cli::DerivCmd;
use crate::error::CliError;
use crate::inputs::{self, Func};
use crate::report::{Report, Table};

pub fn run(cmd: DerivCmd) -> Result<Report, CliError> {
    match cmd {
        DerivCmd::Bounds { f, x, h, resolution } => bounds(&f, &x, h, resolution),
        DerivCmd::Witness { k, delta, x, big_n, stage } => witness(&k, &delta, &x, big_n, stage),
        DerivCmd::SlopeTree { f, m, k } => {
            let func = inputs::function(&f)?;
            let depth = m as usize + k;
            let mut rep = Report::new("deriv-slope-tree");
            rep.param("f", &f).param("m", m).param("k", k);
            rep.budget("depth", depth);
            let t = slope_tree(&func, m, depth)?;
            let excl = t.excluded[depth];
            let cert = format!("excluded per length: {}", join(&t.excluded));
            rep.result(format!("excluded strings at length m + j at most 2^j for j <= {k}"), excl, Some((1u64 << k.min(63)).to_string()), Verdict::from_bool(t.count_certificate()), cert);
            let mu = t.measures();
            let bound = Rational::one() - Rational::pow2(-(m as i64));
            let min = mu.iter().min().cloned().unwrap_or_else(Rational::one);
            rep.result(format!("μ_n(T_m) >= 1 - 2^-m for n <= {depth}"), &min, Some(bound.to_string()), Verdict::from_bool(t.measure_certificate()), format!("μ = {}", join(&mu)));
            let mut table = Table::new(["len", "excluded", "mu"]);
            for (len, (c, m)) in t.excluded.iter().zip(&mu).enumerate() {
                table.push([len.to_string(), c.to_string(), m.to_string()]);
            }
            rep.table = Some(table);
            Ok(rep)
        }
        DerivCmd::Alternation { f, n, x, depth } => alternation(&f, n, &x, depth),
    }
}

fn default_scales() -> Vec<Rational> {
    (1..=8).map(|k| Rational::pow2(-k)).collect()
}

fn bounds(spec: &str, x: &Rational, h: Option<Vec<Rational>>, resolution: u32) -> Result<Report, CliError> {
    let func = inputs::function(spec)?;
    let scales = h.unwrap_or_else(default_scales);
    let mut rep = Report::new("deriv-bounds");
    rep.param("f", spec).param("x", x).param("h", join(&scales));
    rep.budget("resolution", resolution);
    let mut table = Table::new(["h", "upper", "lower"]);
    let mut prev: Option<(Rational, Rational, Rational)> = None;
    // One grid for every scale, so admissible pairs shrink with h.
    let mut grid = Vec::new();
    for h in &scales {
        match &func {
            Func::Poly(p) => grid.extend(polygonal_grid(p, x, h, resolution)),
            Func::Step { at, .. } => {
                grid.extend(polygonal_grid(&PolygonalFunction::identity(), x, h, resolution));
                grid.push(at.clone());
            }
        }
    }
    grid.sort();
    grid.dedup();
    rep.budget("grid_points", grid.len());
    for h in &scales {
        let e = pseudo_slope_bounds(&func, x, h, &grid)?;
        let cert = format!(
            "upper at ({}, {}), lower at ({}, {}), {} pairs",
            e.upper_pair.0, e.upper_pair.1, e.lower_pair.0, e.lower_pair.1, e.pairs
        );
        rep.result(format!("lower <= upper at h = {h} (upper)"), &e.upper, Some(e.lower.to_string()), Verdict::from_bool(e.lower <= e.upper), cert);
        if let Some((ph, pu, pl)) = &prev {
            if h < ph {
                let ok = e.upper <= *pu && e.lower >= *pl;
                rep.result(format!("bounds nest from h = {ph} to {h} (upper)"), &e.upper, Some(pu.to_string()), Verdict::from_bool(ok), format!("lower {} >= {pl}", e.lower));
            }
        }
        table.push([h.to_string(), e.upper.to_string(), e.lower.to_string()]);
        prev = Some((h.clone(), e.upper, e.lower));
    }
    rep.table = Some(table);
    Ok(rep)
}

fn witness(ks: &[Rational], delta: &Rational, x: &Rational, big_n: usize, stage: usize) -> Result<Report, CliError> {
    let mut rep = Report::new("deriv-witness");
    rep.param("K", join(ks)).param("delta", delta).param("x", x).param("N", big_n).param("family", "complement of {0000,0110}, depth 4");
    rep.budget("stage", stage);
    let fam = shipped_family();
    let sum = wwkl_sum(&fam, big_n, stage)?;
    let mut table = Table::new(["K", "n", "a", "b", "slope"]);
    for k in ks {
        let w = witness_slope(&fam, &sum, x, delta, k)?;
        let c = w.certified();
        let cert = format!("n = {}, σ = {}, [{}, {}], block slope {}, tail {}", w.n, w.sigma, w.a, w.b, w.slope, w.tail);
        let ok = c > *k && &w.a <= x && x <= &w.b;
        rep.result(format!("|S_f(a, b)| > {k}"), &c, Some(k.to_string()), Verdict::from_bool(ok), cert);
        table.push([k.to_string(), w.n.to_string(), w.a.to_string(), w.b.to_string(), c.to_string()]);
    }
    rep.table = Some(table);
    Ok(rep)
}

fn alternation(spec: &str, n: usize, xs: &[Rational], depth: u32) -> Result<Report, CliError> {
    let func = inputs::function(spec)?;
    let (beta, gamma, l) = staircase_parameters();
    let mut rep = Report::new("deriv-alternation");
    rep.param("f", spec).param("n", n).param("x", join(xs)).param("beta", &beta).param("gamma", &gamma);
    rep.param("L", join(l.iter().map(|(p, q)| format!("{p}:{q}"))));
    rep.budget("depth", depth);
    let mut chains = Vec::new();
    for x in xs {
        match alternation_search(&func, &l, &beta, &gamma, n, x, depth)? {
            Some(res) => {
                let ok = res.sequence.verify(&func, &beta, &gamma)? && res.subsequence.verify(&func, &beta, &gamma)?;
                let last = res.subsequence.last();
                let cert = format!("slopes {}", join(&res.sequence.slopes));
                rep.result(format!("alternating chain of depth {n} at x = {x} (last length)"), last.length(), None, Verdict::from_bool(ok), cert);
                chains.push(res.subsequence);
            }
            None => {
                rep.result(format!("alternating chain of depth {n} at x = {x}"), "none", None, Verdict::Undecided, format!("no chain with levels <= {depth}"));
            }
        }
    }
    let u = alternation_union_measure(&chains, &func, &beta, &gamma)?;
    let cert = format!("lengths {}; masses {}", join(&u.lengths), join(&u.masses));
    rep.result(format!("|Ā_{n}| <= (γ/β)^{n} |Ā_0| via the inequality chain"), u.measure(), Some(u.bound.to_string()), Verdict::from_bool(u.chain_holds && u.measure() <= u.bound), cert);
    Ok(rep)
}
