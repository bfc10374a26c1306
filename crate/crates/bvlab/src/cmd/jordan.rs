use std::collections::BTreeSet;

use bvlab_core::gadgets::{aca_gadget, nonext_map, wkl_gadget};
use bvlab_core::jordan::{
    decode_aca, decode_wkl_case1, decode_wkl_case2, extract_presentation, jordan_first_failure, jordan_tree_check,
    select_case, string_of_code, variation_branch, WklCase,
};
use bvlab_core::polyfun::CumulativeVariation;
use bvlab_core::present::{ExactBracket, ExactPresentation};
use bvlab_core::{ExactFunction, Rational, Verdict};

use super::gadget::map_text;
use super::{join, write};
use crate::cli::{CaseArg, JordanCmd};
use crate::error::CliError;
use crate::formats::write_ratpres;
use crate::inputs::{self, Func};
use crate::report::Report;

pub fn run(cmd: JordanCmd) -> Result<Report, CliError> {
    match cmd {
        JordanCmd::TreeMember { f, m, tau, precision } => {
            let func = inputs::function(&f)?;
            let mut rep = Report::new("jordan-tree-member");
            rep.param("f", &f).param("m", &m).param("tau", &tau);
            rep.budget("precision", precision);
            let (verdict, cert) = jordan_tree_check(&ExactBracket(&func), &m, &tau, precision)?;
            rep.result("tau is in the Jordan tree", tau.len(), None, verdict, cert);
            Ok(rep)
        }
        JordanCmd::Branch { f, m, k } => {
            let func = inputs::function(&f)?;
            let p = func.polygonal()?;
            let mut rep = Report::new("jordan-branch");
            rep.param("f", &f).param("m", &m).param("k", k);
            let b = variation_branch(p, &m, k)?;
            let (verdict, cert) = match jordan_first_failure(p, &m, &b)? {
                None => (Verdict::Pass, format!("all {k} prefixes satisfy (r0)-(r2) exactly")),
                Some((len, why)) => (Verdict::Fail, format!("prefix of length {len}: {why}")),
            };
            rep.result("the variation branch is in the Jordan tree", &b, None, verdict, cert);
            Ok(rep)
        }
        JordanCmd::Extract { f, m, k, limit, precision, export } => {
            let func = inputs::function(&f)?;
            let p = func.polygonal()?;
            let mut rep = Report::new("jordan-extract");
            rep.param("f", &f).param("m", &m).param("k", k).param("limit", limit);
            rep.budget("precision", precision);
            let b = variation_branch(p, &m, k)?;
            let z = extract_presentation(&ExactBracket(p), &m, &b, precision)?;
            let check = z.check_decided(p, limit)?;
            let cert = format!("{} decided indices, {} pairs", check.indices, check.pairs_checked);
            let why = check.first_failure.clone().unwrap_or_else(|| cert.clone());
            rep.result("decided pairs are monotone in q", check.indices, None, check.monotone, why.clone());
            rep.result("f(y) - f(x) <= g(y) - g(x) on decided pairs", check.pairs_checked, None, check.slope_order, why);
            if let Some(path) = export {
                write(&path, &write_ratpres(&z.decided()))?;
            }
            Ok(rep)
        }
        JordanCmd::DecodeAca { h, stage, bound, max_code } => {
            let mut rep = Report::new("jordan-decode-aca");
            rep.param("h", map_text(&h)).param("stage", stage).param("bound", bound);
            rep.budget("stage", stage).budget("max_code", max_code);
            let g = aca_gadget(&h, stage)?.f.running_variation();
            let dec = decode_aca(&g, &h, bound, max_code)?;
            for n in 0..bound {
                let truth = h.preimage(n).is_some();
                let cert = dec.certificates.get(&n).cloned().unwrap_or_default();
                let (value, verdict) = if dec.undecided.contains(&n) {
                    ("undecided", Verdict::Undecided)
                } else {
                    let got = dec.recovered.contains(&n);
                    (if got { "in" } else { "out" }, Verdict::from_bool(got == truth))
                };
                let expect = if truth { "in" } else { "out" };
                rep.result(format!("{n} in rng(h)"), value, Some(expect.to_string()), verdict, cert);
            }
            Ok(rep)
        }
        JordanCmd::DecodeWkl { tree, depth, case, g, delay, m, k, path_len, bound } => {
            decode_wkl(&tree, depth.depth, case, g.as_deref(), delay, m, k, path_len, bound)
        }
    }
}

/// The dominating function of the tree decoders.
enum Dominating {
    Given(Func),
    Variation(CumulativeVariation),
}

impl ExactFunction for Dominating {
    fn eval(&self, x: &Rational) -> bvlab_core::Result<Rational> {
        match self {
            Dominating::Given(f) => f.eval(x),
            Dominating::Variation(v) => v.eval(x),
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn decode_wkl(
    spec: &str,
    depth: usize,
    case: CaseArg,
    g: Option<&str>,
    delay: u64,
    m: u32,
    k: u64,
    path_len: Option<usize>,
    bound: Option<u64>,
) -> Result<Report, CliError> {
    let mut rep = Report::new("jordan-decode-wkl");
    let t = inputs::tree(spec, depth)?;
    let h = nonext_map(&t, depth, delay)?;
    let len = path_len.unwrap_or(depth);
    rep.param("tree", spec).param("delay", delay).param("M", m).param("K", k).param("path_len", len);
    rep.param("g", g.unwrap_or("running variation of the tree gadget"));
    rep.budget("depth", depth);
    let g = match g {
        Some(s) => Dominating::Given(inputs::function(s)?),
        None => Dominating::Variation(wkl_gadget(&t, &h, depth, depth)?.f.running_variation()),
    };
    let chosen = match case {
        CaseArg::One => WklCase::Continuous,
        CaseArg::Two => WklCase::Jump,
        CaseArg::Auto => select_case(&g, &t, m, depth)?,
    };
    rep.param("case", if chosen == WklCase::Continuous { "1" } else { "2" });
    match chosen {
        WklCase::Continuous => {
            let bound = bound.unwrap_or((1u64 << (depth + 1)) - 1);
            rep.budget("bound", bound);
            let res = decode_wkl_case1(&g, &t, &h, bound, depth, len)?;
            let brute: BTreeSet<u64> = (0..bound)
                .filter(|&c| {
                    let x = string_of_code(c);
                    t.contains(&x) && !t.has_extension_at(&x, depth)
                })
                .collect();
            let recovered = &res.report.recovered;
            let cert = format!("brute force: {}", join(&brute));
            rep.result("recovered dead strings (codes)", join(recovered), None, Verdict::from_bool(*recovered == brute), cert);
            let ok = t.contains(&res.path) && t.has_extension_at(&res.path, depth);
            let deltas = join(&res.deltas);
            rep.result(format!("path of length {len} through T"), &res.path, None, Verdict::from_bool(ok), format!("Δ = {deltas}"));
        }
        WklCase::Jump => {
            let res = decode_wkl_case2(&ExactPresentation(g), &t, m, k, depth, len)?;
            let ok = res.max_prefix_free <= res.width_bound;
            let cert = format!("members {}", join(&res.path.antichain.members));
            rep.result("largest prefix-free subset of T^ within K 2^(M+2)", res.max_prefix_free, Some(res.width_bound.to_string()), Verdict::from_bool(ok), cert);
            let p = &res.path.path;
            let ok = t.contains(p);
            rep.result(format!("path of length {len} through T"), p, None, Verdict::from_bool(ok), format!("below antichain member {}", res.path.member));
        }
    }
    Ok(rep)
}
