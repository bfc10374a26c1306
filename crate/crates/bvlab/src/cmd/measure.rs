use bvlab_core::trees::{bounded_width_path, canonicalize_code, compose_power, max_prefix_free, tail_extract, CanonicalMode};
use bvlab_core::{OpenSetCode, Verdict};

use super::join;
use crate::cli::MeasureCmd;
use crate::error::CliError;
use crate::inputs;
use crate::report::{Report, Table};

pub fn run(cmd: MeasureCmd) -> Result<Report, CliError> {
    match cmd {
        MeasureCmd::Level { tree, depth } => {
            let depth = depth.depth;
            let mut rep = Report::new("measure-level");
            rep.param("tree", &tree);
            rep.budget("depth", depth);
            let t = inputs::tree(&tree, depth)?;
            let mu = t.level_measures(depth)?;
            let mut table = Table::new(["d", "mu"]);
            for (d, m) in mu.iter().enumerate() {
                table.push([d.to_string(), m.to_string()]);
            }
            let monotone = mu.windows(2).all(|w| w[1] <= w[0]);
            rep.result(format!("μ_d(T) non-increasing for d <= {depth}"), &mu[depth], None, Verdict::from_bool(monotone), format!("μ = {}", join(&mu)));
            rep.table = Some(table);
            Ok(rep)
        }
        MeasureCmd::PrefixFree { tree, depth, k, len } => {
            let depth = depth.depth;
            let mut rep = Report::new("measure-prefix-free");
            rep.param("tree", &tree);
            rep.budget("depth", depth);
            let t = inputs::tree(&tree, depth)?;
            let anti = max_prefix_free(&t, depth)?;
            let pf = OpenSetCode::new(anti.members.iter().cloned()).prefix_conflict().is_none();
            let cert = format!("members {}", join(&anti.members));
            rep.result("largest prefix-free subset size", anti.size, None, Verdict::from_bool(pf && anti.members.len() == anti.size), cert);
            if let Some(k) = k {
                let n = len.unwrap_or(t.cap());
                rep.param("K", k).param("len", n);
                let w = bounded_width_path(&t, k, n)?;
                let ok = t.contains(&w.path) && t.has_extension_at(&w.path, w.cap);
                rep.result(format!("path of length {n} extending to the cap {}", w.cap), &w.path, None, Verdict::from_bool(ok), format!("through antichain member {}", w.member));
            }
            Ok(rep)
        }
        MeasureCmd::Compose { tree, q, n, depth } => {
            let depth = depth.depth;
            let mut rep = Report::new("measure-compose");
            rep.param("tree", &tree).param("q", &q).param("n", n);
            rep.budget("depth", depth);
            let t = inputs::tree(&tree, depth)?;
            let cert = compose_power(&t, &q, n, depth)?;
            let min = cert.min_measure().clone();
            let ok = min >= cert.bound;
            let why = format!("μ_d(T^{n}) for d = 0..{depth}: {}", join(&cert.measures));
            rep.result(format!("μ_d(T^{n}) >= 1 - q^{n} for d <= {depth}"), &min, Some(cert.bound.to_string()), Verdict::from_bool(ok), why);
            let mut table = Table::new(["n", "d", "mu", "bound"]);
            for j in 1..=n {
                let c = if j == n { cert.clone() } else { compose_power(&t, &q, j, depth)? };
                for (d, m) in c.measures.iter().enumerate() {
                    table.push([j.to_string(), d.to_string(), m.to_string(), c.bound.to_string()]);
                }
            }
            rep.table = Some(table);
            Ok(rep)
        }
        MeasureCmd::Canonicalize { code, padding, point, i } => {
            let mut rep = Report::new("measure-canonicalize");
            rep.param("code", join(&code));
            let mode = match point {
                Some(sigma) => {
                    rep.param("point", &sigma).param("i", i);
                    CanonicalMode::DyadicPoint { sigma, i }
                }
                None => {
                    rep.param("padding", padding);
                    CanonicalMode::General { padding }
                }
            };
            let code = OpenSetCode::new(code);
            let out = canonicalize_code(&code, &mode);
            let cap = out.max_len().max(code.max_len());
            rep.budget("depth", cap);
            let before = code.complement_tree(cap).level_measures(cap)?;
            let after = out.complement_tree(cap).level_measures(cap)?;
            let ok = after.iter().zip(&before).all(|(a, b)| a >= b);
            let mu = match out.prefix_conflict() {
                None => format!("μ(S') = {}", out.prefix_free_measure()?),
                Some((a, b)) => format!("{a} is a prefix of {b}"),
            };
            let cert = format!("S' = {}; {mu}; μ_n(T_S) = {}", join(out.strings()), join(&before));
            rep.result(format!("μ_n(T_S') >= μ_n(T_S) for n <= {cap}"), &after[cap], Some(before[cap].to_string()), Verdict::from_bool(ok), cert);
            Ok(rep)
        }
        MeasureCmd::Tail { z, tree, n, depth } => {
            let depth = depth.depth;
            let mut rep = Report::new("measure-tail");
            rep.param("z", &z).param("tree", &tree).param("n", n);
            rep.budget("depth", depth);
            let t = inputs::tree(&tree, depth)?;
            let tail = tail_extract(&z, &t, n)?;
            let ok = z.suffix_from(z.len() - tail.len()) == tail && t.contains(&tail);
            rep.result(format!("tail of z after at most {} blocks lies in T", n - 1), &tail, None, Verdict::from_bool(ok), format!("z = {z}"));
            Ok(rep)
        }
    }
}
