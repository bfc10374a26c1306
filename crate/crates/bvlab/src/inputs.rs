//! Parsers for the command-line value syntax: rationals, maps, lists, and
//! the tree and function specs.

use std::path::Path;

use bvlab_core::gadgets::{InjectiveMap, StagedSet};
use bvlab_core::{BinaryTree, DyadicString, ExactFunction, OpenSetCode, PolygonalFunction, Rational};

use crate::error::CliError;
use crate::formats;

pub fn rational(s: &str) -> Result<Rational, String> {
    s.trim().parse::<Rational>().map_err(|e| format!("bad rational {s:?}: {e}"))
}

pub fn dyadic(s: &str) -> Result<DyadicString, String> {
    s.trim().parse::<DyadicString>().map_err(|e| format!("bad binary string {s:?}: {e}"))
}

pub fn rational_list(s: &str) -> Result<Vec<Rational>, String> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(rational).collect()
}

fn pairs(s: &str) -> Result<Vec<(u64, u64)>, String> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (a, b) = p.split_once(':').ok_or_else(|| format!("expected a:b, found {p:?}"))?;
            let a = a.trim().parse().map_err(|_| format!("bad integer {a:?}"))?;
            let b = b.trim().parse().map_err(|_| format!("bad integer {b:?}"))?;
            Ok((a, b))
        })
        .collect()
}

/// `"k:n,k:n"` as an injective map `k -> n`.
pub fn injective_map(s: &str) -> Result<InjectiveMap, String> {
    InjectiveMap::new(pairs(s)?).map_err(|e| e.to_string())
}

/// `"e:t,e:t"`: element `e` enumerated at stage `t`.
pub fn staged_set(s: &str) -> Result<StagedSet, String> {
    Ok(StagedSet::new(pairs(s)?))
}

pub fn string_list(s: &str) -> Result<Vec<DyadicString>, String> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(dyadic).collect()
}

/// A function given on the command line.
#[derive(Clone, Debug)]
pub enum Func {
    Poly(PolygonalFunction),
    /// `0` below `at`, `jump` from `at` on.
    Step { at: Rational, jump: Rational },
}

impl Func {
    pub fn polygonal(&self) -> Result<&PolygonalFunction, CliError> {
        match self {
            Func::Poly(p) => Ok(p),
            Func::Step { .. } => Err(CliError::usage("this command needs a polygonal function")),
        }
    }
}

impl ExactFunction for Func {
    fn eval(&self, x: &Rational) -> bvlab_core::Result<Rational> {
        match self {
            Func::Poly(p) => p.eval(x),
            Func::Step { at, jump } => Ok(if x >= at { jump.clone() } else { Rational::zero() }),
        }
    }
}

/// `identity`, `constant:c`, `sawtooth:v:r`, `staircase[:levels]`,
/// `step:x:jump`, or the path of a `polyfun v1` file.
pub fn function(spec: &str) -> Result<Func, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let r = |s: &str| rational(s).map_err(CliError::usage);
    let f = match parts.as_slice() {
        ["identity"] => PolygonalFunction::identity(),
        ["constant", c] => PolygonalFunction::constant(r(c)?),
        ["sawtooth", v, teeth] => {
            let teeth = teeth.parse().map_err(|_| CliError::usage(format!("bad tooth count {teeth:?}")))?;
            PolygonalFunction::sawtooth(&Rational::zero(), &Rational::one(), &r(v)?, teeth)?
        }
        ["staircase"] => bvlab_core::deriv::staircase(10),
        ["staircase", n] => {
            let n = n.parse().map_err(|_| CliError::usage(format!("bad level count {n:?}")))?;
            bvlab_core::deriv::staircase(n)
        }
        ["step", at, jump] => return Ok(Func::Step { at: r(at)?, jump: r(jump)? }),
        [path] if Path::new(path).exists() => formats::parse_polyfun(&std::fs::read_to_string(path)?)?,
        _ => return Err(CliError::usage(format!("unknown function spec {spec:?}"))),
    };
    Ok(Func::Poly(f))
}

/// The comb: `0^∞` with a single `1` tooth of length one after each of the
/// first `teeth` zeros.
pub fn comb_tree(teeth: usize, cap: usize) -> BinaryTree {
    BinaryTree::from_predicate(
        move |x: &DyadicString| {
            let ones = x.bits().iter().filter(|&&b| b).count();
            ones == 0 || (ones == 1 && x.bit(x.len() - 1) && x.len() - 1 < teeth)
        },
        cap,
    )
}

/// `full`, `avoid-prefix:σ`, `code:σ,τ` (complement of an open-set code),
/// `comb:teeth`, or the path of a `bintree v1` file. Generated trees get
/// the cap `cap`; a file keeps its own.
pub fn tree(spec: &str, cap: usize) -> Result<BinaryTree, CliError> {
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    Ok(match kind {
        "full" if arg.is_empty() => BinaryTree::full(cap),
        "avoid-prefix" => BinaryTree::avoid_prefix(dyadic(arg).map_err(CliError::usage)?, cap),
        "code" => OpenSetCode::new(string_list(arg).map_err(CliError::usage)?).complement_tree(cap),
        "comb" => comb_tree(arg.parse().map_err(|_| CliError::usage(format!("bad tooth count {arg:?}")))?, cap),
        _ if Path::new(spec).exists() => formats::parse_bintree(&std::fs::read_to_string(spec)?)?,
        _ => return Err(CliError::usage(format!("unknown tree spec {spec:?}"))),
    })
}
