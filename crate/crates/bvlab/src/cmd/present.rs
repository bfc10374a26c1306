use std::path::Path;

use bvlab_core::present::{
    gz_bracket, shift_sequence, validate_presentation, ExactPresentation, PresentationViolation, SearchBudget,
    ShiftMode, TablePresentation,
};
use bvlab_core::{Error, Membership, Presentation, Rational, Verdict};

use super::join;
use crate::cli::{ModeArg, PresentCmd};
use crate::error::CliError;
use crate::formats::parse_ratpres;
use crate::inputs::{self, Func};
use crate::report::{Report, Table};

/// A presentation read from a `ratpres v1` file or built from a function.
enum Source {
    Table(TablePresentation),
    Exact(ExactPresentation<Func>),
}

impl Presentation for Source {
    fn member(&self, p: &Rational, q: &Rational) -> bvlab_core::Result<Membership> {
        match self {
            Source::Table(t) => t.member(p, q),
            Source::Exact(e) => e.member(p, q),
        }
    }
}

fn source(spec: &str) -> Result<Source, CliError> {
    if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec)?;
        if text.lines().any(|l| l.trim() == crate::formats::RATPRES_HEADER) {
            return Ok(Source::Table(parse_ratpres(&text)?));
        }
    }
    Ok(Source::Exact(ExactPresentation(inputs::function(spec)?)))
}

pub fn run(cmd: PresentCmd) -> Result<Report, CliError> {
    match cmd {
        PresentCmd::Eval { z, p, n } => {
            let src = source(&z)?;
            let mut rep = Report::new("present-eval");
            rep.param("z", &z).param("p", &p).param("n", n);
            let budget = SearchBudget::default();
            rep.budget("max_exponent", budget.max_exponent).budget("max_precision", budget.max_precision);
            let claim = format!("g_Z({p}) bracketed to width 2^(1-{n}) (midpoint)");
            let width = Rational::pow2(1 - n as i64);
            match gz_bracket(&src, &p, n, budget) {
                Ok((lo, hi)) => {
                    let ok = &hi - &lo <= width && lo <= hi;
                    let cert = format!("({p}, {lo}) ∉ Z, ({p}, {hi}) ∈ Z");
                    rep.result(claim, lo.midpoint(&hi), Some(width.to_string()), Verdict::from_bool(ok), cert);
                }
                Err(Error::Budget(why)) => {
                    rep.result(claim, "none", Some(width.to_string()), Verdict::Undecided, why);
                }
                Err(e) => return Err(e.into()),
            }
            Ok(rep)
        }
        PresentCmd::Validate { z, points, thresholds } => {
            let src = source(&z)?;
            let mut rep = Report::new("present-validate");
            rep.param("z", &z).param("points", join(&points)).param("thresholds", join(&thresholds));
            let r = validate_presentation(&src, &points, &thresholds)?;
            let cert = if r.violations.is_empty() {
                format!("{} undecided answers", r.undecided)
            } else {
                join(r.violations.iter().map(|v| match v {
                    PresentationViolation::NoWitness { p, missing_in } => {
                        format!("no {} witness at {p}", if *missing_in { "in" } else { "out" })
                    }
                    PresentationViolation::NotMonotone { p, q_in, q_out } => {
                        format!("({p}, {q_in}) in but ({p}, {q_out}) out")
                    }
                }))
            };
            rep.result("witness and monotonicity clauses on the sample (pairs)", r.pairs_checked, None, r.verdict, cert);
            Ok(rep)
        }
        PresentCmd::Shift { f, mode, steps } => {
            let func = inputs::function(&f)?;
            let mode = match mode {
                ModeArg::Points => ShiftMode::Points,
                ModeArg::Pairs => ShiftMode::Pairs,
            };
            let mut rep = Report::new("present-shift");
            rep.param("f", &f).param("mode", format!("{mode:?}").to_lowercase()).param("steps", steps);
            let seq = shift_sequence(&func, mode, steps)?;
            let ok = seq.verify(&func)?;
            let tail = seq.tail_bound();
            let cert = format!("|a - a_{steps}| <= {tail}");
            rep.result("|a_i - a_(i+1)| < 4^-i and |t_i - a_(i+1)| > 4^-i / 2 (a_N)", seq.last(), Some(tail.to_string()), Verdict::from_bool(ok), cert);
            let mut table = Table::new(["i", "a"]);
            for (i, a) in seq.terms.iter().enumerate() {
                table.push([i.to_string(), a.to_string()]);
            }
            rep.table = Some(table);
            Ok(rep)
        }
    }
}
