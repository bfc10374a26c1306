//! One module per command group. Each returns a finished [`Report`].

pub mod deriv;
pub mod gadget;
pub mod jordan;
pub mod measure;
pub mod present;

use std::fmt::Display;
use std::path::Path;

use bvlab_core::polyfun::CauchyName;
use bvlab_core::polyfun::SupDistance;
use bvlab_core::Verdict;

use crate::error::CliError;
use crate::report::Report;

pub(crate) fn join<T: Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub(crate) fn cauchy_row<F: SupDistance>(rep: &mut Report, name: &CauchyName<F>, up_to: usize) -> Result<(), CliError> {
    let check = name.validate(up_to)?;
    let (verdict, cert) = match &check.violation {
        None => (Verdict::Pass, "no violating pair".to_string()),
        Some(v) => (Verdict::Fail, format!("sup |f_{} - f_{}| = {} > 2^-{}", v.s, v.r, v.distance, v.s)),
    };
    rep.result(format!("sup |f_s - f_t| <= 2^-s for s < t <= {up_to} (pairs checked)"), check.pairs_checked, None, verdict, cert);
    Ok(())
}

pub(crate) fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)?;
    Ok(())
}
