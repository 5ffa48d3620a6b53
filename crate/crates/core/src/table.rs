//! Per-degree Hochschild (co)homology tables, computed by any of the three
//! methods.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::complex::BasedComplex;
use crate::error::{Error, Result};
use crate::hochschild::{
    build_bar_hochschild_chain, build_bar_hochschild_cochain, build_reduced_chain, build_reduced_cochain,
    closed_form_cohomology, closed_form_homology,
};
use crate::linalg::HomologyGroup;
use crate::ring::{Coefficients, Integers};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Homology,
    Cohomology,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Homology => "homology",
            Kind::Cohomology => "cohomology",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Closed-form ranks.
    Closed,
    /// The multiset complexes.
    Reduced,
    /// The normalized bar complexes.
    Oracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Closed => "closed",
            Method::Reduced => "reduced",
            Method::Oracle => "oracle",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "closed" | "closed-form" => Ok(Method::Closed),
            "reduced" => Ok(Method::Reduced),
            "oracle" | "bar" => Ok(Method::Oracle),
            _ => Err(Error::InvalidInput(format!("unknown method {s:?} (expected closed, reduced or oracle)"))),
        }
    }
}

/// One `(k, ring, kind)` entry of a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub n: usize,
    pub k: usize,
    pub ring: Coefficients,
    pub kind: Kind,
    pub method: Method,
    pub group: HomologyGroup,
    /// Set when a closed-form value departs from the literal formula.
    pub flag: Option<String>,
}

/// The complex whose (co)homology in degrees `0..=max_degree` is the table.
pub fn complex_for(n: usize, max_degree: usize, kind: Kind, method: Method, limit: usize) -> Result<BasedComplex<Integers>> {
    let top = max_degree + 1;
    match (kind, method) {
        (Kind::Homology, Method::Oracle) => build_bar_hochschild_chain(n, top, limit),
        (Kind::Cohomology, Method::Oracle) => build_bar_hochschild_cochain(n, top, limit),
        (Kind::Homology, _) => build_reduced_chain(n, top),
        (Kind::Cohomology, _) => build_reduced_cochain(n, top),
    }
}

/// `HH_k` or `HH^k` for `k = 0..=max_degree`.
pub fn compute_table(
    n: usize,
    max_degree: usize,
    ring: Coefficients,
    kind: Kind,
    method: Method,
    limit: usize,
) -> Result<Vec<TableRow>> {
    ring.validate()?;
    let row = |k, group, flag| TableRow { n, k, ring, kind, method, group, flag };
    if method == Method::Closed {
        return (0..=max_degree)
            .map(|k| {
                let c = match kind {
                    Kind::Homology => closed_form_homology(n, k, ring)?,
                    Kind::Cohomology => closed_form_cohomology(n, k, ring)?,
                };
                Ok(row(k, c.group, c.flag))
            })
            .collect();
    }
    let complex = complex_for(n, max_degree, kind, method, limit)?;
    (0..=max_degree).map(|k| Ok(row(k, complex.homology(k, ring)?, None))).collect()
}
