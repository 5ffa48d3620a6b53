//! Cross-validation suites: each suite recomputes a family of results two
//! or more independent ways and records every disagreement.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::algebra::{EnvAlgebra, EnvElement};
use crate::combinat::{enumerate_multisets, multiset_permutations, Multiset, Subset};
use crate::complex::{BasedComplex, BasisLabel};
use crate::error::{Error, Result};
use crate::hochschild::{
    bar_boundary, bar_matching, bar_tensors, build_bar_hochschild_chain, build_bar_hochschild_cochain,
    build_bar_resolution, build_reduced_chain, build_reduced_cochain, build_reduced_resolution, halve, htpy_h,
    koszul_matching_chain, koszul_matching_cochain, split_parity, LazyBarGraph,
};
use crate::linalg::HomologyGroup;
use crate::morse::{certify_lazy, check_matching, enumerate_paths, reduce, transfer_h};
use crate::products::{generator_span_check, ring_structure_constants};
use crate::ring::{Coefficients, Integers, Ring};
use crate::table::{compute_table, Kind, Method};

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub checks: usize,
    pub failures: Vec<String>,
    /// Remarks that are not failures, e.g. closed-form overrides.
    pub notes: Vec<String>,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        SuiteResult { name: name.to_string(), checks: 0, failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, failure: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(failure());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "ok" } else { "FAILED" };
        write!(f, "{}: {status} ({} checks", self.name, self.checks)?;
        if !self.failures.is_empty() {
            write!(f, ", {} failures", self.failures.len())?;
        }
        write!(f, ")")?;
        for x in &self.failures {
            write!(f, "\n  - {x}")?;
        }
        for x in &self.notes {
            write!(f, "\n  note: {x}")?;
        }
        Ok(())
    }
}

/// One `(k, ring, kind)` cell of the triple-agreement grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgreementCell {
    pub n: usize,
    pub k: usize,
    pub ring: Coefficients,
    pub kind: Kind,
    pub oracle: HomologyGroup,
    pub reduced: HomologyGroup,
    pub closed: HomologyGroup,
    pub flag: Option<String>,
}

impl AgreementCell {
    pub fn agrees(&self) -> bool {
        self.oracle == self.reduced && self.reduced == self.closed
    }
}

fn kind_symbol(kind: Kind, k: usize) -> String {
    match kind {
        Kind::Homology => format!("HH_{k}"),
        Kind::Cohomology => format!("HH^{k}"),
    }
}

/// Bar complex, multiset complex and closed form, for `k = 0..=max_degree`
/// over each ring and for both homology and cohomology.
pub fn triple_agreement(
    n: usize,
    max_degree: usize,
    rings: &[Coefficients],
    limit: usize,
) -> Result<(SuiteResult, Vec<AgreementCell>)> {
    let mut suite = SuiteResult::new("triple agreement (oracle = reduced = closed form)");
    let mut cells = Vec::new();
    for kind in [Kind::Homology, Kind::Cohomology] {
        for &ring in rings {
            let oracle = compute_table(n, max_degree, ring, kind, Method::Oracle, limit)?;
            let reduced = compute_table(n, max_degree, ring, kind, Method::Reduced, limit)?;
            let closed = compute_table(n, max_degree, ring, kind, Method::Closed, limit)?;
            for ((o, r), c) in oracle.into_iter().zip(reduced).zip(closed) {
                let cell = AgreementCell {
                    n,
                    k: o.k,
                    ring,
                    kind,
                    oracle: o.group,
                    reduced: r.group,
                    closed: c.group,
                    flag: c.flag,
                };
                suite.check(cell.agrees(), || {
                    format!(
                        "n={n} {} over {ring}: oracle {}, reduced {}, closed form {}",
                        kind_symbol(kind, cell.k),
                        cell.oracle,
                        cell.reduced,
                        cell.closed
                    )
                });
                if let Some(flag) = &cell.flag {
                    suite.notes.push(format!("n={n} {} over {ring}: {flag}", kind_symbol(kind, cell.k)));
                }
                cells.push(cell);
            }
        }
    }
    suite.notes.sort();
    suite.notes.dedup();
    Ok((suite, cells))
}

/// `d∘d = 0` on every complex the library builds for this `n`.
pub fn complexes_validate(n: usize, max_degree: usize, limit: usize) -> Result<SuiteResult> {
    let mut suite = SuiteResult::new("composites of differentials vanish");
    let mut record = |name: &str, report: crate::complex::ValidationReport| {
        let failures = report.failures.len();
        suite.check(report.is_ok(), || format!("{name} (n={n}): {failures} nonzero composites"));
    };
    record("bar resolution", build_bar_resolution(n, max_degree, limit)?.validate());
    record("bar chain complex", build_bar_hochschild_chain(n, max_degree, limit)?.validate());
    record("bar cochain complex", build_bar_hochschild_cochain(n, max_degree, limit)?.validate());
    record("minimal resolution", build_reduced_resolution(n, max_degree)?.validate());
    record("multiset chain complex", build_reduced_chain(n, max_degree)?.validate());
    record("multiset cochain complex", build_reduced_cochain(n, max_degree)?.validate());
    Ok(suite)
}

fn as_generator(label: &BasisLabel) -> Option<BasisLabel> {
    label.as_variable_tensor().filter(|v| v.windows(2).all(|w| w[0] <= w[1])).map(|v| BasisLabel::Generator(Multiset::new(v)))
}

/// Morse reduction of the bar resolution along the bar matching reproduces
/// the minimal resolution entry by entry, and that resolution is minimal.
pub fn morse_reproduction(n: usize, max_degree: usize, limit: usize) -> Result<SuiteResult> {
    let mut suite = SuiteResult::new("Morse reduction of the bar resolution");
    let bar = build_bar_resolution(n, max_degree, limit)?;
    let reduced = reduce(&bar, &bar_matching(n, max_degree)?)?;
    // the top degree also keeps cells whose partners were truncated away
    let reduced = reduced.restrict(|l| as_generator(l).is_some())?;
    let expected = build_reduced_resolution(n, max_degree)?;
    let env = expected.ring();
    for k in 0..=max_degree {
        let got: Vec<BasisLabel> = reduced.basis(k).iter().filter_map(as_generator).collect();
        let mut want = expected.basis(k).to_vec();
        let mut sorted = got.clone();
        sorted.sort();
        want.sort();
        suite.check(sorted == want, || format!("n={n} degree {k}: critical cells {got:?}, expected {want:?}"));
        if k == 0 || sorted != want {
            continue;
        }
        let entries = |c: &BasedComplex<EnvAlgebra<Integers>>, relabel: bool| -> BTreeMap<(BasisLabel, BasisLabel), EnvElement<BigInt>> {
            let d = c.differential(k).expect("chain degrees are complete");
            d.entries()
                .map(|(r, col, w)| {
                    let (mut x, mut y) = (c.basis(k)[col].clone(), c.basis(k - 1)[r].clone());
                    if relabel {
                        x = as_generator(&x).expect("restricted to generators");
                        y = as_generator(&y).expect("restricted to generators");
                    }
                    ((x, y), w.clone())
                })
                .collect()
        };
        let (a, b) = (entries(&reduced, true), entries(&expected, false));
        suite.check(a == b, || {
            let diff: Vec<String> = a
                .iter()
                .filter(|(key, w)| b.get(*key) != Some(*w))
                .map(|((x, y), w)| format!("{x} -> {y}: {}", env.render(w)))
                .take(5)
                .collect();
            format!("n={n} degree {k}: differentials differ, e.g. {}", diff.join("; "))
        });
    }
    for k in 1..=max_degree {
        let d = expected.differential(k).expect("chain degrees are complete");
        let bad = d.entries().filter(|(_, _, w)| !env.base().is_zero(&env.augmentation(w))).count();
        suite.check(bad == 0, || format!("n={n} degree {k}: {bad} entries outside the augmentation ideal"));
    }
    Ok(suite)
}

type BarSum = BTreeMap<Vec<Subset>, EnvElement<BigInt>>;

fn add_into(env: &EnvAlgebra<Integers>, acc: &mut BarSum, tensor: Vec<Subset>, u: EnvElement<BigInt>) {
    let slot = acc.entry(tensor).or_insert_with(|| env.zero());
    *slot = env.add(slot, &u);
}

fn nonzero(env: &EnvAlgebra<Integers>, mut acc: BarSum) -> BarSum {
    acc.retain(|_, v| !env.is_zero(v));
    acc
}

/// `b∘h = h∘b̊` for `h(x_(τ)) = Σ_π 1⊗x_(πτ)⊗1`, and the zig-zag paths of the
/// bar matching reproduce `h`: exactly one path to each rearrangement.
pub fn homotopy_checks(n: usize, max_len: usize, max_path_len: usize) -> Result<SuiteResult> {
    let mut suite = SuiteResult::new("comparison map h");
    let env = EnvAlgebra::new(n, Integers);
    let reduced = build_reduced_resolution(n, max_len)?;
    let term = |t: &BasisLabel| match t {
        BasisLabel::Bar(t) => t.clone(),
        _ => unreachable!("h produces bar tensors"),
    };
    for k in 1..=max_len {
        for tau in enumerate_multisets(n, k) {
            let mut lhs = BarSum::new();
            for (t, _) in htpy_h(&tau) {
                for (s, u) in bar_boundary(&env, &term(&t)) {
                    add_into(&env, &mut lhs, s, u);
                }
            }
            let mut rhs = BarSum::new();
            for (g, w) in reduced.boundary_of(k, &BasisLabel::Generator(tau.clone()))? {
                let BasisLabel::Generator(rest) = g else { unreachable!("generators map to generators") };
                for (t, _) in htpy_h(&rest) {
                    add_into(&env, &mut rhs, term(&t), w.clone());
                }
            }
            suite.check(nonzero(&env, lhs) == nonzero(&env, rhs), || format!("b∘h ≠ h∘b̊ on x_{tau:?}"));
        }
    }

    let graph = LazyBarGraph::new(n)?;
    for k in 0..=max_path_len {
        for tau in enumerate_multisets(n, k) {
            let start = BasisLabel::variable_tensor(tau.elements());
            let tallies = enumerate_paths(&graph, &start, 4 * k * k + 4)?;
            let reached: BTreeMap<BasisLabel, usize> = tallies
                .iter()
                .filter(|(_, t)| !env.is_zero(&t.weight))
                .map(|(l, t)| (l.clone(), t.paths))
                .collect();
            let expected: BTreeMap<BasisLabel, usize> =
                multiset_permutations(&tau).into_iter().map(|p| (BasisLabel::variable_tensor(&p), 1)).collect();
            suite.check(reached == expected, || {
                format!("paths from x_{tau:?}: {} endpoints, expected {}", reached.len(), expected.len())
            });
            let weights_are_one = tallies.iter().filter(|(_, t)| !env.is_zero(&t.weight)).all(|(_, t)| env.is_one(&t.weight));
            suite.check(weights_are_one, || format!("paths from x_{tau:?} carry weights other than 1"));
        }
    }
    if n >= 3 && max_path_len >= 4 {
        // the path from 1⊗x1⊗x2⊗x2⊗x3⊗1 to its reversal
        let tallies = enumerate_paths(&graph, &BasisLabel::variable_tensor(&[1, 2, 2, 3]), 100)?;
        let paths = tallies.get(&BasisLabel::variable_tensor(&[3, 2, 2, 1])).map_or(0, |t| t.paths);
        suite.check(paths == 1, || format!("(1,2,2,3) -> (3,2,2,1): {paths} paths, expected 1"));
    }
    Ok(suite)
}

/// The transfer computed by the Morse engine on the materialized bar
/// resolution agrees with `h`.
pub fn transfer_matches_h(n: usize, max_len: usize, limit: usize) -> Result<SuiteResult> {
    let mut suite = SuiteResult::new("Morse transfer equals h");
    let bar = build_bar_resolution(n, max_len, limit)?;
    let m = bar_matching(n, max_len)?;
    let env = bar.ring();
    for k in 0..=max_len {
        for tau in enumerate_multisets(n, k) {
            let cell = BasisLabel::variable_tensor(tau.elements());
            let got: BTreeMap<BasisLabel, EnvElement<BigInt>> = transfer_h(&bar, &m, &cell)?.into_iter().collect();
            let want: BTreeMap<BasisLabel, EnvElement<BigInt>> =
                htpy_h(&tau).into_iter().map(|(l, c)| (l, env.from_bigint(&c))).collect();
            suite.check(got == want, || format!("transfer of x_{tau:?} differs from h"));
        }
    }
    Ok(suite)
}

/// The three matchings pass the Morse conditions with the expected
/// critical cells in degrees `0..=max_degree`.
pub fn matching_certificates(n: usize, max_degree: usize, limit: usize) -> Result<SuiteResult> {
    let mut suite = SuiteResult::new("Morse matchings");
    let count: u128 = (0..=max_degree).map(|k| crate::hochschild::bar_tensor_count(n, k)).sum();
    if count > limit as u128 {
        return Err(Error::SizeLimit { degree: max_degree, count, limit });
    }
    let bases: Vec<Vec<BasisLabel>> = (0..=max_degree).map(|k| bar_tensors(n, k).into_iter().map(BasisLabel::Bar).collect()).collect();
    let cert = certify_lazy(&LazyBarGraph::new(n)?, &bases)?;
    for k in 0..=max_degree {
        let want: Vec<BasisLabel> = enumerate_multisets(n, k).iter().map(|t| BasisLabel::variable_tensor(t.elements())).collect();
        let mut got = cert.critical[k].clone();
        got.sort();
        let mut want_sorted = want.clone();
        want_sorted.sort();
        suite.check(got == want_sorted, || format!("bar matching, n={n} degree {k}: {} critical cells, expected {}", got.len(), want.len()));
    }

    // one degree past the range so truncation leaves no spurious critical cells
    let top = max_degree + 1;
    let chain = halve(&split_parity(&build_reduced_chain(n, top)?)?.active)?;
    let cert = check_matching(&chain, &koszul_matching_chain(n, top)?)?;
    for k in 0..=max_degree {
        let want = if k == 0 { vec![BasisLabel::ChainPair { sigma: Subset::EMPTY, tau: Multiset::empty() }] } else { vec![] };
        suite.check(cert.critical[k] == want, || format!("chain matching, n={n} degree {k}: critical {:?}", cert.critical[k]));
    }
    let cochain = halve(&split_parity(&build_reduced_cochain(n, top)?)?.active)?;
    let cert = check_matching(&cochain, &koszul_matching_cochain(n, top)?)?;
    for k in 0..=max_degree {
        let want = if k == 0 && n % 2 == 1 {
            vec![BasisLabel::CochainPair { tau: Multiset::empty(), sigma: Subset::full(n) }]
        } else {
            vec![]
        };
        suite.check(cert.critical[k] == want, || format!("cochain matching, n={n} degree {k}: critical {:?}", cert.critical[k]));
    }
    Ok(suite)
}

fn even_divisors(g: &HomologyGroup) -> usize {
    g.torsion.iter().filter(|d| d.is_even()).count()
}

/// `dim_{F2} H_k = F_k + T_k + T_{k-1}` and `dim_{F2} H^k = F^k + T^k + T^{k+1}`,
/// with `T` counting the even torsion divisors of the integral groups.
pub fn universal_coefficients(n: usize, max_degree: usize) -> Result<SuiteResult> {
    let mut suite = SuiteResult::new("universal coefficients");
    let top = max_degree + 1;
    for kind in [Kind::Homology, Kind::Cohomology] {
        let z = compute_table(n, top, Coefficients::Integers, kind, Method::Reduced, usize::MAX)?;
        let f2 = compute_table(n, max_degree, Coefficients::F2, kind, Method::Reduced, usize::MAX)?;
        for k in 0..=max_degree {
            let neighbour = match kind {
                Kind::Homology => k.checked_sub(1).map_or(0, |j| even_divisors(&z[j].group)),
                Kind::Cohomology => even_divisors(&z[k + 1].group),
            };
            let predicted = z[k].group.free_rank + even_divisors(&z[k].group) + neighbour;
            let dim = f2[k].group.free_rank;
            suite.check(predicted == dim, || format!("n={n} {}: F2 dimension {dim}, integral groups predict {predicted}", kind_symbol(kind, k)));
        }
    }
    Ok(suite)
}

/// Structure tables over F2 and Q, and the generator span with and
/// without `x_{[n]}⊗1`.
pub fn ring_checks(n: usize, max_total_degree: usize, span_degree: usize, include_tables: bool, limit: usize) -> Result<SuiteResult> {
    let mut suite = SuiteResult::new("cohomology ring");
    if include_tables {
        for ring in [Coefficients::F2, Coefficients::Rationals] {
            let t = ring_structure_constants(n, ring, max_total_degree, limit)?;
            let bad: Vec<String> = t.disagreements().map(|p| format!("{} * {}", p.left, p.right)).collect();
            suite.checks += t.products.len();
            if !bad.is_empty() {
                suite.failures.push(format!("n={n} over {ring}: products disagree: {}", bad.join(", ")));
            }
        }
    }
    let with_top = generator_span_check(n, Coefficients::Rationals, span_degree, true)?;
    suite.check(with_top.spans, || format!("n={n}: generators miss {}", with_top.missing.join(", ")));
    let without = generator_span_check(n, Coefficients::Rationals, span_degree, false)?;
    // x_[n]⊗1 is a product of the x_{ij}⊗1 exactly when n is even
    let should_span = n.is_multiple_of(2);
    suite.check(without.spans == should_span, || {
        format!("n={n}: without x_[n]⊗1 the generators {} span", if without.spans { "still" } else { "do not" })
    });
    if !without.spans {
        suite.notes.push(format!("n={n}: without x_[n]⊗1 the span misses {}", without.missing.join(", ")));
    }
    Ok(suite)
}

/// What `run_suites` covers.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub n: usize,
    pub max_degree: usize,
    pub rings: Vec<Coefficients>,
    pub limit: usize,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub suites: Vec<SuiteResult>,
    pub cells: Vec<AgreementCell>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn agreeing_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.agrees()).count()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        let rings: Vec<String> = c.rings.iter().map(ToString::to_string).collect();
        writeln!(f, "verify n={} max-degree={} rings={}", c.n, c.max_degree, rings.join(","))?;
        if self.cells.iter().all(AgreementCell::agrees) {
            writeln!(f, "oracle=reduced=closed-form for {} (k,ring,kind) cells", self.cells.len())?;
        } else {
            writeln!(f, "oracle=reduced=closed-form for {} of {} (k,ring,kind) cells", self.agreeing_cells(), self.cells.len())?;
        }
        for s in &self.suites {
            writeln!(f, "{s}")?;
        }
        write!(f, "{}", if self.passed() { "all suites passed" } else { "MISMATCH" })
    }
}

/// Every suite that applies to `config.n`, with degrees capped where the
/// suite's cost grows fastest.
pub fn run_suites(config: &VerifyConfig) -> Result<VerifyReport> {
    let (n, max, limit) = (config.n, config.max_degree, config.limit);
    let mut suites = Vec::new();
    let (agreement, cells) = triple_agreement(n, max, &config.rings, limit)?;
    suites.push(agreement);
    suites.push(complexes_validate(n, max.min(4), limit)?);
    suites.push(matching_certificates(n, max.min(5), limit)?);
    suites.push(morse_reproduction(n, max.min(4), limit)?);
    suites.push(homotopy_checks(n, max.min(4), max.min(5))?);
    suites.push(universal_coefficients(n, max.min(4))?);
    if n <= 3 {
        suites.push(ring_checks(n, max.min(4), max.min(if n == 3 { 3 } else { 4 }), n <= 2, limit)?);
    }
    Ok(VerifyReport { config: config.clone(), suites, cells })
}
