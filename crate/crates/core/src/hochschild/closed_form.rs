use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::check_generators;
use crate::combinat::multiset_coefficient;
use crate::error::{Error, Result};
use crate::linalg::HomologyGroup;
use crate::ring::Coefficients;

/// A closed-form (co)homology group, with a note when the value departs
/// from the formula as literally stated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedForm {
    pub n: usize,
    pub k: usize,
    #[serde(serialize_with = "as_display")]
    pub ring: Coefficients,
    #[serde(skip)]
    pub group: HomologyGroup,
    pub flag: Option<String>,
}

fn as_display<S: serde::Serializer>(c: &Coefficients, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(c)
}

/// `C(n+k-1, k)`, the number of degree-`k` multisets.
fn multisets(n: usize, k: usize) -> BigInt {
    BigInt::from(multiset_coefficient(n as u64, k as u64))
}

/// `r_k = 2^{n-1} C(n+k-1, k)`.
fn r(n: usize, k: usize) -> BigInt {
    multisets(n, k) << (n - 1)
}

fn sign(e: usize) -> BigInt {
    if e.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn to_rank(v: BigInt, what: &str) -> Result<usize> {
    if v.is_negative() {
        return Err(Error::InvalidInput(format!("{what} evaluated to {v}")));
    }
    v.to_usize().ok_or_else(|| Error::InvalidInput(format!("{what} = {v} does not fit")))
}

fn finish(n: usize, k: usize, ring: Coefficients, free: BigInt, two_torsion: BigInt, flag: Option<String>) -> Result<ClosedForm> {
    let group = match ring {
        Coefficients::Integers => HomologyGroup::with_two_torsion(to_rank(free, "F")?, to_rank(two_torsion, "T")?),
        Coefficients::Prime(2) => HomologyGroup::free(to_rank(multisets(n, k) << n, "dimension")?),
        _ => HomologyGroup::free(to_rank(free, "F")?),
    };
    Ok(ClosedForm { n, k, ring, group, flag })
}

/// `HH_k(A; A)`. Over `Z`: `Z^F ⊕ Z_2^T` with `F = r_k + [k=0]` and
/// `T = (-1)^{k+1} + 2^{n-1} Σ_{i≤k} (-1)^{k-i} C(n+i-1, i)`. Over a field
/// of characteristic 2 the dimension is `2^n C(n+k-1, k)`, otherwise `F`.
pub fn closed_form_homology(n: usize, k: usize, ring: Coefficients) -> Result<ClosedForm> {
    check_generators(n)?;
    ring.validate()?;
    let free = r(n, k) + if k == 0 { BigInt::one() } else { BigInt::zero() };
    let alternating: BigInt = (0..=k).map(|i| sign(k - i) * multisets(n, i)).sum();
    let torsion = sign(k + 1) + (alternating << (n - 1));
    finish(n, k, ring, free, torsion, None)
}

/// `HH^k(A; A)`. Over `Z`: `F = r_k + [k=0, n odd]`; for `k ≥ 1`
/// `T = 2^{n-1} Σ_{i<k} (-1)^{k-1-i} C(n+i-1, i) + (-1)^k [n odd]`, and
/// `T = 0` for `k = 0` (degree 0 is a kernel inside a free module). The
/// literal formula gives 1 at `k = 0` for odd `n`; that case carries a flag.
pub fn closed_form_cohomology(n: usize, k: usize, ring: Coefficients) -> Result<ClosedForm> {
    check_generators(n)?;
    ring.validate()?;
    let odd = n % 2 == 1;
    let free = r(n, k) + if k == 0 && odd { BigInt::one() } else { BigInt::zero() };
    let alternating: BigInt = (0..k).map(|i| sign(k - 1 - i) * multisets(n, i)).sum();
    let literal = (alternating << (n - 1)) + if odd { sign(k) } else { BigInt::zero() };
    let (torsion, flag) = if k == 0 {
        let flag = (!literal.is_zero())
            .then(|| format!("torsion formula gives {literal} at k = 0; degree 0 is torsion-free, using 0"));
        (BigInt::zero(), flag)
    } else {
        (literal, None)
    };
    finish(n, k, ring, free, torsion, flag)
}
