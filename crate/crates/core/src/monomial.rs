//! Monomials of `F_q[X_1, ..., X_n]`, monomial orders and staircases.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent vector `(j_1, ..., j_n)` of the monomial `X_1^{j_1} ... X_n^{j_n}`.
///
/// The derived `Ord` is plain lexicographic comparison of the vectors and is
/// only used for storage; monomial comparisons go through [`MonomialOrder`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exponents: Vec<u32>) -> Self {
        ExponentVector(exponents)
    }

    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    /// The `i`-th unit vector (0-based axis).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        ExponentVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, if `other` divides `self`.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(ExponentVector)
    }

    /// Predecessors `self - e_i` for every axis with a positive exponent.
    pub fn predecessors(&self) -> impl Iterator<Item = ExponentVector> + '_ {
        (0..self.dim()).filter(|&i| self.0[i] > 0).map(move |i| {
            let mut v = self.0.clone();
            v[i] -= 1;
            ExponentVector(v)
        })
    }

    pub fn successors(&self) -> impl Iterator<Item = ExponentVector> + '_ {
        (0..self.dim()).map(move |i| {
            let mut v = self.0.clone();
            v[i] += 1;
            ExponentVector(v)
        })
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(v)
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

fn check_dims(a: &ExponentVector, b: &ExponentVector) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!(
            "exponent vectors of length {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

/// Monomial orders with fixed variable precedence `X_1 > X_2 > ... > X_n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    #[default]
    Grlex,
    Lex,
}

impl MonomialOrder {
    pub fn compare(&self, a: &ExponentVector, b: &ExponentVector) -> Result<Ordering> {
        check_dims(a, b)?;
        Ok(self.cmp(a, b))
    }

    /// Unchecked comparison; both vectors must have the same length.
    pub fn cmp(&self, a: &ExponentVector, b: &ExponentVector) -> Ordering {
        debug_assert_eq!(a.dim(), b.dim());
        match self {
            MonomialOrder::Grlex => a.degree().cmp(&b.degree()).then_with(|| a.0.cmp(&b.0)),
            MonomialOrder::Lex => a.0.cmp(&b.0),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MonomialOrder::Grlex => "grlex",
            MonomialOrder::Lex => "lex",
        }
    }
}

impl std::str::FromStr for MonomialOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grlex" => Ok(MonomialOrder::Grlex),
            "lex" => Ok(MonomialOrder::Lex),
            other => Err(Error::Range(format!("unknown monomial order {other:?}"))),
        }
    }
}

/// True iff `X^a` divides `X^b`.
pub fn divides(a: &ExponentVector, b: &ExponentVector) -> Result<bool> {
    check_dims(a, b)?;
    Ok(divides_unchecked(a, b))
}

pub(crate) fn divides_unchecked(a: &ExponentVector, b: &ExponentVector) -> bool {
    a.0.iter().zip(&b.0).all(|(x, y)| x <= y)
}

/// All `j` with `0 <= j_i <= bounds_i`, ascending in `order`.
pub fn enumerate_box(bounds: &[u32], order: MonomialOrder) -> Result<Vec<ExponentVector>> {
    if bounds.is_empty() || bounds.contains(&0) {
        return Err(Error::Dimension(format!(
            "box bounds must be a nonempty list of positive integers, got {bounds:?}"
        )));
    }
    let mut out = Vec::with_capacity(bounds.iter().map(|&b| b as usize + 1).product());
    let mut cur = vec![0u32; bounds.len()];
    'outer: loop {
        out.push(ExponentVector(cur.clone()));
        for i in (0..bounds.len()).rev() {
            if cur[i] < bounds[i] {
                cur[i] += 1;
                continue 'outer;
            }
            cur[i] = 0;
        }
        break;
    }
    out.sort_by(|a, b| order.cmp(a, b));
    Ok(out)
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Number of monomials of total degree `d` in `n` variables, `C(n+d-1, n-1)`.
pub fn count_monomials_of_degree(n: u64, d: u64) -> BigUint {
    assert!(n >= 1, "at least one variable");
    binomial(n + d - 1, n - 1)
}

/// A finite order ideal of `N_0^n`: the standard monomials of a zero-dimensional
/// monomial ideal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Staircase {
    n: usize,
    members: BTreeSet<ExponentVector>,
}

impl Staircase {
    /// Validates downward closure.
    pub fn new(n: usize, members: impl IntoIterator<Item = ExponentVector>) -> Result<Self> {
        let s = Staircase {
            n,
            members: members.into_iter().collect(),
        };
        if let Some(bad) = s.members.iter().find(|m| m.dim() != n) {
            return Err(Error::Dimension(format!("member {bad:?} is not in N_0^{n}")));
        }
        if let Some(bad) = s.closure_violation() {
            return Err(Error::Invariant(format!(
                "staircase is not downward closed at {bad:?}"
            )));
        }
        Ok(s)
    }

    /// Skips the closure check; callers guarantee it.
    pub(crate) fn from_trusted(n: usize, members: BTreeSet<ExponentVector>) -> Self {
        Staircase { n, members }
    }

    pub fn empty(n: usize) -> Self {
        Staircase {
            n,
            members: BTreeSet::new(),
        }
    }

    fn closure_violation(&self) -> Option<&ExponentVector> {
        self.members
            .iter()
            .find(|m| m.predecessors().any(|p| !self.members.contains(&p)))
    }

    pub fn is_downward_closed(&self) -> bool {
        self.closure_violation().is_none()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, j: &ExponentVector) -> bool {
        self.members.contains(j)
    }

    pub fn members(&self) -> &BTreeSet<ExponentVector> {
        &self.members
    }

    /// Members sorted ascending in `order`.
    pub fn sorted(&self, order: MonomialOrder) -> Vec<ExponentVector> {
        let mut v: Vec<_> = self.members.iter().cloned().collect();
        v.sort_by(|a, b| order.cmp(a, b));
        v
    }
}

impl fmt::Debug for Staircase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.sorted(MonomialOrder::Grlex)).finish()
    }
}

/// Minimal generators of the monomial ideal whose standard monomials are `s`,
/// i.e. the minimal elements of `N_0^n \ s` under divisibility. Sorted in
/// graded-lex order.
pub fn minimal_generators(s: &Staircase) -> Result<Vec<ExponentVector>> {
    if let Some(bad) = s.closure_violation() {
        return Err(Error::Invariant(format!(
            "staircase is not downward closed at {bad:?}"
        )));
    }
    if s.is_empty() {
        return Ok(vec![ExponentVector::zero(s.n)]);
    }
    let mut corners = BTreeSet::new();
    for m in &s.members {
        for j in m.successors() {
            if !s.contains(&j) && j.predecessors().all(|p| s.contains(&p)) {
                corners.insert(j);
            }
        }
    }
    let mut out: Vec<_> = corners.into_iter().collect();
    out.sort_by(|a, b| MonomialOrder::Grlex.cmp(a, b));
    Ok(out)
}
