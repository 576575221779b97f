//! Exhaustive census of monomial ideals of finite colength.
//!
//! A monomial ideal `I` with `dim F[X]/I = K` is determined by its standard
//! monomials, a downset of `N_0^n` of size `K`. Enumerating those downsets
//! gives exact counts to hold against the explicit upper bound on `|M_n(K)|`
//! and the bound `|G(I)| <= (n-1)K + 1` on reduced basis sizes.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::monomial::{minimal_generators, ExponentVector, MonomialOrder, Staircase};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusLimits {
    pub max_vars: usize,
    pub max_colength: usize,
}

impl Default for CensusLimits {
    fn default() -> Self {
        CensusLimits {
            max_vars: 4,
            max_colength: 12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRecord {
    pub n: usize,
    pub k: usize,
    pub count: u64,
    pub lemma1_bound: BigUint,
    pub max_generators: usize,
    pub lemma2_bound: usize,
    pub equality_count: u64,
}

pub const CSV_HEADER: &str = "n,K,count,lemma1_bound,max_generators,lemma2_bound,equality_count";

impl CensusRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            self.k,
            self.count,
            self.lemma1_bound,
            self.max_generators,
            self.lemma2_bound,
            self.equality_count
        )
    }
}

pub fn to_csv(records: &[CensusRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(out, "{}", r.csv_row());
    }
    out
}

fn check_limits(n: usize, k: usize, limits: CensusLimits) -> Result<()> {
    if n == 0 || k == 0 {
        return Err(Error::Range(format!("need n >= 1 and K >= 1, got n = {n}, K = {k}")));
    }
    if n > limits.max_vars || k > limits.max_colength {
        return Err(Error::BudgetExceeded(format!(
            "census of n = {n}, K = {k} exceeds limits n <= {}, K <= {}",
            limits.max_vars, limits.max_colength
        )));
    }
    Ok(())
}

fn canonical_cmp(a: &[ExponentVector], b: &[ExponentVector]) -> Ordering {
    let o = MonomialOrder::Grlex;
    for (x, y) in a.iter().zip(b) {
        match o.cmp(x, y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Every downset of `N_0^n` with exactly `k` members, sorted by their
/// grlex-sorted member lists.
pub fn enumerate_staircases(n: usize, k: usize) -> Result<Vec<Staircase>> {
    enumerate_staircases_with(n, k, CensusLimits::default())
}

pub fn enumerate_staircases_with(n: usize, k: usize, limits: CensusLimits) -> Result<Vec<Staircase>> {
    check_limits(n, k, limits)?;
    // Grow level by level: each size-(c+1) downset arises from some size-c
    // downset by adding one addable corner.
    let mut level: HashSet<Staircase> = HashSet::new();
    level.insert(Staircase::new(n, [ExponentVector::zero(n)])?);
    for _ in 1..k {
        let mut next = HashSet::new();
        for s in &level {
            for corner in minimal_generators(s)? {
                let mut members = s.members().clone();
                members.insert(corner);
                next.insert(Staircase::from_trusted(n, members));
            }
        }
        level = next;
    }
    let mut keyed: Vec<(Vec<ExponentVector>, Staircase)> = level
        .into_iter()
        .map(|s| (s.sorted(MonomialOrder::Grlex), s))
        .collect();
    keyed.sort_by(|a, b| canonical_cmp(&a.0, &b.0));
    Ok(keyed.into_iter().map(|(_, s)| s).collect())
}

/// `K^n (K+n-2)^{(n-1)(K-1)} (2K-3)^{K-2}` for `K >= 2`, and 1 for `K = 1`.
pub fn lemma1_bound(n: usize, k: usize) -> BigUint {
    assert!(n >= 1 && k >= 1);
    if k == 1 {
        return BigUint::from(1u32);
    }
    let kk = BigUint::from(k);
    kk.pow(n as u32)
        * BigUint::from(k + n - 2).pow(((n - 1) * (k - 1)) as u32)
        * BigUint::from(2 * k - 3).pow((k - 2) as u32)
}

/// `(n - 1) K + 1`.
pub fn lemma2_bound(n: usize, k: usize) -> usize {
    (n - 1) * k + 1
}

/// `m_i = 1 + max_i` over members: the least power with `X_i^{m_i}` in the
/// ideal.
pub fn corner_exponents(s: &Staircase) -> Vec<usize> {
    (0..s.dim())
        .map(|i| {
            1 + s
                .members()
                .iter()
                .map(|m| m.as_slice()[i] as usize)
                .max()
                .unwrap_or(0)
        })
        .collect()
}

/// `m_1 + ... + m_n + 1 - n <= K <= m_1 ... m_n`.
pub fn corner_constraint_holds(m: &[usize], k: usize) -> bool {
    let sum: usize = m.iter().sum();
    let prod: usize = m.iter().product();
    sum + 1 - m.len() <= k && k <= prod
}

fn census_one(n: usize, k: usize, limits: CensusLimits) -> Result<CensusRecord> {
    let stairs = enumerate_staircases_with(n, k, limits)?;
    let bound2 = lemma2_bound(n, k);
    let mut max_generators = 0;
    let mut equality_count = 0u64;
    for s in &stairs {
        let g = minimal_generators(s)?.len();
        if g > bound2 {
            return Err(Error::Invariant(format!(
                "staircase {s:?} has {g} generators, above (n-1)K+1 = {bound2}"
            )));
        }
        max_generators = max_generators.max(g);
        if g == bound2 {
            equality_count += 1;
        }
        let m = corner_exponents(s);
        if !corner_constraint_holds(&m, k) {
            return Err(Error::Invariant(format!(
                "corner exponents {m:?} of {s:?} violate the colength constraint"
            )));
        }
    }
    let record = CensusRecord {
        n,
        k,
        count: stairs.len() as u64,
        lemma1_bound: lemma1_bound(n, k),
        max_generators,
        lemma2_bound: bound2,
        equality_count,
    };
    if BigUint::from(record.count) > record.lemma1_bound {
        return Err(Error::Invariant(format!(
            "|M_{n}({k})| = {} exceeds the bound {}",
            record.count, record.lemma1_bound
        )));
    }
    if (equality_count > 0) != (k == 1 || n == 1) {
        return Err(Error::Invariant(format!(
            "equality in the generator bound for n = {n}, K = {k}: {equality_count} ideals"
        )));
    }
    Ok(record)
}

/// One record per `K = 1..=k_max`. Distinct `K` run in parallel.
pub fn run_census(n: usize, k_max: usize) -> Result<Vec<CensusRecord>> {
    run_census_with(n, k_max, CensusLimits::default())
}

pub fn run_census_with(n: usize, k_max: usize, limits: CensusLimits) -> Result<Vec<CensusRecord>> {
    check_limits(n, k_max, limits)?;
    (1..=k_max)
        .into_par_iter()
        .map(|k| census_one(n, k, limits))
        .collect()
}

/// Groups the staircases of one colength by corner vector.
pub fn group_by_corners(stairs: &[Staircase]) -> BTreeMap<Vec<usize>, Vec<Staircase>> {
    let mut groups: BTreeMap<Vec<usize>, Vec<Staircase>> = BTreeMap::new();
    for s in stairs {
        groups.entry(corner_exponents(s)).or_default().push(s.clone());
    }
    groups
}
