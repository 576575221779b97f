//! k-error linear complexity: the smallest `L(t)` over arrays `t` that differ
//! from `s` in at most `k` positions of one period.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::annihilator::linear_complexity;
use crate::error::{Error, Result};
use crate::gf::FieldElement;
use crate::monomial::binomial;
use crate::rng::SplitMix64;
use crate::seqarray::{hamming_distance, random_element, PeriodicArray};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KErrorMode {
    Exact,
    /// Random error patterns; the value is an upper bound on `L_k(s)`.
    Sampled,
}

impl std::str::FromStr for KErrorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(KErrorMode::Exact),
            "sampled" => Ok(KErrorMode::Sampled),
            other => Err(Error::Range(format!("unknown k-error mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KErrorResult {
    pub k: usize,
    pub value: usize,
    pub witness: PeriodicArray,
    pub mode: KErrorMode,
    pub candidates_examined: u64,
}

/// Exact number of arrays within Hamming distance `k` of a fixed array of
/// `n` cells over a field of `q` elements.
pub fn ball_size(n: u64, k: u64, q: &BigUint) -> Result<BigUint> {
    if k > n {
        return Err(Error::Range(format!("k = {k} exceeds the {n} cells of a period")));
    }
    let q1 = q - 1u32;
    Ok((0..=k).map(|i| binomial(n, i) * q1.pow(i as u32)).sum())
}

/// The cruder count `q^k C(n, k)` used when bounding error balls by hand.
pub fn ball_bound(n: u64, k: u64, q: &BigUint) -> BigUint {
    q.pow(k as u32) * binomial(n, k)
}

struct Best {
    value: usize,
    witness: PeriodicArray,
}

impl Best {
    fn offer(&mut self, value: usize, candidate: &PeriodicArray) {
        // first minimum wins
        if value < self.value {
            self.value = value;
            self.witness = candidate.clone();
        }
    }
}

fn check_k(s: &PeriodicArray, k: usize) -> Result<()> {
    if k > s.volume() {
        return Err(Error::Range(format!(
            "k = {k} exceeds the period volume {}",
            s.volume()
        )));
    }
    Ok(())
}

fn check_budget(s: &PeriodicArray, k: usize, budget: u64) -> Result<()> {
    let ball = ball_size(s.volume() as u64, k as u64, &s.field().order())?;
    if ball > BigUint::from(budget) {
        return Err(Error::BudgetExceeded(format!(
            "exact {k}-error search needs ball size {ball}, budget is {budget}"
        )));
    }
    Ok(())
}

/// Visits every error pattern of weight exactly `w` in enumeration order:
/// position sets ascending lexicographically, then replacement values in
/// ascending canonical order (first position slowest). Stops early when the
/// visitor returns false.
fn for_each_pattern(
    s: &PeriodicArray,
    w: usize,
    mut visit: impl FnMut(&PeriodicArray) -> bool,
) {
    let field = s.field();
    let elems: Vec<FieldElement> = field.elements().collect();
    let n = s.volume();
    if w > n {
        return;
    }
    let mut positions: Vec<usize> = (0..w).collect();
    let mut cand = s.clone();
    loop {
        // replacement choices: the q - 1 values other than the original
        let choices: Vec<Vec<FieldElement>> = positions
            .iter()
            .map(|&p| elems.iter().copied().filter(|e| *e != s.get(p)).collect())
            .collect();
        let mut digits = vec![0usize; w];
        loop {
            for (i, &p) in positions.iter().enumerate() {
                cand.data_mut()[p] = choices[i][digits[i]];
            }
            if !visit(&cand) {
                return;
            }
            let mut wrapped = true;
            for i in (0..w).rev() {
                digits[i] += 1;
                if digits[i] < choices[i].len() {
                    wrapped = false;
                    break;
                }
                digits[i] = 0;
            }
            if wrapped {
                break;
            }
        }
        for &p in &positions {
            cand.data_mut()[p] = s.get(p);
        }
        // next combination in lexicographic order
        let Some(i) = (0..w).rev().find(|&i| positions[i] < n - w + i) else {
            return;
        };
        positions[i] += 1;
        for j in i + 1..w {
            positions[j] = positions[j - 1] + 1;
        }
    }
}

fn exact_profile(s: &PeriodicArray, k_max: usize) -> Vec<KErrorResult> {
    let mut best = Best {
        value: linear_complexity(s),
        witness: s.clone(),
    };
    let mut examined = 1u64;
    let mut out = vec![KErrorResult {
        k: 0,
        value: best.value,
        witness: best.witness.clone(),
        mode: KErrorMode::Exact,
        candidates_examined: examined,
    }];
    for w in 1..=k_max {
        if best.value > 0 {
            for_each_pattern(s, w, |cand| {
                examined += 1;
                best.offer(linear_complexity(cand), cand);
                best.value > 0
            });
        }
        out.push(KErrorResult {
            k: w,
            value: best.value,
            witness: best.witness.clone(),
            mode: KErrorMode::Exact,
            candidates_examined: examined,
        });
    }
    out
}

fn random_pattern(s: &PeriodicArray, k: usize, rng: &mut SplitMix64) -> PeriodicArray {
    let field = s.field();
    let n = s.volume();
    let w = rng.below(k as u64 + 1) as usize;
    let mut idx: Vec<usize> = (0..n).collect();
    let mut cand = s.clone();
    for i in 0..w {
        let j = i + rng.below((n - i) as u64) as usize;
        idx.swap(i, j);
        let p = idx[i];
        let offset = loop {
            let e = random_element(field, rng);
            if !e.is_zero() {
                break e;
            }
        };
        cand.data_mut()[p] = field.add(&s.get(p), &offset);
    }
    cand
}

fn sampled_profile(s: &PeriodicArray, k_max: usize, budget: u64, seed: u64) -> Vec<KErrorResult> {
    let mut best = Best {
        value: linear_complexity(s),
        witness: s.clone(),
    };
    let mut examined = 1u64;
    let mut out = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        // Earlier draws stay valid for larger k, so the profile is a running
        // minimum over independent streams.
        let mut rng = SplitMix64::stream(seed, k as u64);
        if k > 0 {
            for _ in 0..budget {
                if best.value == 0 {
                    break;
                }
                let cand = random_pattern(s, k, &mut rng);
                examined += 1;
                best.offer(linear_complexity(&cand), &cand);
            }
        }
        out.push(KErrorResult {
            k,
            value: best.value,
            witness: best.witness.clone(),
            mode: KErrorMode::Sampled,
            candidates_examined: examined,
        });
    }
    out
}

fn check_witnesses(s: &PeriodicArray, results: &[KErrorResult]) -> Result<()> {
    for r in results {
        let d = hamming_distance(s, &r.witness)?;
        if d > r.k {
            return Err(Error::Invariant(format!(
                "witness for k = {} lies at distance {d}",
                r.k
            )));
        }
        let l = linear_complexity(&r.witness);
        if l != r.value {
            return Err(Error::Invariant(format!(
                "witness for k = {} has complexity {l}, reported {}",
                r.k, r.value
            )));
        }
    }
    if results.windows(2).any(|w| w[1].value > w[0].value) {
        return Err(Error::Invariant("k-error profile is not monotone".into()));
    }
    Ok(())
}

/// `L_k(s)` for `k = 0..=k_max`. Exact mode needs the distance-`k_max` ball
/// to fit in `budget`; sampled mode draws `budget` patterns per `k`.
pub fn k_error_profile(
    s: &PeriodicArray,
    k_max: usize,
    mode: KErrorMode,
    budget: u64,
    seed: u64,
) -> Result<Vec<KErrorResult>> {
    check_k(s, k_max)?;
    let results = match mode {
        KErrorMode::Exact => {
            check_budget(s, k_max, budget)?;
            exact_profile(s, k_max)
        }
        KErrorMode::Sampled => sampled_profile(s, k_max, budget, seed),
    };
    check_witnesses(s, &results)?;
    Ok(results)
}

pub fn k_error_complexity(
    s: &PeriodicArray,
    k: usize,
    mode: KErrorMode,
    budget: u64,
    seed: u64,
) -> Result<KErrorResult> {
    let mut profile = k_error_profile(s, k, mode, budget, seed)?;
    Ok(profile.pop().expect("profile covers k"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;
    use crate::seqarray::random_array;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn ball_size_examples() {
        assert_eq!(ball_size(9, 0, &big(3)).unwrap(), big(1));
        assert_eq!(ball_size(4, 1, &big(2)).unwrap(), big(5));
        assert_eq!(ball_bound(4, 1, &big(2)), big(8));
        assert_eq!(ball_size(4, 4, &big(2)).unwrap(), big(16));
        assert!(matches!(ball_size(4, 5, &big(2)), Err(Error::Range(_))));
        for n in 1..8u64 {
            for k in 1..=n {
                for q in 2..5u64 {
                    assert!(ball_size(n, k, &big(q)).unwrap() <= ball_bound(n, k, &big(q)));
                }
            }
        }
    }

    #[test]
    fn pattern_enumeration_covers_the_ball() {
        let f = FieldSpec::prime(3).unwrap();
        let s = random_array(&f, &[2, 2], 3).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        let mut total = 0u64;
        for w in 0..=4 {
            for_each_pattern(&s, w, |c| {
                assert_eq!(hamming_distance(&s, c).unwrap(), w);
                seen.insert(c.data().to_vec());
                total += 1;
                true
            });
        }
        assert_eq!(BigUint::from(total), ball_size(4, 4, &big(3)).unwrap());
        assert_eq!(seen.len() as u64, total);
    }

    #[test]
    fn impulse_profile() {
        let f = FieldSpec::prime(2).unwrap();
        let s = PeriodicArray::from_ints(f.clone(), vec![2, 2], &[1, 0, 0, 0]).unwrap();
        let prof = k_error_profile(&s, 4, KErrorMode::Exact, DEFAULT_BUDGET, 0).unwrap();
        let values: Vec<_> = prof.iter().map(|r| r.value).collect();
        assert_eq!(values, vec![4, 0, 0, 0, 0]);
        assert!(prof[1].witness.is_zero());
        let r1 = k_error_complexity(&s, 1, KErrorMode::Exact, DEFAULT_BUDGET, 0).unwrap();
        assert_eq!(r1.value, 0);
        let r0 = k_error_complexity(&s, 0, KErrorMode::Exact, DEFAULT_BUDGET, 0).unwrap();
        assert_eq!(r0.value, 4);
        assert_eq!(r0.witness, s);
    }

    #[test]
    fn full_weight_erases_everything() {
        let f = FieldSpec::prime(3).unwrap();
        let s = random_array(&f, &[3], 11).unwrap();
        let r = k_error_complexity(&s, 3, KErrorMode::Exact, DEFAULT_BUDGET, 0).unwrap();
        assert_eq!(r.value, 0);
    }

    #[test]
    fn budget_and_range_errors() {
        let f = FieldSpec::prime(2).unwrap();
        let s = random_array(&f, &[4, 4], 1).unwrap();
        match k_error_complexity(&s, 3, KErrorMode::Exact, 100, 0) {
            Err(Error::BudgetExceeded(m)) => assert!(m.contains("697"), "{m}"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            k_error_complexity(&s, 17, KErrorMode::Exact, DEFAULT_BUDGET, 0),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn sampled_never_beats_exact() {
        let f = FieldSpec::prime(2).unwrap();
        for seed in 0..10 {
            let s = random_array(&f, &[2, 3], seed).unwrap();
            let exact = k_error_profile(&s, 3, KErrorMode::Exact, DEFAULT_BUDGET, 0).unwrap();
            let sampled = k_error_profile(&s, 3, KErrorMode::Sampled, 50, seed).unwrap();
            for (e, m) in exact.iter().zip(&sampled) {
                assert!(m.value >= e.value);
            }
            assert_eq!(
                sampled,
                k_error_profile(&s, 3, KErrorMode::Sampled, 50, seed).unwrap()
            );
        }
    }
}
