//! Reduced Gröbner basis of the annihilator ideal `I(s)` of a periodic array,
//! its Delta set, and the linear complexity `L(s) = |Δ(s)|`.
//!
//! `P = sum a_j X^j` annihilates `s` exactly when `sum a_j v_j = 0`, where
//! `v_j = (s(m + j))_m` is the shift vector over one period. Since
//! `X_i^{T_i} - 1` lies in `I(s)`, every standard monomial sits in
//! `prod [0, T_i)` and every minimal leading monomial in `prod [0, T_i]`. The
//! scan visits that box in ascending monomial order, skips multiples of
//! leading monomials already found, and tests each remaining `v_j` against the
//! span of the shift vectors of the standard monomials found so far. An
//! independent vector makes `j` standard; a dependency
//! `v_j = sum c_d v_d` yields the basis element `X^j - sum c_d X^d`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec, Membership, SpanBasis};
use crate::monomial::{
    divides_unchecked, enumerate_box, minimal_generators, ExponentVector, MonomialOrder, Staircase,
};
use crate::seqarray::{apply_polynomial, PeriodicArray, PolynomialFq};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnihilatorResult {
    pub order: MonomialOrder,
    pub delta: Staircase,
    /// Sorted ascending by leading monomial.
    pub basis: Vec<PolynomialFq>,
    pub complexity: usize,
}

impl AnnihilatorResult {
    pub fn leading_monomials(&self) -> Vec<ExponentVector> {
        self.basis
            .iter()
            .filter_map(|g| g.leading_monomial(self.order).cloned())
            .collect()
    }
}

pub fn compute(s: &PeriodicArray, order: MonomialOrder) -> AnnihilatorResult {
    let field = s.field();
    let n = s.dim();
    let bounds: Vec<u32> = s.periods().iter().map(|&t| t as u32).collect();
    let scan = enumerate_box(&bounds, order).expect("periods are positive");

    let mut span = SpanBasis::new(field, s.volume());
    let mut delta: Vec<ExponentVector> = Vec::new();
    let mut leading: Vec<ExponentVector> = Vec::new();
    let mut basis = Vec::new();
    for j in scan {
        if leading.iter().any(|l| divides_unchecked(l, &j)) {
            continue;
        }
        let v = s.shift_vector(j.as_slice());
        match span.insert_or_express(&v).expect("shift vector has box length") {
            Membership::Added(_) => delta.push(j),
            Membership::InSpan(coeffs) => {
                let mut g = PolynomialFq::monomial(j.clone(), field.one());
                for (d, c) in delta.iter().zip(&coeffs) {
                    g.add_term(field, d.clone(), field.neg(c));
                }
                leading.push(j);
                basis.push(g);
            }
        }
    }
    let complexity = delta.len();
    AnnihilatorResult {
        order,
        delta: Staircase::from_trusted(n, delta.into_iter().collect()),
        basis,
        complexity,
    }
}

/// `L(s)` alone.
pub fn linear_complexity(s: &PeriodicArray) -> usize {
    compute(s, MonomialOrder::Grlex).complexity
}

/// Remainder of `p` on division by `basis`, reducing every term that some
/// leading monomial divides.
pub fn normal_form(
    field: &FieldSpec,
    p: &PolynomialFq,
    basis: &[PolynomialFq],
    order: MonomialOrder,
) -> PolynomialFq {
    let heads: Vec<_> = basis
        .iter()
        .filter_map(|g| g.leading_term(order).map(|(m, c)| (m.clone(), *c)))
        .collect();
    let mut rest = p.clone();
    let mut rem = PolynomialFq::zero(p.nvars());
    while let Some((lm, lc)) = rest.leading_term(order).map(|(m, c)| (m.clone(), *c)) {
        match heads.iter().position(|(h, _)| divides_unchecked(h, &lm)) {
            Some(i) => {
                let (h, hc) = &heads[i];
                let factor = field.div(&lc, hc).expect("leading coefficient is nonzero");
                let shift = lm.checked_sub(h).expect("divisor");
                rest.sub_scaled_shifted(field, &factor, &shift, &basis[i]);
            }
            None => {
                rest.set_coeff(lm.clone(), field.zero());
                rem.set_coeff(lm, lc);
            }
        }
    }
    rem
}

/// Outcome of [`verify`]: empty `issues` means every check passed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verification {
    pub issues: Vec<String>,
}

impl Verification {
    pub fn ok(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Checks that `r` is the reduced Gröbner basis of `I(s)`: structure,
/// annihilation, and membership of every `X_i^{T_i} - 1`.
pub fn verify(s: &PeriodicArray, r: &AnnihilatorResult) -> Verification {
    let field = s.field();
    let order = r.order;
    let n = s.dim();
    let mut issues = Vec::new();

    if r.complexity != r.delta.len() {
        issues.push(format!(
            "complexity {} differs from |delta| = {}",
            r.complexity,
            r.delta.len()
        ));
    }
    if r.complexity > s.volume() {
        issues.push(format!("complexity {} exceeds period volume {}", r.complexity, s.volume()));
    }
    if r.delta.dim() != n {
        issues.push("delta has the wrong dimension".into());
    }
    if !r.delta.is_downward_closed() {
        issues.push("delta is not downward closed".into());
    }
    if r.basis.iter().any(|g| g.nvars() != n) {
        issues.push("basis polynomial in the wrong number of variables".into());
        return Verification { issues };
    }

    let mut heads = Vec::new();
    for (i, g) in r.basis.iter().enumerate() {
        let Some((lm, lc)) = g.leading_term(order) else {
            issues.push(format!("basis[{i}] is zero"));
            continue;
        };
        if *lc != field.one() {
            issues.push(format!("basis[{i}] is not monic"));
        }
        if r.delta.contains(lm) {
            issues.push(format!("leading monomial {lm:?} of basis[{i}] lies in delta"));
        }
        for exp in g.terms().keys() {
            if exp != lm && !r.delta.contains(exp) {
                issues.push(format!("basis[{i}] has tail term {exp:?} outside delta"));
            }
        }
        heads.push(lm.clone());
    }
    for (i, a) in heads.iter().enumerate() {
        for (j, g) in r.basis.iter().enumerate() {
            if i != j && g.terms().keys().any(|t| divides_unchecked(a, t)) {
                issues.push(format!(
                    "leading monomial {a:?} of basis[{i}] divides a term of basis[{j}]"
                ));
            }
        }
    }
    if r.delta.is_downward_closed() && r.delta.dim() == n {
        let mut expected = minimal_generators(&r.delta).expect("checked downward closed");
        let mut got = heads.clone();
        expected.sort();
        got.sort();
        if expected != got {
            issues.push(format!(
                "leading monomials {got:?} are not the corners {expected:?} of delta"
            ));
        }
    }
    for (i, g) in r.basis.iter().enumerate() {
        match apply_polynomial(g, s) {
            Ok(res) if res.is_zero() => {}
            Ok(_) => issues.push(format!("basis[{i}] does not annihilate the sequence")),
            Err(e) => issues.push(format!("basis[{i}]: {e}")),
        }
    }
    for (axis, &t) in s.periods().iter().enumerate() {
        let rel = PolynomialFq::binomial_relation(field, n, axis, t as u32);
        let rem = normal_form(field, &rel, &r.basis, order);
        if !rem.is_zero() {
            issues.push(format!(
                "X{}^{t} - 1 reduces to {} instead of 0",
                axis + 1,
                rem.render(field, order)
            ));
        }
    }
    Verification { issues }
}

/// Values of `s` on the Delta set of `r`, the initial terms that determine it.
pub fn initial_terms(s: &PeriodicArray, r: &AnnihilatorResult) -> BTreeMap<ExponentVector, FieldElement> {
    r.delta
        .members()
        .iter()
        .map(|d| (d.clone(), s.at(d).expect("delta lies in the array's dimension")))
        .collect()
}

/// Rebuilds one period from its values on the Delta set using the basis
/// recurrences.
pub fn regenerate(
    field: &FieldSpec,
    initial: &BTreeMap<ExponentVector, FieldElement>,
    r: &AnnihilatorResult,
    periods: &[usize],
) -> Result<PeriodicArray> {
    let order = r.order;
    for d in r.delta.members() {
        if !initial.contains_key(d) {
            return Err(Error::InconsistentBasis(format!("no initial value for {d:?}")));
        }
    }
    let template = PeriodicArray::zeros(field.clone(), periods.to_vec())?;
    let n = template.dim();
    let bounds: Vec<u32> = periods.iter().map(|&t| t as u32 - 1).collect();
    let positions = if bounds.iter().all(|&b| b > 0) {
        enumerate_box(&bounds, order)?
    } else {
        // enumerate_box wants positive bounds; pad axes of period 1.
        let padded: Vec<u32> = bounds.iter().map(|&b| b.max(1)).collect();
        enumerate_box(&padded, order)?
            .into_iter()
            .filter(|j| j.as_slice().iter().zip(&bounds).all(|(x, b)| x <= b))
            .collect()
    };
    let heads: Vec<_> = r
        .basis
        .iter()
        .map(|g| g.leading_term(order).map(|(m, c)| (m.clone(), *c)))
        .collect();

    let mut filled: Vec<Option<FieldElement>> = vec![None; template.volume()];
    let lookup = |filled: &Vec<Option<FieldElement>>, j: &ExponentVector| -> Option<FieldElement> {
        let m: Vec<usize> = j
            .as_slice()
            .iter()
            .zip(periods)
            .map(|(&x, &t)| x as usize % t)
            .collect();
        filled[template.linear_index(&m)]
    };
    for j in positions {
        if j.dim() != n {
            return Err(Error::Dimension("period and basis dimensions differ".into()));
        }
        let value = if let Some(v) = initial.get(&j).filter(|_| r.delta.contains(&j)) {
            *v
        } else {
            let Some((i, (lm, lc))) = heads
                .iter()
                .enumerate()
                .find_map(|(i, h)| h.as_ref().filter(|(m, _)| divides_unchecked(m, &j)).map(|h| (i, h)))
            else {
                return Err(Error::InconsistentBasis(format!(
                    "no leading monomial divides {j:?}"
                )));
            };
            // (X^a g) s (0) = 0 with a = j - lm
            let shift = j.checked_sub(lm).expect("divisor");
            let mut acc = field.zero();
            for (exp, c) in r.basis[i].terms() {
                if exp == lm {
                    continue;
                }
                let Some(v) = lookup(&filled, &exp.add(&shift)) else {
                    return Err(Error::InconsistentBasis(format!(
                        "value at {:?} needed before it is known",
                        exp.add(&shift)
                    )));
                };
                acc = field.mul_add(&acc, c, &v);
            }
            field.neg(&field.div(&acc, lc)?)
        };
        let m: Vec<usize> = j.as_slice().iter().map(|&x| x as usize).collect();
        filled[template.linear_index(&m)] = Some(value);
    }
    let data = filled
        .into_iter()
        .map(|v| v.ok_or_else(|| Error::InconsistentBasis("unfilled position".into())))
        .collect::<Result<Vec<_>>>()?;
    PeriodicArray::new(field.clone(), periods.to_vec(), data)
}

/// Linear complexity of a finite sequence by Berlekamp–Massey.
pub fn berlekamp_massey_terms(field: &FieldSpec, seq: &[FieldElement]) -> usize {
    let one = field.one();
    let mut conn = vec![one];
    let mut prev = vec![one];
    let mut l = 0usize;
    let mut gap = 1usize;
    let mut prev_disc = one;
    for i in 0..seq.len() {
        let mut disc = seq[i];
        for k in 1..=l.min(conn.len() - 1) {
            disc = field.mul_add(&disc, &conn[k], &seq[i - k]);
        }
        if disc.is_zero() {
            gap += 1;
            continue;
        }
        let coef = field.div(&disc, &prev_disc).expect("previous discrepancy is nonzero");
        let neg = field.neg(&coef);
        let saved = conn.clone();
        if conn.len() < prev.len() + gap {
            conn.resize(prev.len() + gap, field.zero());
        }
        for (k, b) in prev.iter().enumerate() {
            conn[k + gap] = field.mul_add(&conn[k + gap], &neg, b);
        }
        if 2 * l <= i {
            l = i + 1 - l;
            prev = saved;
            prev_disc = disc;
            gap = 1;
        } else {
            gap += 1;
        }
    }
    l
}

/// 1-D linear complexity, running Berlekamp–Massey over two full periods.
pub fn berlekamp_massey(t: &PeriodicArray) -> Result<usize> {
    if t.dim() != 1 {
        return Err(Error::Dimension(format!(
            "Berlekamp-Massey needs a one-dimensional sequence, got {} dimensions",
            t.dim()
        )));
    }
    let seq: Vec<_> = t.data().iter().chain(t.data()).copied().collect();
    Ok(berlekamp_massey_terms(t.field(), &seq))
}

/// Complexities `L^{m_2..m_n}(s)` of the first-axis slices, indexed by
/// `(m_2, ..., m_n)` in layout order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceComplexities {
    pub shape: Vec<usize>,
    pub values: Vec<usize>,
}

impl SliceComplexities {
    pub fn total(&self) -> usize {
        self.values.iter().sum()
    }
}

pub fn slice_complexities(s: &PeriodicArray) -> Result<SliceComplexities> {
    if s.dim() < 2 {
        return Err(Error::Dimension("slice complexities need n >= 2".into()));
    }
    let t1 = s.periods()[0];
    let inner = s.volume() / t1;
    let field = s.field();
    let values = (0..inner)
        .map(|r| {
            let slice: Vec<_> = (0..2 * t1).map(|m| s.get((m % t1) * inner + r)).collect();
            berlekamp_massey_terms(field, &slice)
        })
        .collect();
    Ok(SliceComplexities {
        shape: s.periods()[1..].to_vec(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqarray::random_array;
    use proptest::prelude::*;

    fn f2() -> FieldSpec {
        FieldSpec::prime(2).unwrap()
    }

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    fn arr(periods: &[usize], data: &[u64]) -> PeriodicArray {
        PeriodicArray::from_ints(f2(), periods.to_vec(), data).unwrap()
    }

    fn rendered(r: &AnnihilatorResult) -> Vec<String> {
        r.basis.iter().map(|g| g.render(&f2(), r.order)).collect()
    }

    #[test]
    fn zero_array_has_unit_ideal() {
        for periods in [vec![3], vec![2, 2], vec![1, 2, 3]] {
            let z = PeriodicArray::zeros(f2(), periods).unwrap();
            let r = compute(&z, MonomialOrder::Grlex);
            assert_eq!(r.complexity, 0);
            assert!(r.delta.is_empty());
            assert_eq!(rendered(&r), vec!["1"]);
            assert!(verify(&z, &r).ok());
        }
    }

    #[test]
    fn constant_one() {
        let s = arr(&[2, 2], &[1, 1, 1, 1]);
        let r = compute(&s, MonomialOrder::Grlex);
        assert_eq!(r.complexity, 1);
        assert_eq!(r.delta.sorted(MonomialOrder::Grlex), vec![ev(&[0, 0])]);
        assert_eq!(rendered(&r), vec!["X2 + 1", "X1 + 1"]);
        assert!(verify(&s, &r).ok());
    }

    #[test]
    fn checkerboard() {
        let s = arr(&[2, 2], &[0, 1, 1, 0]);
        let r = compute(&s, MonomialOrder::Grlex);
        assert_eq!(r.complexity, 2);
        assert_eq!(r.delta.sorted(MonomialOrder::Grlex), vec![ev(&[0, 0]), ev(&[0, 1])]);
        assert_eq!(rendered(&r), vec!["X1 + X2", "X2^2 + 1"]);
        assert!(verify(&s, &r).ok(), "{:?}", verify(&s, &r));
    }

    #[test]
    fn impulse_is_full_box() {
        let s = arr(&[2, 2], &[1, 0, 0, 0]);
        let r = compute(&s, MonomialOrder::Grlex);
        assert_eq!(r.complexity, 4);
        assert_eq!(r.delta.len(), 4);
        assert!(verify(&s, &r).ok());
    }

    #[test]
    fn verify_detects_tampering() {
        let f = f2();
        let s = arr(&[2, 2], &[0, 1, 1, 0]);
        let r = compute(&s, MonomialOrder::Grlex);
        let mut bad = r.clone();
        bad.basis[0].set_coeff(ev(&[0, 0]), f.one());
        assert!(!verify(&s, &bad).ok());
        let mut dropped = r.clone();
        dropped.basis.pop(); // X2^2 + 1
        let v = verify(&s, &dropped);
        assert!(!v.ok());
        assert!(v.issues.iter().any(|m| m.contains("X1^2 - 1") || m.contains("X1^2")), "{v:?}");
        let mut wrong_l = r.clone();
        wrong_l.complexity = 3;
        assert!(!verify(&s, &wrong_l).ok());
    }

    #[test]
    fn normal_form_reduces_period_relations() {
        let f = f2();
        let s = arr(&[2, 2], &[0, 1, 1, 0]);
        let r = compute(&s, MonomialOrder::Grlex);
        let rel = PolynomialFq::binomial_relation(&f, 2, 0, 2);
        assert!(normal_form(&f, &rel, &r.basis, r.order).is_zero());
        let x2 = PolynomialFq::monomial(ev(&[0, 1]), f.one());
        assert_eq!(normal_form(&f, &x2, &r.basis, r.order), x2);
    }

    #[test]
    fn regenerate_examples() {
        let f = f2();
        let s = arr(&[2, 2], &[0, 1, 1, 0]);
        let r = compute(&s, MonomialOrder::Grlex);
        let init: BTreeMap<_, _> = [(ev(&[0, 0]), f.zero()), (ev(&[0, 1]), f.one())].into();
        assert_eq!(regenerate(&f, &init, &r, &[2, 2]).unwrap(), s);

        let ones = arr(&[2, 2], &[1, 1, 1, 1]);
        let r = compute(&ones, MonomialOrder::Grlex);
        let init: BTreeMap<_, _> = [(ev(&[0, 0]), f.one())].into();
        assert_eq!(regenerate(&f, &init, &r, &[2, 2]).unwrap(), ones);

        let z = PeriodicArray::zeros(f.clone(), vec![3, 2]).unwrap();
        let r = compute(&z, MonomialOrder::Grlex);
        assert_eq!(regenerate(&f, &BTreeMap::new(), &r, &[3, 2]).unwrap(), z);
    }

    #[test]
    fn regenerate_reports_missing_recurrences() {
        let f = f2();
        let s = arr(&[2, 2], &[0, 1, 1, 0]);
        let mut r = compute(&s, MonomialOrder::Grlex);
        r.basis.remove(0); // X1 + X2; nothing covers (1,0) any more
        let init = initial_terms(&s, &r);
        assert!(matches!(
            regenerate(&f, &init, &r, &[2, 2]),
            Err(Error::InconsistentBasis(_))
        ));
        let r = compute(&s, MonomialOrder::Grlex);
        assert!(matches!(
            regenerate(&f, &BTreeMap::new(), &r, &[2, 2]),
            Err(Error::InconsistentBasis(_))
        ));
    }

    #[test]
    fn berlekamp_massey_examples() {
        assert_eq!(berlekamp_massey(&arr(&[5], &[0; 5])).unwrap(), 0);
        assert_eq!(berlekamp_massey(&arr(&[2], &[0, 1])).unwrap(), 2);
        assert_eq!(berlekamp_massey(&arr(&[4], &[1, 0, 0, 0])).unwrap(), 4);
        assert!(matches!(
            berlekamp_massey(&arr(&[2, 2], &[0; 4])),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn slice_examples() {
        let z = PeriodicArray::zeros(f2(), vec![2, 3]).unwrap();
        assert!(slice_complexities(&z).unwrap().values.iter().all(|&v| v == 0));
        let cb = arr(&[2, 2], &[0, 1, 1, 0]);
        let sl = slice_complexities(&cb).unwrap();
        assert_eq!(sl.values, vec![2, 2]);
        assert!(sl.total() >= linear_complexity(&cb));
        let ones = arr(&[2, 2], &[1; 4]);
        assert_eq!(slice_complexities(&ones).unwrap().values, vec![1, 1]);
        assert!(matches!(slice_complexities(&arr(&[4], &[0; 4])), Err(Error::Dimension(_))));
    }

    #[test]
    fn slice_sum_can_fall_below_complexity() {
        // One nonzero slice: the slices sum to 2 while L(s) = 4.
        let s = arr(&[2, 2], &[1, 0, 0, 0]);
        let sl = slice_complexities(&s).unwrap();
        assert_eq!(sl.values, vec![2, 0]);
        assert_eq!(linear_complexity(&s), 4);
    }

    #[test]
    fn extension_field_annihilator() {
        let f4 = FieldSpec::new(2, 2, None).unwrap();
        for seed in 0..20 {
            let s = random_array(&f4, &[3, 2], seed).unwrap();
            let r = compute(&s, MonomialOrder::Grlex);
            assert!(verify(&s, &r).ok(), "{:?}", verify(&s, &r));
            let back = regenerate(&f4, &initial_terms(&s, &r), &r, &[3, 2]).unwrap();
            assert_eq!(back, s);
        }
    }

    fn arb_array() -> impl Strategy<Value = PeriodicArray> {
        (
            prop::collection::vec(1usize..=4, 1..=3),
            any::<u64>(),
            prop::sample::select(vec![2u32, 3, 5]),
        )
            .prop_map(|(periods, seed, p)| {
                random_array(&FieldSpec::prime(p).unwrap(), &periods, seed).unwrap()
            })
    }

    proptest! {
        #[test]
        fn compute_is_consistent(s in arb_array()) {
            let r = compute(&s, MonomialOrder::Grlex);
            prop_assert!(verify(&s, &r).ok(), "{:?}", verify(&s, &r));
            prop_assert_eq!(r.complexity, r.delta.len());
            let back = regenerate(s.field(), &initial_terms(&s, &r), &r, s.periods()).unwrap();
            prop_assert_eq!(back, s.clone());
            let lex = compute(&s, MonomialOrder::Lex);
            prop_assert!(verify(&s, &lex).ok());
            prop_assert_eq!(lex.complexity, r.complexity);
            if s.dim() == 1 {
                prop_assert_eq!(berlekamp_massey(&s).unwrap(), r.complexity);
            }
        }
    }
}
