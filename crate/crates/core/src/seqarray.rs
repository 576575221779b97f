//! Multidimensional periodic sequences stored as one fundamental period.
//!
//! Layout: position `m = (m_1, ..., m_n)` of the box `prod [0, T_i)` lives at
//! linear index `m_1 (T_2 ... T_n) + m_2 (T_3 ... T_n) + ... + m_n`, i.e.
//! row-major with the last axis fastest. Every module and the file format use
//! this layout.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::monomial::{ExponentVector, MonomialOrder};
use crate::rng::SplitMix64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicArray {
    field: FieldSpec,
    periods: Vec<usize>,
    data: Vec<FieldElement>,
}

fn check_element(field: &FieldSpec, a: &FieldElement) -> bool {
    a.coeffs().len() == field.degree()
        && a.coeffs().iter().all(|&c| (c as u32) < field.characteristic())
}

impl PeriodicArray {
    pub fn new(field: FieldSpec, periods: Vec<usize>, data: Vec<FieldElement>) -> Result<Self> {
        if periods.is_empty() || periods.contains(&0) {
            return Err(Error::Dimension(format!(
                "periods must be a nonempty list of positive integers, got {periods:?}"
            )));
        }
        let volume = periods
            .iter()
            .try_fold(1usize, |acc, &t| acc.checked_mul(t))
            .ok_or_else(|| Error::Dimension("period volume overflows".into()))?;
        if data.len() != volume {
            return Err(Error::Dimension(format!(
                "data length {} does not match period volume {volume}",
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|a| !check_element(&field, a)) {
            return Err(Error::Field(format!("entry {i} is not an element of {field}")));
        }
        Ok(PeriodicArray {
            field,
            periods,
            data,
        })
    }

    pub fn zeros(field: FieldSpec, periods: Vec<usize>) -> Result<Self> {
        let volume = periods.iter().product();
        let zero = field.zero();
        Self::new(field, periods, vec![zero; volume])
    }

    /// Builds an array from small integers in the prime subfield.
    pub fn from_ints(field: FieldSpec, periods: Vec<usize>, data: &[u64]) -> Result<Self> {
        let data = data.iter().map(|&x| field.from_int(x)).collect();
        Self::new(field, periods, data)
    }

    /// Array number `idx` of the whole space of `q^N` arrays: the base-`q`
    /// digits of `idx`, least significant first, are the element indices of
    /// positions `0, 1, ..., N-1`.
    pub fn from_space_index(field: &FieldSpec, periods: &[usize], mut idx: u64) -> Result<Self> {
        let q = field
            .order_u64()
            .ok_or_else(|| Error::Range("field too large to enumerate".into()))?;
        let volume: usize = periods.iter().product();
        let mut data = Vec::with_capacity(volume);
        for _ in 0..volume {
            data.push(field.element_from_index(idx % q));
            idx /= q;
        }
        Self::new(field.clone(), periods.to_vec(), data)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn periods(&self) -> &[usize] {
        &self.periods
    }

    pub fn dim(&self) -> usize {
        self.periods.len()
    }

    /// `T_1 ... T_n`.
    pub fn volume(&self) -> usize {
        self.data.len()
    }

    pub fn data(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElement::is_zero)
    }

    /// Linear index of a point of the fundamental box.
    pub fn linear_index(&self, m: &[usize]) -> usize {
        m.iter()
            .zip(&self.periods)
            .fold(0, |acc, (&x, &t)| acc * t + x)
    }

    /// Inverse of [`PeriodicArray::linear_index`].
    pub fn coords(&self, mut idx: usize) -> Vec<usize> {
        let mut m = vec![0; self.dim()];
        for (slot, &t) in m.iter_mut().zip(&self.periods).rev() {
            *slot = idx % t;
            idx /= t;
        }
        m
    }

    /// `s(m)` for any `m` in `N_0^n`, through the periodic extension.
    pub fn at(&self, m: &ExponentVector) -> Result<FieldElement> {
        if m.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "index {m:?} into a {}-dimensional array",
                self.dim()
            )));
        }
        let idx = m
            .as_slice()
            .iter()
            .zip(&self.periods)
            .fold(0, |acc, (&x, &t)| acc * t + x as usize % t);
        Ok(self.data[idx])
    }

    /// Entry at an already reduced box position.
    pub fn get(&self, idx: usize) -> FieldElement {
        self.data[idx]
    }

    /// The shifted sequence `m -> s(m + j)` over the fundamental box, in
    /// layout order.
    pub fn shift_vector(&self, j: &[u32]) -> Vec<FieldElement> {
        debug_assert_eq!(j.len(), self.dim());
        // Per-axis contribution of (m_i + j_i) mod T_i to the linear index.
        let strides = self.strides();
        let axis_offsets: Vec<Vec<usize>> = self
            .periods
            .iter()
            .zip(j)
            .zip(&strides)
            .map(|((&t, &ji), &stride)| (0..t).map(|m| (m + ji as usize) % t * stride).collect())
            .collect();
        let n = self.dim();
        let mut out = Vec::with_capacity(self.volume());
        let mut m = vec![0usize; n];
        let mut offset: usize = axis_offsets.iter().map(|o| o[0]).sum();
        loop {
            out.push(self.data[offset]);
            // odometer, last axis fastest
            let mut axis = n;
            loop {
                if axis == 0 {
                    return out;
                }
                axis -= 1;
                offset -= axis_offsets[axis][m[axis]];
                m[axis] += 1;
                if m[axis] < self.periods[axis] {
                    offset += axis_offsets[axis][m[axis]];
                    break;
                }
                m[axis] = 0;
                offset += axis_offsets[axis][0];
            }
        }
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.dim()];
        for i in (0..self.dim().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.periods[i + 1];
        }
        strides
    }

    /// Replaces the entry at a box position.
    pub fn with_entry(&self, idx: usize, value: FieldElement) -> Self {
        let mut out = self.clone();
        out.data[idx] = value;
        out
    }

    pub(crate) fn data_mut(&mut self) -> &mut [FieldElement] {
        &mut self.data
    }
}

/// Sparse polynomial `sum a_j X^j` with nonzero coefficients only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialFq {
    n: usize,
    terms: BTreeMap<ExponentVector, FieldElement>,
}

impl PolynomialFq {
    pub fn zero(n: usize) -> Self {
        PolynomialFq {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(exp: ExponentVector, coeff: FieldElement) -> Self {
        let mut p = PolynomialFq::zero(exp.dim());
        if !coeff.is_zero() {
            p.terms.insert(exp, coeff);
        }
        p
    }

    pub fn from_terms(
        field: &FieldSpec,
        n: usize,
        terms: impl IntoIterator<Item = (ExponentVector, FieldElement)>,
    ) -> Result<Self> {
        let mut p = PolynomialFq::zero(n);
        for (exp, c) in terms {
            if exp.dim() != n {
                return Err(Error::Dimension(format!("term {exp:?} in {n} variables")));
            }
            p.add_term(field, exp, c);
        }
        Ok(p)
    }

    /// `X_i^{t} - 1`.
    pub fn binomial_relation(field: &FieldSpec, n: usize, axis: usize, t: u32) -> Self {
        let mut exp = vec![0; n];
        exp[axis] = t;
        let mut p = PolynomialFq::zero(n);
        p.add_term(field, ExponentVector::new(exp), field.one());
        p.add_term(field, ExponentVector::zero(n), field.neg(&field.one()));
        p
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<ExponentVector, FieldElement> {
        &self.terms
    }

    pub fn coeff(&self, exp: &ExponentVector) -> Option<&FieldElement> {
        self.terms.get(exp)
    }

    pub fn add_term(&mut self, field: &FieldSpec, exp: ExponentVector, c: FieldElement) {
        let sum = match self.terms.get(&exp) {
            Some(old) => field.add(old, &c),
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&exp);
        } else {
            self.terms.insert(exp, sum);
        }
    }

    pub fn set_coeff(&mut self, exp: ExponentVector, c: FieldElement) {
        if c.is_zero() {
            self.terms.remove(&exp);
        } else {
            self.terms.insert(exp, c);
        }
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&ExponentVector, &FieldElement)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn leading_monomial(&self, order: MonomialOrder) -> Option<&ExponentVector> {
        self.leading_term(order).map(|(e, _)| e)
    }

    /// `self - c X^shift g`.
    pub fn sub_scaled_shifted(
        &mut self,
        field: &FieldSpec,
        c: &FieldElement,
        shift: &ExponentVector,
        g: &PolynomialFq,
    ) {
        let neg = field.neg(c);
        for (exp, gc) in &g.terms {
            self.add_term(field, exp.add(shift), field.mul(&neg, gc));
        }
    }

    /// Terms listed from the largest monomial down.
    pub fn sorted_terms(&self, order: MonomialOrder) -> Vec<(&ExponentVector, &FieldElement)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp(b.0, a.0));
        v
    }

    /// Human-readable form such as `X1^2*X2 + 4*X3 + 1`.
    pub fn render(&self, field: &FieldSpec, order: MonomialOrder) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let one = field.one();
        let mut out = String::new();
        for (i, (exp, c)) in self.sorted_terms(order).into_iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            let mono: Vec<String> = exp
                .as_slice()
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(v, &x)| {
                    if x == 1 {
                        format!("X{}", v + 1)
                    } else {
                        format!("X{}^{x}", v + 1)
                    }
                })
                .collect();
            if mono.is_empty() {
                let _ = write!(out, "{c}");
            } else {
                if *c != one {
                    let _ = write!(out, "{c}*");
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

/// `Ps` over the fundamental box, `Ps(m) = sum_j a_j s(m + j)`.
pub fn apply_polynomial(poly: &PolynomialFq, s: &PeriodicArray) -> Result<PeriodicArray> {
    if poly.nvars() != s.dim() {
        return Err(Error::Dimension(format!(
            "polynomial in {} variables applied to a {}-dimensional array",
            poly.nvars(),
            s.dim()
        )));
    }
    let f = s.field();
    if let Some((exp, _)) = poly.terms().iter().find(|(_, c)| !check_element(f, c)) {
        return Err(Error::Field(format!(
            "coefficient of {exp:?} is not an element of {f}"
        )));
    }
    let mut acc = vec![f.zero(); s.volume()];
    for (exp, c) in poly.terms() {
        let shifted = s.shift_vector(exp.as_slice());
        for (a, x) in acc.iter_mut().zip(&shifted) {
            *a = f.mul_add(a, c, x);
        }
    }
    PeriodicArray::new(f.clone(), s.periods().to_vec(), acc)
}

/// Number of box positions where `s` and `t` differ.
pub fn hamming_distance(s: &PeriodicArray, t: &PeriodicArray) -> Result<usize> {
    if s.periods() != t.periods() {
        return Err(Error::Dimension(format!(
            "periods {:?} and {:?} differ",
            s.periods(),
            t.periods()
        )));
    }
    if s.field() != t.field() {
        return Err(Error::Field("arrays over different fields".into()));
    }
    Ok(s.data.iter().zip(&t.data).filter(|(a, b)| a != b).count())
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// One-dimensional sequence `t(m) = s(m mod T_1, ..., m mod T_n)` of period
/// `T_1 ... T_n`; a bijection of fundamental domains when the periods are
/// pairwise coprime.
pub fn crt_fold(s: &PeriodicArray) -> Result<PeriodicArray> {
    let t = s.periods();
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            if gcd(t[i], t[j]) != 1 {
                return Err(Error::Coprimality(t.to_vec()));
            }
        }
    }
    let volume = s.volume();
    let data = (0..volume)
        .map(|m| {
            let idx = t.iter().fold(0, |acc, &ti| acc * ti + m % ti);
            s.data[idx]
        })
        .collect();
    PeriodicArray::new(s.field().clone(), vec![volume], data)
}

/// Uniform random element: each residue drawn independently by rejection.
pub fn random_element(field: &FieldSpec, rng: &mut SplitMix64) -> FieldElement {
    let mut coeffs = [0u32; crate::gf::MAX_DEGREE];
    for c in coeffs.iter_mut().take(field.degree()) {
        *c = rng.below(field.characteristic() as u64) as u32;
    }
    field
        .from_coeffs(&coeffs[..field.degree()])
        .expect("residues are in range")
}

/// Array with independent uniform entries drawn from `rng` in layout order.
pub fn random_array_from(
    field: &FieldSpec,
    periods: &[usize],
    rng: &mut SplitMix64,
) -> Result<PeriodicArray> {
    let volume: usize = periods.iter().product();
    let data = (0..volume).map(|_| random_element(field, rng)).collect();
    PeriodicArray::new(field.clone(), periods.to_vec(), data)
}

/// Deterministic uniform array for a given seed.
pub fn random_array(field: &FieldSpec, periods: &[usize], seed: u64) -> Result<PeriodicArray> {
    random_array_from(field, periods, &mut SplitMix64::new(seed))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrayDoc {
    field: FieldSpec,
    periods: Vec<usize>,
    data: Vec<Value>,
}

/// Canonical serialization: keys in the order `field`, `periods`, `data`, no
/// whitespace.
pub fn to_json_string(s: &PeriodicArray) -> String {
    let f = s.field();
    let data = s
        .data
        .iter()
        .map(|a| {
            if f.degree() == 1 {
                Value::from(a.coeffs()[0])
            } else {
                Value::from(a.coeffs().to_vec())
            }
        })
        .collect();
    let doc = ArrayDoc {
        field: f.clone(),
        periods: s.periods.clone(),
        data,
    };
    serde_json::to_string(&doc).expect("array document serializes")
}

fn parse_entry(field: &FieldSpec, v: &Value, pos: usize) -> Result<FieldElement> {
    let p = field.characteristic() as u64;
    let residue = |x: &Value| -> Result<u32> {
        match x.as_u64() {
            Some(r) if r < p => Ok(r as u32),
            Some(r) => Err(Error::Format(format!(
                "data[{pos}]: entry {r} out of range 0..{p}"
            ))),
            None => Err(Error::Format(format!(
                "data[{pos}]: expected a non-negative integer, found {x}"
            ))),
        }
    };
    if field.degree() == 1 {
        return field.from_coeffs(&[residue(v)?]);
    }
    let Some(items) = v.as_array() else {
        return Err(Error::Format(format!(
            "data[{pos}]: expected a vector of {} residues, found {v}",
            field.degree()
        )));
    };
    if items.len() != field.degree() {
        return Err(Error::Format(format!(
            "data[{pos}]: expected {} residues, found {}",
            field.degree(),
            items.len()
        )));
    }
    let coeffs = items.iter().map(residue).collect::<Result<Vec<_>>>()?;
    field.from_coeffs(&coeffs)
}

pub fn from_json_str(text: &str) -> Result<PeriodicArray> {
    let doc: ArrayDoc = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let field = doc.field;
    if doc.periods.is_empty() || doc.periods.contains(&0) {
        return Err(Error::Format(format!(
            "periods must be positive integers, found {:?}",
            doc.periods
        )));
    }
    let volume = doc
        .periods
        .iter()
        .try_fold(1usize, |acc, &t| acc.checked_mul(t))
        .ok_or_else(|| Error::Format("period volume overflows".into()))?;
    if doc.data.len() != volume {
        return Err(Error::Format(format!(
            "data length {} does not match periods {:?} (expected {volume})",
            doc.data.len(),
            doc.periods
        )));
    }
    let data = doc
        .data
        .iter()
        .enumerate()
        .map(|(i, v)| parse_entry(&field, v, i))
        .collect::<Result<Vec<_>>>()?;
    PeriodicArray::new(field, doc.periods, data)
}

pub fn read_array(path: impl AsRef<Path>) -> Result<PeriodicArray> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    from_json_str(&text).map_err(|e| match e {
        Error::Format(msg) => Error::Format(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_array(s: &PeriodicArray, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_json_string(s))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2() -> FieldSpec {
        FieldSpec::prime(2).unwrap()
    }

    fn checkerboard() -> PeriodicArray {
        PeriodicArray::from_ints(f2(), vec![2, 2], &[0, 1, 1, 0]).unwrap()
    }

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    #[test]
    fn at_examples() {
        let s = checkerboard();
        assert_eq!(s.at(&ev(&[3, 1])).unwrap(), f2().zero());
        assert_eq!(s.at(&ev(&[0, 1])).unwrap(), f2().one());
        let f3 = FieldSpec::prime(3).unwrap();
        let t = PeriodicArray::from_ints(f3, vec![2, 3], &[2, 1, 0, 1, 1, 1]).unwrap();
        assert_eq!(t.at(&ev(&[2, 3])).unwrap(), t.get(0));
        assert!(matches!(t.at(&ev(&[1])), Err(Error::Dimension(_))));
        assert_eq!(t.coords(4), vec![1, 1]);
        assert_eq!(t.linear_index(&[1, 1]), 4);
    }

    #[test]
    fn apply_polynomial_examples() {
        let f = f2();
        let s = checkerboard();
        let one = PolynomialFq::monomial(ExponentVector::zero(2), f.one());
        assert_eq!(apply_polynomial(&one, &s).unwrap(), s);
        let period = PolynomialFq::binomial_relation(&f, 2, 0, 2);
        assert!(apply_polynomial(&period, &s).unwrap().is_zero());
        let p = PolynomialFq::from_terms(&f, 2, [(ev(&[1, 0]), f.one()), (ev(&[0, 1]), f.one())])
            .unwrap();
        assert!(apply_polynomial(&p, &s).unwrap().is_zero());
        let f4 = FieldSpec::new(2, 2, None).unwrap();
        let bad = PolynomialFq::monomial(ExponentVector::zero(2), f4.one());
        assert!(matches!(apply_polynomial(&bad, &s), Err(Error::Field(_))));
        let bad = PolynomialFq::monomial(ExponentVector::zero(3), f.one());
        assert!(matches!(apply_polynomial(&bad, &s), Err(Error::Dimension(_))));
    }

    #[test]
    fn hamming_examples() {
        let f = f2();
        let s = checkerboard();
        assert_eq!(hamming_distance(&s, &s).unwrap(), 0);
        let a = PeriodicArray::from_ints(f.clone(), vec![2, 2], &[1, 0, 0, 0]).unwrap();
        let z = PeriodicArray::zeros(f.clone(), vec![2, 2]).unwrap();
        assert_eq!(hamming_distance(&a, &z).unwrap(), 1);
        let w = PeriodicArray::zeros(f, vec![4]).unwrap();
        assert!(matches!(hamming_distance(&a, &w), Err(Error::Dimension(_))));
    }

    #[test]
    fn crt_fold_examples() {
        let f = f2();
        let s = PeriodicArray::from_ints(f.clone(), vec![2, 3], &[0, 0, 0, 1, 1, 1]).unwrap();
        let t = crt_fold(&s).unwrap();
        assert_eq!(t.periods(), &[6]);
        // t(m) = s(m mod 2, m mod 3) = m mod 2
        let expected: Vec<u64> = (0..6).map(|m| m % 2).collect();
        assert_eq!(t, PeriodicArray::from_ints(f.clone(), vec![6], &expected).unwrap());
        let one_d = PeriodicArray::from_ints(f.clone(), vec![3], &[1, 0, 1]).unwrap();
        assert_eq!(crt_fold(&one_d).unwrap(), one_d);
        assert!(matches!(crt_fold(&checkerboard()), Err(Error::Coprimality(_))));
    }

    #[test]
    fn random_array_is_deterministic_and_seed_sensitive() {
        let f = FieldSpec::prime(3).unwrap();
        let a = random_array(&f, &[4, 4], 7).unwrap();
        assert_eq!(a, random_array(&f, &[4, 4], 7).unwrap());
        let distinct = (0..200u64)
            .filter(|&s| random_array(&f, &[4, 4], s).unwrap() != a || s == 7)
            .count();
        assert_eq!(distinct, 200);
    }

    #[test]
    fn random_bits_are_balanced() {
        // 10^4 arrays of period 64 over F_2: each position's count of ones is
        // Binomial(10^4, 1/2), so it must sit within 5 sigma = 250 of 5000.
        let f = f2();
        let draws = 10_000u64;
        let mut ones = vec![0u64; 64];
        for seed in 0..draws {
            let a = random_array(&f, &[64], seed).unwrap();
            for (c, x) in ones.iter_mut().zip(a.data()) {
                *c += x.coeffs()[0] as u64;
            }
        }
        let sigma = (draws as f64 * 0.25).sqrt();
        for c in ones {
            assert!((c as f64 - draws as f64 / 2.0).abs() <= 5.0 * sigma, "{c}");
        }
    }

    #[test]
    fn file_roundtrip_and_errors() {
        let s = checkerboard();
        let text = to_json_string(&s);
        assert_eq!(
            text,
            r#"{"field":{"p":2,"e":1},"periods":[2,2],"data":[0,1,1,0]}"#
        );
        assert_eq!(from_json_str(&text).unwrap(), s);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.json");
        write_array(&s, &path).unwrap();
        assert_eq!(read_array(&path).unwrap(), s);
        assert_eq!(std::fs::read_to_string(&path).unwrap(), text);

        let short = r#"{"field":{"p":2,"e":1},"periods":[2,2],"data":[0,1,1]}"#;
        match from_json_str(short) {
            Err(Error::Format(m)) => assert!(m.contains("data length 3"), "{m}"),
            other => panic!("{other:?}"),
        }
        let big = r#"{"field":{"p":2,"e":1},"periods":[2,2],"data":[0,1,2,0]}"#;
        match from_json_str(big) {
            Err(Error::Format(m)) => assert!(m.contains("data[2]"), "{m}"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(from_json_str("{\"field\":"), Err(Error::Format(_))));
        let no_modulus = r#"{"field":{"p":2,"e":2},"periods":[1],"data":[[0,1]]}"#;
        assert!(matches!(from_json_str(no_modulus), Err(Error::Format(_))));
    }

    #[test]
    fn extension_field_file_format() {
        let f4 = FieldSpec::new(2, 2, None).unwrap();
        let s = random_array(&f4, &[3], 1).unwrap();
        let text = to_json_string(&s);
        assert!(text.starts_with(r#"{"field":{"p":2,"e":2,"modulus":[1,1,1]},"periods":[3],"data":[["#));
        assert_eq!(from_json_str(&text).unwrap(), s);
    }

    #[test]
    fn render_polynomials() {
        let f = f2();
        let p = PolynomialFq::from_terms(&f, 2, [(ev(&[1, 0]), f.one()), (ev(&[0, 1]), f.one())])
            .unwrap();
        assert_eq!(p.render(&f, MonomialOrder::Grlex), "X1 + X2");
        let q = PolynomialFq::binomial_relation(&f, 2, 1, 2);
        assert_eq!(q.render(&f, MonomialOrder::Grlex), "X2^2 + 1");
        let f5 = FieldSpec::prime(5).unwrap();
        let r = PolynomialFq::binomial_relation(&f5, 1, 0, 3);
        assert_eq!(r.render(&f5, MonomialOrder::Grlex), "X1^3 + 4");
    }

    fn arb_array(max_t: usize) -> impl Strategy<Value = PeriodicArray> {
        (prop::collection::vec(1..=max_t, 1..=3), any::<u64>(), prop::sample::select(vec![2u32, 3]))
            .prop_map(|(periods, seed, p)| {
                random_array(&FieldSpec::prime(p).unwrap(), &periods, seed).unwrap()
            })
    }

    proptest! {
        #[test]
        fn at_is_periodic(s in arb_array(4), m in prop::collection::vec(0u32..10, 3), axis in 0usize..3) {
            let n = s.dim();
            let m = ExponentVector::new(m[..n].to_vec());
            let axis = axis % n;
            let mut shifted = m.as_slice().to_vec();
            shifted[axis] += s.periods()[axis] as u32;
            prop_assert_eq!(s.at(&m).unwrap(), s.at(&ExponentVector::new(shifted)).unwrap());
        }

        #[test]
        fn action_is_linear_and_composes(s in arb_array(4), a in prop::collection::vec(0u32..5, 3), b in prop::collection::vec(0u32..5, 3)) {
            let f = s.field().clone();
            let n = s.dim();
            let a = ExponentVector::new(a[..n].to_vec());
            let b = ExponentVector::new(b[..n].to_vec());
            let pa = PolynomialFq::monomial(a.clone(), f.one());
            let pb = PolynomialFq::monomial(b.clone(), f.from_int(2));
            let mut sum = pa.clone();
            sum.add_term(&f, b.clone(), f.from_int(2));
            let lhs = apply_polynomial(&sum, &s).unwrap();
            let ra = apply_polynomial(&pa, &s).unwrap();
            let rb = apply_polynomial(&pb, &s).unwrap();
            let rhs: Vec<_> = ra.data().iter().zip(rb.data()).map(|(x, y)| f.add(x, y)).collect();
            prop_assert_eq!(lhs.data(), rhs.as_slice());
            // X^a (X^b s) = X^{a+b} s
            let one_b = PolynomialFq::monomial(b.clone(), f.one());
            let nested = apply_polynomial(&pa, &apply_polynomial(&one_b, &s).unwrap()).unwrap();
            let direct = apply_polynomial(&PolynomialFq::monomial(a.add(&b), f.one()), &s).unwrap();
            prop_assert_eq!(nested, direct);
        }

        #[test]
        fn hamming_is_a_metric(seed in any::<u64>()) {
            let f = FieldSpec::prime(3).unwrap();
            let s = random_array(&f, &[3, 2], seed).unwrap();
            let t = random_array(&f, &[3, 2], seed ^ 1).unwrap();
            let u = random_array(&f, &[3, 2], seed ^ 2).unwrap();
            let d = |x, y| hamming_distance(x, y).unwrap();
            prop_assert_eq!(d(&s, &t), d(&t, &s));
            prop_assert!(d(&s, &u) <= d(&s, &t) + d(&t, &u));
            prop_assert!(d(&s, &t) <= 6);
        }

        #[test]
        fn crt_fold_is_invertible(seed in any::<u64>(), shape in prop::sample::select(vec![vec![2usize, 3], vec![3, 5], vec![2, 3, 5], vec![4, 3]])) {
            let f = FieldSpec::prime(3).unwrap();
            let s = random_array(&f, &shape, seed).unwrap();
            let t = crt_fold(&s).unwrap();
            let mut a: Vec<_> = s.data().to_vec();
            let mut b: Vec<_> = t.data().to_vec();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
            for idx in 0..s.volume() {
                let m = s.coords(idx);
                // recover the 1-D position by brute-force search over the
                // simultaneous congruences
                let pos = (0..t.volume()).find(|&x| m.iter().zip(&shape).all(|(&mi, &ti)| x % ti == mi)).unwrap();
                prop_assert_eq!(t.get(pos), s.get(idx));
            }
        }

        #[test]
        fn json_roundtrip(s in arb_array(3)) {
            let text = to_json_string(&s);
            let back = from_json_str(&text).unwrap();
            prop_assert_eq!(to_json_string(&back), text);
            prop_assert_eq!(back, s);
        }
    }
}
