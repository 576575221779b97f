//! Exact arithmetic in `F_q`, `q = p^e`, and dense linear algebra over it.
//!
//! Elements are canonical residue vectors `c_0 + c_1 x + ... + c_{e-1} x^{e-1}`
//! modulo a monic irreducible polynomial of degree `e` over `F_p`. For prime
//! fields the vector has a single entry and every operation takes a short
//! path through plain modular arithmetic.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: usize = 16;
/// Exclusive upper bound on the characteristic.
pub const MAX_CHARACTERISTIC: u32 = 1 << 16;

/// An element of some `F_q`. Which field it belongs to is tracked by the
/// caller; mixing elements of different fields is a logic error.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coeffs: [u16; MAX_DEGREE],
    len: u8,
}

impl FieldElement {
    fn with_len(len: usize) -> Self {
        FieldElement {
            coeffs: [0; MAX_DEGREE],
            len: len as u8,
        }
    }

    /// Ascending-degree residues, one per power of the generator.
    pub fn coeffs(&self) -> &[u16] {
        &self.coeffs[..self.len as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().iter().all(|&c| c == 0)
    }
}

/// Canonical order: compare as base-`p` integers `sum c_i p^i`, i.e. from the
/// highest coefficient down.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            self.coeffs()
                .iter()
                .rev()
                .cmp(other.coeffs().iter().rev())
        })
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            write!(f, "[")?;
            for (i, c) in self.coeffs().iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, "]")
        }
    }
}

/// The field `F_{p^e}` together with its defining modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    e: usize,
    /// Monic, ascending degree, length `e + 1`. Empty for prime fields.
    modulus: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// Builds `F_{p^e}`. Without an explicit modulus the lexicographically
    /// smallest monic irreducible of degree `e` (ascending coefficient vector)
    /// is used.
    pub fn new(p: u32, e: usize, modulus: Option<Vec<u32>>) -> Result<Self> {
        if p >= MAX_CHARACTERISTIC || !is_prime(p as u64) {
            return Err(Error::Field(format!(
                "characteristic {p} is not a prime below {MAX_CHARACTERISTIC}"
            )));
        }
        if e == 0 || e > MAX_DEGREE {
            return Err(Error::Field(format!(
                "extension degree {e} outside 1..={MAX_DEGREE}"
            )));
        }
        if e == 1 {
            // A degree-one modulus x - a describes F_p itself; accept only
            // the trivial x.
            if let Some(m) = modulus {
                if !(m.is_empty() || m == [0, 1]) {
                    return Err(Error::Field(
                        "prime fields take no modulus (or the modulus x)".into(),
                    ));
                }
            }
            return Ok(FieldSpec {
                p,
                e,
                modulus: Vec::new(),
            });
        }
        let modulus = match modulus {
            Some(m) => {
                if m.len() != e + 1 || m[e] != 1 {
                    return Err(Error::Field(format!(
                        "modulus must be monic of degree {e} (got {m:?})"
                    )));
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(Error::Field(format!(
                        "modulus coefficients must lie in 0..{p}"
                    )));
                }
                if !is_irreducible(&m, p) {
                    return Err(Error::Field(format!("modulus {m:?} is reducible over F_{p}")));
                }
                m
            }
            None => smallest_irreducible(p, e),
        };
        Ok(FieldSpec { p, e, modulus })
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.e
    }

    pub fn modulus(&self) -> Option<&[u32]> {
        if self.e > 1 {
            Some(&self.modulus)
        } else {
            None
        }
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.p).pow(self.e as u32)
    }

    /// `q` when it fits in 64 bits.
    pub fn order_u64(&self) -> Option<u64> {
        (self.p as u64).checked_pow(self.e as u32)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::with_len(self.e)
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: u64) -> FieldElement {
        let mut out = self.zero();
        out.coeffs[0] = (v % self.p as u64) as u16;
        out
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.e {
            return Err(Error::Field(format!(
                "expected {} coefficients, got {}",
                self.e,
                coeffs.len()
            )));
        }
        let mut out = self.zero();
        for (slot, &c) in out.coeffs.iter_mut().zip(coeffs) {
            if c >= self.p {
                return Err(Error::Field(format!("residue {c} out of range 0..{}", self.p)));
            }
            *slot = c as u16;
        }
        Ok(out)
    }

    /// Element whose base-`p` digits (least significant first) are the
    /// coefficients. Inverse of [`FieldSpec::index_of`].
    pub fn element_from_index(&self, mut idx: u64) -> FieldElement {
        let mut out = self.zero();
        for slot in out.coeffs[..self.e].iter_mut() {
            *slot = (idx % self.p as u64) as u16;
            idx /= self.p as u64;
        }
        out
    }

    pub fn index_of(&self, a: &FieldElement) -> u64 {
        a.coeffs()
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.p as u64 + c as u64)
    }

    /// All elements in canonical ascending order. Requires `q` to fit in 64 bits.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let q = self.order_u64().expect("field too large to enumerate");
        (0..q).map(move |i| self.element_from_index(i))
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p;
        let mut out = self.zero();
        for i in 0..self.e {
            out.coeffs[i] = ((a.coeffs[i] as u32 + b.coeffs[i] as u32) % p) as u16;
        }
        out
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let p = self.p;
        let mut out = self.zero();
        for i in 0..self.e {
            out.coeffs[i] = ((p - a.coeffs[i] as u32) % p) as u16;
        }
        out
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p;
        let mut out = self.zero();
        for i in 0..self.e {
            out.coeffs[i] = ((a.coeffs[i] as u32 + p - b.coeffs[i] as u32) % p) as u16;
        }
        out
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p as u64;
        if self.e == 1 {
            let mut out = self.zero();
            out.coeffs[0] = ((a.coeffs[0] as u64 * b.coeffs[0] as u64) % p) as u16;
            return out;
        }
        let e = self.e;
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..e {
            let ai = a.coeffs[i] as u64;
            if ai == 0 {
                continue;
            }
            for j in 0..e {
                prod[i + j] = (prod[i + j] + ai * b.coeffs[j] as u64) % p;
            }
        }
        for d in (e..2 * e - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            // x^d = x^{d-e} * x^e and x^e = -(m_0 + ... + m_{e-1} x^{e-1}).
            for i in 0..e {
                let m = self.modulus[i] as u64;
                prod[d - e + i] = (prod[d - e + i] + (p - c) * m) % p;
            }
            prod[d] = 0;
        }
        let mut out = self.zero();
        for i in 0..e {
            out.coeffs[i] = prod[i] as u16;
        }
        out
    }

    /// `acc + a * b`, the inner step of every elimination loop.
    pub fn mul_add(&self, acc: &FieldElement, a: &FieldElement, b: &FieldElement) -> FieldElement {
        if self.e == 1 {
            let p = self.p as u64;
            let mut out = self.zero();
            out.coeffs[0] =
                ((acc.coeffs[0] as u64 + a.coeffs[0] as u64 * b.coeffs[0] as u64) % p) as u16;
            return out;
        }
        self.add(acc, &self.mul(a, b))
    }

    pub fn pow(&self, a: &FieldElement, mut n: u64) -> FieldElement {
        let mut base = *a;
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.e == 1 {
            return Ok(self.from_int(inv_mod(a.coeffs[0] as u32, self.p) as u64));
        }
        // Extended Euclid on (a(x), modulus(x)) over F_p.
        let p = self.p;
        let a_poly: Vec<u32> = a.coeffs().iter().map(|&c| c as u32).collect();
        let (g, s) = poly_ext_gcd(&a_poly, &self.modulus, p);
        debug_assert_eq!(g.len(), 1, "modulus must be irreducible");
        let scale = inv_mod(g[0], p);
        let mut out = self.zero();
        for (i, c) in s.iter().enumerate() {
            out.coeffs[i] = ((*c as u64 * scale as u64) % p as u64) as u16;
        }
        Ok(out)
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }
}

/// Wire form `{"p": .., "e": .., "modulus": [..]}`; the modulus is present
/// exactly when `e > 1`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldDescriptor {
    p: u32,
    e: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    modulus: Option<Vec<u32>>,
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FieldDescriptor {
            p: self.p,
            e: self.e,
            modulus: self.modulus().map(<[u32]>::to_vec),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let d = FieldDescriptor::deserialize(deserializer)?;
        if d.e > 1 && d.modulus.is_none() {
            return Err(D::Error::custom("field: modulus is required when e > 1"));
        }
        if d.e == 1 && d.modulus.is_some() {
            return Err(D::Error::custom("field: modulus must be absent when e = 1"));
        }
        FieldSpec::new(d.p, d.e, d.modulus).map_err(|e| D::Error::custom(format!("field: {e}")))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{} mod {:?}", self.p, self.e, self.modulus)
        }
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(p as i64) as u32
}

// Polynomials over F_p as ascending coefficient vectors, trimmed so the
// last entry is nonzero (the zero polynomial is empty).

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

fn poly_divrem(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead_inv = inv_mod(*b.last().unwrap(), p) as u64;
    let mut quot = vec![0u32; rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = (*rem.last().unwrap() as u64 * lead_inv % p as u64) as u32;
        quot[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            let sub = (c as u64 * bi as u64 % p as u64) as u32;
            rem[shift + i] = (rem[shift + i] + p - sub) % p;
        }
        rem = trim(rem);
    }
    (trim(quot), rem)
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    poly_divrem(a, b, p).1
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Returns `(g, s)` with `s * a ≡ g (mod m)` and `g = gcd(a, m)`.
fn poly_ext_gcd(a: &[u32], m: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let (mut r0, mut r1) = (trim(m.to_vec()), poly_rem(a, m, p));
    let (mut s0, mut s1): (Vec<u32>, Vec<u32>) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1, p);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1, p), p);
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s2);
    }
    (r0, s0)
}

fn poly_powmod(base: &[u32], mut n: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut b = poly_rem(base, m, p);
    while n > 0 {
        if n & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &b, p), m, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), m, p);
        n >>= 1;
    }
    acc
}

/// Ben-Or test: a monic `f` of degree `e` is irreducible iff
/// `gcd(x^{p^i} - x, f) = 1` for every `1 <= i <= e/2`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let f = trim(f.to_vec());
    let e = f.len().saturating_sub(1);
    if e == 0 {
        return false;
    }
    let x = vec![0u32, 1];
    let mut h = poly_rem(&x, &f, p);
    for _ in 1..=e / 2 {
        h = poly_powmod(&h, p as u64, &f, p);
        let g = poly_gcd(&poly_sub(&h, &x, p), &f, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// First monic irreducible of degree `e` when the coefficient vectors
/// `(c_0, ..., c_{e-1}, 1)` are listed in lexicographic order.
fn smallest_irreducible(p: u32, e: usize) -> Vec<u32> {
    // Every candidate with c_0 = 0 is divisible by x, so start at c_0 = 1.
    let mut cand = vec![0u32; e + 1];
    cand[0] = 1;
    cand[e] = 1;
    loop {
        if is_irreducible(&cand, p) {
            return cand;
        }
        // Advance the odometer with c_{e-1} turning fastest.
        let mut i = e - 1;
        loop {
            cand[i] += 1;
            if cand[i] < p {
                break;
            }
            cand[i] = 0;
            assert!(i > 0, "no irreducible polynomial found");
            i -= 1;
        }
    }
}

/// Dense row-major matrix over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFq {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

impl MatrixFq {
    pub fn new(rows: usize, cols: usize, entries: Vec<FieldElement>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(MatrixFq {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        MatrixFq {
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<FieldElement>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(MatrixFq {
            rows: rows.len(),
            cols,
            entries: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldElement {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.entries.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: MatrixFq,
    pub rank: usize,
    pub pivot_columns: Vec<usize>,
}

/// Gauss-Jordan elimination. Columns are scanned left to right and the first
/// row (top to bottom) with a nonzero entry becomes the pivot row.
pub fn rref(field: &FieldSpec, m: &MatrixFq) -> Rref {
    let mut a = m.clone();
    let cols = a.cols;
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..cols {
        if prow == a.rows {
            break;
        }
        let Some(r) = (prow..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        a.swap_rows(prow, r);
        let inv = field.inv(a.get(prow, col)).expect("pivot is nonzero");
        for c in 0..cols {
            let idx = prow * cols + c;
            a.entries[idx] = field.mul(&a.entries[idx], &inv);
        }
        for r in 0..a.rows {
            if r == prow {
                continue;
            }
            let factor = *a.get(r, col);
            if factor.is_zero() {
                continue;
            }
            let neg = field.neg(&factor);
            for c in 0..cols {
                let pv = a.entries[prow * cols + c];
                let idx = r * cols + c;
                a.entries[idx] = field.mul_add(&a.entries[idx], &neg, &pv);
            }
        }
        pivots.push(col);
        prow += 1;
    }
    Rref {
        matrix: a,
        rank: pivots.len(),
        pivot_columns: pivots,
    }
}

struct EchelonRow {
    vector: Vec<FieldElement>,
    pivot: usize,
    /// Expresses `vector` in terms of the generators pushed so far.
    combination: Vec<FieldElement>,
}

/// Incrementally maintained semi-echelon basis of a span. Every stored row
/// carries the linear combination of generators it came from, so a
/// membership test also yields the coefficients of the dependency.
pub struct SpanBasis<'f> {
    field: &'f FieldSpec,
    dim: usize,
    generators: usize,
    rows: Vec<EchelonRow>,
}

/// Outcome of offering a vector to a [`SpanBasis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// The vector was independent and is now generator number `.0`.
    Added(usize),
    /// The vector equals `sum c_i * generator_i`.
    InSpan(Vec<FieldElement>),
}

impl<'f> SpanBasis<'f> {
    pub fn new(field: &'f FieldSpec, dim: usize) -> Self {
        SpanBasis {
            field,
            dim,
            generators: 0,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows; returns the remainder and the
    /// generator combination that was subtracted.
    fn reduce(&self, v: &[FieldElement]) -> (Vec<FieldElement>, Vec<FieldElement>) {
        let f = self.field;
        let mut w = v.to_vec();
        let mut acc = vec![f.zero(); self.generators];
        for row in &self.rows {
            let alpha = w[row.pivot];
            if alpha.is_zero() {
                continue;
            }
            let neg = f.neg(&alpha);
            for (x, y) in w[row.pivot..].iter_mut().zip(&row.vector[row.pivot..]) {
                if !y.is_zero() {
                    *x = f.mul_add(x, &neg, y);
                }
            }
            for (x, y) in acc.iter_mut().zip(&row.combination) {
                if !y.is_zero() {
                    *x = f.mul_add(x, &alpha, y);
                }
            }
        }
        (w, acc)
    }

    fn check_len(&self, v: &[FieldElement]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::Dimension(format!(
                "vector of length {} in a span of dimension {}",
                v.len(),
                self.dim
            )));
        }
        Ok(())
    }

    /// Coefficients over the generators if `v` lies in the span.
    pub fn express(&self, v: &[FieldElement]) -> Result<Option<Vec<FieldElement>>> {
        self.check_len(v)?;
        let (w, acc) = self.reduce(v);
        Ok(w.iter().all(FieldElement::is_zero).then_some(acc))
    }

    /// Adds `v` as a generator when it is independent; otherwise leaves the
    /// basis untouched and reports the dependency.
    pub fn insert_or_express(&mut self, v: &[FieldElement]) -> Result<Membership> {
        self.check_len(v)?;
        let (w, acc) = self.reduce(v);
        match w.iter().position(|x| !x.is_zero()) {
            None => Ok(Membership::InSpan(acc)),
            Some(pivot) => {
                let idx = self.push_row(w, acc, pivot);
                Ok(Membership::Added(idx))
            }
        }
    }

    /// Registers `v` as the next generator whether or not it is independent.
    /// Returns true if it enlarged the span.
    pub fn push_generator(&mut self, v: &[FieldElement]) -> Result<bool> {
        self.check_len(v)?;
        let (w, acc) = self.reduce(v);
        match w.iter().position(|x| !x.is_zero()) {
            None => {
                self.generators += 1;
                Ok(false)
            }
            Some(pivot) => {
                self.push_row(w, acc, pivot);
                Ok(true)
            }
        }
    }

    fn push_row(&mut self, w: Vec<FieldElement>, acc: Vec<FieldElement>, pivot: usize) -> usize {
        let f = self.field;
        let idx = self.generators;
        self.generators += 1;
        // w = v_new - sum acc_g v_g
        let mut combination: Vec<FieldElement> = acc.iter().map(|a| f.neg(a)).collect();
        combination.resize(self.generators, f.zero());
        combination[idx] = f.one();
        let inv = f.inv(&w[pivot]).expect("pivot is nonzero");
        let vector = w.iter().map(|x| f.mul(x, &inv)).collect();
        let combination = combination.iter().map(|x| f.mul(x, &inv)).collect();
        self.rows.push(EchelonRow {
            vector,
            pivot,
            combination,
        });
        // Older rows stay valid: a missing trailing coefficient reads as zero.
        idx
    }
}

/// Coefficients `c` with `sum c_i basis_i = v`, if any. The basis may be
/// linearly dependent; later dependent vectors then receive coefficient zero.
pub fn solve_in_span(
    field: &FieldSpec,
    basis: &[Vec<FieldElement>],
    v: &[FieldElement],
) -> Result<Option<Vec<FieldElement>>> {
    let mut span = SpanBasis::new(field, v.len());
    for b in basis {
        span.push_generator(b)?;
    }
    Ok(span.express(v)?.map(|mut c| {
        c.resize(basis.len(), field.zero());
        c
    }))
}
