//! Arithmetic in GF(q), q = p^e.
//!
//! Elements are integer codes in `[0, q)`. A code is read base `p`, least
//! significant digit first, as the coefficient vector of a polynomial modulo
//! the field's monic irreducible modulus. For `e = 1` this is plain integer
//! arithmetic mod `p`.
//!
//! Fields with `q <= 256` carry precomputed addition and multiplication
//! tables; larger fields fall back to polynomial arithmetic per operation.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

const TABLE_LIMIT: u32 = 256;

/// A field element, stored as its integer code.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// GF(p^e) with a fixed monic irreducible modulus.
///
/// Cloning is cheap: the description and tables are shared.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Inner>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.inner.p)
            .field("e", &self.inner.e)
            .field("modulus", &self.inner.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.e == other.inner.e
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldSpec {}

/// Deterministic primality test by trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Splits `q` into `(p, e)` with `q = p^e`, or fails if `q` is not a prime power.
pub fn factor_prime_power(q: u64) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p as u32, e))
}

// Polynomials over GF(p) as coefficient vectors, constant term first.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let idx = shift + i;
            r[idx] = (r[idx] + p - (lead * c) % p) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let e = modulus.len() - 1;
    // Trial division by every monic polynomial of degree 1..=e/2.
    for d in 1..=e / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                divisor.push((c % p as u64) as u32);
                c /= p as u64;
            }
            divisor.push(1);
            if poly_rem(modulus, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The lexicographically least monic irreducible polynomial of degree `e`
/// over GF(p), comparing coefficient sequences from the constant term up.
pub fn default_modulus(p: u32, e: u32) -> Result<Vec<u32>> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if e == 0 {
        return Err(Error::InvalidModulus("degree must be at least 1".into()));
    }
    let q = (p as u64)
        .checked_pow(e)
        .filter(|&q| q <= MAX_ORDER as u64)
        .ok_or(Error::FieldTooLarge((p as u64).saturating_pow(e)))?;
    // c0 is the most significant position of the ordering.
    let e = e as usize;
    let mut coeffs = vec![0u32; e];
    for _ in 0..q {
        let mut candidate = coeffs.clone();
        candidate.push(1);
        if is_irreducible(&candidate, p) {
            return Ok(candidate);
        }
        // increment with coeffs[e-1] fastest
        for digit in coeffs.iter_mut().rev() {
            *digit += 1;
            if *digit < p {
                break;
            }
            *digit = 0;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over GF(p)")
}

impl FieldSpec {
    /// GF(p^e) with the default modulus.
    pub fn new(p: u32, e: u32) -> Result<Self> {
        let modulus = default_modulus(p, e)?;
        Self::with_modulus(p, e, modulus)
    }

    /// GF(p^e) with an explicit modulus, given constant term first.
    pub fn with_modulus(p: u32, e: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e == 0 {
            return Err(Error::InvalidModulus("degree must be at least 1".into()));
        }
        let q = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if q > MAX_ORDER as u64 {
            return Err(Error::FieldTooLarge(q));
        }
        if modulus.len() != e as usize + 1 {
            return Err(Error::InvalidModulus(format!(
                "expected {} coefficients, got {}",
                e + 1,
                modulus.len()
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidModulus(format!("coefficients must lie in [0, {p})")));
        }
        if modulus[e as usize] != 1 {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidModulus(format!("{modulus:?} is reducible over GF({p})")));
        }
        let mut inner = Inner { p, e, q: q as u32, modulus, tables: None };
        if inner.q <= TABLE_LIMIT {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(FieldSpec { inner: Arc::new(inner) })
    }

    /// GF(q) for a prime power `q`, default modulus.
    pub fn from_order(q: u64) -> Result<Self> {
        let (p, e) = factor_prime_power(q)?;
        Self::new(p, e)
    }

    /// GF(q) with an explicit modulus.
    pub fn from_order_with_modulus(q: u64, modulus: Vec<u32>) -> Result<Self> {
        let (p, e) = factor_prime_power(q)?;
        Self::with_modulus(p, e, modulus)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.inner.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.inner.e
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.inner.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    /// Checks that `code` names an element of this field.
    pub fn element(&self, code: u32) -> Result<FieldElement> {
        if code < self.inner.q {
            Ok(FieldElement(code))
        } else {
            Err(Error::ElementOutOfRange { code, q: self.inner.q })
        }
    }

    /// All `q` elements in ascending code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.inner.q).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.inner.tables {
            Some(t) => FieldElement(t.add[(a.0 * self.inner.q + b.0) as usize] as u32),
            None => FieldElement(raw_add(&self.inner, a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        match &self.inner.tables {
            Some(t) => FieldElement(t.neg[a.0 as usize] as u32),
            None => FieldElement(raw_neg(&self.inner, a.0)),
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.inner.tables {
            Some(t) => FieldElement(t.mul[(a.0 * self.inner.q + b.0) as usize] as u32),
            None => FieldElement(raw_mul(&self.inner, a.0, b.0)),
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(match &self.inner.tables {
            Some(t) => FieldElement(t.inv[a.0 as usize] as u32),
            None => FieldElement(raw_inv(&self.inner, a.0)),
        })
    }

    pub fn pow(&self, a: FieldElement, mut exp: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

fn digits(inner: &Inner, mut code: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(inner.e as usize);
    for _ in 0..inner.e {
        out.push(code % inner.p);
        code /= inner.p;
    }
    out
}

fn from_digits(inner: &Inner, digits: &[u32]) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * inner.p + d)
}

fn raw_add(inner: &Inner, a: u32, b: u32) -> u32 {
    if inner.e == 1 {
        return (a + b) % inner.p;
    }
    let (da, db) = (digits(inner, a), digits(inner, b));
    let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % inner.p).collect();
    from_digits(inner, &sum)
}

fn raw_neg(inner: &Inner, a: u32) -> u32 {
    if inner.e == 1 {
        return (inner.p - a) % inner.p;
    }
    let d: Vec<u32> = digits(inner, a).iter().map(|x| (inner.p - x) % inner.p).collect();
    from_digits(inner, &d)
}

fn raw_mul(inner: &Inner, a: u32, b: u32) -> u32 {
    let p = inner.p as u64;
    if inner.e == 1 {
        return ((a as u64 * b as u64) % p) as u32;
    }
    let (da, db) = (digits(inner, a), digits(inner, b));
    let mut prod = vec![0u32; da.len() + db.len() - 1];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p) as u32;
        }
    }
    let mut r = poly_rem(&prod, &inner.modulus, inner.p);
    r.resize(inner.e as usize, 0);
    from_digits(inner, &r)
}

fn raw_inv(inner: &Inner, a: u32) -> u32 {
    // a^(q-2)
    let mut exp = inner.q - 2;
    let mut base = a;
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = raw_mul(inner, acc, base);
        }
        base = raw_mul(inner, base, base);
        exp >>= 1;
    }
    acc
}

fn build_tables(inner: &Inner) -> Tables {
    let q = inner.q;
    let mut add = Vec::with_capacity((q * q) as usize);
    let mut mul = Vec::with_capacity((q * q) as usize);
    for a in 0..q {
        for b in 0..q {
            add.push(raw_add(inner, a, b) as u16);
            mul.push(raw_mul(inner, a, b) as u16);
        }
    }
    let neg = (0..q).map(|a| raw_neg(inner, a) as u16).collect();
    let mut inv = vec![0u16; q as usize];
    for a in 1..q {
        inv[a as usize] = raw_inv(inner, a) as u16;
    }
    Tables { add, mul, neg, inv }
}
