//! Exact closed-form counts: Gaussian coefficients, matrices of given rank,
//! rank-extension counts, group orders and the anzahl formulas for subspaces
//! of a given type.
//!
//! Every function is exact. Parameters that describe an empty configuration
//! (a Gaussian coefficient with `k > n`, a rank larger than the matrix, an
//! invalid type) give a count of zero so that products and sums of these
//! terms compose; `q < 2` and ill-formed shapes are errors.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact nonnegative count.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Count(BigUint);

impl Count {
    pub fn zero() -> Self {
        Count(BigUint::zero())
    }

    pub fn one() -> Self {
        Count(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    /// Lossless narrowing, for guard comparisons.
    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl From<u64> for Count {
    fn from(v: u64) -> Self {
        Count(BigUint::from(v))
    }
}

impl From<usize> for Count {
    fn from(v: usize) -> Self {
        Count(BigUint::from(v))
    }
}

impl From<BigUint> for Count {
    fn from(v: BigUint) -> Self {
        Count(v)
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Count {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse::<BigUint>().map(Count).map_err(|_| Error::Parse(format!("`{s}` is not a count")))
    }
}

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(&self.0)
    }
}

impl Add for Count {
    type Output = Count;
    fn add(self, rhs: Count) -> Count {
        Count(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Count> for Count {
    type Output = Count;
    fn add(self, rhs: &'a Count) -> Count {
        Count(self.0 + &rhs.0)
    }
}

impl Mul for Count {
    type Output = Count;
    fn mul(self, rhs: Count) -> Count {
        Count(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a Count> for &'a Count {
    type Output = Count;
    fn mul(self, rhs: &'a Count) -> Count {
        Count(&self.0 * &rhs.0)
    }
}

impl Sum for Count {
    fn sum<I: Iterator<Item = Count>>(iter: I) -> Count {
        iter.fold(Count::zero(), |a, b| a + b)
    }
}

impl Product for Count {
    fn product<I: Iterator<Item = Count>>(iter: I) -> Count {
        iter.fold(Count::one(), |a, b| a * b)
    }
}

/// Block sizes `(n_1, ..., n_t)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Shape(Vec<usize>);

impl Shape {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidRange("a shape needs at least one block".into()));
        }
        Ok(Shape(blocks))
    }

    pub fn t(&self) -> usize {
        self.0.len()
    }

    pub fn blocks(&self) -> &[usize] {
        &self.0
    }

    /// `n_1 + ... + n_t`.
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// First coordinate of block `i` (0-based); `offset(t)` is the total.
    pub fn offset(&self, i: usize) -> usize {
        self.0[..i].iter().sum()
    }

    /// `n_{i+1} + ... + n_t` in 0-based terms: the width of blocks `i..t`.
    pub fn tail(&self, i: usize) -> usize {
        self.0[i..].iter().sum()
    }

    /// Block index containing coordinate `c`.
    pub fn block_of(&self, c: usize) -> usize {
        let mut acc = 0;
        for (i, &n) in self.0.iter().enumerate() {
            acc += n;
            if c < acc {
                return i;
            }
        }
        panic!("coordinate {c} outside shape {self}")
    }

    fn check_len(&self, v: &TypeVector) -> Result<()> {
        if v.0.len() != self.t() {
            return Err(Error::LengthMismatch { shape: self.t(), vector: v.0.len() });
        }
        Ok(())
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", join(&self.0))
    }
}

impl FromStr for Shape {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Shape::new(parse_list(s)?)
    }
}

/// A subspace type `(k_1, ..., k_t)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct TypeVector(Vec<usize>);

impl TypeVector {
    pub fn new(ks: Vec<usize>) -> Self {
        TypeVector(ks)
    }

    pub fn zero(t: usize) -> Self {
        TypeVector(vec![0; t])
    }

    pub fn ks(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `k_i - k_{i+1}` (0-based, with `k_{t+1} = 0`), signed.
    pub(crate) fn diff(&self, i: usize) -> i64 {
        let next = self.0.get(i + 1).copied().unwrap_or(0);
        self.0[i] as i64 - next as i64
    }
}

impl fmt::Display for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", join(&self.0))
    }
}

impl FromStr for TypeVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(TypeVector(parse_list(s)?))
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("`{tok}` is not a nonnegative integer")))
        })
        .collect()
}

pub(crate) fn check_q(q: u64) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidQ(q));
    }
    Ok(())
}

/// `q^e`.
pub(crate) fn qpow(q: u64, e: u64) -> Count {
    let e = u32::try_from(e).expect("exponent fits in u32");
    Count(BigUint::from(q).pow(e))
}

/// `q^e - 1`.
fn qpow_minus_one(q: u64, e: u64) -> BigUint {
    qpow(q, e).0 - 1u32
}

/// Gaussian binomial coefficient `[n, k]_q`: the number of k-dimensional
/// subspaces of GF(q)^n. Zero outside `0 <= k <= n`.
pub fn gauss(n: i64, k: i64, q: u64) -> Result<Count> {
    check_q(q)?;
    Ok(gauss_unchecked(n, k, q))
}

pub(crate) fn gauss_unchecked(n: i64, k: i64, q: u64) -> Count {
    if k < 0 || k > n {
        return Count::zero();
    }
    let k = k.min(n - k);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= qpow_minus_one(q, (n - i) as u64);
        den *= qpow_minus_one(q, (i + 1) as u64);
    }
    let rem = &num % &den;
    assert!(rem.is_zero(), "inexact division in gauss({n}, {k}, {q})");
    Count(num / den)
}

/// Number of `m x n` matrices over GF(q) with rank exactly `i`.
pub fn count_rank_matrices(i: i64, m: i64, n: i64, q: u64) -> Result<Count> {
    check_q(q)?;
    Ok(rank_count(i, m, n, q))
}

/// Zero for any negative argument or `i > min(m, n)`.
pub(crate) fn rank_count(i: i64, m: i64, n: i64, q: u64) -> Count {
    if i < 0 || m < 0 || n < 0 || i > m.min(n) {
        return Count::zero();
    }
    if i == 0 {
        return Count::one();
    }
    let mut acc = qpow(q, (i * (i - 1) / 2) as u64) * gauss_unchecked(m, i, q);
    for t in n - i + 1..=n {
        acc = Count(acc.0 * qpow_minus_one(q, t as u64));
    }
    acc
}

/// Number of m-dimensional subspaces of GF(q)^n meeting a fixed
/// m-dimensional subspace in dimension `m - i`.
pub fn count_intersecting_subspaces(m: usize, n: usize, i: usize, q: u64) -> Result<Count> {
    check_q(q)?;
    if m < 1 || m > n {
        return Err(Error::InvalidRange(format!("need 1 <= m <= n, got m = {m}, n = {n}")));
    }
    if i > m.min(n - m) {
        return Err(Error::InvalidRange(format!(
            "i = {i} exceeds min(m, n - m) = {}",
            m.min(n - m)
        )));
    }
    let (m, n, i) = (m as i64, n as i64, i as i64);
    Ok(qpow(q, (i * i) as u64) * gauss_unchecked(n - m, i, q) * gauss_unchecked(m, i, q))
}

/// Given a fixed `m1 x n` matrix `A1` of rank `t1`, the number of `m2 x n`
/// matrices `A2` such that `A1` stacked over `A2` has rank `t2`.
pub fn count_row_extension(t1: usize, t2: usize, m2: usize, n: usize, q: u64) -> Result<Count> {
    check_q(q)?;
    if t1 > t2 {
        return Err(Error::InvalidRange(format!("need t1 <= t2, got t1 = {t1}, t2 = {t2}")));
    }
    let (t1, t2, m2, n) = (t1 as i64, t2 as i64, m2 as i64, n as i64);
    Ok(qpow(q, (m2 * t1) as u64) * rank_count(t2 - t1, m2, n - t1, q))
}

/// Given a fixed `m x n1` matrix `A1` of rank `t1`, the number of `m x n2`
/// matrices `A2` such that `(A1 A2)` has rank `t2`.
pub fn count_col_extension(t1: usize, t2: usize, m: usize, n2: usize, q: u64) -> Result<Count> {
    check_q(q)?;
    if t1 > t2 {
        return Err(Error::InvalidRange(format!("need t1 <= t2, got t1 = {t1}, t2 = {t2}")));
    }
    let (t1, t2, m, n2) = (t1 as i64, t2 as i64, m as i64, n2 as i64);
    Ok(qpow(q, (t1 * n2) as u64) * rank_count(t2 - t1, m - t1, n2, q))
}

/// Number of block matrices `[[A, B], [C, D]]` (row blocks `m1, m2`,
/// column blocks `n1, n2`) with `rank (C D) = rank (B over D) = alpha`.
///
/// Sums over `l = rank D`.
pub fn count_block_rank(m1: usize, m2: usize, n1: usize, n2: usize, alpha: usize, q: u64) -> Result<Count> {
    check_q(q)?;
    let (m1, m2, n1, n2, alpha) = (m1 as i64, m2 as i64, n1 as i64, n2 as i64, alpha as i64);
    let lo = 0.max(alpha - n1).max(alpha - m1);
    Ok((lo..=alpha)
        .map(|l| {
            qpow(q, ((m1 + n1) * l + m1 * n1) as u64)
                * rank_count(l, m2, n2, q)
                * rank_count(alpha - l, m1, n2 - l, q)
                * rank_count(alpha - l, m2 - l, n1, q)
        })
        .sum())
}

/// `|GL_n(q)|`.
pub fn general_linear_order(n: usize, q: u64) -> Result<Count> {
    check_q(q)?;
    let n = n as u64;
    Ok((0..n).map(|s| Count(qpow(q, n).0 - qpow(q, s).0)).product())
}

/// Order of the block upper-triangular group for `shape`.
pub fn group_order(shape: &Shape, q: u64) -> Result<Count> {
    check_q(q)?;
    let b = shape.blocks();
    let mut off_diag = 0u64;
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            off_diag += (b[i] * b[j]) as u64;
        }
    }
    let diag: Count = b.iter().map(|&n| general_linear_order(n, q)).collect::<Result<Vec<_>>>()?.into_iter().product();
    Ok(diag * qpow(q, off_diag))
}

/// Whether subspaces of type `k` exist: `0 <= k_i - k_{i+1} <= n_i` and
/// `0 <= k_t <= n_t`.
pub fn is_valid_type(shape: &Shape, k: &TypeVector) -> Result<bool> {
    shape.check_len(k)?;
    Ok((0..shape.t()).all(|i| {
        let d = k.diff(i);
        0 <= d && d <= shape.blocks()[i] as i64
    }))
}

/// Number of subspaces of type `k`; zero for an invalid type.
pub fn anzahl(shape: &Shape, k: &TypeVector, q: u64) -> Result<Count> {
    check_q(q)?;
    if !is_valid_type(shape, k)? {
        return Ok(Count::zero());
    }
    let t = shape.t();
    let n = shape.blocks();
    let ks = k.ks();
    let mut acc = gauss_unchecked(n[t - 1] as i64, ks[t - 1] as i64, q);
    for j in 0..t - 1 {
        let d = k.diff(j);
        let exp = d * (shape.tail(j + 1) as i64 - ks[j + 1] as i64);
        acc = acc * qpow(q, exp as u64) * gauss_unchecked(n[j] as i64, d, q);
    }
    Ok(acc)
}

/// Whether a type-`k` subspace contains type-`l` subspaces:
/// `0 <= l_i - l_{i+1} <= k_i - k_{i+1} <= n_i` and `0 <= l_t <= k_t <= n_t`.
pub fn is_valid_type_pair(shape: &Shape, k: &TypeVector, l: &TypeVector) -> Result<bool> {
    shape.check_len(k)?;
    shape.check_len(l)?;
    Ok((0..shape.t()).all(|i| {
        let (dl, dk) = (l.diff(i), k.diff(i));
        0 <= dl && dl <= dk && dk <= shape.blocks()[i] as i64
    }))
}

/// Number of type-`l` subspaces inside a fixed type-`k` subspace.
pub fn count_contained(shape: &Shape, k: &TypeVector, l: &TypeVector, q: u64) -> Result<Count> {
    check_q(q)?;
    if !is_valid_type_pair(shape, k, l)? {
        return Ok(Count::zero());
    }
    let t = shape.t();
    let (ks, ls) = (k.ks(), l.ks());
    let mut acc = gauss_unchecked(ks[t - 1] as i64, ls[t - 1] as i64, q);
    for j in 0..t - 1 {
        let exp = l.diff(j) * (ks[j + 1] as i64 - ls[j + 1] as i64);
        acc = acc * qpow(q, exp as u64) * gauss_unchecked(k.diff(j), l.diff(j), q);
    }
    Ok(acc)
}

/// Number of type-`k` subspaces containing a fixed type-`l` subspace.
pub fn count_containing(shape: &Shape, l: &TypeVector, k: &TypeVector, q: u64) -> Result<Count> {
    check_q(q)?;
    if !is_valid_type_pair(shape, k, l)? {
        return Ok(Count::zero());
    }
    let t = shape.t();
    let n = shape.blocks();
    let (ks, ls) = (k.ks(), l.ks());
    let mut exp = 0i64;
    let mut acc = gauss_unchecked(n[t - 1] as i64 - ls[t - 1] as i64, ks[t - 1] as i64 - ls[t - 1] as i64, q);
    for j in 0..t - 1 {
        let excess = k.diff(j) - l.diff(j);
        exp += excess * (shape.tail(j + 1) as i64 - ks[j + 1] as i64);
        acc = acc * gauss_unchecked(n[j] as i64 - l.diff(j), excess, q);
    }
    Ok(qpow(q, exp as u64) * acc)
}

/// Every valid type for `shape`, in lexicographic order.
pub fn valid_types(shape: &Shape) -> Vec<TypeVector> {
    // choose d_i = k_i - k_{i+1} in 0..=n_i, then k_i is a suffix sum
    let n = shape.blocks();
    let mut out = Vec::new();
    let mut d = vec![0usize; n.len()];
    loop {
        let mut ks = vec![0usize; n.len()];
        let mut acc = 0;
        for i in (0..n.len()).rev() {
            acc += d[i];
            ks[i] = acc;
        }
        out.push(TypeVector(ks));
        let Some(i) = (0..n.len()).rev().find(|&i| d[i] < n[i]) else { break };
        d[i] += 1;
        for x in &mut d[i + 1..] {
            *x = 0;
        }
    }
    out.sort();
    out
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;

    fn c(v: u64) -> Count {
        Count::from(v)
    }

    fn shape(b: &[usize]) -> Shape {
        Shape::new(b.to_vec()).unwrap()
    }

    fn ty(k: &[usize]) -> TypeVector {
        TypeVector::new(k.to_vec())
    }

    /// Rank over GF(p), p prime, by plain elimination. Independent of
    /// `matrix::Matrix`.
    fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            let Some(src) = (rank..rows.len()).find(|&r| !rows[r][c].is_multiple_of(p)) else { continue };
            rows.swap(rank, src);
            let inv = (1..p).find(|x| x * rows[rank][c] % p == 1).unwrap();
            for r in 0..rows.len() {
                if r != rank && rows[r][c] != 0 {
                    let f = rows[r][c] * inv % p;
                    for j in 0..cols {
                        rows[r][j] = (rows[r][j] + p * p - f * rows[rank][j]) % p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn all_matrices(m: usize, n: usize, p: u64) -> impl Iterator<Item = Vec<Vec<u64>>> {
        let cells = (m * n) as u32;
        (0..p.pow(cells)).map(move |code| {
            (0..m).map(|r| (0..n).map(|j| code / p.pow((r * n + j) as u32) % p).collect()).collect()
        })
    }

    #[test]
    fn gauss_examples() {
        for n in 0..6 {
            assert_eq!(gauss(n, 0, 3).unwrap(), c(1));
        }
        assert_eq!(gauss(2, 1, 2).unwrap(), c(3));
        assert_eq!(gauss(4, 2, 2).unwrap(), c(35));
        assert_eq!(gauss(3, 4, 2).unwrap(), c(0));
        assert_eq!(gauss(3, -1, 2).unwrap(), c(0));
        assert!(matches!(gauss(3, 1, 1), Err(Error::InvalidQ(1))));
    }

    #[test]
    fn gauss_identities() {
        for q in [2u64, 3, 4, 5] {
            for n in 0..=12i64 {
                for k in 0..=n {
                    assert_eq!(gauss(n, k, q).unwrap(), gauss(n, n - k, q).unwrap());
                    if n > 0 {
                        let pascal = gauss(n - 1, k - 1, q).unwrap() + qpow(q, k as u64) * gauss(n - 1, k, q).unwrap();
                        assert_eq!(gauss(n, k, q).unwrap(), pascal, "n={n} k={k} q={q}");
                    }
                }
            }
        }
    }

    #[test]
    fn rank_count_examples() {
        assert_eq!(count_rank_matrices(0, 3, 2, 5).unwrap(), c(1));
        assert_eq!(count_rank_matrices(1, 2, 2, 2).unwrap(), c(9));
        assert_eq!(count_rank_matrices(2, 2, 2, 2).unwrap(), c(6));
        assert_eq!(count_rank_matrices(3, 2, 2, 2).unwrap(), c(0));
        assert_eq!(count_rank_matrices(-1, 2, 2, 2).unwrap(), c(0));
        assert_eq!(count_rank_matrices(0, -1, 2, 2).unwrap(), c(0));
    }

    #[test]
    fn rank_count_matches_scan() {
        for p in [2u64, 3] {
            for m in 0..=3 {
                for n in 0..=3 {
                    let mut hist = [0u64; 4];
                    for a in all_matrices(m, n, p) {
                        hist[if m == 0 { 0 } else { rank_mod_p(a, p) }] += 1;
                    }
                    for (i, &h) in hist.iter().enumerate() {
                        assert_eq!(count_rank_matrices(i as i64, m as i64, n as i64, p).unwrap(), c(h));
                    }
                }
            }
        }
    }

    #[test]
    fn rank_counts_partition_all_matrices() {
        for q in [2u64, 3] {
            for m in 0..=4i64 {
                for n in 0..=4i64 {
                    let total: Count = (0..=m.min(n)).map(|i| count_rank_matrices(i, m, n, q).unwrap()).sum();
                    assert_eq!(total, qpow(q, (m * n) as u64));
                }
            }
        }
    }

    #[test]
    fn intersecting_examples() {
        assert_eq!(count_intersecting_subspaces(3, 5, 0, 2).unwrap(), c(1));
        assert_eq!(count_intersecting_subspaces(1, 2, 1, 2).unwrap(), c(2));
        // q^(1*1) * 3 * 3; the 35 planes of GF(2)^4 split as 1 + 18 + 16
        assert_eq!(count_intersecting_subspaces(2, 4, 1, 2).unwrap(), c(18));
        assert!(count_intersecting_subspaces(2, 4, 3, 2).is_err());
        assert!(count_intersecting_subspaces(0, 4, 0, 2).is_err());
    }

    #[test]
    fn intersecting_matches_scan() {
        use crate::field::FieldSpec;
        use crate::matrix::Subspace;
        for q in [2u64, 3] {
            let f = FieldSpec::from_order(q).unwrap();
            for n in 1..=4usize {
                for m in 1..=n {
                    let p = Subspace::enumerate(&f, n, m).unwrap().next().unwrap();
                    let mut tally = vec![0u64; m + 1];
                    for s in Subspace::enumerate(&f, n, m).unwrap() {
                        tally[m - s.intersect(&p).unwrap().dim()] += 1;
                    }
                    for (i, &seen) in tally.iter().enumerate() {
                        match count_intersecting_subspaces(m, n, i, q) {
                            Ok(v) => assert_eq!(v, c(seen), "m={m} n={n} i={i} q={q}"),
                            Err(_) => assert_eq!(seen, 0),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn extension_examples() {
        assert_eq!(count_row_extension(2, 2, 0, 3, 2).unwrap(), c(1));
        assert_eq!(count_row_extension(1, 2, 1, 2, 2).unwrap(), c(2));
        assert_eq!(count_row_extension(0, 1, 1, 2, 2).unwrap(), c(3));
        assert!(count_row_extension(2, 1, 1, 2, 2).is_err());
        assert_eq!(count_col_extension(1, 1, 2, 0, 2).unwrap(), c(1));
        assert_eq!(count_col_extension(1, 2, 2, 1, 2).unwrap(), c(2));
        assert_eq!(count_col_extension(1, 1, 1, 1, 2).unwrap(), c(2));
    }

    #[test]
    fn block_rank_examples() {
        assert_eq!(count_block_rank(1, 1, 1, 1, 0, 2).unwrap(), c(2));
        assert_eq!(count_block_rank(1, 1, 1, 1, 1, 2).unwrap(), c(10));
        assert_eq!(count_block_rank(1, 1, 1, 1, 3, 2).unwrap(), c(0));
    }

    #[test]
    fn group_orders() {
        assert_eq!(group_order(&shape(&[1, 1, 1]), 2).unwrap(), c(8));
        assert_eq!(group_order(&shape(&[2, 1]), 2).unwrap(), c(24));
        assert_eq!(group_order(&shape(&[3]), 2).unwrap(), c(168));
        assert_eq!(group_order(&shape(&[0, 2]), 3).unwrap(), c(48));
        assert_eq!(group_order(&shape(&[0]), 3).unwrap(), c(1));
    }

    #[test]
    fn type_validity() {
        let s = shape(&[1, 1, 1]);
        assert!(is_valid_type(&s, &ty(&[0, 0, 0])).unwrap());
        assert!(is_valid_type(&s, &ty(&[1, 0, 0])).unwrap());
        assert!(!is_valid_type(&s, &ty(&[2, 0, 0])).unwrap());
        assert!(!is_valid_type(&s, &ty(&[0, 1, 0])).unwrap());
        assert!(is_valid_type(&s, &ty(&[1, 0])).is_err());

        let s2 = shape(&[1, 1]);
        assert!(is_valid_type_pair(&s2, &ty(&[1, 0]), &ty(&[1, 0])).unwrap());
        assert!(is_valid_type_pair(&s2, &ty(&[1, 0]), &ty(&[0, 0])).unwrap());
        assert!(!is_valid_type_pair(&s2, &ty(&[1, 0]), &ty(&[1, 1])).unwrap());
        assert!(is_valid_type_pair(&s2, &ty(&[1, 0]), &ty(&[0])).is_err());
    }

    #[test]
    fn anzahl_examples() {
        for n in 0..5 {
            for k in 0..=n {
                assert_eq!(anzahl(&shape(&[n]), &ty(&[k]), 3).unwrap(), gauss(n as i64, k as i64, 3).unwrap());
            }
        }
        assert_eq!(anzahl(&shape(&[1, 1]), &ty(&[1, 0]), 2).unwrap(), c(2));
        assert_eq!(anzahl(&shape(&[1, 1, 1]), &ty(&[1, 0, 0]), 2).unwrap(), c(4));
        assert_eq!(anzahl(&shape(&[1, 1, 1]), &ty(&[2, 0, 0]), 2).unwrap(), c(0));
    }

    #[test]
    fn contained_and_containing_examples() {
        let s = shape(&[1, 1, 1]);
        let k = ty(&[2, 2, 1]);
        assert_eq!(count_contained(&s, &k, &k, 2).unwrap(), c(1));
        assert_eq!(count_contained(&s, &k, &ty(&[1, 1, 1]), 2).unwrap(), c(1));
        assert_eq!(count_contained(&s, &k, &ty(&[1, 1, 0]), 2).unwrap(), c(2));
        assert_eq!(count_containing(&s, &k, &k, 2).unwrap(), c(1));
        assert_eq!(count_containing(&s, &ty(&[1, 1, 1]), &k, 2).unwrap(), c(1));
        for k in valid_types(&s) {
            assert_eq!(count_containing(&s, &TypeVector::zero(3), &k, 3).unwrap(), anzahl(&s, &k, 3).unwrap());
        }
    }

    #[test]
    fn double_counting_identity() {
        for b in [vec![2, 1, 1], vec![1, 2], vec![3], vec![1, 0, 2], vec![2, 2]] {
            let s = Shape::new(b).unwrap();
            let types = valid_types(&s);
            for k in &types {
                for l in &types {
                    if !is_valid_type_pair(&s, k, l).unwrap() {
                        continue;
                    }
                    for q in [2, 3, 4] {
                        let lhs = count_containing(&s, l, k, q).unwrap() * anzahl(&s, l, q).unwrap();
                        let rhs = count_contained(&s, k, l, q).unwrap() * anzahl(&s, k, q).unwrap();
                        assert_eq!(lhs, rhs, "shape {s} k {k} l {l} q {q}");
                    }
                }
            }
        }
    }

    #[test]
    fn anzahl_sums_to_all_subspaces() {
        for b in [vec![1, 1, 1], vec![2, 2], vec![0, 3], vec![1, 2, 1]] {
            let s = Shape::new(b).unwrap();
            for q in [2, 3] {
                let by_type: Count = valid_types(&s).iter().map(|k| anzahl(&s, k, q).unwrap()).sum();
                let n = s.total() as i64;
                let total: Count = (0..=n).map(|d| gauss(n, d, q).unwrap()).sum();
                assert_eq!(by_type, total);
            }
        }
    }

    #[test]
    fn valid_types_listing() {
        let s = shape(&[1, 1]);
        let listed: Vec<String> = valid_types(&s).iter().map(|k| k.to_string()).collect();
        assert_eq!(listed, ["0,0", "1,0", "1,1", "2,1"]);
        assert_eq!(valid_types(&shape(&[0, 0, 0])), vec![ty(&[0, 0, 0])]);
    }

    #[test]
    fn parsing_and_display() {
        let s: Shape = "1, 2,3".parse().unwrap();
        assert_eq!(s.to_string(), "1,2,3");
        assert_eq!((s.offset(2), s.tail(1), s.block_of(3)), (3, 5, 2));
        assert!("".parse::<Shape>().is_err());
        assert!("1,-1".parse::<TypeVector>().is_err());
        assert_eq!(serde_json::to_string(&c(12345678901234567890)).unwrap(), "\"12345678901234567890\"");
        assert_eq!("42".parse::<Count>().unwrap(), c(42));
    }
}
