//! Dense matrices over GF(q) and subspaces in canonical RREF.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

/// A row-major dense matrix over a finite field.
#[derive(Clone)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<GF({})>{}x{}[", self.field.q(), self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.entries == other.entries
            && self.field == other.field
    }
}

impl Eq for Matrix {}

impl Hash for Matrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.entries.hash(state);
    }
}

impl PartialOrd for Matrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Matrix {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.rows, self.cols, &self.entries)
            .cmp(&(other.rows, other.cols, &other.entries))
            .then_with(|| {
                (self.field.p(), self.field.e(), self.field.modulus()).cmp(&(
                    other.field.p(),
                    other.field.e(),
                    other.field.modulus(),
                ))
            })
    }
}

/// Result of row reduction.
#[derive(Clone, Debug)]
pub struct Rref {
    /// The reduced matrix, same shape as the input, zero rows last.
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, entries: vec![FieldElement::ZERO; rows * cols] }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    /// Builds a matrix from row-major integer codes, validating each code.
    pub fn from_codes(field: &FieldSpec, rows: usize, cols: usize, codes: &[u32]) -> Result<Self> {
        if codes.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} codes supplied for a {rows}x{cols} matrix",
                codes.len()
            )));
        }
        let entries = codes.iter().map(|&c| field.element(c)).collect::<Result<Vec<_>>>()?;
        Ok(Matrix { field: field.clone(), rows, cols, entries })
    }

    /// Builds a matrix from a list of rows of codes; `cols` fixes the width
    /// when there are no rows.
    pub fn from_rows(field: &FieldSpec, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let mut codes = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            codes.extend_from_slice(row);
        }
        Self::from_codes(field, rows.len(), cols, &codes)
    }

    #[inline]
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.entries[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn codes(&self) -> Vec<u32> {
        self.entries.iter().map(|x| x.code()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Columns `lo..hi` as a new matrix.
    pub fn columns(&self, lo: usize, hi: usize) -> Result<Matrix> {
        if lo > hi || hi > self.cols {
            return Err(Error::InvalidRange(format!(
                "column range {lo}..{hi} for a matrix with {} columns",
                self.cols
            )));
        }
        let width = hi - lo;
        let mut entries = Vec::with_capacity(self.rows * width);
        for r in 0..self.rows {
            entries.extend_from_slice(&self.row(r)[lo..hi]);
        }
        Ok(Matrix { field: self.field.clone(), rows: self.rows, cols: width, entries })
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols || self.field != other.field {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {} columns over {} columns",
                self.cols, other.cols
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(Matrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, entries })
    }

    pub fn mat_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows || self.field != other.field {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
        self.mul_into(other, &mut out);
        Ok(out)
    }

    /// `out = self * other` without allocating; shapes must already agree.
    pub(crate) fn mul_into(&self, other: &Matrix, out: &mut Matrix) {
        debug_assert_eq!(self.cols, other.rows);
        debug_assert_eq!((out.rows, out.cols), (self.rows, other.cols));
        let f = &self.field;
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = FieldElement::ZERO;
                for i in 0..self.cols {
                    let a = self.get(r, i);
                    if !a.is_zero() {
                        acc = f.add(acc, f.mul(a, other.get(i, c)));
                    }
                }
                out.set(r, c, acc);
            }
        }
    }

    pub fn is_invertible(&self) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "invertibility needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(self.rank() == self.rows)
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        Rref { rank: pivots.len(), matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..cols {
            if lead == self.rows {
                break;
            }
            let Some(src) = (lead..self.rows).find(|&r| !self.get(r, c).is_zero()) else {
                continue;
            };
            if src != lead {
                for j in 0..cols {
                    self.entries.swap(src * cols + j, lead * cols + j);
                }
            }
            let inv = f.inv(self.get(lead, c)).expect("pivot is nonzero");
            for j in c..cols {
                let v = f.mul(self.get(lead, j), inv);
                self.set(lead, j, v);
            }
            for r in 0..self.rows {
                if r == lead {
                    continue;
                }
                let factor = self.get(r, c);
                if factor.is_zero() {
                    continue;
                }
                let neg = f.neg(factor);
                for j in c..cols {
                    let v = f.add(self.get(r, j), f.mul(neg, self.get(lead, j)));
                    self.set(r, j, v);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    /// Basis of the right null space `{x : self * x = 0}`, one vector per row.
    pub fn kernel(&self) -> Matrix {
        let Rref { matrix: red, pivots, .. } = self.rref();
        let f = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(f, free.len(), self.cols);
        for (i, &fc) in free.iter().enumerate() {
            out.set(i, fc, FieldElement::ONE);
            for (r, &pc) in pivots.iter().enumerate() {
                out.set(i, pc, f.neg(red.get(r, fc)));
            }
        }
        out
    }

    /// Text form: one row per line, codes separated by single spaces.
    pub fn to_text(&self) -> String {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// Parses the text form. Blank lines are ignored, so an empty input is
    /// the `0 x cols` matrix.
    pub fn parse_text(field: &FieldSpec, cols: usize, text: &str) -> Result<Matrix> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<u32>().map_err(|_| {
                        Error::Parse(format!("line {}: `{tok}` is not an element code", lineno + 1))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_rows(field, cols, &rows)
    }
}

/// A subspace of GF(q)^n, held as its unique RREF basis without zero rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    /// The row space of `m`.
    pub fn from_matrix(m: &Matrix) -> Subspace {
        let Rref { matrix, rank, pivots } = m.rref();
        let basis = Matrix {
            field: matrix.field.clone(),
            rows: rank,
            cols: matrix.cols,
            entries: matrix.entries[..rank * matrix.cols].to_vec(),
        };
        Subspace { ambient: m.cols, basis, pivots }
    }

    pub fn zero(field: &FieldSpec, n: usize) -> Subspace {
        Subspace { ambient: n, basis: Matrix::zeros(field, 0, n), pivots: Vec::new() }
    }

    pub fn full(field: &FieldSpec, n: usize) -> Subspace {
        Subspace { ambient: n, basis: Matrix::identity(field, n), pivots: (0..n).collect() }
    }

    /// Span of rows given as codes.
    pub fn from_rows(field: &FieldSpec, n: usize, rows: &[Vec<u32>]) -> Result<Subspace> {
        Ok(Self::from_matrix(&Matrix::from_rows(field, n, rows)?))
    }

    /// Wraps a matrix already known to be in RREF with no zero rows.
    fn from_rref_unchecked(basis: Matrix, pivots: Vec<usize>) -> Subspace {
        debug_assert_eq!(basis.rows, pivots.len());
        Subspace { ambient: basis.cols, basis, pivots }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    #[inline]
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn field(&self) -> &FieldSpec {
        &self.basis.field
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient || self.field() != other.field() {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of GF({})^{} and GF({})^{}",
                self.field().q(),
                self.ambient,
                other.field().q(),
                other.ambient
            )));
        }
        Ok(())
    }

    /// Membership test by reduction against the RREF basis.
    pub fn contains_vector(&self, v: &[FieldElement]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length must equal the ambient dimension");
        let f = self.field();
        let mut w = v.to_vec();
        for (r, &pc) in self.pivots.iter().enumerate() {
            let coeff = w[pc];
            if coeff.is_zero() {
                continue;
            }
            let neg = f.neg(coeff);
            for (j, &b) in self.basis.row(r).iter().enumerate().skip(pc) {
                if !b.is_zero() {
                    w[j] = f.add(w[j], f.mul(neg, b));
                }
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.dim() <= other.dim() && (0..self.dim()).all(|r| other.contains_vector(self.basis.row(r))))
    }

    /// `self + other`.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        Ok(Subspace::from_matrix(&self.basis.stack(&other.basis)?))
    }

    /// `self ∩ other`, from the left kernel of the stacked bases: if
    /// `(x, y)` satisfies `x A + y B = 0` then `x A` lies in both spaces.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let a = self.dim();
        if a == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(self.field(), self.ambient));
        }
        let stacked = self.basis.stack(&other.basis)?;
        let kernel = stacked.transpose().kernel();
        let coeffs = kernel.columns(0, a)?;
        Ok(Subspace::from_matrix(&coeffs.mat_mul(&self.basis)?))
    }

    /// Image under deleting every coordinate outside `lo..hi`.
    pub fn project(&self, lo: usize, hi: usize) -> Result<Subspace> {
        Ok(Subspace::from_matrix(&self.basis.columns(lo, hi)?))
    }

    /// Every `k`-dimensional subspace of GF(q)^n exactly once.
    pub fn enumerate(field: &FieldSpec, n: usize, k: usize) -> Result<SubspaceIter> {
        SubspaceIter::new(field, n, k)
    }
}

/// Stream of all k-dimensional subspaces of GF(q)^n.
///
/// Walks pivot-column sets in lexicographic order and, for each, every
/// filling of the free RREF positions (last position varying fastest).
pub struct SubspaceIter {
    field: FieldSpec,
    n: usize,
    k: usize,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    counter: Vec<u32>,
    done: bool,
}

impl SubspaceIter {
    fn new(field: &FieldSpec, n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::InvalidRange(format!("cannot have a {k}-dimensional subspace of a {n}-dimensional space")));
        }
        let mut it = SubspaceIter {
            field: field.clone(),
            n,
            k,
            pivots: (0..k).collect(),
            free: Vec::new(),
            counter: Vec::new(),
            done: false,
        };
        it.reset_free();
        Ok(it)
    }

    fn reset_free(&mut self) {
        self.free.clear();
        for (r, &p) in self.pivots.iter().enumerate() {
            for c in p + 1..self.n {
                if !self.pivots.contains(&c) {
                    self.free.push((r, c));
                }
            }
        }
        self.counter = vec![0; self.free.len()];
    }

    fn next_pivots(&mut self) -> bool {
        let (n, k) = (self.n, self.k);
        let Some(i) = (0..k).rev().find(|&i| self.pivots[i] < n - k + i) else {
            return false;
        };
        self.pivots[i] += 1;
        for j in i + 1..k {
            self.pivots[j] = self.pivots[j - 1] + 1;
        }
        true
    }

    fn current(&self) -> Subspace {
        let mut m = Matrix::zeros(&self.field, self.k, self.n);
        for (r, &p) in self.pivots.iter().enumerate() {
            m.set(r, p, FieldElement::ONE);
        }
        for (&(r, c), &v) in self.free.iter().zip(&self.counter) {
            m.set(r, c, FieldElement(v));
        }
        Subspace::from_rref_unchecked(m, self.pivots.clone())
    }

    fn advance(&mut self) {
        let q = self.field.q();
        for digit in self.counter.iter_mut().rev() {
            *digit += 1;
            if *digit < q {
                return;
            }
            *digit = 0;
        }
        if self.next_pivots() {
            self.reset_free();
        } else {
            self.done = true;
        }
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.done {
            return None;
        }
        let s = self.current();
        self.advance();
        Some(s)
    }
}

/// All subspaces of GF(q)^n, by increasing dimension.
pub fn all_subspaces(field: &FieldSpec, n: usize) -> impl Iterator<Item = Subspace> + '_ {
    (0..=n).flat_map(move |k| SubspaceIter::new(field, n, k).expect("k <= n"))
}
