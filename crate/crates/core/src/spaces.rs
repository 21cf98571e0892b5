//! The t-singular linear space: the filtration `E_2 ⊇ ... ⊇ E_t`, subspace
//! types, canonical orbit representatives, and the block upper-triangular
//! group acting on row vectors from the right.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::matrix::{Matrix, Subspace, SubspaceIter};
use crate::qcount::{self, Count, Shape, TypeVector};

/// Default cap on the size of any group or subspace list we enumerate.
pub const DEFAULT_GROUP_GUARD: u64 = 1_000_000;

fn check_ambient(shape: &Shape, s: &Subspace) -> Result<()> {
    if s.ambient() != shape.total() {
        return Err(Error::DimensionMismatch(format!(
            "subspace of a {}-dimensional space used with shape {shape} (total {})",
            s.ambient(),
            shape.total()
        )));
    }
    Ok(())
}

/// `E_i` for `2 <= i <= t`: the span of the last `n_i + ... + n_t` standard
/// basis vectors. `i = 1` gives the whole space.
pub fn e_subspace(shape: &Shape, i: usize, field: &FieldSpec) -> Result<Subspace> {
    if i == 0 || i > shape.t() {
        return Err(Error::InvalidRange(format!("E_{i} is undefined for t = {}", shape.t())));
    }
    let n = shape.total();
    let start = shape.offset(i - 1);
    let mut m = Matrix::zeros(field, n - start, n);
    for r in 0..n - start {
        m.set(r, start + r, FieldElement::ONE);
    }
    Ok(Subspace::from_matrix(&m))
}

/// The type `(k_1, ..., k_t)` of `s`: `k_1 = dim s`, `k_i = dim(s ∩ E_i)`.
///
/// `dim(s ∩ E_i)` is `dim s` minus the rank of the basis restricted to the
/// coordinates before block `i`. For an RREF basis that rank is the number
/// of pivots falling before block `i`.
pub fn type_of(shape: &Shape, s: &Subspace) -> Result<TypeVector> {
    check_ambient(shape, s)?;
    let k1 = s.dim();
    let ks = (0..shape.t())
        .map(|b| {
            let prefix = shape.offset(b);
            k1 - s.pivots().iter().take_while(|&&p| p < prefix).count()
        })
        .collect();
    Ok(TypeVector::new(ks))
}

/// The canonical member of the orbit of type `k`: in block `j` the rows
/// `(I 0)` of height `k_j - k_{j+1}`.
pub fn orbit_representative(shape: &Shape, k: &TypeVector, field: &FieldSpec) -> Result<Subspace> {
    if !qcount::is_valid_type(shape, k)? {
        return Err(Error::InvalidType { shape: shape.blocks().to_vec(), ty: k.ks().to_vec() });
    }
    let n = shape.total();
    let mut rows = Vec::new();
    for j in 0..shape.t() {
        let start = shape.offset(j);
        for r in 0..k.diff(j) as usize {
            let mut row = vec![0u32; n];
            row[start + r] = 1;
            rows.push(row);
        }
    }
    Subspace::from_rows(field, n, &rows)
}

/// Stream of the subspaces of a given type.
pub struct TypeIter {
    shape: Shape,
    target: TypeVector,
    inner: Option<SubspaceIter>,
}

impl Iterator for TypeIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        let inner = self.inner.as_mut()?;
        inner.find(|s| type_of(&self.shape, s).expect("ambient matches") == self.target)
    }
}

/// Every subspace of type `k`, filtered from the full list of
/// `k_1`-dimensional subspaces. An invalid type yields nothing.
pub fn enumerate_by_type(shape: &Shape, k: &TypeVector, field: &FieldSpec) -> Result<TypeIter> {
    let inner = if qcount::is_valid_type(shape, k)? {
        Some(Subspace::enumerate(field, shape.total(), k.ks()[0])?)
    } else {
        None
    };
    Ok(TypeIter { shape: shape.clone(), target: k.clone(), inner })
}

/// An invertible matrix that is block upper triangular for `shape`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    shape: Shape,
    mat: Matrix,
}

impl GroupElement {
    pub fn new(shape: &Shape, mat: Matrix) -> Result<Self> {
        let n = shape.total();
        if mat.rows() != n || mat.cols() != n {
            return Err(Error::NotGroupElement(format!(
                "{}x{} matrix for shape {shape}",
                mat.rows(),
                mat.cols()
            )));
        }
        for r in 0..n {
            for c in 0..n {
                if shape.block_of(r) > shape.block_of(c) && !mat.get(r, c).is_zero() {
                    return Err(Error::NotGroupElement(format!("nonzero entry below the block diagonal at ({r}, {c})")));
                }
            }
        }
        if !mat.is_invertible()? {
            return Err(Error::NotGroupElement("matrix is singular".into()));
        }
        Ok(GroupElement { shape: shape.clone(), mat })
    }

    pub fn identity(shape: &Shape, field: &FieldSpec) -> Self {
        GroupElement { shape: shape.clone(), mat: Matrix::identity(field, shape.total()) }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    /// `self * other`; acting by the product is acting by `self` then `other`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.shape != other.shape {
            return Err(Error::DimensionMismatch(format!("shapes {} and {}", self.shape, other.shape)));
        }
        Ok(GroupElement { shape: self.shape.clone(), mat: self.mat.mat_mul(&other.mat)? })
    }
}

/// `s T`, as a subspace.
pub fn act(s: &Subspace, g: &GroupElement) -> Result<Subspace> {
    if s.ambient() != g.mat.rows() || s.field() != g.mat.field() {
        return Err(Error::DimensionMismatch(format!(
            "subspace of dimension-{} space acted on by a {}x{} matrix",
            s.ambient(),
            g.mat.rows(),
            g.mat.cols()
        )));
    }
    Ok(Subspace::from_matrix(&s.basis().mat_mul(&g.mat)?))
}

/// Whether `s T ⊆ s` (hence `= s`), reusing `buf` for the product.
pub(crate) fn fixes(s: &Subspace, mat: &Matrix, buf: &mut Matrix) -> bool {
    s.basis().mul_into(mat, buf);
    (0..buf.rows()).all(|r| s.contains_vector(buf.row(r)))
}

/// Every element of GL_n(q), built row by row so that each new row lies
/// outside the span of the previous ones.
pub fn general_linear_elements(n: usize, field: &FieldSpec) -> Vec<Matrix> {
    let q = field.q();
    let vectors: Vec<Vec<u32>> = (0..(q as u64).pow(n as u32))
        .map(|code| (0..n).map(|j| ((code / (q as u64).pow(j as u32)) % q as u64) as u32).collect())
        .collect();
    let mut partial: Vec<Vec<Vec<u32>>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for rows in &partial {
            let span = Subspace::from_rows(field, n, rows).expect("rows have length n");
            for v in &vectors {
                let elems: Vec<FieldElement> = v.iter().map(|&c| FieldElement(c)).collect();
                if !span.contains_vector(&elems) {
                    let mut extended = rows.clone();
                    extended.push(v.clone());
                    next.push(extended);
                }
            }
        }
        partial = next;
    }
    partial
        .into_iter()
        .map(|rows| Matrix::from_rows(field, n, &rows).expect("valid codes"))
        .collect()
}

fn guard_check(what: impl FnOnce() -> String, size: &Count, guard: u64) -> Result<()> {
    match size.to_u64() {
        Some(s) if s <= guard => Ok(()),
        _ => Err(Error::TooLarge { what: what(), size: size.to_string(), guard }),
    }
}

/// Stream of the whole block upper-triangular group.
///
/// Diagonal blocks run over precomputed GL_{n_i}(q) lists; the blocks above
/// the diagonal are filled freely. [`GroupIter::next_matrix`] updates one
/// matrix in place for tight loops.
pub struct GroupIter {
    shape: Shape,
    field: FieldSpec,
    gl: Vec<Vec<Matrix>>,
    diag: Vec<usize>,
    upper: Vec<(usize, usize)>,
    counter: Vec<u32>,
    current: Matrix,
    started: bool,
    done: bool,
}

/// The group for `shape`, refusing when its order exceeds `guard`.
pub fn enumerate_group(shape: &Shape, field: &FieldSpec, guard: u64) -> Result<GroupIter> {
    let order = qcount::group_order(shape, field.q() as u64)?;
    guard_check(|| format!("group for shape {shape} over GF({})", field.q()), &order, guard)?;
    let n = shape.total();
    let gl: Vec<Vec<Matrix>> = shape.blocks().iter().map(|&b| general_linear_elements(b, field)).collect();
    let mut upper = Vec::new();
    for r in 0..n {
        for c in 0..n {
            if shape.block_of(r) < shape.block_of(c) {
                upper.push((r, c));
            }
        }
    }
    let mut it = GroupIter {
        shape: shape.clone(),
        field: field.clone(),
        gl,
        diag: vec![0; shape.t()],
        counter: vec![0; upper.len()],
        upper,
        current: Matrix::zeros(field, n, n),
        started: false,
        done: false,
    };
    for b in 0..shape.t() {
        it.write_block(b);
    }
    Ok(it)
}

impl GroupIter {
    fn write_block(&mut self, b: usize) {
        let start = self.shape.offset(b);
        let block = &self.gl[b][self.diag[b]];
        for r in 0..block.rows() {
            for c in 0..block.cols() {
                self.current.set(start + r, start + c, block.get(r, c));
            }
        }
    }

    fn advance(&mut self) {
        let q = self.field.q();
        for i in (0..self.counter.len()).rev() {
            let (r, c) = self.upper[i];
            self.counter[i] += 1;
            if self.counter[i] < q {
                self.current.set(r, c, FieldElement(self.counter[i]));
                return;
            }
            self.counter[i] = 0;
            self.current.set(r, c, FieldElement::ZERO);
        }
        for b in (0..self.diag.len()).rev() {
            self.diag[b] += 1;
            if self.diag[b] < self.gl[b].len() {
                self.write_block(b);
                return;
            }
            self.diag[b] = 0;
            self.write_block(b);
        }
        self.done = true;
    }

    /// The next group element's matrix, without allocating.
    pub fn next_matrix(&mut self) -> Option<&Matrix> {
        if self.started {
            self.advance();
        }
        self.started = true;
        if self.done {
            None
        } else {
            Some(&self.current)
        }
    }
}

impl Iterator for GroupIter {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        let shape = self.shape.clone();
        self.next_matrix().map(|m| GroupElement { shape, mat: m.clone() })
    }
}

/// The orbit of `s` under the whole group together with the stabilizer of
/// `s`, from one pass over the group.
pub fn orbit_and_stabilizer(
    shape: &Shape,
    s: &Subspace,
    guard: u64,
) -> Result<(HashSet<Subspace>, Vec<GroupElement>)> {
    check_ambient(shape, s)?;
    let mut group = enumerate_group(shape, s.field(), guard)?;
    let mut orbit = HashSet::new();
    let mut stabilizer = Vec::new();
    let mut buf = Matrix::zeros(s.field(), s.dim(), shape.total());
    while let Some(m) = group.next_matrix() {
        if fixes(s, m, &mut buf) {
            stabilizer.push(GroupElement { shape: shape.clone(), mat: m.clone() });
            orbit.insert(s.clone());
        } else {
            orbit.insert(Subspace::from_matrix(&buf));
        }
    }
    Ok((orbit, stabilizer))
}

/// The stabilizer of `s`, by filtering the enumerated group.
pub fn stabilizer(shape: &Shape, s: &Subspace, guard: u64) -> Result<Vec<GroupElement>> {
    check_ambient(shape, s)?;
    let mut group = enumerate_group(shape, s.field(), guard)?;
    let mut out = Vec::new();
    let mut buf = Matrix::zeros(s.field(), s.dim(), shape.total());
    while let Some(m) = group.next_matrix() {
        if fixes(s, m, &mut buf) {
            out.push(GroupElement { shape: shape.clone(), mat: m.clone() });
        }
    }
    Ok(out)
}

/// A generating set for the group: nonidentity diagonal scalings and the
/// elementary transvections allowed by the block pattern.
pub fn generators(shape: &Shape, field: &FieldSpec) -> Vec<GroupElement> {
    let n = shape.total();
    let units: Vec<FieldElement> = field.elements().filter(|x| !x.is_zero()).collect();
    let mut out = Vec::new();
    for r in 0..n {
        for &a in &units {
            if a != FieldElement::ONE {
                let mut m = Matrix::identity(field, n);
                m.set(r, r, a);
                out.push(GroupElement { shape: shape.clone(), mat: m });
            }
        }
        for c in 0..n {
            if r == c || shape.block_of(r) > shape.block_of(c) {
                continue;
            }
            for &a in &units {
                let mut m = Matrix::identity(field, n);
                m.set(r, c, a);
                out.push(GroupElement { shape: shape.clone(), mat: m });
            }
        }
    }
    out
}

/// The orbit of `s` as the closure under [`generators`], sorted.
///
/// Costs one action per (member, generator) pair instead of a pass over the
/// whole group.
pub fn orbit_by_generators(shape: &Shape, s: &Subspace, guard: u64) -> Result<Vec<Subspace>> {
    check_ambient(shape, s)?;
    let gens = generators(shape, s.field());
    let mut seen = HashSet::from([s.clone()]);
    let mut frontier = vec![s.clone()];
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y = act(&x, g)?;
            if !seen.contains(&y) {
                if seen.len() as u64 >= guard {
                    return Err(Error::TooLarge {
                        what: format!("orbit in shape {shape}"),
                        size: format!("more than {guard}"),
                        guard,
                    });
                }
                seen.insert(y.clone());
                frontier.push(y);
            }
        }
    }
    let mut out: Vec<Subspace> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}
