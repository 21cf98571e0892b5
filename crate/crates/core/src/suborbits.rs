//! Orbits of the stabilizer `G_U` of the canonical subspace `U` on the set
//! of subspaces of the same type.
//!
//! For `t = 3` each subspace `Q` of type `k` gets a six-component label
//! computed from intersection dimensions with `U`. Two closed forms are
//! attached to these labels, one for the number of suborbits and one for the
//! length of each; both are evaluated here exactly as printed, including the
//! printed constraint system on labels. The brute-force oracle computes the
//! actual `G_U`-orbits for any `t`, and [`cross_validate`] compares the two.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::Subspace;
use crate::qcount::{self, gauss_unchecked as gauss, qpow, rank_count, Count, Shape, TypeVector};
use crate::spaces::{self, DEFAULT_GROUP_GUARD};

/// Default cap on the number of subspaces the oracle will partition.
pub const DEFAULT_SUBSPACE_GUARD: u64 = 100_000;

/// Size limits for the brute-force oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Guards {
    pub group: u64,
    pub subspace: u64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards { group: DEFAULT_GROUP_GUARD, subspace: DEFAULT_SUBSPACE_GUARD }
    }
}

/// The six intersection dimensions between `U` and `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RawDims {
    /// `dim(U ∩ Q)`
    pub meet: usize,
    /// first-block projections
    pub d11: usize,
    /// second-block projections of the `E_2` parts
    pub d22: usize,
    /// `E_3` parts
    pub d33: usize,
    /// projections onto the first two blocks
    pub d12: usize,
    /// `E_2` parts
    pub d23: usize,
}

/// The label `(i1, i2, i3, j3-i2-i3, j2-i1-i2, i2+j1-j2-j3)`.
///
/// The last three components can come out negative for subspaces the
/// printed constraints do not anticipate; they are kept as computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantTuple(pub [i64; 6]);

impl InvariantTuple {
    pub fn zero() -> Self {
        InvariantTuple([0; 6])
    }

    pub fn from_ij(i: [i64; 3], j: [i64; 3]) -> Self {
        let [i1, i2, i3] = i;
        let [j1, j2, j3] = j;
        InvariantTuple([i1, i2, i3, j3 - i2 - i3, j2 - i1 - i2, i2 + j1 - j2 - j3])
    }

    /// Inverts [`InvariantTuple::from_ij`].
    pub fn to_ij(&self) -> ([i64; 3], [i64; 3]) {
        let [a1, a2, a3, a4, a5, a6] = self.0;
        let (i1, i2, i3) = (a1, a2, a3);
        let j3 = a4 + i2 + i3;
        let j2 = a5 + i1 + i2;
        let j1 = a6 + j2 + j3 - i2;
        ([i1, i2, i3], [j1, j2, j3])
    }
}

impl fmt::Display for InvariantTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for InvariantTuple {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

fn require_three(shape: &Shape) -> Result<()> {
    if shape.t() != 3 {
        return Err(Error::RequiresThreeBlocks(shape.t()));
    }
    Ok(())
}

fn require_valid(shape: &Shape, k: &TypeVector) -> Result<()> {
    if !qcount::is_valid_type(shape, k)? {
        return Err(Error::InvalidType { shape: shape.blocks().to_vec(), ty: k.ks().to_vec() });
    }
    Ok(())
}

/// `(n1, n2, n3)` and `(k1, k2, k3)` as signed integers.
fn params(shape: &Shape, k: &TypeVector) -> ([i64; 3], [i64; 3]) {
    let n = shape.blocks();
    let ks = k.ks();
    ([n[0] as i64, n[1] as i64, n[2] as i64], [ks[0] as i64, ks[1] as i64, ks[2] as i64])
}

/// Intersection dimensions of `u` and `q` (both of one type, `t = 3`).
pub fn raw_dims(u: &Subspace, q: &Subspace, shape: &Shape) -> Result<RawDims> {
    require_three(shape)?;
    let (tu, tq) = (spaces::type_of(shape, u)?, spaces::type_of(shape, q)?);
    if tu != tq {
        return Err(Error::InvalidType { shape: shape.blocks().to_vec(), ty: tq.ks().to_vec() });
    }
    let field = u.field();
    let (o1, o2) = (shape.offset(1), shape.offset(2));
    let e2 = spaces::e_subspace(shape, 2, field)?;
    let e3 = spaces::e_subspace(shape, 3, field)?;
    let (u2, q2) = (u.intersect(&e2)?, q.intersect(&e2)?);
    let (u3, q3) = (u.intersect(&e3)?, q.intersect(&e3)?);
    Ok(RawDims {
        meet: u.intersect(q)?.dim(),
        d11: u.project(0, o1)?.intersect(&q.project(0, o1)?)?.dim(),
        d22: u2.project(o1, o2)?.intersect(&q2.project(o1, o2)?)?.dim(),
        d33: u3.intersect(&q3)?.dim(),
        d12: u.project(0, o2)?.intersect(&q.project(0, o2)?)?.dim(),
        d23: u2.intersect(&q2)?.dim(),
    })
}

/// The label of `q` relative to `u`, where both have type `k`.
pub fn invariant_tuple(u: &Subspace, q: &Subspace, shape: &Shape, k: &TypeVector) -> Result<InvariantTuple> {
    let d = raw_dims(u, q, shape)?;
    if spaces::type_of(shape, u)? != *k {
        return Err(Error::InvalidType { shape: shape.blocks().to_vec(), ty: k.ks().to_vec() });
    }
    let (_, [k1, k2, k3]) = params(shape, k);
    let i1 = (k1 - k2) - d.d11 as i64;
    let i2 = (k2 - k3) - d.d22 as i64;
    let i3 = k3 - d.d33 as i64;
    let j1 = k1 - d.meet as i64;
    let j2 = (k1 - k3) - d.d12 as i64;
    let j3 = k2 - d.d23 as i64;
    Ok(InvariantTuple::from_ij([i1, i2, i3], [j1, j2, j3]))
}

/// The printed six-line constraint system on labels.
pub fn is_valid_tuple_printed(shape: &Shape, k: &TypeVector, tuple: &InvariantTuple) -> Result<bool> {
    require_three(shape)?;
    let ([n1, n2, n3], [k1, k2, k3]) = params(shape, k);
    let [a1, a2, a3, a4, a5, a6] = tuple.0;
    let ([i1, i2, i3], [_, j2, j3]) = tuple.to_ij();
    let within = |x: i64, hi: i64| 0 <= x && x <= hi;
    Ok(within(a1, (k1 - k2).min(n1 + k2 - k1))
        && within(a2, (k2 - k3).min(n2 + k3 - k2))
        && within(a3, k3.min(n3 - k3))
        && within(a4, (k3 - i3).min(k2 - k3 - i2))
        && within(a5, (k2 - k3 - i2).min(k1 - k2 - i1).min(n2 + k3 - k2 - i2))
        && within(a6, (k1 - k2 + i2 - j2).min(n3 - k3 + i2 - j3)))
}

/// Walks the printed index ranges, calling `visit(i1, i2, i3, j3, j2, top)`
/// where `top` is the printed upper bound for the sixth component.
fn walk_printed(shape: &Shape, k: &TypeVector, mut visit: impl FnMut(i64, i64, i64, i64, i64, i64)) {
    let ([n1, n2, n3], [k1, k2, k3]) = params(shape, k);
    for i1 in 0..=(k1 - k2).min(n1 + k2 - k1) {
        for i2 in 0..=(k2 - k3).min(n2 + k3 - k2) {
            for i3 in 0..=k3.min(n3 - k3) {
                for j3 in i2 + i3..=(k3 + i2).min(k2 - k3 + i3) {
                    for j2 in i1 + i2..=(k2 - k3 + i1).min(k1 - k2 + i2).min(n2 + k3 - k2 + i1) {
                        let top = (k1 - k2 + i2 - j2).min(n3 - k3 + i2 - j3);
                        visit(i1, i2, i3, j3, j2, top);
                    }
                }
            }
        }
    }
}

/// The printed closed form for the number of suborbits.
///
/// The innermost summand `1 + min{...}` counts the admissible values of the
/// sixth label component, so it contributes nothing when negative.
pub fn suborbit_count_printed(shape: &Shape, k: &TypeVector, _q: u64) -> Result<Count> {
    require_three(shape)?;
    require_valid(shape, k)?;
    let mut total = 0u64;
    walk_printed(shape, k, |_, _, _, _, _, top| total += (1 + top).max(0) as u64);
    Ok(Count::from(total))
}

/// Every label admitted by the printed constraints, in lexicographic order.
pub fn printed_tuples(shape: &Shape, k: &TypeVector) -> Result<Vec<InvariantTuple>> {
    require_three(shape)?;
    require_valid(shape, k)?;
    let mut out = Vec::new();
    walk_printed(shape, k, |i1, i2, i3, j3, j2, top| {
        for a6 in 0..=top {
            let j1 = a6 + j2 + j3 - i2;
            out.push(InvariantTuple::from_ij([i1, i2, i3], [j1, j2, j3]));
        }
    });
    out.sort();
    Ok(out)
}

/// `q^e * factor`, where a zero factor absorbs any exponent and a negative
/// exponent on a nonzero factor is undefined.
fn scaled(q: u64, e: i64, factor: Count, what: &str) -> Result<Count> {
    if factor.is_zero() {
        return Ok(factor);
    }
    if e < 0 {
        return Err(Error::UndefinedFormula(format!("negative exponent {e} in {what}")));
    }
    Ok(qpow(q, e as u64) * factor)
}

/// The printed closed form for the length of the suborbit with label `tuple`.
pub fn suborbit_length_printed(shape: &Shape, k: &TypeVector, tuple: &InvariantTuple, q: u64) -> Result<Count> {
    require_three(shape)?;
    require_valid(shape, k)?;
    qcount::check_q(q)?;
    let ([n1, n2, n3], [k1, k2, k3]) = params(shape, k);
    let ([i1, i2, i3], [j1, j2, j3]) = tuple.to_ij();
    let n = |i: i64, m: i64, c: i64| rank_count(i, m, c, q);

    let lead_exp = (n2 + n3 - k2) * i1
        + (n3 + k1 - k2 - k3 - i1) * i2
        + (k1 - k3 - i1 - i2) * i3
        + i1 * i1
        + i2 * i2
        + i3 * i3;
    let gaussians = gauss(n1 + k2 - k1, i1, q)
        * gauss(k1 - k2, i1, q)
        * gauss(n2 + k3 - k2, i2, q)
        * gauss(k2 - k3, i2, q)
        * gauss(n3 - k3, i3, q)
        * gauss(k3, i3, q);
    let rank_b = n(j3 - i2 - i3, k2 - k3 - i2, n3 - k3 - i3);
    let rank_a = n(j2 - i1 - i2, k1 - k2 - i1, n2 + k3 - k2 - i2);

    let top = i2 + j1 - j2 - j3;
    let bottom = 0.max(2 * i2 + j1 - j2 - 2 * j3 + i3).max(2 * i2 + j1 - 2 * j2 - j3 + i1);
    let mut inner = Count::zero();
    for l in bottom..=top {
        let factor = n(l, k1 - k2 - j2 + i2, n3 - k3 - j3 + i2)
            * n(top - l, j2 - i1 - i2, n3 - k3 - j3 + i2 - l)
            * n(top - l, k1 - k2 - j2 + i2 - l, j3 - i2 - i3);
        let exp = (j2 + j3 - i1 - i3) * l + (j2 - i1 - i2) * (j3 - i2 - i3);
        inner = inner + scaled(q, exp, factor, "the inner sum")?;
    }
    scaled(q, lead_exp, gaussians * rank_b * rank_a * inner, "the leading power")
}

/// The `G_U`-orbits on the subspaces of type `k`.
#[derive(Clone, Debug)]
pub struct OracleOrbits {
    pub representative: Subspace,
    pub stabilizer_order: usize,
    /// Disjoint orbits covering every subspace of type `k`; members sorted,
    /// orbits ordered by their least member.
    pub orbits: Vec<Vec<Subspace>>,
}

impl OracleOrbits {
    pub fn total_members(&self) -> usize {
        self.orbits.iter().map(Vec::len).sum()
    }
}

/// Brute-force suborbits for any `t`: filter the stabilizer of `U` out of
/// the enumerated group, then apply all of it to each not-yet-covered member.
pub fn orbits_oracle(shape: &Shape, k: &TypeVector, field: &FieldSpec, guards: Guards) -> Result<OracleOrbits> {
    require_valid(shape, k)?;
    let q = field.q() as u64;
    let order = qcount::group_order(shape, q)?;
    let size = qcount::anzahl(shape, k, q)?;
    let fits = |c: &Count, g: u64| c.to_u64().is_some_and(|v| v <= g);
    if !fits(&order, guards.group) || !fits(&size, guards.subspace) {
        return Err(Error::TooLarge {
            what: format!(
                "oracle for shape {shape}, type {k} over GF({q}) (group order {order}, guard {}; subspaces {size}, guard {})",
                guards.group, guards.subspace
            ),
            size: format!("{order} x {size}"),
            guard: guards.group.min(guards.subspace),
        });
    }
    let u = spaces::orbit_representative(shape, k, field)?;
    let stab = spaces::stabilizer(shape, &u, guards.group)?;
    let mut members: Vec<Subspace> = spaces::enumerate_by_type(shape, k, field)?.collect();
    members.sort();
    let index: HashMap<&Subspace, usize> = members.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut orbit_of = vec![usize::MAX; members.len()];
    let mut orbits = Vec::new();
    for start in 0..members.len() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut orbit = Vec::new();
        for g in &stab {
            let image = spaces::act(&members[start], g)?;
            let idx = *index.get(&image).expect("the action preserves type");
            if orbit_of[idx] == usize::MAX {
                orbit_of[idx] = id;
                orbit.push(idx);
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit.into_iter().map(|i| members[i].clone()).collect());
    }
    Ok(OracleOrbits { representative: u, stabilizer_order: stab.len(), orbits })
}

/// Per-label comparison row.
#[derive(Clone, Debug, Serialize)]
pub struct TupleRecord {
    pub tuple: InvariantTuple,
    pub printed_valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub printed_length: Option<Count>,
    pub oracle_length: Count,
    pub member_count: Count,
    /// One member of the orbit, in matrix text form.
    pub example: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscrepancyKind {
    /// Printed suborbit count differs from the number of oracle orbits.
    SuborbitCount,
    /// A realized label violates the printed constraints.
    TupleOutsidePrintedConstraints,
    /// A printed-valid label whose printed length differs from the oracle.
    SuborbitLength,
    /// A label admitted by the printed constraints that no subspace realizes.
    PrintedTupleNotRealized,
}

#[derive(Clone, Debug, Serialize)]
pub struct Discrepancy {
    pub kind: DiscrepancyKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tuple: Option<InvariantTuple>,
    pub printed: Option<Count>,
    pub oracle: Option<Count>,
    pub note: String,
}

/// Printed formulas against the oracle for one `(shape, type, q)` case.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub shape: Shape,
    #[serde(rename = "type")]
    pub ty: TypeVector,
    pub q: u32,
    pub anzahl: Count,
    pub stabilizer_order: Count,
    pub records: Vec<TupleRecord>,
    pub printed_count: Count,
    pub oracle_count: Count,
    pub discrepancies: Vec<Discrepancy>,
}

impl OrbitReport {
    pub fn oracle_total(&self) -> Count {
        self.records.iter().map(|r| r.oracle_length.clone()).sum()
    }
}

/// Runs the oracle for `t = 3`, checks that labels separate orbits exactly,
/// and records every disagreement with the printed formulas.
///
/// A label shared by two orbits, or an orbit carrying two labels, is an
/// error; formula mismatches only land in `discrepancies`.
pub fn cross_validate(shape: &Shape, k: &TypeVector, field: &FieldSpec, guards: Guards) -> Result<OrbitReport> {
    require_three(shape)?;
    let q = field.q() as u64;
    let oracle = orbits_oracle(shape, k, field, guards)?;
    let u = &oracle.representative;
    let violation = |detail: String| Error::SeparationViolation {
        shape: shape.blocks().to_vec(),
        ty: k.ks().to_vec(),
        q: field.q(),
        detail,
    };

    let mut by_tuple: BTreeMap<InvariantTuple, &Vec<Subspace>> = BTreeMap::new();
    for orbit in &oracle.orbits {
        let tuple = invariant_tuple(u, &orbit[0], shape, k)?;
        for member in &orbit[1..] {
            let other = invariant_tuple(u, member, shape, k)?;
            if other != tuple {
                return Err(violation(format!("one orbit carries labels {tuple} and {other}")));
            }
        }
        if by_tuple.insert(tuple, orbit).is_some() {
            return Err(violation(format!("label {tuple} is shared by two orbits")));
        }
    }

    let mut records = Vec::new();
    let mut discrepancies = Vec::new();
    for (tuple, orbit) in &by_tuple {
        let printed_valid = is_valid_tuple_printed(shape, k, tuple)?;
        let printed_length = suborbit_length_printed(shape, k, tuple, q).ok();
        let oracle_length = Count::from(orbit.len());
        if !printed_valid {
            discrepancies.push(Discrepancy {
                kind: DiscrepancyKind::TupleOutsidePrintedConstraints,
                tuple: Some(*tuple),
                printed: printed_length.clone(),
                oracle: Some(oracle_length.clone()),
                note: format!("label {tuple} is realized by {} subspaces but fails the printed constraints", orbit.len()),
            });
        } else if printed_length.as_ref() != Some(&oracle_length) {
            discrepancies.push(Discrepancy {
                kind: DiscrepancyKind::SuborbitLength,
                tuple: Some(*tuple),
                printed: printed_length.clone(),
                oracle: Some(oracle_length.clone()),
                note: format!("printed length of suborbit {tuple} differs from the oracle"),
            });
        }
        records.push(TupleRecord {
            tuple: *tuple,
            printed_valid,
            printed_length,
            member_count: Count::from(orbit.len()),
            oracle_length,
            example: orbit[0].basis().to_text(),
        });
    }

    for tuple in printed_tuples(shape, k)? {
        if !by_tuple.contains_key(&tuple) {
            discrepancies.push(Discrepancy {
                kind: DiscrepancyKind::PrintedTupleNotRealized,
                tuple: Some(tuple),
                printed: suborbit_length_printed(shape, k, &tuple, q).ok(),
                oracle: Some(Count::zero()),
                note: format!("label {tuple} satisfies the printed constraints but no subspace realizes it"),
            });
        }
    }

    let printed_count = suborbit_count_printed(shape, k, q)?;
    let oracle_count = Count::from(oracle.orbits.len());
    if printed_count != oracle_count {
        discrepancies.insert(
            0,
            Discrepancy {
                kind: DiscrepancyKind::SuborbitCount,
                tuple: None,
                printed: Some(printed_count.clone()),
                oracle: Some(oracle_count.clone()),
                note: format!("printed suborbit count {printed_count}, oracle finds {oracle_count}"),
            },
        );
    }

    Ok(OrbitReport {
        shape: shape.clone(),
        ty: k.clone(),
        q: field.q(),
        anzahl: qcount::anzahl(shape, k, q)?,
        stabilizer_order: Count::from(oracle.stabilizer_order),
        records,
        printed_count,
        oracle_count,
        discrepancies,
    })
}
