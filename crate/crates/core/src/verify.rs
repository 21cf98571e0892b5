//! The formula-versus-enumeration harness.
//!
//! Every closed form in [`qcount`] is compared with a direct count over a
//! small grid of fields and shapes, and every `t = 3` case is run through
//! [`suborbits::cross_validate`]. Proven formulas and label separation are
//! hard checks; mismatches in the printed suborbit formulas are collected as
//! discrepancies and never fail the run.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{self, FieldSpec};
use crate::matrix::{self, Matrix, Subspace};
use crate::qcount::{self, Count, Shape, TypeVector};
use crate::spaces;
use crate::suborbits::{self, Discrepancy, Guards, InvariantTuple, OrbitReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub max_q: u64,
    pub max_total_dim: usize,
    pub max_t: usize,
    pub group_guard: u64,
    pub subspace_guard: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_q: 3,
            max_total_dim: 4,
            max_t: 3,
            group_guard: spaces::DEFAULT_GROUP_GUARD,
            subspace_guard: suborbits::DEFAULT_SUBSPACE_GUARD,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.group_guard == 0 || self.subspace_guard == 0 {
            return Err(Error::InvalidRange("guards must be positive".into()));
        }
        if self.max_t == 0 {
            return Err(Error::InvalidRange("max_t must be at least 1".into()));
        }
        Ok(())
    }

    /// Prime powers in `2..=max_q`.
    pub fn field_orders(&self) -> Vec<u64> {
        (2..=self.max_q).filter(|&q| field::factor_prime_power(q).is_ok()).collect()
    }

    /// Shapes with `1 <= t <= max_t` and `n_1 + ... + n_t <= max_total_dim`,
    /// by `t` then lexicographically. Empty blocks are allowed.
    pub fn shapes(&self) -> Vec<Shape> {
        let mut out = Vec::new();
        for t in 1..=self.max_t {
            let mut blocks = vec![0usize; t];
            loop {
                if blocks.iter().sum::<usize>() <= self.max_total_dim {
                    out.push(Shape::new(blocks.clone()).expect("t >= 1"));
                }
                let mut i = t;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    blocks[i] += 1;
                    if blocks[i] <= self.max_total_dim {
                        break;
                    }
                    blocks[i] = 0;
                    if i == 0 {
                        i = usize::MAX;
                        break;
                    }
                }
                if i == usize::MAX {
                    break;
                }
            }
        }
        out
    }

    fn guards(&self) -> Guards {
        Guards { group: self.group_guard, subspace: self.subspace_guard }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    RankCount,
    RowExtension,
    ColExtension,
    BlockRank,
    Anzahl,
    AnzahlTotal,
    Transitivity,
    Contained,
    Containing,
    DoubleCounting,
    Suborbits,
}

impl Check {
    fn name(self) -> &'static str {
        match self {
            Check::RankCount => "rank_count",
            Check::RowExtension => "row_extension",
            Check::ColExtension => "col_extension",
            Check::BlockRank => "block_rank",
            Check::Anzahl => "anzahl",
            Check::AnzahlTotal => "anzahl_total",
            Check::Transitivity => "transitivity",
            Check::Contained => "contained",
            Check::Containing => "containing",
            Check::DoubleCounting => "double_counting",
            Check::Suborbits => "suborbits",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One comparison. `formula` is the closed form, `observed` the direct count.
#[derive(Clone, Debug, Serialize)]
pub struct Case {
    pub check: Check,
    pub q: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape: Option<Shape>,
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    pub ty: Option<TypeVector>,
    pub subject: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<Count>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed: Option<Count>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suborbits: Option<OrbitReport>,
}

impl Case {
    fn new(check: Check, q: u64, subject: impl Into<String>) -> Self {
        Case {
            check,
            q: q as u32,
            shape: None,
            ty: None,
            subject: subject.into(),
            status: Status::Pass,
            formula: None,
            observed: None,
            note: None,
            suborbits: None,
        }
    }

    fn on(mut self, shape: &Shape) -> Self {
        self.shape = Some(shape.clone());
        self
    }

    fn typed(mut self, k: &TypeVector) -> Self {
        self.ty = Some(k.clone());
        self
    }

    /// Passes iff the two counts agree.
    fn compare(mut self, formula: Count, observed: Count) -> Self {
        if formula != observed {
            self.status = Status::Fail;
            self.note = Some(format!("formula gives {formula}, direct count gives {observed}"));
        }
        self.formula = Some(formula);
        self.observed = Some(observed);
        self
    }

    fn fail(mut self, note: impl Into<String>) -> Self {
        self.status = Status::Fail;
        self.note = Some(note.into());
        self
    }

    fn skip(mut self, note: impl Into<String>) -> Self {
        self.status = Status::Skipped;
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HardFailure {
    pub check: Check,
    pub q: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape: Option<Shape>,
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    pub ty: Option<TypeVector>,
    pub subject: String,
    pub message: String,
}

/// A printed-formula mismatch, tagged with its case.
#[derive(Clone, Debug, Serialize)]
pub struct CaseDiscrepancy {
    pub shape: Shape,
    #[serde(rename = "type")]
    pub ty: TypeVector,
    pub q: u32,
    #[serde(flatten)]
    pub discrepancy: Discrepancy,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub params: VerifyConfig,
    pub hard_failures: Vec<HardFailure>,
    pub discrepancies: Vec<CaseDiscrepancy>,
    pub cases: Vec<Case>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.hard_failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One row per case, hard failure and discrepancy.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let opt = |c: &Option<Count>| c.as_ref().map(|c| c.to_string()).unwrap_or_default();
        let shape = |s: &Option<Shape>| s.as_ref().map(|s| s.to_string()).unwrap_or_default();
        let ty = |k: &Option<TypeVector>| k.as_ref().map(|k| k.to_string()).unwrap_or_default();
        w.write_record(["section", "check", "q", "shape", "type", "subject", "status", "formula", "observed", "note"])
            .expect("in-memory write");
        for c in &self.cases {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Skipped => "skipped",
            };
            w.write_record([
                "case",
                c.check.name(),
                &c.q.to_string(),
                &shape(&c.shape),
                &ty(&c.ty),
                &c.subject,
                status,
                &opt(&c.formula),
                &opt(&c.observed),
                c.note.as_deref().unwrap_or(""),
            ])
            .expect("in-memory write");
        }
        for f in &self.hard_failures {
            w.write_record([
                "hard_failure",
                f.check.name(),
                &f.q.to_string(),
                &shape(&f.shape),
                &ty(&f.ty),
                &f.subject,
                "fail",
                "",
                "",
                &f.message,
            ])
            .expect("in-memory write");
        }
        for d in &self.discrepancies {
            let kind = serde_json::to_value(d.discrepancy.kind).expect("kind serializes");
            w.write_record([
                "discrepancy",
                kind.as_str().unwrap_or_default(),
                &d.q.to_string(),
                &d.shape.to_string(),
                &d.ty.to_string(),
                &d.discrepancy.tuple.map(|t| t.to_string()).unwrap_or_default(),
                "",
                &opt(&d.discrepancy.printed),
                &opt(&d.discrepancy.oracle),
                &d.discrepancy.note,
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

struct Runner {
    config: VerifyConfig,
    report: VerifyReport,
}

impl Runner {
    fn push(&mut self, case: Case) {
        if case.status == Status::Fail {
            self.report.hard_failures.push(HardFailure {
                check: case.check,
                q: case.q,
                shape: case.shape.clone(),
                ty: case.ty.clone(),
                subject: case.subject.clone(),
                message: case.note.clone().unwrap_or_default(),
            });
        }
        self.report.cases.push(case);
    }
}

/// Runs the whole grid. Errors only on an invalid configuration; guard
/// violations become skipped cases.
pub fn run(config: &VerifyConfig) -> Result<VerifyReport> {
    config.validate()?;
    let mut r = Runner {
        config: config.clone(),
        report: VerifyReport {
            params: config.clone(),
            hard_failures: Vec::new(),
            discrepancies: Vec::new(),
            cases: Vec::new(),
        },
    };
    let shapes = config.shapes();
    for q in config.field_orders() {
        let f = FieldSpec::from_order(q)?;
        rank_scans(&mut r, &f);
        if q == 2 {
            extension_scans(&mut r, &f);
            block_rank_scans(&mut r, &f);
        }
        for shape in &shapes {
            shape_checks(&mut r, shape, &f)?;
            if shape.t() == 3 {
                suborbit_checks(&mut r, shape, &f)?;
            }
        }
    }
    Ok(r.report)
}

/// Every `rows x cols` matrix over `field`, in code order.
fn all_matrices(field: &FieldSpec, rows: usize, cols: usize) -> impl Iterator<Item = Matrix> + '_ {
    let q = field.q() as u64;
    let len = rows * cols;
    (0..q.pow(len as u32)).map(move |mut code| {
        let mut codes = vec![0u32; len];
        for c in codes.iter_mut().rev() {
            *c = (code % q) as u32;
            code /= q;
        }
        Matrix::from_codes(field, rows, cols, &codes).expect("codes below q")
    })
}

fn tally(counts: &mut HashMap<usize, u64>, key: usize) {
    *counts.entry(key).or_default() += 1;
}

fn rank_scans(r: &mut Runner, f: &FieldSpec) {
    let q = f.q() as u64;
    let top = r.config.max_total_dim.min(3);
    for m in 0..=top {
        for n in 0..=top {
            let mut counts = HashMap::new();
            for a in all_matrices(f, m, n) {
                tally(&mut counts, a.rank());
            }
            for i in 0..=m.min(n) {
                let formula = qcount::count_rank_matrices(i as i64, m as i64, n as i64, q).expect("q >= 2");
                let observed = Count::from(counts.get(&i).copied().unwrap_or(0));
                r.push(Case::new(Check::RankCount, q, format!("i={i} m={m} n={n}")).compare(formula, observed));
            }
        }
    }
}

/// For each base matrix, the distribution of the rank after appending rows
/// (or columns); every base of a given rank must see the same distribution.
fn extension_scans(r: &mut Runner, f: &FieldSpec) {
    let q = f.q() as u64;
    let top = r.config.max_total_dim.min(3);
    for rows in [true, false] {
        let check = if rows { Check::RowExtension } else { Check::ColExtension };
        for m1 in 0..=top {
            for n in 0..=top {
                for m2 in 0..=top {
                    // by_base[t1][t2] = distinct observed counts
                    let mut by_base: HashMap<(usize, usize), Vec<u64>> = HashMap::new();
                    let extensions: Vec<Matrix> =
                        if rows { all_matrices(f, m2, n).collect() } else { all_matrices(f, n, m2).collect() };
                    for base in if rows { all_matrices(f, m1, n) } else { all_matrices(f, n, m1) } {
                        let t1 = base.rank();
                        let mut counts = HashMap::new();
                        for ext in &extensions {
                            let joined = if rows {
                                base.stack(ext).expect("same width")
                            } else {
                                base.transpose().stack(&ext.transpose()).expect("same height")
                            };
                            tally(&mut counts, joined.rank());
                        }
                        for t2 in t1..=t1 + m2 {
                            let seen = counts.get(&t2).copied().unwrap_or(0);
                            let slot = by_base.entry((t1, t2)).or_default();
                            if !slot.contains(&seen) {
                                slot.push(seen);
                            }
                        }
                    }
                    let mut keys: Vec<_> = by_base.keys().copied().collect();
                    keys.sort_unstable();
                    for (t1, t2) in keys {
                        let seen = &by_base[&(t1, t2)];
                        let (subject, formula) = if rows {
                            (
                                format!("t1={t1} t2={t2} m1={m1} m2={m2} n={n}"),
                                qcount::count_row_extension(t1, t2, m2, n, q),
                            )
                        } else {
                            (
                                format!("t1={t1} t2={t2} m={n} n1={m1} n2={m2}"),
                                qcount::count_col_extension(t1, t2, n, m2, q),
                            )
                        };
                        let formula = formula.expect("t1 <= t2");
                        let case = Case::new(check, q, subject);
                        let case = if seen.len() > 1 {
                            case.fail(format!("bases of rank {t1} disagree: {seen:?}"))
                        } else {
                            case.compare(formula, Count::from(seen[0]))
                        };
                        r.push(case);
                    }
                }
            }
        }
    }
}

fn block_rank_scans(r: &mut Runner, f: &FieldSpec) {
    let q = f.q() as u64;
    let top = r.config.max_total_dim.min(2);
    for m1 in 0..=top {
        for m2 in 0..=top {
            for n1 in 0..=top {
                for n2 in 0..=top {
                    let mut counts = HashMap::new();
                    for a in all_matrices(f, m1 + m2, n1 + n2) {
                        let bottom = a.transpose().columns(m1, m1 + m2).expect("in range").transpose();
                        let right = a.columns(n1, n1 + n2).expect("in range");
                        let alpha = bottom.rank();
                        if right.rank() == alpha {
                            tally(&mut counts, alpha);
                        }
                    }
                    for alpha in 0..=m2.min(n2) {
                        let formula = qcount::count_block_rank(m1, m2, n1, n2, alpha, q).expect("q >= 2");
                        let observed = Count::from(counts.get(&alpha).copied().unwrap_or(0));
                        let subject = format!("m1={m1} m2={m2} n1={n1} n2={n2} alpha={alpha}");
                        r.push(Case::new(Check::BlockRank, q, subject).compare(formula, observed));
                    }
                }
            }
        }
    }
}

fn subspace_total(shape: &Shape, q: u64) -> Count {
    let n = shape.total() as i64;
    (0..=n).map(|d| qcount::gauss(n, d, q).expect("q >= 2")).sum()
}

fn fits(c: &Count, guard: u64) -> bool {
    c.to_u64().is_some_and(|v| v <= guard)
}

fn shape_checks(r: &mut Runner, shape: &Shape, f: &FieldSpec) -> Result<()> {
    let q = f.q() as u64;
    let types = qcount::valid_types(shape);
    let total = subspace_total(shape, q);
    if !fits(&total, r.config.subspace_guard) {
        let note = format!("{total} subspaces exceed the subspace guard {}", r.config.subspace_guard);
        for check in [Check::Anzahl, Check::Transitivity, Check::Contained, Check::Containing] {
            r.push(Case::new(check, q, "all types").on(shape).skip(note.clone()));
        }
    } else {
        let all: Vec<Subspace> = matrix::all_subspaces(f, shape.total()).collect();
        let mut by_type: HashMap<TypeVector, Vec<usize>> = HashMap::new();
        for (i, s) in all.iter().enumerate() {
            by_type.entry(spaces::type_of(shape, s)?).or_default().push(i);
        }
        let stray: Vec<String> =
            by_type.keys().filter(|k| !types.contains(k)).map(|k| k.to_string()).collect();
        if !stray.is_empty() {
            r.push(Case::new(Check::Anzahl, q, "type range").on(shape).fail(format!("invalid types realized: {stray:?}")));
        }
        let reps: Vec<Subspace> =
            types.iter().map(|k| spaces::orbit_representative(shape, k, f)).collect::<Result<_>>()?;

        for (k, u) in types.iter().zip(&reps) {
            let members = by_type.get(k).map_or(0, Vec::len);
            let formula = qcount::anzahl(shape, k, q)?;
            r.push(Case::new(Check::Anzahl, q, "orbit size").on(shape).typed(k).compare(formula, Count::from(members)));

            let case = Case::new(Check::Transitivity, q, "orbit of the representative").on(shape).typed(k);
            let case = match spaces::orbit_by_generators(shape, u, r.config.subspace_guard) {
                Ok(orbit) => {
                    let mut expected: Vec<&Subspace> =
                        by_type.get(k).map(|v| v.iter().map(|&i| &all[i]).collect()).unwrap_or_default();
                    expected.sort();
                    if orbit.iter().eq(expected.iter().copied()) {
                        case.compare(Count::from(expected.len()), Count::from(orbit.len()))
                    } else {
                        case.fail(format!("orbit has {} members, the type has {}", orbit.len(), expected.len()))
                    }
                }
                Err(Error::TooLarge { .. }) => case.skip("orbit exceeds the subspace guard"),
                Err(e) => return Err(e),
            };
            r.push(case);
        }

        for (ki, k) in types.iter().enumerate() {
            for (li, l) in types.iter().enumerate() {
                let subject = format!("l={l}");
                let inside = all.iter().filter(|s| s.is_subspace_of(&reps[ki]).unwrap_or(false));
                let observed = inside.filter(|s| spaces::type_of(shape, s).ok().as_ref() == Some(l)).count();
                let formula = qcount::count_contained(shape, k, l, q)?;
                r.push(Case::new(Check::Contained, q, subject).on(shape).typed(k).compare(formula, Count::from(observed)));

                let observed = by_type
                    .get(k)
                    .map_or(0, |v| v.iter().filter(|&&i| reps[li].is_subspace_of(&all[i]).unwrap_or(false)).count());
                let formula = qcount::count_containing(shape, l, k, q)?;
                let subject = format!("l={l}");
                r.push(Case::new(Check::Containing, q, subject).on(shape).typed(k).compare(formula, Count::from(observed)));
            }
        }
    }

    let sum: Count = types.iter().map(|k| qcount::anzahl(shape, k, q)).collect::<Result<Vec<_>>>()?.into_iter().sum();
    r.push(Case::new(Check::AnzahlTotal, q, "sum over types").on(shape).compare(total, sum));

    for k in &types {
        for l in &types {
            let left = qcount::count_containing(shape, l, k, q)? * qcount::anzahl(shape, l, q)?;
            let right = qcount::count_contained(shape, k, l, q)? * qcount::anzahl(shape, k, q)?;
            r.push(Case::new(Check::DoubleCounting, q, format!("l={l}")).on(shape).typed(k).compare(left, right));
        }
    }
    Ok(())
}

fn suborbit_checks(r: &mut Runner, shape: &Shape, f: &FieldSpec) -> Result<()> {
    let q = f.q() as u64;
    for k in qcount::valid_types(shape) {
        let case = Case::new(Check::Suborbits, q, "cross-validation").on(shape).typed(&k);
        let report = match suborbits::cross_validate(shape, &k, f, r.config.guards()) {
            Ok(report) => report,
            Err(Error::TooLarge { what, .. }) => {
                r.push(case.skip(format!("guard exceeded: {what}")));
                continue;
            }
            Err(e @ Error::SeparationViolation { .. }) => {
                r.push(case.fail(e.to_string()));
                continue;
            }
            Err(e) => return Err(e),
        };
        let u = spaces::orbit_representative(shape, &k, f)?;
        let mut problems = Vec::new();
        if report.oracle_total() != report.anzahl {
            problems.push(format!("orbit sizes sum to {}, not {}", report.oracle_total(), report.anzahl));
        }
        for rec in &report.records {
            let stab = report.stabilizer_order.value();
            if stab % rec.oracle_length.value() != num_traits::Zero::zero() {
                problems.push(format!("orbit {} of size {} does not divide {stab}", rec.tuple, rec.oracle_length));
            }
        }
        match report.records.iter().find(|rec| rec.tuple == InvariantTuple::zero()) {
            Some(rec) => {
                if rec.member_count != Count::one() || rec.example != u.basis().to_text() {
                    problems.push("the zero label does not single out the representative".into());
                }
                if rec.printed_length != Some(Count::one()) {
                    problems.push("printed length of the zero label is not 1".into());
                }
            }
            None => problems.push("no orbit carries the zero label".into()),
        }
        for d in &report.discrepancies {
            r.report.discrepancies.push(CaseDiscrepancy {
                shape: shape.clone(),
                ty: k.clone(),
                q: f.q(),
                discrepancy: d.clone(),
            });
        }
        let mut case = Case { formula: Some(report.printed_count.clone()), observed: Some(report.oracle_count.clone()), ..case };
        case.note = Some(format!(
            "{} orbits, {} discrepancies; printed count vs oracle count is a soft check",
            report.oracle_count,
            report.discrepancies.len()
        ));
        case.suborbits = Some(report);
        if !problems.is_empty() {
            case = case.fail(problems.join("; "));
        }
        r.push(case);
    }
    Ok(())
}
