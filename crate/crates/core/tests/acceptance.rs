//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Every comparison is exact.

#![allow(clippy::needless_range_loop)]

use std::collections::HashMap;
use std::process::ExitCode;

use tsingular::qcount::{self, Count, Shape, TypeVector};
use tsingular::suborbits::{self, DiscrepancyKind, Guards, InvariantTuple};
use tsingular::verify::{self, Check, VerifyConfig, VerifyReport};
use tsingular::{matrix, spaces, FieldSpec, Subspace};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gf(q: u64) -> FieldSpec {
    FieldSpec::from_order(q).unwrap()
}

fn shapes(max_t: usize, max_total: usize) -> Vec<Shape> {
    VerifyConfig { max_t, max_total_dim: max_total, ..VerifyConfig::default() }.shapes()
}

fn c(v: u64) -> Count {
    Count::from(v)
}

/// Rank over the prime field GF(p) by plain elimination on residues.
fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_multiple_of(p)) else { continue };
        rows.swap(rank, pivot);
        let inv = (1..p).find(|x| x * rows[rank][col] % p == 1).unwrap();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_multiple_of(p) {
                let factor = rows[r][col] * inv % p;
                for j in 0..cols {
                    rows[r][j] = (rows[r][j] + p * p - factor * rows[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// The `code`-th `rows x cols` matrix over GF(p), row-major, last entry fastest.
fn matrix_from_code(mut code: u64, rows: usize, cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m = vec![vec![0; cols]; rows];
    for r in (0..rows).rev() {
        for j in (0..cols).rev() {
            m[r][j] = code % p;
            code /= p;
        }
    }
    m
}

fn all_prime_matrices(rows: usize, cols: usize, p: u64) -> impl Iterator<Item = Vec<Vec<u64>>> {
    (0..p.pow((rows * cols) as u32)).map(move |code| matrix_from_code(code, rows, cols, p))
}

fn criterion_1() -> Outcome {
    let mut cases = 0;
    for q in [2u64, 3] {
        let f = gf(q);
        for shape in shapes(3, 4) {
            let mut by_type: HashMap<TypeVector, u64> = HashMap::new();
            for s in matrix::all_subspaces(&f, shape.total()) {
                *by_type.entry(spaces::type_of(&shape, &s).unwrap()).or_default() += 1;
            }
            let mut sum = Count::zero();
            for k in qcount::valid_types(&shape) {
                let formula = qcount::anzahl(&shape, &k, q).unwrap();
                let enumerated = spaces::enumerate_by_type(&shape, &k, &f).unwrap().count() as u64;
                let filtered = by_type.get(&k).copied().unwrap_or(0);
                ensure(formula == c(enumerated) && enumerated == filtered, || {
                    format!("shape {shape} type {k} q {q}: formula {formula}, stream {enumerated}, scan {filtered}")
                })?;
                sum = sum + formula;
                cases += 1;
            }
            let n = shape.total() as i64;
            let total: Count = (0..=n).map(|d| qcount::gauss(n, d, q).unwrap()).sum();
            ensure(sum == total, || format!("shape {shape} q {q}: sum of anzahl {sum} vs {total}"))?;
        }
    }
    Ok(format!("{cases} (shape, type, q) cases match enumeration; type sums match subspace totals"))
}

fn criterion_2() -> Outcome {
    let mut pairs = 0;
    for q in [2u64, 3] {
        let f = gf(q);
        for shape in shapes(3, 4) {
            let types = qcount::valid_types(&shape);
            let members: HashMap<&TypeVector, Vec<Subspace>> =
                types.iter().map(|k| (k, spaces::enumerate_by_type(&shape, k, &f).unwrap().collect())).collect();
            for k in &types {
                let fixed_k = spaces::orbit_representative(&shape, k, &f).unwrap();
                for l in &types {
                    if !qcount::is_valid_type_pair(&shape, k, l).unwrap() {
                        continue;
                    }
                    let fixed_l = spaces::orbit_representative(&shape, l, &f).unwrap();
                    let inside = members[l].iter().filter(|s| s.is_subspace_of(&fixed_k).unwrap()).count() as u64;
                    let over = members[k].iter().filter(|s| fixed_l.is_subspace_of(s).unwrap()).count() as u64;
                    let contained = qcount::count_contained(&shape, k, l, q).unwrap();
                    let containing = qcount::count_containing(&shape, l, k, q).unwrap();
                    ensure(contained == c(inside), || {
                        format!("shape {shape} q {q} k {k} l {l}: contained {contained} vs {inside}")
                    })?;
                    ensure(containing == c(over), || {
                        format!("shape {shape} q {q} k {k} l {l}: containing {containing} vs {over}")
                    })?;
                    let left = containing * qcount::anzahl(&shape, l, q).unwrap();
                    let right = contained * qcount::anzahl(&shape, k, q).unwrap();
                    ensure(left == right, || format!("shape {shape} q {q} k {k} l {l}: {left} vs {right}"))?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} (l, k) pairs: contained, containing and double counting exact"))
}

fn criterion_3() -> Outcome {
    let mut checks = 0;
    for p in [2u64, 3] {
        for m in 0..=3 {
            for n in 0..=3 {
                let mut tally = [0u64; 4];
                for a in all_prime_matrices(m, n, p) {
                    tally[rank_mod_p(a, p)] += 1;
                }
                for i in 0..=3usize {
                    let formula = qcount::count_rank_matrices(i as i64, m as i64, n as i64, p).unwrap();
                    ensure(formula == c(tally[i]), || format!("N({i};{m}x{n}) q {p}: {formula} vs {}", tally[i]))?;
                    checks += 1;
                }
            }
        }
    }

    let p = 2u64;
    for m1 in 0..=3usize {
        for m2 in 0..=3usize {
            for n in 0..=3usize {
                let exts: Vec<_> = all_prime_matrices(m2, n, p).collect();
                for base in all_prime_matrices(m1, n, p) {
                    let t1 = rank_mod_p(base.clone(), p);
                    let mut tally = [0u64; 7];
                    for ext in &exts {
                        let mut stacked = base.clone();
                        stacked.extend(ext.iter().cloned());
                        tally[rank_mod_p(stacked, p)] += 1;
                    }
                    for t2 in t1..=t1 + m2 {
                        let formula = qcount::count_row_extension(t1, t2, m2, n, p).unwrap();
                        ensure(formula == c(tally[t2]), || {
                            format!("row extension t1 {t1} t2 {t2} m2 {m2} n {n}: {formula} vs {}", tally[t2])
                        })?;
                        checks += 1;
                    }
                }
            }
        }
    }
    for m in 0..=3usize {
        for n1 in 0..=3usize {
            for n2 in 0..=3usize {
                let exts: Vec<_> = all_prime_matrices(m, n2, p).collect();
                for base in all_prime_matrices(m, n1, p) {
                    let t1 = rank_mod_p(base.clone(), p);
                    let mut tally = [0u64; 7];
                    for ext in &exts {
                        let joined: Vec<Vec<u64>> =
                            base.iter().zip(ext).map(|(a, b)| a.iter().chain(b).copied().collect()).collect();
                        tally[rank_mod_p(joined, p)] += 1;
                    }
                    for t2 in t1..=t1 + n2 {
                        let formula = qcount::count_col_extension(t1, t2, m, n2, p).unwrap();
                        ensure(formula == c(tally[t2]), || {
                            format!("column extension t1 {t1} t2 {t2} m {m} n2 {n2}: {formula} vs {}", tally[t2])
                        })?;
                        checks += 1;
                    }
                }
            }
        }
    }

    for m1 in 0..=2usize {
        for m2 in 0..=2usize {
            for n1 in 0..=2usize {
                for n2 in 0..=2usize {
                    let mut tally = [0u64; 3];
                    for a in all_prime_matrices(m1 + m2, n1 + n2, p) {
                        let bottom: Vec<Vec<u64>> = a[m1..].to_vec();
                        let right: Vec<Vec<u64>> = a.iter().map(|row| row[n1..].to_vec()).collect();
                        let alpha = rank_mod_p(bottom, p);
                        if rank_mod_p(right, p) == alpha {
                            tally[alpha] += 1;
                        }
                    }
                    for alpha in 0..=m2.min(n2) {
                        let formula = qcount::count_block_rank(m1, m2, n1, n2, alpha, p).unwrap();
                        ensure(formula == c(tally[alpha]), || {
                            format!("block rank {m1},{m2},{n1},{n2} alpha {alpha}: {formula} vs {}", tally[alpha])
                        })?;
                        checks += 1;
                    }
                }
            }
        }
    }
    let pinned = (
        qcount::count_block_rank(1, 1, 1, 1, 0, 2).unwrap(),
        qcount::count_block_rank(1, 1, 1, 1, 1, 2).unwrap(),
    );
    ensure(pinned == (c(2), c(10)), || format!("1,1,1,1 block counts {pinned:?}"))?;
    Ok(format!("{checks} rank, extension and block-rank counts match mod-p scans"))
}

fn separation_grid() -> Vec<(u64, Shape)> {
    let s = |b: &[usize]| Shape::new(b.to_vec()).unwrap();
    vec![(2, s(&[1, 1, 1])), (2, s(&[2, 1, 1])), (2, s(&[1, 2, 1])), (2, s(&[1, 1, 2])), (3, s(&[1, 1, 1]))]
}

fn criterion_4() -> Outcome {
    let mut members = 0;
    for (q, shape) in separation_grid() {
        let f = gf(q);
        for k in qcount::valid_types(&shape) {
            let oracle = suborbits::orbits_oracle(&shape, &k, &f, Guards::default()).unwrap();
            let u = &oracle.representative;
            let mut label_of = Vec::new();
            for (id, orbit) in oracle.orbits.iter().enumerate() {
                for s in orbit {
                    label_of.push((id, suborbits::invariant_tuple(u, s, &shape, &k).unwrap()));
                }
            }
            for a in &label_of {
                for b in &label_of {
                    ensure((a.0 == b.0) == (a.1 == b.1), || {
                        format!("shape {shape} type {k} q {q}: orbits {} and {} vs labels {} and {}", a.0, b.0, a.1, b.1)
                    })?;
                }
            }
            suborbits::cross_validate(&shape, &k, &f, Guards::default()).map_err(|e| e.to_string())?;
            members += label_of.len();
        }
    }
    Ok(format!("labels coincide with stabilizer orbits on all {members} members of the grid"))
}

fn criterion_5(report: &VerifyReport) -> Outcome {
    let mut runs = 0;
    for (q, shape) in separation_grid() {
        let f = gf(q);
        for k in qcount::valid_types(&shape) {
            let oracle = suborbits::orbits_oracle(&shape, &k, &f, Guards::default()).unwrap();
            let anzahl = qcount::anzahl(&shape, &k, q).unwrap();
            ensure(Count::from(oracle.total_members()) == anzahl, || format!("shape {shape} type {k} q {q}"))?;
            runs += 1;
        }
    }
    for case in report.cases.iter().filter(|c| c.check == Check::Suborbits) {
        if let Some(r) = &case.suborbits {
            ensure(r.oracle_total() == r.anzahl, || format!("shape {} type {} q {}", r.shape, r.ty, r.q))?;
            runs += 1;
        }
    }
    Ok(format!("orbit sizes sum to anzahl in {runs} oracle runs"))
}

fn criterion_6(report: &VerifyReport) -> Outcome {
    let shape = Shape::new(vec![1, 1, 1]).unwrap();
    let k = TypeVector::new(vec![1, 0, 0]);
    ensure(suborbits::suborbit_count_printed(&shape, &k, 2).unwrap() == c(2), || "printed count".into())?;
    let found = report.discrepancies.iter().any(|d| {
        d.shape == shape
            && d.ty == k
            && d.q == 2
            && d.discrepancy.kind == DiscrepancyKind::SuborbitCount
            && d.discrepancy.printed == Some(c(2))
            && d.discrepancy.oracle == Some(c(3))
    });
    ensure(found, || "the (1,1,1)/(1,0,0)/q=2 count discrepancy is missing from the report".into())?;
    let case = report
        .cases
        .iter()
        .find(|x| x.check == Check::Suborbits && x.q == 2 && x.shape.as_ref() == Some(&shape) && x.ty.as_ref() == Some(&k))
        .and_then(|x| x.suborbits.as_ref())
        .ok_or("case missing")?;
    let mut sizes: Vec<Count> = case.records.iter().map(|r| r.oracle_length.clone()).collect();
    sizes.sort();
    ensure(sizes == [c(1), c(1), c(2)], || format!("orbit sizes {sizes:?}"))?;
    let odd = InvariantTuple([0, 0, 0, 0, 1, 0]);
    ensure(!suborbits::is_valid_tuple_printed(&shape, &k, &odd).unwrap(), || "label passes the printed bounds".into())?;
    ensure(case.records.iter().any(|r| r.tuple == odd), || "label not realized".into())?;

    let mut audited = 0;
    for case in report.cases.iter().filter_map(|x| x.suborbits.as_ref()) {
        for rec in case.records.iter().filter(|r| r.printed_valid) {
            if rec.printed_length.as_ref() != Some(&rec.oracle_length) {
                let listed = report.discrepancies.iter().any(|d| {
                    d.shape == case.shape
                        && d.ty == case.ty
                        && d.q == case.q
                        && d.discrepancy.tuple == Some(rec.tuple)
                        && d.discrepancy.kind == DiscrepancyKind::SuborbitLength
                });
                ensure(listed, || format!("silent length mismatch at {} {} {} {}", case.shape, case.ty, case.q, rec.tuple))?;
            }
            audited += 1;
        }
        let printed = suborbits::suborbit_count_printed(&case.shape, &case.ty, case.q as u64).unwrap();
        if printed != case.oracle_count {
            let listed = report.discrepancies.iter().any(|d| {
                d.shape == case.shape && d.ty == case.ty && d.q == case.q && d.discrepancy.kind == DiscrepancyKind::SuborbitCount
            });
            ensure(listed, || format!("silent count mismatch at {} {} {}", case.shape, case.ty, case.q))?;
        }
    }
    Ok(format!(
        "documented case reproduced (printed 2, oracle 3, sizes 1,1,2); {audited} printed-valid labels audited, {} discrepancies listed",
        report.discrepancies.len()
    ))
}

fn criterion_7(report: &VerifyReport) -> Outcome {
    let mut cases = 0;
    for (q, shape) in separation_grid() {
        let f = gf(q);
        for k in qcount::valid_types(&shape) {
            let len = suborbits::suborbit_length_printed(&shape, &k, &InvariantTuple::zero(), q).unwrap();
            ensure(len == c(1), || format!("printed zero length {len} at {shape} {k} {q}"))?;
            let oracle = suborbits::orbits_oracle(&shape, &k, &f, Guards::default()).unwrap();
            let u = &oracle.representative;
            let zero: Vec<&Vec<Subspace>> = oracle
                .orbits
                .iter()
                .filter(|o| suborbits::invariant_tuple(u, &o[0], &shape, &k).unwrap() == InvariantTuple::zero())
                .collect();
            ensure(zero.len() == 1 && zero[0].as_slice() == [u.clone()], || format!("zero orbit at {shape} {k} {q}"))?;
            cases += 1;
        }
    }
    for r in report.cases.iter().filter_map(|x| x.suborbits.as_ref()) {
        let rec = r.records.iter().find(|x| x.tuple == InvariantTuple::zero()).ok_or("no zero label")?;
        ensure(rec.oracle_length == c(1) && rec.printed_length == Some(c(1)), || {
            format!("zero label at {} {} {}", r.shape, r.ty, r.q)
        })?;
        cases += 1;
    }
    Ok(format!("zero label has printed and oracle length 1 and orbit {{U}} in {cases} cases"))
}

fn criterion_8(first: &str, second: &str) -> Outcome {
    ensure(first == second, || "two runs differ".into())?;
    Ok(format!("two default runs byte-identical ({} bytes)", first.len()))
}

fn criterion_9() -> Outcome {
    let mut checks = 0;
    for q in [2u64, 3, 4, 5] {
        for n in 0..=12i64 {
            for k in 0..=n {
                let g = qcount::gauss(n, k, q).unwrap();
                ensure(g == qcount::gauss(n, n - k, q).unwrap(), || format!("symmetry n {n} k {k} q {q}"))?;
                if n > 0 && k > 0 && k < n {
                    let qk = Count::from(q.pow(k as u32));
                    let pascal = qcount::gauss(n - 1, k - 1, q).unwrap() + qk * qcount::gauss(n - 1, k, q).unwrap();
                    ensure(g == pascal, || format!("q-Pascal n {n} k {k} q {q}"))?;
                }
                checks += 1;
            }
        }
    }
    for q in [2u64, 3] {
        for m in 0..=4i64 {
            for n in 0..=4i64 {
                let sum: Count = (0..=m.min(n)).map(|i| qcount::count_rank_matrices(i, m, n, q).unwrap()).sum();
                let total = Count::from(q).value().pow((m * n) as u32);
                ensure(sum.value() == &total, || format!("rank sum m {m} n {n} q {q}"))?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} symmetry, q-Pascal and rank-sum identities hold"))
}

fn main() -> ExitCode {
    let config = VerifyConfig::default();
    let first = verify::run(&config).expect("default config is valid");
    let first_json = first.to_json();
    let second_json = verify::run(&config).expect("default config is valid").to_json();

    let results: Vec<(&str, Outcome)> = vec![
        ("1 anzahl formula", criterion_1()),
        ("2 contained/containing", criterion_2()),
        ("3 rank counts", criterion_3()),
        ("4 label separation", criterion_4()),
        ("5 partition identity", criterion_5(&first)),
        ("6 suborbit formula audit", criterion_6(&first)),
        ("7 zero cases", criterion_7(&first)),
        ("8 determinism", criterion_8(&first_json, &second_json)),
        ("9 q-analog identities", criterion_9()),
    ];
    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!(
        "verify: {} cases, {} hard failures, {} discrepancies",
        first.cases.len(),
        first.hard_failures.len(),
        first.discrepancies.len()
    );
    if failed > 0 || !first.passed() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
