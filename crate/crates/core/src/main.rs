use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tsingular::error::{Error, Result};
use tsingular::qcount::{self, Count, Shape, TypeVector};
use tsingular::suborbits::{self, Guards, InvariantTuple};
use tsingular::verify::{self, VerifyConfig};
use tsingular::{spaces, FieldSpec, Matrix, Subspace};

#[derive(Parser)]
#[command(name = "tsingular", version, about = "Counting and orbit tools for t-singular linear spaces over GF(q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one closed-form count.
    Count {
        #[command(subcommand)]
        formula: Formula,
    },
    /// Print every subspace of a type, one matrix block per subspace.
    Enumerate {
        #[command(flatten)]
        case: CaseArgs,
    },
    /// Print the type of the row space of a matrix read from a file.
    Typeof {
        #[arg(long)]
        shape: Shape,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        matrix_file: PathBuf,
    },
    /// Print the canonical representative of a type.
    Canonical {
        #[command(flatten)]
        case: CaseArgs,
    },
    /// Suborbits of the stabilizer of the canonical representative.
    Suborbits {
        #[arg(value_enum)]
        mode: SuborbitMode,
        #[command(flatten)]
        case: CaseArgs,
        /// Override both the group and the subspace guard.
        #[arg(long)]
        guard: Option<u64>,
    },
    /// Check every formula against enumeration over a grid of cases.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    q: u64,
    /// Defining polynomial coefficients c0,c1,...,ce (monic, irreducible).
    #[arg(long)]
    modulus: Option<String>,
}

impl FieldArgs {
    fn field(&self) -> Result<FieldSpec> {
        match &self.modulus {
            None => FieldSpec::from_order(self.q),
            Some(text) => {
                let coeffs = text
                    .split(',')
                    .map(|c| c.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad coefficient `{c}`"))))
                    .collect::<Result<Vec<_>>>()?;
                FieldSpec::from_order_with_modulus(self.q, coeffs)
            }
        }
    }
}

#[derive(Args)]
struct CaseArgs {
    #[arg(long)]
    shape: Shape,
    #[arg(long = "type")]
    ty: TypeVector,
    #[command(flatten)]
    field: FieldArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuborbitMode {
    /// The printed count and the length of every printed label.
    Formula,
    /// The brute-force orbits.
    Oracle,
    /// Both, compared.
    Verify,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 3)]
    max_q: u64,
    #[arg(long, default_value_t = 4)]
    max_total_dim: usize,
    #[arg(long, default_value_t = 3)]
    max_t: usize,
    #[arg(long, default_value_t = spaces::DEFAULT_GROUP_GUARD)]
    group_guard: u64,
    #[arg(long, default_value_t = suborbits::DEFAULT_SUBSPACE_GUARD)]
    subspace_guard: u64,
    /// Override both guards.
    #[arg(long)]
    guard: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Formula {
    /// Gaussian binomial coefficient [n choose k]_q.
    Gauss {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        q: u64,
    },
    /// m x n matrices of rank i.
    RankMatrices {
        #[arg(long)]
        i: i64,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        q: u64,
    },
    /// m-subspaces of GF(q)^n meeting a fixed m-subspace in dimension m - i.
    Intersecting {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        q: u64,
    },
    /// Row blocks completing a fixed rank-t1 matrix to rank t2.
    RowExtension {
        #[arg(long)]
        t1: usize,
        #[arg(long)]
        t2: usize,
        #[arg(long)]
        m2: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
    },
    /// Column blocks completing a fixed rank-t1 matrix to rank t2.
    ColExtension {
        #[arg(long)]
        t1: usize,
        #[arg(long)]
        t2: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n2: usize,
        #[arg(long)]
        q: u64,
    },
    /// 2 x 2 block matrices with rank (C D) = rank (B over D) = alpha.
    BlockRank {
        #[arg(long)]
        m1: usize,
        #[arg(long)]
        m2: usize,
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        q: u64,
    },
    /// Order of the block upper-triangular group.
    GroupOrder {
        #[arg(long)]
        shape: Shape,
        #[arg(long)]
        q: u64,
    },
    /// Number of subspaces of a type.
    Anzahl {
        #[arg(long)]
        shape: Shape,
        #[arg(long = "type")]
        ty: TypeVector,
        #[arg(long)]
        q: u64,
    },
    /// Type-l subspaces inside a fixed type-k subspace.
    Contained {
        #[arg(long)]
        shape: Shape,
        #[arg(long = "type")]
        ty: TypeVector,
        #[arg(long)]
        sub_type: TypeVector,
        #[arg(long)]
        q: u64,
    },
    /// Type-k subspaces containing a fixed type-l subspace.
    Containing {
        #[arg(long)]
        shape: Shape,
        #[arg(long = "type")]
        ty: TypeVector,
        #[arg(long)]
        sub_type: TypeVector,
        #[arg(long)]
        q: u64,
    },
    /// Printed suborbit count (three blocks).
    SuborbitCount {
        #[arg(long)]
        shape: Shape,
        #[arg(long = "type")]
        ty: TypeVector,
        #[arg(long)]
        q: u64,
    },
    /// Printed suborbit length for a label a1,...,a6 (three blocks).
    SuborbitLength {
        #[arg(long)]
        shape: Shape,
        #[arg(long = "type")]
        ty: TypeVector,
        #[arg(long)]
        tuple: String,
        #[arg(long)]
        q: u64,
    },
}

/// Domain errors map to exit code 2 like usage errors; hard verification
/// failures map to 1.
enum Failure {
    Usage(Error),
    Io(io::Error),
    Hard(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Hard(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> std::result::Result<(), Failure> {
    match command {
        Command::Count { formula } => {
            let (name, params, value) = count(formula)?;
            let out = json!({ "formula": name, "params": params, "value": value.to_string() });
            println!("{out}");
        }
        Command::Enumerate { case } => {
            let field = case.field.field()?;
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            for (i, s) in spaces::enumerate_by_type(&case.shape, &case.ty, &field)?.enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                writeln!(out, "{}", s.basis().to_text())?;
            }
            out.flush()?;
        }
        Command::Typeof { shape, field, matrix_file } => {
            let field = field.field()?;
            let text = fs::read_to_string(&matrix_file)?;
            let m = Matrix::parse_text(&field, shape.total(), &text)?;
            println!("{}", spaces::type_of(&shape, &Subspace::from_matrix(&m))?);
        }
        Command::Canonical { case } => {
            let field = case.field.field()?;
            let u = spaces::orbit_representative(&case.shape, &case.ty, &field)?;
            println!("{}", u.basis().to_text());
        }
        Command::Suborbits { mode, case, guard } => {
            let field = case.field.field()?;
            let guards = guard.map_or_else(Guards::default, |g| Guards { group: g, subspace: g });
            suborbit_command(mode, &case.shape, &case.ty, &field, guards)?;
        }
        Command::Verify(args) => verify_command(args)?,
    }
    Ok(())
}

fn count(formula: Formula) -> Result<(&'static str, Value, Count)> {
    Ok(match formula {
        Formula::Gauss { n, k, q } => ("gauss", json!({ "n": n, "k": k, "q": q }), qcount::gauss(n, k, q)?),
        Formula::RankMatrices { i, m, n, q } => {
            ("rank-matrices", json!({ "i": i, "m": m, "n": n, "q": q }), qcount::count_rank_matrices(i, m, n, q)?)
        }
        Formula::Intersecting { m, n, i, q } => (
            "intersecting",
            json!({ "m": m, "n": n, "i": i, "q": q }),
            qcount::count_intersecting_subspaces(m, n, i, q)?,
        ),
        Formula::RowExtension { t1, t2, m2, n, q } => (
            "row-extension",
            json!({ "t1": t1, "t2": t2, "m2": m2, "n": n, "q": q }),
            qcount::count_row_extension(t1, t2, m2, n, q)?,
        ),
        Formula::ColExtension { t1, t2, m, n2, q } => (
            "col-extension",
            json!({ "t1": t1, "t2": t2, "m": m, "n2": n2, "q": q }),
            qcount::count_col_extension(t1, t2, m, n2, q)?,
        ),
        Formula::BlockRank { m1, m2, n1, n2, alpha, q } => (
            "block-rank",
            json!({ "m1": m1, "m2": m2, "n1": n1, "n2": n2, "alpha": alpha, "q": q }),
            qcount::count_block_rank(m1, m2, n1, n2, alpha, q)?,
        ),
        Formula::GroupOrder { shape, q } => {
            ("group-order", json!({ "shape": shape.to_string(), "q": q }), qcount::group_order(&shape, q)?)
        }
        Formula::Anzahl { shape, ty, q } => {
            require_valid(&shape, &ty)?;
            let params = json!({ "shape": shape.to_string(), "type": ty.to_string(), "q": q });
            ("anzahl", params, qcount::anzahl(&shape, &ty, q)?)
        }
        Formula::Contained { shape, ty, sub_type, q } => {
            require_valid(&shape, &ty)?;
            let params =
                json!({ "shape": shape.to_string(), "type": ty.to_string(), "sub_type": sub_type.to_string(), "q": q });
            ("contained", params, qcount::count_contained(&shape, &ty, &sub_type, q)?)
        }
        Formula::Containing { shape, ty, sub_type, q } => {
            require_valid(&shape, &sub_type)?;
            let params =
                json!({ "shape": shape.to_string(), "type": ty.to_string(), "sub_type": sub_type.to_string(), "q": q });
            ("containing", params, qcount::count_containing(&shape, &sub_type, &ty, q)?)
        }
        Formula::SuborbitCount { shape, ty, q } => {
            let params = json!({ "shape": shape.to_string(), "type": ty.to_string(), "q": q });
            ("suborbit-count", params, suborbits::suborbit_count_printed(&shape, &ty, q)?)
        }
        Formula::SuborbitLength { shape, ty, tuple, q } => {
            let label = parse_tuple(&tuple)?;
            let params = json!({ "shape": shape.to_string(), "type": ty.to_string(), "tuple": label.0, "q": q });
            ("suborbit-length", params, suborbits::suborbit_length_printed(&shape, &ty, &label, q)?)
        }
    })
}

fn require_valid(shape: &Shape, k: &TypeVector) -> Result<()> {
    if !qcount::is_valid_type(shape, k)? {
        return Err(Error::InvalidType { shape: shape.blocks().to_vec(), ty: k.ks().to_vec() });
    }
    Ok(())
}

fn parse_tuple(text: &str) -> Result<InvariantTuple> {
    let parts = text
        .split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|_| Error::Parse(format!("`{p}` is not an integer"))))
        .collect::<Result<Vec<_>>>()?;
    let a: [i64; 6] =
        parts.try_into().map_err(|v: Vec<i64>| Error::Parse(format!("a label has 6 components, got {}", v.len())))?;
    Ok(InvariantTuple(a))
}

fn suborbit_command(
    mode: SuborbitMode,
    shape: &Shape,
    k: &TypeVector,
    field: &FieldSpec,
    guards: Guards,
) -> std::result::Result<(), Failure> {
    let q = field.q() as u64;
    let head = || json!({ "shape": shape.to_string(), "type": k.to_string(), "q": q });
    let out = match mode {
        SuborbitMode::Formula => {
            let tuples: Vec<Value> = suborbits::printed_tuples(shape, k)?
                .into_iter()
                .map(|t| {
                    let length = suborbits::suborbit_length_printed(shape, k, &t, q);
                    json!({ "tuple": t.0, "printed_length": length.ok().map(|c| c.to_string()) })
                })
                .collect();
            let mut v = head();
            v["printed_count"] = json!(suborbits::suborbit_count_printed(shape, k, q)?.to_string());
            v["tuples"] = json!(tuples);
            v
        }
        SuborbitMode::Oracle => {
            let oracle = suborbits::orbits_oracle(shape, k, field, guards)?;
            let u = &oracle.representative;
            let orbits = oracle
                .orbits
                .iter()
                .map(|orbit| {
                    let mut entry = json!({
                        "size": orbit.len().to_string(),
                        "members": orbit.iter().map(|s| s.basis().to_text()).collect::<Vec<_>>(),
                    });
                    if shape.t() == 3 {
                        entry["tuple"] = json!(suborbits::invariant_tuple(u, &orbit[0], shape, k)?.0);
                    }
                    Ok(entry)
                })
                .collect::<Result<Vec<_>>>()?;
            let mut v = head();
            v["stabilizer_order"] = json!(oracle.stabilizer_order.to_string());
            v["orbit_count"] = json!(oracle.orbits.len().to_string());
            v["orbits"] = json!(orbits);
            v
        }
        SuborbitMode::Verify => match suborbits::cross_validate(shape, k, field, guards) {
            Ok(report) => serde_json::to_value(&report).expect("report serializes"),
            Err(e @ Error::SeparationViolation { .. }) => return Err(Failure::Hard(format!("hard failure: {e}"))),
            Err(e) => return Err(e.into()),
        },
    };
    println!("{}", serde_json::to_string_pretty(&out).expect("json serializes"));
    Ok(())
}

fn verify_command(args: VerifyArgs) -> std::result::Result<(), Failure> {
    let config = VerifyConfig {
        max_q: args.max_q,
        max_total_dim: args.max_total_dim,
        max_t: args.max_t,
        group_guard: args.guard.unwrap_or(args.group_guard),
        subspace_guard: args.guard.unwrap_or(args.subspace_guard),
    };
    let report = verify::run(&config)?;
    let text = match args.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    match &args.out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    let failures = report.hard_failures.len();
    eprintln!(
        "{} cases, {} hard failures, {} discrepancies",
        report.cases.len(),
        failures,
        report.discrepancies.len()
    );
    if failures > 0 {
        return Err(Failure::Hard(format!("verification failed: {failures} hard failures")));
    }
    Ok(())
}
