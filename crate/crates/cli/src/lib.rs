//! Command-line front end for `quadlat`.
//!
//! Every subcommand builds one JSON object. With `--json` it is printed as
//! is; otherwise it is rendered as `key: value` lines. Failures print
//! nothing on standard output except, under `--json`, an
//! `{"error": code, "detail": message}` object.
//!
//! Exit codes: 0 on success, 1 when the command line itself is malformed,
//! 2 when the input is rejected by the library (bad expressions, malformed
//! JSON files, failed preconditions).

pub mod expr;

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use quadlat::brauer::{self, FiniteMatrixGroupModL, PointGroup};
use quadlat::embeddings::{self, NikulinOutcome};
use quadlat::glue::{self, DefiniteSign};
use quadlat::json::{
    int_matrix_from_json, int_matrix_to_json, int_to_json, lattice_from_json, period_from_json, rat_matrix_to_json,
    rat_to_json,
};
use quadlat::periods;
use quadlat::{disc_form_isomorphic, DiscriminantForm, DiscriminantGroup, Error, Lattice, Limits, SublatticeEmbedding};

pub use expr::{parse_lattice_expr, parse_signature, ExprError, LatticeExpr};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "quadlat", version, about = "Exact computations with even integral lattices")]
struct Cli {
    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank, determinant, signature, parity and discriminant group
    Info {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Discriminant quadratic and bilinear forms on the generators
    Discform {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Embedding criterion into an even unimodular lattice of signature SIG ("p,m")
    Nikulin {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        signature: String,
    },
    /// The embedding of Lambda2d(D) into LambdaSharp and its complement
    Iota2d { d: u64 },
    /// Orthogonal complement of {"ambient": <lattice>, "basis": [[int]]} read from stdin
    Complement,
    /// Even overlattices, one per isotropic subgroup
    Overlattices {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Reduced even binary definite forms of determinant DET
    BinaryEnum {
        #[arg(allow_hyphen_values = true)]
        det: BigInt,
        sign: SignArg,
    },
    /// Neron-Severi and transcendental lattices of a period ("-" for stdin)
    PeriodSplit { file: PathBuf },
    /// Minkowski's bound on finite subgroups of GL_N(Z)
    Minkowski { n: u64 },
    /// Fixed subspace mod ell of {"ell", "dim", "generators"} ("-" for stdin)
    FixedModEll { file: PathBuf },
    /// Exhaustive count of N x N matrices over F_ELL in GROUP
    /// (sl, sp, or orthogonal:EXPR)
    Points {
        #[arg(value_parser = parse_group)]
        group: GroupArg,
        n: usize,
        ell: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SignArg {
    #[value(alias = "pos", alias = "+")]
    Positive,
    #[value(alias = "neg", alias = "-")]
    Negative,
}

#[derive(Debug, Clone)]
enum GroupArg {
    SpecialLinear,
    Symplectic,
    Orthogonal(String),
}

fn parse_group(s: &str) -> Result<GroupArg, String> {
    match s {
        "sl" | "special_linear" => Ok(GroupArg::SpecialLinear),
        "sp" | "symplectic" => Ok(GroupArg::Symplectic),
        _ => match s.split_once(':') {
            Some(("orthogonal" | "o", e)) => Ok(GroupArg::Orthogonal(e.to_string())),
            _ => Err(format!("unknown group {s:?}; use sl, sp or orthogonal:EXPR")),
        },
    }
}

/// A failure that reached the library: reported with exit code 2.
#[derive(Debug)]
struct Failure {
    code: &'static str,
    detail: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: e.code(), detail: e.to_string() }
    }
}

impl From<ExprError> for Failure {
    fn from(e: ExprError) -> Self {
        Failure { code: e.code(), detail: e.to_string() }
    }
}

type Outcome = Result<Value, Failure>;

fn lattice_of(text: &str) -> Result<Lattice, Failure> {
    Ok(parse_lattice_expr(text)?.eval()?)
}

fn read_input(file: &PathBuf, stdin: &mut dyn Read) -> Result<Value, Failure> {
    let mut text = String::new();
    if file.as_os_str() == "-" {
        stdin.read_to_string(&mut text).map_err(|e| Failure { code: "IoError", detail: e.to_string() })?;
    } else {
        text = fs::read_to_string(file)
            .map_err(|e| Failure { code: "IoError", detail: format!("{}: {e}", file.display()) })?;
    }
    parse_json(&text)
}

fn parse_json(text: &str) -> Result<Value, Failure> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()).into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, Failure> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field {key:?}")).into())
}

fn u64_field(v: &Value, key: &str) -> Result<u64, Failure> {
    field(v, key)?.as_u64().ok_or_else(|| Error::Parse(format!("{key:?} must be a non-negative integer")).into())
}

fn int_list(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int_to_json).collect())
}

fn sublattice_json(s: &SublatticeEmbedding) -> Value {
    json!({
        "rank": s.rank(),
        "basis": int_matrix_to_json(s.basis()),
        "gram": int_matrix_to_json(&s.induced_gram()),
    })
}

fn info(text: &str) -> Outcome {
    let l = lattice_of(text)?;
    let group = DiscriminantGroup::of(&l);
    let sig = l.signature();
    Ok(json!({
        "rank": l.rank(),
        "det": int_to_json(&l.det()),
        "signature": [sig.plus, sig.minus],
        "even": l.is_even(),
        "unimodular": l.is_unimodular(),
        "discriminant_group": int_list(group.invariant_factors()),
        "discriminant_order": int_to_json(&group.order()),
        "min_generators": group.min_generators(),
    }))
}

fn discform(text: &str) -> Outcome {
    let form = DiscriminantForm::of(&lattice_of(text)?)?;
    Ok(json!({
        "invariant_factors": int_list(form.group().invariant_factors()),
        "generators": rat_matrix_to_json(form.group().generator_lifts()),
        "q": Value::Array(form.q_values().iter().map(rat_to_json).collect()),
        "b": rat_matrix_to_json(form.b_values()),
    }))
}

fn nikulin(text: &str, signature: &str) -> Outcome {
    let verdict = embeddings::nikulin_check(&lattice_of(text)?, parse_signature(signature)?)?;
    let outcome = match verdict.outcome {
        NikulinOutcome::Guaranteed => "Guaranteed",
        NikulinOutcome::Unknown => "Unknown",
    };
    let failed: Vec<String> = verdict.failed_conditions.iter().map(ToString::to_string).collect();
    Ok(json!({ "outcome": outcome, "failed_conditions": failed }))
}

fn iota2d(d: u64, limits: &Limits) -> Outcome {
    let iota = embeddings::build_iota2d(d)?;
    let complement = iota.orthogonal_complement();
    let comp_lattice = complement.induced_lattice()?;
    let group = DiscriminantGroup::of(&comp_lattice);
    let tail = Lattice::gen(-2 * i64::try_from(d).map_err(|_| Error::BadParameter("d is too large".into()))?)?;
    let anti =
        disc_form_isomorphic(&DiscriminantForm::of(&comp_lattice)?, &DiscriminantForm::of(&tail)?, true, limits)?;
    Ok(json!({
        "d": d,
        "primitive": iota.is_primitive(),
        "embedding": int_matrix_to_json(iota.basis()),
        "complement": sublattice_json(&complement),
        "complement_discriminant_order": int_to_json(&group.order()),
        "complement_form_is_negated_tail": anti,
    }))
}

fn complement(input: &Value) -> Outcome {
    let ambient = lattice_from_json(field(input, "ambient")?)?;
    let basis = int_matrix_from_json(field(input, "basis")?, Some(ambient.rank()))?;
    let sub = SublatticeEmbedding::new(ambient, basis)?;
    let comp = sub.orthogonal_complement();
    Ok(json!({
        "primitive": sub.is_primitive(),
        "saturation_index": int_to_json(&sub.saturation_index()),
        "complement": sublattice_json(&comp),
    }))
}

fn overlattices(text: &str, limits: &Limits) -> Outcome {
    let overs = glue::even_overlattices(&lattice_of(text)?, limits)?;
    let list: Vec<Value> = overs
        .iter()
        .map(|o| {
            json!({
                "glue_order": o.glue.order(),
                "glue": rat_matrix_to_json(o.glue.generators()),
                "basis": rat_matrix_to_json(&o.basis),
                "gram": int_matrix_to_json(o.lattice.gram()),
            })
        })
        .collect();
    Ok(json!({ "count": list.len(), "overlattices": list }))
}

fn binary_enum(det: &BigInt, sign: SignArg, limits: &Limits) -> Outcome {
    let sign = match sign {
        SignArg::Positive => DefiniteSign::Positive,
        SignArg::Negative => DefiniteSign::Negative,
    };
    let forms = glue::enumerate_even_binary(det, sign, limits)?;
    let grams: Vec<Value> = forms.iter().map(|l| int_matrix_to_json(l.gram())).collect();
    Ok(json!({ "det": int_to_json(det), "count": grams.len(), "forms": grams }))
}

fn period_split(input: &Value, limits: &Limits) -> Outcome {
    let checked = periods::validate_period(&period_from_json(input)?)?;
    let split = periods::transcendental(&checked)?;
    let report = periods::hodge_closure_report(&checked);
    let ambient = checked.period().lattice();
    // On an even unimodular ambient the two discriminant forms are opposite.
    let sign_relation = if ambient.is_even() && ambient.is_unimodular() {
        let qn = DiscriminantForm::of(&split.ns.induced_lattice()?)?;
        let qt = DiscriminantForm::of(&split.trans.induced_lattice()?)?;
        match disc_form_isomorphic(&qt, &qn, true, limits) {
            Ok(b) => Value::Bool(b),
            Err(Error::TooLarge { .. }) => Value::Null,
            Err(e) => return Err(e.into()),
        }
    } else {
        Value::Null
    };
    let (a, b, c) = checked.hodge_numbers();
    Ok(json!({
        "self_pairing": rat_to_json(checked.self_pairing()),
        "hodge_numbers": [a, b, c],
        "neron_severi": sublattice_json(&split.ns),
        "transcendental": sublattice_json(&split.trans),
        "minimal_hodge_sublattice": sublattice_json(&report.span_closure),
        "minimal_equals_transcendental": report.agree,
        "sign_relation": sign_relation,
    }))
}

fn minkowski(n: u64) -> Outcome {
    Ok(json!({ "n": n, "bound": int_to_json(&brauer::minkowski_bound(n)?) }))
}

fn fixed_mod_ell(input: &Value) -> Outcome {
    let ell = u64_field(input, "ell")?;
    let dim = usize::try_from(u64_field(input, "dim")?).map_err(|_| Error::BadParameter("dim is too large".into()))?;
    let gens = field(input, "generators")?
        .as_array()
        .ok_or_else(|| Error::Parse("\"generators\" must be a list of matrices".into()))?
        .iter()
        .map(|g| int_matrix_from_json(g, Some(dim)))
        .collect::<Result<Vec<_>, Error>>()?;
    let fixed = brauer::fixed_subspace_mod_ell(&FiniteMatrixGroupModL::new(ell, dim, &gens)?);
    Ok(json!({ "ell": ell, "dim": fixed.dim, "basis": fixed.basis }))
}

fn points(group: &GroupArg, n: usize, ell: u64) -> Outcome {
    let (name, pg, dim) = match group {
        GroupArg::SpecialLinear => ("special_linear", PointGroup::SpecialLinear, Some(n * n - usize::from(n > 0))),
        GroupArg::Symplectic => ("symplectic", PointGroup::Symplectic, Some(n * (n + 1) / 2)),
        GroupArg::Orthogonal(text) => ("orthogonal", PointGroup::OrthogonalOf(lattice_of(text)?), None),
    };
    let count = brauer::brute_force_points(&pg, n, ell)?;
    let nori = dim.map(|d| brauer::nori_sandwich_check(&BigInt::from(count), d.to_u32().unwrap_or(u32::MAX), ell));
    Ok(json!({
        "group": name,
        "n": n,
        "ell": ell,
        "count": count,
        "group_dimension": dim,
        "nori_sandwich": nori,
    }))
}

fn dispatch(command: &Command, stdin: &mut dyn Read, limits: &Limits) -> Outcome {
    match command {
        Command::Info { expr } => info(expr),
        Command::Discform { expr } => discform(expr),
        Command::Nikulin { expr, signature } => nikulin(expr, signature),
        Command::Iota2d { d } => iota2d(*d, limits),
        Command::Complement => {
            let mut text = String::new();
            stdin.read_to_string(&mut text).map_err(|e| Failure { code: "IoError", detail: e.to_string() })?;
            complement(&parse_json(&text)?)
        }
        Command::Overlattices { expr } => overlattices(expr, limits),
        Command::BinaryEnum { det, sign } => binary_enum(det, *sign, limits),
        Command::PeriodSplit { file } => period_split(&read_input(file, stdin)?, limits),
        Command::Minkowski { n } => minkowski(*n),
        Command::FixedModEll { file } => fixed_mod_ell(&read_input(file, stdin)?),
        Command::Points { group, n, ell } => points(group, *n, *ell),
    }
}

fn render_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// `key: value` lines; matrices get one row per line.
fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    let Value::Object(map) = v else {
        out.push_str(&format!("{pad}{}\n", render_value(v)));
        return;
    };
    for (k, val) in map {
        match val {
            Value::Object(_) => {
                out.push_str(&format!("{pad}{k}:\n"));
                render_text(val, indent + 2, out);
            }
            Value::Array(rows) if !rows.is_empty() && rows.iter().all(|r| r.is_array() || r.is_object()) => {
                out.push_str(&format!("{pad}{k}:\n"));
                for r in rows {
                    if r.is_object() {
                        render_text(r, indent + 2, out);
                        out.push_str(&format!("{pad}  --\n"));
                    } else {
                        out.push_str(&format!("{pad}  {}\n", render_value(r)));
                    }
                }
            }
            _ => out.push_str(&format!("{pad}{k}: {}\n", render_value(val))),
        }
    }
}

fn error_json(code: &str, detail: &str) -> String {
    let mut m = Map::new();
    m.insert("error".into(), Value::String(code.into()));
    m.insert("detail".into(), Value::String(detail.into()));
    Value::Object(m).to_string()
}

/// Runs the command line with explicit streams; returns the exit code.
pub fn run_with<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let json_requested = args.iter().skip(1).any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            if json_requested {
                let detail = e.kind().to_string();
                let _ = writeln!(stdout, "{}", error_json("UsageError", &detail));
            }
            let _ = write!(stderr, "{e}");
            return EXIT_USAGE;
        }
    };
    let limits = Limits::from_env();
    match dispatch(&cli.command, stdin, &limits) {
        Ok(value) => {
            let text = if cli.json {
                format!("{value}\n")
            } else {
                let mut s = String::new();
                render_text(&value, 0, &mut s);
                s
            };
            let _ = stdout.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(f) => {
            if cli.json {
                let _ = writeln!(stdout, "{}", error_json(f.code, &f.detail));
            } else {
                let _ = writeln!(stderr, "error[{}]: {}", f.code, f.detail);
            }
            EXIT_DOMAIN
        }
    }
}

/// Runs against the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}
