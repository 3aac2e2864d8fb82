//! Argument parsing, dispatch and report rendering for the `littlewood`
//! binary.

use std::io::{self, Read};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use littlewood::bounds::{
    build_chain_eta, build_chain_lambda, cor51_bound, find_structured_subset, gabriel_bound,
    ordering_bound_check, prop31_bound, DEFAULT_C_ETA, ORDERING_CHECK_LIMIT,
};
use littlewood::mps::{lower_bound_via_test_function, GridChoice, MpsParams};
use littlewood::numeric::round_sig12;
use littlewood::optimizer::{self, SearchBox, DEFAULT_BOX};
use littlewood::setcore::{
    additive_energy, format_set_json, format_set_text, generate, greedy_dissociated_subset,
    is_dissociated, parse_set, IntegerSet, SetRecipe, DISSOCIATION_LIMIT,
};
use littlewood::spectral::{l1_norm, l4_energy_check, transform, SupportedFunction, DEFAULT_REL_TOL};
use littlewood::{Error, Result};

const B_STAR: f64 = 1.3766505;
const LAMBDA_STAR: f64 = 36.1127893;

#[derive(Parser)]
#[command(name = "littlewood", version, about = "Additive energy, Fourier L1 norms and Littlewood-type lower bounds")]
pub struct Cli {
    /// Output format
    #[arg(long, value_enum, global = true, default_value = "json")]
    pub format: Format,

    /// Write the primary output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct SetInput {
    /// Set file: one integer per line or a JSON array; `-` reads stdin
    input: Option<PathBuf>,

    /// Inline set, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    set: Option<Vec<i64>>,
}

impl SetInput {
    fn load(&self) -> Result<IntegerSet> {
        match (&self.input, &self.set) {
            (Some(_), Some(_)) => Err(Error::Parse("give either a set file or --set, not both".into())),
            (None, Some(v)) => IntegerSet::new(v.clone()),
            (Some(p), None) if p.as_os_str() == "-" => {
                let mut text = String::new();
                io::stdin().read_to_string(&mut text)?;
                parse_set(&text)
            }
            (Some(p), None) => parse_set(&std::fs::read_to_string(p)?),
            (None, None) => Err(Error::Parse("no input set given".into())),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormulaArg {
    Prop31,
    Cor51,
}

#[derive(Subcommand)]
enum Command {
    /// Additive energy E and ω = E/N³
    Energy {
        #[command(flatten)]
        input: SetInput,
    },
    /// L1 norm of the Fourier transform of the indicator
    L1norm {
        #[command(flatten)]
        input: SetInput,
        #[arg(long, default_value_t = DEFAULT_REL_TOL, allow_hyphen_values = true)]
        tol: f64,
        /// Grid size for `--format csv` sample output
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Test-function lower bound on the geometric chain, with certificates
    Testfn {
        #[command(flatten)]
        input: SetInput,
        #[arg(long, default_value_t = B_STAR, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, default_value_t = LAMBDA_STAR, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, default_value_t = littlewood::mps::DEFAULT_TOL, allow_hyphen_values = true)]
        tol: f64,
        /// Fixed construction grid (power of two); automatic by default
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Segment-chain lower bound
    Bound {
        #[command(flatten)]
        input: SetInput,
        #[arg(long, value_enum, default_value = "prop31")]
        formula: FormulaArg,
        #[arg(long, default_value_t = B_STAR, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, default_value_t = LAMBDA_STAR, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        delta: f64,
        #[arg(long, default_value_t = 0.25, allow_hyphen_values = true)]
        eta: f64,
        /// Absolute constant in front of the ω sum
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        c_abs: f64,
    },
    /// Initial segment of largest normalised energy on the η chain
    Structure {
        #[command(flatten)]
        input: SetInput,
        #[arg(long = "K", default_value_t = 1.0, allow_hyphen_values = true)]
        k: f64,
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        delta: f64,
        #[arg(long, default_value_t = DEFAULT_C_ETA, allow_hyphen_values = true)]
        c_eta: f64,
    },
    /// Maximise f(b, λ) over a box
    OptimizeConstant {
        #[arg(long, default_value_t = optimizer::DEFAULT_TOL, allow_hyphen_values = true)]
        tol: f64,
        #[command(flatten)]
        range: BoxArgs,
    },
    /// CSV of f(b, λ) on a grid
    Surface {
        #[command(flatten)]
        range: BoxArgs,
        #[arg(long, default_value_t = 50)]
        b_steps: usize,
        #[arg(long, default_value_t = 50)]
        lambda_steps: usize,
    },
    /// Greedy dissociated subset, a lower bound for the dimension
    Dimension {
        #[command(flatten)]
        input: SetInput,
    },
    /// Generate a test set
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(long, default_value_t = 0, global = true)]
        seed: u64,
    },
    /// Run the invariant suite on a set
    Check {
        #[command(flatten)]
        input: SetInput,
        #[arg(long, default_value_t = B_STAR, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, default_value_t = LAMBDA_STAR, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, default_value_t = DEFAULT_REL_TOL, allow_hyphen_values = true)]
        tol: f64,
    },
}

#[derive(Args)]
struct BoxArgs {
    /// b range as `lo,hi`
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    b_range: Option<Vec<f64>>,
    /// λ range as `lo,hi`
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    lambda_range: Option<Vec<f64>>,
}

impl BoxArgs {
    fn search_box(&self) -> Result<SearchBox> {
        let pair = |v: &Option<Vec<f64>>, d: (f64, f64)| match v.as_deref() {
            None => Ok(d),
            Some(&[lo, hi]) => Ok((lo, hi)),
            Some(_) => Err(Error::Parse("ranges are given as lo,hi".into())),
        };
        Ok(SearchBox {
            b: pair(&self.b_range, DEFAULT_BOX.b)?,
            lambda: pair(&self.lambda_range, DEFAULT_BOX.lambda)?,
        })
    }
}

#[derive(Subcommand)]
enum GenKind {
    Interval {
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        start: i64,
        #[arg(long)]
        length: usize,
    },
    Ap {
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        start: i64,
        #[arg(long, allow_hyphen_values = true)]
        step: i64,
        #[arg(long)]
        length: usize,
    },
    Lacunary {
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        start: i64,
        #[arg(long, default_value_t = 2)]
        ratio: i64,
        #[arg(long)]
        length: usize,
    },
    Random {
        #[arg(long)]
        universe: u64,
        #[arg(long)]
        density: f64,
    },
    /// Union of progressions, each given as `start,step,length`
    Union {
        #[arg(long = "ap", value_delimiter = ',', allow_hyphen_values = true)]
        aps: Vec<i64>,
    },
}

impl GenKind {
    fn recipe(&self) -> Result<SetRecipe> {
        Ok(match *self {
            GenKind::Interval { start, length } => SetRecipe::Interval { start, length },
            GenKind::Ap { start, step, length } => SetRecipe::ArithmeticProgression { start, step, length },
            GenKind::Lacunary { start, ratio, length } => SetRecipe::Lacunary { start, ratio, length },
            GenKind::Random { universe, density } => SetRecipe::RandomSubset { universe, density },
            GenKind::Union { ref aps } => {
                if aps.is_empty() || aps.len() % 3 != 0 {
                    return Err(Error::Parse("each --ap takes start,step,length".into()));
                }
                let mut out = Vec::new();
                for t in aps.chunks(3) {
                    if t[2] < 0 {
                        return Err(Error::Domain("progression length must be nonnegative".into()));
                    }
                    out.push((t[0], t[1], t[2] as usize));
                }
                SetRecipe::UnionOfAps { aps: out }
            }
        })
    }
}

/// Rounds every float in `v` to 12 significant digits.
fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap();
            if let Some(r) = serde_json::Number::from_f64(round_sig12(x)) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Value {
    let mut v = serde_json::to_value(value).expect("reports serialize");
    round_floats(&mut v);
    v
}

/// Primary output of a subcommand, rendered per `--format`.
#[derive(Debug)]
pub enum Output {
    Json(Value),
    Raw(String),
}

pub fn render(output: Output, format: Format) -> String {
    match output {
        Output::Raw(s) => s,
        Output::Json(v) => match format {
            Format::Json => format!("{}\n", serde_json::to_string_pretty(&v).unwrap()),
            Format::Text | Format::Csv => flatten(&v, format),
        },
    }
}

/// `key: value` lines (text) or a two-row `key,value` table (csv) of the
/// top-level scalars; nested values are printed as compact JSON.
fn flatten(v: &Value, format: Format) -> String {
    let Value::Object(map) = v else {
        return format!("{v}\n");
    };
    let cell = |x: &Value| match x {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    if format == Format::Text {
        map.iter().map(|(k, x)| format!("{k}: {}\n", cell(x))).collect()
    } else {
        let keys: Vec<_> = map.keys().cloned().collect();
        let vals: Vec<_> = map.values().map(|x| {
            let c = cell(x);
            if c.contains(',') { format!("\"{}\"", c.replace('"', "\"\"")) } else { c }
        }).collect();
        format!("{}\n{}\n", keys.join(","), vals.join(","))
    }
}

/// Runs one parsed invocation.
pub fn run(cli: &Cli) -> std::result::Result<Output, Failure> {
    dispatch(cli)
}

fn dispatch(cli: &Cli) -> std::result::Result<Output, Failure> {
    match &cli.command {
        Command::Energy { input } => {
            let set = input.load()?;
            Ok(Output::Json(to_json(&additive_energy(&set)?)))
        }
        Command::L1norm { input, tol, grid } => {
            let set = input.load()?;
            let f = SupportedFunction::indicator(&set)?;
            if cli.format == Format::Csv {
                let size = grid.unwrap_or_else(|| (2 * (set.spread() as usize + 1)).next_power_of_two().max(1024));
                let mut buf = Vec::new();
                transform(&f, size)?.write_csv(&mut buf)?;
                return Ok(Output::Raw(String::from_utf8(buf).unwrap()));
            }
            Ok(Output::Json(to_json(&l1_norm(&f, *tol)?)))
        }
        Command::Testfn { input, b, lambda, tol, grid } => {
            let set = input.load()?;
            let mut params = MpsParams::new(*b)?.with_tol(*tol)?;
            if let Some(m) = grid {
                params = params.with_grid(GridChoice::Fixed(*m));
            }
            let chain = build_chain_lambda(&set, *lambda)?;
            Ok(Output::Json(to_json(&lower_bound_via_test_function(&set, &chain, &params)?)))
        }
        Command::Bound { input, formula, b, lambda, delta, eta, c_abs } => {
            let set = input.load()?;
            let report = match formula {
                FormulaArg::Prop31 => prop31_bound(&build_chain_lambda(&set, *lambda)?, *b)?,
                FormulaArg::Cor51 => cor51_bound(&build_chain_eta(&set, *delta, *eta)?, *c_abs)?,
            };
            Ok(Output::Json(to_json(&report)))
        }
        Command::Structure { input, k, delta, c_eta } => {
            let set = input.load()?;
            let result = find_structured_subset(&set, *k, *delta, *c_eta)?;
            for w in &result.warnings {
                eprintln!("warning: {w}");
            }
            if cli.format == Format::Text {
                return Ok(Output::Raw(format_set_text(&result.a_prime)));
            }
            let mut v = to_json(&result);
            v["A_prime"] = json!(result.a_prime.elements());
            Ok(Output::Json(v))
        }
        Command::OptimizeConstant { tol, range } => {
            Ok(Output::Json(to_json(&optimizer::maximize(&range.search_box()?, *tol)?)))
        }
        Command::Surface { range, b_steps, lambda_steps } => {
            let mut buf = Vec::new();
            optimizer::write_surface_csv(&range.search_box()?, *b_steps, *lambda_steps, &mut buf)?;
            Ok(Output::Raw(String::from_utf8(buf).unwrap()))
        }
        Command::Dimension { input } => {
            let set = input.load()?;
            let sub = greedy_dissociated_subset(&set)?;
            Ok(Output::Json(json!({
                "N": set.len(),
                "dimension_lower_bound": sub.len(),
                "subset": sub.elements(),
            })))
        }
        Command::Gen { kind, seed } => {
            let set = generate(&kind.recipe()?, *seed)?;
            Ok(Output::Raw(match cli.format {
                Format::Json => format!("{}\n", format_set_json(&set)),
                Format::Text | Format::Csv => format_set_text(&set),
            }))
        }
        Command::Check { input, b, lambda, tol } => {
            let set = input.load()?;
            let checks = invariant_suite(&set, *b, *lambda, *tol)?;
            let all = checks.iter().all(|c| c["status"] != "fail");
            let v = to_json(&json!({ "N": set.len(), "all_passed": all, "checks": checks }));
            if !all {
                return Err(Failure::Check(v));
            }
            Ok(Output::Json(v))
        }
    }
}

/// Why an invocation did not succeed.
#[derive(Debug)]
pub enum Failure {
    Library(Error),
    /// The invariant suite ran but some property failed; carries the report.
    Check(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Library(e.into())
    }
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Library(e) => exit_code(e),
            Failure::Check(_) => 5,
        }
    }

    /// Lines for stderr: the message, then any certificate as JSON.
    pub fn diagnostics(&self) -> String {
        match self {
            Failure::Check(_) => "error: invariant suite failed\n".to_string(),
            Failure::Library(e) => {
                let mut text = format!("error: {e}\n");
                match e {
                    Error::Construction { certificate: Some(c), .. } => {
                        text += &format!("{}\n", serde_json::to_string(&to_json(c.as_ref())).unwrap());
                    }
                    Error::Accuracy { estimate, rel_change, grid, .. } => {
                        let v = to_json(&json!({ "estimate": estimate, "rel_change": rel_change, "grid": grid }));
                        text += &format!("{v}\n");
                    }
                    _ => {}
                }
                text
            }
        }
    }
}

fn check(name: &str, outcome: Result<(bool, Value)>) -> Value {
    match outcome {
        Ok((passed, detail)) => json!({
            "name": name,
            "status": if passed { "pass" } else { "fail" },
            "detail": detail,
        }),
        Err(e @ (Error::Capacity(_) | Error::Domain(_) | Error::Aliasing { .. })) => json!({
            "name": name,
            "status": "skipped",
            "detail": e.to_string(),
        }),
        Err(e) => json!({ "name": name, "status": "fail", "detail": e.to_string() }),
    }
}

fn invariant_suite(set: &IntegerSet, b: f64, lambda: f64, tol: f64) -> Result<Vec<Value>> {
    let n = set.len();
    if n == 0 {
        return Err(Error::Domain("the invariant suite needs a nonempty set".into()));
    }
    let nf = n as f64;
    let energy = additive_energy(set)?;
    let norm = SupportedFunction::indicator(set).and_then(|f| l1_norm(&f, tol));
    let l1 = norm.as_ref().map(|r| r.l1).ok();
    let mut out = Vec::new();

    out.push(check("energy_range", Ok((
        (n as u128).pow(2) <= energy.energy && energy.energy <= (n as u128).pow(3),
        json!({ "E": energy.energy }),
    ))));
    out.push(check("energy_cap", gabriel_bound(n as u64, n as u64).map(|g| {
        (energy.energy <= g, json!({ "omega": energy.omega, "cap": g as f64 / nf.powi(3) }))
    })));
    out.push(check("energy_dual", l4_energy_check(set).map(|c| {
        let err = (c.spectral - c.exact as f64).abs();
        (err <= 1e-6 * c.exact as f64, json!({ "spectral": c.spectral, "exact": c.exact }))
    })));
    out.push(check("parseval", norm.as_ref().map_err(clone_err).map(|r| {
        ((r.l2 * r.l2 - nf).abs() <= 1e-10 * nf, json!({ "l2_squared": r.l2 * r.l2 }))
    })));
    out.push(check("l1_trivial_upper", norm.as_ref().map_err(clone_err).map(|r| {
        (r.l1 <= nf.sqrt() * (1.0 + tol), json!({ "l1": r.l1, "sqrt_N": nf.sqrt() }))
    })));
    out.push(check("holder_chain", norm.as_ref().map_err(clone_err).map(|r| {
        let rhs = energy.energy as f64 * r.l1 * r.l1 * (1.0 + 5.0 * tol);
        (nf.powi(3) <= rhs, json!({ "N3": nf.powi(3), "E_l1_squared": energy.energy as f64 * r.l1 * r.l1 }))
    })));
    let chain = build_chain_lambda(set, lambda);
    out.push(check("prop31_sound", chain.as_ref().map_err(clone_err).and_then(|c| {
        let bound = prop31_bound(c, b)?.bound_value;
        let l1 = l1.ok_or_else(|| Error::Domain("no L1 norm".into()))?;
        Ok((bound <= l1 * (1.0 + 1e-5), json!({ "bound": bound, "l1": l1 })))
    })));
    out.push(check("test_function_sound", chain.as_ref().map_err(clone_err).and_then(|c| {
        let params = MpsParams::new(b)?.with_tol(tol)?;
        let lb = lower_bound_via_test_function(set, c, &params)?;
        let l1 = l1.ok_or_else(|| Error::Domain("no L1 norm".into()))?;
        Ok((lb.lower_bound <= l1 * (1.0 + 10.0 * tol), json!({ "lower_bound": lb.lower_bound, "l1": l1 })))
    })));
    out.push(check("dissociated_subset", (|| {
        if n > 4 * DISSOCIATION_LIMIT {
            return Err(Error::Capacity(format!("greedy scan skipped above {} elements", 4 * DISSOCIATION_LIMIT)));
        }
        let sub = greedy_dissociated_subset(set)?;
        Ok((is_dissociated(&sub)?, json!({ "size": sub.len() })))
    })()));
    out.push(check("ordering_bound", (|| {
        if n > ORDERING_CHECK_LIMIT {
            return Err(Error::Capacity(format!("limited to {ORDERING_CHECK_LIMIT} elements")));
        }
        Ok((ordering_bound_check(set, set)?, json!({})))
    })()));
    Ok(out)
}

fn clone_err(e: &Error) -> Error {
    match e {
        Error::Capacity(m) => Error::Capacity(m.clone()),
        Error::Domain(m) => Error::Domain(m.clone()),
        other => Error::Optimization(other.to_string()),
    }
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Io(_) => 2,
        Error::Domain(_) | Error::Aliasing { .. } => 3,
        Error::Capacity(_) => 4,
        Error::Accuracy { .. } | Error::Construction { .. } | Error::Optimization(_) => 5,
    }
}
