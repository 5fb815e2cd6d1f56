//! Command-line front end: loads a system specification, runs one
//! subcommand and emits a JSON report (or CSV where it makes sense).

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::{SystemSpec, CANTOR3_JSON, GOLDEN_JSON};
use crate::error::{Error, Result};
use crate::filters::{relation_check, Convention};
use crate::measure::{markov_consistency, MarkovVerdict, Measure, TableMeasure};
use crate::operators::pointwise_scaling;
use crate::stepfunc::{evaluate, normalize, Atom, StepFunction};
use crate::symbolic::{enumerate_words, Word};
use crate::transform::{analyze, gram, residual, support_gaps, GRAM_TOL};
use crate::wavelets::{markov_mothers, one_sided_basis, two_sided_basis_markov, word_mothers, BasisElement, Descriptor};

#[derive(Debug, Parser)]
#[command(name = "mimwave", version, about = "Multiwavelets on limit sets of Markov interval maps")]
struct Cli {
    /// Output format; `plot` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Sided {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Amended,
    Paper,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check every measure invariant and the geometry.
    Validate(SpecArg),
    /// Decide whether the measure is Markov; tabulates Markov input first.
    MarkovCheck {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Gram–Schmidt matrices and mother wavelets.
    Wavelets {
        #[command(flatten)]
        spec: SpecArg,
        /// Also build word mothers for all words up to length scale+1.
        #[arg(long)]
        scale: Option<usize>,
    },
    /// Enumerate a truncated orthonormal basis.
    Basis {
        #[command(flatten)]
        spec: SpecArg,
        #[command(flatten)]
        basis: BasisArgs,
        /// Include the Gram deviation (exit 1 if above 1e-10).
        #[arg(long)]
        gram: bool,
    },
    /// Expand a step function in a basis.
    Transform {
        #[command(flatten)]
        spec: SpecArg,
        /// Step function JSON: {"atoms": [{"translate", "word", "coeff"}]}.
        #[arg(long)]
        function: PathBuf,
        /// Reuse a basis exported by `basis --out`.
        #[arg(long)]
        basis: Option<PathBuf>,
        #[command(flatten)]
        enumerate: BasisArgs,
    },
    /// Check the filter-operator relations on random Laurent vectors.
    Filters {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = 4)]
        degree: i64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = ConventionArg::Amended)]
        convention: ConventionArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sample a function, optionally after a scaling operator, on a grid.
    Plot {
        #[command(flatten)]
        spec: SpecArg,
        /// id | frac | one | cyl:WORD
        #[arg(long, default_value = "id")]
        function: String,
        /// none | U:n
        #[arg(long, default_value = "none")]
        operator: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        to: f64,
    },
}

#[derive(Debug, Args)]
struct SpecArg {
    /// Path to a system JSON file, or @golden / @cantor3 for a bundled one.
    spec: String,
}

#[derive(Debug, Args)]
struct BasisArgs {
    #[arg(long, value_enum, default_value_t = Sided::One)]
    sided: Sided,
    #[arg(long, default_value_t = 1)]
    scale: usize,
    #[arg(long, default_value_t = 2)]
    translates: i64,
}

/// The JSON document every subcommand emits.
#[derive(Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub spec_digest: String,
    pub results: Value,
    pub max_error: Option<f64>,
    pub status: String,
}

/// One atom of a serialized step function.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomRecord {
    pub translate: i64,
    pub word: Vec<usize>,
    pub coeff: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctionRecord {
    pub atoms: Vec<AtomRecord>,
}

impl FunctionRecord {
    pub fn from_function(f: &StepFunction) -> Self {
        FunctionRecord {
            atoms: f
                .iter()
                .map(|(a, c)| AtomRecord {
                    translate: a.translate,
                    word: a.word.symbols().to_vec(),
                    coeff: c,
                })
                .collect(),
        }
    }

    pub fn to_function(&self, spec: &SystemSpec) -> Result<StepFunction> {
        let a = spec.model.incidence();
        let raw = self
            .atoms
            .iter()
            .map(|r| Ok((Atom::new(r.translate, Word::new(a, r.word.clone())?), r.coeff)))
            .collect::<Result<Vec<_>>>()?;
        normalize(raw, &spec.model)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ElementRecord {
    descriptor: Descriptor,
    atoms: Vec<AtomRecord>,
}

struct Outcome {
    results: Value,
    max_error: Option<f64>,
    ok: bool,
    csv: Option<String>,
}

impl Outcome {
    fn ok(results: Value) -> Self {
        Outcome { results, max_error: None, ok: true, csv: None }
    }
}

fn load_spec(name: &str) -> Result<(SystemSpec, String)> {
    let text = match name {
        "@golden" => GOLDEN_JSON.to_string(),
        "@cantor3" => CANTOR3_JSON.to_string(),
        path => std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{path}: {e}")))?,
    };
    let digest = hex::encode(Sha256::digest(text.as_bytes()));
    Ok((SystemSpec::from_json(&text)?, digest))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Input(_) => 2,
        _ => 1,
    }
}

/// Runs the CLI on `args` (including the program name). Returns the exit
/// code: 0 success, 1 failed check or violation, 2 usage or config error.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let spec_name = match &cli.command {
        Command::Validate(s) => &s.spec,
        Command::MarkovCheck { spec, .. }
        | Command::Wavelets { spec, .. }
        | Command::Basis { spec, .. }
        | Command::Transform { spec, .. }
        | Command::Filters { spec, .. }
        | Command::Plot { spec, .. } => &spec.spec,
    };
    let (spec, digest) = match load_spec(spec_name) {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let format = cli.format.unwrap_or(match cli.command {
        Command::Plot { .. } => Format::Csv,
        _ => Format::Json,
    });
    let outcome = match dispatch(&cli.command, &spec) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let body = match format {
        Format::Json => {
            let report = RunReport {
                command: args.iter().skip(1).cloned().collect(),
                spec_digest: digest,
                results: outcome.results,
                max_error: outcome.max_error,
                status: if outcome.ok { "ok".into() } else { "fail".into() },
            };
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => match outcome.csv {
            Some(s) => s,
            None => {
                let _ = writeln!(err, "error: csv output is not available for this subcommand");
                return 2;
            }
        },
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, body).map_err(|e| e.to_string()),
        None => out.write_all(body.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return 2;
    }
    if outcome.ok {
        0
    } else {
        1
    }
}

fn dispatch(cmd: &Command, spec: &SystemSpec) -> Result<Outcome> {
    match cmd {
        Command::Validate(_) => cmd_validate(spec),
        Command::MarkovCheck { depth, .. } => cmd_markov_check(spec, *depth),
        Command::Wavelets { scale, .. } => {
            require_valid(spec)?;
            cmd_wavelets(spec, *scale)
        }
        Command::Basis { basis, gram, .. } => {
            require_valid(spec)?;
            cmd_basis(spec, basis, *gram)
        }
        Command::Transform { function, basis, enumerate, .. } => {
            require_valid(spec)?;
            cmd_transform(spec, function, basis.as_deref(), enumerate)
        }
        Command::Filters { degree, trials, convention, seed, .. } => {
            require_valid(spec)?;
            let conv = match convention {
                ConventionArg::Amended => Convention::Amended,
                ConventionArg::Paper => Convention::Paper,
            };
            let report = relation_check(&spec.model, *degree, *trials, conv, *seed)?;
            let ok = conv == Convention::Paper || report.all_passed();
            Ok(Outcome {
                max_error: Some(report.max_error()),
                results: serde_json::to_value(&report).expect("serializable"),
                ok,
                csv: None,
            })
        }
        Command::Plot { function, operator, samples, from, to, .. } => {
            require_valid(spec)?;
            cmd_plot(spec, function, operator, *samples, *from, *to)
        }
    }
}

fn require_valid(spec: &SystemSpec) -> Result<()> {
    let v = spec.model.validate();
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::InsufficientData(format!(
            "the measure violates {} invariant(s); run `validate` for details",
            v.len()
        )))
    }
}

fn cmd_validate(spec: &SystemSpec) -> Result<Outcome> {
    let v = spec.model.validate();
    let max = v.iter().map(|x| x.residual.abs()).filter(|r| r.is_finite()).fold(0.0, f64::max);
    Ok(Outcome {
        ok: v.is_empty(),
        max_error: Some(max),
        results: json!({ "violations": v }),
        csv: None,
    })
}

fn cmd_markov_check(spec: &SystemSpec, depth: usize) -> Result<Outcome> {
    let a = spec.model.incidence();
    let table = match spec.model.measure() {
        Measure::Table(t) => t.clone(),
        Measure::Markov(_) => TableMeasure::generate(&spec.model, depth)?,
    };
    let results = match markov_consistency(a, &table)? {
        MarkovVerdict::Markov(m) => {
            return Ok(Outcome::ok(json!({ "markov": true, "p": m.p, "Pi": m.pi })))
        }
        MarkovVerdict::NotMarkov(w) => json!({ "markov": false, "witness": w }),
    };
    Ok(Outcome { results, max_error: None, ok: false, csv: None })
}

fn cmd_wavelets(spec: &SystemSpec, scale: Option<usize>) -> Result<Outcome> {
    let mu = &spec.model;
    let mut results = serde_json::Map::new();
    let mut worst: f64 = 0.0;
    if mu.as_markov().is_some() {
        let blocks: Vec<Value> = markov_mothers(mu)?
            .iter()
            .map(|b| {
                worst = worst.max(b.matrix.orthogonality_defect());
                json!({
                    "symbol": b.symbol,
                    "support": b.support,
                    "matrix": b.matrix.rows(),
                    "mothers": b.mothers.iter().map(|m| json!({
                        "index": m.index,
                        "function": FunctionRecord::from_function(&m.func),
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        results.insert("blocks".into(), Value::Array(blocks));
    }
    if scale.is_some() || mu.as_markov().is_none() {
        let mut words = Vec::new();
        for s in 1..=scale.unwrap_or(0) + 1 {
            for omega in enumerate_words(mu.incidence(), s) {
                let (m, mothers) = word_mothers(mu, &omega)?;
                worst = worst.max(m.orthogonality_defect());
                words.push(json!({
                    "word": omega.symbols(),
                    "matrix": m.rows(),
                    "mothers": mothers.iter().map(|m| json!({
                        "index": m.index,
                        "function": FunctionRecord::from_function(&m.func),
                    })).collect::<Vec<_>>(),
                }));
            }
        }
        results.insert("words".into(), Value::Array(words));
    }
    Ok(Outcome {
        results: Value::Object(results),
        max_error: Some(worst),
        ok: true,
        csv: None,
    })
}

fn enumerate_basis(spec: &SystemSpec, args: &BasisArgs) -> Result<Vec<BasisElement>> {
    match args.sided {
        Sided::One => one_sided_basis(&spec.model, args.scale, args.translates),
        Sided::Two => two_sided_basis_markov(&spec.model, args.scale, args.translates),
    }
}

fn element_records(basis: &[BasisElement]) -> Vec<ElementRecord> {
    basis
        .iter()
        .map(|b| ElementRecord {
            descriptor: b.descriptor.clone(),
            atoms: FunctionRecord::from_function(&b.func).atoms,
        })
        .collect()
}

fn descriptor_label(d: &Descriptor) -> String {
    serde_json::to_string(d).expect("serializable").replace(',', ";")
}

fn cmd_basis(spec: &SystemSpec, args: &BasisArgs, with_gram: bool) -> Result<Outcome> {
    let basis = enumerate_basis(spec, args)?;
    let mut results = json!({
        "sided": match args.sided { Sided::One => "one", Sided::Two => "two" },
        "scale": args.scale,
        "translates": args.translates,
        "size": basis.len(),
        "elements": element_records(&basis),
    });
    let mut max_error = None;
    let mut ok = true;
    if with_gram {
        let g = gram(&basis, &spec.model)?;
        results["gram_max_deviation"] = json!(g.max_deviation);
        max_error = Some(g.max_deviation);
        ok = g.max_deviation <= GRAM_TOL;
    }
    let mut csv = String::from("element,translate,word,coeff\n");
    for (i, b) in basis.iter().enumerate() {
        for (a, c) in b.func.iter() {
            csv.push_str(&format!("{i},{},{},{c}\n", a.translate, a.word));
        }
    }
    Ok(Outcome { results, max_error, ok, csv: Some(csv) })
}

fn read_basis(spec: &SystemSpec, path: &Path) -> Result<Vec<BasisElement>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
    let elements = value
        .pointer("/results/elements")
        .or_else(|| value.get("elements"))
        .cloned()
        .unwrap_or(value);
    let records: Vec<ElementRecord> =
        serde_json::from_value(elements).map_err(|e| Error::Config(format!("basis: {e}")))?;
    records
        .into_iter()
        .map(|r| {
            Ok(BasisElement {
                descriptor: r.descriptor,
                func: FunctionRecord { atoms: r.atoms }.to_function(spec)?,
            })
        })
        .collect()
}

fn cmd_transform(
    spec: &SystemSpec,
    function: &Path,
    basis_path: Option<&Path>,
    args: &BasisArgs,
) -> Result<Outcome> {
    let text = std::fs::read_to_string(function)
        .map_err(|e| Error::Config(format!("{}: {e}", function.display())))?;
    let record: FunctionRecord =
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("function: {e}")))?;
    let f = record.to_function(spec)?;
    let basis = match basis_path {
        Some(p) => read_basis(spec, p)?,
        None => enumerate_basis(spec, args)?,
    };
    let mu = &spec.model;
    let coeffs = analyze(&f, &basis, mu)?;
    let res = residual(&f, &basis, mu)?;
    let gaps = support_gaps(&f, &basis);
    let norm_sq = crate::stepfunc::inner_product(&f, &f, mu)?;
    let mut csv = String::from("index,descriptor,value\n");
    for (i, c) in coeffs.entries.iter().enumerate() {
        csv.push_str(&format!("{i},{},{}\n", descriptor_label(&c.descriptor), c.value));
    }
    Ok(Outcome {
        results: json!({
            "coefficients": coeffs,
            "norm_squared": norm_sq,
            "coefficient_energy": coeffs.energy(),
            "residual": res,
            "support_gaps": gaps,
        }),
        max_error: Some(res),
        ok: true,
        csv: Some(csv),
    })
}

fn parse_function(spec: &SystemSpec, name: &str) -> Result<Box<dyn Fn(f64) -> f64>> {
    match name {
        "id" => Ok(Box::new(|x| x)),
        "frac" => Ok(Box::new(|x: f64| x - x.floor())),
        "one" => Ok(Box::new(|_| 1.0)),
        other => {
            let Some(word) = other.strip_prefix("cyl:") else {
                return Err(Error::Input(format!("unknown function {other:?}")));
            };
            let w = Word::parse(spec.model.incidence(), word)?;
            let geom = spec.geometry()?.clone();
            let f = StepFunction::atom(Atom::new(0, w), 1.0);
            Ok(Box::new(move |x| evaluate(&f, x, &geom)))
        }
    }
}

fn cmd_plot(
    spec: &SystemSpec,
    function: &str,
    operator: &str,
    samples: usize,
    from: f64,
    to: f64,
) -> Result<Outcome> {
    if samples == 0 || !(to > from) {
        return Err(Error::Input("need samples >= 1 and from < to".into()));
    }
    let f = parse_function(spec, function)?;
    let scale = match operator {
        "none" => 0,
        op => op
            .strip_prefix("U:")
            .and_then(|n| n.parse::<usize>().ok())
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::Input(format!("unknown operator {op:?}, expected none or U:n")))?,
    };
    let geom = spec.geometry()?;
    let h = (to - from) / samples as f64;
    let mut xs = Vec::with_capacity(samples);
    let mut ys = Vec::with_capacity(samples);
    for i in 0..samples {
        let x = from + (i as f64 + 0.5) * h;
        let y = if scale == 0 {
            f(x)
        } else {
            pointwise_scaling(geom, &spec.model, scale, f.as_ref(), x)?
        };
        xs.push(x);
        ys.push(y);
    }
    let mut csv = String::from("x,y\n");
    for (x, y) in xs.iter().zip(&ys) {
        csv.push_str(&format!("{x},{y}\n"));
    }
    Ok(Outcome {
        results: json!({ "function": function, "operator": operator, "x": xs, "y": ys }),
        max_error: None,
        ok: true,
        csv: Some(csv),
    })
}
