//! `hybzono` command-line tool.
//!
//! Exit codes: 0 success (or Sharp), 1 NotSharp, 2 parse or I/O error,
//! 3 dimension or form mismatch, 4 RLT level out of range, 5 inconclusive
//! (enumeration cap hit), 6 plot input not planar, 7 anything else.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hybzono::io::{constrained_to_json, hybrid_to_json, matrix_from_rows, read_hybrid, read_network};
use hybzono::ops;
use hybzono::oracle::{
    boundary_2d, check_sharpness, feasible_leaves, hull_boundary_2d, is_empty_capped, Polygon,
    Verdict,
};
use hybzono::pipeline::{demo_levelset, DemoOptions};
use hybzono::relu::demo_network;
use hybzono::rlt::{complexity_report, rlt_convex_hull, rlt_sharpen, ComplexityReport};
use hybzono::{Error, FactorForm, HybridZonotope, Mat, Vector, DEFAULT_ENUMERATION_CAP};
use serde_json::json;

#[derive(Parser)]
#[command(name = "hybzono", version, about = "Hybrid zonotope set operations, RLT and sharpness checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a set operation to one or more set files.
    Op(OpArgs),
    /// Tighten a hybrid zonotope with the RLT at a given level, or build its convex hull.
    Rlt(RltArgs),
    /// Compare the relaxation with the convex hull on sampled directions.
    CheckSharp(SharpArgs),
    /// Boundary polygons of a planar set: leaves, relaxation and hull.
    Plot2d(PlotArgs),
    /// Level set of a ReLU network, tightened level by level.
    DemoLevelset(DemoArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OpName {
    Minksum,
    Map,
    Cartprod,
    Intersect,
    Halfspace,
    Union,
    UnionPoint,
    Relax,
    ConvertForm,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Zo,
    Pm1,
}

impl From<FormArg> for FactorForm {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Zo => FactorForm::Zo,
            FormArg::Pm1 => FactorForm::Pm1,
        }
    }
}

#[derive(Args)]
struct OpArgs {
    name: OpName,
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Matrix as JSON rows, e.g. `[[1,0],[0,1]]` (map, intersect).
    #[arg(long)]
    matrix: Option<String>,
    /// Offset vector as JSON (map).
    #[arg(long)]
    offset: Option<String>,
    /// Point as JSON (union-point).
    #[arg(long)]
    point: Option<String>,
    /// Halfspace normal `a` in `aᵀx ≥ k`, as JSON.
    #[arg(long, alias = "a")]
    normal: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<f64>,
    #[arg(long, value_enum)]
    form: Option<FormArg>,
}

#[derive(Args)]
struct RltArgs {
    input: PathBuf,
    #[arg(long, conflicts_with = "hull", required_unless_present = "hull")]
    level: Option<usize>,
    #[arg(long)]
    hull: bool,
    /// Where to write the set; without it only the report is printed.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SharpArgs {
    input: PathBuf,
    #[arg(long, default_value_t = 64)]
    dirs: usize,
    #[arg(long, default_value_t = hybzono::oracle::SHARPNESS_TOL)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlotFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct PlotArgs {
    input: PathBuf,
    #[arg(long, default_value_t = 360)]
    angles: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: PlotFormat,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DemoArgs {
    /// Network JSON; the built-in demo network when omitted.
    network: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    threshold: f64,
    /// Comma-separated RLT levels; all levels `1..=n_b` when omitted.
    #[arg(long, value_delimiter = ',')]
    rlt_levels: Option<Vec<usize>>,
    #[arg(long, default_value_t = 720)]
    angles: usize,
    #[arg(long, default_value_t = 64)]
    dirs: usize,
    #[arg(long, default_value_t = hybzono::oracle::SHARPNESS_TOL)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
    /// Directory for `report.json` and `polygons.csv`.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    NotPlanar(usize),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(e) => match e {
                Error::Json(_) | Error::Io(_) | Error::InvalidInput(_) => 2,
                Error::DimensionMismatch { .. } | Error::FormMismatch { .. } => 3,
                Error::LevelOutOfRange { .. } => 4,
                Error::EnumerationCapExceeded { .. } => 5,
                _ => 7,
            },
            Failure::Usage(_) => 2,
            Failure::NotPlanar(_) => 6,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::NotPlanar(n) => write!(f, "plot needs a 2D set, got dimension {n}"),
            Failure::Usage(m) => write!(f, "{m}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn emit(text: &str, output: Option<&Path>) -> CliResult<()> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn parse_matrix(text: &str) -> CliResult<Mat> {
    let rows: Vec<Vec<f64>> =
        serde_json::from_str(text).map_err(|e| Failure::Usage(format!("--matrix: {e}")))?;
    Ok(matrix_from_rows(&rows, None, "matrix")?)
}

fn parse_vec(text: &str, what: &str) -> CliResult<Vec<f64>> {
    serde_json::from_str(text).map_err(|e| Failure::Usage(format!("--{what}: {e}")))
}

fn require<'a>(v: &'a Option<String>, flag: &str, op: &str) -> CliResult<&'a str> {
    v.as_deref()
        .ok_or_else(|| Failure::Usage(format!("{op} needs --{flag}")))
}

fn arity(sets: &[HybridZonotope], n: usize, op: &str) -> CliResult<()> {
    if sets.len() == n {
        Ok(())
    } else {
        Err(Failure::Usage(format!("{op} takes {n} input file(s), got {}", sets.len())))
    }
}

fn report_complexity(h: &HybridZonotope) {
    eprintln!("complexity {}", h.complexity());
}

fn run_op(args: &OpArgs) -> CliResult<u8> {
    let sets = args
        .inputs
        .iter()
        .map(|p| read_hybrid(p))
        .collect::<Result<Vec<_>, _>>()?;
    let out = args.output.as_deref();
    let result = match args.name {
        OpName::Minksum => {
            arity(&sets, 2, "minksum")?;
            ops::minkowski_sum(&sets[0], &sets[1])?
        }
        OpName::Map => {
            arity(&sets, 1, "map")?;
            let r = parse_matrix(require(&args.matrix, "matrix", "map")?)?;
            let s = match &args.offset {
                Some(t) => Vector::from_vec(parse_vec(t, "offset")?),
                None => Vector::zeros(r.nrows()),
            };
            ops::affine_map(&sets[0], &r, &s)?
        }
        OpName::Cartprod => {
            arity(&sets, 2, "cartprod")?;
            ops::cartesian_product(&sets[0], &sets[1])?
        }
        OpName::Intersect => {
            arity(&sets, 2, "intersect")?;
            let r = match &args.matrix {
                Some(t) => parse_matrix(t)?,
                None => Mat::identity(sets[1].dim(), sets[0].dim()),
            };
            ops::generalized_intersection(&sets[0], &sets[1], &r)?
        }
        OpName::Halfspace => {
            arity(&sets, 1, "halfspace")?;
            let a = parse_vec(require(&args.normal, "normal", "halfspace")?, "normal")?;
            let k = args
                .k
                .ok_or_else(|| Failure::Usage("halfspace needs --k".into()))?;
            ops::halfspace_intersection(&sets[0], &a, k)?
        }
        OpName::Union => ops::union(&sets)?,
        OpName::UnionPoint => {
            arity(&sets, 1, "union-point")?;
            let p = parse_vec(require(&args.point, "point", "union-point")?, "point")?;
            ops::union_with_point(&sets[0], &p)?
        }
        OpName::Relax => {
            arity(&sets, 1, "relax")?;
            let cz = ops::convex_relaxation(&sets[0]);
            eprintln!("complexity {}", cz.complexity());
            emit(&constrained_to_json(&cz), out)?;
            return Ok(0);
        }
        OpName::ConvertForm => {
            arity(&sets, 1, "convert-form")?;
            let form = args
                .form
                .ok_or_else(|| Failure::Usage("convert-form needs --form".into()))?;
            sets[0].convert_form(form.into())
        }
    };
    report_complexity(&result);
    emit(&hybrid_to_json(&result), out)?;
    Ok(0)
}

fn run_rlt(args: &RltArgs) -> CliResult<u8> {
    let h = read_hybrid(&args.input)?;
    let t = h.complexity();
    let d = if args.hull { h.n_b() } else { args.level.expect("clap requires --level or --hull") };
    let report = if d == 0 && args.hull {
        ComplexityReport {
            nominal: t,
            actual: t,
            level: 0,
        }
    } else {
        complexity_report(t, d)?
    };
    let text = if args.hull {
        let cz = rlt_convex_hull(&h)?;
        eprintln!("complexity {}", cz.complexity());
        constrained_to_json(&cz)
    } else {
        let xd = rlt_sharpen(&h, d)?;
        report_complexity(&xd);
        hybrid_to_json(&xd)
    };
    if let Some(path) = &args.output {
        std::fs::write(path, text)?;
    }
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(0)
}

fn run_check_sharp(args: &SharpArgs) -> CliResult<u8> {
    let h = read_hybrid(&args.input)?;
    report_complexity(&h);
    let r = check_sharpness(&h, args.dirs, args.tol, args.seed, args.cap)?;
    let text = serde_json::to_string_pretty(&r).expect("report serializes");
    emit(&text, args.output.as_deref())?;
    Ok(match r.verdict {
        Verdict::Sharp => 0,
        Verdict::NotSharp => 1,
        Verdict::Inconclusive => 5,
    })
}

/// Tagged polygon for plot output.
struct Tagged {
    tag: String,
    index: usize,
    polygon: Polygon,
}

fn polygons_csv(polys: &[Tagged]) -> String {
    let mut out = String::from("tag,index,x,y\n");
    for p in polys {
        for v in &p.polygon.vertices {
            writeln!(out, "{},{},{},{}", p.tag, p.index, v[0], v[1]).expect("string write");
        }
    }
    out
}

fn polygons_json(polys: &[Tagged]) -> String {
    let list: Vec<_> = polys
        .iter()
        .map(|p| json!({"tag": p.tag, "index": p.index, "vertices": p.polygon.vertices}))
        .collect();
    serde_json::to_string_pretty(&json!({ "polygons": list })).expect("polygons serialize")
}

fn tagged(tag: &str, index: usize, polygon: Polygon) -> Tagged {
    Tagged {
        tag: tag.to_string(),
        index,
        polygon,
    }
}

fn run_plot2d(args: &PlotArgs) -> CliResult<u8> {
    let h = read_hybrid(&args.input)?;
    if h.dim() != 2 {
        return Err(Failure::NotPlanar(h.dim()));
    }
    report_complexity(&h);
    let mut polys = Vec::new();
    if is_empty_capped(&h, args.cap)? {
        eprintln!("warning: set is empty, no polygons");
    } else if let Some(cz) = h.to_constrained() {
        polys.push(tagged("set", 0, boundary_2d(&cz, args.angles)?));
    } else {
        for (k, (_, leaf)) in feasible_leaves(&h, args.cap)?.into_iter().enumerate() {
            polys.push(tagged("leaf", k, boundary_2d(&leaf, args.angles)?));
        }
        let relax = boundary_2d(&ops::convex_relaxation(&h), args.angles)?;
        polys.push(tagged("relax", 0, relax));
        polys.push(tagged("hull", 0, hull_boundary_2d(&h, args.angles, args.cap)?));
    }
    let text = match args.format {
        PlotFormat::Csv => polygons_csv(&polys),
        PlotFormat::Json => polygons_json(&polys),
    };
    emit(text.trim_end(), args.output.as_deref())?;
    Ok(0)
}

fn run_demo(args: &DemoArgs) -> CliResult<u8> {
    let net = match &args.network {
        Some(path) => read_network(path)?,
        None => demo_network(),
    };
    let opts = DemoOptions {
        threshold: args.threshold,
        levels: args.rlt_levels.clone(),
        n_dirs: args.dirs,
        angles: args.angles,
        tol: args.tol,
        seed: args.seed,
        cap: args.cap,
    };
    let out = demo_levelset(&net, &opts)?;
    report_complexity(&out.set);
    if out.report.empty {
        eprintln!("warning: level set is empty");
    }
    let report = serde_json::to_string_pretty(&out.report).expect("report serializes");
    if let Some(dir) = &args.out_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), &report)?;
        let mut polys = Vec::new();
        for (k, leaf) in out.polygons.leaves.iter().enumerate() {
            polys.push(tagged("leaf", k, leaf.clone()));
        }
        if let Some(p) = &out.polygons.relax {
            polys.push(tagged("relax", 0, p.clone()));
        }
        if let Some(p) = &out.polygons.hull {
            polys.push(tagged("hull", 0, p.clone()));
        }
        for (d, p) in &out.polygons.levels {
            polys.push(tagged("rlt", *d, p.clone()));
        }
        std::fs::write(dir.join("polygons.csv"), polygons_csv(&polys))?;
        std::fs::write(dir.join("levelset.json"), hybrid_to_json(&out.set))?;
    }
    println!("{report}");
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Op(a) => run_op(a),
        Command::Rlt(a) => run_rlt(a),
        Command::CheckSharp(a) => run_check_sharp(a),
        Command::Plot2d(a) => run_plot2d(a),
        Command::DemoLevelset(a) => run_demo(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
