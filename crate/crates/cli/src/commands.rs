use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ripsparse::covertree::ContractionTree;
use ripsparse::diagram::{approximate, verify_interleaving};
use ripsparse::generators::{self, SolenoidParams, DEFAULT_SOLENOID_ITERATIONS};
use ripsparse::io::{self, DiagramFile, Meta};
use ripsparse::metric::{CircleOracle, DistanceOracle, EuclideanOracle};
use ripsparse::persistence::{persistence, FiltrationOptions, DEFAULT_MAX_SIMPLICES};
use ripsparse::sparsify::{make_profile, sparsify as sparsify_tree, PrecisionProfile, SparseLengthMatrix};

use crate::plot::{render, PlotOptions};

pub const MAX_SIMPLICES_ENV: &str = "RIPSPARSE_MAX_SIMPLICES";

pub enum Outcome {
    Done,
    Failed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    /// One point per line, Euclidean metric.
    Points,
    /// Lower triangle of a distance matrix, row-major.
    LowerDistance,
    /// Positions on a circle of circumference 1, geodesic metric.
    Circle,
    /// `i j d` edge list with a `.meta.json` sidecar.
    Sparse,
}

#[derive(Args, Serialize)]
pub struct TreeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "points")]
    pub format: Format,
    /// Tree file; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
pub struct SparsifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "points")]
    pub format: Format,
    /// Tree file written by `tree` for the same input.
    #[arg(long)]
    pub tree: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    pub eps1: f64,
    /// Number of leading tree positions to keep, or `all`.
    #[arg(long, default_value = "all")]
    pub keep: String,
    /// Drop edges longer than this.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Edge file; the sidecar goes next to it with extension `.meta.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Serialize)]
pub struct PersistArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "sparse")]
    pub format: Format,
    /// Highest homological dimension.
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Prime characteristic of the coefficient field.
    #[arg(long, default_value_t = 2)]
    pub field: u32,
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Diagram JSON; stdout if omitted. With `--export-only` and a non-sparse
    /// input, the full edge list is written here instead.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write `dim birth death` lines here.
    #[arg(long)]
    pub pairs: Option<PathBuf>,
    /// Stop once the edge list exists, without reducing.
    #[arg(long)]
    pub export_only: bool,
}

#[derive(Args, Serialize)]
pub struct PlotArgs {
    /// Diagram JSON written by `persist`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Homological dimension to draw; all if omitted.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub log_plot: bool,
    /// Smallest scale shown.
    #[arg(long)]
    pub clip: Option<f64>,
    #[arg(long)]
    pub overlay_eps0: Option<f64>,
    #[arg(long)]
    pub overlay_eps1: Option<f64>,
    /// Also write the boxes and classes as JSON.
    #[arg(long)]
    pub approx_out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
pub struct VerifyArgs {
    /// Exact diagram JSON.
    #[arg(long)]
    pub full: PathBuf,
    /// Sparse diagram JSON; its metadata supplies the error profile.
    #[arg(long)]
    pub sparse: PathBuf,
    /// Report JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dataset {
    /// `n` equispaced circle positions (use `--format circle` downstream).
    Circle,
    Solenoid,
    /// Uniform points in the unit cube.
    Cloud,
}

#[derive(Args, Serialize)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub dataset: Dataset,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = DEFAULT_SOLENOID_ITERATIONS)]
    pub iterations: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn config(command: &str, args: &impl Serialize) -> Value {
    let mut v = serde_json::to_value(args).expect("arguments serialize");
    v.as_object_mut()
        .expect("arguments are a struct")
        .insert("command".into(), json!(command));
    v
}

fn config_line(config: &Value) -> String {
    format!("# {config}\n")
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(ripsparse::Error::from)
        .with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)
        .map_err(ripsparse::Error::from)
        .with_context(|| format!("writing {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("meta.json")
}

fn load_oracle(path: &Path, format: Format) -> Result<Box<dyn DistanceOracle>> {
    let text = read(path)?;
    let oracle: Box<dyn DistanceOracle> = match format {
        Format::Points => Box::new(EuclideanOracle::new(&io::parse_points(&text)?)?),
        Format::LowerDistance => Box::new(io::parse_lower_distance(&text)?),
        Format::Circle => Box::new(CircleOracle::new(io::parse_angles(&text)?)?),
        Format::Sparse => bail!(ripsparse::Error::InvalidInput(
            "this command needs points or distances, not a sparse edge list".into()
        )),
    };
    Ok(oracle)
}

fn max_simplices() -> Result<u64> {
    match std::env::var(MAX_SIMPLICES_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| {
            ripsparse::Error::InvalidInput(format!("{MAX_SIMPLICES_ENV} must be a count, got {s:?}")).into()
        }),
        Err(_) => Ok(DEFAULT_MAX_SIMPLICES),
    }
}

fn read_meta(path: &Path) -> Result<Meta> {
    let side = sidecar_path(path);
    let text = read(&side).context("the sparse file needs its metadata sidecar")?;
    Ok(serde_json::from_str(&text).map_err(ripsparse::Error::from)?)
}

pub fn tree(args: &TreeArgs) -> Result<Outcome> {
    let oracle = load_oracle(&args.input, args.format)?;
    let tree = ContractionTree::build(&&*oracle);
    let mut text = config_line(&config("tree", args));
    text.push_str(&tree.to_text());
    emit(args.out.as_deref(), &text)?;

    let finite: Vec<f64> = tree.times()[1..].to_vec();
    eprintln!("points: {}", tree.len());
    eprintln!("R: {}", tree.radius());
    if let (Some(first), Some(last)) = (finite.first(), finite.last()) {
        eprintln!("rad: max {first}, median {}, min {last}", finite[finite.len() / 2]);
    }
    Ok(Outcome::Done)
}

fn parse_keep(keep: &str, n: usize) -> Result<usize> {
    if keep == "all" {
        return Ok(n);
    }
    let k: usize = keep
        .parse()
        .map_err(|_| ripsparse::Error::InvalidInput(format!("--keep must be a count or `all`, got {keep:?}")))?;
    if k == 0 || k > n {
        bail!(ripsparse::Error::InvalidInput(format!("--keep {k} outside 1..={n}")));
    }
    Ok(k)
}

pub fn sparsify(args: &SparsifyArgs) -> Result<Outcome> {
    let oracle = load_oracle(&args.input, args.format)?;
    let tree = ContractionTree::from_text(&read(&args.tree)?).context("parsing the tree file")?;
    if tree.len() != oracle.len() {
        bail!(ripsparse::Error::InvalidInput(format!(
            "tree has {} points but the input has {}",
            tree.len(),
            oracle.len()
        )));
    }
    let keep = parse_keep(&args.keep, tree.len())?;
    let (mut profile, _) = make_profile(&tree, keep, args.eps1)?;
    profile.threshold = args.threshold;
    let matrix = sparsify_tree(&tree, &&*oracle, &profile);
    let meta = Meta::new(&profile, config("sparsify", args));
    write(&args.out, &io::write_sparse(&matrix))?;
    write(&sidecar_path(&args.out), &io::to_json(&meta)?)?;

    let full = keep * keep.saturating_sub(1) / 2;
    eprintln!("edges: {} of {full} ({:.4})", matrix.edges.len(), ratio(matrix.edges.len(), full));
    eprintln!("eps0: {}  eps1: {}  R: {}", profile.eps0, profile.eps1, profile.radius);
    Ok(Outcome::Done)
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        1.0
    } else {
        a as f64 / b as f64
    }
}

pub fn persist(args: &PersistArgs) -> Result<Outcome> {
    let config = config("persist", args);
    let (mut matrix, upstream) = if args.format == Format::Sparse {
        let meta = read_meta(&args.input)?;
        let matrix = io::read_sparse(&read(&args.input)?, &meta)?;
        (matrix, meta.config)
    } else {
        let oracle = load_oracle(&args.input, args.format)?;
        (SparseLengthMatrix::full(&&*oracle), Value::Null)
    };
    if let Some(t) = args.threshold {
        matrix.apply_threshold(t);
    }

    if args.export_only {
        if args.format != Format::Sparse {
            let out = args
                .out
                .as_deref()
                .ok_or_else(|| ripsparse::Error::InvalidInput("--export-only needs --out".into()))?;
            write(out, &io::write_sparse(&matrix))?;
            write(&sidecar_path(out), &io::to_json(&Meta::new(&matrix.profile, config))?)?;
        }
        eprintln!("edges: {}", matrix.edges.len());
        return Ok(Outcome::Done);
    }

    let options = FiltrationOptions {
        max_simplices: max_simplices()?,
        ..FiltrationOptions::new(args.dim + 1)
    };
    let diagram = persistence(&matrix, args.dim, args.field, &options)?;
    let mut run = config;
    if !upstream.is_null() {
        run.as_object_mut().unwrap().insert("upstream".into(), upstream);
    }
    let file = DiagramFile::new(&diagram, Some(Meta::new(&matrix.profile, run)));
    emit(args.out.as_deref(), &io::to_json(&file)?)?;
    if let Some(p) = &args.pairs {
        write(p, &io::write_pairs(&diagram))?;
    }
    for k in 0..=args.dim {
        eprintln!("H{k}: {} entries", diagram.dimension(k).count());
    }
    Ok(Outcome::Done)
}

pub fn plot(args: &PlotArgs) -> Result<Outcome> {
    let file = io::read_diagram(&read(&args.input)?)?;
    let mut diagram = file.diagram();
    if let Some(k) = args.dim {
        diagram = diagram.restrict(k);
    }
    let profile = match &file.meta {
        Some(meta) => meta.profile(),
        None => {
            eprintln!("warning: no profile metadata; drawing plain points");
            PrecisionProfile::identity(0)
        }
    };
    if let Some(c) = args.clip {
        if !(c > 0.0) && args.log_plot {
            bail!(ripsparse::Error::InvalidInput("--clip must be positive for log axes".into()));
        }
    }
    let overlay = match (args.overlay_eps0, args.overlay_eps1) {
        (None, None) => None,
        (e0, e1) => Some(PrecisionProfile {
            eps0: e0.unwrap_or(profile.eps0),
            eps1: e1.unwrap_or(profile.eps1),
            ..profile
        }),
    };
    let approx = approximate(&diagram, &profile);
    let svg = render(
        &approx,
        &PlotOptions {
            log: args.log_plot,
            clip: args.clip,
            overlay,
        },
    );
    write(&args.out, &svg)?;
    if let Some(p) = &args.approx_out {
        let out = io::ApproxDiagramFile::new(&approx, config("plot", args));
        write(p, &io::to_json(&out)?)?;
    }
    let definite = approx.definite().count();
    eprintln!("entries: {}  definite: {definite}", approx.entries.len());
    Ok(Outcome::Done)
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome> {
    let full = io::read_diagram(&read(&args.full)?)?;
    let sparse = io::read_diagram(&read(&args.sparse)?)?;
    if full.field != sparse.field {
        bail!(ripsparse::Error::InvalidInput(format!(
            "field mismatch: full diagram over Z/{}, sparse over Z/{}",
            full.field, sparse.field
        )));
    }
    let profile = match &sparse.meta {
        Some(meta) => meta.profile(),
        None => {
            eprintln!("warning: sparse diagram has no profile metadata; assuming an exact one");
            PrecisionProfile::identity(0)
        }
    };
    let report = verify_interleaving(&full.diagram(), &sparse.diagram(), |r| profile.interleaving_psi(r));

    println!("pairs checked: {}", report.pairs_checked);
    println!("rank violations: {}", report.violation_count);
    for x in &report.violations {
        println!(
            "  H{} {:?} at s = {}, t = {}: {} > {}",
            x.dim, x.check, x.s, x.t, x.lhs, x.rhs
        );
    }
    let matching = match &report.matching {
        Ok(m) => {
            println!("matching: {} pairs", m.pairs.len());
            json!({"pairs": m.pairs, "unmatched_full": m.unmatched_v, "unmatched_sparse": m.unmatched_w})
        }
        Err(f) => {
            println!("matching: failed");
            for &i in &f.uncovered_v {
                let e = full.entries[i];
                println!("  alive full entry H{} ({}, {}] has no partner", e.dim, e.birth, e.death);
            }
            for &j in &f.uncovered_w {
                let e = sparse.entries[j];
                println!("  alive sparse entry H{} ({}, {}] has no partner", e.dim, e.birth, e.death);
            }
            json!({"uncovered_full": f.uncovered_v, "uncovered_sparse": f.uncovered_w})
        }
    };
    let passed = report.passed();
    println!("{}", if passed { "PASS" } else { "FAIL" });
    if let Some(out) = &args.out {
        let doc = json!({
            "passed": passed,
            "pairs_checked": report.pairs_checked,
            "violation_count": report.violation_count,
            "violations": report.violations,
            "matching": matching,
            "profile": Meta::new(&profile, Value::Null),
            "config": config("verify", args),
        });
        write(out, &io::to_json(&doc)?)?;
    }
    Ok(if passed { Outcome::Done } else { Outcome::Failed })
}

pub fn generate(args: &GenerateArgs) -> Result<Outcome> {
    let mut text = config_line(&config("generate", args));
    match args.dataset {
        Dataset::Circle => {
            for a in generators::circle_sample(args.n)? {
                text.push_str(&format!("{a}\n"));
            }
        }
        Dataset::Solenoid => {
            let params = SolenoidParams {
                iterations: args.iterations,
                n: args.n,
                seed: args.seed,
            };
            text.push_str(&io::write_points(&generators::solenoid_sample(&params)?));
        }
        Dataset::Cloud => {
            text.push_str(&io::write_points(&generators::random_cloud(args.n, args.dim, args.seed)?));
        }
    }
    emit(args.out.as_deref(), &text)?;
    Ok(Outcome::Done)
}
